//! Multiplicative monotone and boolean convolution of measures given by
//! moment sequences, through the series transform calculus: monotone
//! convolution composes K-transforms, boolean convolution multiplies
//! F-transforms.
//!
//! Inputs are moment sequences, not measures; positive-definiteness of
//! arbitrary input is not verified (that is a Toeplitz positivity problem
//! and out of scope here). Only the circle bound `|m_k| ≤ 1` is enforced.

use num_complex::Complex64;
use thiserror::Error;

use crate::boolean::boolean_moment;
use crate::monotone::monotone_moment;
use crate::series::SeriesError;
use crate::transforms;

/// Orders above this make the series composition round-off exceed ~1e−9.
pub const MAX_CONVOLUTION_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConvolutionError {
    #[error("moment {index} has modulus {modulus}, above 1 for a circle measure")]
    MomentOutOfRange { index: usize, modulus: f64 },
    #[error("a moment sequence needs at least one moment")]
    Empty,
    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Complex moments `m_1..m_N` of a probability measure on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    m: Vec<Complex64>,
}

impl MomentSequence {
    /// Build from `m_1..m_N`, checking the circle bound `|m_k| ≤ 1`
    /// (with a small tolerance for inputs produced by other computations).
    pub fn new(m: Vec<Complex64>) -> Result<Self, ConvolutionError> {
        if m.is_empty() {
            return Err(ConvolutionError::Empty);
        }
        for (i, v) in m.iter().enumerate() {
            if !(v.norm() <= 1.0 + 1e-9) {
                return Err(ConvolutionError::MomentOutOfRange {
                    index: i + 1,
                    modulus: v.norm(),
                });
            }
        }
        Ok(MomentSequence { m })
    }

    pub fn from_real(m: &[f64]) -> Result<Self, ConvolutionError> {
        Self::new(m.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub(crate) fn from_raw(m: Vec<Complex64>) -> Self {
        MomentSequence { m }
    }

    /// The point mass at 1: all moments equal 1. It is the unit for both
    /// convolutions.
    pub fn point_mass_at_one(order: usize) -> Self {
        MomentSequence {
            m: vec![Complex64::new(1.0, 0.0); order],
        }
    }

    /// Normalized Haar measure: all moments vanish. It absorbs under
    /// boolean convolution.
    pub fn haar(order: usize) -> Self {
        MomentSequence {
            m: vec![Complex64::new(0.0, 0.0); order],
        }
    }

    /// Moments of the monotone Brownian motion marginal `μ_t`.
    pub fn monotone_bm(t: f64, order: usize) -> Self {
        MomentSequence {
            m: (1..=order)
                .map(|n| Complex64::new(monotone_moment(t, n), 0.0))
                .collect(),
        }
    }

    /// Moments of the boolean Brownian motion marginal `ν_t`.
    pub fn boolean_bm(t: f64, order: usize) -> Self {
        MomentSequence {
            m: (1..=order)
                .map(|n| Complex64::new(boolean_moment(t, n), 0.0))
                .collect(),
        }
    }

    /// Number of stored moments, `N`.
    pub fn order(&self) -> usize {
        self.m.len()
    }

    /// `m_1..m_N` as a slice.
    pub fn moments(&self) -> &[Complex64] {
        &self.m
    }

    /// `m_k` for `1 ≤ k ≤ N`.
    pub fn moment(&self, k: usize) -> Complex64 {
        assert!(k >= 1 && k <= self.m.len(), "moment index out of range");
        self.m[k - 1]
    }
}

fn check_orders(a: &MomentSequence, b: &MomentSequence) -> Result<(), ConvolutionError> {
    if a.order() != b.order() {
        return Err(ConvolutionError::Series(SeriesError::OrderMismatch {
            left: a.order(),
            right: b.order(),
        }));
    }
    if a.order() > MAX_CONVOLUTION_ORDER {
        return Err(ConvolutionError::OrderTooLarge {
            order: a.order(),
            max: MAX_CONVOLUTION_ORDER,
        });
    }
    Ok(())
}

/// Moments of the multiplicative monotone convolution through order `N`:
/// ψ → K for both inputs, compose, K → ψ, read off coefficients.
pub fn monotone_convolve(
    m1: &MomentSequence,
    m2: &MomentSequence,
) -> Result<MomentSequence, ConvolutionError> {
    check_orders(m1, m2)?;
    let k1 = transforms::k_from_psi(&transforms::psi_from_moments(m1))?;
    let k2 = transforms::k_from_psi(&transforms::psi_from_moments(m2))?;
    let k = k1.compose(&k2)?;
    Ok(transforms::moments_from_psi(&transforms::psi_from_k(&k)?))
}

/// Moments of the multiplicative boolean convolution through order `N`:
/// ψ → F for both inputs, multiply, F → ψ.
pub fn boolean_convolve(
    m1: &MomentSequence,
    m2: &MomentSequence,
) -> Result<MomentSequence, ConvolutionError> {
    check_orders(m1, m2)?;
    let f1 = transforms::f_from_psi(&transforms::psi_from_moments(m1))?;
    let f2 = transforms::f_from_psi(&transforms::psi_from_moments(m2))?;
    let f = f1.mul(&f2)?;
    Ok(transforms::moments_from_psi(&transforms::psi_from_f(&f)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_sequences_close(a: &MomentSequence, b: &MomentSequence, tol: f64) {
        assert_eq!(a.order(), b.order());
        for k in 1..=a.order() {
            assert!(
                (a.moment(k) - b.moment(k)).norm() < tol,
                "moment {k}: {} vs {}",
                a.moment(k),
                b.moment(k)
            );
        }
    }

    #[test]
    fn point_mass_is_the_unit_for_both_convolutions() {
        let delta = MomentSequence::point_mass_at_one(10);
        let m = MomentSequence::monotone_bm(0.7, 10);
        assert_sequences_close(&monotone_convolve(&delta, &m).unwrap(), &m, 1e-13);
        assert_sequences_close(&monotone_convolve(&m, &delta).unwrap(), &m, 1e-13);
        assert_sequences_close(&boolean_convolve(&delta, &m).unwrap(), &m, 1e-13);
        assert_sequences_close(&boolean_convolve(&m, &delta).unwrap(), &m, 1e-13);
    }

    #[test]
    fn haar_absorbs_under_boolean_convolution() {
        let haar = MomentSequence::haar(8);
        let m = MomentSequence::boolean_bm(1.3, 8);
        let out = boolean_convolve(&haar, &m).unwrap();
        for k in 1..=8 {
            assert!(out.moment(k).norm() < 1e-14);
        }
    }

    #[test]
    fn monotone_family_is_a_convolution_semigroup() {
        let a = MomentSequence::monotone_bm(0.5, 12);
        let b = MomentSequence::monotone_bm(1.0, 12);
        let c = MomentSequence::monotone_bm(1.5, 12);
        assert_sequences_close(&monotone_convolve(&a, &b).unwrap(), &c, 1e-9);
    }

    #[test]
    fn boolean_family_is_a_convolution_semigroup() {
        let a = MomentSequence::boolean_bm(0.5, 12);
        let b = MomentSequence::boolean_bm(1.0, 12);
        let c = MomentSequence::boolean_bm(1.5, 12);
        assert_sequences_close(&boolean_convolve(&a, &b).unwrap(), &c, 1e-9);
    }

    #[test]
    fn monotone_convolution_is_associative() {
        // fixed pseudo-random unit-circle-measure moments: mixtures of two
        // point masses stay genuine moment sequences
        let mix = |alpha: f64, beta: f64| {
            MomentSequence::new(
                (1..=8)
                    .map(|k| {
                        0.5 * Complex64::from_polar(1.0, alpha * k as f64)
                            + 0.5 * Complex64::from_polar(1.0, beta * k as f64)
                    })
                    .collect(),
            )
            .unwrap()
        };
        let (a, b, q) = (mix(0.4, -1.1), mix(2.0, 0.3), mix(-0.8, 1.9));
        let left = monotone_convolve(&monotone_convolve(&a, &b).unwrap(), &q).unwrap();
        let right = monotone_convolve(&a, &monotone_convolve(&b, &q).unwrap()).unwrap();
        assert_sequences_close(&left, &right, 1e-10);

        let bleft = boolean_convolve(&boolean_convolve(&a, &b).unwrap(), &q).unwrap();
        let bright = boolean_convolve(&a, &boolean_convolve(&b, &q).unwrap()).unwrap();
        assert_sequences_close(&bleft, &bright, 1e-10);
        // boolean convolution is also commutative
        let brev = boolean_convolve(&q, &boolean_convolve(&b, &a).unwrap()).unwrap();
        assert_sequences_close(&bleft, &brev, 1e-10);
    }

    #[test]
    fn outputs_respect_the_circle_bound_for_genuine_inputs() {
        let a = MomentSequence::monotone_bm(0.3, 16);
        let b = MomentSequence::monotone_bm(2.1, 16);
        let out = monotone_convolve(&a, &b).unwrap();
        for k in 1..=16 {
            assert!(out.moment(k).norm() <= 1.0 + 1e-9);
        }
        let a = MomentSequence::boolean_bm(0.3, 16);
        let b = MomentSequence::boolean_bm(2.1, 16);
        let out = boolean_convolve(&a, &b).unwrap();
        for k in 1..=16 {
            assert!(out.moment(k).norm() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn constructor_enforces_the_circle_bound() {
        assert!(matches!(
            MomentSequence::new(vec![c(1.5, 0.0)]),
            Err(ConvolutionError::MomentOutOfRange { index: 1, .. })
        ));
        assert!(matches!(
            MomentSequence::new(vec![]),
            Err(ConvolutionError::Empty)
        ));
    }

    #[test]
    fn mixed_orders_and_oversized_orders_are_rejected() {
        let a = MomentSequence::haar(4);
        let b = MomentSequence::haar(5);
        assert!(matches!(
            monotone_convolve(&a, &b),
            Err(ConvolutionError::Series(SeriesError::OrderMismatch { .. }))
        ));
        let big = MomentSequence::haar(65);
        assert!(matches!(
            boolean_convolve(&big, &big),
            Err(ConvolutionError::OrderTooLarge { .. })
        ));
    }
}
