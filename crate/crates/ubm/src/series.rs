//! Exact truncated formal power-series arithmetic over complex coefficients.
//!
//! A [`TruncatedSeries`] holds coefficients `c_0..c_N` for a fixed order `N`
//! chosen by the caller; all arithmetic is exact modulo `z^{N+1}`. Mixing
//! orders is an error rather than an implicit truncation — silent truncation
//! hides convolution-order bugs. Coefficients are complex even where the
//! applications have real moments, because general input measures need not
//! be symmetric.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("division by a series with zero constant term")]
    DivisionByZeroConstantTerm,
    #[error("composition requires an inner series with zero constant term")]
    NonzeroConstantTerm,
}

/// A formal power series truncated at a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Build a series from coefficients `c_0..c_N`; the order is the length
    /// minus one.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least c_0");
        TruncatedSeries { coeffs }
    }

    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    /// The constant series `c` of the given order.
    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`, the identity under composition.
    pub fn identity(order: usize) -> Self {
        assert!(order >= 1, "the identity needs order >= 1");
        let mut s = Self::zero(order);
        s.coeffs[1] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient `c_k`; panics if `k` exceeds the order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn check_order(&self, rhs: &Self) -> Result<(), SeriesError> {
        if self.order() != rhs.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: rhs.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(TruncatedSeries { coeffs })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(TruncatedSeries { coeffs })
    }

    /// Multiply every coefficient by `k`.
    pub fn scale(&self, k: Complex64) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_order(rhs)?;
        let n = self.order();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=k {
                acc += self.coeffs[j] * rhs.coeffs[k - j];
            }
            *c = acc;
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// Series division: the unique `d` with `rhs · d = self` through the
    /// common order. Requires `rhs.c_0 ≠ 0`.
    pub fn div(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_order(rhs)?;
        let b0 = rhs.coeffs[0];
        if b0.norm() == 0.0 {
            return Err(SeriesError::DivisionByZeroConstantTerm);
        }
        let n = self.order();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in 0..=n {
            let mut acc = self.coeffs[k];
            for (j, c) in coeffs.iter().enumerate().take(k) {
                acc -= c * rhs.coeffs[k - j];
            }
            coeffs[k] = acc / b0;
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// Horner-style composition `self(inner)` truncated at the common order.
    /// Requires `inner.c_0 = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        self.check_order(inner)?;
        if inner.coeffs[0].norm() != 0.0 {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut acc = Self::constant(self.coeffs[n], n);
        for k in (0..n).rev() {
            acc = acc.mul(inner).expect("orders agree by construction");
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_series(vals: &[f64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(vals.iter().map(|&v| c(v, 0.0)).collect())
    }

    #[test]
    fn mul_squares_one_plus_z() {
        let a = real_series(&[1.0, 1.0, 0.0]);
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq, real_series(&[1.0, 2.0, 1.0]));
    }

    #[test]
    fn div_recovers_geometric_series() {
        let n = 8;
        let mut num = TruncatedSeries::zero(n);
        num = num.add(&TruncatedSeries::identity(n)).unwrap();
        let mut den = TruncatedSeries::constant(c(1.0, 0.0), n);
        den.coeffs[1] = c(-1.0, 0.0);
        let q = num.div(&den).unwrap();
        for k in 1..=n {
            assert!((q.coeff(k) - c(1.0, 0.0)).norm() < 1e-15);
        }
        assert!(q.coeff(0).norm() < 1e-15);
    }

    #[test]
    fn compose_with_identity_on_either_side() {
        let f = real_series(&[0.4, -1.0, 2.0, 0.5, -0.25]);
        let id = TruncatedSeries::identity(4);
        assert!(id.compose(&f).is_err()); // f has nonzero c_0
        let g = real_series(&[0.0, -1.0, 2.0, 0.5, -0.25]);
        let left = id.compose(&g).unwrap();
        let right = g.compose(&id).unwrap();
        for k in 0..=4 {
            assert!((left.coeff(k) - g.coeff(k)).norm() < 1e-15);
            assert!((right.coeff(k) - g.coeff(k)).norm() < 1e-15);
        }
    }

    #[test]
    fn compose_geometric_with_z_plus_z_squared() {
        // z/(1-z) composed with z + z^2, truncated at order 4:
        // z + 2z^2 + 3z^3 + 5z^4.
        let outer = real_series(&[0.0, 1.0, 1.0, 1.0, 1.0]);
        let inner = real_series(&[0.0, 1.0, 1.0, 0.0, 0.0]);
        let composed = outer.compose(&inner).unwrap();
        let expected = [0.0, 1.0, 2.0, 3.0, 5.0];
        for (k, &e) in expected.iter().enumerate() {
            assert!((composed.coeff(k) - c(e, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn mixed_orders_are_rejected() {
        let a = real_series(&[1.0, 2.0]);
        let b = real_series(&[1.0, 2.0, 3.0]);
        assert_eq!(
            a.mul(&b),
            Err(SeriesError::OrderMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn division_by_zero_constant_term_is_rejected() {
        let a = real_series(&[1.0, 2.0]);
        let b = real_series(&[0.0, 1.0]);
        assert_eq!(a.div(&b), Err(SeriesError::DivisionByZeroConstantTerm));
    }

    fn unit_coeff() -> impl Strategy<Value = Complex64> {
        // coefficients of unit magnitude
        (0.0..std::f64::consts::TAU).prop_map(|phi| Complex64::from_polar(1.0, phi))
    }

    fn unit_series(order: usize, zero_constant: bool) -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec(unit_coeff(), order + 1).prop_map(move |mut v| {
            if zero_constant {
                v[0] = Complex64::new(0.0, 0.0);
            }
            TruncatedSeries::from_coeffs(v)
        })
    }

    fn assert_close(a: &TruncatedSeries, b: &TruncatedSeries, tol: f64) {
        for k in 0..=a.order() {
            let scale = 1.0_f64.max(a.coeff(k).norm()).max(b.coeff(k).norm());
            assert!(
                (a.coeff(k) - b.coeff(k)).norm() <= tol * scale,
                "coefficient {k} differs: {} vs {}",
                a.coeff(k),
                b.coeff(k)
            );
        }
    }

    proptest! {
        #[test]
        fn mul_is_associative(
            a in unit_series(10, false),
            b in unit_series(10, false),
            q in unit_series(10, false),
        ) {
            let left = a.mul(&b).unwrap().mul(&q).unwrap();
            let right = a.mul(&b.mul(&q).unwrap()).unwrap();
            assert_close(&left, &right, 1e-12);
        }

        #[test]
        fn compose_is_associative(
            f in unit_series(10, false),
            g in unit_series(10, true),
            h in unit_series(10, true),
        ) {
            let left = f.compose(&g).unwrap().compose(&h).unwrap();
            let right = f.compose(&g.compose(&h).unwrap()).unwrap();
            assert_close(&left, &right, 1e-12);
        }

        #[test]
        fn mul_div_round_trip(
            a in unit_series(8, false),
            b in unit_series(8, false),
        ) {
            let q = b.div(&a).unwrap();
            let back = a.mul(&q).unwrap();
            assert_close(&back, &b, 1e-12);
        }
    }
}
