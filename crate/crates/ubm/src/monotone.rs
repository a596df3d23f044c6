//! The spectral measure `μ_t` of the monotone unitary Brownian motion:
//! Legendre moment formula, density, support arc, and a quadrature
//! cross-check that re-derives the moments by integrating the density.
//!
//! For `t > 0` the measure is absolutely continuous with respect to
//! normalized Haar measure, with density
//! `√2·cos(θ/2)/√(cos θ − x_t)` on the arc where `cos θ > x_t`,
//! `x_t = 2e^{−t/2} − 1`. The density diverges like an inverse square root
//! at the arc endpoints, which is why the quadrature below changes variables
//! before integrating.

use num_complex::Complex64;
use thiserror::Error;

use crate::poly::legendre_eval;
use crate::quad;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonotoneError {
    #[error("the measure at t = 0 is a point mass and has no density")]
    DensityAtTimeZero,
    #[error("moment quadrature did not converge (last value {last_re}+{last_im}i)")]
    QuadratureNonConvergence { last_re: f64, last_im: f64 },
}

/// Support data of `μ_t`: the cosine bound `x_t = 2e^{−t/2} − 1` and the
/// half-angle `arccos(x_t)` of the support arc around 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneMeasure {
    t: f64,
    cos_bound: f64,
    half_angle: f64,
}

impl MonotoneMeasure {
    pub fn new(t: f64) -> Self {
        assert!(t >= 0.0, "time must be nonnegative");
        let cos_bound = 2.0 * (-t / 2.0).exp() - 1.0;
        MonotoneMeasure {
            t,
            cos_bound,
            half_angle: cos_bound.acos(),
        }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// `x_t = 2e^{−t/2} − 1`; the support is `{θ : cos θ ≥ x_t}`.
    pub fn cos_bound(&self) -> f64 {
        self.cos_bound
    }

    /// Half-opening angle of the support arc, `arccos(x_t) ∈ [0, π]`.
    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }
}

/// A pointwise density value; the support endpoints are structural
/// inverse-square-root singularities and are reported as [`Unbounded`]
/// rather than as a large float.
///
/// [`Unbounded`]: DensityValue::Unbounded
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityValue {
    Finite(f64),
    Unbounded,
}

impl DensityValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            DensityValue::Finite(v) => Some(v),
            DensityValue::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, DensityValue::Unbounded)
    }
}

/// `n`-th moment of `μ_t` via the Legendre formula
/// `m_n = (P_n(x_t) + P_{n−1}(x_t))/2`, `x_t = 2e^{−t/2} − 1`.
///
/// The measure is symmetric, so the moments are real.
pub fn monotone_moment(t: f64, n: usize) -> f64 {
    assert!(t >= 0.0, "time must be nonnegative");
    assert!(n >= 1, "moments are indexed from 1");
    let x = 2.0 * (-t / 2.0).exp() - 1.0;
    0.5 * (legendre_eval(n, x) + legendre_eval(n - 1, x))
}

/// Support arc `(−θ_t, θ_t)` with `θ_t = arccos(2e^{−t/2} − 1)`; degenerate
/// at `t = 0` (point mass at 1) and approaching the full circle as `t → ∞`.
pub fn monotone_support(t: f64) -> (f64, f64) {
    let m = MonotoneMeasure::new(t);
    (-m.half_angle(), m.half_angle())
}

/// Density of `μ_t` at angle `θ ∈ (−π, π)` with respect to normalized Haar
/// measure. Zero outside the support arc; [`DensityValue::Unbounded`] exactly
/// on the arc endpoints. Rejected at `t = 0`, where the measure is a point
/// mass.
pub fn monotone_density(t: f64, theta: f64) -> Result<DensityValue, MonotoneError> {
    assert!(t >= 0.0, "time must be nonnegative");
    if t == 0.0 {
        return Err(MonotoneError::DensityAtTimeZero);
    }
    debug_assert!(theta.abs() < std::f64::consts::PI + 1e-12);
    let x = 2.0 * (-t / 2.0).exp() - 1.0;
    let gap = theta.cos() - x;
    if gap < 0.0 {
        Ok(DensityValue::Finite(0.0))
    } else if gap == 0.0 {
        Ok(DensityValue::Unbounded)
    } else {
        Ok(DensityValue::Finite(
            std::f64::consts::SQRT_2 * (theta / 2.0).cos() / gap.sqrt(),
        ))
    }
}

/// `n`-th moment of `μ_t` recomputed by integrating the density:
/// `(1/2π) ∫ e^{inθ} ρ_t(θ) dθ` over the support arc.
///
/// The substitution `cos θ − x_t = u²` removes the inverse-square-root
/// endpoint singularity of the density; the leftover `1/√(U² − u²)` factor
/// at the opposite end is removed exactly by `u = U sin φ`. Both steps
/// combine into `θ(φ) = 2·arcsin(sin(θ_t/2)·sin φ)`, and the integral
/// becomes `(1/π) ∫_{−π/2}^{π/2} e^{i n θ(φ)} dφ` with a smooth integrand,
/// handled by composite Simpson with doubling refinement starting from
/// `grid` panels.
pub fn monotone_moment_by_quadrature(
    t: f64,
    n: usize,
    grid: usize,
) -> Result<Complex64, MonotoneError> {
    assert!(t > 0.0, "quadrature needs t > 0");
    assert!(grid >= 2, "grid must have at least two panels");
    let measure = MonotoneMeasure::new(t);
    let s = (measure.half_angle() / 2.0).sin();
    let f = |phi: f64| {
        let theta = 2.0 * (s * phi.sin()).asin();
        Complex64::from_polar(1.0, n as f64 * theta)
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    match quad::simpson_refine(&f, -half_pi, half_pi, grid, 1e-11, 18) {
        Some(v) => Ok(v / std::f64::consts::PI),
        None => {
            let last = quad::simpson(&f, -half_pi, half_pi, grid) / std::f64::consts::PI;
            Err(MonotoneError::QuadratureNonConvergence {
                last_re: last.re,
                last_im: last.im,
            })
        }
    }
}
