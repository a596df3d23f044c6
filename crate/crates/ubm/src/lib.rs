//! Numerical toolkit for the spectral measures of the monotone and boolean
//! unitary Brownian motions on the unit circle.
//!
//! The monotone family `μ_t` is absolutely continuous with respect to the
//! Haar measure and supported on an arc around 1 that opens up with `t`;
//! the boolean family `ν_t` is purely atomic, with atoms accumulating at 1.
//! The crate computes both measures three independent ways and cross-checks
//! the routes against each other:
//!
//! * closed forms — Legendre/Laguerre moment formulas ([`monotone`],
//!   [`boolean`]), the transform calculus ψ/K/F/Herglotz and the semigroup
//!   maps `Z_t`, `F_t` ([`transforms`]);
//! * differential equations — the scalar flow, the generating-function flow
//!   and the triangular moment system, integrated with fixed-step RK4
//!   ([`ode`]);
//! * an operator model — the boolean Fock space realization on a time grid,
//!   with vacuum moments read off dense block operators ([`fock`]).
//!
//! [`convolution`] implements the general multiplicative monotone and boolean
//! convolutions on moment sequences, and [`series`] supplies the exact
//! truncated power-series arithmetic everything above runs on.
//!
//! ```
//! use ubm::boolean::boolean_moment;
//! use ubm::fock::moment_recursion;
//! use ubm::monotone::{monotone_moment, monotone_moment_by_quadrature};
//!
//! // monotone: closed form vs quadrature of the density
//! let t = 1.0;
//! let q = monotone_moment_by_quadrature(t, 4, 64).unwrap();
//! assert!((q.re - monotone_moment(t, 4)).abs() < 1e-10);
//!
//! // boolean: closed form vs the operator-model recursion
//! let rec = moment_recursion(t, 4);
//! assert!((rec[3] - boolean_moment(t, 4)).abs() < 1e-14);
//! ```

// negated float comparisons like `!(x > 0.0)` are NaN-rejecting input guards
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;
use std::sync::Arc;

pub mod boolean;
pub mod convolution;
pub mod fock;
pub mod monotone;
pub mod ode;
pub mod poly;
mod quad;
pub mod series;
pub mod transforms;

pub use boolean::AtomList;
pub use convolution::MomentSequence;
pub use series::TruncatedSeries;

/// A probability measure on the unit circle, in the forms the toolkit
/// works with.
///
/// Angles parameterize the circle as `e^{iθ}`, `θ ∈ (−π, π]`; densities are
/// taken with respect to the normalized Haar measure `dθ/2π`.
#[derive(Clone)]
pub enum CircleMeasure {
    /// Absolutely continuous part given by a pointwise density sampler on a
    /// support arc `(theta_min, theta_max)`; the sampler must integrate to 1
    /// against `dθ/2π`.
    AbsolutelyContinuous {
        density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        support: (f64, f64),
    },
    /// Purely atomic measure made of conjugate-symmetric atom pairs.
    Atomic(AtomList),
    /// The monotone unitary Brownian motion marginal at time `t`.
    MonotoneBm(f64),
    /// The boolean unitary Brownian motion marginal at time `t`.
    BooleanBm(f64),
}

impl fmt::Debug for CircleMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircleMeasure::AbsolutelyContinuous { support, .. } => f
                .debug_struct("AbsolutelyContinuous")
                .field("support", support)
                .finish_non_exhaustive(),
            CircleMeasure::Atomic(atoms) => f.debug_tuple("Atomic").field(atoms).finish(),
            CircleMeasure::MonotoneBm(t) => f.debug_tuple("MonotoneBm").field(t).finish(),
            CircleMeasure::BooleanBm(t) => f.debug_tuple("BooleanBm").field(t).finish(),
        }
    }
}
