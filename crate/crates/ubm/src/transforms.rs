//! The transform calculus on the unit circle: the moment generating function
//! ψ, the composition transform K, the boolean transform F, the Herglotz
//! transform, and the closed-form semigroup maps of the two Brownian motion
//! families.
//!
//! Conventions. For a probability measure μ on the circle,
//! `ψ_μ(z) = Σ_{k≥1} m_k z^k`, `K_μ = ψ_μ/(1+ψ_μ)` and `F_μ(z) = K_μ(z)/z`.
//! Monotone convolution composes K; boolean convolution multiplies F. The
//! monotone family has `K_{μ_t} = Z_t` solving a quadratic in closed form;
//! the boolean family has `F_t(z) = exp(t(z+1)/(2(z−1)))`. All disk-point
//! evaluations require `|z| < 1` strictly.

use num_complex::Complex64;
use thiserror::Error;

use crate::convolution::MomentSequence;
use crate::quad;
use crate::series::{SeriesError, TruncatedSeries};
use crate::CircleMeasure;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("point outside the open unit disk (|z| = {modulus})")]
    OutsideDisk { modulus: f64 },
    #[error("argument lies on the branch cut [0, 4]")]
    OnBranchCut,
    #[error("the conformal map is undefined at z = 0")]
    ZeroArgument,
    #[error("evaluation at the excluded boundary point z = 1")]
    AtOne,
    #[error("quadrature for the Herglotz integral did not converge")]
    QuadratureNonConvergence,
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_open_disk(z: Complex64) -> Result<(), TransformError> {
    let m = z.norm();
    if m >= 1.0 {
        return Err(TransformError::OutsideDisk { modulus: m });
    }
    Ok(())
}

/// ψ as a truncated series: `c_0 = 0`, `c_k = m_k`.
pub fn psi_from_moments(moments: &MomentSequence) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(moments.order() + 1);
    coeffs.push(Complex64::new(0.0, 0.0));
    coeffs.extend_from_slice(moments.moments());
    TruncatedSeries::from_coeffs(coeffs)
}

/// Read the moments back off a ψ series (the inverse of
/// [`psi_from_moments`]).
pub fn moments_from_psi(psi: &TruncatedSeries) -> MomentSequence {
    MomentSequence::from_raw(psi.coeffs()[1..].to_vec())
}

/// `K = ψ/(1+ψ)` truncated at the order of ψ. Requires `ψ.c_0 = 0`.
pub fn k_from_psi(psi: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    if psi.coeff(0).norm() != 0.0 {
        return Err(SeriesError::NonzeroConstantTerm);
    }
    let one = TruncatedSeries::constant(ONE, psi.order());
    psi.div(&one.add(psi)?)
}

/// `ψ = K/(1−K)`, inverse of [`k_from_psi`]. Requires `K.c_0 = 0`.
pub fn psi_from_k(k: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    if k.coeff(0).norm() != 0.0 {
        return Err(SeriesError::NonzeroConstantTerm);
    }
    let one = TruncatedSeries::constant(ONE, k.order());
    k.div(&one.sub(k)?)
}

/// The boolean transform as a series: `F(z) = K(z)/z` of order `N−1`, so the
/// constant term is the first moment.
pub fn f_from_psi(psi: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    let k = k_from_psi(psi)?;
    Ok(TruncatedSeries::from_coeffs(k.coeffs()[1..].to_vec()))
}

/// Reconstruct `ψ = zF/(1−zF)` from an order-`N−1` boolean transform,
/// yielding an order-`N` series.
pub fn psi_from_f(f: &TruncatedSeries) -> TruncatedSeries {
    let n = f.order() + 1;
    let mut shifted = Vec::with_capacity(n + 1);
    shifted.push(Complex64::new(0.0, 0.0));
    shifted.extend_from_slice(f.coeffs());
    let zf = TruncatedSeries::from_coeffs(shifted);
    let one = TruncatedSeries::constant(ONE, n);
    let den = one.sub(&zf).expect("orders agree");
    zf.div(&den).expect("denominator has unit constant term")
}

/// The conformal bijection `φ(z) = (z+1)²/z` from the punctured disk onto the
/// complement of the segment `[0, 4]`.
pub fn conformal_phi(z: Complex64) -> Result<Complex64, TransformError> {
    if z.norm() == 0.0 {
        return Err(TransformError::ZeroArgument);
    }
    let zp1 = z + ONE;
    Ok(zp1 * zp1 / z)
}

/// Preimage of `w` under `φ` inside the closed unit disk. The segment
/// `[0, 4]` is the branch cut (its preimage sits on the circle).
pub fn phi_inverse(w: Complex64) -> Result<Complex64, TransformError> {
    if w.im == 0.0 && (0.0..=4.0).contains(&w.re) {
        return Err(TransformError::OnBranchCut);
    }
    Ok(bounded_quadratic_root(w).0)
}

/// Bounded root of `Z² + (2−w)Z + 1 = 0`. The two roots multiply to 1, so
/// the bounded one is the reciprocal of the larger; forming the larger root
/// with the cancellation-free sign keeps full relative accuracy even for
/// huge `w`, where the naive `(w − 2 − s)/2` loses every digit. The flag
/// reports when both roots sit within 1e−9 of the unit circle and the
/// selection is numerically ambiguous.
fn bounded_quadratic_root(w: Complex64) -> (Complex64, bool) {
    // computed as w·sqrt(1 − 4/w) to keep the principal branch away from the
    // negative real axis for w off the cut
    let s = w * (ONE - Complex64::new(4.0, 0.0) / w).sqrt();
    let q = w - Complex64::new(2.0, 0.0);
    let plus = q + s;
    let minus = q - s;
    let big = if plus.norm() >= minus.norm() {
        0.5 * plus
    } else {
        0.5 * minus
    };
    let root = big.inv();
    let ambiguous = (root.norm() - 1.0).abs() < 1e-9;
    (root, ambiguous)
}

/// The monotone semigroup map `Z_t(z) = K_{μ_t}(z)`, i.e. the bounded
/// solution of `Z² + (2−w)Z + 1 = 0` with `w = e^{t/2}(z+1)²/z`;
/// equivalently `φ^{−1}(e^{t/2} φ(z))`. `Z_t` fixes the origin.
pub fn z_closed_form(t: f64, z: Complex64) -> Result<Complex64, TransformError> {
    Ok(z_closed_form_flagged(t, z)?.0)
}

/// [`z_closed_form`] together with a flag marking points where both
/// quadratic roots are within 1e−9 of the unit circle, i.e. where the
/// bounded-root selection is numerically ambiguous.
pub fn z_closed_form_flagged(
    t: f64,
    z: Complex64,
) -> Result<(Complex64, bool), TransformError> {
    assert!(t >= 0.0, "time must be nonnegative");
    check_open_disk(z)?;
    if z.norm() == 0.0 {
        // removable singularity of w; the origin is a fixed point
        return Ok((Complex64::new(0.0, 0.0), false));
    }
    let zp1 = z + ONE;
    let w = (t / 2.0).exp() * zp1 * zp1 / z;
    Ok(bounded_quadratic_root(w))
}

/// `(z+1)/(z−1)` with the real part kept accurate near the unit circle.
///
/// The direct quotient cancels catastrophically for `z ≈ e^{iα}` with small
/// `α`: `Re(z−1)` is quadratically small but stored at the absolute
/// precision of 1. Expanding the numerator, `(z+1)(z̄−1) = (|z|²−1) − 2i·Im z`,
/// and computing `|z|²−1` with fused multiply-adds removes the cancellation
/// (`Re z − 1` in the denominator is exact near 1 and only enters squared).
fn cayley_ratio(z: Complex64) -> Complex64 {
    let re1 = z.re - 1.0;
    let den = re1 * re1 + z.im * z.im;
    let mod2_minus_1 = z.im.mul_add(z.im, z.re.mul_add(z.re, -1.0));
    Complex64::new(mod2_minus_1 / den, -2.0 * z.im / den)
}

/// The boolean semigroup transform `F_t(z) = exp(t(z+1)/(2(z−1)))`.
pub fn f_t_closed_form(t: f64, z: Complex64) -> Result<Complex64, TransformError> {
    assert!(t >= 0.0, "time must be nonnegative");
    check_open_disk(z)?;
    Ok(((t / 2.0) * cayley_ratio(z)).exp())
}

/// The inner function `θ_t(z) = z·F_t(z)`, defined on the closed disk except
/// at `z = 1`; its boundary values are unimodular and its level set
/// `θ_t = 1` carries the atoms of `ν_t`.
pub fn theta_t(t: f64, z: Complex64) -> Result<Complex64, TransformError> {
    assert!(t >= 0.0, "time must be nonnegative");
    let m = z.norm();
    if m > 1.0 + 1e-12 {
        return Err(TransformError::OutsideDisk { modulus: m });
    }
    if z == ONE {
        return Err(TransformError::AtOne);
    }
    Ok(z * ((t / 2.0) * cayley_ratio(z)).exp())
}

/// Herglotz transform `H_μ(z) = ∫ (ξ+z)/(ξ−z) dμ(ξ)` of a circle measure at
/// a point of the open disk. `H(0)` is the total mass and `Re H ≥ 0`.
pub fn herglotz(measure: &CircleMeasure, z: Complex64) -> Result<Complex64, TransformError> {
    check_open_disk(z)?;
    match measure {
        CircleMeasure::MonotoneBm(t) => {
            assert!(*t >= 0.0, "time must be nonnegative");
            let x = 2.0 * (-t / 2.0).exp() - 1.0;
            // 1 − 2zx + z² has no zeros and avoids (−∞, 0] on the open disk
            let q = ONE - 2.0 * x * z + z * z;
            Ok((z + ONE) / q.sqrt())
        }
        CircleMeasure::BooleanBm(t) => {
            let th = theta_t(*t, z)?;
            Ok((ONE + th) / (ONE - th))
        }
        CircleMeasure::Atomic(atoms) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for atom in atoms.iter() {
                let zeta = Complex64::from_polar(1.0, atom.angle);
                acc += atom.weight * ((zeta + z) / (zeta - z));
                let conj = zeta.conj();
                acc += atom.weight * ((conj + z) / (conj - z));
            }
            Ok(acc)
        }
        CircleMeasure::AbsolutelyContinuous { density, support } => {
            let (a, b) = *support;
            let f = |theta: f64| {
                let xi = Complex64::from_polar(1.0, theta);
                (xi + z) / (xi - z) * density(theta) / std::f64::consts::TAU
            };
            quad::simpson_refine(&f, a, b, 64, 1e-9, 16)
                .ok_or(TransformError::QuadratureNonConvergence)
        }
    }
}

/// Herglotz-representation data of a monotone semigroup generator with a
/// purely atomic measure part:
/// `u(z) = i·b + Σ_j mass_j (x_j + z)/(x_j − z)` with `x_j = e^{i·angle_j}`.
///
/// The two Brownian motion families correspond to `b = 0` and a single atom
/// of mass 1/2 at angle 0 ([`GeneratorSpec::brownian`]).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    b: f64,
    rho_atoms: Vec<(f64, f64)>,
}

impl GeneratorSpec {
    /// Build a generator from a drift `b` and `(angle, mass)` atoms of the
    /// measure ρ. Masses must be positive and finite, angles distinct and in
    /// `(−π, π]`.
    pub fn new(b: f64, rho_atoms: Vec<(f64, f64)>) -> Result<Self, TransformError> {
        if !b.is_finite() {
            return Err(TransformError::InvalidGenerator("drift must be finite".into()));
        }
        for &(angle, mass) in &rho_atoms {
            if !(mass > 0.0) || !mass.is_finite() {
                return Err(TransformError::InvalidGenerator(format!(
                    "atom mass must be positive and finite, got {mass}"
                )));
            }
            if !angle.is_finite() || angle <= -std::f64::consts::PI || angle > std::f64::consts::PI
            {
                return Err(TransformError::InvalidGenerator(format!(
                    "atom angle must lie in (-pi, pi], got {angle}"
                )));
            }
        }
        for i in 0..rho_atoms.len() {
            for j in i + 1..rho_atoms.len() {
                if rho_atoms[i].0 == rho_atoms[j].0 {
                    return Err(TransformError::InvalidGenerator(format!(
                        "duplicate atom angle {}",
                        rho_atoms[i].0
                    )));
                }
            }
        }
        Ok(GeneratorSpec { b, rho_atoms })
    }

    /// The Brownian motion generator: no drift, ρ = ½·δ at angle 0.
    pub fn brownian() -> Self {
        GeneratorSpec {
            b: 0.0,
            rho_atoms: vec![(0.0, 0.5)],
        }
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn rho_atoms(&self) -> &[(f64, f64)] {
        &self.rho_atoms
    }

    /// Evaluate `u(z)` for `|z| < 1`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, self.b);
        for &(angle, mass) in &self.rho_atoms {
            let x = Complex64::from_polar(1.0, angle);
            acc += mass * (x + z) / (x - z);
        }
        acc
    }
}
