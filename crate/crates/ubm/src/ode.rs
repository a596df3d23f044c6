//! Re-derivation of the closed forms by direct numerical integration of the
//! defining differential equations: the scalar flow of the monotone
//! K-transform, the same flow for a general atomic Herglotz generator, the
//! generating-function flow, and the closed triangular system for the
//! monotone moments.
//!
//! All integrators use fixed-step classical RK4 with an a posteriori
//! step-halving check in the tests; trajectories are smooth in the regions
//! used and fixed steps keep runs deterministic.

use num_complex::Complex64;
use thiserror::Error;

use crate::transforms::GeneratorSpec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("trajectory left the unit disk at t = {t} (modulus {modulus})")]
    StepInstability { t: f64, modulus: f64 },
}

/// Fixed-step integrator configuration. `tolerance` is the accuracy the
/// caller intends to verify against; the integrators themselves are
/// deterministic in `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    pub step: f64,
    pub tolerance: f64,
}

impl OdeConfig {
    pub fn new(step: f64, tolerance: f64) -> Result<Self, OdeError> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(OdeError::InvalidConfig(format!(
                "step must be positive and finite, got {step}"
            )));
        }
        if !(tolerance > 0.0) {
            return Err(OdeError::InvalidConfig(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        Ok(OdeConfig { step, tolerance })
    }
}

fn plan_steps(t_end: f64, cfg: &OdeConfig) -> Result<(usize, f64), OdeError> {
    assert!(t_end >= 0.0, "integration horizon must be nonnegative");
    if cfg.step > t_end {
        return Err(OdeError::InvalidConfig(format!(
            "step {} exceeds the integration horizon {}",
            cfg.step, t_end
        )));
    }
    let n = ((t_end / cfg.step - 1e-9).ceil()).max(1.0) as usize;
    Ok((n, t_end / n as f64))
}

/// RK4 for an autonomous complex scalar equation, with a disk guard applied
/// after every accepted step. `guard` maps the state to the modulus that
/// must stay below 1.
fn rk4_complex<F, G>(
    rhs: F,
    guard: G,
    y0: Complex64,
    t_end: f64,
    cfg: &OdeConfig,
) -> Result<Complex64, OdeError>
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> f64,
{
    if t_end == 0.0 {
        return Ok(y0);
    }
    let (n, h) = plan_steps(t_end, cfg)?;
    let mut y = y0;
    for i in 0..n {
        let k1 = rhs(y);
        let k2 = rhs(y + 0.5 * h * k1);
        let k3 = rhs(y + 0.5 * h * k2);
        let k4 = rhs(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let m = guard(y);
        if m >= 1.0 {
            return Err(OdeError::StepInstability {
                t: (i + 1) as f64 * h,
                modulus: m,
            });
        }
    }
    Ok(y)
}

/// Integrate `2 dK/dt = −K(1+K)/(1−K)` from `K(0) = z0`, the defining flow
/// of the monotone family; the result matches
/// [`crate::transforms::z_closed_form`] to the accuracy the step provides.
pub fn integrate_k_ode(z0: Complex64, t_end: f64, cfg: &OdeConfig) -> Result<Complex64, OdeError> {
    if z0.norm() >= 1.0 {
        return Err(OdeError::InvalidConfig(format!(
            "initial point must lie in the open disk, |z0| = {}",
            z0.norm()
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    rk4_complex(
        |k| -0.5 * k * (one + k) / (one - k),
        |k| k.norm(),
        z0,
        t_end,
        cfg,
    )
}

/// Integrate `dK/dt = −K·u(K)` for a general atomic Herglotz generator `u`.
/// With [`GeneratorSpec::brownian`] this specializes to [`integrate_k_ode`].
pub fn integrate_generic_monotone_ode(
    z0: Complex64,
    gen: &GeneratorSpec,
    t_end: f64,
    cfg: &OdeConfig,
) -> Result<Complex64, OdeError> {
    if z0.norm() >= 1.0 {
        return Err(OdeError::InvalidConfig(format!(
            "initial point must lie in the open disk, |z0| = {}",
            z0.norm()
        )));
    }
    rk4_complex(|k| -k * gen.eval(k), |k| k.norm(), z0, t_end, cfg)
}

/// Integrate the generating-function flow
/// `∂_t ρ = −½ ρ(1+ρ)(1+2ρ)` from `ρ(0) = z/(1−z)`; the endpoint equals
/// `ψ_{μ_t}(z)`. The disk guard watches `|ρ/(1+ρ)| = |K|`.
pub fn integrate_rho_ode(z: Complex64, t_end: f64, cfg: &OdeConfig) -> Result<Complex64, OdeError> {
    if z.norm() >= 1.0 {
        return Err(OdeError::InvalidConfig(format!(
            "initial point must lie in the open disk, |z| = {}",
            z.norm()
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let rho0 = z / (one - z);
    rk4_complex(
        |r| -0.5 * r * (one + r) * (one + 2.0 * r),
        |r| (r / (one + r)).norm(),
        rho0,
        t_end,
        cfg,
    )
}

/// Residual of the implicit endpoint relation
/// `ρ(1+ρ)/(1+2ρ)² = z e^{−t/2}/(1+z)²` satisfied by the flow of
/// [`integrate_rho_ode`].
pub fn implicit_relation_residual(t: f64, z: Complex64, rho: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let lhs = rho * (one + rho) / ((one + 2.0 * rho) * (one + 2.0 * rho));
    let zp1 = z + one;
    let rhs = z * (-t / 2.0).exp() / (zp1 * zp1);
    (lhs - rhs).norm()
}

fn moment_system_rhs(m: &[f64], out: &mut [f64], q: &mut [f64]) {
    let get = |k: usize| if k == 0 { 1.0 } else { m[k - 1] };
    // q_k = sum_{l=1}^{k-1} m_{k-l} m_l
    for (k, slot) in q.iter_mut().enumerate().skip(2) {
        let mut acc = 0.0;
        for l in 1..k {
            acc += get(k - l) * get(l);
        }
        *slot = acc;
    }
    for (idx, slot) in out.iter_mut().enumerate() {
        let n = idx + 1;
        let mut s1 = 0.0;
        for l in 1..=n {
            s1 += get(n - l) * get(l);
        }
        let mut s2 = 0.0;
        for (k, &qk) in q.iter().enumerate().take(n + 1).skip(2) {
            s2 += get(n - k) * qk;
        }
        *slot = -0.5 * s1 - s2;
    }
}

/// Integrate the closed triangular moment system
/// `dm_n/dt = −½ Σ_{l=1}^n m_{n−l} m_l − Σ_{k=2}^n Σ_{l=1}^{k−1} m_{n−k} m_{k−l} m_l`
/// with `m_0 ≡ 1` and `m_n(0) = 1`, returning `m_1..m_{n_max}` at `t_end`.
/// The endpoint matches the Legendre moment formula.
pub fn integrate_monotone_moment_system(
    t_end: f64,
    n_max: usize,
    cfg: &OdeConfig,
) -> Result<Vec<f64>, OdeError> {
    assert!(n_max >= 1, "the system needs at least one moment");
    let mut m = vec![1.0; n_max];
    if t_end == 0.0 {
        return Ok(m);
    }
    let (steps, h) = plan_steps(t_end, cfg)?;
    let mut q = vec![0.0; n_max + 1];
    let mut k1 = vec![0.0; n_max];
    let mut k2 = vec![0.0; n_max];
    let mut k3 = vec![0.0; n_max];
    let mut k4 = vec![0.0; n_max];
    let mut stage = vec![0.0; n_max];
    for step in 0..steps {
        moment_system_rhs(&m, &mut k1, &mut q);
        for i in 0..n_max {
            stage[i] = m[i] + 0.5 * h * k1[i];
        }
        moment_system_rhs(&stage, &mut k2, &mut q);
        for i in 0..n_max {
            stage[i] = m[i] + 0.5 * h * k2[i];
        }
        moment_system_rhs(&stage, &mut k3, &mut q);
        for i in 0..n_max {
            stage[i] = m[i] + h * k3[i];
        }
        moment_system_rhs(&stage, &mut k4, &mut q);
        for i in 0..n_max {
            m[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        for &v in m.iter() {
            if !(v.abs() <= 1.0 + 1e-6) {
                return Err(OdeError::StepInstability {
                    t: (step + 1) as f64 * h,
                    modulus: v.abs(),
                });
            }
        }
    }
    Ok(m)
}
