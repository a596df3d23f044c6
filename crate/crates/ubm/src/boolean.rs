//! The spectral measure `ν_t` of the boolean unitary Brownian motion:
//! Laguerre moment formula, atom locations by root finding, atom weights,
//! and truncation control.
//!
//! For `t > 0` the measure is purely atomic. Writing atoms as conjugate
//! pairs `e^{±iα_n}`, the angles solve `g_t = 2πn` for
//! `g_t(θ) = (t/2)·cot(θ/2) − θ`, which is smooth and strictly decreasing on
//! `(0, π]`; the angles decrease to 0 (the atoms accumulate at 1) and each
//! pair carries weight `c_n = 2(1 − cos α_n)/(t + 2(1 − cos α_n))` per atom.
//! All root finding runs in the angle variable, where the accumulation point
//! causes no cancellation; `1 − cos α` is evaluated as `2 sin²(α/2)`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::poly::laguerre1_eval;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BooleanError {
    #[error("the atom equation is defined for angles in (0, pi], got {theta}")]
    AngleOutOfRange { theta: f64 },
    #[error("could not bracket the root for atom index {index}")]
    BracketFailure { index: usize },
    #[error(
        "mass target {target} not reached at index cap {cap} (captured {captured})"
    )]
    TruncationNotReached { target: f64, cap: usize, captured: f64 },
    #[error("invalid atom list: {0}")]
    InvalidAtomList(String),
}

/// When to stop producing atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationPolicy {
    /// Produce atom indices `0..=n_max`.
    MaxIndex(usize),
    /// Produce atoms until the captured mass reaches `target`, erroring out
    /// at `max_index` if it never does.
    MassTarget { target: f64, max_index: usize },
}

impl Default for TruncationPolicy {
    /// Stop at captured mass `1 − 1e−8` or index `10^5`, whichever first.
    /// The pair-mass tail decays like `t/(2π²n)`, so deep targets at large
    /// `t` need an explicit, larger cap.
    fn default() -> Self {
        TruncationPolicy::MassTarget {
            target: 1.0 - 1e-8,
            max_index: 100_000,
        }
    }
}

/// Atoms of a conjugate-symmetric atomic measure, one entry per pair,
/// ordered by index (angles strictly decreasing, `x_n = cos α_n` strictly
/// increasing). `weight(n)` is the mass carried by each of `e^{iα_n}` and
/// `e^{−iα_n}`, so the captured mass is `2·Σ weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomList {
    angles: Vec<f64>,
    weights: Vec<f64>,
    captured_mass: f64,
}

/// One conjugate atom pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub index: usize,
    pub angle: f64,
    pub x: f64,
    pub weight: f64,
}

impl AtomList {
    /// Build a list from `(angle, weight-per-atom)` pairs in index order.
    /// Angles must lie in `(0, π]` and decrease strictly; weights must be
    /// positive with total pair mass at most 1.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self, BooleanError> {
        let mut prev = f64::INFINITY;
        let mut mass = 0.0;
        for &(angle, weight) in pairs {
            if !(angle > 0.0 && angle <= PI) || angle >= prev {
                return Err(BooleanError::InvalidAtomList(format!(
                    "angles must decrease strictly within (0, pi], got {angle}"
                )));
            }
            if !(weight > 0.0) {
                return Err(BooleanError::InvalidAtomList(format!(
                    "weights must be positive, got {weight}"
                )));
            }
            prev = angle;
            mass += 2.0 * weight;
        }
        if mass > 1.0 + 1e-9 {
            return Err(BooleanError::InvalidAtomList(format!(
                "total pair mass {mass} exceeds 1"
            )));
        }
        Ok(AtomList {
            angles: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
            captured_mass: mass,
        })
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Largest produced atom index.
    pub fn truncation_index(&self) -> usize {
        self.angles.len() - 1
    }

    pub fn angle(&self, n: usize) -> f64 {
        self.angles[n]
    }

    pub fn x(&self, n: usize) -> f64 {
        self.angles[n].cos()
    }

    pub fn weight(&self, n: usize) -> f64 {
        self.weights[n]
    }

    /// Total mass of all produced pairs, `2·Σ_n c_n ≤ 1`.
    pub fn captured_mass(&self) -> f64 {
        self.captured_mass
    }

    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        self.angles
            .iter()
            .zip(&self.weights)
            .enumerate()
            .map(|(index, (&angle, &weight))| Atom {
                index,
                angle,
                x: angle.cos(),
                weight,
            })
    }
}

/// The atom-location function `g_t(θ) = (t/2)·cot(θ/2) − θ` in the angle
/// variable; strictly decreasing from `+∞` at `0⁺` to `−π` at `π`. Its level
/// set `g_t = 2πn` places the `n`-th atom pair.
pub fn g_t_eval(t: f64, theta: f64) -> Result<f64, BooleanError> {
    assert!(t > 0.0, "time must be positive");
    if !(theta > 0.0 && theta <= PI) {
        return Err(BooleanError::AngleOutOfRange { theta });
    }
    let (s, c) = (0.5 * theta).sin_cos();
    Ok(0.5 * t * c / s - theta)
}

/// `n`-th moment of `ν_t` via the Laguerre formula
/// `m_n = Σ_{k=1}^n L^{(1)}_{n−k}(kt)e^{−kt/2} − 2Σ_{k=1}^{n−1} L^{(1)}_{n−k−1}(kt)e^{−kt/2}
///  + Σ_{k=1}^{n−2} L^{(1)}_{n−k−2}(kt)e^{−kt/2}` (empty sums for k < 1).
pub fn boolean_moment(t: f64, n: usize) -> f64 {
    assert!(t >= 0.0, "time must be nonnegative");
    assert!(n >= 1, "moments are indexed from 1");
    let mut total = 0.0;
    for k in 1..=n {
        total += laguerre1_eval(n - k, k as f64 * t) * (-(k as f64) * t / 2.0).exp();
    }
    for k in 1..n {
        total -= 2.0 * laguerre1_eval(n - k - 1, k as f64 * t) * (-(k as f64) * t / 2.0).exp();
    }
    for k in 1..n.saturating_sub(1) {
        total += laguerre1_eval(n - k - 2, k as f64 * t) * (-(k as f64) * t / 2.0).exp();
    }
    total
}

/// Safeguarded Newton in the angle variable for `g_t(θ) = 2πn`, bracketed
/// inside `(0, hi)`; `hi` is the previous atom angle (or π for n = 0).
fn solve_angle(t: f64, n: usize, hi: f64) -> Result<f64, BooleanError> {
    let target = 2.0 * PI * n as f64;
    let value = |theta: f64| {
        let (s, c) = (0.5 * theta).sin_cos();
        0.5 * t * c / s - theta - target
    };
    let slope = |theta: f64| {
        let s = (0.5 * theta).sin();
        -0.25 * t / (s * s) - 1.0
    };

    // seed: asymptotic root position, clamped into the bracket
    let mut seed = if n == 0 {
        // between sqrt(t) (small t) and pi - 4 pi/t (large t)
        (t.sqrt()).min(PI * t / (t + 4.0)).min(0.5 * hi)
    } else {
        let mut th = t / target;
        for _ in 0..2 {
            th = t / (target + th * (1.0 + t / 12.0));
        }
        th
    };
    if !(seed > 0.0) || seed >= hi {
        seed = 0.5 * hi;
    }

    // establish the lower bracket end: g - target > 0 there
    let mut lo = seed;
    let mut tries = 0;
    while value(lo) <= 0.0 {
        lo *= 0.5;
        tries += 1;
        if tries > 200 {
            return Err(BooleanError::BracketFailure { index: n });
        }
    }
    let mut hi = hi;
    let mut theta = lo;

    for _ in 0..120 {
        let f = value(theta);
        if f == 0.0 {
            return Ok(theta);
        }
        if f > 0.0 {
            lo = theta;
        } else {
            hi = theta;
        }
        let mut next = theta - f / slope(theta);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - theta).abs() <= f64::EPSILON * theta {
            return Ok(next);
        }
        theta = next;
    }
    Ok(theta)
}

/// Solve for the atoms of `ν_t` under the given truncation policy.
///
/// Atoms come out in index order with strictly decreasing angles; the weight
/// per atom is `4 sin²(α/2)/(t + 4 sin²(α/2))`.
pub fn solve_atoms(t: f64, policy: &TruncationPolicy) -> Result<AtomList, BooleanError> {
    assert!(t > 0.0, "the measure is atomic only for t > 0");
    let (mass_target, cap) = match *policy {
        TruncationPolicy::MaxIndex(n_max) => (None, n_max),
        TruncationPolicy::MassTarget { target, max_index } => {
            assert!(
                target > 0.0 && target <= 1.0,
                "mass target must lie in (0, 1]"
            );
            (Some(target), max_index)
        }
    };

    let estimated = match mass_target {
        Some(target) => ((t / (2.0 * PI * PI * (1.0 - target).max(1e-12))) as usize).min(cap) + 1,
        None => cap + 1,
    };
    let mut angles = Vec::with_capacity(estimated.min(1 << 26));
    let mut weights = Vec::with_capacity(estimated.min(1 << 26));
    let mut mass = 0.0;
    let mut hi = PI;

    for n in 0..=cap {
        let theta = solve_angle(t, n, hi)?;
        debug_assert!(theta < hi && theta > 0.0);
        let s = (0.5 * theta).sin();
        let w = 4.0 * s * s / (t + 4.0 * s * s);
        angles.push(theta);
        weights.push(w);
        mass += 2.0 * w;
        hi = theta;
        if let Some(target) = mass_target {
            if mass >= target {
                break;
            }
            if n == cap {
                return Err(BooleanError::TruncationNotReached {
                    target,
                    cap,
                    captured: mass,
                });
            }
        }
    }

    Ok(AtomList {
        angles,
        weights,
        captured_mass: mass,
    })
}

/// `n`-th moment from a produced atom list: conjugate pairs collapse to
/// cosines, `m_n = 2 Σ_k c_k cos(n α_k)`. Exactly real by construction.
pub fn boolean_moment_from_atoms(atoms: &AtomList, n: usize) -> f64 {
    assert!(n >= 1, "moments are indexed from 1");
    let nf = n as f64;
    let mut acc = 0.0;
    for (angle, weight) in atoms.angles.iter().zip(&atoms.weights) {
        acc += 2.0 * weight * (nf * angle).cos();
    }
    acc
}

/// Moments `m_1..m_{n_max}` from an atom list in one sweep, using the
/// cosine recurrence per atom instead of `n_max` trigonometric calls.
pub fn boolean_moments_from_atoms(atoms: &AtomList, n_max: usize) -> Vec<f64> {
    let mut acc = vec![0.0; n_max];
    for (angle, weight) in atoms.angles.iter().zip(&atoms.weights) {
        let c = angle.cos();
        let w2 = 2.0 * weight;
        let mut prev = 1.0;
        let mut curr = c;
        for slot in acc.iter_mut() {
            *slot += w2 * curr;
            let next = 2.0 * c * curr - prev;
            prev = curr;
            curr = next;
        }
    }
    acc
}

/// `x_0(t) = cos α_0(t)` for each requested time; strictly decreasing in `t`
/// and approaching −1 as `t → ∞`.
pub fn x0_curve(t_values: &[f64]) -> Result<Vec<f64>, BooleanError> {
    t_values
        .iter()
        .map(|&t| {
            assert!(t > 0.0, "the measure is atomic only for t > 0");
            solve_angle(t, 0, PI).map(|theta| theta.cos())
        })
        .collect()
}
