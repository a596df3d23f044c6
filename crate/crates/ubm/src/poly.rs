//! Orthogonal polynomial evaluation by upward three-term recurrence.
//!
//! The two moment formulas in this crate need exactly two families: the
//! Legendre polynomials `P_n` and the generalized Laguerre polynomials of
//! index one `L_n^{(1)}`. Upward recurrence in double precision is stable for
//! both families on the argument ranges used here (degrees up to a few
//! hundred, `x ∈ [−1, 1]` for Legendre, `x ≥ 0` for Laguerre), so no special
//! function dependency is pulled in.

/// The polynomial families backing the moment formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyFamily {
    Legendre,
    LaguerreAlpha1,
}

impl PolyFamily {
    /// Evaluate the degree-`n` member of the family at `x`.
    pub fn eval(self, n: usize, x: f64) -> f64 {
        match self {
            PolyFamily::Legendre => legendre_eval(n, x),
            PolyFamily::LaguerreAlpha1 => laguerre1_eval(n, x),
        }
    }
}

/// Legendre polynomial `P_n(x)`.
///
/// Recurrence: `(n+1) P_{n+1} = (2n+1) x P_n − n P_{n−1}`, `P_0 = 1`,
/// `P_1 = x`.
pub fn legendre_eval(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = x;
    for k in 1..n {
        let next = ((2 * k + 1) as f64 * x * curr - k as f64 * prev) / (k + 1) as f64;
        prev = curr;
        curr = next;
    }
    curr
}

/// Generalized Laguerre polynomial `L_n^{(1)}(x)`.
///
/// Recurrence: `(n+1) L_{n+1}^{(1)} = (2n+2−x) L_n^{(1)} − (n+1) L_{n−1}^{(1)}`,
/// `L_0^{(1)} = 1`, `L_1^{(1)} = 2 − x`.
pub fn laguerre1_eval(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = 2.0 - x;
    for k in 1..n {
        let next = (((2 * k + 2) as f64 - x) * curr - (k + 1) as f64 * prev) / (k + 1) as f64;
        prev = curr;
        curr = next;
    }
    curr
}
