//! Crate-internal composite Simpson rule for complex-valued integrands.

use num_complex::Complex64;

/// Composite Simpson rule on `[a, b]` with `intervals` panels (forced even).
/// Summation order is fixed, so results are deterministic.
pub(crate) fn simpson<F>(f: &F, a: f64, b: f64, intervals: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let n = if intervals.is_multiple_of(2) {
        intervals.max(2)
    } else {
        intervals + 1
    };
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * (h / 3.0)
}

/// Simpson with doubling refinement: returns the first refinement whose
/// change falls below `tol` (absolute, with a relative floor), or `None`
/// if `max_doublings` is exhausted.
pub(crate) fn simpson_refine<F>(
    f: &F,
    a: f64,
    b: f64,
    start_intervals: usize,
    tol: f64,
    max_doublings: usize,
) -> Option<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let mut n = start_intervals.max(2);
    let mut prev = simpson(f, a, b, n);
    for _ in 0..max_doublings {
        n *= 2;
        let next = simpson(f, a, b, n);
        if (next - prev).norm() <= tol * 1.0_f64.max(next.norm()) {
            return Some(next);
        }
        prev = next;
    }
    None
}
