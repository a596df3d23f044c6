//! Discretized boolean Fock space realization of the boolean unitary
//! Brownian motion.
//!
//! The boolean Fock space over `L²[0, T]` is `ℂ ⊕ L²[0, T]`; operators are
//! 2×2 blocks (scalar, bra, ket, bulk) and the vacuum expectation is the
//! top-left entry. On a grid of `M` midpoint nodes `s_j = (j+½)·dt`,
//! functions are represented by node values scaled by `√dt` so that inner
//! products become plain dot products. The time-`t` unitary has the explicit
//! block form
//!
//! ```text
//!        ┌ e^{−t/2}                −e^{−(t−s_k)/2}√dt       ┐
//! U_t =  │                                                  │
//!        └ e^{−s_j/2}√dt    id − e^{−(s_j−s_k)/2}·dt (k<j)  ┘
//! ```
//!
//! with all kernel entries cut off at `s < t`. Vacuum moments of `U_t^n`
//! converge to the boolean Laguerre moments as the grid refines; the closed
//! recursion [`moment_recursion`] reproduces them exactly with no grid at
//! all, and [`verify_lem_identities`] checks the kernel identities that the
//! recursion is derived from.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("grid too coarse: {cells} cells (need at least 8)")]
    GridTooCoarse { cells: usize },
    #[error("grid horizon must be positive and finite, got {horizon}")]
    BadHorizon { horizon: f64 },
    #[error("time {t} outside the grid horizon [0, {horizon}]")]
    TimeOutsideHorizon { t: f64, horizon: f64 },
}

/// Midpoint discretization of `L²[0, T]` with `M` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockGrid {
    horizon: f64,
    cells: usize,
}

impl FockGrid {
    pub fn new(horizon: f64, cells: usize) -> Result<Self, FockError> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(FockError::BadHorizon { horizon });
        }
        if cells < 8 {
            return Err(FockError::GridTooCoarse { cells });
        }
        Ok(FockGrid { horizon, cells })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.cells as f64
    }

    /// Midpoint of cell `j`.
    pub fn node(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dt()
    }
}

/// Dense complex matrix in row-major storage; just enough linear algebra
/// for operator products, adjoints and max-norms on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let acc = &mut out[i * n..(i + 1) * n];
                for (o, &r) in acc.iter_mut().zip(row) {
                    *o += a * r;
                }
            }
        }
        DenseMatrix { dim: n, data: out }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        DenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, x) in self.data[i * n..(i + 1) * n].iter().zip(v) {
                acc += a * x;
            }
            *slot = acc;
        }
        out
    }
}

/// Operator on `ℂ ⊕ grid(L²[0, T])` in 2×2 block form: a scalar, a bra row,
/// a ket column, and a dense `M×M` bulk. The assembled matrix has dimension
/// `(M+1)×(M+1)` with the scalar at (0, 0).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    scalar: Complex64,
    row: Vec<Complex64>,
    col: Vec<Complex64>,
    bulk: Vec<Complex64>,
    cells: usize,
}

impl BlockOperator {
    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Dimension of the assembled matrix, `M + 1`.
    pub fn dim(&self) -> usize {
        self.cells + 1
    }

    pub fn scalar(&self) -> Complex64 {
        self.scalar
    }

    pub fn row(&self) -> &[Complex64] {
        &self.row
    }

    pub fn col(&self) -> &[Complex64] {
        &self.col
    }

    /// Bulk entry (j, k), row-major.
    pub fn bulk(&self, j: usize, k: usize) -> Complex64 {
        self.bulk[j * self.cells + k]
    }

    /// Matrix-vector product of the assembled operator.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim(), "dimension mismatch");
        let m = self.cells;
        let mut out = vec![Complex64::new(0.0, 0.0); m + 1];
        let mut top = self.scalar * v[0];
        for (r, x) in self.row.iter().zip(&v[1..]) {
            top += r * x;
        }
        out[0] = top;
        for (j, slot) in out[1..].iter_mut().enumerate() {
            let mut acc = self.col[j] * v[0];
            let brow = &self.bulk[j * m..(j + 1) * m];
            for (b, x) in brow.iter().zip(&v[1..]) {
                if b.re != 0.0 || b.im != 0.0 {
                    acc += b * x;
                }
            }
            *slot = acc;
        }
        out
    }

    /// Assemble the full `(M+1)×(M+1)` dense matrix.
    pub fn assemble(&self) -> DenseMatrix {
        let m = self.cells;
        let mut out = DenseMatrix::zeros(m + 1);
        out.set(0, 0, self.scalar);
        for j in 0..m {
            out.set(0, j + 1, self.row[j]);
            out.set(j + 1, 0, self.col[j]);
            for k in 0..m {
                out.set(j + 1, k + 1, self.bulk[j * m + k]);
            }
        }
        out
    }
}

/// Build the grid operator `U_t`, `0 ≤ t ≤ T`.
///
/// Blocks: scalar `e^{−t/2}`; bra `−e^{−(t−s_j)/2}√dt` and ket
/// `e^{−s_j/2}√dt` for nodes `s_j < t`; bulk `identity + V` with the
/// strictly lower triangular Volterra part
/// `V_{jk} = −e^{−(s_j−s_k)/2}·dt` for `s_k < s_j < t`. At `t = 0` the
/// operator is the identity.
pub fn build_u(t: f64, grid: &FockGrid) -> Result<BlockOperator, FockError> {
    if !(0.0..=grid.horizon() + 1e-12).contains(&t) {
        return Err(FockError::TimeOutsideHorizon {
            t,
            horizon: grid.horizon(),
        });
    }
    let m = grid.cells();
    let dt = grid.dt();
    let sq = dt.sqrt();
    let mut row = vec![Complex64::new(0.0, 0.0); m];
    let mut col = vec![Complex64::new(0.0, 0.0); m];
    let mut bulk = vec![Complex64::new(0.0, 0.0); m * m];
    for j in 0..m {
        let s_j = grid.node(j);
        bulk[j * m + j] = Complex64::new(1.0, 0.0);
        if s_j < t {
            row[j] = Complex64::new(-(-(t - s_j) / 2.0).exp() * sq, 0.0);
            col[j] = Complex64::new((-s_j / 2.0).exp() * sq, 0.0);
            for k in 0..j {
                let s_k = grid.node(k);
                bulk[j * m + k] = Complex64::new(-(-(s_j - s_k) / 2.0).exp() * dt, 0.0);
            }
        }
    }
    Ok(BlockOperator {
        scalar: Complex64::new((-t / 2.0).exp(), 0.0),
        row,
        col,
        bulk,
        cells: m,
    })
}

/// Vacuum expectation of `U^n`: the (0, 0) entry of the `n`-th matrix power,
/// computed by repeated application to the vacuum vector.
pub fn vacuum_moment(u: &BlockOperator, n: u32) -> Complex64 {
    let mut v = vec![Complex64::new(0.0, 0.0); u.dim()];
    v[0] = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        v = u.apply(&v);
    }
    v[0]
}

/// `‖U*U − I‖_max` of the assembled operator; `O(dt)` for the grid `U_t`
/// (the continuum operator is unitary).
pub fn unitarity_defect(u: &BlockOperator) -> f64 {
    let a = u.assemble();
    let product = a.adjoint().mul(&a);
    product.sub(&DenseMatrix::identity(a.dim())).max_abs()
}

/// Grid-free vacuum moments `m_1..m_{n_max}` of `U_t` from the closed
/// recursion
///
/// ```text
/// Φ(U^{n+1}) = e^{−t/2}·[ Φ(U^n) + Σ_{k=0}^{n−1} Φ(U^{n−1−k})·a_k(t) ],
/// a_k(t)     = Σ_{i=0}^{k} C(k,i)·(−t)^{i+1}/(i+1)!,
/// ```
///
/// which eliminates the bra functionals analytically; the output agrees
/// with the Laguerre moment formula to machine precision.
pub fn moment_recursion(t: f64, n_max: usize) -> Vec<f64> {
    assert!(t >= 0.0, "time must be nonnegative");
    assert!(n_max >= 1, "need at least one moment");
    let damp = (-t / 2.0).exp();
    // a_k for k = 0..n_max-1
    let mut a = vec![0.0; n_max];
    for (k, slot) in a.iter_mut().enumerate() {
        let mut binom = 1.0;
        let mut power = -t;
        let mut factorial = 1.0;
        let mut acc = 0.0;
        for i in 0..=k {
            acc += binom * power / factorial;
            binom *= (k - i) as f64 / (i + 1) as f64;
            power *= -t;
            factorial *= (i + 2) as f64;
        }
        *slot = acc;
    }
    let mut phi = Vec::with_capacity(n_max + 1);
    phi.push(1.0);
    for n in 0..n_max {
        let mut acc = phi[n];
        for k in 0..n {
            acc += phi[n - 1 - k] * a[k];
        }
        phi.push(damp * acc);
    }
    phi.remove(0);
    phi
}

/// Grid residuals of the three kernel identities behind the moment
/// recursion, for one power index `i`.
///
/// * `operator_power`: `‖V^i − W_i‖_max/dt` where `V` is the Volterra block
///   and `W_i` the i-fold kernel matrix (identical matrices at `i = 1`);
/// * `composed_functional`: the bra functional composed with `W_i` against
///   the order-`i+1` bra kernel, compared at kernel level;
/// * `scalar`: the fully contracted bra–ket scalar against its closed form
///   `(−t)^{i+1}/(i+1)!·e^{−t/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemResiduals {
    pub i: usize,
    pub operator_power: f64,
    pub composed_functional: f64,
    pub scalar: f64,
    pub scalar_value: f64,
    pub scalar_expected: f64,
}

impl LemResiduals {
    /// Largest of the three residuals; decays as `O(dt)` under refinement.
    pub fn max_residual(&self) -> f64 {
        self.operator_power
            .max(self.composed_functional)
            .max(self.scalar)
    }
}

fn real_matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let v = a[i * n + k];
            if v == 0.0 {
                continue;
            }
            let row = &b[k * n..(k + 1) * n];
            let acc = &mut out[i * n..(i + 1) * n];
            for (o, &r) in acc.iter_mut().zip(row) {
                *o += v * r;
            }
        }
    }
    out
}

/// Check the kernel identities on the grid for `i = 1..=i_max` (`i_max ≤ 6`;
/// the factorial kernels beyond that add nothing).
pub fn verify_lem_identities(
    t: f64,
    grid: &FockGrid,
    i_max: usize,
) -> Result<Vec<LemResiduals>, FockError> {
    assert!((1..=6).contains(&i_max), "i_max must lie in 1..=6");
    if !(0.0..=grid.horizon() + 1e-12).contains(&t) {
        return Err(FockError::TimeOutsideHorizon {
            t,
            horizon: grid.horizon(),
        });
    }
    let m = grid.cells();
    let dt = grid.dt();

    // kernels, all real
    let zeta_kernel = |s: f64, r: f64, i: usize| {
        let sign = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut fact = 1.0;
        for q in 1..i {
            fact *= q as f64;
        }
        sign * (s - r).powi(i as i32 - 1) / fact * (-(s - r) / 2.0).exp()
    };
    let delta_kernel = |s: f64, i: usize| {
        let sign = if i.is_multiple_of(2) { -1.0 } else { 1.0 };
        let mut fact = 1.0;
        for q in 1..i {
            fact *= q as f64;
        }
        sign * (t - s).powi(i as i32 - 1) / fact * (-(t - s) / 2.0).exp()
    };

    let kernel_matrix = |i: usize| {
        let mut w = vec![0.0; m * m];
        for j in 0..m {
            let s_j = grid.node(j);
            if s_j >= t {
                continue;
            }
            for k in 0..j {
                w[j * m + k] = zeta_kernel(s_j, grid.node(k), i) * dt;
            }
        }
        w
    };

    let volterra = kernel_matrix(1);
    // bra functional of U in scaled coordinates: -delta_t(s_j)·sqrt(dt)
    let bra: Vec<f64> = (0..m)
        .map(|j| {
            let s_j = grid.node(j);
            if s_j < t {
                -delta_kernel(s_j, 1) * dt.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let ket: Vec<f64> = (0..m)
        .map(|j| {
            let s_j = grid.node(j);
            if s_j < t {
                (-s_j / 2.0).exp() * dt.sqrt()
            } else {
                0.0
            }
        })
        .collect();

    let mut power = volterra.clone();
    let mut report = Vec::with_capacity(i_max);
    for i in 1..=i_max {
        if i > 1 {
            power = real_matmul(&power, &volterra, m);
        }
        let w_i = kernel_matrix(i);

        let mut op_res = 0.0f64;
        for (p, w) in power.iter().zip(&w_i) {
            op_res = op_res.max((p - w).abs());
        }
        op_res /= dt;

        // bra ∘ W_i against the order-(i+1) bra kernel, at kernel level
        let mut comp_res = 0.0f64;
        for k in 0..m {
            let s_k = grid.node(k);
            if s_k >= t {
                continue;
            }
            let mut composed = 0.0;
            for (j, b) in bra.iter().enumerate().skip(k + 1) {
                composed += b * w_i[j * m + k];
            }
            let target = -delta_kernel(s_k, i + 1) * dt.sqrt();
            comp_res = comp_res.max((composed - target).abs() / dt.sqrt());
        }

        // fully contracted scalar against the closed form
        let mut scalar_value = 0.0;
        for (j, &kj) in ket.iter().enumerate() {
            let s_j = grid.node(j);
            if s_j < t {
                scalar_value += -delta_kernel(s_j, i + 1) * dt.sqrt() * kj;
            }
        }
        let mut factorial = 1.0;
        for q in 1..=(i + 1) {
            factorial *= q as f64;
        }
        let scalar_expected = (-t).powi(i as i32 + 1) / factorial * (-t / 2.0).exp();

        report.push(LemResiduals {
            i,
            operator_power: op_res,
            composed_functional: comp_res,
            scalar: (scalar_value - scalar_expected).abs(),
            scalar_value,
            scalar_expected,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::boolean_moment;
    use approx::assert_abs_diff_eq;

    #[test]
    fn grid_validation() {
        assert!(matches!(
            FockGrid::new(1.0, 4),
            Err(FockError::GridTooCoarse { cells: 4 })
        ));
        assert!(matches!(
            FockGrid::new(-1.0, 64),
            Err(FockError::BadHorizon { .. })
        ));
        let grid = FockGrid::new(1.0, 64).unwrap();
        assert!(matches!(
            build_u(2.0, &grid),
            Err(FockError::TimeOutsideHorizon { .. })
        ));
    }

    #[test]
    fn operator_at_time_zero_is_the_identity() {
        let grid = FockGrid::new(1.0, 32).unwrap();
        let u = build_u(0.0, &grid).unwrap();
        assert_eq!(u.scalar(), Complex64::new(1.0, 0.0));
        assert!(u.row().iter().all(|v| v.norm() == 0.0));
        assert!(u.col().iter().all(|v| v.norm() == 0.0));
        let defect = u
            .assemble()
            .sub(&DenseMatrix::identity(u.dim()))
            .max_abs();
        assert_eq!(defect, 0.0);
        assert_eq!(vacuum_moment(&u, 5), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn first_vacuum_moment_is_the_scalar_block() {
        let grid = FockGrid::new(1.0, 128).unwrap();
        for &t in &[0.25, 0.7, 1.0] {
            let u = build_u(t, &grid).unwrap();
            assert_eq!(vacuum_moment(&u, 1), Complex64::new((-t / 2.0f64).exp(), 0.0));
        }
    }

    #[test]
    fn second_vacuum_moment_telescopes_to_the_exact_value() {
        // the bra–ket pairing makes n = 2 exact on aligned grids
        let grid = FockGrid::new(1.0, 512).unwrap();
        let u = build_u(1.0, &grid).unwrap();
        let m2 = vacuum_moment(&u, 2);
        assert_abs_diff_eq!(
            m2.re,
            (-1.0f64).exp() - (-0.5f64).exp(),
            epsilon = 1e-12
        );
        assert_eq!(m2.im, 0.0);
    }

    #[test]
    fn vacuum_moments_are_real_and_converge() {
        let t = 1.0;
        let mut errs = Vec::new();
        for &m in &[128usize, 256] {
            let grid = FockGrid::new(1.0, m).unwrap();
            let u = build_u(t, &grid).unwrap();
            let v = vacuum_moment(&u, 4);
            assert!(v.im.abs() < 1e-12);
            errs.push((v.re - boolean_moment(t, 4)).abs());
        }
        assert!(errs[1] < errs[0], "error must shrink as the grid refines");
    }

    #[test]
    fn recursion_matches_the_laguerre_formula() {
        for &t in &[0.25, 1.0, 3.0] {
            let rec = moment_recursion(t, 12);
            for n in 1..=12 {
                assert_abs_diff_eq!(rec[n - 1], boolean_moment(t, n), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn recursion_time_zero_is_all_ones() {
        assert_eq!(moment_recursion(0.0, 6), vec![1.0; 6]);
    }

    #[test]
    fn recursion_first_step_is_the_scalar() {
        for &t in &[0.3, 1.7] {
            assert_eq!(moment_recursion(t, 1)[0], (-t / 2.0f64).exp());
        }
    }

    #[test]
    fn unitarity_defect_is_first_order_in_dt() {
        let mut defects = Vec::new();
        for &m in &[128usize, 256, 512] {
            let grid = FockGrid::new(1.0, m).unwrap();
            defects.push(unitarity_defect(&build_u(1.0, &grid).unwrap()));
        }
        for pair in defects.windows(2) {
            let ratio = pair[1] / pair[0];
            assert!(
                (0.4..=0.6).contains(&ratio),
                "defect ratio {ratio} not ~1/2: {defects:?}"
            );
        }
        // fitted constant C = defect/dt stable across times
        for &t in &[0.5, 1.0] {
            let grid = FockGrid::new(1.0, 256).unwrap();
            let c = unitarity_defect(&build_u(t, &grid).unwrap()) / grid.dt();
            assert!(c > 0.5 && c < 2.0, "t={t}: C={c}");
        }
    }

    #[test]
    fn lem_power_identity_is_exact_at_i_one() {
        let grid = FockGrid::new(1.0, 64).unwrap();
        let report = verify_lem_identities(1.0, &grid, 3).unwrap();
        assert_eq!(report[0].i, 1);
        assert_eq!(report[0].operator_power, 0.0);
    }

    #[test]
    fn lem_scalar_value_at_i_one() {
        // -∫_0^t δ²_t(s) γ₁(s) ds = (t²/2)·e^{−t/2} = 0.5·e^{−1/2} at t = 1
        let grid = FockGrid::new(1.0, 256).unwrap();
        let report = verify_lem_identities(1.0, &grid, 1).unwrap();
        assert_abs_diff_eq!(
            report[0].scalar_value,
            0.5 * (-0.5f64).exp(),
            epsilon = 1e-3
        );
        assert_abs_diff_eq!(
            report[0].scalar_expected,
            0.5 * (-0.5f64).exp(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn lem_aggregate_residuals_halve_under_refinement() {
        let coarse = verify_lem_identities(1.0, &FockGrid::new(1.0, 64).unwrap(), 4).unwrap();
        let fine = verify_lem_identities(1.0, &FockGrid::new(1.0, 128).unwrap(), 4).unwrap();
        for (c, f) in coarse.iter().zip(&fine) {
            let ratio = f.max_residual() / c.max_residual();
            assert!(
                (0.4..=0.6).contains(&ratio),
                "i={}: ratio {ratio} (coarse {}, fine {})",
                c.i,
                c.max_residual(),
                f.max_residual()
            );
        }
    }

    #[test]
    fn dense_matrix_algebra() {
        let mut a = DenseMatrix::zeros(2);
        a.set(0, 0, Complex64::new(0.0, 1.0));
        a.set(0, 1, Complex64::new(2.0, 0.0));
        a.set(1, 1, Complex64::new(1.0, -1.0));
        let adj = a.adjoint();
        assert_eq!(adj.entry(0, 0), Complex64::new(0.0, -1.0));
        assert_eq!(adj.entry(1, 0), Complex64::new(2.0, 0.0));
        let prod = a.mul(&DenseMatrix::identity(2));
        assert_eq!(prod, a);
        assert_eq!(a.sub(&a).max_abs(), 0.0);
        let v = a.apply(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert_eq!(v[0], Complex64::new(0.0, 1.0));
    }
}
