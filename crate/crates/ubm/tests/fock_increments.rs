//! Increments of the grid operator family over disjoint time intervals
//! factorize in the vacuum state — the mechanism behind boolean independence
//! of the increments, exercised here as a two-interval smoke test: with
//! `P = U_t U_s* − 1` and `Q = U_v U_u* − 1` on disjoint `[s, t)`, `[u, v)`,
//! the mixed vacuum moments `Φ(P^k Q^l)` split into `Φ(P^k)·Φ(Q^l)` up to
//! grid error, and the increment expectation depends only on `t − s`.

use ubm::fock::{build_u, DenseMatrix, FockGrid};

fn factorization_residuals(cells: usize) -> Vec<f64> {
    let grid = FockGrid::new(1.0, cells).unwrap();
    let (s, t, u, v) = (0.25, 0.5, 0.625, 0.875);
    let id = DenseMatrix::identity(cells + 1);
    let p = build_u(t, &grid)
        .unwrap()
        .assemble()
        .mul(&build_u(s, &grid).unwrap().assemble().adjoint())
        .sub(&id);
    let q = build_u(v, &grid)
        .unwrap()
        .assemble()
        .mul(&build_u(u, &grid).unwrap().assemble().adjoint())
        .sub(&id);
    let p2 = p.mul(&p);
    let q2 = q.mul(&q);
    let mut out = Vec::new();
    for pk in [&p, &p2] {
        for ql in [&q, &q2] {
            let joint = pk.mul(ql).entry(0, 0);
            let split = pk.entry(0, 0) * ql.entry(0, 0);
            out.push((joint - split).norm());
        }
    }
    out
}

#[test]
fn disjoint_increments_factorize_in_the_vacuum() {
    let coarse = factorization_residuals(128);
    let fine = factorization_residuals(256);
    for (c, f) in coarse.iter().zip(&fine) {
        assert!(*f < 2e-3, "fine-grid factorization residual {f}");
        let ratio = f / c;
        assert!(
            (0.35..=0.65).contains(&ratio),
            "residual should shrink like dt: coarse {c}, fine {f}"
        );
    }
}

#[test]
fn increment_expectation_is_stationary() {
    let grid = FockGrid::new(1.0, 256).unwrap();
    let (s, t) = (0.25, 0.5);
    let incr = build_u(t, &grid)
        .unwrap()
        .assemble()
        .mul(&build_u(s, &grid).unwrap().assemble().adjoint())
        .entry(0, 0);
    assert!(incr.im.abs() < 1e-12);
    assert!((incr.re - (-(t - s) / 2.0f64).exp()).abs() < 1e-5);
}
