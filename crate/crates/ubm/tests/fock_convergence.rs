//! Full-range grid convergence of the Fock vacuum moments: for fixed
//! `n ≤ 8` the error against the closed-form moments decreases essentially
//! monotonically as the grid doubles from 256 to 4096 cells, at empirical
//! order ≥ 0.9. (`n = 1, 2` are reproduced exactly on aligned grids — the
//! scalar block and the telescoping bra–ket pairing — so the order fit
//! starts at `n = 3`.)

use ubm::boolean::boolean_moment;
use ubm::fock::{build_u, vacuum_moment, FockGrid};

#[test]
fn vacuum_moments_converge_at_first_order_up_to_m_4096() {
    let t = 1.0;
    let grids = [256usize, 512, 1024, 2048, 4096];
    let mut errs = vec![vec![0.0f64; grids.len()]; 8];
    for (gi, &m) in grids.iter().enumerate() {
        let grid = FockGrid::new(1.0, m).unwrap();
        let u = build_u(t, &grid).unwrap();
        for n in 1..=8 {
            let v = vacuum_moment(&u, n as u32);
            assert!(v.im.abs() < 1e-12, "vacuum moments are real");
            errs[n - 1][gi] = (v.re - boolean_moment(t, n)).abs();
        }
    }

    for e in errs[0].iter().chain(&errs[1]) {
        assert!(*e < 1e-12, "n = 1, 2 are exact up to roundoff");
    }

    for n in 3..=8 {
        let e = &errs[n - 1];
        for w in e.windows(2) {
            assert!(w[1] < w[0] * 1.1, "n={n}: errors must not grow: {e:?}");
        }
        // least-squares order over the five grids
        let xs: Vec<f64> = grids.iter().map(|&m| (m as f64).log2()).collect();
        let ys: Vec<f64> = e.iter().map(|v| v.log2()).collect();
        let mx = xs.iter().sum::<f64>() / xs.len() as f64;
        let my = ys.iter().sum::<f64>() / ys.len() as f64;
        let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let order = -(num / den);
        assert!(order >= 0.9, "n={n}: empirical order {order} below 0.9: {e:?}");
    }
}
