mod common;

use std::time::Instant;

use common::{as_observation_set, gauss_legendre, step_measurements, to_f64};
use gmrk::gp::{posterior, SiteKind};
use gmrk::kernels::IntegratedWiener;
use gmrk::state_space::{filter_smooth, IntegratorSSM, Measurement};
use gmrk::{Exact, Real};
use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `sigma2 * int_0^h e^{F r} L L^T e^{F^T r} dr` by quadrature.
fn q_by_quadrature(q: usize, sigma2: f64, h: f64) -> DMatrix<f64> {
    let n = q + 1;
    let fact = |k: usize| (1..=k).product::<usize>() as f64;
    let mut out = DMatrix::zeros(n, n);
    for (r, w) in gauss_legendre(8, h) {
        let col = DVector::from_fn(n, |i, _| r.powi((q - i) as i32) / fact(q - i));
        out += &col * col.transpose() * (w * sigma2);
    }
    out
}

#[test]
fn process_noise_matches_quadrature() {
    for q in 0..=3u8 {
        for h in [0.1, 1.0] {
            let ssm = IntegratorSSM::new(q, 1.7).unwrap();
            let (a, qm) = ssm.discretize(&h);
            let oracle = q_by_quadrature(q as usize, 1.7, h);
            for (x, y) in qm.iter().zip(oracle.iter()) {
                assert!((x - y).abs() <= 1e-10 * y.abs().max(f64::MIN_POSITIVE), "q={q} h={h}: {x} vs {y}");
            }
            assert_eq!(qm, qm.transpose());
            assert!(qm.diagonal().iter().all(|d| *d > 0.0));
            assert!(qm.clone().symmetric_eigenvalues().min() >= -1e-12 * qm.amax());
            let fh = ssm.f() * h;
            let mut expm = DMatrix::identity(ssm.dim(), ssm.dim());
            let mut term = expm.clone();
            for k in 1..=q as usize {
                term = &term * &fh / k as f64;
                expm += &term;
            }
            assert!((a - expm).amax() <= 1e-15);
        }
    }
}

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / b.abs().max(scale)
}

#[test]
fn smoother_equals_batch_posterior() {
    let mut rng = StdRng::seed_from_u64(17);
    let h = Exact::ratio(1, 2);
    for q in 1..=3u8 {
        for mult in [10, 100] {
            let tau = Exact::int(mult) * h.clone();
            let data: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
            let obs = step_measurements(q, &tau, &h, &data);
            let grid: Vec<Exact> = (0..=8).map(|i| tau.clone() + h.clone() * Exact::ratio(i, 6)).collect();

            let batch = posterior(&IntegratedWiener::new(q, Exact::int(1)).unwrap(), &as_observation_set(&obs)).unwrap();
            let exact = filter_smooth(&IntegratorSSM::new(q, Exact::int(1)).unwrap(), &obs, &grid).unwrap();
            let obs64: Vec<Measurement<f64>> =
                obs.iter().map(|o| Measurement { t: to_f64(&o.t), kind: o.kind, value: to_f64(&o.value) }).collect();
            let grid64: Vec<f64> = grid.iter().map(to_f64).collect();
            let fast = filter_smooth(&IntegratorSSM::new(q, 1.0).unwrap(), &obs64, &grid64).unwrap();

            let var_scale = to_f64(&batch.variance(&grid[8]).unwrap());
            for ((t, e), f) in grid.iter().zip(&exact).zip(&fast) {
                let mean = batch.mean(t).unwrap();
                let var = batch.variance(t).unwrap();
                assert_eq!(e.mean, mean, "q={q} tau={mult}h");
                assert_eq!(e.var, var, "q={q} tau={mult}h");
                assert!(rel(f.mean, to_f64(&mean), 1.0) <= 1e-8, "q={q} tau={mult}h mean {} vs {}", f.mean, to_f64(&mean));
                assert!(rel(f.var, to_f64(&var), var_scale) <= 1e-8, "q={q} tau={mult}h var {} vs {}", f.var, to_f64(&var));
            }
        }
    }
}

#[test]
fn twice_integrated_grid_example() {
    let h = Exact::int(1);
    let tau = Exact::int(10);
    let obs = step_measurements(2, &tau, &h, &[0.75, -0.5, 0.25]);
    let grid: Vec<Exact> = (0..9).map(|i| tau.clone() + Exact::ratio(i, 4) - Exact::ratio(1, 2)).collect();
    let batch = posterior(&IntegratedWiener::new(2, Exact::int(1)).unwrap(), &as_observation_set(&obs)).unwrap();
    let out = filter_smooth(&IntegratorSSM::new(2, Exact::int(1)).unwrap(), &obs, &grid).unwrap();
    for (t, m) in grid.iter().zip(&out) {
        assert_eq!(m.t, *t);
        assert!(rel(to_f64(&m.mean), to_f64(&batch.mean(t).unwrap()), 1.0) <= 1e-8);
    }
}

#[test]
fn value_observation_is_reproduced() {
    let ssm = IntegratorSSM::new(3, 1.0).unwrap();
    let obs = [Measurement { t: 4.0, kind: SiteKind::Value, value: -1.25 }];
    let out = filter_smooth(&ssm, &obs, &[4.0]).unwrap();
    assert_eq!(out[0].mean, -1.25);
    assert!(out[0].var.abs() <= 1e-10 * gmrk::kernels::wiener_k(3, &4.0, &4.0));
}

#[test]
fn euler_step_through_the_filter() {
    let ssm = IntegratorSSM::new(1, 1.0).unwrap();
    let obs = [
        Measurement { t: 2.0, kind: SiteKind::Value, value: 0.5 },
        Measurement { t: 2.0, kind: SiteKind::Derivative, value: 3.0 },
    ];
    let out = filter_smooth(&ssm, &obs, &[2.25]).unwrap();
    assert_eq!(out[0].mean, 0.5 + 0.25 * 3.0);
}

#[test]
fn cost_is_linear_in_the_grid() {
    let ssm = IntegratorSSM::new(2, 1.0).unwrap();
    let obs: Vec<Measurement<f64>> = (0..20)
        .flat_map(|k| {
            let t = 10.0 + k as f64;
            [Measurement { t, kind: SiteKind::Value, value: 1.0 }, Measurement { t, kind: SiteKind::Derivative, value: -0.1 }]
        })
        .collect();
    let time = |m: usize| {
        let grid: Vec<f64> = (0..m).map(|i| 10.0 + 20.0 * i as f64 / m as f64).collect();
        (0..3)
            .map(|_| {
                let start = Instant::now();
                let out = filter_smooth(&ssm, &obs, &grid).unwrap();
                assert_eq!(out.len(), m);
                start.elapsed().as_secs_f64()
            })
            .fold(f64::INFINITY, f64::min)
    };
    time(500);
    let ratio = time(4000) / time(2000);
    assert!(ratio < 2.5, "doubling the grid took {ratio}x");
}
