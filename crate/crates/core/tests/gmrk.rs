mod common;

use common::{cosmod, decoupled, linear, method_grid, rel_err, VS, US};
use gmrk::butcher::{rk_step, IVProblem};
use gmrk::gmrk::{
    calibrate_sigma2, correction_epsilon, limit_posterior_cov, limit_posterior_mean, step, third_order_node, GmrkConfig,
    Method, Mode,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use std::sync::Arc;

fn limit(method: Method, h: f64) -> GmrkConfig {
    GmrkConfig::new(method, Mode::Limit, h).unwrap()
}

fn finite(method: Method, tau: f64, h: f64) -> GmrkConfig {
    GmrkConfig::new(method, Mode::FiniteTau { tau }, h).unwrap()
}

fn one(x: f64) -> DVector<f64> {
    DVector::from_element(1, x)
}

#[test]
fn limit_steps_equal_runge_kutta() {
    for prob in [linear(), cosmod()] {
        for m in method_grid() {
            let tab = m.tableau().unwrap();
            for (t0, x0, h) in [(0.0, 1.0, 1.0), (0.7, -0.4, 0.3), (2.0, 2.5, 0.05)] {
                let g = step(&limit(m, h), &prob, t0, &one(x0)).unwrap();
                let rk = rk_step(&tab, &prob, t0, &one(x0), h).unwrap();
                assert!(rel_err(g.x1[0], rk.x_next[0]) <= 1e-12, "{m:?} h={h}: {} vs {}", g.x1[0], rk.x_next[0]);
                for (nd, x) in g.nodes.iter().zip(&rk.nodes) {
                    assert!((nd.x[0] - x[0]).abs() <= 1e-12 * x[0].abs().max(1.0), "{m:?} node {}", nd.c);
                }
                for (b, want) in g.weights_b.iter().zip(&tab.b) {
                    assert!((b - want).abs() <= 1e-12 * want.abs().max(1.0), "{m:?}: b {b} vs {want}");
                }
            }
        }
    }
}

#[test]
fn worked_examples() {
    let g = step(&limit(Method::Euler, 1.0), &linear(), 0.0, &one(1.0)).unwrap();
    assert_eq!((g.x1[0], g.weights_b.clone()), (0.5, vec![1.0]));
    let g = step(&limit(Method::SecondOrder { alpha: 0.5 }, 1.0), &linear(), 0.0, &one(1.0)).unwrap();
    assert_eq!(g.weights_b, vec![0.0, 1.0]);
    assert_eq!(g.x1[0], 0.625);
    let g = step(&limit(Method::ThirdOrder { u: 0.5, v: 1.0 }, 1.0), &linear(), 0.0, &one(1.0)).unwrap();
    for (b, want) in g.weights_b.iter().zip([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]) {
        assert!((b - want).abs() <= 1e-12);
    }
}

#[test]
fn limit_means_in_closed_form() {
    let (h, alpha, x0, y1, y2) = (0.8, 0.3, 1.2, -0.7, 0.4);
    let m = Method::SecondOrder { alpha };
    for s in [-0.3, 0.0, 0.1, 0.24, 0.5, 0.8] {
        let want = x0 + (s - s * s / (2.0 * h * alpha)) * y1 + s * s / (2.0 * h * alpha) * y2;
        assert!((limit_posterior_mean(&m, h, x0, &[y1, y2], s).unwrap() - want).abs() <= 1e-15);
    }
    let m3 = Method::ThirdOrder { u: 0.5, v: 1.0 };
    assert_eq!(limit_posterior_mean(&m3, h, x0, &[y1], 0.3).unwrap(), x0 + 0.3 * y1);
    assert!(limit_posterior_mean(&Method::Euler, h, x0, &[y1, y2], 0.3).is_err());
}

#[test]
fn second_order_covariance_before_the_step() {
    let (h, alpha) = (1.0, 0.5);
    let m = Method::SecondOrder { alpha };
    for (s, s2) in [(-0.2, -0.7), (-1.0, -1.5), (-0.4, -0.4)] {
        let want = -(s * s) * (s * s * s - 5.0 * s * s * s2 + 10.0 * s * s2 * s2 - 10.0 * h * alpha * s2 * s2) / 120.0;
        let got = limit_posterior_cov(&m, h, s, s2).unwrap();
        assert!((got - want).abs() <= 1e-14, "({s}, {s2}): {got} vs {want}");
    }
}

#[test]
fn finite_offset_converges_to_the_limit() {
    let m = Method::SecondOrder { alpha: 0.5 };
    let h = 1.0;
    let lim = step(&limit(m, h), &linear(), 0.0, &one(1.0)).unwrap().weights_b;
    let mut prev = f64::INFINITY;
    for tau in [10.0, 100.0, 1e3, 1e4] {
        let fin = step(&finite(m, tau * h, h), &linear(), 0.0, &one(1.0)).unwrap().weights_b;
        let dev = fin.iter().zip(&lim).map(|(a, b)| (a - b).abs() * h).fold(0.0, f64::max);
        assert!(dev < prev, "tau={tau}: {dev} !< {prev}");
        prev = dev;
    }
    assert!(prev < 1e-3 * h);
}

#[test]
fn once_integrated_prior_needs_no_limit() {
    for tau in [0.5, 3.0, 40.0] {
        let g = step(&finite(Method::Euler, tau, 0.4), &cosmod(), 0.3, &one(1.1)).unwrap();
        let rk = rk_step(&Method::Euler.tableau().unwrap(), &cosmod(), 0.3, &one(1.1), 0.4).unwrap();
        assert_eq!(g.x1[0], rk.x_next[0]);
        assert_eq!(g.weights_b, vec![1.0]);
    }
}

#[test]
fn limit_covariance_matches_a_distant_origin() {
    let h = 0.5;
    let offsets = [-0.5, 0.0, 0.2, 0.45, 0.6, 1.0, 1.4];
    for m in method_grid() {
        let fin = step(&finite(m, 1e6 * h, h), &linear(), 0.0, &one(1.0)).unwrap();
        let scale = limit_posterior_cov(&m, h, h, h).unwrap();
        for &a in &offsets {
            for &b in &offsets {
                let (s, s2) = (a * h, b * h);
                let want = fin.cov_unit(s, s2).unwrap();
                let got = limit_posterior_cov(&m, h, s, s2).unwrap();
                assert!((got - want).abs() <= 1e-4 * want.abs().max(scale), "{m:?} ({a}, {b}): {got} vs {want}");
            }
        }
    }
}

#[test]
fn covariance_branches_agree_at_seams() {
    let h = 0.7;
    for m in method_grid() {
        let seams: Vec<f64> = std::iter::once(0.0).chain(m.nodes()).chain(std::iter::once(1.0)).map(|c| c * h).collect();
        let probes = [-0.3 * h, 0.13 * h, 0.55 * h, 0.95 * h, 1.2 * h];
        let delta = 1e-11 * h;
        for &z in &seams {
            for &other in probes.iter().chain(&seams) {
                let lo = limit_posterior_cov(&m, h, z - delta, other).unwrap();
                let hi = limit_posterior_cov(&m, h, z + delta, other).unwrap();
                let at = limit_posterior_cov(&m, h, z, other).unwrap();
                let scale = limit_posterior_cov(&m, h, h, h).unwrap();
                assert!((lo - hi).abs() <= 1e-9 * scale, "{m:?} seam {z} vs {other}: {lo} {hi}");
                assert!((lo - at).abs() <= 1e-9 * scale);
            }
        }
    }
}

#[test]
fn step_posterior_is_proper() {
    for prob in [linear(), cosmod()] {
        for m in method_grid() {
            let h = 0.6;
            let g = step(&limit(m, h), &prob, 0.2, &one(0.9)).unwrap();
            assert!(g.variance_at_end[0].is_finite() && g.variance_at_end[0] >= 0.0);
            let ts: Vec<f64> = (0..5).map(|i| g.t0 + h * i as f64 / 4.0).collect();
            let k = DMatrix::from_fn(5, 5, |i, j| g.cov_unit(ts[i], ts[j]).unwrap());
            assert!((&k - k.transpose()).amax() <= 1e-12 * k.amax());
            let min = k.clone().symmetric_eigenvalues().min();
            assert!(min >= -1e-9 * k.amax().max(f64::MIN_POSITIVE), "{m:?}: min eigenvalue {min}");
        }
    }
}

#[test]
fn calibration_matches_the_constant_derivative() {
    let h = 0.5;
    for m in method_grid() {
        let p = m.order();
        let g = step(&limit(m, h), &cosmod(), 0.4, &one(1.3)).unwrap();
        let d = h / 8.0;
        // p-th forward differences of a degree-p polynomial are constant.
        let diffs: Vec<f64> = (0..5)
            .map(|k| {
                let start = g.t0 + k as f64 * d * 0.5;
                let vals: Vec<f64> = (0..=p).map(|i| g.mean(start + i as f64 * d).unwrap()[0]).collect();
                let mut v = vals;
                for _ in 0..p {
                    v = v.windows(2).map(|w| w[1] - w[0]).collect();
                }
                v[0] / d.powi(p as i32)
            })
            .collect();
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let spread = diffs.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
        assert!(spread <= 1e-8 * mean.abs(), "{m:?}: {diffs:?}");
        assert!(rel_err(mean * mean, g.sigma2[0]) <= 1e-6, "{m:?}: {} vs {}", mean * mean, g.sigma2[0]);
    }
}

#[test]
fn calibration_examples() {
    let g = step(&limit(Method::Euler, 0.3), &linear(), 0.0, &one(1.7)).unwrap();
    let y1 = -0.85f64;
    assert!(rel_err(g.sigma2[0], y1 * y1) <= 1e-12);
    let (h, alpha, y1, y2) = (0.4f64, 0.7, 0.3, -1.1);
    let want = ((y2 - y1) / (h * alpha)).powi(2);
    assert!(rel_err(calibrate_sigma2(&Method::SecondOrder { alpha }, h, &[y1, y2]).unwrap(), want) <= 1e-12);
    let zero = IVProblem::new(Arc::new(|x: &DVector<f64>, _| DVector::zeros(x.len())), 0.0, one(2.0));
    for m in method_grid() {
        let g = step(&limit(m, 0.5), &zero, 0.0, &one(2.0)).unwrap();
        assert_eq!((g.sigma2[0], g.variance_at_end[0], g.x1[0]), (0.0, 0.0, 2.0));
    }
}

#[test]
fn corrected_third_node() {
    assert_eq!(correction_epsilon(0.5, 2.0 / 3.0).unwrap(), 0.0);
    assert_eq!(correction_epsilon(0.5, 1.0).unwrap(), -1.0);
    let mean = one(0.8);
    let same = third_order_node(0.4, 2.0 / 3.0, 0.5, &mean, &one(1.0), &one(-3.0)).unwrap();
    assert_eq!(same, mean);
    for &u in &US {
        for &v in &VS {
            let m = Method::ThirdOrder { u, v };
            for prob in [linear(), cosmod()] {
                let g = step(&limit(m, 0.9), &prob, 0.1, &one(1.4)).unwrap();
                let rk = rk_step(&m.tableau().unwrap(), &prob, 0.1, &one(1.4), 0.9).unwrap();
                assert!((g.nodes[2].x[0] - rk.nodes[2][0]).abs() <= 1e-12 * rk.nodes[2][0].abs().max(1.0));
                let at_mean = limit_posterior_mean(&m, 0.9, 1.4, &[g.nodes[0].y[0], g.nodes[1].y[0]], v * 0.9).unwrap();
                if v == 2.0 / 3.0 {
                    assert!((g.nodes[2].x[0] - at_mean).abs() <= 4.0 * f64::EPSILON * at_mean.abs());
                }
            }
        }
    }
}

#[test]
fn lower_order_nodes_sit_on_the_running_mean() {
    let h = 0.6;
    for m in method_grid().into_iter().filter(|m| m.order() <= 2) {
        let g = step(&limit(m, h), &cosmod(), 0.0, &one(1.0)).unwrap();
        let mut ys = Vec::new();
        for nd in &g.nodes {
            let want = limit_posterior_mean(&m, h, 1.0, &ys, nd.c * h).unwrap();
            assert!((nd.x[0] - want).abs() <= 4.0 * f64::EPSILON * want.abs().max(1.0));
            ys.push(nd.y[0]);
        }
    }
}

#[test]
fn local_error_order() {
    let hs = [0.2f64, 0.1, 0.05, 0.025];
    let prob = linear();
    for m in [Method::Euler, Method::SecondOrder { alpha: 0.5 }, Method::ThirdOrder { u: 0.5, v: 1.0 }] {
        let errs: Vec<f64> = hs
            .iter()
            .map(|&h| (step(&limit(m, h), &prob, 0.0, &one(1.0)).unwrap().x1[0] - (-0.5 * h).exp()).abs())
            .collect();
        let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
        let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let (mx, my) = (xs.iter().sum::<f64>() / 4.0, ys.iter().sum::<f64>() / 4.0);
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        let want = m.order() as f64 + 1.0;
        assert!((slope - want).abs() <= 0.2, "{m:?}: slope {slope}");
    }
}

#[test]
fn decoupled_dimensions_match_scalar_solves() {
    let p = decoupled();
    for m in method_grid() {
        for cfg in [limit(m, 0.4), finite(m, 25.0, 0.4)] {
            let joint = step(&cfg, &p, 0.0, &p.x0).unwrap();
            for (d, rate) in [-0.5, -1.0].into_iter().enumerate() {
                let scalar = IVProblem::new(Arc::new(move |x: &DVector<f64>, _| x * rate), 0.0, one(p.x0[d]));
                let s = step(&cfg, &scalar, 0.0, &scalar.x0).unwrap();
                assert!((joint.x1[d] - s.x1[0]).abs() <= 1e-12 * s.x1[0].abs());
                assert!((joint.std(0.3).unwrap()[d] - s.std(0.3).unwrap()[0]).abs() <= 1e-12 * s.std(0.3).unwrap()[0].max(1e-300));
            }
        }
    }
}

#[test]
fn invalid_configurations_are_rejected() {
    assert!(GmrkConfig::new(Method::SecondOrder { alpha: 0.0 }, Mode::Limit, 1.0).is_err());
    assert!(GmrkConfig::new(Method::ThirdOrder { u: 2.0 / 3.0, v: 0.9 }, Mode::Limit, 1.0).is_err());
    assert!(GmrkConfig::new(Method::Euler, Mode::Limit, 0.0).is_err());
    assert!(GmrkConfig::new(Method::Euler, Mode::FiniteTau { tau: 0.0 }, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn limit_mean_reproduces_gradients(alpha in 0.1f64..1.0, h in 0.05f64..2.0, x0 in -3.0f64..3.0, y1 in -3.0f64..3.0, y2 in -3.0f64..3.0) {
        let m = Method::SecondOrder { alpha };
        let mean = |s: f64| limit_posterior_mean(&m, h, x0, &[y1, y2], s).unwrap();
        let e = 1e-6 * h;
        for (s, y) in [(0.0, y1), (alpha * h, y2)] {
            let fd = (mean(s + e) - mean(s - e)) / (2.0 * e);
            prop_assert!((fd - y).abs() <= 1e-6 * y.abs().max(1.0));
        }
        prop_assert_eq!(mean(0.0), x0);
    }

    #[test]
    fn end_variance_is_nonnegative(u in 0.1f64..1.0, v in 0.1f64..1.0, h in 0.1f64..2.0) {
        prop_assume!((u - v).abs() > 0.05 && (u - 2.0 / 3.0).abs() > 0.05);
        let var = limit_posterior_cov(&Method::ThirdOrder { u, v }, h, h, h).unwrap();
        prop_assert!(var.is_finite());
        prop_assert!(var >= -1e-12 * h.powi(7));
    }
}
