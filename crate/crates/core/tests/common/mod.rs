//! Oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use gmrk::butcher::IVProblem;
use gmrk::gmrk::Method;
use gmrk::gp::{ObservationSet, SiteKind};
use gmrk::problems::ProblemSpec;
use gmrk::state_space::Measurement;
use gmrk::{Exact, Real};
use nalgebra::DVector;

pub const ALPHAS: [f64; 4] = [0.3, 0.5, 0.7, 1.0];
pub const US: [f64; 3] = [0.4, 0.5, 0.9];
pub const VS: [f64; 3] = [0.6, 2.0 / 3.0, 1.0];

/// Every method of the parameter grids.
pub fn method_grid() -> Vec<Method> {
    let mut out = vec![Method::Euler];
    out.extend(ALPHAS.iter().map(|&alpha| Method::SecondOrder { alpha }));
    for &u in &US {
        for &v in &VS {
            out.push(Method::ThirdOrder { u, v });
        }
    }
    out
}

pub fn linear() -> IVProblem {
    ProblemSpec::named("linear").build().unwrap()
}

pub fn cosmod() -> IVProblem {
    ProblemSpec::named("cosmod").build().unwrap()
}

pub fn decoupled() -> IVProblem {
    let rates = DVector::from_vec(vec![-0.5, -1.0]);
    let r2 = rates.clone();
    IVProblem::new(Arc::new(move |x: &DVector<f64>, _| x.component_mul(&rates)), 0.0, DVector::from_vec(vec![1.0, 2.0]))
        .with_exact(Arc::new(move |t| DVector::from_vec(vec![(r2[0] * t).exp(), 2.0 * (r2[1] * t).exp()])))
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(a.abs()).max(1e-300)
}

/// Relative error with an absolute floor `scale`.
pub fn scaled_err(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / b.abs().max(scale)
}

/// Weights `w_i` with `g'(x0) = sum_i w_i g(x0 + i delta)`, exact for polynomials of degree `<= d`.
pub fn lagrange_derivative_weights(d: usize, delta: &Exact) -> Vec<Exact> {
    let nodes: Vec<Exact> = (0..=d).map(|i| Exact::int(i as i64)).collect();
    let zero = Exact::int(0);
    (0..=d)
        .map(|i| {
            let mut acc = Exact::int(0);
            for k in 0..=d {
                if k == i {
                    continue;
                }
                let mut term = Exact::int(1) / (nodes[i].clone() - nodes[k].clone());
                for m in 0..=d {
                    if m != i && m != k {
                        term = term * (zero.clone() - nodes[m].clone()) / (nodes[i].clone() - nodes[m].clone());
                    }
                }
                acc += term;
            }
            acc / delta.clone()
        })
        .collect()
}

/// Exact partial derivatives of a bivariate polynomial piece by interpolation.
pub fn exact_partials(g: impl Fn(&Exact, &Exact) -> Exact, a: &Exact, b: &Exact, delta: &Exact) -> (Exact, Exact, Exact) {
    let d = 7;
    let w = lagrange_derivative_weights(d, delta);
    let step = |i: usize| delta.clone() * Exact::int(i as i64);
    let mut da = Exact::int(0);
    let mut db = Exact::int(0);
    let mut dab = Exact::int(0);
    for i in 0..=d {
        da += w[i].clone() * g(&(a.clone() + step(i)), b);
        db += w[i].clone() * g(a, &(b.clone() + step(i)));
        for j in 0..=d {
            dab += w[i].clone() * w[j].clone() * g(&(a.clone() + step(i)), &(b.clone() + step(j)));
        }
    }
    (da, db, dab)
}

/// Gauss-Legendre nodes and weights on `[0, h]`.
pub fn gauss_legendre(n: usize, h: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * h * (x + 1.0), 0.5 * h * w));
    }
    out
}

pub fn to_f64(x: &Exact) -> f64 {
    x.to_f64_lossy()
}

/// Value at `tau` and `q` gradients at nodes `0, 1/2, 1` of a step of size `h`.
pub fn step_measurements(q: u8, tau: &Exact, h: &Exact, data: &[f64]) -> Vec<Measurement<Exact>> {
    let nodes = [Exact::int(0), Exact::ratio(1, 2), Exact::int(1)];
    let mut obs = vec![Measurement { t: tau.clone(), kind: SiteKind::Value, value: Exact::from_f64_exact(data[0]) }];
    for i in 0..q as usize {
        obs.push(Measurement {
            t: tau.clone() + nodes[i].clone() * h.clone(),
            kind: SiteKind::Derivative,
            value: Exact::from_f64_exact(data[i + 1]),
        });
    }
    obs
}

pub fn as_observation_set(obs: &[Measurement<Exact>]) -> ObservationSet<Exact> {
    let mut set = ObservationSet::new();
    for o in obs {
        set = match o.kind {
            SiteKind::Value => set.with_value(o.t.clone(), o.value.clone()),
            SiteKind::Derivative => set.with_derivative(o.t.clone(), o.value.clone()),
        };
    }
    set
}
