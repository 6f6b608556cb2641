//! One GMRK step: Runge-Kutta stages chosen as Gaussian process posterior means.

mod limit;
mod limit3;

use nalgebra::{DMatrix, DVector};
use num_traits::One;
use serde::{Deserialize, Serialize};

pub use limit::{calibrate_sigma2, mean_weights as limit_mean_weights, posterior_mean as limit_posterior_mean};

use crate::butcher::{IVProblem, Tableau};
use crate::error::{domain, Result};
use crate::gp::{multivariate_posterior, DiffusePosterior, ObservationSet, Posterior, Site, SiteKind};
use crate::kernels::IntegratedWiener;
use crate::scalar::{Exact, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Euler,
    SecondOrder { alpha: f64 },
    ThirdOrder { u: f64, v: f64 },
}

impl Method {
    pub fn order(&self) -> usize {
        match self {
            Method::Euler => 1,
            Method::SecondOrder { .. } => 2,
            Method::ThirdOrder { .. } => 3,
        }
    }

    pub fn tableau(&self) -> Result<Tableau> {
        match *self {
            Method::Euler => Ok(Tableau::euler()),
            Method::SecondOrder { alpha } => Tableau::second_order(alpha),
            Method::ThirdOrder { u, v } => Tableau::third_order(u, v),
        }
    }

    /// Stage offsets `c` in units of `h`.
    pub fn nodes(&self) -> Vec<f64> {
        match *self {
            Method::Euler => vec![0.0],
            Method::SecondOrder { alpha } => vec![0.0, alpha],
            Method::ThirdOrder { u, v } => vec![0.0, u, v],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Mode {
    /// Process origin infinitely far before the step; reproduces RK exactly.
    Limit,
    /// Process origin `tau` before the step start. Solved in exact arithmetic.
    FiniteTau { tau: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmrkConfig {
    pub method: Method,
    pub mode: Mode,
    pub h: f64,
}

impl GmrkConfig {
    pub fn new(method: Method, mode: Mode, h: f64) -> Result<Self> {
        let cfg = Self { method, mode, h };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return domain(format!("step size must be positive and finite, got {}", self.h));
        }
        self.method.tableau()?;
        if let Mode::FiniteTau { tau } = self.mode {
            if !(tau > 0.0 && tau.is_finite()) {
                return domain(format!("tau must be positive and finite, got {tau}"));
            }
        }
        Ok(())
    }
}

/// Offset of the third node from the posterior mean, per unit `h (y2 - y1)`.
pub fn correction_epsilon(u: f64, v: f64) -> Result<f64> {
    if 3.0 * u - 2.0 == 0.0 {
        return domain("u = 2/3 leaves the node correction undefined");
    }
    Ok(v / 2.0 * (3.0 * v - 2.0) / (3.0 * u - 2.0))
}

/// Third evaluation node from the posterior mean at `t0 + h v` after `(x0, y1, y2)`.
///
/// The mean carries `h v^2 / (2u)` on `y2` while the tableau needs `h w32`;
/// the difference is exactly `h epsilon(v)`, which is removed here.
pub fn third_order_node(u: f64, v: f64, h: f64, mean: &DVector<f64>, y1: &DVector<f64>, y2: &DVector<f64>) -> Result<DVector<f64>> {
    let eps = correction_epsilon(u, v)?;
    Ok(mean - (y2 - y1) * (h * eps))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    /// Offset in units of `h`.
    pub c: f64,
    pub x: DVector<f64>,
    pub y: DVector<f64>,
}

#[derive(Debug, Clone)]
enum StepPosterior {
    Limit { ys: Vec<DVector<f64>> },
    Finite { tau: Exact, posteriors: Vec<Posterior<Exact, IntegratedWiener<Exact>>> },
}

#[derive(Debug, Clone)]
pub struct StepResult {
    pub config: GmrkConfig,
    pub t0: f64,
    pub x0: DVector<f64>,
    pub x1: DVector<f64>,
    pub nodes: Vec<Node>,
    /// Weight of each gradient in `x1 = x0 + h sum_i b_i y_i`.
    pub weights_b: Vec<f64>,
    pub sigma2: DVector<f64>,
    pub variance_at_end: DVector<f64>,
    posterior: StepPosterior,
}

impl StepResult {
    pub fn h(&self) -> f64 {
        self.config.h
    }

    pub fn t1(&self) -> f64 {
        self.t0 + self.config.h
    }

    /// Posterior mean at time `t`.
    pub fn mean(&self, t: f64) -> Result<DVector<f64>> {
        let s = t - self.t0;
        match &self.posterior {
            StepPosterior::Limit { ys } => {
                let w = limit::mean_weights(&self.config.method, ys.len(), self.config.h, s)?;
                let mut m = &self.x0 * w[0];
                for (y, wi) in ys.iter().zip(&w[1..]) {
                    m.axpy(*wi, y, 1.0);
                }
                Ok(m)
            }
            StepPosterior::Finite { tau, posteriors } => {
                let ts = tau.clone() + Exact::from_f64_exact(s);
                posteriors.iter().map(|p| p.mean(&ts).map(|v| v.to_f64_lossy())).collect::<Result<Vec<_>>>().map(DVector::from_vec)
            }
        }
    }

    /// Posterior covariance at unit output scale.
    pub fn cov_unit(&self, t: f64, t2: f64) -> Result<f64> {
        let (s, s2) = (t - self.t0, t2 - self.t0);
        match &self.posterior {
            StepPosterior::Limit { .. } => limit_posterior_cov(&self.config.method, self.config.h, s, s2),
            StepPosterior::Finite { tau, posteriors } => {
                let a = tau.clone() + Exact::from_f64_exact(s);
                let b = tau.clone() + Exact::from_f64_exact(s2);
                Ok(posteriors[0].cov(&a, &b)?.to_f64_lossy())
            }
        }
    }

    /// Per-dimension covariance, `sigma2 * cov_unit`.
    pub fn cov(&self, t: f64, t2: f64) -> Result<DVector<f64>> {
        Ok(&self.sigma2 * self.cov_unit(t, t2)?)
    }

    pub fn std(&self, t: f64) -> Result<DVector<f64>> {
        Ok(self.cov(t, t)?.map(|v| v.max(0.0).sqrt()))
    }
}

/// Unit covariance of the final limit posterior at offsets `s`, `s2` from the step start.
pub fn limit_posterior_cov(method: &Method, h: f64, s: f64, s2: f64) -> Result<f64> {
    if let Some(v) = limit::posterior_cov(method, h, s, s2)? {
        return Ok(v);
    }
    let mut sites = vec![Site::value(0.0)];
    sites.extend(method.nodes().iter().map(|c| Site::derivative(c * h)));
    let dummy = DMatrix::zeros(sites.len(), 1);
    let p = DiffusePosterior::fit(method.order() as u8, &sites, &dummy)?;
    Ok(p.cov_unit(s, s2))
}

/// Advances `problem` by one step of size `cfg.h` from `(t0, x0)`.
pub fn step(cfg: &GmrkConfig, problem: &IVProblem, t0: f64, x0: &DVector<f64>) -> Result<StepResult> {
    cfg.validate()?;
    if x0.len() != problem.dim() {
        return domain(format!("state has {} components, problem has {}", x0.len(), problem.dim()));
    }
    match cfg.mode {
        Mode::Limit => limit_step(cfg, problem, t0, x0),
        Mode::FiniteTau { tau } => finite_step(cfg, tau, problem, t0, x0),
    }
}

fn limit_step(cfg: &GmrkConfig, problem: &IVProblem, t0: f64, x0: &DVector<f64>) -> Result<StepResult> {
    let h = cfg.h;
    let method = cfg.method;
    let c = method.nodes();
    let p = method.order();
    let mut ys: Vec<DVector<f64>> = Vec::with_capacity(p);
    let mut nodes = Vec::with_capacity(p);
    for i in 0..p {
        let w = limit::mean_weights(&method, i, h, c[i] * h)?;
        let mut x = x0 * w[0];
        for (y, wi) in ys.iter().zip(&w[1..]) {
            x.axpy(*wi, y, 1.0);
        }
        if i == 2 {
            let Method::ThirdOrder { u, v } = method else { unreachable!("three stages") };
            x = third_order_node(u, v, h, &x, &ys[0], &ys[1])?;
        }
        let y = problem.eval(&x, t0 + c[i] * h)?;
        nodes.push(Node { c: c[i], x, y: y.clone() });
        ys.push(y);
    }
    let w = limit::mean_weights(&method, p, h, h)?;
    let mut x1 = x0 * w[0];
    for (y, wi) in ys.iter().zip(&w[1..]) {
        x1.axpy(*wi, y, 1.0);
    }
    let weights_b = w[1..].iter().map(|wi| wi / h).collect();
    let sigma2 = DVector::from_fn(x0.len(), |d, _| {
        let yd: Vec<f64> = ys.iter().map(|y| y[d]).collect();
        calibrate_sigma2(&method, h, &yd).expect("one gradient per stage")
    });
    let unit_end = limit_posterior_cov(&method, h, h, h)?;
    Ok(StepResult {
        config: *cfg,
        t0,
        x0: x0.clone(),
        x1,
        nodes,
        weights_b,
        variance_at_end: &sigma2 * unit_end,
        sigma2,
        posterior: StepPosterior::Limit { ys },
    })
}

fn finite_step(cfg: &GmrkConfig, tau: f64, problem: &IVProblem, t0: f64, x0: &DVector<f64>) -> Result<StepResult> {
    let h = cfg.h;
    let method = cfg.method;
    let c = method.nodes();
    let p = method.order();
    let n = x0.len();
    let tau_e = Exact::from_f64_exact(tau);
    let at = |s: f64| tau_e.clone() + Exact::from_f64_exact(s);
    let kernel = IntegratedWiener::new(p as u8, Exact::one())?;

    let mut obs: Vec<ObservationSet<Exact>> =
        (0..n).map(|d| ObservationSet::new().with_value(tau_e.clone(), Exact::from_f64_exact(x0[d]))).collect();
    let mut nodes: Vec<Node> = Vec::with_capacity(p);
    let mut ys: Vec<DVector<f64>> = Vec::with_capacity(p);
    for i in 0..p {
        let post = multivariate_posterior(&kernel, &obs)?;
        let ts = at(c[i] * h);
        let mut x = DVector::from_vec(
            post.iter().map(|q| q.mean(&ts).map(|m| m.to_f64_lossy())).collect::<Result<Vec<_>>>()?,
        );
        if i == 2 {
            let Method::ThirdOrder { u, v } = method else { unreachable!("three stages") };
            x = third_order_node(u, v, h, &x, &ys[0], &ys[1])?;
        }
        let y = problem.eval(&x, t0 + c[i] * h)?;
        for (d, o) in obs.iter_mut().enumerate() {
            o.derivatives.push((ts.clone(), Exact::from_f64_exact(y[d])));
        }
        nodes.push(Node { c: c[i], x, y: y.clone() });
        ys.push(y);
    }
    let posteriors = multivariate_posterior(&kernel, &obs)?;
    let end = at(h);
    let x1 = DVector::from_vec(
        posteriors.iter().map(|q| q.mean(&end).map(|m| m.to_f64_lossy())).collect::<Result<Vec<_>>>()?,
    );
    let w = posteriors[0].weights(&end, SiteKind::Value)?;
    let weights_b = (1..=p).map(|i| w[i].to_f64_lossy() / h).collect();
    let sigma2 = DVector::from_fn(n, |d, _| {
        let yd: Vec<f64> = ys.iter().map(|y| y[d]).collect();
        calibrate_sigma2(&method, h, &yd).expect("one gradient per stage")
    });
    let unit_end = posteriors[0].cov(&end, &end)?.to_f64_lossy();
    Ok(StepResult {
        config: *cfg,
        t0,
        x0: x0.clone(),
        x1,
        nodes,
        weights_b,
        variance_at_end: &sigma2 * unit_end,
        sigma2,
        posterior: StepPosterior::Finite { tau: tau_e, posteriors },
    })
}
