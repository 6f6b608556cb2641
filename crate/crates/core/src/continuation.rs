//! Multi-step solutions: naive chaining, smoothing and probabilistic continuation.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::butcher::{ExactSolution, IVProblem};
use crate::error::{domain, Error, Result};
use crate::gmrk::{calibrate_sigma2, step, GmrkConfig, Mode, StepResult};
use crate::gp::{DiffusePosterior, Site};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuationMode {
    Naive,
    Smoothing,
    Continuation,
}

/// One gradient evaluation `y = f(x, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub t: f64,
    pub x: DVector<f64>,
    pub y: DVector<f64>,
}

#[derive(Debug, Clone)]
struct Joint {
    posterior: DiffusePosterior,
    sigma2: DVector<f64>,
}

/// One sampled row of a trajectory, for a single state component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRow {
    pub t: f64,
    pub mean: f64,
    pub std: Option<f64>,
    pub truth: Option<f64>,
}

impl GridRow {
    pub fn abs_error(&self) -> Option<f64> {
        self.truth.map(|x| (x - self.mean).abs())
    }

    pub fn error_over_std(&self) -> Option<f64> {
        match (self.abs_error(), self.std) {
            (Some(e), Some(s)) => Some(e / s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub mode: ContinuationMode,
    pub config: GmrkConfig,
    pub t0: f64,
    pub n_steps: usize,
    /// GMRK steps; continuation keeps only the first.
    pub steps: Vec<StepResult>,
    pub evaluations: Vec<Evaluation>,
    joint: Option<Joint>,
}

impl Trajectory {
    pub fn h(&self) -> f64 {
        self.config.h
    }

    pub fn t_end(&self) -> f64 {
        self.endpoint(self.n_steps)
    }

    pub fn endpoint(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.config.h
    }

    fn check_range(&self, t: f64) -> Result<()> {
        let tol = 1e-12 * self.h();
        if !(t >= self.t0 - tol && t <= self.t_end() + tol) {
            return domain(format!("t = {t} lies outside [{}, {}]", self.t0, self.t_end()));
        }
        Ok(())
    }

    pub fn global_mean(&self, t: f64) -> Result<DVector<f64>> {
        self.check_range(t)?;
        if t == self.t0 {
            return Ok(self.steps[0].x0.clone());
        }
        match &self.joint {
            Some(j) => Ok(j.posterior.mean(t)),
            None => {
                let n = (((t - self.t0) / self.h()).floor() as usize).min(self.n_steps - 1);
                self.steps[n].mean(t)
            }
        }
    }

    /// Marginal standard deviation; `None` for naive chaining.
    pub fn global_std(&self, t: f64) -> Result<Option<DVector<f64>>> {
        self.check_range(t)?;
        Ok(self.joint.as_ref().map(|j| (&j.sigma2 * j.posterior.var_unit(t)).map(f64::sqrt)))
    }

    /// Output scale of the joint posterior, when there is one.
    pub fn sigma2(&self) -> Option<&DVector<f64>> {
        self.joint.as_ref().map(|j| &j.sigma2)
    }

    /// `resolution` samples per step for state component `component`.
    pub fn grid_dump(&self, component: usize, resolution: usize, exact: Option<&ExactSolution>) -> Result<Vec<GridRow>> {
        if resolution == 0 {
            return domain("grid resolution must be positive");
        }
        if component >= self.steps[0].x0.len() {
            return domain(format!("component {component} out of range"));
        }
        let total = self.n_steps * resolution;
        (0..=total)
            .map(|k| {
                let t = self.t0 + (k as f64 / resolution as f64) * self.h();
                let mean = self.global_mean(t)?[component];
                let std = self.global_std(t)?.map(|s| s[component]);
                let truth = exact.map(|f| f(t)[component]);
                Ok(GridRow { t, mean, std, truth })
            })
            .collect()
    }
}

/// Number of whole steps from `t0` to `t_end`; partial steps are rejected.
pub fn step_count(t0: f64, t_end: f64, h: f64) -> Result<usize> {
    let n = (t_end - t0) / h;
    let r = n.round();
    if !(r >= 1.0) || (n - r).abs() > 1e-9 * r.max(1.0) {
        return domain(format!("horizon {t0}..{t_end} is not a positive whole number of steps of {h}"));
    }
    Ok(r as usize)
}

fn at_step(index: usize) -> impl Fn(Error) -> Error {
    move |e| Error::AtStep { index, source: Box::new(e) }
}

fn chain(cfg: &GmrkConfig, prob: &IVProblem, n: usize) -> Result<Vec<StepResult>> {
    let mut steps = Vec::with_capacity(n);
    let mut x = prob.x0.clone();
    for k in 0..n {
        let t = prob.t0 + k as f64 * cfg.h;
        let s = step(cfg, prob, t, &x).map_err(|e| match e {
            Error::Domain(_) => e,
            other => at_step(k)(other),
        })?;
        x = s.x1.clone();
        steps.push(s);
    }
    Ok(steps)
}

fn evaluations(steps: &[StepResult]) -> Vec<Evaluation> {
    steps
        .iter()
        .flat_map(|s| {
            s.nodes.iter().map(move |nd| Evaluation { t: s.t0 + nd.c * s.h(), x: nd.x.clone(), y: nd.y.clone() })
        })
        .collect()
}

/// Index of a derivative site within `1e-9 h` of `t`.
fn find_derivative(sites: &[Site<f64>], t: f64, h: f64) -> Option<usize> {
    sites.iter().position(|s| s.kind.is_derivative() && (s.t - t).abs() <= 1e-9 * h)
}

fn require_limit(cfg: &GmrkConfig) -> Result<()> {
    if cfg.mode != Mode::Limit {
        return domain("joint posteriors use the limit prior; set mode to limit");
    }
    Ok(())
}

/// Restarts GMRK at every step endpoint. No joint posterior.
pub fn run_naive(cfg: &GmrkConfig, prob: &IVProblem, t_end: f64) -> Result<Trajectory> {
    cfg.validate()?;
    let n = step_count(prob.t0, t_end, cfg.h)?;
    let steps = chain(cfg, prob, n)?;
    Ok(Trajectory {
        mode: ContinuationMode::Naive,
        config: *cfg,
        t0: prob.t0,
        n_steps: n,
        evaluations: evaluations(&steps),
        steps,
        joint: None,
    })
}

/// Naive chaining, then one joint posterior over every gradient and every
/// step-start value, scaled by the first step's output scale.
pub fn run_smoothing(cfg: &GmrkConfig, prob: &IVProblem, t_end: f64) -> Result<Trajectory> {
    cfg.validate()?;
    require_limit(cfg)?;
    let n = step_count(prob.t0, t_end, cfg.h)?;
    let steps = chain(cfg, prob, n)?;
    let dim = prob.dim();
    let mut sites = Vec::new();
    let mut rows: Vec<DVector<f64>> = Vec::new();
    for s in &steps {
        sites.push(Site::value(s.t0));
        rows.push(s.x0.clone());
        for nd in &s.nodes {
            let t = s.t0 + nd.c * s.h();
            // A final node at c = 1 meets the next step's first node; the
            // later gradient, taken at the RK point itself, wins.
            match find_derivative(&sites, t, cfg.h) {
                Some(i) => rows[i] = nd.y.clone(),
                None => {
                    sites.push(Site::derivative(t));
                    rows.push(nd.y.clone());
                }
            }
        }
    }
    let values = DMatrix::from_fn(rows.len(), dim, |i, d| rows[i][d]);
    let posterior = DiffusePosterior::fit(cfg.method.order() as u8, &sites, &values)?;
    Ok(Trajectory {
        mode: ContinuationMode::Smoothing,
        config: *cfg,
        t0: prob.t0,
        n_steps: n,
        evaluations: evaluations(&steps),
        joint: Some(Joint { posterior, sigma2: steps[0].sigma2.clone() }),
        steps,
    })
}

/// One GMRK step, then gradients only, each evaluated at the running joint mean.
pub fn run_continuation(cfg: &GmrkConfig, prob: &IVProblem, t_end: f64) -> Result<Trajectory> {
    cfg.validate()?;
    require_limit(cfg)?;
    let n = step_count(prob.t0, t_end, cfg.h)?;
    let first = chain(cfg, prob, 1)?.pop().expect("one step");
    let q = cfg.method.order() as u8;
    let dim = prob.dim();
    let c = cfg.method.nodes();

    let mut sites = vec![Site::value(prob.t0)];
    let mut rows = vec![prob.x0.clone()];
    let mut evals = evaluations(std::slice::from_ref(&first));
    for e in &evals {
        sites.push(Site::derivative(e.t));
        rows.push(e.y.clone());
    }
    let fit = |sites: &[Site<f64>], rows: &[DVector<f64>]| {
        let values = DMatrix::from_fn(rows.len(), dim, |i, d| rows[i][d]);
        DiffusePosterior::fit(q, sites, &values)
    };
    let mut posterior = fit(&sites, &rows)?;
    let mut sigma2 = first.sigma2.clone();

    for k in 1..n {
        let tk = prob.t0 + k as f64 * cfg.h;
        let mut batch = Vec::with_capacity(c.len());
        for ci in &c {
            let t = tk + ci * cfg.h;
            if let Some(i) = find_derivative(&sites, t, cfg.h) {
                batch.push(rows[i].clone());
                continue;
            }
            let x = posterior.mean(t);
            let y = prob.eval(&x, t).map_err(at_step(k))?;
            sites.push(Site::derivative(t));
            rows.push(y.clone());
            batch.push(y.clone());
            evals.push(Evaluation { t, x, y });
            posterior = fit(&sites, &rows).map_err(at_step(k))?;
        }
        for d in 0..dim {
            let yd: Vec<f64> = batch.iter().map(|y| y[d]).collect();
            let est = calibrate_sigma2(&cfg.method, cfg.h, &yd)?;
            sigma2[d] = sigma2[d].max(est);
        }
    }

    Ok(Trajectory {
        mode: ContinuationMode::Continuation,
        config: *cfg,
        t0: prob.t0,
        n_steps: n,
        steps: vec![first],
        evaluations: evals,
        joint: Some(Joint { posterior, sigma2 }),
    })
}

pub fn run(mode: ContinuationMode, cfg: &GmrkConfig, prob: &IVProblem, t_end: f64) -> Result<Trajectory> {
    match mode {
        ContinuationMode::Naive => run_naive(cfg, prob, t_end),
        ContinuationMode::Smoothing => run_smoothing(cfg, prob, t_end),
        ContinuationMode::Continuation => run_continuation(cfg, prob, t_end),
    }
}

/// Chained one-step extrapolator under a square-exponential prior.
///
/// Each step conditions on `(x_n, f(x_n, t_n))` alone, so the mean at offset
/// `s` is `exp(-s^2 / 2 l^2) (x_n + s y_n)`. The amplitude is the maximum
/// likelihood estimate `(x_n^2 + l^2 y_n^2) / 2` of those two observations.
#[derive(Debug, Clone)]
pub struct SeChain {
    pub lengthscale: f64,
    pub h: f64,
    pub t0: f64,
    pub starts: Vec<(DVector<f64>, DVector<f64>)>,
}

impl SeChain {
    pub fn run(prob: &IVProblem, h: f64, n: usize, lengthscale: f64) -> Result<Self> {
        if !(lengthscale > 0.0 && lengthscale.is_finite()) {
            return domain("lengthscale must be positive and finite");
        }
        if !(h > 0.0 && h.is_finite()) || n == 0 {
            return domain("need a positive step and at least one step");
        }
        let mut x = prob.x0.clone();
        let mut starts = Vec::with_capacity(n);
        let decay = (-h * h / (2.0 * lengthscale * lengthscale)).exp();
        for k in 0..n {
            let t = prob.t0 + k as f64 * h;
            let y = prob.eval(&x, t).map_err(at_step(k))?;
            let next = (&x + &y * h) * decay;
            starts.push((x, y));
            x = next;
        }
        Ok(Self { lengthscale, h, t0: prob.t0, starts })
    }

    /// Weight on the gradient at offset `h`; Euler uses `h`.
    pub fn euler_weight(h: f64, lengthscale: f64) -> f64 {
        h * (-h * h / (2.0 * lengthscale * lengthscale)).exp()
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let n = self.starts.len();
        let k = (((t - self.t0) / self.h).floor().max(0.0) as usize).min(n - 1);
        (k, t - (self.t0 + k as f64 * self.h))
    }

    pub fn mean(&self, t: f64) -> DVector<f64> {
        let (k, s) = self.locate(t);
        let (x, y) = &self.starts[k];
        (x + y * s) * (-s * s / (2.0 * self.lengthscale * self.lengthscale)).exp()
    }

    pub fn std(&self, t: f64) -> DVector<f64> {
        let (k, s) = self.locate(t);
        let (x, y) = &self.starts[k];
        let r = s * s / (self.lengthscale * self.lengthscale);
        let unit = (1.0 - (-r).exp() * (1.0 + r)).max(0.0);
        DVector::from_fn(x.len(), |d, _| {
            let theta2 = 0.5 * (x[d] * x[d] + self.lengthscale * self.lengthscale * y[d] * y[d]);
            (theta2 * unit).sqrt()
        })
    }

    pub fn endpoint(&self) -> DVector<f64> {
        let (x, y) = self.starts.last().expect("at least one step");
        (x + y * self.h) * (-self.h * self.h / (2.0 * self.lengthscale * self.lengthscale)).exp()
    }
}
