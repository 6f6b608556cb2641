//! Built-in scalar test problems with closed-form solutions.

use std::sync::Arc;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::butcher::IVProblem;
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    /// `linear`, `logistic` or `cosmod`.
    pub name: String,
    /// Rate of the linear problem.
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub x0: Option<f64>,
    #[serde(default)]
    pub t0: Option<f64>,
}

impl ProblemSpec {
    pub fn named(name: &str) -> Self {
        Self { name: name.to_string(), lambda: None, x0: None, t0: None }
    }

    /// Builds the problem and checks its closed-form solution against the ODE.
    pub fn build(&self) -> Result<IVProblem> {
        let t0 = self.t0.unwrap_or(0.0);
        for (what, v) in [("t0", Some(t0)), ("x0", self.x0), ("lambda", self.lambda)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return domain(format!("{what} must be finite"));
                }
            }
        }
        let problem = match self.name.as_str() {
            "linear" => {
                let lam = self.lambda.unwrap_or(-0.5);
                let x0 = self.x0.unwrap_or(1.0);
                IVProblem::new(Arc::new(move |x: &DVector<f64>, _t| x * lam), t0, DVector::from_element(1, x0))
                    .with_exact(Arc::new(move |t| DVector::from_element(1, x0 * (lam * (t - t0)).exp())))
            }
            "logistic" => {
                if self.lambda.is_some() {
                    return domain("logistic takes no lambda");
                }
                let x0 = self.x0.unwrap_or(0.1);
                if !(x0 > 0.0) {
                    return domain("logistic needs x0 > 0");
                }
                IVProblem::new(Arc::new(|x: &DVector<f64>, _t| x.map(|v| v * (1.0 - v))), t0, DVector::from_element(1, x0))
                    .with_exact(Arc::new(move |t| {
                        DVector::from_element(1, 1.0 / (1.0 + (1.0 / x0 - 1.0) * (-(t - t0)).exp()))
                    }))
            }
            "cosmod" => {
                if self.lambda.is_some() {
                    return domain("cosmod takes no lambda");
                }
                let x0 = self.x0.unwrap_or(1.0);
                IVProblem::new(Arc::new(|x: &DVector<f64>, t: f64| x * t.cos()), t0, DVector::from_element(1, x0))
                    .with_exact(Arc::new(move |t| DVector::from_element(1, x0 * (t.sin() - t0.sin()).exp())))
            }
            other => return domain(format!("unknown problem '{other}' (expected linear, logistic or cosmod)")),
        };
        check_truth(&problem)?;
        Ok(problem)
    }
}

/// Verifies `x'(t) = f(x(t), t)` for the closed-form solution at 20 times in `[t0, t0 + 10]`.
pub fn check_truth(problem: &IVProblem) -> Result<()> {
    let Some(exact) = &problem.exact else { return Ok(()) };
    let e = 1e-3;
    let golden = 0.618_033_988_749_894_9;
    for i in 1..=20 {
        let t = problem.t0 + 10.0 * ((i as f64 * golden) % 1.0);
        // Fourth-order central difference.
        let d = (exact(t - 2.0 * e) - exact(t - e) * 8.0 + exact(t + e) * 8.0 - exact(t + 2.0 * e)) / (12.0 * e);
        let f = problem.eval(&exact(t), t)?;
        let err = (&d - &f).amax() / f.amax().max(1.0);
        if err > 1e-9 {
            return Err(Error::Numeric(format!("closed-form solution fails the ODE at t = {t} (residual {err:e})")));
        }
    }
    Ok(())
}
