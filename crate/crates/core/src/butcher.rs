//! Explicit Runge-Kutta tableaux of order one to three and the reference stepper.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Vector field `f(x, t)`.
pub type VectorField = Arc<dyn Fn(&DVector<f64>, f64) -> DVector<f64> + Send + Sync>;

/// Closed-form solution `x(t)`, when known.
pub type ExactSolution = Arc<dyn Fn(f64) -> DVector<f64> + Send + Sync>;

#[derive(Clone)]
pub struct IVProblem {
    pub f: VectorField,
    pub t0: f64,
    pub x0: DVector<f64>,
    pub exact: Option<ExactSolution>,
}

impl IVProblem {
    pub fn new(f: VectorField, t0: f64, x0: DVector<f64>) -> Self {
        Self { f, t0, x0, exact: None }
    }

    pub fn with_exact(mut self, exact: ExactSolution) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn dim(&self) -> usize {
        self.x0.len()
    }

    /// Evaluates `f`, rejecting non-finite or wrongly sized output.
    pub fn eval(&self, x: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
        let y = (self.f)(x, t);
        if y.len() != x.len() {
            return Err(Error::Numeric(format!(
                "vector field returned {} components for a state of {}",
                y.len(),
                x.len()
            )));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Evaluation { t });
        }
        Ok(y)
    }
}

impl fmt::Debug for IVProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IVProblem")
            .field("t0", &self.t0)
            .field("x0", &self.x0)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

/// Butcher tableau `(c, W, b)` of an explicit method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tableau {
    pub c: Vec<f64>,
    /// Strictly lower triangular, row-major.
    pub w: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub order: usize,
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} must be finite, got {x}"))
    }
}

impl Tableau {
    pub fn euler() -> Self {
        Self { c: vec![0.0], w: vec![vec![]], b: vec![1.0], order: 1 }
    }

    /// Second-order family; `alpha = 1/2` is the midpoint rule, `1` Heun's method.
    pub fn second_order(alpha: f64) -> Result<Self> {
        finite("alpha", alpha)?;
        if alpha == 0.0 {
            return domain("alpha must be nonzero");
        }
        let b2 = 1.0 / (2.0 * alpha);
        Ok(Self {
            c: vec![0.0, alpha],
            w: vec![vec![], vec![alpha]],
            b: vec![1.0 - b2, b2],
            order: 2,
        })
    }

    /// Third-order family with nodes `0, u, v`.
    pub fn third_order(u: f64, v: f64) -> Result<Self> {
        finite("u", u)?;
        finite("v", v)?;
        if u == 0.0 || v == 0.0 {
            return domain("third-order nodes must be nonzero");
        }
        if u == v {
            return domain("third-order nodes must be distinct");
        }
        if (2.0 - 3.0 * u) == 0.0 {
            return domain("u = 2/3 makes the denominator 2 - 3u vanish; no third-order tableau exists");
        }
        let w32 = v * (v - u) / (u * (2.0 - 3.0 * u));
        let w31 = v - w32;
        let b2 = (2.0 - 3.0 * v) / (6.0 * u * (u - v));
        let b3 = (2.0 - 3.0 * u) / (6.0 * v * (v - u));
        Ok(Self {
            c: vec![0.0, u, v],
            w: vec![vec![], vec![u], vec![w31, w32]],
            b: vec![1.0 - b2 - b3, b2, b3],
            order: 3,
        })
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// `W` as a dense strictly lower triangular matrix.
    pub fn w_matrix(&self) -> DMatrix<f64> {
        let s = self.stages();
        DMatrix::from_fn(s, s, |i, j| if j < i { self.w[i][j] } else { 0.0 })
    }

    /// Residuals of the order conditions up to `self.order`.
    pub fn order_residuals(&self) -> Vec<f64> {
        let s = self.stages();
        let sum_b: f64 = self.b.iter().sum();
        let mut r = vec![sum_b - 1.0];
        let bc = |p: i32| -> f64 { (0..s).map(|i| self.b[i] * self.c[i].powi(p)).sum() };
        if self.order >= 2 {
            r.push(bc(1) - 0.5);
        }
        if self.order >= 3 {
            r.push(bc(2) - 1.0 / 3.0);
            let bwc: f64 = (0..s)
                .map(|i| (0..i).map(|j| self.b[i] * self.w[i][j] * self.c[j]).sum::<f64>())
                .sum();
            r.push(bwc - 1.0 / 6.0);
        }
        // Row sums of W reproduce c.
        for i in 0..s {
            r.push(self.w[i].iter().sum::<f64>() - self.c[i]);
        }
        r
    }

    pub fn check_order_conditions(&self, tol: f64) -> bool {
        self.order_residuals().iter().all(|r| r.abs() <= tol)
    }
}

/// Stages of one explicit step.
#[derive(Debug, Clone, PartialEq)]
pub struct RkStep {
    pub x_next: DVector<f64>,
    /// Stage inputs `x_i`.
    pub nodes: Vec<DVector<f64>>,
    /// Stage gradients `y_i = f(x_i, t + c_i h)`.
    pub gradients: Vec<DVector<f64>>,
}

pub fn rk_step(tab: &Tableau, problem: &IVProblem, t: f64, x: &DVector<f64>, h: f64) -> Result<RkStep> {
    let s = tab.stages();
    let mut nodes = Vec::with_capacity(s);
    let mut gradients: Vec<DVector<f64>> = Vec::with_capacity(s);
    for i in 0..s {
        let mut xi = x.clone();
        for j in 0..i {
            xi.axpy(h * tab.w[i][j], &gradients[j], 1.0);
        }
        let yi = problem.eval(&xi, t + tab.c[i] * h)?;
        nodes.push(xi);
        gradients.push(yi);
    }
    let mut x_next = x.clone();
    for i in 0..s {
        x_next.axpy(h * tab.b[i], &gradients[i], 1.0);
    }
    Ok(RkStep { x_next, nodes, gradients })
}

/// Runs `n` fixed steps and returns the endpoints, starting with `x0`.
pub fn rk_solve(tab: &Tableau, problem: &IVProblem, h: f64, n: usize) -> Result<Vec<DVector<f64>>> {
    let mut out = vec![problem.x0.clone()];
    let mut x = problem.x0.clone();
    for k in 0..n {
        x = rk_step(tab, problem, problem.t0 + k as f64 * h, &x, h)?.x_next;
        out.push(x.clone());
    }
    Ok(out)
}
