//! Python bindings: tableaux, single GMRK steps, multi-step runs and kernels.

use gmrk::butcher::{IVProblem, Tableau as RsTableau};
use gmrk::continuation::{run, ContinuationMode, SeChain, Trajectory as RsTrajectory};
use gmrk::gmrk::{step as rs_step, GmrkConfig, Method, Mode, StepResult};
use gmrk::kernels::{wiener_k as rs_wiener_k, wiener_kd as rs_wiener_kd};
use gmrk::problems::ProblemSpec;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: gmrk::Error) -> PyErr {
    match e.root() {
        gmrk::Error::Domain(_) => PyValueError::new_err(e.to_string()),
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

fn method(order: u8, alpha: Option<f64>, u: Option<f64>, v: Option<f64>) -> PyResult<Method> {
    let m = match order {
        1 => Method::Euler,
        2 => Method::SecondOrder { alpha: alpha.unwrap_or(0.5) },
        3 => Method::ThirdOrder { u: u.unwrap_or(0.5), v: v.unwrap_or(1.0) },
        _ => return Err(PyValueError::new_err(format!("order must be 1, 2 or 3, got {order}"))),
    };
    m.tableau().map_err(to_py)?;
    Ok(m)
}

fn config(order: u8, alpha: Option<f64>, u: Option<f64>, v: Option<f64>, h: f64, tau: Option<f64>) -> PyResult<GmrkConfig> {
    let mode = tau.map_or(Mode::Limit, |tau| Mode::FiniteTau { tau });
    GmrkConfig::new(method(order, alpha, u, v)?, mode, h).map_err(to_py)
}

/// Butcher tableau of an explicit method of order one to three.
#[pyclass(frozen, module = "gmrk_py")]
struct Tableau(RsTableau);

#[pymethods]
impl Tableau {
    #[new]
    #[pyo3(signature = (order, alpha=None, u=None, v=None))]
    fn new(order: u8, alpha: Option<f64>, u: Option<f64>, v: Option<f64>) -> PyResult<Self> {
        Ok(Self(method(order, alpha, u, v)?.tableau().map_err(to_py)?))
    }

    #[getter]
    fn c(&self) -> Vec<f64> {
        self.0.c.clone()
    }

    #[getter]
    fn w(&self) -> Vec<Vec<f64>> {
        self.0.w.clone()
    }

    #[getter]
    fn b(&self) -> Vec<f64> {
        self.0.b.clone()
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order
    }

    fn order_residuals(&self) -> Vec<f64> {
        self.0.order_residuals()
    }

    #[pyo3(signature = (tol=1e-12))]
    fn check_order_conditions(&self, tol: f64) -> bool {
        self.0.check_order_conditions(tol)
    }

    fn __repr__(&self) -> String {
        format!("Tableau(order={}, c={:?}, b={:?})", self.0.order, self.0.c, self.0.b)
    }
}

/// Built-in scalar problem: `linear`, `logistic` or `cosmod`.
#[pyclass(frozen, module = "gmrk_py")]
struct Problem(IVProblem);

#[pymethods]
impl Problem {
    #[new]
    #[pyo3(signature = (name="linear", lam=None, x0=None, t0=None))]
    fn new(name: &str, lam: Option<f64>, x0: Option<f64>, t0: Option<f64>) -> PyResult<Self> {
        let spec = ProblemSpec { name: name.to_string(), lambda: lam, x0, t0 };
        Ok(Self(spec.build().map_err(to_py)?))
    }

    #[getter]
    fn t0(&self) -> f64 {
        self.0.t0
    }

    #[getter]
    fn x0(&self) -> f64 {
        self.0.x0[0]
    }

    fn exact(&self, t: f64) -> Option<f64> {
        self.0.exact.as_ref().map(|f| f(t)[0])
    }

    fn f(&self, x: f64, t: f64) -> f64 {
        (self.0.f)(&nalgebra::DVector::from_element(1, x), t)[0]
    }
}

/// Posterior of a single GMRK step.
#[pyclass(frozen, module = "gmrk_py")]
struct Step(StepResult);

#[pymethods]
impl Step {
    #[getter]
    fn x1(&self) -> f64 {
        self.0.x1[0]
    }

    #[getter]
    fn weights_b(&self) -> Vec<f64> {
        self.0.weights_b.clone()
    }

    #[getter]
    fn sigma2(&self) -> f64 {
        self.0.sigma2[0]
    }

    #[getter]
    fn variance_at_end(&self) -> f64 {
        self.0.variance_at_end[0]
    }

    /// `(c, x, y)` for each stage.
    #[getter]
    fn nodes(&self) -> Vec<(f64, f64, f64)> {
        self.0.nodes.iter().map(|n| (n.c, n.x[0], n.y[0])).collect()
    }

    fn mean(&self, t: f64) -> PyResult<f64> {
        Ok(self.0.mean(t).map_err(to_py)?[0])
    }

    fn std(&self, t: f64) -> PyResult<f64> {
        Ok(self.0.std(t).map_err(to_py)?[0])
    }

    fn cov(&self, t: f64, t2: f64) -> PyResult<f64> {
        Ok(self.0.cov(t, t2).map_err(to_py)?[0])
    }
}

/// Multi-step solution under one of the three chaining modes.
#[pyclass(frozen, module = "gmrk_py")]
struct Trajectory(RsTrajectory, Option<gmrk::butcher::ExactSolution>);

#[pymethods]
impl Trajectory {
    #[getter]
    fn n_steps(&self) -> usize {
        self.0.n_steps
    }

    fn mean(&self, t: f64) -> PyResult<f64> {
        Ok(self.0.global_mean(t).map_err(to_py)?[0])
    }

    /// `None` for naive chaining, which carries no joint posterior.
    fn std(&self, t: f64) -> PyResult<Option<f64>> {
        Ok(self.0.global_std(t).map_err(to_py)?.map(|s| s[0]))
    }

    /// Rows `(t, mean, std, truth)` with `resolution` samples per step.
    #[pyo3(signature = (resolution=10))]
    fn grid(&self, resolution: usize) -> PyResult<Vec<(f64, f64, Option<f64>, Option<f64>)>> {
        let rows = self.0.grid_dump(0, resolution, self.1.as_ref()).map_err(to_py)?;
        Ok(rows.into_iter().map(|r| (r.t, r.mean, r.std, r.truth)).collect())
    }
}

/// One GMRK step from the problem's initial value.
#[pyfunction]
#[pyo3(signature = (problem, h, order=2, alpha=None, u=None, v=None, tau=None))]
fn step(
    problem: &Problem,
    h: f64,
    order: u8,
    alpha: Option<f64>,
    u: Option<f64>,
    v: Option<f64>,
    tau: Option<f64>,
) -> PyResult<Step> {
    let cfg = config(order, alpha, u, v, h, tau)?;
    let p = &problem.0;
    Ok(Step(rs_step(&cfg, p, p.t0, &p.x0).map_err(to_py)?))
}

/// `steps` steps of size `h` in mode `naive`, `smoothing` or `continuation`.
#[pyfunction]
#[pyo3(signature = (problem, h=1.0, steps=10, mode="continuation", order=2, alpha=None, u=None, v=None, tau=None))]
#[allow(clippy::too_many_arguments)]
fn solve(
    problem: &Problem,
    h: f64,
    steps: usize,
    mode: &str,
    order: u8,
    alpha: Option<f64>,
    u: Option<f64>,
    v: Option<f64>,
    tau: Option<f64>,
) -> PyResult<Trajectory> {
    let mode = match mode {
        "naive" => ContinuationMode::Naive,
        "smoothing" => ContinuationMode::Smoothing,
        "continuation" => ContinuationMode::Continuation,
        other => return Err(PyValueError::new_err(format!("unknown mode '{other}'"))),
    };
    let cfg = config(order, alpha, u, v, h, tau)?;
    let p = &problem.0;
    let tr = run(mode, &cfg, p, p.t0 + steps as f64 * h).map_err(to_py)?;
    Ok(Trajectory(tr, p.exact.clone()))
}

/// Endpoint of the chained square-exponential extrapolator.
#[pyfunction]
fn se_endpoint(problem: &Problem, h: f64, steps: usize, lengthscale: f64) -> PyResult<f64> {
    Ok(SeChain::run(&problem.0, h, steps, lengthscale).map_err(to_py)?.endpoint()[0])
}

/// `q`-times integrated Wiener covariance `k(t, s)`.
#[pyfunction]
fn wiener_k(q: u8, t: f64, s: f64) -> PyResult<f64> {
    check_wiener(q, t, s)?;
    Ok(rs_wiener_k(q, &t, &s))
}

/// Derivative of `k(t, s)` in its second argument.
#[pyfunction]
fn wiener_kd(q: u8, t: f64, s: f64) -> PyResult<f64> {
    check_wiener(q, t, s)?;
    if q == 0 {
        return Err(PyValueError::new_err("the Wiener process itself is not differentiable"));
    }
    Ok(rs_wiener_kd(q, &t, &s))
}

fn check_wiener(q: u8, t: f64, s: f64) -> PyResult<()> {
    if q > 3 {
        return Err(PyValueError::new_err(format!("q must be at most 3, got {q}")));
    }
    if !(t >= 0.0 && s >= 0.0) {
        return Err(PyValueError::new_err("Wiener kernels are defined for t, s >= 0"));
    }
    Ok(())
}

#[pymodule]
fn gmrk_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Tableau>()?;
    m.add_class::<Problem>()?;
    m.add_class::<Step>()?;
    m.add_class::<Trajectory>()?;
    m.add_function(wrap_pyfunction!(step, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(se_endpoint, m)?)?;
    m.add_function(wrap_pyfunction!(wiener_k, m)?)?;
    m.add_function(wrap_pyfunction!(wiener_kd, m)?)?;
    Ok(())
}
