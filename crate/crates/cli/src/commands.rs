//! The four subcommands.

use std::fmt::Write as _;
use std::thread;

use gmrk::butcher::{rk_solve, IVProblem};
use gmrk::continuation::{run, ContinuationMode, GridRow, SeChain, Trajectory};
use gmrk::gmrk::{step, GmrkConfig};
use log::{debug, info};
use serde::Serialize;

use crate::config::{Format, Kernel, ModeArg, RunConfig};
use crate::output::{self, num, opt, GRID_HEADER};
use crate::Failure;

const DEFAULT_HS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];
const DEFAULT_LENGTHSCALES: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 100.0];

/// Row of the grid schema, with the derived columns filled in.
#[derive(Debug, Serialize)]
struct Row {
    t: f64,
    mean: f64,
    std: Option<f64>,
    truth: Option<f64>,
    abs_error: Option<f64>,
    error_over_std: Option<f64>,
}

impl From<&GridRow> for Row {
    fn from(r: &GridRow) -> Self {
        // A zero std with a zero error is 0/0; leave the ratio out.
        let ratio = r.error_over_std().filter(|x| x.is_finite());
        Row { t: r.t, mean: r.mean, std: r.std, truth: r.truth, abs_error: r.abs_error(), error_over_std: ratio }
    }
}

impl Row {
    fn cells(&self) -> Vec<String> {
        vec![num(self.t), num(self.mean), opt(self.std), opt(self.truth), opt(self.abs_error), opt(self.error_over_std)]
    }
}

fn exact_of(prob: &IVProblem) -> Result<&gmrk::butcher::ExactSolution, Failure> {
    prob.exact.as_ref().ok_or_else(|| Failure::Config("the problem has no closed-form solution".into()))
}

fn ensure_finite(what: &str, xs: impl IntoIterator<Item = f64>) -> Result<(), Failure> {
    match xs.into_iter().find(|x| !x.is_finite()) {
        Some(x) => Err(Failure::Numeric(format!("{what} is not finite ({x})"))),
        None => Ok(()),
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(msg()))
    }
}

/// Least-squares slope of `ln e` against `ln h`.
fn loglog_slope(hs: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn solve_trajectory(cfg: &RunConfig, default_mode: ModeArg) -> Result<(IVProblem, GmrkConfig, Trajectory), Failure> {
    let prob = cfg.problem_spec().build()?;
    let gmrk = cfg.gmrk()?;
    let n = cfg.steps()?;
    let mode = cfg.continuation_mode(default_mode);
    let t_end = prob.t0 + n as f64 * gmrk.h;
    debug!("running {mode:?} with {gmrk:?} to t = {t_end}");
    let tr = run(mode, &gmrk, &prob, t_end)?;
    Ok((prob, gmrk, tr))
}

#[derive(Serialize)]
struct SolveReport<'a> {
    config: &'a RunConfig,
    mode: ContinuationMode,
    sigma2: Option<Vec<f64>>,
    rows: Vec<Row>,
}

pub fn solve(cfg: &RunConfig) -> Result<(), Failure> {
    let (prob, gmrk, tr) = solve_trajectory(cfg, ModeArg::Continuation)?;
    let grid = tr.grid_dump(0, cfg.resolution()?, prob.exact.as_ref())?;
    ensure_finite("posterior mean", grid.iter().map(|r| r.mean))?;
    ensure_finite("posterior std", grid.iter().filter_map(|r| r.std))?;
    if let Some(last) = grid.last() {
        info!("t = {}: mean {} std {:?} truth {:?}", last.t, last.mean, last.std, last.truth);
    }
    if cfg.check() {
        check_solve(&prob, &gmrk, &tr)?;
        info!("check passed");
    }
    let rows: Vec<Row> = grid.iter().map(Row::from).collect();
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => output::write_csv(cfg.out.as_deref(), &GRID_HEADER, &rows.iter().map(Row::cells).collect::<Vec<_>>()),
        Format::Json => {
            let report = SolveReport { config: cfg, mode: tr.mode, sigma2: tr.sigma2().map(|s| s.iter().copied().collect()), rows };
            output::write_json(cfg.out.as_deref(), &report)
        }
    }
}

/// The defining property of each mode.
fn check_solve(prob: &IVProblem, gmrk: &GmrkConfig, tr: &Trajectory) -> Result<(), Failure> {
    let rk = rk_solve(&gmrk.method.tableau()?, prob, gmrk.h, tr.n_steps)?;
    let mean_at = |n: usize| tr.global_mean(tr.endpoint(n)).map(|m| m[0]);
    match tr.mode {
        ContinuationMode::Naive => {
            for (n, want) in rk.iter().enumerate() {
                let got = mean_at(n)?;
                check((got - want[0]).abs() <= 1e-12 * want[0].abs().max(1.0), || {
                    format!("naive mean {got} at step {n} differs from the Runge-Kutta value {}", want[0])
                })?;
            }
        }
        ContinuationMode::Smoothing => {
            let sigma = tr.sigma2().map_or(0.0, |s| s[0].sqrt());
            for (n, want) in rk.iter().enumerate().take(tr.n_steps) {
                let got = mean_at(n)?;
                check((got - want[0]).abs() <= 1e-10 * want[0].abs().max(1.0), || {
                    format!("smoothed mean {got} at step {n} misses the Runge-Kutta value {}", want[0])
                })?;
                let std = tr.global_std(tr.endpoint(n))?.map_or(0.0, |s| s[0]);
                check(std <= 1e-6 * sigma, || format!("smoothed std {std} at step {n} is not collapsed"))?;
            }
        }
        ContinuationMode::Continuation => {
            let stds = (0..=tr.n_steps)
                .map(|n| tr.global_std(tr.endpoint(n)).map(|s| s.map_or(0.0, |s| s[0])))
                .collect::<Result<Vec<_>, _>>()?;
            let scale = stds.iter().fold(0.0f64, |a, b| a.max(*b));
            for (n, w) in stds.windows(2).enumerate() {
                check(w[1] >= w[0] - 1e-12 * scale, || format!("std shrinks from {} to {} at step {}", w[0], w[1], n + 1))?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ConvergeReport {
    kernel: Kernel,
    order: usize,
    lengthscale: Option<f64>,
    hs: Vec<f64>,
    errors: Vec<f64>,
    slope: f64,
    required_slope: f64,
}

pub fn converge(cfg: &RunConfig) -> Result<(), Failure> {
    let prob = cfg.problem_spec().build()?;
    let exact = exact_of(&prob)?;
    let hs = cfg.hs.clone().unwrap_or_else(|| DEFAULT_HS.to_vec());
    if hs.len() < 3 {
        return Err(Failure::Config(format!("a convergence study needs at least 3 step sizes, got {}", hs.len())));
    }
    if let Some(h) = hs.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
        return Err(Failure::Config(format!("step sizes must be positive, got {h}")));
    }
    let kernel = cfg.kernel.unwrap_or(Kernel::Wiener);
    let (order, lengthscale) = match kernel {
        Kernel::Wiener => {
            if cfg.lengthscale.is_some() {
                return Err(Failure::Config("lengthscale applies only to --kernel se".into()));
            }
            (cfg.method()?.order(), None)
        }
        Kernel::Se => {
            let l = cfg.lengthscale.unwrap_or(1.0);
            if !(l > 0.0 && l.is_finite()) {
                return Err(Failure::Config(format!("lengthscale must be positive, got {l}")));
            }
            // Judged against Euler, the method it would reduce to.
            (1, Some(l))
        }
    };
    let gmrk = cfg.gmrk()?;

    let one_step = |h: f64| -> Result<f64, Failure> {
        let x1 = match lengthscale {
            None => step(&GmrkConfig { h, ..gmrk }, &prob, prob.t0, &prob.x0)?.x1,
            Some(l) => SeChain::run(&prob, h, 1, l)?.endpoint(),
        };
        let err = (x1 - exact(prob.t0 + h)).amax();
        ensure_finite("single-step error", [err])?;
        if err == 0.0 {
            return Err(Failure::Numeric(format!("zero error at h = {h}; the slope is undefined")));
        }
        debug!("h = {h}: error {err:e}");
        Ok(err)
    };
    let errors = thread::scope(|s| {
        let handles: Vec<_> = hs.iter().map(|&h| s.spawn(move || one_step(h))).collect();
        handles.into_iter().map(|j| j.join().expect("step thread panicked")).collect::<Result<Vec<_>, _>>()
    })?;

    let slope = loglog_slope(&hs, &errors);
    let required = (order + 1) as f64 - 0.2;
    info!("empirical local order {slope:.4} (expected {})", order + 1);
    let report = ConvergeReport { kernel, order, lengthscale, hs: hs.clone(), errors: errors.clone(), slope, required_slope: required };
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => output::write_json(cfg.out.as_deref(), &report)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = hs.iter().zip(&errors).map(|(h, e)| vec![num(*h), num(*e)]).collect();
            output::write_csv(cfg.out.as_deref(), &["h", "error"], &rows)?;
        }
    }
    if cfg.check() {
        check(slope >= required, || format!("slope {slope:.4} is below {required}"))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Serialize)]
struct Calibration {
    endpoint_error: f64,
    coverage: f64,
    max_error_over_std: f64,
}

/// Endpoint error, fraction of grid points inside two standard deviations,
/// and the worst standardized error.
fn calibration(rows: &[(f64, f64, f64)]) -> Calibration {
    let inside = rows.iter().filter(|(_, err, std)| *err <= 2.0 * std).count();
    let worst = rows.iter().filter(|(_, _, std)| *std > 0.0).map(|(_, err, std)| err / std).fold(0.0, f64::max);
    Calibration {
        endpoint_error: rows.last().map_or(0.0, |r| r.1),
        coverage: inside as f64 / rows.len() as f64,
        max_error_over_std: worst,
    }
}

#[derive(Serialize)]
struct SeComparison {
    lengthscale: f64,
    se_weight_deviation: f64,
    se: Calibration,
    gmrk: Calibration,
}

pub fn compare_se(cfg: &RunConfig) -> Result<(), Failure> {
    let (prob, gmrk, tr) = solve_trajectory(cfg, ModeArg::Continuation)?;
    let exact = exact_of(&prob)?;
    let res = cfg.resolution()?;
    let h = gmrk.h;
    let mut lengthscales = cfg.lengthscales.clone().unwrap_or_else(|| DEFAULT_LENGTHSCALES.to_vec());
    if lengthscales.is_empty() {
        return Err(Failure::Config("need at least one lengthscale".into()));
    }
    lengthscales.sort_by(f64::total_cmp);

    let grid = tr.grid_dump(0, res, Some(exact))?;
    let ours: Vec<(f64, f64, f64)> =
        grid.iter().map(|r| (r.t, r.abs_error().unwrap_or(0.0), r.std.unwrap_or(0.0))).collect();
    let gmrk_cal = calibration(&ours);

    let mut out = Vec::with_capacity(lengthscales.len());
    for &lam in &lengthscales {
        let l = lam * h;
        let se = SeChain::run(&prob, h, tr.n_steps, l)?;
        let rows: Vec<(f64, f64, f64)> = grid
            .iter()
            .map(|r| (r.t, (se.mean(r.t)[0] - exact(r.t)[0]).abs(), se.std(r.t)[0]))
            .collect();
        let mut se_cal = calibration(&rows);
        se_cal.endpoint_error = (se.endpoint()[0] - exact(tr.t_end())[0]).abs();
        ensure_finite("square-exponential error", [se_cal.endpoint_error, se_cal.max_error_over_std])?;
        out.push(SeComparison {
            lengthscale: lam,
            se_weight_deviation: (SeChain::euler_weight(h, l) - h).abs(),
            se: se_cal,
            gmrk: gmrk_cal,
        });
    }

    match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => output::write_json(cfg.out.as_deref(), &out)?,
        Format::Csv => {
            let header = [
                "lengthscale",
                "se_weight_deviation",
                "se_endpoint_error",
                "se_coverage",
                "se_max_error_over_std",
                "gmrk_endpoint_error",
                "gmrk_coverage",
                "gmrk_max_error_over_std",
            ];
            let rows: Vec<Vec<String>> = out
                .iter()
                .map(|c| {
                    vec![
                        num(c.lengthscale),
                        num(c.se_weight_deviation),
                        num(c.se.endpoint_error),
                        num(c.se.coverage),
                        num(c.se.max_error_over_std),
                        num(c.gmrk.endpoint_error),
                        num(c.gmrk.coverage),
                        num(c.gmrk.max_error_over_std),
                    ]
                })
                .collect();
            output::write_csv(cfg.out.as_deref(), &header, &rows)?;
        }
    }

    if cfg.check() {
        for w in out.windows(2) {
            check(w[1].se_weight_deviation < w[0].se_weight_deviation || w[1].se_weight_deviation == 0.0, || {
                format!("weight deviation does not shrink from lengthscale {} to {}", w[0].lengthscale, w[1].lengthscale)
            })?;
        }
        for c in &out {
            check(c.gmrk.endpoint_error < c.se.endpoint_error, || {
                format!(
                    "at lengthscale {} the square-exponential error {} beats {}",
                    c.lengthscale, c.se.endpoint_error, c.gmrk.endpoint_error
                )
            })?;
        }
    }
    Ok(())
}

const CONDITION_TOL: f64 = 1e-12;

#[derive(Serialize)]
struct Residual {
    condition: String,
    residual: f64,
    pass: bool,
}

#[derive(Serialize)]
struct TableauReport {
    method: gmrk::Method,
    tableau: gmrk::Tableau,
    tolerance: f64,
    conditions: Vec<Residual>,
}

fn condition_labels(order: usize, stages: usize) -> Vec<String> {
    let mut labels = vec!["sum_i b_i = 1".to_string()];
    if order >= 2 {
        labels.push("sum_i b_i c_i = 1/2".into());
    }
    if order >= 3 {
        labels.push("sum_i b_i c_i^2 = 1/3".into());
        labels.push("sum_ij b_i w_ij c_j = 1/6".into());
    }
    labels.extend((1..=stages).map(|i| format!("sum_j w_{i}j = c_{i}")));
    labels
}

fn render_tableau(report: &TableauReport) -> String {
    let t = &report.tableau;
    let width = 20;
    let mut s = String::new();
    let _ = writeln!(s, "{:?} (order {})", report.method, t.order);
    for i in 0..t.stages() {
        let _ = write!(s, "{:>width$} |", t.c[i]);
        for w in &t.w[i] {
            let _ = write!(s, " {w:>width$}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "{}-+{}", "-".repeat(width), "-".repeat((width + 1) * t.stages()));
    let _ = write!(s, "{:>width$} |", "");
    for b in &t.b {
        let _ = write!(s, " {b:>width$}");
    }
    s.push('\n');
    let _ = writeln!(s, "\norder conditions (tolerance {:e}):", report.tolerance);
    for r in &report.conditions {
        let _ = writeln!(s, "  {:<28} {:>12.3e}  {}", r.condition, r.residual, if r.pass { "ok" } else { "FAIL" });
    }
    s
}

pub fn tableau(cfg: &RunConfig) -> Result<(), Failure> {
    let method = cfg.method()?;
    let tab = method.tableau()?;
    let conditions = condition_labels(tab.order, tab.stages())
        .into_iter()
        .zip(tab.order_residuals())
        .map(|(condition, residual)| Residual { condition, residual, pass: residual.abs() <= CONDITION_TOL })
        .collect::<Vec<_>>();
    let all_pass = conditions.iter().all(|r| r.pass);
    let report = TableauReport { method, tableau: tab, tolerance: CONDITION_TOL, conditions };
    match cfg.format {
        Some(Format::Json) => output::write_json(cfg.out.as_deref(), &report)?,
        Some(Format::Csv) => return Err(Failure::Config("tableau prints text or JSON, not CSV".into())),
        None => output::write_text(cfg.out.as_deref(), &render_tableau(&report))?,
    }
    if cfg.check() {
        check(all_pass, || "order conditions are violated".into())?;
    }
    Ok(())
}
