//! Run configuration: a JSON file overlaid by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use gmrk::continuation::ContinuationMode;
use gmrk::gmrk::{GmrkConfig, Method, Mode};
use gmrk::problems::ProblemSpec;
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    Wiener,
    Se,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ModeArg {
    Naive,
    Smoothing,
    Continuation,
}

impl From<ModeArg> for ContinuationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Naive => ContinuationMode::Naive,
            ModeArg::Smoothing => ContinuationMode::Smoothing,
            ModeArg::Continuation => ContinuationMode::Continuation,
        }
    }
}

/// `"limit"` or a finite offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Tau {
    Finite(f64),
    Named(TauName),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauName {
    Limit,
}

impl FromStr for Tau {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("limit") {
            return Ok(Tau::Named(TauName::Limit));
        }
        s.parse::<f64>().map(Tau::Finite).map_err(|_| format!("tau must be 'limit' or a number, got '{s}'"))
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tau::Finite(t) => write!(f, "{t}"),
            Tau::Named(_) => f.write_str("limit"),
        }
    }
}

/// Every setting is optional so that flags can be laid over a file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// JSON config file; flags given on the command line win
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Built-in problem: linear, logistic or cosmod
    #[arg(long)]
    pub problem: Option<String>,
    /// Rate of the linear problem
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,

    /// Order p of the method (1, 2 or 3)
    #[arg(long, short = 'p')]
    pub order: Option<u8>,
    /// Second node of the second-order family
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Second node of the third-order family
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<f64>,
    /// Third node of the third-order family
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<f64>,

    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Process origin before each step: 'limit' or a positive offset
    #[arg(long)]
    pub tau: Option<Tau>,
    /// Step size
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<f64>,
    /// Number of steps
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output rows per step
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Recorded for reproducibility; every command is deterministic
    #[arg(long)]
    pub seed: Option<u64>,

    /// Step sizes of a convergence study
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub hs: Option<Vec<f64>>,
    /// Prior used by `converge`
    #[arg(long, value_enum)]
    pub kernel: Option<Kernel>,
    /// Square-exponential length-scale for `converge --kernel se`
    #[arg(long, allow_hyphen_values = true)]
    pub lengthscale: Option<f64>,
    /// Square-exponential length-scales for `compare-se`, in units of h
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lengthscales: Option<Vec<f64>>,

    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Assert the command's defining property; exit 3 if it fails
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<bool>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {$(
        if $top.$f.is_some() {
            $base.$f = $top.$f.clone();
        }
    )*};
}

impl RunConfig {
    /// Reads `--config` if given and lays the flags over it.
    pub fn load(flags: &RunConfig) -> Result<RunConfig, Failure> {
        let mut cfg = match &flags.config {
            Some(path) => read_file(path)?,
            None => RunConfig::default(),
        };
        overlay!(
            cfg, flags, problem, lambda, x0, t0, order, alpha, u, v, mode, tau, h, steps, resolution, seed, hs, kernel,
            lengthscale, lengthscales, out, format, check
        );
        Ok(cfg)
    }

    pub fn problem_spec(&self) -> ProblemSpec {
        ProblemSpec {
            name: self.problem.clone().unwrap_or_else(|| "linear".into()),
            lambda: self.lambda,
            x0: self.x0,
            t0: self.t0,
        }
    }

    pub fn method(&self) -> Result<Method, Failure> {
        let p = self.order.unwrap_or(2);
        let stray = |name: &str, present: bool| -> Result<(), Failure> {
            if present {
                Err(Failure::Config(format!("{name} does not apply to order {p}")))
            } else {
                Ok(())
            }
        };
        let m = match p {
            1 => {
                stray("alpha", self.alpha.is_some())?;
                stray("u/v", self.u.is_some() || self.v.is_some())?;
                Method::Euler
            }
            2 => {
                stray("u/v", self.u.is_some() || self.v.is_some())?;
                Method::SecondOrder { alpha: self.alpha.unwrap_or(0.5) }
            }
            3 => {
                stray("alpha", self.alpha.is_some())?;
                Method::ThirdOrder { u: self.u.unwrap_or(0.5), v: self.v.unwrap_or(1.0) }
            }
            _ => return Err(Failure::Config(format!("order must be 1, 2 or 3, got {p}"))),
        };
        m.tableau()?;
        Ok(m)
    }

    pub fn gmrk(&self) -> Result<GmrkConfig, Failure> {
        let mode = match self.tau.unwrap_or(Tau::Named(TauName::Limit)) {
            Tau::Named(_) => Mode::Limit,
            Tau::Finite(tau) => Mode::FiniteTau { tau },
        };
        Ok(GmrkConfig::new(self.method()?, mode, self.step()?)?)
    }

    pub fn step(&self) -> Result<f64, Failure> {
        let h = self.h.unwrap_or(1.0);
        if !(h > 0.0 && h.is_finite()) {
            return Err(Failure::Config(format!("h must be positive, got {h}")));
        }
        Ok(h)
    }

    pub fn steps(&self) -> Result<usize, Failure> {
        match self.steps.unwrap_or(10) {
            0 => Err(Failure::Config("steps must be at least 1".into())),
            n => Ok(n),
        }
    }

    pub fn resolution(&self) -> Result<usize, Failure> {
        match self.resolution.unwrap_or(10) {
            0 => Err(Failure::Config("resolution must be at least 1".into())),
            n => Ok(n),
        }
    }

    pub fn continuation_mode(&self, default: ModeArg) -> ContinuationMode {
        self.mode.unwrap_or(default).into()
    }

    pub fn check(&self) -> bool {
        self.check.unwrap_or(false)
    }
}

fn read_file(path: &Path) -> Result<RunConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}
