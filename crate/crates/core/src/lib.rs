//! Gauss-Markov-Runge-Kutta probabilistic ODE solvers.
//!
//! Explicit Runge-Kutta methods of order one to three are reproduced exactly
//! as posterior means of Gaussian process regression on gradient observations,
//! which attaches a calibrated uncertainty to every numerical solution.

pub mod butcher;
pub mod continuation;
mod double_double;
pub mod error;
pub mod gmrk;
pub mod gp;
pub mod kernels;
pub mod linalg;
pub mod problems;
pub mod scalar;
pub mod state_space;

pub use butcher::{IVProblem, Tableau};
pub use error::{Error, Result};
pub use gmrk::{GmrkConfig, Method, Mode, StepResult};
pub use kernels::{KernelFamily, KernelModel};
pub use scalar::{DoubleDouble, Exact, Real};
