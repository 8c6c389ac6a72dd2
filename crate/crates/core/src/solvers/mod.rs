//! Stiff ODE integration: a semi-implicit Rosenbrock pair and a three-stage
//! Radau IIA implicit Runge-Kutta stepper, both with embedded error
//! estimates, driven by a common adaptive step controller.

mod driver;
mod radau;
mod rosenbrock;
mod series;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::model::ModelError;

pub use driver::{integrate, integrate_fixed, sample_uniform, Integration, StepStats};
pub use radau::implicit_rk_step;
pub use rosenbrock::rosenbrock_step;
pub use series::{SeriesMeta, TimeSeries};

/// A first-order system `ẏ = f(t, y)` with an analytic linearization.
pub trait OdeSystem {
    fn dimension(&self) -> usize;

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<(), ModelError>;

    /// Writes `∂f/∂y` into `jac` and `∂f/∂t` into `dfdt`.
    fn jacobian(
        &self,
        t: f64,
        y: &[f64],
        jac: &mut DMatrix<f64>,
        dfdt: &mut [f64],
    ) -> Result<(), ModelError>;
}

impl<S: OdeSystem + ?Sized> OdeSystem for &S {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<(), ModelError> {
        (**self).rhs(t, y, dy)
    }

    fn jacobian(
        &self,
        t: f64,
        y: &[f64],
        jac: &mut DMatrix<f64>,
        dfdt: &mut [f64],
    ) -> Result<(), ModelError> {
        (**self).jacobian(t, y, jac, dfdt)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    System(#[from] ModelError),
    #[error("stage matrix is numerically singular at t = {t}")]
    LinearSolveFailure { t: f64 },
    #[error("simplified Newton iteration failed to converge at t = {t} (h = {h:e})")]
    NewtonDivergence { t: f64, h: f64 },
    #[error("step size fell below h_min at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("maximum number of steps exceeded at t = {t}")]
    MaxStepsExceeded { t: f64 },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid integration interval: {0}")]
    InvalidInterval(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rosenbrock,
    ImplicitRk,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub atol: f64,
    pub rtol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
    pub method: Method,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            atol: 1e-9,
            rtol: 1e-8,
            h_init: 1e-7,
            h_min: 1e-12,
            h_max: 1.0,
            max_steps: 1_000_000,
            method: Method::Rosenbrock,
        }
    }
}

impl SolverConfig {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn with_tolerances(mut self, atol: f64, rtol: f64) -> Self {
        self.atol = atol;
        self.rtol = rtol;
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |msg: &str| Err(SolverError::InvalidConfig(msg.to_string()));
        if !(self.atol > 0.0 && self.atol.is_finite()) {
            return bad("atol must be positive");
        }
        if !(self.rtol > 0.0 && self.rtol.is_finite()) {
            return bad("rtol must be positive");
        }
        if !(0.0 < self.h_min && self.h_min <= self.h_init && self.h_init <= self.h_max) {
            return bad("step bounds must satisfy 0 < h_min <= h_init <= h_max");
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive");
        }
        Ok(())
    }
}

/// Outcome of a single trial step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub y: Vec<f64>,
    /// Scaled RMS error; the step is acceptable when this is at most one.
    pub error: f64,
    pub h_suggest: f64,
}

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Root-mean-square of `err_i / (atol + rtol·max(|y0_i|, |y1_i|))`.
pub(crate) fn error_norm(err: &[f64], y0: &[f64], y1: &[f64], config: &SolverConfig) -> f64 {
    let sum: f64 = err
        .iter()
        .zip(y0.iter().zip(y1))
        .map(|(e, (a, b))| {
            let scale = config.atol + config.rtol * a.abs().max(b.abs());
            (e / scale).powi(2)
        })
        .sum();
    (sum / err.len() as f64).sqrt()
}

/// Proportional controller for an embedded pair whose error behaves like
/// `h^(order + 1)`.
pub(crate) fn suggest_step(h: f64, error: f64, order: i32) -> f64 {
    let factor = if error == 0.0 {
        MAX_FACTOR
    } else {
        SAFETY * error.powf(-1.0 / f64::from(order + 1))
    };
    h * factor.clamp(MIN_FACTOR, MAX_FACTOR)
}

/// Dispatches to the configured stepper.
pub fn step<S: OdeSystem + ?Sized>(
    system: &S,
    t: f64,
    y: &[f64],
    h: f64,
    config: &SolverConfig,
) -> Result<StepResult, SolverError> {
    match config.method {
        Method::Rosenbrock => rosenbrock_step(system, t, y, h, config),
        Method::ImplicitRk => implicit_rk_step(system, t, y, h, config),
    }
}
