#![allow(dead_code)]

use modqed::cli::config::default_dt;
use modqed::cli::presets::preset_physics;
use modqed::model::{initial_state, Formulation, ModelError, RegularSystem, ThirdOrderSystem};
use modqed::solvers::{integrate_fixed, sample_uniform, Method, OdeSystem, SolverConfig, TimeSeries};
use modqed::{DetuningProfile, SystemParams};
use nalgebra::DMatrix;

pub const FIGURES: [&str; 6] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"];

pub fn physics(name: &str) -> (SystemParams, DetuningProfile) {
    preset_physics(name).unwrap_or_else(|| panic!("unknown preset {name}"))
}

/// Default sample interval and enough samples to cover `[0, span]`.
pub fn grid(params: &SystemParams, profile: &DetuningProfile, span: f64) -> (f64, usize) {
    let dt = default_dt(params, profile);
    (dt, (span / dt).ceil() as usize + 1)
}

pub fn regular_series(
    params: &SystemParams,
    profile: &DetuningProfile,
    dt: f64,
    n: usize,
    config: &SolverConfig,
) -> TimeSeries {
    let sys = RegularSystem::new(*params, *profile);
    let y0 = initial_state(params, Formulation::Regular).unwrap();
    sample_uniform(&sys, &y0, 0.0, dt, n, config).unwrap().0
}

pub fn third_order_series(
    params: &SystemParams,
    profile: &DetuningProfile,
    dt: f64,
    n: usize,
    config: &SolverConfig,
) -> TimeSeries {
    let sys = ThirdOrderSystem::new(*params, *profile);
    let y0 = initial_state(params, Formulation::ThirdOrder).unwrap();
    sample_uniform(&sys, &y0, 0.0, dt, n, config).unwrap().0
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Scaled finite-difference mismatch of an analytic linearization.
///
/// Returns `max |J − FD(rhs)|` using central differences with step `1e-6`
/// in each state component, and `max |∂f/∂t − FD_t(rhs)| / max(1, |∂f/∂t|)`
/// using a five-point stencil with step `1e-4` in time. Near small `δ` the
/// third-order RHS reaches `10³`, so an absolute bound on the time
/// derivative would measure rounding rather than the formula.
pub fn fd_mismatch<S: OdeSystem>(sys: &S, t: f64, y: &[f64]) -> (f64, f64) {
    const STEP: f64 = 1e-6;
    const TIME_STEP: f64 = 1e-4;
    let n = sys.dimension();
    let mut jac = DMatrix::zeros(n, n);
    let mut dfdt = vec![0.0; n];
    sys.jacobian(t, y, &mut jac, &mut dfdt).unwrap();

    let eval = |t: f64, y: &[f64]| {
        let mut dy = vec![0.0; n];
        sys.rhs(t, y, &mut dy).unwrap();
        dy
    };
    let mut worst_j: f64 = 0.0;
    for j in 0..n {
        let mut up = y.to_vec();
        let mut down = y.to_vec();
        up[j] += STEP;
        down[j] -= STEP;
        let (fu, fd) = (eval(t, &up), eval(t, &down));
        for i in 0..n {
            let fd_ij = (fu[i] - fd[i]) / (2.0 * STEP);
            worst_j = worst_j.max((jac[(i, j)] - fd_ij).abs());
        }
    }
    let h = TIME_STEP;
    let (f2, f1, b1, b2) = (
        eval(t + 2.0 * h, y),
        eval(t + h, y),
        eval(t - h, y),
        eval(t - 2.0 * h, y),
    );
    let worst_t = (0..n)
        .map(|i| {
            let fd = (-f2[i] + 8.0 * f1[i] - 8.0 * b1[i] + b2[i]) / (12.0 * h);
            (dfdt[i] - fd).abs() / dfdt[i].abs().max(1.0)
        })
        .fold(0.0, f64::max);
    (worst_j, worst_t)
}

/// `ÿ = −ω²y` carried as `(y, ẏ)`.
pub struct Harmonic(pub f64);

impl OdeSystem for Harmonic {
    fn dimension(&self) -> usize {
        2
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) -> Result<(), ModelError> {
        dy[0] = y[1];
        dy[1] = -self.0 * self.0 * y[0];
        Ok(())
    }

    fn jacobian(
        &self,
        _t: f64,
        _y: &[f64],
        jac: &mut DMatrix<f64>,
        dfdt: &mut [f64],
    ) -> Result<(), ModelError> {
        jac.copy_from_slice(&[0.0, -self.0 * self.0, 1.0, 0.0]);
        dfdt.fill(0.0);
        Ok(())
    }
}

/// Observed order `log₂(e_h / e_{h/2})` over one period of the `ω = 4`
/// oscillator with `steps` and `2·steps` fixed steps.
pub fn observed_order(method: Method, steps: usize) -> f64 {
    let omega = 4.0;
    let period = 2.0 * std::f64::consts::PI / omega;
    // Tight tolerances make the Newton iteration of the implicit stepper
    // converge fully.
    let config = SolverConfig::with_method(method).with_tolerances(1e-14, 1e-14);
    let sys = Harmonic(omega);
    let err = |n: usize| {
        let y = integrate_fixed(&sys, &[1.0, 0.0], 0.0, period / n as f64, n, &config).unwrap();
        (y[0] - 1.0).abs().max((y[1] / omega).abs())
    };
    (err(steps) / err(2 * steps)).log2()
}
