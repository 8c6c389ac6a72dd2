//! Fourth-order Rosenbrock method with an embedded third-order error
//! estimate (Shampine's parameter set, four stages, three function
//! evaluations per step).
//!
//! Each stage solves `(I/(γh) − J) g_i = f(t + α_i h, Y_i) + Σ c_ij g_j / h + h γ_i ∂f/∂t`.

use nalgebra::{DMatrix, DVector};

use super::{error_norm, suggest_step, OdeSystem, SolverConfig, SolverError, StepResult};

const GAMMA: f64 = 1.0 / 2.0;
const A21: f64 = 2.0;
const A31: f64 = 48.0 / 25.0;
const A32: f64 = 6.0 / 25.0;
const C21: f64 = -8.0;
const C31: f64 = 372.0 / 25.0;
const C32: f64 = 12.0 / 5.0;
const C41: f64 = -112.0 / 125.0;
const C42: f64 = -54.0 / 125.0;
const C43: f64 = -2.0 / 5.0;
const B1: f64 = 19.0 / 9.0;
const B2: f64 = 1.0 / 2.0;
const B3: f64 = 25.0 / 108.0;
const B4: f64 = 125.0 / 108.0;
const E1: f64 = 17.0 / 54.0;
const E2: f64 = 7.0 / 36.0;
const E3: f64 = 0.0;
const E4: f64 = 125.0 / 108.0;
const C1X: f64 = 1.0 / 2.0;
const C2X: f64 = -3.0 / 2.0;
const C3X: f64 = 121.0 / 50.0;
const C4X: f64 = 29.0 / 250.0;
const A2X: f64 = 1.0;
const A3X: f64 = 3.0 / 5.0;

/// Order of the embedded (error) solution.
const EMBEDDED_ORDER: i32 = 3;

pub fn rosenbrock_step<S: OdeSystem + ?Sized>(
    system: &S,
    t: f64,
    y: &[f64],
    h: f64,
    config: &SolverConfig,
) -> Result<StepResult, SolverError> {
    let n = system.dimension();
    let mut jac = DMatrix::zeros(n, n);
    let mut dfdt = vec![0.0; n];
    system.jacobian(t, y, &mut jac, &mut dfdt)?;

    let mut f0 = vec![0.0; n];
    system.rhs(t, y, &mut f0)?;

    let mut stage = -jac;
    for i in 0..n {
        stage[(i, i)] += 1.0 / (GAMMA * h);
    }
    let lu = stage.lu();
    if !lu.is_invertible() {
        return Err(SolverError::LinearSolveFailure { t });
    }
    let solve = |rhs: Vec<f64>| -> Result<Vec<f64>, SolverError> {
        lu.solve(&DVector::from_vec(rhs))
            .map(|v| v.data.into())
            .ok_or(SolverError::LinearSolveFailure { t })
    };

    let g1 = solve((0..n).map(|i| f0[i] + h * C1X * dfdt[i]).collect())?;

    let mut ys: Vec<f64> = (0..n).map(|i| y[i] + A21 * g1[i]).collect();
    let mut f = vec![0.0; n];
    system.rhs(t + A2X * h, &ys, &mut f)?;
    let g2 = solve((0..n).map(|i| f[i] + h * C2X * dfdt[i] + C21 * g1[i] / h).collect())?;

    for i in 0..n {
        ys[i] = y[i] + A31 * g1[i] + A32 * g2[i];
    }
    system.rhs(t + A3X * h, &ys, &mut f)?;
    let g3 = solve(
        (0..n)
            .map(|i| f[i] + h * C3X * dfdt[i] + (C31 * g1[i] + C32 * g2[i]) / h)
            .collect(),
    )?;
    // The fourth stage reuses the third function evaluation.
    let g4 = solve(
        (0..n)
            .map(|i| f[i] + h * C4X * dfdt[i] + (C41 * g1[i] + C42 * g2[i] + C43 * g3[i]) / h)
            .collect(),
    )?;

    let y_next: Vec<f64> = (0..n)
        .map(|i| y[i] + B1 * g1[i] + B2 * g2[i] + B3 * g3[i] + B4 * g4[i])
        .collect();
    let err: Vec<f64> = (0..n)
        .map(|i| E1 * g1[i] + E2 * g2[i] + E3 * g3[i] + E4 * g4[i])
        .collect();
    let error = error_norm(&err, y, &y_next, config);
    Ok(StepResult {
        y: y_next,
        error,
        h_suggest: suggest_step(h, error, EMBEDDED_ORDER),
    })
}
