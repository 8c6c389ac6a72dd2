//! Three-stage Radau IIA (order 5) implicit Runge-Kutta stepper.
//!
//! Stage increments `Z_i = Y_i − y` solve `Z = h (A ⊗ I) F(Z)`; this is done by
//! simplified Newton iteration with the Jacobian frozen at `(t, y)`. The error
//! estimate is the embedded third-order formula of Hairer & Wanner,
//! `err = (I − hγ₀J)⁻¹ (hγ₀ f(t, y) + γ₀ Σ e_i Z_i)`.

use nalgebra::{DMatrix, DVector};

use super::{error_norm, suggest_step, OdeSystem, SolverConfig, SolverError, StepResult};

const SQRT6: f64 = 2.449_489_742_783_178;

const C: [f64; 3] = [(4.0 - SQRT6) / 10.0, (4.0 + SQRT6) / 10.0, 1.0];

const A: [[f64; 3]; 3] = [
    [
        (88.0 - 7.0 * SQRT6) / 360.0,
        (296.0 - 169.0 * SQRT6) / 1800.0,
        (-2.0 + 3.0 * SQRT6) / 225.0,
    ],
    [
        (296.0 + 169.0 * SQRT6) / 1800.0,
        (88.0 + 7.0 * SQRT6) / 360.0,
        (-2.0 - 3.0 * SQRT6) / 225.0,
    ],
    [(16.0 - SQRT6) / 36.0, (16.0 + SQRT6) / 36.0, 1.0 / 9.0],
];

/// Error-estimate weights, already divided by `γ₀`.
const E: [f64; 3] = [
    -(13.0 + 7.0 * SQRT6) / 3.0,
    (-13.0 + 7.0 * SQRT6) / 3.0,
    -1.0 / 3.0,
];

/// Real eigenvalue of `A`: `γ₀ = 1/u₁`, `u₁ = (6 + 81^(1/3) − 9^(1/3))/30` inverted.
fn gamma0() -> f64 {
    let u1 = 30.0 / (6.0 + 81f64.cbrt() - 9f64.cbrt());
    1.0 / u1
}

const NEWTON_TOL: f64 = 0.03;
const NEWTON_MAX_ITER: usize = 7;
const EMBEDDED_ORDER: i32 = 3;

pub fn implicit_rk_step<S: OdeSystem + ?Sized>(
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

    let mut newton = DMatrix::<f64>::zeros(3 * n, 3 * n);
    for (bi, row) in A.iter().enumerate() {
        for (bj, a) in row.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let id = if bi == bj && i == j { 1.0 } else { 0.0 };
                    newton[(bi * n + i, bj * n + j)] = id - h * a * jac[(i, j)];
                }
            }
        }
    }
    let newton = newton.lu();
    if !newton.is_invertible() {
        return Err(SolverError::LinearSolveFailure { t });
    }

    let scale: Vec<f64> = y.iter().map(|v| config.atol + config.rtol * v.abs()).collect();
    let mut z = vec![0.0; 3 * n];
    let mut stage_y = vec![0.0; n];
    let mut f = vec![0.0; 3 * n];
    let mut previous_norm: Option<f64> = None;
    let mut converged = false;

    for _ in 0..NEWTON_MAX_ITER {
        for s in 0..3 {
            for i in 0..n {
                stage_y[i] = y[i] + z[s * n + i];
            }
            system.rhs(t + C[s] * h, &stage_y, &mut f[s * n..(s + 1) * n])?;
        }
        let mut residual = DVector::<f64>::zeros(3 * n);
        for s in 0..3 {
            for i in 0..n {
                let af: f64 = (0..3).map(|k| A[s][k] * f[k * n + i]).sum();
                residual[s * n + i] = -z[s * n + i] + h * af;
            }
        }
        let dz = newton
            .solve(&residual)
            .ok_or(SolverError::LinearSolveFailure { t })?;
        for (zi, di) in z.iter_mut().zip(dz.iter()) {
            *zi += di;
        }
        let norm = (dz
            .iter()
            .enumerate()
            .map(|(k, d)| (d / scale[k % n]).powi(2))
            .sum::<f64>()
            / (3 * n) as f64)
            .sqrt();
        if !norm.is_finite() {
            break;
        }
        if norm <= NEWTON_TOL {
            converged = true;
            break;
        }
        if let Some(prev) = previous_norm {
            if norm >= prev {
                break;
            }
        }
        previous_norm = Some(norm);
    }
    if !converged {
        return Err(SolverError::NewtonDivergence { t, h });
    }

    let y_next: Vec<f64> = (0..n).map(|i| y[i] + z[2 * n + i]).collect();

    let g0 = gamma0();
    let mut f0 = vec![0.0; n];
    system.rhs(t, y, &mut f0)?;
    let mut est_matrix = -jac * (h * g0);
    for i in 0..n {
        est_matrix[(i, i)] += 1.0;
    }
    let rhs = DVector::from_iterator(
        n,
        (0..n).map(|i| {
            h * g0 * f0[i] + g0 * (E[0] * z[i] + E[1] * z[n + i] + E[2] * z[2 * n + i])
        }),
    );
    let err = est_matrix
        .lu()
        .solve(&rhs)
        .ok_or(SolverError::LinearSolveFailure { t })?;
    let error = error_norm(err.as_slice(), y, &y_next, config);
    Ok(StepResult {
        y: y_next,
        error,
        h_suggest: suggest_step(h, error, EMBEDDED_ORDER),
    })
}
