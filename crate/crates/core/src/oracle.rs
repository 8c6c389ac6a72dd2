//! Independent reference dynamics: the Schrödinger equation restricted to
//! the invariant two-dimensional subspace `{|e,n⟩, |g,n+1⟩}`.
//!
//! In that subspace the interaction Hamiltonian is
//! `[[δ/2, G], [G, −δ/2]]` with `G = g√(n+1)`, and expectation values follow
//! from the amplitudes directly:
//! `⟨S_z⟩ = (|c_e|² − |c_g|²)/2`, `⟨C⟩ = 2G Re(c_e* c_g)`,
//! `⟨Ṡ_z⟩ = 2G Im(c_e* c_g)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::model::{DetuningProfile, ModelError, SystemParams};
use crate::solvers::{
    sample_uniform, Method, OdeSystem, SeriesMeta, SolverConfig, SolverError, StepStats,
    TimeSeries,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("N - 1/2 must be a non-negative integer photon number, got N = {0}")]
    NonFockN(f64),
    #[error("series grids differ: {0}")]
    GridMismatch(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Tolerance used for the reference integration.
pub const ORACLE_TOLERANCE: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    /// Amplitude of `|e, n⟩`.
    pub ce: Complex64,
    /// Amplitude of `|g, n+1⟩`.
    pub cg: Complex64,
}

impl Amplitudes {
    pub fn excited() -> Self {
        Self {
            ce: Complex64::new(1.0, 0.0),
            cg: Complex64::new(0.0, 0.0),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.ce.norm_sqr() + self.cg.norm_sqr()
    }

    fn to_reals(self) -> [f64; 4] {
        [self.ce.re, self.ce.im, self.cg.re, self.cg.im]
    }

    fn from_reals(y: &[f64]) -> Self {
        Self {
            ce: Complex64::new(y[0], y[1]),
            cg: Complex64::new(y[2], y[3]),
        }
    }

    /// `(⟨S_z⟩, ⟨Ṡ_z⟩, ⟨C⟩)` for effective coupling `G = g√(n+1)`.
    pub fn expectations(&self, coupling: f64) -> [f64; 3] {
        let rho = self.ce.conj() * self.cg;
        [
            0.5 * (self.ce.norm_sqr() - self.cg.norm_sqr()),
            2.0 * coupling * rho.im,
            2.0 * coupling * rho.re,
        ]
    }
}

/// Photon number `n = N − 1/2`, which must be a non-negative integer.
pub fn photon_number(params: &SystemParams) -> Result<u64, OracleError> {
    let n = params.capital_n - 0.5;
    if n >= 0.0 && n.fract() == 0.0 && n < 1e15 {
        Ok(n as u64)
    } else {
        Err(OracleError::NonFockN(params.capital_n))
    }
}

/// Two-level Schrödinger equation carried as four real components
/// `(Re c_e, Im c_e, Re c_g, Im c_g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchrodingerSystem {
    pub params: SystemParams,
    pub profile: DetuningProfile,
    coupling: f64,
}

impl SchrodingerSystem {
    pub fn new(params: SystemParams, profile: DetuningProfile) -> Result<Self, OracleError> {
        let n = photon_number(&params)?;
        Ok(Self {
            params,
            profile,
            coupling: params.g * ((n + 1) as f64).sqrt(),
        })
    }

    /// `G = g√(n+1)`.
    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// `d/dt (c_e, c_g) = −i H (c_e, c_g)`.
    pub fn derivative(&self, t: f64, amp: &Amplitudes) -> Amplitudes {
        let half = 0.5 * self.profile.detuning(&self.params, t);
        let minus_i = Complex64::new(0.0, -1.0);
        Amplitudes {
            ce: minus_i * (half * amp.ce + self.coupling * amp.cg),
            cg: minus_i * (self.coupling * amp.ce - half * amp.cg),
        }
    }
}

/// Free-function form of [`SchrodingerSystem::derivative`].
pub fn schrodinger_rhs(
    params: &SystemParams,
    profile: &DetuningProfile,
    t: f64,
    amp: &Amplitudes,
) -> Result<Amplitudes, OracleError> {
    Ok(SchrodingerSystem::new(*params, *profile)?.derivative(t, amp))
}

impl OdeSystem for SchrodingerSystem {
    fn dimension(&self) -> usize {
        4
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<(), ModelError> {
        let d = self.derivative(t, &Amplitudes::from_reals(y));
        dy.copy_from_slice(&d.to_reals());
        Ok(())
    }

    fn jacobian(
        &self,
        t: f64,
        y: &[f64],
        jac: &mut DMatrix<f64>,
        dfdt: &mut [f64],
    ) -> Result<(), ModelError> {
        // With H = [[a, G], [G, −a]], a = δ/2, and c = x + iy:
        //   ẋ_e =  a y_e + G y_g,   ẏ_e = −a x_e − G x_g,
        //   ẋ_g =  G y_e − a y_g,   ẏ_g = −G x_e + a x_g.
        let a = 0.5 * self.profile.detuning(&self.params, t);
        let g = self.coupling;
        let rows = [
            [0.0, a, 0.0, g],
            [-a, 0.0, -g, 0.0],
            [0.0, g, 0.0, -a],
            [-g, 0.0, a, 0.0],
        ];
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                jac[(i, j)] = *v;
            }
        }
        let rate = 0.5 * self.profile.detuning_rate(&self.params, t);
        dfdt.copy_from_slice(&[rate * y[1], -rate * y[0], -rate * y[3], rate * y[2]]);
        Ok(())
    }
}

/// Reference trajectory on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRun {
    /// Samples of `(⟨S_z⟩, ⟨Ṡ_z⟩, ⟨C⟩)`.
    pub series: TimeSeries,
    /// Largest `|‖ψ‖² − 1|` over the grid.
    pub max_norm_drift: f64,
    pub stats: StepStats,
}

/// Evolves the initially excited atom `(c_e, c_g) = (1, 0)` and samples the
/// expectations at `t0 + k·dt`, `k = 0..n`.
pub fn evolve(
    params: &SystemParams,
    profile: &DetuningProfile,
    t0: f64,
    dt: f64,
    n: usize,
) -> Result<OracleRun, OracleError> {
    if params.sz0 != 0.5 {
        return Err(ModelError::UnsupportedInitialState(params.sz0).into());
    }
    let system = SchrodingerSystem::new(*params, *profile)?;
    let config = SolverConfig::with_method(Method::ImplicitRk)
        .with_tolerances(ORACLE_TOLERANCE, ORACLE_TOLERANCE);
    let (amps, stats) = sample_uniform(&system, &Amplitudes::excited().to_reals(), t0, dt, n, &config)?;

    let mut series = TimeSeries::new(t0, dt, 3).with_meta(SeriesMeta {
        params: *params,
        profile: *profile,
    });
    let mut max_norm_drift: f64 = 0.0;
    for y in amps.states() {
        let amp = Amplitudes::from_reals(y);
        max_norm_drift = max_norm_drift.max((amp.norm_sqr() - 1.0).abs());
        series.push(&amp.expectations(system.coupling()));
    }
    Ok(OracleRun {
        series,
        max_norm_drift,
        stats,
    })
}

/// `max_k |a_k − b_k|` over the `⟨S_z⟩` channel of two series on the same grid.
pub fn compare_series(a: &TimeSeries, b: &TimeSeries) -> Result<f64, OracleError> {
    if a.t0 != b.t0 || a.dt != b.dt || a.len() != b.len() {
        return Err(OracleError::GridMismatch(format!(
            "(t0={}, dt={}, n={}) vs (t0={}, dt={}, n={})",
            a.t0,
            a.dt,
            a.len(),
            b.t0,
            b.dt,
            b.len()
        )));
    }
    Ok(a
        .states()
        .zip(b.states())
        .map(|(x, y)| (x[0] - y[0]).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rhs_examples() {
        let p = SystemParams::new(0.5, 1.0, 0.0).unwrap();
        let d = schrodinger_rhs(&p, &DetuningProfile::Constant, 0.0, &Amplitudes::excited()).unwrap();
        assert_eq!(d.ce, c(0.0, 0.0));
        assert_eq!(d.cg, c(0.0, -1.0));

        let zero = Amplitudes {
            ce: c(0.0, 0.0),
            cg: c(0.0, 0.0),
        };
        let d = schrodinger_rhs(&p, &DetuningProfile::Constant, 1.0, &zero).unwrap();
        assert_eq!(d, zero);
    }

    #[test]
    fn hamiltonian_flow_preserves_norm() {
        let p = SystemParams::new(2.5, 1.0, 0.7).unwrap();
        let profile = DetuningProfile::Monochromatic { omega: 1.3 };
        let sys = SchrodingerSystem::new(p, profile).unwrap();
        let amp = Amplitudes {
            ce: c(0.3, -0.4),
            cg: c(0.5, 0.2),
        };
        for t in [0.0, 0.4, 2.0] {
            let d = sys.derivative(t, &amp);
            let rate = 2.0 * (amp.ce.conj() * d.ce + amp.cg.conj() * d.cg).re;
            assert!(rate.abs() < 1e-15);
        }
    }

    #[test]
    fn photon_number_must_be_fock() {
        let ok = SystemParams::new(3.5, 1.0, 0.0).unwrap();
        assert_eq!(photon_number(&ok).unwrap(), 3);
        let bad = SystemParams::new(3.2, 1.0, 0.0).unwrap();
        assert_eq!(photon_number(&bad), Err(OracleError::NonFockN(3.2)));
        let low = SystemParams::new(0.0, 1.0, 0.0).unwrap();
        assert!(photon_number(&low).is_err());
    }

    #[test]
    fn initial_expectations() {
        assert_eq!(Amplitudes::excited().expectations(2.0), [0.5, 0.0, 0.0]);
    }

    #[test]
    fn compare_series_examples() {
        let a = TimeSeries::from_scalars(0.0, 0.5, &[0.1, 0.2, 0.3]);
        assert_eq!(compare_series(&a, &a).unwrap(), 0.0);
        let b = TimeSeries::from_scalars(0.0, 0.5, &[0.1 + 1e-3, 0.2 + 1e-3, 0.3 + 1e-3]);
        assert!((compare_series(&a, &b).unwrap() - 1e-3).abs() < 1e-15);
        let c = TimeSeries::from_scalars(0.0, 0.25, &[0.1, 0.2, 0.3]);
        assert!(matches!(compare_series(&a, &c), Err(OracleError::GridMismatch(_))));
    }
}
