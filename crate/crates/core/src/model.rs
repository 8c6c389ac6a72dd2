//! Physical model: a two-level atom coupled to a single cavity mode whose
//! frequency is modulated in time.
//!
//! Only the detuning `δ(t) = ω₀ − ω_c(t)` enters the dynamics. Time is the
//! scaled time `gt` and all frequencies are expressed in units of `g`.
//!
//! Two equivalent first-order formulations are provided:
//!
//! * [`ThirdOrderSystem`]: the third-order population equation recast as
//!   three first-order equations in `(⟨S_z⟩, ⟨Ṡ_z⟩, ⟨S̈_z⟩)`. It carries a
//!   `δ̇/δ` coefficient and is singular wherever the detuning crosses zero
//!   with non-zero slope.
//! * [`RegularSystem`]: the Heisenberg equations closed on
//!   `(⟨S_z⟩, ⟨Ṡ_z⟩, ⟨C⟩)` with `C = g(S₊a + a†S₋)`. It is linear, has no
//!   poles and is the production path.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::solvers::OdeSystem;

/// Detuning magnitudes at or below this value are treated as a level
/// crossing by the third-order formulation.
pub const DELTA_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("coupling g must be positive and finite, got {0}")]
    NonPositiveCoupling(f64),
    #[error("N + 1/2 must be positive, got N = {0}")]
    NonPositiveExcitation(f64),
    #[error("initial <S_z> must lie in [-1/2, 1/2], got {0}")]
    SzOutOfRange(f64),
    #[error("detuning amplitude must be finite, got {0}")]
    NonFiniteDetuning(f64),
    #[error("modulation frequency must be positive and finite, got {0}")]
    InvalidFrequency(f64),
    #[error("singular detuning at gt = {t}: delta = {delta:e} with non-zero slope (level crossing)")]
    SingularDetuning { t: f64, delta: f64 },
    #[error("only an initially excited atom (<S_z(0)> = +1/2) is supported, got {0}")]
    UnsupportedInitialState(f64),
}

/// Physical constants of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Expectation of the conserved excitation number `a†a + S_z`.
    pub capital_n: f64,
    /// Atom-field coupling; sets the time unit.
    pub g: f64,
    /// Detuning amplitude, in units of `g`.
    pub delta0: f64,
    /// Initial `⟨S_z⟩`.
    pub sz0: f64,
}

impl SystemParams {
    /// Parameters for an initially excited atom.
    pub fn new(capital_n: f64, g: f64, delta0: f64) -> Result<Self, ModelError> {
        Self::with_initial_sz(capital_n, g, delta0, 0.5)
    }

    pub fn with_initial_sz(
        capital_n: f64,
        g: f64,
        delta0: f64,
        sz0: f64,
    ) -> Result<Self, ModelError> {
        let params = Self {
            capital_n,
            g,
            delta0,
            sz0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.g.is_finite() && self.g > 0.0) {
            return Err(ModelError::NonPositiveCoupling(self.g));
        }
        if !(self.capital_n.is_finite() && self.capital_n + 0.5 > 0.0) {
            return Err(ModelError::NonPositiveExcitation(self.capital_n));
        }
        if !self.delta0.is_finite() {
            return Err(ModelError::NonFiniteDetuning(self.delta0));
        }
        if !(-0.5..=0.5).contains(&self.sz0) {
            return Err(ModelError::SzOutOfRange(self.sz0));
        }
        Ok(())
    }

    /// `K = 4g²(N + 1/2)`, the squared Rabi frequency at zero detuning.
    pub fn coupling_constant(&self) -> f64 {
        4.0 * self.g * self.g * (self.capital_n + 0.5)
    }

    /// Generalized Rabi frequency `Ω = sqrt(δ₀² + 4g²(N + 1/2))`.
    ///
    /// `δ₀` is the amplitude parameter of the detuning profile, not `δ(0)`;
    /// for bichromatic modulation the two differ by a factor of two.
    pub fn rabi_frequency(&self) -> f64 {
        (self.delta0 * self.delta0 + self.coupling_constant()).sqrt()
    }

    /// Rabi period `2π/Ω`, also the Poincaré strobe period.
    pub fn rabi_period(&self) -> f64 {
        2.0 * PI / self.rabi_frequency()
    }
}

/// Free-function form of [`SystemParams::rabi_frequency`].
pub fn rabi_frequency(params: &SystemParams) -> f64 {
    params.rabi_frequency()
}

/// Time dependence of the detuning. Frequencies are angular, in units of `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetuningProfile {
    Constant,
    Monochromatic { omega: f64 },
    Bichromatic { omega1: f64, omega2: f64 },
}

impl DetuningProfile {
    pub fn validate(&self) -> Result<(), ModelError> {
        let check = |w: f64| {
            if w.is_finite() && w > 0.0 {
                Ok(())
            } else {
                Err(ModelError::InvalidFrequency(w))
            }
        };
        match *self {
            DetuningProfile::Constant => Ok(()),
            DetuningProfile::Monochromatic { omega } => check(omega),
            DetuningProfile::Bichromatic { omega1, omega2 } => {
                check(omega1)?;
                check(omega2)
            }
        }
    }

    /// Modulation frequencies present in the profile.
    pub fn frequencies(&self) -> Vec<f64> {
        match *self {
            DetuningProfile::Constant => Vec::new(),
            DetuningProfile::Monochromatic { omega } => vec![omega],
            DetuningProfile::Bichromatic { omega1, omega2 } => vec![omega1, omega2],
        }
    }

    /// `δ(t)`.
    pub fn detuning(&self, params: &SystemParams, t: f64) -> f64 {
        let d0 = params.delta0;
        match *self {
            DetuningProfile::Constant => d0,
            DetuningProfile::Monochromatic { omega } => d0 * (omega * t).cos(),
            DetuningProfile::Bichromatic { omega1, omega2 } => {
                d0 * ((omega1 * t).cos() + (omega2 * t).cos())
            }
        }
    }

    /// `δ̇(t)`.
    pub fn detuning_rate(&self, params: &SystemParams, t: f64) -> f64 {
        let d0 = params.delta0;
        match *self {
            DetuningProfile::Constant => 0.0,
            DetuningProfile::Monochromatic { omega } => -d0 * omega * (omega * t).sin(),
            DetuningProfile::Bichromatic { omega1, omega2 } => {
                -d0 * (omega1 * (omega1 * t).sin() + omega2 * (omega2 * t).sin())
            }
        }
    }

    /// `δ̈(t)`.
    pub fn detuning_acceleration(&self, params: &SystemParams, t: f64) -> f64 {
        let d0 = params.delta0;
        match *self {
            DetuningProfile::Constant => 0.0,
            DetuningProfile::Monochromatic { omega } => -d0 * omega * omega * (omega * t).cos(),
            DetuningProfile::Bichromatic { omega1, omega2 } => {
                -d0 * (omega1 * omega1 * (omega1 * t).cos() + omega2 * omega2 * (omega2 * t).cos())
            }
        }
    }
}

/// Which set of equations to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    ThirdOrder,
    Regular,
}

/// `(⟨S_z⟩, ⟨Ṡ_z⟩, ⟨S̈_z⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThirdOrderState {
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
}

impl ThirdOrderState {
    pub fn new(y1: f64, y2: f64, y3: f64) -> Self {
        Self { y1, y2, y3 }
    }

    /// Excited atom in a Fock field: `(1/2, 0, −K/2)`.
    pub fn initial(params: &SystemParams) -> Result<Self, ModelError> {
        require_excited(params)?;
        Ok(Self::new(0.5, 0.0, -0.5 * params.coupling_constant()))
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.y1, self.y2, self.y3]
    }

    pub fn from_slice(y: &[f64]) -> Self {
        Self::new(y[0], y[1], y[2])
    }
}

/// `(⟨S_z⟩, ⟨Ṡ_z⟩, ⟨C⟩)` with `C = g(S₊a + a†S₋)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularState {
    pub s: f64,
    pub d: f64,
    pub c: f64,
}

impl RegularState {
    pub fn new(s: f64, d: f64, c: f64) -> Self {
        Self { s, d, c }
    }

    pub fn initial(params: &SystemParams) -> Result<Self, ModelError> {
        require_excited(params)?;
        Ok(Self::new(0.5, 0.0, 0.0))
    }

    /// `4s² + (d² + c²)/(g²(N + 1/2))`; equal to one for pure states.
    pub fn bloch_norm(&self, params: &SystemParams) -> f64 {
        let scale = params.g * params.g * (params.capital_n + 0.5);
        4.0 * self.s * self.s + (self.d * self.d + self.c * self.c) / scale
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.s, self.d, self.c]
    }

    pub fn from_slice(y: &[f64]) -> Self {
        Self::new(y[0], y[1], y[2])
    }
}

fn require_excited(params: &SystemParams) -> Result<(), ModelError> {
    if params.sz0 != 0.5 {
        return Err(ModelError::UnsupportedInitialState(params.sz0));
    }
    Ok(())
}

/// Initial state vector of the given formulation.
pub fn initial_state(params: &SystemParams, formulation: Formulation) -> Result<[f64; 3], ModelError> {
    match formulation {
        Formulation::ThirdOrder => ThirdOrderState::initial(params).map(ThirdOrderState::to_array),
        Formulation::Regular => RegularState::initial(params).map(RegularState::to_array),
    }
}

/// Closed-form `⟨S_z(t)⟩` for constant detuning `δ₀`:
/// `1/2 − (K/(2Ω²))(1 − cos Ωt)`.
pub fn analytic_constant_detuning(params: &SystemParams, t: f64) -> f64 {
    let k = params.coupling_constant();
    let omega = params.rabi_frequency();
    0.5 - k / (2.0 * omega * omega) * (1.0 - (omega * t).cos())
}

/// 3×3 Jacobian together with the explicit time derivative of the RHS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linearization {
    pub jacobian: [[f64; 3]; 3],
    pub dfdt: [f64; 3],
}

/// The third-order population equation as a first-order system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThirdOrderSystem {
    pub params: SystemParams,
    pub profile: DetuningProfile,
}

impl ThirdOrderSystem {
    pub fn new(params: SystemParams, profile: DetuningProfile) -> Self {
        Self { params, profile }
    }

    /// `δ̇/δ`, defined as zero whenever `δ̇ = 0`.
    fn log_rate(&self, t: f64) -> Result<(f64, f64, f64), ModelError> {
        let delta = self.profile.detuning(&self.params, t);
        let rate = self.profile.detuning_rate(&self.params, t);
        if rate == 0.0 {
            return Ok((delta, rate, 0.0));
        }
        if delta.abs() <= DELTA_FLOOR {
            return Err(ModelError::SingularDetuning { t, delta });
        }
        Ok((delta, rate, rate / delta))
    }

    pub fn derivative(&self, t: f64, y: &ThirdOrderState) -> Result<ThirdOrderState, ModelError> {
        let k = self.params.coupling_constant();
        let (delta, _, ratio) = self.log_rate(t)?;
        Ok(ThirdOrderState::new(
            y.y2,
            y.y3,
            ratio * y.y3 - (delta * delta + k) * y.y2 + k * ratio * y.y1,
        ))
    }

    pub fn linearization(&self, t: f64, y: &ThirdOrderState) -> Result<Linearization, ModelError> {
        let k = self.params.coupling_constant();
        let (delta, rate, ratio) = self.log_rate(t)?;
        let accel = self.profile.detuning_acceleration(&self.params, t);
        // d/dt (δ̇/δ) = δ̈/δ − (δ̇/δ)²; zero when δ vanishes identically.
        let ratio_dot = if delta.abs() <= DELTA_FLOOR {
            0.0
        } else {
            accel / delta - ratio * ratio
        };
        Ok(Linearization {
            jacobian: [
                [0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0],
                [k * ratio, -(delta * delta + k), ratio],
            ],
            dfdt: [
                0.0,
                0.0,
                ratio_dot * (y.y3 + k * y.y1) - 2.0 * delta * rate * y.y2,
            ],
        })
    }
}

/// The pole-free `(s, d, c)` system: `ṡ = d`, `ḋ = δc − Ks`, `ċ = −δd`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularSystem {
    pub params: SystemParams,
    pub profile: DetuningProfile,
}

impl RegularSystem {
    pub fn new(params: SystemParams, profile: DetuningProfile) -> Self {
        Self { params, profile }
    }

    pub fn derivative(&self, t: f64, y: &RegularState) -> RegularState {
        let k = self.params.coupling_constant();
        let delta = self.profile.detuning(&self.params, t);
        RegularState::new(y.d, delta * y.c - k * y.s, -delta * y.d)
    }

    pub fn linearization(&self, t: f64, y: &RegularState) -> Linearization {
        let k = self.params.coupling_constant();
        let delta = self.profile.detuning(&self.params, t);
        let rate = self.profile.detuning_rate(&self.params, t);
        Linearization {
            jacobian: [[0.0, 1.0, 0.0], [-k, 0.0, delta], [0.0, -delta, 0.0]],
            dfdt: [0.0, rate * y.c, -rate * y.d],
        }
    }
}

fn write_linearization(lin: &Linearization, jac: &mut DMatrix<f64>, dfdt: &mut [f64]) {
    for (i, row) in lin.jacobian.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            jac[(i, j)] = *v;
        }
    }
    dfdt.copy_from_slice(&lin.dfdt);
}

impl OdeSystem for ThirdOrderSystem {
    fn dimension(&self) -> usize {
        3
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<(), ModelError> {
        let d = self.derivative(t, &ThirdOrderState::from_slice(y))?;
        dy.copy_from_slice(&d.to_array());
        Ok(())
    }

    fn jacobian(
        &self,
        t: f64,
        y: &[f64],
        jac: &mut DMatrix<f64>,
        dfdt: &mut [f64],
    ) -> Result<(), ModelError> {
        let lin = self.linearization(t, &ThirdOrderState::from_slice(y))?;
        write_linearization(&lin, jac, dfdt);
        Ok(())
    }
}

impl OdeSystem for RegularSystem {
    fn dimension(&self) -> usize {
        3
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<(), ModelError> {
        let d = self.derivative(t, &RegularState::from_slice(y));
        dy.copy_from_slice(&d.to_array());
        Ok(())
    }

    fn jacobian(
        &self,
        t: f64,
        y: &[f64],
        jac: &mut DMatrix<f64>,
        dfdt: &mut [f64],
    ) -> Result<(), ModelError> {
        let lin = self.linearization(t, &RegularState::from_slice(y));
        write_linearization(&lin, jac, dfdt);
        Ok(())
    }
}
