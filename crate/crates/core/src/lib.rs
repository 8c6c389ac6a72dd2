//! Simulation and analysis of a two-level atom coupled to a
//! frequency-modulated quantized cavity mode.
//!
//! * [`model`]: parameters, detuning profiles and the two ODE formulations.
//! * [`solvers`]: Rosenbrock and Radau IIA steppers with adaptive control.
//! * [`analysis`]: FFT, periodogram, peaks, phase plane, Poincaré sections.
//! * [`oracle`]: exact two-level Schrödinger reference dynamics.
//! * [`cli`]: run configuration, presets and CSV/SVG output.

pub mod analysis;
pub mod cli;
pub mod model;
pub mod oracle;
pub mod solvers;

pub use model::{DetuningProfile, Formulation, SystemParams};
pub use solvers::{Method, SolverConfig, TimeSeries};
