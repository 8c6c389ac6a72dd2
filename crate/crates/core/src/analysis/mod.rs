//! Nonlinear-dynamics diagnostics: FFT, periodogram, peak picking,
//! phase plane and Poincaré sections.

mod fft;
mod poincare;
mod spectrum;

use thiserror::Error;

pub use fft::{fft_radix2, ifft_radix2};
pub use poincare::{
    dispersion, min_pairwise_distance, phase_plane, poincare_section, PoincareSet,
    MIN_SAMPLES_PER_STROBE,
};
pub use spectrum::{dominant_peaks, periodogram, periodogram_of, Peak, Spectrum};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("length {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("strobe period spans only {0:.2} samples, need at least 4")]
    StrobeTooFine(f64),
}
