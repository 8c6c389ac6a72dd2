use num_complex::Complex64;

use super::{fft_radix2, AnalysisError};
use crate::solvers::TimeSeries;

/// One-sided periodogram on the grid `f_k = k/(nΔ)`, `k = 0..=n/2`, with
/// `f` in cycles per unit of scaled time.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub freqs: Vec<f64>,
    pub power: Vec<f64>,
    pub n: usize,
    pub dt: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }

    /// Grid spacing `1/(nΔ)`.
    pub fn resolution(&self) -> f64 {
        1.0 / (self.n as f64 * self.dt)
    }

    /// Bin index nearest to frequency `f`, clamped to the grid.
    pub fn bin_of(&self, f: f64) -> usize {
        let k = (f * self.n as f64 * self.dt).round();
        (k.max(0.0) as usize).min(self.len().saturating_sub(1))
    }

    pub fn max_power(&self) -> f64 {
        self.power.iter().copied().fold(0.0, f64::max)
    }
}

/// Periodogram of the first component of a series.
pub fn periodogram(series: &TimeSeries) -> Result<Spectrum, AnalysisError> {
    periodogram_of(&series.sz(), series.dt)
}

/// `P(f_0) = |Y_0|²/n²`, `P(f_k) = (|Y_k|² + |Y_{n−k}|²)/n²` for
/// `0 < k < n/2`, `P(f_{n/2}) = |Y_{n/2}|²/n²`. Rectangular window.
pub fn periodogram_of(samples: &[f64], dt: f64) -> Result<Spectrum, AnalysisError> {
    let n = samples.len();
    let input: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let y = fft_radix2(&input)?;
    let norm = (n as f64) * (n as f64);
    let half = n / 2;
    let power: Vec<f64> = (0..=half)
        .map(|k| {
            if k == 0 || k == half {
                y[k].norm_sqr() / norm
            } else {
                (y[k].norm_sqr() + y[n - k].norm_sqr()) / norm
            }
        })
        .collect();
    let span = n as f64 * dt;
    let freqs = (0..=half).map(|k| k as f64 / span).collect();
    Ok(Spectrum {
        freqs,
        power,
        n,
        dt,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub freq: f64,
    pub power: f64,
}

impl Peak {
    pub fn angular_frequency(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.freq
    }
}

/// Local maxima of the spectrum, strongest first, at most `max_count`.
///
/// A bin is a peak when it is strictly above both neighbours (one neighbour
/// at the ends of the grid). A run of equal values counts as a single peak,
/// reported at its left-most bin, when it is strictly above the bins on
/// either side of it. A completely flat spectrum has no peaks.
pub fn dominant_peaks(spectrum: &Spectrum, max_count: usize) -> Vec<Peak> {
    let p = &spectrum.power;
    let len = p.len();
    let mut peaks = Vec::new();
    let mut start = 0;
    while start < len {
        let mut end = start;
        while end + 1 < len && p[end + 1] == p[start] {
            end += 1;
        }
        let left_ok = start == 0 || p[start - 1] < p[start];
        let right_ok = end + 1 == len || p[end + 1] < p[end];
        let whole = start == 0 && end + 1 == len;
        if left_ok && right_ok && !whole {
            peaks.push(Peak {
                index: start,
                freq: spectrum.freqs[start],
                power: p[start],
            });
        }
        start = end + 1;
    }
    // Stable sort keeps lower frequencies first among equal powers.
    peaks.sort_by(|a, b| b.power.total_cmp(&a.power));
    peaks.truncate(max_count);
    peaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn on_bin_cosine() {
        let n = 256;
        let k0 = 17;
        let y: Vec<f64> = (0..n)
            .map(|j| (2.0 * PI * (k0 * j) as f64 / n as f64).cos())
            .collect();
        let s = periodogram_of(&y, 0.1).unwrap();
        assert_eq!(s.len(), n / 2 + 1);
        for (k, p) in s.power.iter().enumerate() {
            let expected = if k == k0 { 0.5 } else { 0.0 };
            assert!((p - expected).abs() <= 1e-12, "bin {k}: {p}");
        }
    }

    #[test]
    fn zero_and_constant_signals() {
        let s = periodogram_of(&[0.0; 32], 1.0).unwrap();
        assert!(s.power.iter().all(|&p| p == 0.0));
        assert!(dominant_peaks(&s, 5).is_empty());

        let a = -0.3;
        let s = periodogram_of(&[a; 32], 1.0).unwrap();
        assert!((s.power[0] - a * a).abs() < 1e-15);
        assert!(s.power[1..].iter().all(|&p| p.abs() < 1e-30));
    }

    #[test]
    fn frequency_grid() {
        let s = periodogram_of(&[1.0; 16], 0.25).unwrap();
        assert_eq!(s.freqs[0], 0.0);
        assert_eq!(s.freqs[8], 2.0);
        assert_eq!(s.resolution(), 0.25);
        assert_eq!(s.bin_of(0.76), 3);
        assert_eq!(s.bin_of(100.0), 8);
    }

    #[test]
    fn non_power_of_two_rejected() {
        assert_eq!(periodogram_of(&[0.0; 12], 1.0), Err(AnalysisError::NotPowerOfTwo(12)));
    }

    fn spectrum(power: Vec<f64>) -> Spectrum {
        let n = 2 * (power.len() - 1);
        Spectrum {
            freqs: (0..power.len()).map(|k| k as f64).collect(),
            power,
            n,
            dt: 1.0 / n as f64,
        }
    }

    #[test]
    fn peak_picking() {
        let s = spectrum(vec![3.0, 1.0, 2.0, 1.0, 5.0, 5.0, 4.0, 6.0]);
        let peaks = dominant_peaks(&s, 10);
        let idx: Vec<usize> = peaks.iter().map(|p| p.index).collect();
        assert_eq!(idx, vec![7, 4, 0, 2]);
        assert_eq!(dominant_peaks(&s, 2).len(), 2);
        assert!(dominant_peaks(&spectrum(vec![2.0; 9]), 3).is_empty());
    }
}
