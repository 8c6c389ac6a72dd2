use std::f64::consts::PI;

use super::AnalysisError;
use crate::model::SystemParams;
use crate::solvers::TimeSeries;

pub const MIN_SAMPLES_PER_STROBE: f64 = 4.0;

/// Phase-plane points `(⟨S_z⟩, ⟨Ṡ_z⟩)` taken once per Rabi period.
#[derive(Debug, Clone, PartialEq)]
pub struct PoincareSet {
    pub points: Vec<(f64, f64)>,
    pub strobe_period: f64,
}

impl PoincareSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The first `count` strobes.
    pub fn head(&self, count: usize) -> &[(f64, f64)] {
        &self.points[..count.min(self.points.len())]
    }
}

/// Projection of each sample onto its first two components.
pub fn phase_plane(series: &TimeSeries) -> Vec<(f64, f64)> {
    assert!(series.dim() >= 2, "phase plane needs two components");
    series.states().map(|s| (s[0], s[1])).collect()
}

/// Strobes the series at `gt = 2πk/Ω`, `k = 0, 1, ...`, taking the sample
/// nearest to each strobe time inside the series span.
pub fn poincare_section(
    series: &TimeSeries,
    params: &SystemParams,
) -> Result<PoincareSet, AnalysisError> {
    let period = params.rabi_period();
    let per_strobe = period / series.dt;
    if per_strobe < MIN_SAMPLES_PER_STROBE {
        return Err(AnalysisError::StrobeTooFine(per_strobe));
    }
    let mut points = Vec::new();
    if series.is_empty() {
        return Ok(PoincareSet {
            points,
            strobe_period: period,
        });
    }
    let t_end = series.time(series.len() - 1);
    let slack = 1e-9 * series.dt;
    let first = ((series.t0 - slack) / period).ceil().max(0.0) as usize;
    for k in first.. {
        let t = 2.0 * PI * k as f64 / params.rabi_frequency();
        if t > t_end + slack {
            break;
        }
        let idx = ((t - series.t0) / series.dt).round().max(0.0) as usize;
        let idx = idx.min(series.len() - 1);
        let s = series.state(idx);
        points.push((s[0], s[1]));
    }
    Ok(PoincareSet {
        points,
        strobe_period: period,
    })
}

fn pairwise(points: &[(f64, f64)]) -> impl Iterator<Item = f64> + '_ {
    points.iter().enumerate().flat_map(move |(i, a)| {
        points[i + 1..]
            .iter()
            .map(move |b| (a.0 - b.0).hypot(a.1 - b.1))
    })
}

/// Largest pairwise Euclidean distance; zero for fewer than two points.
pub fn dispersion(points: &[(f64, f64)]) -> f64 {
    pairwise(points).fold(0.0, f64::max)
}

/// Smallest pairwise Euclidean distance; `None` for fewer than two points.
pub fn min_pairwise_distance(points: &[(f64, f64)]) -> Option<f64> {
    pairwise(points).reduce(f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispersion_examples() {
        assert_eq!(dispersion(&[(0.3, 0.1)]), 0.0);
        assert_eq!(dispersion(&[(0.0, 0.0), (3.0, 4.0)]), 5.0);
        assert_eq!(dispersion(&[]), 0.0);
        assert_eq!(min_pairwise_distance(&[(0.0, 0.0), (3.0, 4.0), (0.0, 1.0)]), Some(1.0));
        assert_eq!(min_pairwise_distance(&[(1.0, 1.0)]), None);
    }

    fn params() -> SystemParams {
        // Ω = 4, period π/2.
        SystemParams::new(3.5, 1.0, 0.0).unwrap()
    }

    #[test]
    fn constant_series_collapses_to_a_point() {
        let p = params();
        let dt = p.rabi_period() / 16.0;
        let mut s = TimeSeries::new(0.0, dt, 2);
        for _ in 0..200 {
            s.push(&[0.2, -0.1]);
        }
        let set = poincare_section(&s, &p).unwrap();
        assert_eq!(set.len(), 13);
        assert_eq!(dispersion(&set.points), 0.0);
    }

    #[test]
    fn short_series_gives_the_initial_point() {
        let p = params();
        let dt = p.rabi_period() / 16.0;
        let mut s = TimeSeries::new(0.0, dt, 2);
        for k in 0..10 {
            s.push(&[k as f64, 0.0]);
        }
        let set = poincare_section(&s, &p).unwrap();
        assert_eq!(set.points, vec![(0.0, 0.0)]);
    }

    #[test]
    fn strobes_pick_nearest_samples() {
        let p = params();
        let dt = p.rabi_period() / 10.0;
        let mut s = TimeSeries::new(0.0, dt, 2);
        for k in 0..35 {
            s.push(&[k as f64, 0.0]);
        }
        let set = poincare_section(&s, &p).unwrap();
        let idx: Vec<f64> = set.points.iter().map(|p| p.0).collect();
        assert_eq!(idx, vec![0.0, 10.0, 20.0, 30.0]);
    }

    #[test]
    fn coarse_sampling_rejected() {
        let p = params();
        let s = TimeSeries::new(0.0, p.rabi_period() / 3.0, 2);
        assert!(matches!(
            poincare_section(&s, &p),
            Err(AnalysisError::StrobeTooFine(_))
        ));
    }

    #[test]
    fn phase_plane_keeps_order() {
        let mut s = TimeSeries::new(0.0, 1.0, 3);
        assert!(phase_plane(&s).is_empty());
        s.push(&[1.0, 2.0, 3.0]);
        s.push(&[4.0, 5.0, 6.0]);
        assert_eq!(phase_plane(&s), vec![(1.0, 2.0), (4.0, 5.0)]);
    }
}
