use super::{step, OdeSystem, SolverConfig, SolverError, TimeSeries};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

impl StepStats {
    pub fn merge(&mut self, other: StepStats) {
        self.accepted += other.accepted;
        self.rejected += other.rejected;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integration {
    pub t: f64,
    pub y: Vec<f64>,
    pub stats: StepStats,
}

/// Adaptive integration from `t0` to exactly `t1`.
pub fn integrate<S: OdeSystem + ?Sized>(
    system: &S,
    y0: &[f64],
    t0: f64,
    t1: f64,
    config: &SolverConfig,
) -> Result<Integration, SolverError> {
    config.validate()?;
    if y0.len() != system.dimension() {
        return Err(SolverError::InvalidInterval(format!(
            "initial state has {} components, system expects {}",
            y0.len(),
            system.dimension()
        )));
    }
    if !(t0.is_finite() && t1.is_finite()) || t1 < t0 {
        return Err(SolverError::InvalidInterval(format!(
            "need finite t1 >= t0, got [{t0}, {t1}]"
        )));
    }

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut stats = StepStats::default();
    let mut h = config.h_init.min(config.h_max);
    let mut last_rejected = false;

    while t < t1 {
        if stats.accepted + stats.rejected >= config.max_steps {
            return Err(SolverError::MaxStepsExceeded { t });
        }
        let remaining = t1 - t;
        let last = remaining <= h * (1.0 + 1e-10);
        if last {
            h = remaining;
        } else if h < config.h_min || t + h == t {
            return Err(SolverError::StepUnderflow { t, h });
        }

        match step(system, t, &y, h, config) {
            Ok(res) if res.error.is_finite() && res.error <= 1.0 => {
                t = if last { t1 } else { t + h };
                y = res.y;
                stats.accepted += 1;
                let grow = if last_rejected { h } else { res.h_suggest };
                h = grow.min(res.h_suggest).min(config.h_max);
                last_rejected = false;
            }
            Ok(res) => {
                stats.rejected += 1;
                last_rejected = true;
                h = if res.error.is_finite() {
                    res.h_suggest
                } else {
                    0.2 * h
                };
            }
            Err(SolverError::NewtonDivergence { .. }) => {
                stats.rejected += 1;
                last_rejected = true;
                h *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Integration { t, y, stats })
}

/// Takes `steps` steps of constant size `h` with no error control. Meant
/// for convergence studies.
pub fn integrate_fixed<S: OdeSystem + ?Sized>(
    system: &S,
    y0: &[f64],
    t0: f64,
    h: f64,
    steps: usize,
    config: &SolverConfig,
) -> Result<Vec<f64>, SolverError> {
    let mut y = y0.to_vec();
    for k in 0..steps {
        y = step(system, t0 + k as f64 * h, &y, h, config)?.y;
    }
    Ok(y)
}

/// Samples the trajectory at `t0 + k·dt`, `k = 0..n`, integrating each
/// interval separately with a freshly started controller.
pub fn sample_uniform<S: OdeSystem + ?Sized>(
    system: &S,
    y0: &[f64],
    t0: f64,
    dt: f64,
    n: usize,
    config: &SolverConfig,
) -> Result<(TimeSeries, StepStats), SolverError> {
    if n < 2 {
        return Err(SolverError::InvalidInterval(format!(
            "need at least two samples, got {n}"
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SolverError::InvalidInterval(format!(
            "sample interval must be positive, got {dt}"
        )));
    }
    let mut series = TimeSeries::new(t0, dt, system.dimension());
    let mut stats = StepStats::default();
    let mut y = y0.to_vec();
    series.push(&y);
    for k in 1..n {
        let seg = integrate(system, &y, series.time(k - 1), series.time(k), config)?;
        stats.merge(seg.stats);
        y = seg.y;
        series.push(&y);
    }
    Ok((series, stats))
}
