//! Executes a [`RunSpec`]: integrate, analyse, write artifacts.

use std::fmt::Write as _;
use std::fs;
use std::io;

use thiserror::Error;

use super::config::{method_name, ConfigError, Overrides, RunFormulation, RunSpec};
use super::output::{emit_points, emit_spectrum, emit_timeseries, format_number};
use super::presets::preset;
use super::svg::{Plot, PlotKind};
use crate::analysis::{
    dispersion, dominant_peaks, periodogram, phase_plane, poincare_section, AnalysisError, Peak,
    PoincareSet, Spectrum,
};
use crate::model::{initial_state, Formulation, RegularSystem, ThirdOrderSystem};
use crate::oracle::{compare_series, evolve, OracleError};
use crate::solvers::{sample_uniform, SeriesMeta, SolverError, StepStats, TimeSeries};

/// Largest tolerated oracle deviation for `--validate`.
pub const VALIDATION_GATE: f64 = 1e-5;
/// Number of peaks listed in the summary.
pub const SUMMARY_PEAKS: usize = 5;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("solver failure: {0}")]
    Solver(#[from] SolverError),
    #[error("oracle failure: {0}")]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl RunError {
    /// Process exit code: 1 for usage and I/O problems, 2 for solver failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Solver(_) | RunError::Oracle(OracleError::Solver(_)) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryReport {
    pub label: String,
    pub formulation: RunFormulation,
    pub rabi_frequency: f64,
    pub n: usize,
    pub dt: f64,
    /// Strongest spectral peaks, at most [`SUMMARY_PEAKS`].
    pub peaks: Vec<Peak>,
    pub poincare_points: usize,
    pub poincare_dispersion: f64,
    pub max_oracle_dev: Option<f64>,
    pub stats: StepStats,
}

impl SummaryReport {
    pub fn dominant_frequency(&self) -> Option<f64> {
        self.peaks.first().map(|p| p.freq)
    }

    /// True when validation was requested and the deviation exceeds the gate.
    pub fn validation_failed(&self) -> bool {
        self.max_oracle_dev.is_some_and(|d| d.is_nan() || d > VALIDATION_GATE)
    }

    pub fn is_finite(&self) -> bool {
        self.rabi_frequency.is_finite()
            && self.poincare_dispersion.is_finite()
            && self.peaks.iter().all(|p| p.freq.is_finite() && p.power.is_finite())
            && self.max_oracle_dev.is_none_or(f64::is_finite)
    }

    /// `key=value` lines, as written to `summary.txt`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let f = format_number;
        let _ = writeln!(s, "label={}", self.label);
        let _ = writeln!(s, "formulation={}", self.formulation.name());
        let _ = writeln!(s, "rabi_frequency={}", f(self.rabi_frequency));
        let _ = writeln!(s, "n={}", self.n);
        let _ = writeln!(s, "dt={}", f(self.dt));
        if let Some(p) = self.peaks.first() {
            let _ = writeln!(s, "dominant_frequency={}", f(p.freq));
            let _ = writeln!(s, "dominant_angular_frequency={}", f(p.angular_frequency()));
        }
        for (i, p) in self.peaks.iter().enumerate() {
            let _ = writeln!(s, "peak{}_f={}", i + 1, f(p.freq));
            let _ = writeln!(s, "peak{}_power={}", i + 1, f(p.power));
        }
        let _ = writeln!(s, "poincare_points={}", self.poincare_points);
        let _ = writeln!(s, "poincare_dispersion={}", f(self.poincare_dispersion));
        let _ = writeln!(s, "steps_accepted={}", self.stats.accepted);
        let _ = writeln!(s, "steps_rejected={}", self.stats.rejected);
        if let Some(d) = self.max_oracle_dev {
            let _ = writeln!(s, "max_oracle_dev={}", f(d));
        }
        s
    }
}

/// Everything a run produces, before anything touches the filesystem.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    /// Full state samples; components 0 and 1 are `⟨S_z⟩` and `⟨Ṡ_z⟩`.
    pub series: TimeSeries,
    pub spectrum: Spectrum,
    pub poincare: PoincareSet,
    pub report: SummaryReport,
}

/// Integrates the configured formulation on the spec's grid.
pub fn simulate(spec: &RunSpec) -> Result<(TimeSeries, StepStats), RunError> {
    let meta = SeriesMeta {
        params: spec.params,
        profile: spec.profile,
    };
    let (series, stats) = match spec.formulation {
        RunFormulation::Regular => {
            let sys = RegularSystem::new(spec.params, spec.profile);
            let y0 = initial_state(&spec.params, Formulation::Regular).map_err(SolverError::from)?;
            sample_uniform(&sys, &y0, 0.0, spec.dt, spec.n, &spec.solver)?
        }
        RunFormulation::ThirdOrder => {
            let sys = ThirdOrderSystem::new(spec.params, spec.profile);
            let y0 =
                initial_state(&spec.params, Formulation::ThirdOrder).map_err(SolverError::from)?;
            sample_uniform(&sys, &y0, 0.0, spec.dt, spec.n, &spec.solver)?
        }
        RunFormulation::Oracle => {
            let run = evolve(&spec.params, &spec.profile, 0.0, spec.dt, spec.n)?;
            (run.series, run.stats)
        }
    };
    Ok((series.with_meta(meta), stats))
}

/// Simulates and analyses without writing files.
pub fn execute(spec: &RunSpec) -> Result<RunOutput, RunError> {
    spec.validate()?;
    let (series, stats) = simulate(spec)?;
    let spectrum = periodogram(&series)?;
    let peaks = dominant_peaks(&spectrum, SUMMARY_PEAKS);
    let poincare = poincare_section(&series, &spec.params)?;
    let max_oracle_dev = if spec.validate {
        let reference = evolve(&spec.params, &spec.profile, 0.0, spec.dt, spec.n)?;
        Some(compare_series(&series, &reference.series)?)
    } else {
        None
    };
    let report = SummaryReport {
        label: spec.label.clone(),
        formulation: spec.formulation,
        rabi_frequency: spec.params.rabi_frequency(),
        n: spec.n,
        dt: spec.dt,
        peaks,
        poincare_points: poincare.len(),
        poincare_dispersion: dispersion(&poincare.points),
        max_oracle_dev,
        stats,
    };
    Ok(RunOutput {
        series,
        spectrum,
        poincare,
        report,
    })
}

/// Writes the CSV files, `summary.txt` and, when requested, SVG plots.
pub fn write_artifacts(spec: &RunSpec, output: &RunOutput) -> io::Result<()> {
    let dir = &spec.out;
    fs::create_dir_all(dir)?;
    let phase = phase_plane(&output.series);
    emit_timeseries(&output.series, &dir.join("timeseries.csv"))?;
    emit_points(&phase, &dir.join("phase.csv"))?;
    emit_spectrum(&output.spectrum, &dir.join("psd.csv"))?;
    emit_points(&output.poincare.points, &dir.join("poincare.csv"))?;
    fs::write(dir.join("summary.txt"), output.report.to_text())?;

    if spec.svg {
        let title = |what: &str| format!("{} ({}, {})", what, spec.label, method_name(spec.solver.method));
        let series = &output.series;
        Plot {
            title: &title("time series"),
            x_label: "gt",
            y_label: "<S_z>",
            kind: PlotKind::Line,
            points: series.times().zip(series.sz()).collect(),
        }
        .write(&dir.join("timeseries.svg"))?;
        Plot {
            title: &title("phase plane"),
            x_label: "<S_z>",
            y_label: "d<S_z>/dt",
            kind: PlotKind::Line,
            points: phase,
        }
        .write(&dir.join("phase.svg"))?;
        Plot {
            title: &title("power spectral density"),
            x_label: "f (g/2pi)",
            y_label: "P(f)",
            kind: PlotKind::Line,
            points: output
                .spectrum
                .freqs
                .iter()
                .copied()
                .zip(output.spectrum.power.iter().copied())
                .collect(),
        }
        .write(&dir.join("psd.svg"))?;
        Plot {
            title: &title("Poincare section"),
            x_label: "<S_z>",
            y_label: "d<S_z>/dt",
            kind: PlotKind::Scatter,
            points: output.poincare.points.clone(),
        }
        .write(&dir.join("poincare.svg"))?;
    }
    Ok(())
}

/// Executes a spec and writes its artifacts.
pub fn run(spec: &RunSpec) -> Result<SummaryReport, RunError> {
    let output = execute(spec)?;
    write_artifacts(spec, &output)?;
    Ok(output.report)
}

/// Resolves a preset by name, applies overrides and runs it.
pub fn run_preset(name: &str, overrides: &Overrides) -> Result<SummaryReport, RunError> {
    let mut spec = preset(name).ok_or_else(|| RunError::UnknownPreset(name.to_string()))?;
    spec.apply(overrides)?;
    run(&spec)
}
