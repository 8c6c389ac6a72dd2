//! Run configuration: the `key=value` config grammar, defaults and
//! validation.
//!
//! ```text
//! # fig2-like run
//! N=2.5
//! g=1
//! delta0=1
//! modulation=mono
//! omega=sqrt(17)
//! n=16384
//! ```
//!
//! Recognized keys: `N`, `g`, `delta0`, `modulation` (`none|mono|bi`),
//! `omega`, `omega1`, `omega2`, `formulation` (`third-order|regular|oracle`),
//! `solver` (`rosenbrock|irk`), `atol`, `rtol`, `n`, `dt`, `out`. Keys are
//! case-sensitive (`N` is the excitation number, `n` the sample count).
//! Numeric values may be written as `sqrt(x)`. Later keys override earlier
//! ones and `#` starts a comment.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use thiserror::Error;

use crate::model::{DetuningProfile, SystemParams};
use crate::oracle::photon_number;
use crate::solvers::{Method, SolverConfig};

pub const DEFAULT_SAMPLES: usize = 1 << 14;
/// Minimum samples per Rabi period on the default grid.
pub const MIN_SAMPLES_PER_PERIOD: usize = 64;
/// Runs shorter than this many Rabi periods trigger a warning.
pub const MIN_RABI_PERIODS: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Validation(String),
}

/// Which dynamics produce the time series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunFormulation {
    ThirdOrder,
    Regular,
    Oracle,
}

impl RunFormulation {
    pub fn name(self) -> &'static str {
        match self {
            RunFormulation::ThirdOrder => "third-order",
            RunFormulation::Regular => "regular",
            RunFormulation::Oracle => "oracle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "third-order" => Some(RunFormulation::ThirdOrder),
            "regular" => Some(RunFormulation::Regular),
            "oracle" => Some(RunFormulation::Oracle),
            _ => None,
        }
    }
}

pub fn method_name(method: Method) -> &'static str {
    match method {
        Method::Rosenbrock => "rosenbrock",
        Method::ImplicitRk => "irk",
    }
}

pub fn parse_method(s: &str) -> Option<Method> {
    match s {
        "rosenbrock" => Some(Method::Rosenbrock),
        "irk" => Some(Method::ImplicitRk),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub label: String,
    pub params: SystemParams,
    pub profile: DetuningProfile,
    pub formulation: RunFormulation,
    pub solver: SolverConfig,
    /// Number of samples; a power of two.
    pub n: usize,
    /// Sample interval in scaled time.
    pub dt: f64,
    pub out: PathBuf,
    pub validate: bool,
    pub svg: bool,
}

/// Command-line adjustments applied on top of a preset or config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub formulation: Option<RunFormulation>,
    pub solver: Option<Method>,
    pub n: Option<usize>,
    pub dt: Option<f64>,
    pub validate: bool,
    pub svg: bool,
}

/// Sample interval giving at least [`MIN_SAMPLES_PER_PERIOD`] samples per
/// Rabi period, an integer number of samples per period, and a Nyquist
/// frequency above `4·max(Ω, ω…)/2π`.
pub fn default_dt(params: &SystemParams, profile: &DetuningProfile) -> f64 {
    let period = params.rabi_period();
    let fastest = profile
        .frequencies()
        .into_iter()
        .fold(params.rabi_frequency(), f64::max);
    let limit = PI / (4.0 * fastest);
    let mut per_period = MIN_SAMPLES_PER_PERIOD;
    while period / per_period as f64 >= limit {
        per_period *= 2;
    }
    period / per_period as f64
}

impl RunSpec {
    /// A spec with default numerics for the given physics.
    pub fn new(label: &str, params: SystemParams, profile: DetuningProfile) -> Self {
        Self {
            label: label.to_string(),
            params,
            profile,
            formulation: RunFormulation::Regular,
            solver: SolverConfig::default(),
            n: DEFAULT_SAMPLES,
            dt: default_dt(&params, &profile),
            out: PathBuf::from("out").join(label),
            validate: false,
            svg: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |e: &dyn std::fmt::Display| ConfigError::Validation(e.to_string());
        self.params.validate().map_err(|e| invalid(&e))?;
        self.profile.validate().map_err(|e| invalid(&e))?;
        self.solver.validate().map_err(|e| invalid(&e))?;
        if self.n < 2 || !self.n.is_power_of_two() {
            return Err(ConfigError::Validation(format!(
                "n = {} is not a power of two >= 2",
                self.n
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(ConfigError::Validation(format!("dt = {} must be positive", self.dt)));
        }
        if self.params.sz0 != 0.5 {
            return Err(ConfigError::Validation(
                "only an initially excited atom is supported".into(),
            ));
        }
        if self.formulation == RunFormulation::Oracle || self.validate {
            photon_number(&self.params).map_err(|e| invalid(&e))?;
        }
        Ok(())
    }

    /// Total sampled span `n·dt`.
    pub fn span(&self) -> f64 {
        self.n as f64 * self.dt
    }

    /// Non-fatal issues with the sampling plan.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        let periods = self.span() / self.params.rabi_period();
        if periods < MIN_RABI_PERIODS {
            w.push(format!(
                "sampled span covers only {periods:.1} Rabi periods (< {MIN_RABI_PERIODS})"
            ));
        }
        w
    }

    pub fn apply(&mut self, overrides: &Overrides) -> Result<(), ConfigError> {
        if let Some(out) = &overrides.out {
            self.out = out.clone();
        }
        if let Some(f) = overrides.formulation {
            self.formulation = f;
        }
        if let Some(m) = overrides.solver {
            self.solver.method = m;
        }
        if let Some(n) = overrides.n {
            self.n = n;
        }
        if let Some(dt) = overrides.dt {
            self.dt = dt;
        }
        self.validate |= overrides.validate;
        self.svg |= overrides.svg;
        self.validate()
    }
}

fn parse_number(raw: &str) -> Option<f64> {
    let raw = raw.trim();
    if let Some(inner) = raw.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let v: f64 = inner.trim().parse().ok()?;
        return (v >= 0.0).then(|| v.sqrt());
    }
    raw.parse().ok()
}

const KEYS: [&str; 14] = [
    "N",
    "g",
    "delta0",
    "modulation",
    "omega",
    "omega1",
    "omega2",
    "formulation",
    "solver",
    "atol",
    "rtol",
    "n",
    "dt",
    "out",
];

/// Parses and validates a config file.
pub fn parse_config(text: &str) -> Result<RunSpec, ConfigError> {
    // key -> (value, line)
    let mut entries: HashMap<&str, (&str, usize)> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
            line: line_no,
            message: format!("expected key=value, got '{line}'"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if !KEYS.contains(&key) {
            return Err(ConfigError::Parse {
                line: line_no,
                message: format!("unknown key '{key}'"),
            });
        }
        if value.is_empty() {
            return Err(ConfigError::Parse {
                line: line_no,
                message: format!("missing value for '{key}'"),
            });
        }
        entries.insert(key, (value, line_no));
    }

    let number = |key: &str| -> Result<Option<f64>, ConfigError> {
        match entries.get(key) {
            None => Ok(None),
            Some(&(v, line)) => parse_number(v).map(Some).ok_or(ConfigError::Parse {
                line,
                message: format!("'{v}' is not a number for key '{key}'"),
            }),
        }
    };
    let required = |key: &str, why: &str| -> Result<f64, ConfigError> {
        number(key)?.ok_or_else(|| ConfigError::Validation(format!("{key} is required{why}")))
    };

    let capital_n = required("N", "")?;
    let g = number("g")?.unwrap_or(1.0);
    let delta0 = number("delta0")?.unwrap_or(0.0);
    let params = SystemParams {
        capital_n,
        g,
        delta0,
        sz0: 0.5,
    };

    let profile = match entries.get("modulation").copied() {
        None | Some(("none", _)) => DetuningProfile::Constant,
        Some(("mono", _)) => DetuningProfile::Monochromatic {
            omega: required("omega", " for modulation=mono")?,
        },
        Some(("bi", _)) => DetuningProfile::Bichromatic {
            omega1: required("omega1", " for modulation=bi")?,
            omega2: required("omega2", " for modulation=bi")?,
        },
        Some((other, line)) => {
            return Err(ConfigError::Parse {
                line,
                message: format!("modulation must be none, mono or bi, got '{other}'"),
            })
        }
    };

    params
        .validate()
        .map_err(|e| ConfigError::Validation(e.to_string()))?;
    profile
        .validate()
        .map_err(|e| ConfigError::Validation(e.to_string()))?;
    let mut spec = RunSpec::new("custom", params, profile);

    if let Some(&(v, line)) = entries.get("formulation") {
        spec.formulation = RunFormulation::parse(v).ok_or(ConfigError::Parse {
            line,
            message: format!("formulation must be third-order, regular or oracle, got '{v}'"),
        })?;
    }
    if let Some(&(v, line)) = entries.get("solver") {
        spec.solver.method = parse_method(v).ok_or(ConfigError::Parse {
            line,
            message: format!("solver must be rosenbrock or irk, got '{v}'"),
        })?;
    }
    if let Some(atol) = number("atol")? {
        spec.solver.atol = atol;
    }
    if let Some(rtol) = number("rtol")? {
        spec.solver.rtol = rtol;
    }
    if let Some(&(v, line)) = entries.get("n") {
        spec.n = v.parse().map_err(|_| ConfigError::Parse {
            line,
            message: format!("n must be a positive integer, got '{v}'"),
        })?;
    }
    if let Some(dt) = number("dt")? {
        spec.dt = dt;
    }
    if let Some(&(v, _)) = entries.get("out") {
        spec.out = PathBuf::from(v);
    }
    spec.validate()?;
    Ok(spec)
}
