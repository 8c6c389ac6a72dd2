use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use modqed::cli::config::{parse_method, RunFormulation};
use modqed::cli::presets::describe;
use modqed::cli::{parse_config, preset, run, Overrides, RunError, RunSpec, PRESET_NAMES};

#[derive(Debug, Parser)]
#[command(name = "modqed", version, about = "Two-level atom in a frequency-modulated cavity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a preset or a config file and write CSV diagnostics.
    Run(RunArgs),
    /// List the available presets.
    Presets,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Preset name (fig1..fig6, bi-overtone).
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// Config file in key=value format.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// regular, third-order or oracle.
    #[arg(long, value_parser = parse_formulation)]
    formulation: Option<RunFormulation>,
    /// rosenbrock or irk.
    #[arg(long, value_parser = parse_solver)]
    solver: Option<modqed::Method>,
    /// Number of samples (power of two).
    #[arg(long)]
    n: Option<usize>,
    /// Sample interval in scaled time gt.
    #[arg(long)]
    dt: Option<f64>,
    /// Compare against the two-level Schrödinger oracle on the same grid.
    #[arg(long)]
    validate: bool,
    /// Also render SVG plots.
    #[arg(long)]
    svg: bool,
}

fn parse_formulation(s: &str) -> Result<RunFormulation, String> {
    RunFormulation::parse(s).ok_or_else(|| format!("expected regular, third-order or oracle, got '{s}'"))
}

fn parse_solver(s: &str) -> Result<modqed::Method, String> {
    parse_method(s).ok_or_else(|| format!("expected rosenbrock or irk, got '{s}'"))
}

const EXIT_VALIDATION: u8 = 3;

fn resolve(args: &RunArgs) -> Result<RunSpec, RunError> {
    let mut spec = match (&args.preset, &args.config) {
        (Some(name), _) => preset(name).ok_or_else(|| RunError::UnknownPreset(name.clone()))?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let mut spec = parse_config(&text)?;
            if let Some(stem) = path.file_stem() {
                spec.label = stem.to_string_lossy().into_owned();
            }
            spec
        }
        (None, None) => unreachable!("clap requires --preset or --config"),
    };
    spec.apply(&Overrides {
        out: args.out.clone(),
        formulation: args.formulation,
        solver: args.solver,
        n: args.n,
        dt: args.dt,
        validate: args.validate,
        svg: args.svg,
    })?;
    Ok(spec)
}

fn run_command(args: &RunArgs) -> Result<u8, RunError> {
    let spec = resolve(args)?;
    for w in spec.warnings() {
        eprintln!("warning: {w}");
    }
    let report = run(&spec)?;
    print!("{}", report.to_text());
    eprintln!("wrote {}", spec.out.display());
    if report.validation_failed() {
        eprintln!(
            "error: oracle deviation {:e} exceeds {:e}",
            report.max_oracle_dev.unwrap_or(f64::NAN),
            modqed::cli::VALIDATION_GATE
        );
        return Ok(EXIT_VALIDATION);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Presets => {
            for name in PRESET_NAMES {
                println!("{name:12} {}", describe(name).unwrap_or(""));
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => match run_command(&args) {
            Ok(code) => ExitCode::from(code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code())
            }
        },
    }
}
