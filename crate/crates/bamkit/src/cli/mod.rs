//! Command-line front end. A scenario file names sets and operators and asks
//! for one task; each run writes `report.json` (and `trace.csv` for iteration
//! tasks) into an output directory and prints a one-line summary.
//!
//! Exit codes: 0 all checks passed, 1 a check failed and the report carries a
//! witness, 2 the command line or the scenario file could not be parsed, 3 the
//! file parsed but described something invalid.

pub mod config;
pub mod report;
pub mod repro;
pub mod tasks;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use report::Json;

// ── errors ──────────────────────────────────────────────────────────────────

/// Front-end failure, split by exit code: `Parse` means the input could not
/// be read at all (exit 2), `Validation` means it was read but rejected
/// (exit 3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Parse(String),
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Parse(_) => 2,
            Self::Validation(_) => 3,
        }
    }

    pub fn prepend(self, prefix: &str) -> Self {
        match self {
            Self::Parse(m) => Self::Parse(format!("{prefix}{m}")),
            Self::Validation(m) => Self::Validation(format!("{prefix}{m}")),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parse(m) | Self::Validation(m) => write!(f, "{m}"),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        Self::Validation(e.to_string())
    }
}

// ── argument surface ─────────────────────────────────────────────────────────

#[derive(Debug, Parser)]
#[command(
    name = "bamkit",
    version,
    about = "Projection, contraction-rate, and circumcenter calculations from scenario files"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Project a point onto a named set.
    Project(TaskArgs),
    /// Friedrichs angle data for two subspaces.
    Angle(TaskArgs),
    /// Circumcenter of a list of points.
    Circumcenter(TaskArgs),
    /// Estimate or refute a contraction factor for an operator.
    Certify(TaskArgs),
    /// Run an operator iteration and score it against its certificate.
    Iterate(TaskArgs),
    /// Closed-form contraction rate for a reflection suite.
    Rate(TaskArgs),
    /// Chain projector-style certificates through a composition.
    Compose(TaskArgs),
    /// Blend certificates through a weighted product embedding.
    Combine(TaskArgs),
    /// Re-run a packaged example and check its expected numbers.
    Repro(ReproArgs),
}

impl Command {
    fn task_name(&self) -> Option<&'static str> {
        match self {
            Self::Project(_) => Some("project"),
            Self::Angle(_) => Some("angle"),
            Self::Circumcenter(_) => Some("circumcenter"),
            Self::Certify(_) => Some("certify"),
            Self::Iterate(_) => Some("iterate"),
            Self::Rate(_) => Some("rate"),
            Self::Compose(_) => Some("compose"),
            Self::Combine(_) => Some("combine"),
            Self::Repro(_) => None,
        }
    }

    fn task_args(&self) -> Option<&TaskArgs> {
        match self {
            Self::Project(a)
            | Self::Angle(a)
            | Self::Circumcenter(a)
            | Self::Certify(a)
            | Self::Iterate(a)
            | Self::Rate(a)
            | Self::Compose(a)
            | Self::Combine(a) => Some(a),
            Self::Repro(_) => None,
        }
    }
}

#[derive(Debug, Args)]
pub struct TaskArgs {
    /// Scenario file (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Override the sampling seed from the scenario file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for report artifacts; defaults to the scenario's
    /// `output` entry, then the current directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    /// Example id; leave out to list what is available.
    pub id: Option<String>,
    /// Run every packaged example.
    #[arg(long)]
    pub all: bool,
    /// Directory for per-example report files.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

// ── dispatch ────────────────────────────────────────────────────────────────

/// Parses the process arguments and runs the selected command.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(&cli))
}

/// Runs a parsed command, printing human-readable output, and returns the
/// process exit code.
pub fn run(cli: &Cli) -> u8 {
    let result = match &cli.command {
        Command::Repro(args) => repro::run_command(args),
        other => {
            let name = other.task_name().expect("task commands carry a name");
            let args = other.task_args().expect("task commands carry arguments");
            run_task(name, args)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn unix_now() -> i64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs() as i64)
        .unwrap_or(0)
}

fn write_artifact(dir: &PathBuf, file: &str, text: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(file);
    std::fs::write(&path, text)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn run_task(expected: &str, args: &TaskArgs) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", args.config.display())))?;
    let cfg: config::ScenarioConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", args.config.display())))?;
    if cfg.task.name() != expected {
        return Err(CliError::Validation(format!(
            "the scenario describes task \"{}\" but the command is \"{expected}\"",
            cfg.task.name()
        )));
    }
    let scenario = config::resolve(&cfg)?;
    let outcome = tasks::run_scenario(&cfg, &scenario, args.seed)?;

    let out_dir = args
        .out
        .clone()
        .or_else(|| cfg.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Validation(format!("cannot create {}: {e}", out_dir.display())))?;

    let envelope = Json::obj(vec![
        ("version", Json::Int(1)),
        ("task", Json::str(expected)),
        ("timestamp_unix", Json::Int(unix_now())),
        ("ambient_dim", Json::Int(scenario.ambient_dim as i64)),
        ("passed", Json::Bool(outcome.passed)),
        ("result", outcome.report),
    ]);
    let report_path = write_artifact(&out_dir, "report.json", &envelope.to_pretty())?;
    if let Some(csv) = &outcome.trace {
        write_artifact(&out_dir, "trace.csv", csv)?;
    }

    println!("{expected}: {}", outcome.summary);
    println!("report: {}", report_path.display());
    Ok(u8::from(!outcome.passed))
}
