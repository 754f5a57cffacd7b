//! Command-line front end: solve single scenario files, run figure-style
//! Monte-Carlo sweeps to CSV/SVG, validate scenario files.
//!
//! Exit codes: 0 success, 1 usage/input error, 2 infeasible instance.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use secrecy_opt::experiments::{
    render_csv, render_svg, run_sweep, solve_scheme, Objective, Scheme, SweepSpec,
    DEFAULT_SIGMA2_DBM,
};
use secrecy_opt::model::Scenario;
use secrecy_opt::Error as SolverError;

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "secrecy-opt",
    version,
    about = "Optimal relay weights and source power for physical-layer security \
             cooperation schemes (decode-and-forward and cooperative jamming)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario file and print the solution JSON on stdout.
    Solve(SolveArgs),
    /// Run a Monte-Carlo sweep config and write CSV (+ optional SVG) outputs.
    Sweep(SweepArgs),
    /// Validate a scenario file against the schema.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Scheme: df, cj, df-multi, df-sub, cj-sub, direct.
    #[arg(long)]
    scheme: String,
    /// Objective: max-rate or min-power.
    #[arg(long)]
    objective: String,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep config JSON file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Override the configured trial count.
    #[arg(long)]
    trials: Option<usize>,
    /// Override the configured channel seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write an SVG line plot.
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version are successful exits; anything else is a
            // usage error (exit 1, usage text on stderr).
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    init_thread_pool();

    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Validate(args) => cmd_validate(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if matches!(e, SolverError::Infeasible(_)) {
                // Machine-readable reason on stdout.
                println!(
                    "{}",
                    serde_json::json!({ "error": "infeasible", "reason": e.to_string() })
                );
                ExitCode::from(EXIT_INFEASIBLE)
            } else {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_INPUT)
            }
        }
    }
}

/// `SECRECY_OPT_THREADS` caps the rayon pool used for sweep trials.
fn init_thread_pool() {
    if let Ok(v) = std::env::var("SECRECY_OPT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<u8, SolverError> {
    let scheme = Scheme::parse(&args.scheme)?;
    let objective = Objective::parse(&args.objective)?;
    let text = fs::read_to_string(&args.scenario)
        .map_err(|e| SolverError::schema("scenario", format!("cannot read file: {e}")))?;
    let scenario: Scenario =
        serde_json::from_str(&text).map_err(|e| SolverError::schema("scenario", e.to_string()))?;
    let solution = solve_scheme(&scenario, scheme, objective)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&solution).expect("solution serializes")
    );
    Ok(EXIT_OK)
}

fn cmd_validate(args: &ValidateArgs) -> Result<u8, SolverError> {
    let text = fs::read_to_string(&args.scenario)
        .map_err(|e| SolverError::schema("scenario", format!("cannot read file: {e}")))?;
    let scenario: Scenario =
        serde_json::from_str(&text).map_err(|e| SolverError::schema("scenario", e.to_string()))?;
    println!(
        "{}",
        serde_json::json!({
            "valid": true,
            "n_relays": scenario.n_relays(),
            "n_eaves": scenario.n_eaves(),
            "p0_min": scenario.p0_min,
        })
    );
    Ok(EXIT_OK)
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8, SolverError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| SolverError::schema("config", format!("cannot read file: {e}")))?;
    let mut spec: SweepSpec =
        serde_json::from_str(&text).map_err(|e| SolverError::schema("config", e.to_string()))?;
    // Hash the canonical (sorted-key) form of the file as given, before
    // overrides; overrides are recorded separately in the manifest.
    let config_hash = canonical_hash(&text)?;
    if let Some(trials) = args.trials {
        spec.trials = trials;
    }
    if let Some(seed) = args.seed {
        spec.channel.seed = seed;
    }
    spec.validate()?;

    fs::create_dir_all(&args.out)
        .map_err(|e| SolverError::schema("out", format!("cannot create directory: {e}")))?;

    let result = run_sweep(&spec)?;
    let csv_name = format!("{}.csv", spec.name);
    let csv_path = args.out.join(&csv_name);
    write_atomic(&csv_path, render_csv(&result).as_bytes())?;
    let mut outputs = vec![csv_name.clone()];

    if args.svg {
        let svg_name = format!("{}.svg", spec.name);
        write_atomic(
            &args.out.join(&svg_name),
            render_svg(&result, &spec.name).as_bytes(),
        )?;
        outputs.push(svg_name);
    }

    let mut assumptions = Vec::new();
    if spec.sigma2_dbm.is_none() {
        assumptions.push(format!(
            "sigma2 defaulted to {DEFAULT_SIGMA2_DBM} dBm (noise power unspecified in config)"
        ));
    }
    if spec.p0_min.is_none() {
        assumptions.push(
            "p0_min derived per scenario from the 2 bits/s/Hz source→relay decode rule".to_string(),
        );
    }
    let manifest = serde_json::json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "config_hash": config_hash,
        "seed": spec.channel.seed,
        "trials": spec.trials,
        "timestamp_unix": SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        "outputs": outputs,
        "assumptions": assumptions,
    });
    let manifest_name = format!("{}.manifest.json", spec.name);
    write_atomic(
        &args.out.join(&manifest_name),
        serde_json::to_string_pretty(&manifest)
            .expect("manifest serializes")
            .as_bytes(),
    )?;

    Ok(EXIT_OK)
}

/// SHA-256 of the JSON value re-serialized with sorted keys, so the hash is
/// stable under key reordering in the config file.
fn canonical_hash(text: &str) -> Result<String, SolverError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| SolverError::schema("config", e.to_string()))?;
    // serde_json maps are BTree-backed: serialization is already key-sorted.
    let canonical = serde_json::to_string(&value).expect("canonical form serializes");
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    Ok(format!("{:x}", hasher.finalize()))
}

/// Writes via a temp file in the target directory followed by a rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), SolverError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name()
            .map(|s| s.to_string_lossy())
            .unwrap_or_default()
    ));
    fs::write(&tmp, bytes)
        .map_err(|e| SolverError::schema("out", format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| SolverError::schema("out", format!("cannot rename into place: {e}")))?;
    Ok(())
}
