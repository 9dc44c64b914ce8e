//! Command-line driver: exact sampling, numerical simulation, verification
//! and summary reports for slow-light soliton scenarios.

mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use slowlight::scenario::{
    self, apply_override, emit_outputs, emit_summary, sample, SampleSource, Scenario,
};
use slowlight::Error;

#[derive(Parser)]
#[command(
    name = "slowlight",
    about = "Slow-light soliton arrest: exact solution, simulation and verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunOpts {
    /// Scenario document (JSON); defaults apply when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dotted-path override, e.g. control.alpha=2 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Coordinate frame for emitted files.
    #[arg(long, value_parser = ["retarded", "lab"])]
    frame: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the closed-form solution and emit data grids.
    Exact(RunOpts),
    /// Run the Maxwell-Bloch integrator from analytic boundary data.
    Simulate(RunOpts),
    /// Run the verification checks and emit a JSON report.
    Verify(RunOpts),
    /// Emit only the summary report (figures of merit).
    Summary(RunOpts),
}

const EXIT_VERIFICATION: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;

type Runner = fn(&Scenario, &RunOpts) -> Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (opts, run): (&RunOpts, Runner) = match &cli.command {
        Command::Exact(o) => (o, run_exact),
        Command::Simulate(o) => (o, run_simulate),
        Command::Verify(o) => (o, run_verify),
        Command::Summary(o) => (o, run_summary),
    };
    let scn = match load_scenario(opts) {
        Ok(s) => s,
        Err(f) => return f.report(),
    };
    match run(&scn, opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}

/// A failure routed to one of the documented exit codes.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn report(self) -> ExitCode {
        eprintln!("error: {}", self.message);
        ExitCode::from(self.code)
    }

    fn verification(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VERIFICATION,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io { .. } => EXIT_IO,
            Error::NormDrift { .. } => EXIT_VERIFICATION,
            _ => EXIT_CONFIG,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn load_scenario(opts: &RunOpts) -> Result<Scenario, Failure> {
    let text = match &opts.scenario {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure {
            code: EXIT_CONFIG,
            message: format!("cannot read scenario {}: {e}", path.display()),
        })?,
        None => "{}".to_string(),
    };
    let mut doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure {
        code: EXIT_CONFIG,
        message: format!("scenario is not valid JSON: {e}"),
    })?;
    for assignment in &opts.set {
        apply_override(&mut doc, assignment)?;
    }
    if let Some(frame) = &opts.frame {
        apply_override(&mut doc, &format!("frame={frame}"))?;
    }
    Ok(scenario::scenario_from_value(&doc)?)
}

fn out_dir(opts: &RunOpts) -> Result<&Path, Failure> {
    opts.out.as_deref().ok_or_else(|| Failure {
        code: EXIT_CONFIG,
        message: "--out <dir> is required for this command".into(),
    })
}

/// Emits through a temporary sibling directory and moves files into place
/// only on success; the manifest lands last, so a failed run never leaves
/// a fresh manifest behind.
fn emit_atomically(
    dest: &Path,
    write: impl FnOnce(&Path) -> Result<(), Failure>,
) -> Result<(), Failure> {
    fs::create_dir_all(dest).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("cannot create {}: {e}", dest.display()),
    })?;
    let staging = tempfile::Builder::new()
        .prefix(".staging-")
        .tempdir_in(dest)
        .map_err(|e| Failure {
            code: EXIT_IO,
            message: format!("cannot create staging directory in {}: {e}", dest.display()),
        })?;
    write(staging.path())?;
    let mut names: Vec<String> = Vec::new();
    for entry in fs::read_dir(staging.path()).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("cannot list staging directory: {e}"),
    })? {
        let entry = entry.map_err(|e| Failure {
            code: EXIT_IO,
            message: format!("cannot list staging directory: {e}"),
        })?;
        names.push(entry.file_name().to_string_lossy().into_owned());
    }
    // manifest.json moves last.
    names.sort();
    if let Some(pos) = names.iter().position(|n| n == "manifest.json") {
        let m = names.remove(pos);
        names.push(m);
    }
    for name in names {
        fs::rename(staging.path().join(&name), dest.join(&name)).map_err(|e| Failure {
            code: EXIT_IO,
            message: format!("cannot move {name} into {}: {e}", dest.display()),
        })?;
    }
    Ok(())
}

fn run_exact(scn: &Scenario, opts: &RunOpts) -> Result<(), Failure> {
    let dest = out_dir(opts)?;
    let data = sample(scn, SampleSource::Exact)?;
    emit_atomically(dest, |staging| {
        emit_outputs(scn, &data, staging)?;
        Ok(())
    })?;
    println!("exact solution written to {}", dest.display());
    Ok(())
}

fn run_simulate(scn: &Scenario, opts: &RunOpts) -> Result<(), Failure> {
    let dest = out_dir(opts)?;
    let data = sample(scn, SampleSource::Numeric)?;
    emit_atomically(dest, |staging| {
        emit_outputs(scn, &data, staging)?;
        Ok(())
    })?;
    println!("simulation written to {}", dest.display());
    Ok(())
}

fn run_summary(scn: &Scenario, opts: &RunOpts) -> Result<(), Failure> {
    let dest = out_dir(opts)?;
    emit_atomically(dest, |staging| {
        emit_summary(scn, staging)?;
        Ok(())
    })?;
    println!("summary written to {}", dest.display());
    Ok(())
}

fn run_verify(scn: &Scenario, opts: &RunOpts) -> Result<(), Failure> {
    let report = verify::run(scn)?;
    let body = serde_json::to_string_pretty(&report).expect("serializable report");
    if let Some(dest) = opts.out.as_deref() {
        emit_atomically(dest, |staging| {
            fs::write(staging.join("verify.json"), body.as_bytes()).map_err(|e| Failure {
                code: EXIT_IO,
                message: format!("cannot write verify.json: {e}"),
            })
        })?;
    }
    println!("{body}");
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Err(Failure::verification(format!(
            "verification failed: {}",
            failed.join(", ")
        )))
    }
}
