use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use condsym_cli::{demo, run_census, verify, CommandError, Demo, Format, Outcome, RunOptions, ScenarioFile};

/// Checks the symmetry of two linear forms in independent random variables on finite abelian groups.
#[derive(Debug, Parser)]
#[command(name = "condsym", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Absolute tolerance for the floating-point checks.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Census worker threads (0 = one per core).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Also write the machine-readable report to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Format of the report printed on stdout.
    #[arg(long, global = true, default_value = "human", value_parser = |s: &str| s.parse::<Format>())]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Verdict on the explicit pair `mu1`, `mu2` in a scenario file.
    Verify { file: PathBuf },
    /// Every ordered pair of distributions with masses in multiples of 1/denominator.
    Census { file: PathBuf },
    /// Run a built-in construction and check its properties.
    Demo {
        #[arg(value_parser = |s: &str| s.parse::<Demo>())]
        name: Demo,
    },
}

fn load(path: &Path) -> Result<ScenarioFile, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    ScenarioFile::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: &Cli) -> Result<(Outcome, Option<PathBuf>), (u8, String)> {
    let options = RunOptions { tolerance: cli.tolerance, workers: cli.workers };
    let fail = |e: CommandError| (e.exit_code(), e.to_string());
    match &cli.command {
        Command::Verify { file } | Command::Census { file } => {
            let scenario = load(file).map_err(|m| (2, m))?;
            let outcome = match cli.command {
                Command::Verify { .. } => verify(&scenario, &options),
                _ => run_census(&scenario, &options),
            }
            .map_err(|e| match e {
                CommandError::Parse(p) => (2, format!("{}: {p}", file.display())),
                e => fail(e),
            })?;
            Ok((outcome, cli.out.clone().or(scenario.out)))
        }
        Command::Demo { name } => Ok((demo(*name, &options).map_err(fail)?, cli.out.clone())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((outcome, out)) => {
            print!("{}", outcome.report.render(cli.format));
            let _ = std::io::stdout().flush();
            if let Some(path) = out {
                if let Err(e) = fs::write(&path, outcome.report.to_machine()) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(outcome.status.exit_code())
        }
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
