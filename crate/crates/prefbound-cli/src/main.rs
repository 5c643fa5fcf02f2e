//! `prefbound`: evaluate the expressiveness bounds of Euclidean ideal-point
//! preference models over parameter grids, and cross-check them against
//! brute-force oracles.
//!
//! Exit codes: 0 success (all verify checks pass), 1 verification failure,
//! 2 invalid arguments, 3 capacity exceeded.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use prefbound::bounds::BallMode;
use prefbound_cli::config::parse_config;
use prefbound_cli::csvio::CsvDocument;
use prefbound_cli::runner::{run, Command, SweepSpec};
use prefbound_cli::CliError;

#[derive(Parser)]
#[command(
    name = "prefbound",
    version,
    about = "Expressiveness bounds for Euclidean ideal-point preference models",
    after_help = "Ranges are inclusive start:stop:step (step defaults to 1). \
                  Output is CSV with the fixed header \
                  kind,A,I,d,K,ball_mode,trials,seed,value,extra1,extra2,status; \
                  the resolved configuration is echoed as leading # comments."
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Lower bound on the probability that a random profile cannot be
    /// represented in d dimensions (one row per A, I, d)
    BoundC(SweepArgs),
    /// Upper bound on the share of all A! preferences that can be
    /// simultaneously represented (one row per A, d)
    Rhat(SweepArgs),
    /// Lower bound on the expected adjacent-swap loss when approximating a
    /// random preference (one row per A, d)
    InfoLoss(SweepArgs),
    /// Cross-check every bound against its brute-force oracle; exits 1 if
    /// any non-skipped check fails
    Verify(SweepArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Alternatives range A, inclusive start:stop:step
    #[arg(long = "A", value_name = "RANGE")]
    a: Option<String>,
    /// Individuals range I, inclusive start:stop:step
    #[arg(long = "I", value_name = "RANGE")]
    i: Option<String>,
    /// Dimension range d, inclusive start:stop:step
    #[arg(long = "d", value_name = "RANGE")]
    d: Option<String>,
    /// Truncation of the information-loss sum (default: A(A-1)/2)
    #[arg(long = "K", value_name = "N")]
    k: Option<usize>,
    /// Ball sizes for the information-loss bound: paper | exact
    #[arg(long = "ball-mode", value_name = "MODE")]
    ball_mode: Option<String>,
    /// Monte Carlo trials per grid point needing sampling
    #[arg(long, value_name = "N")]
    trials: Option<u64>,
    /// Root seed; per-point seeds derive deterministically from it
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Output path, or '-' for standard output
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    /// Worker threads for grid evaluation (rows stay in grid order)
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Optional key=value config file; flags override it
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Multiplier applied to bounds in verify comparisons; values other
    /// than 1 act as a negative control that must fail
    #[arg(long = "bound-scale", value_name = "X")]
    bound_scale: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    let (command, args) = match cli.command {
        CliCommand::BoundC(args) => (Command::BoundC, args),
        CliCommand::Rhat(args) => (Command::Rhat, args),
        CliCommand::InfoLoss(args) => (Command::InfoLoss, args),
        CliCommand::Verify(args) => (Command::Verify, args),
    };
    let (spec, out_path) = resolve(command, &args)?;
    let output = run(&spec)?;
    let doc = CsvDocument {
        comments: output.comments,
        rows: output.rows,
    };
    write_output(&out_path, &doc.render())?;
    if let Some(summary) = &output.summary {
        eprint!("{summary}");
    }
    if spec.command == Command::Verify && !output.all_passed {
        return Ok(1);
    }
    Ok(0)
}

/// Precedence: flags over config file over per-subcommand defaults.
fn resolve(command: Command, args: &SweepArgs) -> Result<(SweepSpec, String), CliError> {
    let mut spec = SweepSpec::defaults(command);
    let mut out = String::from("-");

    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let file = parse_config(&text)?;
        if let Some(v) = file.get("A") {
            spec.a = v.parse()?;
        }
        if let Some(v) = file.get("I") {
            spec.i = v.parse()?;
        }
        if let Some(v) = file.get("d") {
            spec.d = v.parse()?;
        }
        if let Some(v) = file.get("K") {
            spec.swap_cap = Some(parse_number(v, "K")?);
        }
        if let Some(v) = file.get("ball-mode") {
            spec.ball_mode = parse_ball_mode(v)?;
        }
        if let Some(v) = file.get("trials") {
            spec.trials = parse_number(v, "trials")?;
        }
        if let Some(v) = file.get("seed") {
            spec.seed = parse_number(v, "seed")?;
        }
        if let Some(v) = file.get("jobs") {
            spec.jobs = parse_number(v, "jobs")?;
        }
        if let Some(v) = file.get("bound-scale") {
            spec.bound_scale = v.parse::<f64>().map_err(|_| {
                CliError::InvalidArgument(format!("bound-scale is not a number: '{v}'"))
            })?;
        }
        if let Some(v) = file.get("out") {
            out = v.clone();
        }
    }

    if let Some(v) = &args.a {
        spec.a = v.parse()?;
    }
    if let Some(v) = &args.i {
        spec.i = v.parse()?;
    }
    if let Some(v) = &args.d {
        spec.d = v.parse()?;
    }
    if let Some(v) = args.k {
        spec.swap_cap = Some(v);
    }
    if let Some(v) = &args.ball_mode {
        spec.ball_mode = parse_ball_mode(v)?;
    }
    if let Some(v) = args.trials {
        spec.trials = v;
    }
    if let Some(v) = args.seed {
        spec.seed = v;
    }
    if let Some(v) = args.jobs {
        spec.jobs = v;
    }
    if let Some(v) = args.bound_scale {
        spec.bound_scale = v;
    }
    if let Some(v) = &args.out {
        out = v.clone();
    }
    Ok((spec, out))
}

fn parse_ball_mode(v: &str) -> Result<BallMode, CliError> {
    v.parse::<BallMode>().map_err(CliError::from)
}

fn parse_number<T: std::str::FromStr>(v: &str, what: &str) -> Result<T, CliError> {
    v.parse::<T>()
        .map_err(|_| CliError::InvalidArgument(format!("{what} is not a valid number: '{v}'")))
}

fn write_output(path: &str, text: &str) -> Result<(), CliError> {
    if path == "-" {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        lock.write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))?;
        return Ok(());
    }
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))
}
