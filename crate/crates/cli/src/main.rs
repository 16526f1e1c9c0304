use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use npw_cli::{cmd_generate, cmd_momentum, cmd_transform, cmd_verify, CliError, RepSpec, RunConfig, Status};
use npw_core::{BlockSide, Sign, DEFAULT_TOL};

/// Spacetime algebras generated from U(N).
#[derive(Parser)]
#[command(name = "npw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Matrix size N of U(N).
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Sign of the 2N-rep momentum block, +1 or -1.
    #[arg(long = "eps-p", default_value = "+1", allow_hyphen_values = true)]
    eps_p: Sign,
    #[arg(long, env = "NPW_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed for the random trials.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the basis, structure constants and generators as JSON.
    Generate(Common),
    /// Run every identity check and write the report.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Apply exp(iφ·k) exp(iθ·j) to an event.
    Transform {
        #[command(flatten)]
        common: Common,
        /// N² rotation parameters, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Option<Vec<f64>>,
        /// N² boost parameters, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        phi: Option<Vec<f64>>,
        /// N² event coordinates, time last.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
    },
    /// Solve for momentum matrices on (A,B) + (C,D).
    Momentum {
        #[command(flatten)]
        common: Common,
        /// "C,D" against (fund,antifund), or "A,B:C,D". Reps: trivial, fund,
        /// antifund, sym2, antisym2, sym2bar, antisym2bar, fund2, antifund2.
        #[arg(long)]
        rep: String,
        /// upper or lower; defaults to upper for eps_P = +1, lower for -1.
        #[arg(long)]
        side: Option<BlockSide>,
    },
}

fn config(c: Common) -> Result<RunConfig, CliError> {
    RunConfig::new(c.n, c.eps_p, c.tol, c.seed, c.out)
}

fn run(cli: Cli) -> Result<Status, CliError> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Generate(c) => cmd_generate(&config(c)?, &mut out),
        Command::Verify { common, inject_fault } => cmd_verify(&config(common)?, inject_fault, &mut out),
        Command::Transform { common, theta, phi, x } => cmd_transform(&config(common)?, theta, phi, x, &mut out),
        Command::Momentum { common, rep, side } => {
            let config = config(common)?;
            cmd_momentum(&config, RepSpec::parse(&rep)?, side, &mut out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("npw: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
