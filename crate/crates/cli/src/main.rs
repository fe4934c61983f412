use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod run;
mod text;

/// Reachability of x+ = Ax + Bu under polyhedral output constraints Cx + Du in Y.
#[derive(Debug, Parser)]
#[command(name = "conreach", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// System file (JSON)
    pub file: PathBuf,
    /// Iteration cap; overrides the file's options
    #[arg(long, env = "CONREACH_CAP")]
    pub cap: Option<usize>,
    /// Tolerance of the floating-point fallbacks; overrides the file's options
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SetArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of steps; iterate until the sequence stabilizes (or the cap) when omitted
    #[arg(long)]
    pub steps: Option<usize>,
    /// F, Fcon, Frec, Fpolar, Fminus or Fb (F by default; raw graph files use their own map)
    #[arg(long)]
    pub map: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify, check the conditions and decide reachability
    Analyze(Common),
    /// Case of the instance
    Classify(Common),
    /// V*, T*, R*, K and L
    Subspaces(Common),
    /// Reachable sets R_l of a map
    ReachSet(SetArgs),
    /// Feasible sets X_l of a map
    FeasibleSet(SetArgs),
    /// Conditions (a)-(d) with certificates
    CheckConditions(Common),
    /// Spectral verdict against direct iteration, plus finite-step duality
    OracleCompare(Common),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Analyze(c) => run::analyze(c),
        Command::Classify(c) => run::classify(c),
        Command::Subspaces(c) => run::subspaces(c),
        Command::ReachSet(a) => run::set_sequence(a, conreach::setmaps::SeqMode::Reach),
        Command::FeasibleSet(a) => run::set_sequence(a, conreach::setmaps::SeqMode::Feasible),
        Command::CheckConditions(c) => run::check_conditions(c),
        Command::OracleCompare(c) => run::oracle_compare(c),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(out.body.as_bytes()).and_then(|_| stdout.flush()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
