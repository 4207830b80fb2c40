mod decide;
mod experiment;
mod pc;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcgroup::power_circuit::{BitBudget, PcError};
use thiserror::Error;

pub const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(name = "pcgroup", version, about = "Word and conjugacy problems in BS(1,2) and the Baumslag group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two words over a, t, b are equal in the Baumslag group.
    Wp(DecideArgs),
    /// Decide conjugacy in the Baumslag group.
    Conj(DecideArgs),
    /// Decide conjugacy in BS(1,2) for words over a, t.
    BsConj(DecideArgs),
    /// Power-circuit operations on a `pc v1` file.
    Pc {
        #[command(subcommand)]
        op: pc::PcOp,
    },
    /// Print the word w_N, equal to t^tow(N+1).
    Blowup {
        n: u32,
        /// Also check the word against t^tow(N+1).
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build the conjugacy instance for "M divides S" from a `pc v1` file.
    Divcase {
        file: PathBuf,
        m: String,
        s: String,
        /// Also decide the instance.
        #[arg(long)]
        decide: bool,
        /// Largest word length to write out.
        #[arg(long, default_value_t = pcgroup::baumslag::DEFAULT_WORD_CAP)]
        cap: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte-Carlo experiments, written as CSV.
    Experiment(experiment::ExperimentArgs),
}

#[derive(Args, Clone)]
pub struct OutputArgs {
    /// Bit budget for explicit expansions.
    #[arg(long, default_value_t = BitBudget::DEFAULT_BITS)]
    pub budget: u64,
    /// Print a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
    /// Exit with 1 on a negative answer.
    #[arg(long)]
    pub exit_code: bool,
}

impl OutputArgs {
    pub fn bit_budget(&self) -> Result<BitBudget, CliError> {
        BitBudget::new(self.budget).map_err(CliError::from)
    }

    pub fn header(&self, command: &str) -> String {
        format!("# pcgroup {command} budget={} seed={DEFAULT_SEED}", self.budget)
    }
}

#[derive(Args)]
struct DecideArgs {
    /// A word, or @PATH to read it from a file.
    x: String,
    /// A word, or @PATH to read it from a file.
    y: String,
    /// Print (and re-verify) a witness.
    #[arg(long)]
    witness: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Group {
    Z2,
    Bs12,
    Bg,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("bit budget of {0} bits exceeded")]
    Budget(u64),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl From<PcError> for CliError {
    fn from(e: PcError) -> Self {
        match e {
            PcError::BudgetExceeded { max_bits } => CliError::Budget(max_bits),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Budget(_) => 3,
            _ => 2,
        }
    }
}

/// Inline text, or the contents of the file after `@`.
pub fn read_input(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

/// What a successful run reports back: whether the answer was negative.
pub struct Outcome {
    pub negative: bool,
}

fn run(cli: Cli) -> Result<(Outcome, bool), CliError> {
    match cli.command {
        Command::Wp(a) => decide::wp(&a.x, &a.y, &a.out).map(|o| (o, a.out.exit_code)),
        Command::Conj(a) => decide::conj(&a.x, &a.y, a.witness, &a.out).map(|o| (o, a.out.exit_code)),
        Command::BsConj(a) => decide::bs_conj(&a.x, &a.y, a.witness, &a.out).map(|o| (o, a.out.exit_code)),
        Command::Pc { op } => pc::run(op),
        Command::Blowup { n, check, out } => decide::blowup(n, check, &out).map(|o| (o, out.exit_code)),
        Command::Divcase { file, m, s, decide, cap, out } => {
            decide::divcase(&file, &m, &s, decide, cap, &out).map(|o| (o, out.exit_code))
        }
        Command::Experiment(a) => experiment::run(&a).map(|o| (o, false)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((outcome, exit_code)) => ExitCode::from(if exit_code && outcome.negative { 1 } else { 0 }),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
