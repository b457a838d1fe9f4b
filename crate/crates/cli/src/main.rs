mod commands;
mod lemmas;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::lemmas::LemmaId;
use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "gaussrep", version, about = "Orthogonality, approximation and case analysis for Gaussian product measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// MeasureSpec JSON file.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Built-in example used when no --spec is given.
    #[arg(long, global = true, value_enum)]
    example: Option<ExampleName>,
    /// Window N: indices n = −N..N.
    #[arg(long, global = true)]
    window: Option<usize>,
    /// Truncation M for kernels and approximation.
    #[arg(long, global = true, default_value_t = 200)]
    truncation: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance override for lemma checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orthogonality sweep over the minimal generating elements (plus random orthogonal ones).
    CheckOrthogonality {
        /// Number of seeded random orthogonal elements to add.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
    /// Series patterns and the branch path of the case analysis.
    Classify,
    /// One kernel when --kind is given, otherwise every criterion of the approximation plan.
    Kernels {
        /// Kernel kind, e.g. D_by_A or XX_by_AA.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long, default_value_t = 1)]
        row: usize,
        #[arg(long, default_value_t = 0)]
        target: i64,
        #[arg(long)]
        partner: Option<i64>,
        /// Constant phase s for the trigonometric kernels.
        #[arg(long)]
        phase: Option<f64>,
    },
    /// Full pipeline on a built-in example with the expected headline values.
    RunExample {
        #[arg(value_enum)]
        name: ExampleName,
    },
    /// Randomized check of an identity against an independent oracle.
    VerifyLemma {
        #[arg(value_enum)]
        id: LemmaId,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleName {
    #[value(name = "ex-a1")]
    A1,
    #[value(name = "ex-011-11")]
    Linear011,
    #[value(name = "ex-111-b1-alt")]
    UnitAlt,
    #[value(name = "ex-111-b1-any")]
    UnitAny,
}

impl ExampleName {
    pub fn id(self) -> &'static str {
        match self {
            ExampleName::A1 => "ex-a1",
            ExampleName::Linear011 => "ex-011-11",
            ExampleName::UnitAlt => "ex-111-b1-alt",
            ExampleName::UnitAny => "ex-111-b1-any",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Infeasible(String),
    LemmaFailed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::LemmaFailed(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible kernel: {m}"),
            CliError::LemmaFailed(m) => write!(f, "lemma check failed: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let result = match &cli.command {
        Command::CheckOrthogonality { random } => commands::check_orthogonality(c, *random),
        Command::Classify => commands::classify(c),
        Command::Kernels { kind, row, target, partner, phase } => {
            commands::kernels(c, kind.as_deref(), *row, *target, *partner, *phase)
        }
        Command::RunExample { name } => commands::run_example(c, *name),
        Command::VerifyLemma { id, trials } => lemmas::verify(c, *id, *trials),
    };
    // a failed lemma still prints its report
    let (report, failure) = match result {
        Ok(r) => (Some(r), None),
        Err(commands::Failure { report, error }) => (report, Some(error)),
    };
    if let Some(report) = report {
        if let Err(e) = output::emit(&report, c.format, c.out.as_deref()) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
