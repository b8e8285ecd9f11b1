mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "kmspin", version, about = "Exact spin representations of simply laced Kac-Moody compact subalgebras")]
struct Cli {
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = "KMSPIN_JOBS")]
    jobs: Option<usize>,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write exports or the report to this file.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct DiagramArgs {
    /// Diagram: a name (A3, E10, A~2, AE5, D4xA1), an edge list "3; 1 2; 2 3"
    /// or a JSON matrix.
    #[arg(long = "type", value_name = "DIAGRAM")]
    pub diagram: String,

    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_height: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpinArg {
    #[value(name = "three_half", alias = "three-half")]
    ThreeHalf,
    #[value(name = "five_half", alias = "five-half")]
    FiveHalf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Plain,
    Coord,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    H,
    Sym2,
    Sym3,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List positive real roots up to the height bound.
    Roots(DiagramArgs),
    /// Print a maximum coclique and the half-spin dimension.
    Coclique(DiagramArgs),
    /// Build and verify the half-spin representation; exports ρ and Γ.
    Halfspin(DiagramArgs),
    /// Build a higher-spin map, check its relations and the resulting σ.
    Rep {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long, value_enum)]
        spin: SpinArg,
        #[arg(long, value_enum, default_value_t = ConventionArg::Plain)]
        convention: ConventionArg,
    },
    /// Sign-component test for reflections on h, Sym² or Sym³.
    Sym3 {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long, value_enum)]
        space: SpaceArg,
        /// Succeed only if a sign component is found.
        #[arg(long)]
        expect_sign: bool,
    },
    /// Compare the iterated-sum closure with the real roots.
    Closure(DiagramArgs),
    /// Randomized check of the Clifford bracket formula.
    CliffordLemma {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Randomized check of the contraction identities I-V.
    Identities {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Roots(d) => commands::roots(d),
        Command::Coclique(d) => commands::coclique(d),
        Command::Halfspin(d) => commands::halfspin(d),
        Command::Rep { diagram, spin, convention } => commands::rep(diagram, *spin, *convention),
        Command::Sym3 { diagram, space, expect_sign } => commands::sym3(diagram, *space, *expect_sign),
        Command::Closure(d) => commands::closure(d),
        Command::CliffordLemma { k, l, trials } => commands::clifford_lemma(*k, *l, *trials, cli.seed),
        Command::Identities { diagram, trials } => commands::identities(diagram, *trials, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("kmspin: cannot configure {jobs} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(CliError::Usage(msg)) => {
            eprintln!("kmspin: {msg}");
            return ExitCode::from(2);
        }
        Err(CliError::Io(msg)) => {
            eprintln!("kmspin: {msg}");
            return ExitCode::FAILURE;
        }
    };
    // Output errors (e.g. a closed pipe) are not worth a panic.
    let mut stdout = std::io::stdout().lock();
    for line in &outcome.lines {
        let _ = writeln!(stdout, "{line}");
    }
    if let Some(path) = &cli.output {
        if let Err(e) = output::write(path, cli.format, &outcome) {
            match e {
                CliError::Usage(msg) => {
                    eprintln!("kmspin: {msg}");
                    return ExitCode::from(2);
                }
                CliError::Io(msg) => {
                    eprintln!("kmspin: {msg}");
                    return ExitCode::FAILURE;
                }
            }
        }
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        let report = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
        let _ = writeln!(stdout, "{report}");
        ExitCode::FAILURE
    }
}
