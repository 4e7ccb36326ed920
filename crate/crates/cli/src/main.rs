//! `nsc`: analyses of regular languages from the command line.
//!
//! Exit codes: 0 success, 1 a check or claim failed, 2 bad input, 3 budget exhausted
//! (bounds are still printed).

mod commands;
mod input;

use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nsc_core::complexity::SearchBudget;
use nsc_core::Error;

#[derive(Parser)]
#[command(
    name = "nsc",
    version,
    about = "State complexity and algebraic invariants of regular languages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Regex over the alphabet: `+` union, juxtaposition, `*`, `X^n`, `@` for ε, `#` for ∅.
    #[arg(long, global = true)]
    pub regex: Option<String>,
    /// Automaton in `.aut` format.
    #[arg(long, global = true, value_name = "FILE")]
    pub aut: Option<String>,
    /// Embedded example (F_LN0..F_LN4, F_M3, F_SUB, F_U5, F_AA).
    #[arg(long, global = true, value_name = "NAME")]
    pub fixture: Option<String>,
    /// Symbols for `--regex`, comma or space separated; inferred from the regex if absent.
    #[arg(long, global = true)]
    pub alphabet: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest state count tried by the minimization searches.
    #[arg(long, global = true, default_value_t = 16, value_name = "N")]
    pub budget_states: usize,
    /// Search nodes per search.
    #[arg(long, global = true, default_value_t = 10_000_000, value_name = "N")]
    pub budget_nodes: u64,
    /// Wall-clock limit per search, in seconds.
    #[arg(long, global = true, value_name = "N")]
    pub timeout_s: Option<u64>,
    /// Larger samples and second-route budgets in verify-paper and selftest.
    #[arg(long, global = true)]
    pub extended: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

impl Global {
    pub fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_states: self.budget_states,
            max_nodes: self.budget_nodes,
            time_limit: self.timeout_s.map(Duration::from_secs),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Clone, Copy)]
pub enum Command {
    /// Minimal dfa of the language.
    MinDfa,
    /// Syntactic monoid.
    Monoid,
    /// Semilattice of unions of left derivatives and its predicates.
    Lattice,
    /// Dependency relation between derivatives of L and of its reverse, with the theorem checks.
    Dependency,
    /// Bipartite dimension of the dependency relation.
    Dim,
    /// Nondeterministic state complexity.
    Ns,
    /// Fewest states of a subatomic acceptor.
    Nsyn,
    /// Canonical residual automaton.
    Residual,
    /// Chrobak normal form of a unary acceptor and its atomic replacement.
    Chrobak,
    /// Whether the given acceptor is atomic, by both tests.
    CheckAtomic,
    /// Whether the given acceptor is subatomic, by both tests.
    CheckSubatomic,
    /// Dual of the minimal semilattice automaton, checked to accept the reverse.
    Dualize,
    /// Language classes with their implications checked.
    Classify,
    /// Every measure at once.
    Report,
    /// Runs the claims of the example corpus.
    VerifyPaper,
    /// Seeded property checks on random automata.
    #[command(hide = true)]
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command, &cli.global) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("nsc: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Check(_) => 1,
        Error::Budget { .. } => 3,
        _ => 2,
    }
}
