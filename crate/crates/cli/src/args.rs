use clap::{Parser, Subcommand, ValueEnum};

use seqclass::{Basis, FirstOutcome, Hypothesis};

#[derive(Debug, Parser)]
#[command(
    name = "seqclass",
    version,
    about = "Sequential qubit classification: states, measurements and the success-rate tradeoff"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Schur,
    Computational,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Schur => Basis::Schur,
            BasisArg::Computational => Basis::Computational,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutcomeArg {
    Plus,
    Minus,
}

impl From<OutcomeArg> for FirstOutcome {
    fn from(o: OutcomeArg) -> Self {
        match o {
            OutcomeArg::Plus => FirstOutcome::Plus,
            OutcomeArg::Minus => FirstOutcome::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PovmKind {
    /// `{P₊, P₋}` on two qubits.
    TwoQubit,
    /// Optimal four-outcome measurement on three qubits.
    ThreeQubit,
    /// Weak two-qubit family at `--alpha`, `--beta`.
    Weak,
    /// Second measurement after `--outcome` at `--alpha`, `--beta`.
    Second,
    /// Mirror-symmetric family at `--a`.
    Mirror,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Profile {
    /// 51×51 parameter grids.
    #[default]
    Full,
    /// 11×11 parameter grids.
    Quick,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Haar-averaged density matrix for a hypothesis.
    States {
        /// One of 00, 01, 000, 001, 010, 011.
        #[arg(long, value_parser = parse_hypothesis)]
        label: Hypothesis,
        #[arg(long, value_enum, default_value = "schur")]
        basis: BasisArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Measurement elements and their validation report.
    Povm {
        #[arg(long, value_enum)]
        kind: PovmKind,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, value_enum, default_value = "minus")]
        outcome: OutcomeArg,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, value_enum, default_value = "schur")]
        basis: BasisArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Schur transform for two or three qubits, as JSON.
    Schur {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Optimal tradeoff curve: p_first, p_second, alpha, beta.
    Tradeoff {
        #[arg(long, default_value_t = 101)]
        n_points: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Path-plane directions of the states and second-measurement elements.
    Figure1 {
        /// Emit the four reference panels instead of a single point.
        #[arg(long, conflicts_with_all = ["alpha", "beta"])]
        panels: bool,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, value_enum, default_value = "minus")]
        outcome: OutcomeArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Analytic tradeoff curve with an optional Monte Carlo overlay.
    Figure2 {
        #[arg(long, default_value_t = 101)]
        n_points: usize,
        /// Trajectories per point; 0 disables the overlay.
        #[arg(long, default_value_t = 0)]
        mc_n: u64,
        #[arg(long, env = "SEQCLASS_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Monte Carlo run of the two-stage protocol; prints one JSON line.
    Simulate {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        #[arg(long, env = "SEQCLASS_SEED", default_value_t = 42)]
        seed: u64,
    },
    /// Runs the built-in checks and prints a JSON report. Exit code 1 on any
    /// failure.
    Verify {
        #[arg(long, value_enum, default_value = "full")]
        profile: Profile,
        /// Add Monte Carlo gates.
        #[arg(long)]
        with_mc: bool,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        #[arg(long, env = "SEQCLASS_SEED", default_value_t = 42)]
        seed: u64,
        /// Perturbs the expected value of the named check (testing aid).
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

fn parse_hypothesis(s: &str) -> Result<Hypothesis, String> {
    s.parse().map_err(|_| format!("unknown hypothesis {s:?}; expected one of 00, 01, 000, 001, 010, 011"))
}
