use std::path::PathBuf;

use bohm_core::meaningless::{Oracle, OracleKind, UnknownPolicy};
use bohm_core::reduction::StrategyKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "bohm",
    version,
    about = "Infinitary lambda calculus: Berarducci trees and Böhm reduction"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Weak head steps allowed per root normal form search.
    #[arg(long, global = true, default_value_t = 200)]
    pub fuel: usize,
    /// Truncation depth for trees, checks and snapshots.
    #[arg(long, global = true, default_value_t = 16)]
    pub depth: usize,
    /// PRNG seed, decimal or 0x-prefixed hex.
    #[arg(long, global = true, default_value = "0xC0FFEE", value_parser = parse_seed)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OracleArg::RootActive)]
    pub oracle: OracleArg,
    /// What to do with undecided memberships.
    #[arg(long, global = true, value_enum, default_value_t = PolicyArg::Assume)]
    pub policy: PolicyArg,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Treat tainted results as failures (exit 1).
    #[arg(long, global = true)]
    pub strict: bool,
    /// Use a built-in term instead of TERM.
    #[arg(long, global = true, value_name = "NAME")]
    pub demo: Option<String>,
    /// Read the term from a file.
    #[arg(long, global = true, value_name = "PATH")]
    pub file: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    RootActive,
    HeadOgre,
    BotOnly,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Assume,
    Strict,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the canonical form of a term.
    Parse { term: Option<String> },
    /// Weak head normal form and step count.
    Whnf { term: Option<String> },
    /// Canonical root normal form.
    Crnf { term: Option<String> },
    /// Root normal form, root-activeness and oracle verdicts.
    Classify { term: Option<String> },
    /// Truncated Böhm-like tree with per-node provenance.
    Tree { term: Option<String> },
    /// Reduce with a strategy and emit a JSON-lines trace.
    Reduce {
        term: Option<String>,
        #[arg(long, default_value = "lo")]
        strategy: StrategyKind,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Write the trace here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce with two strategies and compare the trees of the results.
    Confluence {
        term: Option<String>,
        #[arg(long, default_value = "wh")]
        s1: StrategyKind,
        /// Defaults to `random:SEED`.
        #[arg(long)]
        s2: Option<StrategyKind>,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Save both traces as PREFIX.1.jsonl and PREFIX.2.jsonl.
        #[arg(long, value_name = "PREFIX")]
        save_traces: Option<PathBuf>,
    },
    /// Check that a reduction does not change the tree.
    Prepend {
        term: Option<String>,
        /// Trace file; without it a trace is generated.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Defaults to `random:SEED`.
        #[arg(long)]
        strategy: Option<StrategyKind>,
        #[arg(long, default_value_t = 8)]
        k: usize,
    },
    /// Check a trace file for strong convergence up to --depth.
    Converge {
        /// Overrides the term recorded in the trace header.
        term: Option<String>,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Spot-check the meaningless-set axioms for the oracle.
    Axioms {
        /// Extra term added to the built-in corpus.
        term: Option<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Number of random closed terms added to the corpus.
        #[arg(long, default_value_t = 20)]
        random: usize,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("bad seed `{s}`: {e}"))
}

impl Global {
    pub fn oracle(&self) -> Oracle {
        let kind = match self.oracle {
            OracleArg::RootActive => OracleKind::RootActive,
            OracleArg::HeadOgre => OracleKind::HeadOgre,
            OracleArg::BotOnly => OracleKind::BotOnly,
        };
        let policy = match self.policy {
            PolicyArg::Assume => UnknownPolicy::AssumeMeaningless,
            PolicyArg::Strict => UnknownPolicy::Strict,
        };
        Oracle::new(kind, self.fuel, policy)
    }

    /// The configuration as echoed into every JSON report.
    pub fn echo(&self) -> serde_json::Value {
        json!({
            "fuel": self.fuel,
            "depth": self.depth,
            "seed": self.seed,
            "oracle": self.oracle.to_possible_value().map(|v| v.get_name().to_string()),
            "policy": self.policy.to_possible_value().map(|v| v.get_name().to_string()),
            "strict": self.strict,
            "demo": self.demo,
        })
    }
}
