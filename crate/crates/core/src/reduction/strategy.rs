use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use super::step::{head_redex_position, redexes, Redex, RuleTag};
use super::trace::Trace;
use crate::meaningless::Oracle;
use crate::term::{Coterm, Tri};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StrategyKind {
    LeftmostOutermost,
    /// Head reduction: the weak head redex below the leading abstractions.
    WeakHead,
    RandomRedex {
        seed: u64,
    },
    /// ⊥-steps first (leftmost-outermost), then leftmost-outermost β.
    BottomFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Strategy {
    pub kind: StrategyKind,
    /// Redexes at depth `>= depth_bound` are not considered.
    pub depth_bound: usize,
}

pub const DEFAULT_DEPTH_BOUND: usize = 64;

impl Strategy {
    pub fn new(kind: StrategyKind) -> Self {
        Strategy {
            kind,
            depth_bound: DEFAULT_DEPTH_BOUND,
        }
    }

    pub fn with_depth_bound(mut self, depth_bound: usize) -> Self {
        self.depth_bound = depth_bound;
        self
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyKind::LeftmostOutermost => f.write_str("lo"),
            StrategyKind::WeakHead => f.write_str("wh"),
            StrategyKind::RandomRedex { seed } => write!(f, "random:{seed}"),
            StrategyKind::BottomFirst => f.write_str("bot-first"),
        }
    }
}

impl FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lo" | "leftmost-outermost" => Ok(StrategyKind::LeftmostOutermost),
            "wh" | "weak-head" => Ok(StrategyKind::WeakHead),
            "bot-first" | "bottom-first" => Ok(StrategyKind::BottomFirst),
            other => match other.strip_prefix("random:") {
                Some(seed) => seed
                    .parse()
                    .map(|seed| StrategyKind::RandomRedex { seed })
                    .map_err(|_| format!("bad seed in strategy `{other}`")),
                None => Err(format!(
                    "unknown strategy `{other}` (expected lo, wh, bot-first or random:SEED)"
                )),
            },
        }
    }
}

fn allowed(r: &Redex, oracle: Option<&Oracle>) -> bool {
    match r.rule {
        RuleTag::Beta => true,
        RuleTag::BotU => oracle.is_some_and(|o| o.accepts(&r.verdict)),
    }
}

/// Applies up to `k` steps chosen by `strat`, stopping early when no
/// eligible redex remains within the depth bound.
pub fn reduce(t: &Coterm, strat: &Strategy, k: usize, oracle: Option<&Oracle>) -> Trace {
    let mut trace = Trace::new(t.clone());
    let mut rng = match strat.kind {
        StrategyKind::RandomRedex { seed } => Some(Xoshiro256PlusPlus::seed_from_u64(seed)),
        _ => None,
    };
    for _ in 0..k {
        let cur = trace.end().clone();
        let choice = match strat.kind {
            StrategyKind::WeakHead => head_redex_position(&cur, strat.depth_bound).map(|p| Redex {
                position: p,
                rule: RuleTag::Beta,
                verdict: Tri::Yes,
            }),
            _ => {
                let mut candidates: Vec<Redex> = redexes(&cur, strat.depth_bound, oracle)
                    .into_iter()
                    .filter(|r| allowed(r, oracle))
                    .collect();
                match strat.kind {
                    StrategyKind::LeftmostOutermost => candidates.into_iter().next(),
                    StrategyKind::BottomFirst => {
                        let bot = candidates.iter().position(|r| r.rule == RuleTag::BotU);
                        match bot {
                            Some(i) => Some(candidates.swap_remove(i)),
                            None => candidates.into_iter().next(),
                        }
                    }
                    StrategyKind::RandomRedex { .. } => {
                        if candidates.is_empty() {
                            None
                        } else {
                            let rng = rng.as_mut().expect("seeded for random strategy");
                            let i = rng.gen_range(0..candidates.len());
                            Some(candidates.swap_remove(i))
                        }
                    }
                    StrategyKind::WeakHead => unreachable!(),
                }
            }
        };
        let Some(redex) = choice else { break };
        let verdict = (redex.rule == RuleTag::BotU).then_some(redex.verdict);
        trace
            .push(redex.position, redex.rule, verdict)
            .expect("strategies only pick existing redexes");
    }
    trace
}
