//! β- and ⊥-reduction on coterms: substitution, redex search, strategies,
//! traces, postponement of ⊥-steps and strong-convergence checking.

mod convergence;
mod postpone;
mod step;
mod strategy;
mod subst;
mod trace;

use thiserror::Error;

use crate::term::Position;

pub use crate::term::lift;
pub use convergence::{check_strong_convergence, ConvergenceReport, DepthEntry};
pub use postpone::{collapse, postpone_bot, Postponed};
pub use step::{
    head_redex_position, head_step, is_beta_redex, redexes, redexes_bounded, step_at, whnf_step,
    HeadStep, Redex, RuleTag, MAX_SPINE,
};
pub use strategy::{reduce, Strategy, StrategyKind};
pub use subst::subst;
pub use trace::{Step, StepRecord, Trace, TraceFile, TraceHeader};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("no {rule} redex at position {position}")]
    NotARedex { position: Position, rule: RuleTag },
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("malformed trace file: {0}")]
    Format(String),
}
