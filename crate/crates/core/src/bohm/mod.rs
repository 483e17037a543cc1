//! N-reduction: lazy Böhm-like trees relative to an oracle, and
//! depth-bounded checks of confluence, prepending and normalisation.

mod checks;
mod nu;
mod sequence;

use thiserror::Error;

use crate::reduction::ReductionError;
use crate::term::Position;

pub use checks::{
    confluence_check, is_normal_up_to, prepend_check, ConfluenceReport, NormalVerdict,
    PrependReport,
};
pub use nu::{nu_tree, nu_tree_truncated, NuNode, NuTree, Provenance};
pub use sequence::{nu_to_sequence, tree_to_sequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BohmError {
    /// Under the strict policy, no root normal form or verdict within fuel.
    #[error("fuel exhausted at position {position}: {reason}")]
    FuelExhausted { position: Position, reason: String },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}
