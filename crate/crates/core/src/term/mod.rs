//! Possibly infinite λ-terms over de Bruijn indices.

mod coterm;
mod finite;
pub mod mu;
mod position;
mod shift;
mod tri;

pub use coterm::{bisim_up_to, metric_dist, Coterm, Distance, Generator, Node, NodeKind};
pub use finite::FiniteTerm;
pub use mu::{
    approximant, corec_iterate, corec_iterate_with_seed, corec_node_at, from_mu, GuardednessError,
    MuExpr,
};
pub use position::{Position, PositionParseError};
pub use shift::lift;
pub use tri::Tri;
