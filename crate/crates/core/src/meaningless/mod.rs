//! Oracles for sets of meaningless terms and the relations built on them.

mod axioms;
mod oracle;
mod relations;

pub use axioms::{axiom_check, Axiom, AxiomOutcome, AxiomReport, FailWitness};
pub use oracle::{Oracle, OracleKind, UnknownPolicy};
pub use relations::{par_bot_up_to, sim_u_up_to};
