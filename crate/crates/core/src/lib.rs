//! A lazy infinitary λ-calculus engine.
//!
//! Terms are possibly infinite trees unfolded on demand ([`term::Coterm`]).
//! On top of them the crate provides β- and ⊥-reduction, fuel-bounded root
//! normal forms, oracles for sets of meaningless terms, and the coinductive
//! N-reduction that computes Böhm-like trees (Berarducci trees for the
//! root-active oracle). Undecidable questions are answered with [`term::Tri`].

pub mod bohm;
pub mod corpus;
pub mod meaningless;
pub mod reduction;
pub mod rnf;
pub mod syntax;
pub mod term;
