//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use bohm_core::corpus::random_term;
use bohm_core::term::{Coterm, FiniteTerm};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

/// Eager de Bruijn shift: indices `>= cutoff` go up by `amount`.
pub fn shift(t: &FiniteTerm, cutoff: u32, amount: u32) -> FiniteTerm {
    match t {
        FiniteTerm::Var { i } if *i >= cutoff => FiniteTerm::var(i + amount),
        FiniteTerm::App { f, a } => {
            FiniteTerm::app(shift(f, cutoff, amount), shift(a, cutoff, amount))
        }
        FiniteTerm::Lam { b } => FiniteTerm::lam(shift(b, cutoff + 1, amount)),
        other => other.clone(),
    }
}

/// Eager substitution of `arg` for index `j`, removing the binder.
pub fn subst(body: &FiniteTerm, arg: &FiniteTerm, j: u32) -> FiniteTerm {
    match body {
        FiniteTerm::Var { i } if *i == j => shift(arg, 0, j),
        FiniteTerm::Var { i } if *i > j => FiniteTerm::var(i - 1),
        FiniteTerm::App { f, a } => FiniteTerm::app(subst(f, arg, j), subst(a, arg, j)),
        FiniteTerm::Lam { b } => FiniteTerm::lam(subst(b, arg, j + 1)),
        other => other.clone(),
    }
}

pub fn depth_of(t: &FiniteTerm) -> usize {
    match t {
        FiniteTerm::App { f, a } => 1 + depth_of(f).max(depth_of(a)),
        FiniteTerm::Lam { b } => 1 + depth_of(b),
        _ => 0,
    }
}

/// Enough depth to see all of a finite term.
pub fn full(t: &FiniteTerm) -> usize {
    depth_of(t) + 1
}

/// Every term with exactly `size` nodes whose variables are below
/// `free + binders`. Constants and ⊥ are not generated.
pub fn all_terms(size: usize, free: u32) -> Vec<FiniteTerm> {
    let mut out = Vec::new();
    if size == 0 {
        return out;
    }
    if size == 1 {
        return (0..free).map(FiniteTerm::var).collect();
    }
    for b in all_terms(size - 1, free + 1) {
        out.push(FiniteTerm::lam(b));
    }
    for left in 1..size - 1 {
        let fs = all_terms(left, free);
        let as_ = all_terms(size - 1 - left, free);
        for f in &fs {
            for a in &as_ {
                out.push(FiniteTerm::app(f.clone(), a.clone()));
            }
        }
    }
    out
}

pub fn seeded_term(seed: u64, size: usize, free: u32) -> FiniteTerm {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    random_term(&mut rng, size, free)
}

pub fn co(t: &FiniteTerm) -> Coterm {
    Coterm::from(t)
}
