//! Named example terms and seeded random term generators.

use std::sync::OnceLock;

use rand::Rng;

use crate::syntax::parse;
use crate::term::{Coterm, FiniteTerm, MuExpr};

/// `(name, source, open)` for every built-in term.
pub const NAMED: &[(&str, &str, bool)] = &[
    ("I", r"\x. x", false),
    ("K", r"\x. \y. x", false),
    ("S", r"\x. \y. \z. x z (y z)", false),
    ("omega", r"\x. x x", false),
    ("Omega", r"(\x. x x) (\x. x x)", false),
    ("Omega_O", r"(\x. \y. x x) (\x. \y. x x)", false),
    ("M", r"(\m. \x. m m) (\m. \x. m m)", false),
    ("L", r"mu L. \x. L", false),
    ("O", r"mu O. \x. O", false),
    ("Y_f", r"(\x. f (x x)) (\x. f (x x))", true),
    ("Omega_I", r"(\x. x x) (\x. x x) (\x. x)", false),
    ("lam_Omega", r"\z. (\x. x x) (\x. x x)", false),
    ("head_active", r"\z. (\x. x x) (\x. x x) z", false),
    ("bot_head", r"\z. bot z z", false),
    ("x_Omega", r"x ((\x. x x) (\x. x x))", true),
    ("K_x_Omega", r"(\a. \b. a) x ((\x. x x) (\x. x x))", true),
    ("I_Omega", r"(\x. x) ((\x. x x) (\x. x x))", false),
];

pub fn source(name: &str) -> Option<&'static str> {
    NAMED
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, s, _)| *s)
}

/// Parses a built-in term by name.
pub fn named(name: &str) -> Option<Coterm> {
    NAMED
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, src, open)| parse(src, *open).expect("built-in terms parse").term)
}

fn cached(cell: &'static OnceLock<Coterm>, name: &str) -> Coterm {
    cell.get_or_init(|| named(name).expect("known name"))
        .clone()
}

macro_rules! named_term {
    ($fn_name:ident, $name:literal) => {
        pub fn $fn_name() -> Coterm {
            static CELL: OnceLock<Coterm> = OnceLock::new();
            cached(&CELL, $name)
        }
    };
}

named_term!(i, "I");
named_term!(k, "K");
named_term!(s, "S");
named_term!(small_omega, "omega");
named_term!(omega, "Omega");
named_term!(omega_ogre, "Omega_O");
named_term!(m, "M");
named_term!(l, "L");
named_term!(ogre, "O");
named_term!(y_f, "Y_f");

/// Random finite term with exactly `size` nodes (at least 1), whose free
/// indices are below `free` at the root. `free = 0` gives closed terms;
/// leaves that would be unbound become the constant `c`.
pub fn random_term<R: Rng>(rng: &mut R, size: usize, free: u32) -> FiniteTerm {
    fn go<R: Rng>(rng: &mut R, n: usize, ctx: u32) -> FiniteTerm {
        if n <= 1 {
            return if ctx == 0 {
                FiniteTerm::constant("c")
            } else {
                FiniteTerm::var(rng.gen_range(0..ctx))
            };
        }
        if n == 2 {
            return FiniteTerm::lam(go(rng, 1, ctx + 1));
        }
        let roll: f64 = rng.gen();
        if roll < 0.35 {
            FiniteTerm::lam(go(rng, n - 1, ctx + 1))
        } else if roll < 0.65 && n >= 4 {
            // An explicit redex: (λ.b) a.
            let body = rng.gen_range(1..=n - 3);
            let arg = n - 2 - body;
            FiniteTerm::app(
                FiniteTerm::lam(go(rng, body, ctx + 1)),
                go(rng, arg.max(1), ctx),
            )
        } else {
            let left = rng.gen_range(1..n - 1);
            FiniteTerm::app(go(rng, left, ctx), go(rng, n - 1 - left, ctx))
        }
    }
    go(rng, size.max(1), free)
}

/// Random closed term with between `min_size` and `max_size` nodes.
pub fn random_closed<R: Rng>(rng: &mut R, min_size: usize, max_size: usize) -> FiniteTerm {
    let size = rng.gen_range(min_size.max(1)..=max_size.max(min_size.max(1)));
    random_term(rng, size, 0)
}

/// Random guarded μ-expression of roughly `size` nodes, with at least one
/// μ-binder at the root.
pub fn random_mu<R: Rng>(rng: &mut R, size: usize) -> MuExpr {
    // `unguarded` = binders entered since the last constructor.
    fn go<R: Rng>(rng: &mut R, n: usize, lams: u32, mus: u32, unguarded: u32) -> MuExpr {
        if n <= 1 {
            let usable = mus.saturating_sub(unguarded);
            let roll: f64 = rng.gen();
            return if usable > 0 && roll < 0.5 {
                MuExpr::MuVar(unguarded + rng.gen_range(0..usable))
            } else if lams > 0 && roll < 0.85 {
                MuExpr::Var(rng.gen_range(0..lams))
            } else if roll < 0.95 {
                MuExpr::constant(["a", "b"][rng.gen_range(0..2)])
            } else {
                MuExpr::Bot
            };
        }
        let roll: f64 = rng.gen();
        if roll < 0.15 {
            MuExpr::mu(go(rng, n - 1, lams, mus + 1, unguarded + 1))
        } else if roll < 0.5 || n == 2 {
            MuExpr::lam(go(rng, n - 1, lams + 1, mus, 0))
        } else {
            let left = rng.gen_range(1..n - 1);
            MuExpr::app(
                go(rng, left, lams, mus, 0),
                go(rng, n - 1 - left, lams, mus, 0),
            )
        }
    }
    MuExpr::mu(go(rng, size.max(2) - 1, 0, 1, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::mu::check_guarded;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;

    #[test]
    fn all_named_terms_parse() {
        for (name, _, _) in NAMED {
            assert!(named(name).is_some(), "{name}");
        }
    }

    #[test]
    fn random_terms_are_closed_and_sized() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
        for _ in 0..200 {
            let t = random_closed(&mut rng, 1, 15);
            assert!(t.size() <= 15);
            assert!(closed(&t, 0), "{t}");
        }
    }

    #[test]
    fn random_mu_expressions_are_guarded() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(2);
        for _ in 0..500 {
            let e = random_mu(&mut rng, 12);
            check_guarded(&e).unwrap();
        }
    }

    fn closed(t: &FiniteTerm, depth: u32) -> bool {
        match t {
            FiniteTerm::Var { i } => *i < depth,
            FiniteTerm::Lam { b } => closed(b, depth + 1),
            FiniteTerm::App { f, a } => closed(f, depth) && closed(a, depth),
            _ => true,
        }
    }
}
