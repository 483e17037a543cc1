mod common;

use bohm_core::corpus;
use bohm_core::meaningless::{
    axiom_check, par_bot_up_to, sim_u_up_to, Axiom, Oracle, OracleKind, UnknownPolicy,
};
use bohm_core::term::{Coterm, Node, Tri};
use common::{co, seeded_term};
use proptest::prelude::*;

fn ra() -> Oracle {
    Oracle::root_active(60)
}

/// Puts a root-active term at some positions so that ∼U has work to do.
fn sprinkle(seed: u64, size: usize) -> Coterm {
    let t = seeded_term(seed, size, 0);
    let t = co(&t);
    match t.root() {
        Node::App(f, _) if seed.is_multiple_of(2) => Coterm::app(f.clone(), corpus::omega()),
        _ if seed.is_multiple_of(3) => Coterm::app(corpus::omega(), t),
        _ => t,
    }
}

/// The common ⊥-reduct of two ∼U-related terms: member positions become ⊥.
fn common_reduct(t: &Coterm, s: &Coterm, n: usize, o: &Oracle) -> Coterm {
    if n == 0 {
        return Coterm::bot();
    }
    if o.effective(t).is_yes() && o.effective(s).is_yes() {
        return Coterm::bot();
    }
    match (t.root(), s.root()) {
        (Node::App(f1, a1), Node::App(f2, a2)) => Coterm::app(
            common_reduct(f1, f2, n - 1, o),
            common_reduct(a1, a2, n - 1, o),
        ),
        (Node::Lam(b1), Node::Lam(b2)) => Coterm::lam(common_reduct(b1, b2, n - 1, o)),
        _ => t.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn deciders_are_antitone_in_depth(a in any::<u64>(), b in any::<u64>(), size in 1usize..12, n in 1usize..10) {
        let o = ra();
        let t = sprinkle(a, size);
        let s = if b % 2 == 0 { t.clone() } else { sprinkle(b, size) };
        for m in 0..n {
            if sim_u_up_to(&t, &s, n, &o).is_yes() {
                prop_assert!(sim_u_up_to(&t, &s, m, &o).is_yes());
            }
            if par_bot_up_to(&t, &s, n, &o).is_yes() {
                prop_assert!(par_bot_up_to(&t, &s, m, &o).is_yes());
            }
        }
    }

    #[test]
    fn sim_u_is_transitive(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), size in 1usize..10) {
        let o = ra();
        let [x, y, z] = [a, b, c].map(|s| sprinkle(s, size));
        if sim_u_up_to(&x, &y, 8, &o).is_yes() && sim_u_up_to(&y, &z, 8, &o).is_yes() {
            prop_assert!(!sim_u_up_to(&x, &z, 8, &o).is_no());
        }
    }

    #[test]
    fn related_terms_have_a_common_bot_reduct(a in any::<u64>(), b in any::<u64>(), size in 1usize..10) {
        let o = ra();
        let t = sprinkle(a, size);
        let s = if b % 2 == 0 { t.clone() } else { sprinkle(b, size) };
        if sim_u_up_to(&t, &s, 8, &o).is_yes() {
            let r = common_reduct(&t, &s, 8, &o);
            prop_assert!(par_bot_up_to(&t, &r, 8, &o).is_yes());
            prop_assert!(par_bot_up_to(&s, &r, 8, &o).is_yes());
        }
    }

    #[test]
    fn membership_settles_with_fuel(seed in any::<u64>(), size in 1usize..14) {
        let t = co(&seeded_term(seed, size, 0));
        let mut settled: Option<Tri> = None;
        for fuel in [1, 5, 20, 100] {
            let v = Oracle::root_active(fuel).membership(&t);
            if let Some(s) = &settled {
                prop_assert!(v.same_verdict(s));
            } else if !v.is_unknown() {
                settled = Some(v);
            }
        }
    }
}

#[test]
fn bot_is_a_member_of_every_oracle() {
    for kind in [
        OracleKind::RootActive,
        OracleKind::HeadOgre,
        OracleKind::BotOnly,
    ] {
        for policy in [UnknownPolicy::AssumeMeaningless, UnknownPolicy::Strict] {
            assert!(Oracle::new(kind.clone(), 10, policy)
                .membership(&Coterm::bot())
                .is_yes());
        }
    }
}

#[test]
fn axiom_reports_serialize_with_replay_commands() {
    let o = Oracle::new(OracleKind::BotOnly, 50, UnknownPolicy::AssumeMeaningless);
    let corpus = vec![corpus::omega(), corpus::i()];
    let r = axiom_check(&o, &corpus, 6, 5, 9);
    let w = &r.outcome(Axiom::RootActiveness).fail_witnesses[0];
    assert!(w.replay.starts_with("bohm axioms --oracle bot-only"));
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["seed"], 9);
    assert!(json["outcomes"].as_array().unwrap().len() == 6);
}
