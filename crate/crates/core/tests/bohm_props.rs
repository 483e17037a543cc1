mod common;

use bohm_core::bohm::{
    confluence_check, is_normal_up_to, nu_to_sequence, nu_tree, nu_tree_truncated, prepend_check,
};
use bohm_core::corpus;
use bohm_core::meaningless::Oracle;
use bohm_core::reduction::{check_strong_convergence, reduce, Strategy, StrategyKind};
use bohm_core::term::{Coterm, FiniteTerm};
use common::{co, seeded_term};
use proptest::prelude::*;

fn ra() -> Oracle {
    Oracle::root_active(100)
}

#[test]
fn trees_of_the_corpus_are_normal() {
    let o = ra();
    for (name, _, _) in corpus::NAMED {
        let t = corpus::named(name).unwrap();
        let tree = nu_tree(&t, &o).to_coterm();
        assert!(!is_normal_up_to(&tree, 8, &o).verdict.is_no(), "{name}");
    }
}

#[test]
fn flattening_realizes_the_tree_on_the_corpus() {
    let o = ra();
    for (name, _, _) in corpus::NAMED {
        let t = corpus::named(name).unwrap();
        let tr = nu_to_sequence(&t, &o, 6).unwrap();
        let rep = check_strong_convergence(&tr, 6).unwrap();
        assert!(rep.consistent, "{name}");
        assert_eq!(
            rep.entries[6].limit,
            nu_tree_truncated(&t, &o, 6).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn confluence_on_the_cli_example() {
    let r = confluence_check(
        &corpus::omega(),
        &Strategy::new(StrategyKind::RandomRedex { seed: 7 }),
        &Strategy::new(StrategyKind::LeftmostOutermost),
        8,
        10,
        &ra(),
    )
    .unwrap();
    assert!(r.equal);
    assert_eq!(r.trees[0], FiniteTerm::Bot);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn trees_are_deterministic(seed in any::<u64>(), size in 1usize..15) {
        let t = co(&seeded_term(seed, size, 0));
        let o = ra();
        prop_assert_eq!(nu_tree_truncated(&t, &o, 8).unwrap(), nu_tree_truncated(&t, &o, 8).unwrap());
        // A fresh copy of the same term gives the same tree.
        let u = co(&seeded_term(seed, size, 0));
        prop_assert_eq!(nu_tree_truncated(&u, &o, 8).unwrap(), nu_tree_truncated(&t, &o, 8).unwrap());
    }

    #[test]
    fn trees_are_normal(seed in any::<u64>(), size in 1usize..15) {
        let t = co(&seeded_term(seed, size, 0));
        let o = ra();
        let tree = nu_tree(&t, &o).to_coterm();
        prop_assert!(!is_normal_up_to(&tree, 8, &o).verdict.is_no());
    }

    #[test]
    fn flattened_sequences_converge_to_the_tree(seed in any::<u64>(), size in 1usize..15) {
        let t = co(&seeded_term(seed, size, 0));
        let o = ra();
        let tr = nu_to_sequence(&t, &o, 6).unwrap();
        let rep = check_strong_convergence(&tr, 6).unwrap();
        prop_assert!(rep.consistent);
        for d in 0..=6 {
            prop_assert_eq!(&rep.entries[d].limit, &nu_tree_truncated(&t, &o, d).unwrap());
        }
    }

    #[test]
    fn prepending_reductions_keeps_the_tree(seed in any::<u64>(), size in 1usize..15) {
        let t = Coterm::app(co(&seeded_term(seed, size, 0)), corpus::i());
        let o = ra();
        let tr = reduce(&t, &Strategy::new(StrategyKind::RandomRedex { seed }), 6, Some(&o));
        let r = prepend_check(&t, &tr, 8, &o).unwrap();
        prop_assert!(r.holds || r.tainted);
    }
}
