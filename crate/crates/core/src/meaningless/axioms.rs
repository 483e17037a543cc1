use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use super::{sim_u_up_to, Oracle, UnknownPolicy};
use crate::corpus::random_closed;
use crate::reduction::{lift, redexes_bounded, step_at, subst, RuleTag};
use crate::rnf::{has_rnf, inf_beta_up_to};
use crate::syntax::{print_truncated, PrintStyle};
use crate::term::{Coterm, Position, Tri};

/// Subterms of corpus terms down to this depth join the sample pool.
const POOL_DEPTH: usize = 2;
const NODE_BUDGET: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Closure,
    Substitution,
    Overlap,
    RootActiveness,
    Indiscernibility,
    Expansion,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::Closure,
        Axiom::Substitution,
        Axiom::Overlap,
        Axiom::RootActiveness,
        Axiom::Indiscernibility,
        Axiom::Expansion,
    ];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Closure => "closure",
            Axiom::Substitution => "substitution",
            Axiom::Overlap => "overlap",
            Axiom::RootActiveness => "root-activeness",
            Axiom::Indiscernibility => "indiscernibility",
            Axiom::Expansion => "expansion",
        })
    }
}

/// A premise the oracle accepts whose conclusion it rejects.
#[derive(Clone, Debug, Serialize)]
pub struct FailWitness {
    pub axiom: Axiom,
    /// Index of the corpus term the instance was built from.
    pub corpus_index: usize,
    /// The premise term, truncated at the check depth.
    pub premise: String,
    /// The term the oracle should have accepted.
    pub conclusion: String,
    pub detail: String,
    /// Command reproducing the whole run.
    pub replay: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomOutcome {
    pub pass_count: usize,
    pub fail_witnesses: Vec<FailWitness>,
    /// Instances where some verdict stayed undecided.
    pub unknown_count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub oracle: Oracle,
    pub depth: usize,
    pub trials: usize,
    pub seed: u64,
    pub members_sampled: usize,
    pub outcomes: Vec<(Axiom, AxiomOutcome)>,
}

impl AxiomReport {
    pub fn outcome(&self, axiom: Axiom) -> &AxiomOutcome {
        &self
            .outcomes
            .iter()
            .find(|(a, _)| *a == axiom)
            .expect("every axiom is checked")
            .1
    }

    pub fn total_failures(&self) -> usize {
        self.outcomes
            .iter()
            .map(|(_, o)| o.fail_witnesses.len())
            .sum()
    }
}

/// How the oracle's verdict on one term is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Class {
    /// Accepted; `definite` is false when accepted only by assumption.
    Member {
        definite: bool,
    },
    NonMember,
    Undecided,
}

fn classify(o: &Oracle, verdict: &Tri) -> Class {
    match verdict {
        Tri::Yes => Class::Member { definite: true },
        Tri::No => Class::NonMember,
        Tri::Unknown(_) => match o.policy {
            UnknownPolicy::AssumeMeaningless => Class::Member { definite: false },
            UnknownPolicy::Strict => Class::Undecided,
        },
    }
}

struct Candidate {
    term: Coterm,
    origin: usize,
    class: Class,
}

struct Checker<'a> {
    o: &'a Oracle,
    n: usize,
    replay: String,
}

impl Checker<'_> {
    fn show(&self, t: &Coterm) -> String {
        print_truncated(t, self.n, PrintStyle::Named)
    }

    /// Records one instance: the premise holds with `definite` certainty and
    /// `conclusion` should be a member.
    #[allow(clippy::too_many_arguments)]
    fn judge(
        &self,
        out: &mut AxiomOutcome,
        axiom: Axiom,
        origin: usize,
        premise: &Coterm,
        definite: bool,
        conclusion: &Coterm,
        detail: impl Into<String>,
    ) {
        match classify(self.o, &self.o.membership(conclusion)) {
            Class::Member { .. } => out.pass_count += 1,
            Class::Undecided => out.unknown_count += 1,
            Class::NonMember if !definite => out.unknown_count += 1,
            Class::NonMember => out.fail_witnesses.push(FailWitness {
                axiom,
                corpus_index: origin,
                premise: self.show(premise),
                conclusion: self.show(conclusion),
                detail: detail.into(),
                replay: self.replay.clone(),
            }),
        }
    }
}

fn random_arg(rng: &mut Xoshiro256PlusPlus) -> Coterm {
    Coterm::from(&random_closed(rng, 1, 6))
}

/// Positions at depth `1..=max_depth` of `t`, in pre-order.
fn inner_positions(t: &Coterm, max_depth: usize) -> Vec<Position> {
    let mut out = Vec::new();
    let mut stack = vec![(t.clone(), Position::root())];
    while let Some((u, p)) = stack.pop() {
        if !p.is_root() {
            out.push(p.clone());
        }
        if p.depth() < max_depth {
            for (i, c) in u.root().children().into_iter().enumerate().rev() {
                stack.push((c.clone(), p.child(i as u8)));
            }
        }
    }
    out
}

/// Spot-checks the meaningless-set axioms for the oracle on terms drawn
/// from `corpus` and its shallow subterms.
///
/// A failure is reported only when the premise verdicts were definite;
/// rejections resting on an assumed membership count as unknown. The
/// root-activeness check treats an undecided root normal form search as
/// root-active, since that is exactly what the oracle is asked to absorb.
pub fn axiom_check(
    o: &Oracle,
    corpus: &[Coterm],
    n: usize,
    trials: usize,
    seed: u64,
) -> AxiomReport {
    let ck = Checker {
        o,
        n,
        replay: format!(
            "bohm axioms --oracle {} --policy {} --fuel {} --depth {} --trials {} --seed {}",
            o.kind,
            match o.policy {
                UnknownPolicy::AssumeMeaningless => "assume",
                UnknownPolicy::Strict => "strict",
            },
            o.fuel,
            n,
            trials,
            seed
        ),
    };
    let mut candidates = Vec::new();
    for (origin, t) in corpus.iter().enumerate() {
        let mut terms = vec![t.clone()];
        terms.extend(
            inner_positions(t, POOL_DEPTH)
                .iter()
                .filter_map(|p| t.subterm(p)),
        );
        for term in terms {
            let class = classify(o, &o.membership(&term));
            candidates.push(Candidate {
                term,
                origin,
                class,
            });
        }
    }
    let members: Vec<&Candidate> = candidates
        .iter()
        .filter(|c| matches!(c.class, Class::Member { .. }))
        .collect();
    let definite = |c: &Candidate| matches!(c.class, Class::Member { definite: true });

    let mut outcomes = Vec::new();
    for (k, axiom) in Axiom::ALL.into_iter().enumerate() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(
            seed ^ (0x9E37_79B9_7F4A_7C15u64.wrapping_mul(k as u64 + 1)),
        );
        let mut out = AxiomOutcome::default();
        match axiom {
            Axiom::RootActiveness => {
                for c in &candidates {
                    let root_active = match has_rnf(&c.term, o.fuel) {
                        Tri::Yes => continue,
                        Tri::No => true,
                        Tri::Unknown(_) => o.policy == UnknownPolicy::AssumeMeaningless,
                    };
                    match c.class {
                        Class::Member { .. } => out.pass_count += 1,
                        Class::Undecided => out.unknown_count += 1,
                        Class::NonMember if !root_active => out.unknown_count += 1,
                        Class::NonMember => out.fail_witnesses.push(FailWitness {
                            axiom,
                            corpus_index: c.origin,
                            premise: ck.show(&c.term),
                            conclusion: ck.show(&c.term),
                            detail: "no root normal form found, but the oracle rejects it".into(),
                            replay: ck.replay.clone(),
                        }),
                    }
                }
            }
            Axiom::Expansion => {
                // Corpus pairs s →∞β t with t a member.
                for (si, s) in corpus.iter().enumerate() {
                    for t in members.iter().filter(|c| c.origin != si) {
                        if inf_beta_up_to(s, &t.term, n, o.fuel).is_yes() {
                            ck.judge(
                                &mut out,
                                axiom,
                                si,
                                &t.term,
                                definite(t),
                                s,
                                "reduces infinitarily to a member",
                            );
                        }
                    }
                }
                sample(&members, trials, &mut rng, |c, rng| {
                    let t = &c.term;
                    let u = random_arg(rng);
                    let s = match rng.gen_range(0..4) {
                        0 => Coterm::app(Coterm::lam(Coterm::var(0)), t.clone()),
                        1 => Coterm::app(Coterm::lam(lift(t, 0, 1)), u),
                        2 => Coterm::app(
                            Coterm::app(Coterm::lam(Coterm::lam(Coterm::var(1))), t.clone()),
                            u,
                        ),
                        _ => {
                            let ps = inner_positions(t, 3);
                            match ps.choose(rng) {
                                Some(p) => {
                                    let sub = t.subterm(p).expect("listed position");
                                    let wrapped = Coterm::app(Coterm::lam(Coterm::var(0)), sub);
                                    t.replace_at(p, wrapped).expect("listed position")
                                }
                                None => Coterm::app(Coterm::lam(Coterm::var(0)), t.clone()),
                            }
                        }
                    };
                    ck.judge(&mut out, axiom, c.origin, t, definite(c), &s, "β-expansion");
                });
            }
            Axiom::Closure => sample(&members, trials, &mut rng, |c, rng| {
                let mut s = c.term.clone();
                let steps = rng.gen_range(1..=3);
                let mut taken = 0;
                for _ in 0..steps {
                    let rs = redexes_bounded(&s, n, None, NODE_BUDGET);
                    let Some(r) = rs.choose(rng) else { break };
                    s = step_at(&s, &r.position, RuleTag::Beta).expect("listed redex");
                    taken += 1;
                }
                if taken == 0 {
                    out.pass_count += 1;
                    return;
                }
                ck.judge(
                    &mut out,
                    axiom,
                    c.origin,
                    &c.term,
                    definite(c),
                    &s,
                    format!("{taken} β-steps"),
                );
            }),
            Axiom::Substitution => sample(&members, trials, &mut rng, |c, rng| {
                let u = random_arg(rng);
                let index = rng.gen_range(0..2);
                let s = subst(&c.term, &u, index);
                ck.judge(
                    &mut out,
                    axiom,
                    c.origin,
                    &c.term,
                    definite(c),
                    &s,
                    format!("substitution for index {index}"),
                );
            }),
            Axiom::Overlap => {
                let lams: Vec<&Candidate> = members
                    .iter()
                    .copied()
                    .filter(|c| matches!(c.term.root(), crate::term::Node::Lam(_)))
                    .collect();
                sample(&lams, trials, &mut rng, |c, rng| {
                    let s = Coterm::app(c.term.clone(), random_arg(rng));
                    ck.judge(
                        &mut out,
                        axiom,
                        c.origin,
                        &c.term,
                        definite(c),
                        &s,
                        "applied member abstraction",
                    );
                });
            }
            Axiom::Indiscernibility => sample(&members, trials, &mut rng, |c, rng| {
                let t = &c.term;
                let mut sure = definite(c);
                let mut s = t.clone();
                // Swap member subterms for other members or ⊥.
                for p in inner_positions(t, 3) {
                    if s.subterm(&p).is_none() || rng.gen_bool(0.5) {
                        continue;
                    }
                    let sub = t.subterm(&p).expect("listed position");
                    let Class::Member { definite: d } = classify(o, &o.membership(&sub)) else {
                        continue;
                    };
                    let replacement = match members.choose(rng) {
                        Some(m) if rng.gen_bool(0.5) && !m.term.ptr_eq(&sub) => {
                            sure &= definite(m);
                            m.term.clone()
                        }
                        _ => Coterm::bot(),
                    };
                    sure &= d;
                    s = s.replace_at(&p, replacement).expect("position exists");
                }
                if sim_u_up_to(t, &s, n, o).is_no() {
                    out.unknown_count += 1;
                    return;
                }
                ck.judge(&mut out, axiom, c.origin, t, sure, &s, "∼U-related partner");
            }),
        }
        outcomes.push((axiom, out));
    }
    AxiomReport {
        oracle: o.clone(),
        depth: n,
        trials,
        seed,
        members_sampled: members.len(),
        outcomes,
    }
}

fn sample<'c, F>(from: &[&'c Candidate], trials: usize, rng: &mut Xoshiro256PlusPlus, mut f: F)
where
    F: FnMut(&'c Candidate, &mut Xoshiro256PlusPlus),
{
    if from.is_empty() {
        return;
    }
    for _ in 0..trials {
        let c = *from.choose(rng).expect("non-empty");
        f(c, rng);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::meaningless::OracleKind;

    fn small_corpus() -> Vec<Coterm> {
        [
            "I",
            "K",
            "Omega",
            "Omega_O",
            "O",
            "head_active",
            "bot_head",
            "I_Omega",
        ]
        .iter()
        .map(|n| corpus::named(n).unwrap())
        .chain([Coterm::bot()])
        .collect()
    }

    #[test]
    fn root_active_oracle_has_no_failures() {
        let r = axiom_check(&Oracle::root_active(100), &small_corpus(), 8, 20, 1);
        assert_eq!(r.total_failures(), 0, "{r:#?}");
        assert!(r.members_sampled > 0);
    }

    #[test]
    fn head_ogre_fails_expansion_on_omega_o() {
        let o = Oracle::new(OracleKind::HeadOgre, 20, UnknownPolicy::AssumeMeaningless);
        let r = axiom_check(&o, &small_corpus(), 8, 10, 1);
        let exp = r.outcome(Axiom::Expansion);
        assert!(exp
            .fail_witnesses
            .iter()
            .any(|w| w.corpus_index == 3 && w.conclusion.starts_with(r"(\x0. \x1. x0 x0)")));
    }

    #[test]
    fn bot_only_fails_root_activeness_on_omega() {
        let o = Oracle::new(OracleKind::BotOnly, 100, UnknownPolicy::AssumeMeaningless);
        let r = axiom_check(&o, &small_corpus(), 8, 10, 1);
        let ra = r.outcome(Axiom::RootActiveness);
        assert!(ra.fail_witnesses.iter().any(|w| w.corpus_index == 2));
    }
}
