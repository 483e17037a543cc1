use std::collections::BTreeSet;

use super::step::RuleTag;
use super::trace::Trace;
use super::ReductionError;
use crate::term::{Coterm, Node, Position, Tri};

/// Positions below this depth are not tracked when ⊥-positions are copied
/// through a substitution.
const OCCURRENCE_DEPTH: usize = 64;
/// Bound on nodes visited per search for occurrences of a bound variable.
const OCCURRENCE_BUDGET: usize = 1 << 16;

/// Result of moving all ⊥-steps of a trace to its end.
#[derive(Clone, Debug)]
pub struct Postponed {
    /// Pure β-trace from the original start to `certificate.0`.
    pub beta_trace: Trace,
    /// `(r, end)` with `r ⇒⊥ end` by one parallel ⊥-step.
    pub certificate: (Coterm, Coterm),
    /// Positions of `r` collapsed by the parallel step, pairwise incomparable.
    pub bot_positions: Vec<Position>,
}

fn invalid(i: usize, why: impl std::fmt::Display) -> ReductionError {
    ReductionError::InvalidTrace(format!("step {i}: {why}"))
}

/// Rearranges `tr` into β-steps followed by one parallel ⊥-step.
///
/// Invariant: the current term of `tr` is the β-end `r` with every position
/// of `bots` replaced by ⊥. A ⊥-step at `q` adds `q` and drops the positions
/// below it. A β-step at `q` is replayed on `r` at `q`; the ⊥-positions move
/// with the contraction: those in the body go up two levels, those in the
/// argument are copied to each occurrence of the bound variable, the others
/// stay.
pub fn postpone_bot(tr: &Trace) -> Result<Postponed, ReductionError> {
    if tr.steps.iter().all(|s| s.rule == RuleTag::Beta) {
        return Ok(Postponed {
            beta_trace: tr.clone(),
            certificate: (tr.end().clone(), tr.end().clone()),
            bot_positions: Vec::new(),
        });
    }
    let mut beta = Trace::new(tr.start.clone());
    let mut bots: BTreeSet<Position> = BTreeSet::new();
    for (i, step) in tr.steps.iter().enumerate() {
        let q = &step.position;
        if let Some(p) = bots.iter().find(|p| p.is_prefix_of(q)) {
            return Err(invalid(i, format!("position {q} lies inside ⊥ at {p}")));
        }
        match step.rule {
            RuleTag::BotU => {
                match &step.verdict {
                    Some(Tri::Yes) | Some(Tri::Unknown(_)) => {}
                    Some(Tri::No) => return Err(invalid(i, "⊥-step on a non-member")),
                    None => return Err(invalid(i, "⊥-step without verdict")),
                }
                bots.retain(|p| !q.is_prefix_of(p));
                bots.insert(q.clone());
            }
            RuleTag::Beta => {
                let redex = beta
                    .end()
                    .subterm(q)
                    .ok_or_else(|| invalid(i, "no such position"))?;
                let body = match redex.root() {
                    Node::App(f, _) => match f.root() {
                        Node::Lam(b) => b.clone(),
                        _ => return Err(invalid(i, "not a β-redex")),
                    },
                    _ => return Err(invalid(i, "not a β-redex")),
                };
                let body_at = q.child(0).child(0);
                let arg_at = q.child(1);
                let body_bots: Vec<Position> = bots
                    .iter()
                    .filter_map(|p| p.strip_prefix(&body_at))
                    .collect();
                let occurrences = bound_occurrences(&body, &body_bots);
                let mut next = BTreeSet::new();
                for p in &bots {
                    if let Some(u) = p.strip_prefix(&body_at) {
                        next.insert(q.join(&u));
                    } else if let Some(v) = p.strip_prefix(&arg_at) {
                        for w in &occurrences {
                            next.insert(q.join(w).join(&v));
                        }
                    } else if !q.is_prefix_of(p) {
                        next.insert(p.clone());
                    }
                }
                bots = next;
                beta.push(q.clone(), RuleTag::Beta, None)
                    .map_err(|e| invalid(i, e))?;
            }
        }
    }
    let bot_positions: Vec<Position> = bots.into_iter().collect();
    Ok(Postponed {
        certificate: (beta.end().clone(), tr.end().clone()),
        beta_trace: beta,
        bot_positions,
    })
}

/// Positions in `body` of the variable bound just above it, skipping
/// subterms at `skip`.
fn bound_occurrences(body: &Coterm, skip: &[Position]) -> Vec<Position> {
    let mut out = Vec::new();
    let mut budget = OCCURRENCE_BUDGET;
    let mut stack = vec![(body.clone(), Position::root(), 0u32)];
    while let Some((t, p, binders)) = stack.pop() {
        if budget == 0 || p.depth() > OCCURRENCE_DEPTH || skip.contains(&p) {
            continue;
        }
        budget -= 1;
        match t.root() {
            Node::Var(k) if *k == binders => out.push(p),
            Node::App(f, a) => {
                stack.push((a.clone(), p.child(1), binders));
                stack.push((f.clone(), p.child(0), binders));
            }
            Node::Lam(b) => stack.push((b.clone(), p.child(0), binders + 1)),
            _ => {}
        }
    }
    out
}

/// `r` with every position in `bots` replaced by ⊥.
pub fn collapse(r: &Coterm, bots: &[Position]) -> Coterm {
    bots.iter().fold(r.clone(), |acc, p| {
        acc.replace_at(p, Coterm::bot()).unwrap_or(acc)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::meaningless::{par_bot_up_to, Oracle};
    use crate::term::bisim_up_to;

    fn i_omega() -> Coterm {
        Coterm::app(corpus::i(), corpus::omega())
    }

    #[test]
    fn bot_step_moves_past_beta() {
        let mut tr = Trace::new(i_omega());
        tr.push(
            "1".parse().unwrap(),
            RuleTag::BotU,
            Some(Tri::unknown("fuel")),
        )
        .unwrap();
        tr.push(Position::root(), RuleTag::Beta, None).unwrap();
        assert!(tr.end().is_bot());
        let out = postpone_bot(&tr).unwrap();
        assert_eq!(out.beta_trace.len(), 1);
        assert!(bisim_up_to(out.beta_trace.end(), &corpus::omega(), 12));
        assert_eq!(out.bot_positions, vec![Position::root()]);
        let o = Oracle::root_active(100);
        assert!(par_bot_up_to(&out.certificate.0, &out.certificate.1, 12, &o).is_yes());
    }

    #[test]
    fn pure_beta_trace_is_unchanged() {
        let tr = crate::reduction::reduce(
            &corpus::m(),
            &crate::reduction::Strategy::new(crate::reduction::StrategyKind::WeakHead),
            3,
            None,
        );
        let out = postpone_bot(&tr).unwrap();
        assert_eq!(out.beta_trace.len(), 3);
        assert!(out.bot_positions.is_empty());
        assert!(out.certificate.0.ptr_eq(tr.end()));
        assert!(out.certificate.1.ptr_eq(tr.end()));
    }

    #[test]
    fn single_bot_step() {
        let t = i_omega();
        let mut tr = Trace::new(t.clone());
        tr.push("1".parse().unwrap(), RuleTag::BotU, Some(Tri::Yes))
            .unwrap();
        let out = postpone_bot(&tr).unwrap();
        assert!(out.beta_trace.is_empty());
        assert!(out.certificate.0.ptr_eq(&t));
        assert!(out.certificate.1.ptr_eq(tr.end()));
    }

    #[test]
    fn argument_bots_are_copied_to_each_occurrence() {
        // (λx. x x) (I Ω) with the argument's Ω collapsed, then the root
        // contracted: ⊥ must appear under both copies.
        let t = Coterm::app(corpus::small_omega(), i_omega());
        let mut tr = Trace::new(t);
        tr.push("1.1".parse().unwrap(), RuleTag::BotU, Some(Tri::Yes))
            .unwrap();
        tr.push(Position::root(), RuleTag::Beta, None).unwrap();
        let out = postpone_bot(&tr).unwrap();
        let shown: Vec<String> = out.bot_positions.iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["0.1", "1.1"]);
        assert!(bisim_up_to(
            &collapse(&out.certificate.0, &out.bot_positions),
            &out.certificate.1,
            16
        ));
    }

    #[test]
    fn rejects_bad_verdicts_and_positions() {
        let mut tr = Trace::new(i_omega());
        tr.push("1".parse().unwrap(), RuleTag::BotU, Some(Tri::No))
            .unwrap();
        assert!(postpone_bot(&tr).is_err());
        tr.steps[0].verdict = None;
        assert!(postpone_bot(&tr).is_err());
    }
}
