//! Root normal forms, decided up to a weak-head fuel budget.
//!
//! Fuel counts weak head steps only. By standardisation, weak head
//! reduction is complete for the questions asked here: a term reduces to an
//! abstraction iff it weak-head reduces to one, and infinitary β-reduction
//! coincides with the infinitary closure of weak head reduction.

use crate::reduction::{head_step, HeadStep};
use crate::term::{Coterm, FiniteTerm, Node, Tri};

fn out_of_fuel(fuel: usize) -> Tri {
    Tri::unknown(format!("fuel exhausted after {fuel} weak head steps"))
}

fn spine_too_long() -> Tri {
    Tri::unknown("application spine exceeds search bound")
}

/// Whether `t` is in root normal form.
pub fn is_rnf(t: &Coterm, fuel: usize) -> Tri {
    match t.root() {
        Node::Bot => Tri::No,
        Node::Var(_) | Node::Const(_) | Node::Lam(_) => Tri::Yes,
        Node::App(head, _) => {
            // rnf iff the head never reaches an abstraction.
            let mut cur = head.clone();
            for _ in 0..fuel {
                if matches!(cur.root(), Node::Lam(_)) {
                    return Tri::No;
                }
                match head_step(&cur) {
                    HeadStep::Reduced { term, .. } => cur = term,
                    HeadStep::Stuck => return Tri::Yes,
                    HeadStep::Unbounded => return spine_too_long(),
                }
            }
            match (cur.root(), head_step(&cur)) {
                (Node::Lam(_), _) => Tri::No,
                (_, HeadStep::Stuck) => Tri::Yes,
                (_, HeadStep::Unbounded) => spine_too_long(),
                _ => out_of_fuel(fuel),
            }
        }
    }
}

/// Canonical root normal form: the first rnf on the weak head path.
#[derive(Clone, Debug)]
pub struct CrnfResult {
    pub verdict: Tri,
    pub term: Option<Coterm>,
    pub whnf_steps: usize,
}

/// Follows weak head reduction from `t` for at most `fuel` steps.
///
/// On a weak head path the first root normal form is the weak head normal
/// form (a term whose head still reduces to an abstraction has a weak head
/// redex), so the search stops at the first stuck term. Reaching ⊥ is a
/// definite `No`: such a term is root-active.
pub fn crnf(t: &Coterm, fuel: usize) -> CrnfResult {
    let mut cur = t.clone();
    let mut steps = 0;
    loop {
        match cur.root() {
            Node::Bot => {
                return CrnfResult {
                    verdict: Tri::No,
                    term: None,
                    whnf_steps: steps,
                }
            }
            Node::Var(_) | Node::Const(_) | Node::Lam(_) => break,
            Node::App(..) => match head_step(&cur) {
                HeadStep::Stuck => break,
                HeadStep::Unbounded => {
                    return CrnfResult {
                        verdict: spine_too_long(),
                        term: None,
                        whnf_steps: steps,
                    }
                }
                HeadStep::Reduced { term, .. } => {
                    if steps == fuel {
                        return CrnfResult {
                            verdict: out_of_fuel(fuel),
                            term: None,
                            whnf_steps: steps,
                        };
                    }
                    cur = term;
                    steps += 1;
                }
            },
        }
    }
    CrnfResult {
        verdict: Tri::Yes,
        term: Some(cur),
        whnf_steps: steps,
    }
}

/// `Yes` when an rnf is found within fuel. `No` only when weak head
/// reduction reaches ⊥ itself; otherwise failure is reported as `Unknown`.
pub fn has_rnf(t: &Coterm, fuel: usize) -> Tri {
    crnf(t, fuel).verdict
}

/// Depth-`n` shadow of `s →∞β t`, searched along weak head reductions.
pub fn inf_beta_up_to(s: &Coterm, t: &Coterm, n: usize, fuel: usize) -> Tri {
    inf_beta_witness(s, t, n, fuel).0
}

/// As [`inf_beta_up_to`], also returning on `Yes` the shape assembled from
/// the matched weak-head reducts (it equals `truncate(t, n)`).
pub fn inf_beta_witness(
    s: &Coterm,
    t: &Coterm,
    n: usize,
    fuel: usize,
) -> (Tri, Option<FiniteTerm>) {
    if n == 0 {
        return (Tri::Yes, Some(FiniteTerm::Bot));
    }
    let target = t.root();
    let mut cur = s.clone();
    let mut steps = 0;
    let mut pending: Option<Tri> = None;
    loop {
        match (cur.root(), target) {
            (Node::Lam(b), Node::Lam(tb)) => {
                // Abstractions have no weak head step; this is the last candidate.
                let (v, w) = inf_beta_witness(b, tb, n - 1, fuel);
                return match v {
                    Tri::Yes => (Tri::Yes, w.map(FiniteTerm::lam)),
                    Tri::No => (pending.unwrap_or(Tri::No), None),
                    unknown => (unknown, None),
                };
            }
            (Node::App(f, a), Node::App(tf, ta)) => {
                let (vf, wf) = inf_beta_witness(f, tf, n - 1, fuel);
                if !vf.is_no() {
                    let (va, wa) = inf_beta_witness(a, ta, n - 1, fuel);
                    match (vf, va) {
                        (Tri::Yes, Tri::Yes) => {
                            let w = wf.zip(wa).map(|(f, a)| FiniteTerm::app(f, a));
                            return (Tri::Yes, w);
                        }
                        (_, Tri::No) => {}
                        (Tri::Unknown(r), _) | (_, Tri::Unknown(r)) => {
                            pending = Some(Tri::Unknown(r))
                        }
                        _ => {}
                    }
                }
            }
            (x, y) if x.children().is_empty() && x.kind() == y.kind() => {
                return (Tri::Yes, Some(cur.truncate(1)));
            }
            _ => {}
        }
        match head_step(&cur) {
            HeadStep::Reduced { term, .. } if steps < fuel => {
                cur = term;
                steps += 1;
            }
            HeadStep::Reduced { .. } => return (out_of_fuel(fuel), None),
            HeadStep::Stuck => return (pending.unwrap_or(Tri::No), None),
            HeadStep::Unbounded => return (spine_too_long(), None),
        }
    }
}
