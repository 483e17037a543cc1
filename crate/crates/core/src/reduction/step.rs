use std::fmt;

use serde::{Deserialize, Serialize};

use super::subst::subst;
use super::ReductionError;
use crate::meaningless::Oracle;
use crate::term::{Coterm, Node, Position, Tri};

/// Longest application spine `head_step` will walk before giving up.
pub const MAX_SPINE: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleTag {
    #[serde(rename = "beta")]
    Beta,
    /// Collapse of a meaningless subterm to ⊥.
    #[serde(rename = "botU")]
    BotU,
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleTag::Beta => "beta",
            RuleTag::BotU => "botU",
        })
    }
}

/// A redex found by [`redexes`]. β-redexes always carry `Tri::Yes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub position: Position,
    pub rule: RuleTag,
    pub verdict: Tri,
}

/// Outcome of one attempted weak head step.
pub enum HeadStep {
    Reduced {
        term: Coterm,
        position: Position,
    },
    /// No weak head redex: an atom, an abstraction or a stuck application.
    Stuck,
    /// The application spine is longer than [`MAX_SPINE`].
    Unbounded,
}

/// Contracts the weak head redex `(λ.s) t` of `t s1 ... sm`, if any.
pub fn head_step(t: &Coterm) -> HeadStep {
    let mut args = Vec::new();
    let mut cur = t;
    loop {
        match cur.root() {
            Node::App(f, a) => {
                if args.len() == MAX_SPINE {
                    return HeadStep::Unbounded;
                }
                args.push(a);
                cur = f;
            }
            Node::Lam(body) if !args.is_empty() => {
                let first = args.pop().expect("non-empty");
                let position = Position::from_indices(std::iter::repeat_n(0, args.len()));
                let mut term = subst(body, first, 0);
                for a in args.into_iter().rev() {
                    term = Coterm::app(term, a.clone());
                }
                return HeadStep::Reduced { term, position };
            }
            _ => return HeadStep::Stuck,
        }
    }
}

/// One weak head step. Also `None` for spines longer than [`MAX_SPINE`].
pub fn whnf_step(t: &Coterm) -> Option<Coterm> {
    match head_step(t) {
        HeadStep::Reduced { term, .. } => Some(term),
        _ => None,
    }
}

/// Position of the head redex: below the leading abstractions, the weak
/// head redex of the body. Does not look past `max_depth`.
pub fn head_redex_position(t: &Coterm, max_depth: usize) -> Option<Position> {
    let mut prefix = Position::root();
    let mut cur = t.clone();
    loop {
        if prefix.depth() >= max_depth {
            return None;
        }
        match cur.root() {
            Node::Lam(b) => {
                prefix = prefix.child(0);
                cur = b.clone();
            }
            _ => break,
        }
    }
    match head_step(&cur) {
        HeadStep::Reduced { position, .. } => {
            let p = prefix.join(&position);
            (p.depth() < max_depth).then_some(p)
        }
        _ => None,
    }
}

pub fn is_beta_redex(t: &Coterm) -> bool {
    matches!(t.root(), Node::App(f, _) if matches!(f.root(), Node::Lam(_)))
}

/// All redexes at depth `< depth_bound`, in pre-order (leftmost-outermost
/// first; at one position the β-redex precedes the ⊥-redex).
pub fn redexes(t: &Coterm, depth_bound: usize, oracle: Option<&Oracle>) -> Vec<Redex> {
    redexes_bounded(t, depth_bound, oracle, usize::MAX)
}

/// As [`redexes`], visiting at most `max_nodes` nodes.
pub fn redexes_bounded(
    t: &Coterm,
    depth_bound: usize,
    oracle: Option<&Oracle>,
    max_nodes: usize,
) -> Vec<Redex> {
    let mut out = Vec::new();
    let mut budget = max_nodes;
    let mut stack = vec![(t.clone(), Position::root())];
    while let Some((u, p)) = stack.pop() {
        if p.depth() >= depth_bound || budget == 0 {
            continue;
        }
        budget -= 1;
        if is_beta_redex(&u) {
            out.push(Redex {
                position: p.clone(),
                rule: RuleTag::Beta,
                verdict: Tri::Yes,
            });
        }
        if let Some(o) = oracle {
            if !u.is_bot() {
                let verdict = o.membership(&u);
                if !verdict.is_no() {
                    out.push(Redex {
                        position: p.clone(),
                        rule: RuleTag::BotU,
                        verdict,
                    });
                }
            }
        }
        let children = u.root().children();
        for (i, c) in children.into_iter().enumerate().rev() {
            stack.push((c.clone(), p.child(i as u8)));
        }
    }
    out
}

/// Contracts the redex of kind `rule` at `p`. For `BotU` the caller is
/// responsible for the membership verdict; only `t|p ≢ ⊥` is checked here.
pub fn step_at(t: &Coterm, p: &Position, rule: RuleTag) -> Result<Coterm, ReductionError> {
    let not_redex = || ReductionError::NotARedex {
        position: p.clone(),
        rule,
    };
    let sub = t.subterm(p).ok_or_else(not_redex)?;
    let contractum = match (rule, sub.root()) {
        (RuleTag::Beta, Node::App(f, a)) => match f.root() {
            Node::Lam(body) => subst(body, a, 0),
            _ => return Err(not_redex()),
        },
        (RuleTag::Beta, _) => return Err(not_redex()),
        (RuleTag::BotU, Node::Bot) => return Err(not_redex()),
        (RuleTag::BotU, _) => Coterm::bot(),
    };
    Ok(t.replace_at(p, contractum).expect("position checked above"))
}
