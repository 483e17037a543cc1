use serde::Serialize;

use super::nu::nu_tree;
use super::BohmError;
use crate::meaningless::Oracle;
use crate::reduction::{is_beta_redex, reduce, Strategy, Trace};
use crate::term::{Coterm, FiniteTerm, Position, Tri};

/// Verdict of [`is_normal_up_to`], with the first offending position on `No`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalVerdict {
    pub verdict: Tri,
    pub witness: Option<Position>,
}

/// Is `t` in β⊥-normal form above depth `n`? An undecided membership
/// anywhere makes the answer `Unknown`, even when a redex was also seen.
pub fn is_normal_up_to(t: &Coterm, n: usize, o: &Oracle) -> NormalVerdict {
    let mut witness = None;
    let mut unknown = None;
    let mut stack = vec![(t.clone(), Position::root())];
    while let Some((u, p)) = stack.pop() {
        if p.depth() >= n {
            continue;
        }
        if !u.is_bot() {
            match o.membership(&u) {
                Tri::Yes => {
                    witness.get_or_insert(p.clone());
                }
                Tri::Unknown(r) => {
                    unknown.get_or_insert(Tri::Unknown(format!("at {p}: {r}")));
                }
                Tri::No => {}
            }
        }
        if is_beta_redex(&u) {
            witness.get_or_insert(p.clone());
        }
        for (i, c) in u.root().children().into_iter().enumerate().rev() {
            stack.push((c.clone(), p.child(i as u8)));
        }
    }
    match (unknown, witness) {
        (Some(u), _) => NormalVerdict {
            verdict: u,
            witness: None,
        },
        (None, Some(p)) => NormalVerdict {
            verdict: Tri::No,
            witness: Some(p),
        },
        (None, None) => NormalVerdict {
            verdict: Tri::Yes,
            witness: None,
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfluenceReport {
    pub strategies: [String; 2],
    pub k: usize,
    pub depth: usize,
    pub oracle: Oracle,
    /// Steps actually taken by each branch.
    pub steps: [usize; 2],
    pub trees: [FiniteTerm; 2],
    pub equal: bool,
    /// Some ⊥ in either tree or trace rests on an assumed membership.
    pub tainted: bool,
    #[serde(skip)]
    pub traces: [Trace; 2],
}

/// Reduces `t` with two strategies and compares the N-trees of the results.
pub fn confluence_check(
    t: &Coterm,
    s1: &Strategy,
    s2: &Strategy,
    k: usize,
    depth: usize,
    o: &Oracle,
) -> Result<ConfluenceReport, BohmError> {
    let branch = |s: &Strategy| -> Result<(Trace, FiniteTerm, bool), BohmError> {
        let tr = reduce(t, s, k, Some(o));
        let tree = nu_tree(tr.end(), o);
        let fin = tree.truncate(depth)?;
        let tainted = tr.has_assumed_steps() || tree.assumed_within(depth)?;
        Ok((tr, fin, tainted))
    };
    let (tr1, t1, a1) = branch(s1)?;
    let (tr2, t2, a2) = branch(s2)?;
    Ok(ConfluenceReport {
        strategies: [s1.kind.to_string(), s2.kind.to_string()],
        k,
        depth,
        oracle: o.clone(),
        steps: [tr1.len(), tr2.len()],
        equal: t1 == t2,
        trees: [t1, t2],
        tainted: a1 || a2,
        traces: [tr1, tr2],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PrependReport {
    pub holds: bool,
    pub tainted: bool,
    pub start_tree: FiniteTerm,
    pub end_tree: FiniteTerm,
}

/// Compares the N-trees of the two ends of `tr` up to `depth`.
pub fn prepend_check(
    t: &Coterm,
    tr: &Trace,
    depth: usize,
    o: &Oracle,
) -> Result<PrependReport, BohmError> {
    if !crate::term::bisim_up_to(t, &tr.start, depth + 2) {
        return Err(crate::reduction::ReductionError::InvalidTrace(
            "trace does not start at the given term".into(),
        )
        .into());
    }
    tr.validate(depth + 2)?;
    let a = nu_tree(t, o);
    let b = nu_tree(tr.end(), o);
    let start_tree = a.truncate(depth)?;
    let end_tree = b.truncate(depth)?;
    Ok(PrependReport {
        holds: start_tree == end_tree,
        tainted: tr.has_assumed_steps() || a.assumed_within(depth)? || b.assumed_within(depth)?,
        start_tree,
        end_tree,
    })
}
