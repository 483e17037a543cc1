use super::nu::{nu_tree, NuTree, Provenance};
use super::BohmError;
use crate::meaningless::Oracle;
use crate::reduction::{head_step, HeadStep, ReductionError, RuleTag, Trace};
use crate::term::{Coterm, Tri};

/// A β⊥-reduction from `t` whose result agrees with the N-tree of `t` above
/// `depth`.
pub fn nu_to_sequence(t: &Coterm, o: &Oracle, depth: usize) -> Result<Trace, BohmError> {
    tree_to_sequence(&nu_tree(t, o), depth)
}

/// Flattens the derivation of `tree` in breadth order: for each node above
/// `depth`, the weak head steps to its root normal form at its position, or
/// the ⊥-step that collapses it. Nodes at depth `d` are handled before
/// nodes at depth `d + 1`; a weak head step may still sit below its node,
/// on the spine.
pub fn tree_to_sequence(tree: &NuTree, depth: usize) -> Result<Trace, BohmError> {
    let mut trace = Trace::new(tree.source().clone());
    for node_tree in tree.nodes_up_to(depth)? {
        let node = node_tree.node()?;
        let p = node_tree.position();
        let current = trace
            .end()
            .subterm(p)
            .ok_or_else(|| ReductionError::InvalidTrace(format!("lost position {p}")))?;
        match &node.provenance {
            Provenance::BottomByOracle | Provenance::BottomAssumed { .. } => {
                if !current.is_bot() {
                    let verdict = match &node.provenance {
                        Provenance::BottomByOracle => Tri::Yes,
                        Provenance::BottomAssumed { reason } => Tri::Unknown(reason.clone()),
                        Provenance::Structural { .. } => unreachable!(),
                    };
                    trace.push(p.clone(), RuleTag::BotU, Some(verdict))?;
                }
            }
            Provenance::Structural { whnf_steps } => {
                let mut cur = current;
                for _ in 0..*whnf_steps {
                    let HeadStep::Reduced { term, position } = head_step(&cur) else {
                        return Err(ReductionError::InvalidTrace(format!(
                            "weak head path at {p} ended early"
                        ))
                        .into());
                    };
                    trace.push(p.join(&position), RuleTag::Beta, None)?;
                    cur = term;
                }
            }
        }
    }
    Ok(trace)
}
