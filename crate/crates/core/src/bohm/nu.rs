use std::sync::{Arc, OnceLock};

use serde::Serialize;

use super::BohmError;
use crate::meaningless::{Oracle, UnknownPolicy};
use crate::rnf::crnf;
use crate::term::{Coterm, FiniteTerm, Generator, Node, NodeKind, Position, Tri};

/// Why a node of the tree has its label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// ⊥ because the oracle answered `Yes`.
    BottomByOracle,
    /// ⊥ because an `Unknown` verdict was taken as membership.
    BottomAssumed { reason: String },
    /// The root of the canonical root normal form, reached in `whnf_steps`
    /// weak head steps. A ⊥ label here means weak head reduction hit ⊥.
    Structural { whnf_steps: usize },
}

/// One computed node of an N-tree.
#[derive(Debug)]
pub struct NuNode {
    pub kind: NodeKind,
    pub provenance: Provenance,
    pub children: Vec<NuTree>,
}

struct NuCell {
    source: Coterm,
    oracle: Arc<Oracle>,
    position: Position,
    node: OnceLock<Result<NuNode, BohmError>>,
}

/// The lazily computed N-normal form of a term: its Böhm-like tree for the
/// oracle's set of meaningless terms.
///
/// Each node is computed at most once and shared by everything holding the
/// tree, so truncation, flattening and normal-form checks reuse the same
/// root normal form searches.
#[derive(Clone)]
pub struct NuTree(Arc<NuCell>);

impl std::fmt::Debug for NuTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.truncate(6) {
            Ok(t) => write!(f, "NuTree({t})"),
            Err(e) => write!(f, "NuTree(<{e}>)"),
        }
    }
}

pub fn nu_tree(t: &Coterm, o: &Oracle) -> NuTree {
    NuTree::at(t.clone(), Arc::new(o.clone()), Position::root())
}

/// `truncate(nu_tree(t, o), depth)`.
pub fn nu_tree_truncated(t: &Coterm, o: &Oracle, depth: usize) -> Result<FiniteTerm, BohmError> {
    nu_tree(t, o).truncate(depth)
}

impl NuTree {
    fn at(source: Coterm, oracle: Arc<Oracle>, position: Position) -> Self {
        NuTree(Arc::new(NuCell {
            source,
            oracle,
            position,
            node: OnceLock::new(),
        }))
    }

    /// The subterm of the input this node was computed from.
    pub fn source(&self) -> &Coterm {
        &self.0.source
    }

    pub fn position(&self) -> &Position {
        &self.0.position
    }

    pub fn oracle(&self) -> &Oracle {
        &self.0.oracle
    }

    pub fn node(&self) -> Result<&NuNode, BohmError> {
        self.0
            .node
            .get_or_init(|| self.compute())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn compute(&self) -> Result<NuNode, BohmError> {
        let o = &*self.0.oracle;
        let t = &self.0.source;
        let bottom = |provenance| NuNode {
            kind: NodeKind::Bot,
            provenance,
            children: Vec::new(),
        };
        let verdict = o.membership(t);
        match &verdict {
            Tri::Yes => return Ok(bottom(Provenance::BottomByOracle)),
            Tri::Unknown(reason) if o.policy == UnknownPolicy::AssumeMeaningless => {
                return Ok(bottom(Provenance::BottomAssumed {
                    reason: reason.clone(),
                }))
            }
            _ => {}
        }
        let r = crnf(t, o.fuel);
        match (r.verdict, r.term) {
            (Tri::Yes, Some(rnf)) => {
                let root = rnf.root();
                let children = root
                    .children()
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| {
                        NuTree::at(
                            c.clone(),
                            self.0.oracle.clone(),
                            self.0.position.child(i as u8),
                        )
                    })
                    .collect();
                Ok(NuNode {
                    kind: root.kind(),
                    provenance: Provenance::Structural {
                        whnf_steps: r.whnf_steps,
                    },
                    children,
                })
            }
            (Tri::No, _) => Ok(bottom(Provenance::Structural {
                whnf_steps: r.whnf_steps,
            })),
            (Tri::Unknown(reason), _) => match o.policy {
                UnknownPolicy::AssumeMeaningless => {
                    Ok(bottom(Provenance::BottomAssumed { reason }))
                }
                UnknownPolicy::Strict => Err(BohmError::FuelExhausted {
                    position: self.0.position.clone(),
                    reason,
                }),
            },
            (Tri::Yes, None) => unreachable!("crnf returns a term with Yes"),
        }
    }

    pub fn child(&self, i: u8) -> Result<Option<&NuTree>, BohmError> {
        Ok(self.node()?.children.get(i as usize))
    }

    pub fn subtree(&self, p: &Position) -> Result<Option<NuTree>, BohmError> {
        let mut cur = self.clone();
        for &i in p.indices() {
            match cur.child(i)? {
                Some(c) => cur = c.clone(),
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    pub fn truncate(&self, n: usize) -> Result<FiniteTerm, BohmError> {
        if n == 0 {
            return Ok(FiniteTerm::Bot);
        }
        let node = self.node()?;
        Ok(match &node.kind {
            NodeKind::Var(i) => FiniteTerm::var(*i),
            NodeKind::Const(c) => FiniteTerm::constant(c.clone()),
            NodeKind::Bot => FiniteTerm::Bot,
            NodeKind::App => FiniteTerm::app(
                node.children[0].truncate(n - 1)?,
                node.children[1].truncate(n - 1)?,
            ),
            NodeKind::Lam => FiniteTerm::lam(node.children[0].truncate(n - 1)?),
        })
    }

    /// Nodes at depth `< n` in breadth-first order (by depth, then left to
    /// right).
    pub fn nodes_up_to(&self, n: usize) -> Result<Vec<NuTree>, BohmError> {
        let mut out = Vec::new();
        let mut layer = vec![self.clone()];
        for _ in 0..n {
            let mut next = Vec::new();
            for t in &layer {
                next.extend(t.node()?.children.iter().cloned());
            }
            out.append(&mut layer);
            layer = next;
        }
        Ok(out)
    }

    /// True if some node at depth `< n` is ⊥ only by assumption.
    pub fn assumed_within(&self, n: usize) -> Result<bool, BohmError> {
        Ok(self.nodes_up_to(n)?.iter().any(|t| {
            matches!(
                t.0.node.get(),
                Some(Ok(NuNode {
                    provenance: Provenance::BottomAssumed { .. },
                    ..
                }))
            )
        }))
    }

    /// `(position, label, provenance)` for every node at depth `< n`.
    pub fn provenance_up_to(
        &self,
        n: usize,
    ) -> Result<Vec<(Position, NodeKind, Provenance)>, BohmError> {
        self.nodes_up_to(n)?
            .into_iter()
            .map(|t| {
                let node = t.node()?;
                Ok((
                    t.position().clone(),
                    node.kind.clone(),
                    node.provenance.clone(),
                ))
            })
            .collect()
    }

    /// The tree as a coterm. Nodes whose computation fails read as ⊥.
    pub fn to_coterm(&self) -> Coterm {
        Coterm::lazy(View(self.clone()))
    }
}

struct View(NuTree);

impl Generator for View {
    fn unfold(&self) -> Node {
        let Ok(node) = self.0.node() else {
            return Node::Bot;
        };
        let child = |i: usize| node.children[i].to_coterm();
        match &node.kind {
            NodeKind::Var(i) => Node::Var(*i),
            NodeKind::Const(c) => Node::Const(c.clone()),
            NodeKind::Bot => Node::Bot,
            NodeKind::App => Node::App(child(0), child(1)),
            NodeKind::Lam => Node::Lam(child(0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::meaningless::OracleKind;
    use crate::syntax::{print_finite, PrintStyle};
    use crate::term::bisim_up_to;

    fn lambdas(d: usize) -> FiniteTerm {
        (0..d).fold(FiniteTerm::Bot, |t, _| FiniteTerm::lam(t))
    }

    #[test]
    fn omega_collapses_by_assumption() {
        let tree = nu_tree(&corpus::omega(), &Oracle::root_active(100));
        let node = tree.node().unwrap();
        assert_eq!(node.kind, NodeKind::Bot);
        assert!(matches!(node.provenance, Provenance::BottomAssumed { .. }));
        assert!(tree.assumed_within(1).unwrap());
    }

    #[test]
    fn m_gives_the_lambda_spine() {
        let o = Oracle::root_active(200);
        assert_eq!(nu_tree_truncated(&corpus::m(), &o, 5).unwrap(), lambdas(5));
        assert_eq!(
            nu_tree_truncated(&corpus::omega_ogre(), &o, 4).unwrap(),
            lambdas(4)
        );
        assert!(!nu_tree(&corpus::m(), &o).assumed_within(12).unwrap());
    }

    #[test]
    fn atoms_and_bot() {
        let o = Oracle::root_active(10);
        let x = Coterm::var(0);
        assert_eq!(nu_tree_truncated(&x, &o, 8).unwrap(), FiniteTerm::var(0));
        let bot_only = Oracle::new(OracleKind::BotOnly, 10, UnknownPolicy::Strict);
        assert_eq!(
            nu_tree_truncated(&Coterm::bot(), &bot_only, 8).unwrap(),
            FiniteTerm::Bot
        );
    }

    #[test]
    fn y_f_unfolds_to_a_tower_of_f() {
        let o = Oracle::root_active(200);
        let t = nu_tree_truncated(&corpus::y_f(), &o, 3).unwrap();
        assert_eq!(
            print_finite(&t, PrintStyle::Named, &["f".into()]),
            "f (f (bot bot))"
        );
        let t = nu_tree_truncated(&corpus::y_f(), &o, 2).unwrap();
        assert_eq!(t.to_string(), "App(Var 0, App(Bot, Bot))");
    }

    #[test]
    fn strict_policy_reports_fuel_exhaustion() {
        let o = Oracle::new(OracleKind::RootActive, 20, UnknownPolicy::Strict);
        let t = Coterm::app(Coterm::var(0), corpus::omega());
        let err = nu_tree_truncated(&t, &o, 4).unwrap_err();
        assert!(
            matches!(err, BohmError::FuelExhausted { ref position, .. } if position.to_string() == "1")
        );
    }

    #[test]
    fn bisimilar_inputs_give_equal_trees() {
        let o = Oracle::root_active(50);
        let ogre = corpus::ogre();
        let a = nu_tree_truncated(&ogre, &o, 10).unwrap();
        let b = nu_tree_truncated(&Coterm::lam(ogre), &o, 10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coterm_view_matches_truncation() {
        let o = Oracle::root_active(100);
        let tree = nu_tree(&corpus::named("K_x_Omega").unwrap(), &o);
        assert!(bisim_up_to(
            &tree.to_coterm(),
            &Coterm::from(&tree.truncate(6).unwrap()),
            6
        ));
        assert_eq!(tree.truncate(6).unwrap(), FiniteTerm::var(0));
    }
}
