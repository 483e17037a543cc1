//! Guarded μ-expressions: finite descriptions of regular infinite terms.
//!
//! `from_mu` compiles an expression into a lazy coterm that unfolds μ-binders
//! on demand. `corec_iterate` is the independent reference: it builds the
//! `|p|+1`-th approximant of the defining equations from an arbitrary seed and
//! reads off the constructor at `p`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::coterm::{Coterm, Generator, Node, NodeKind};
use super::finite::FiniteTerm;
use super::position::Position;
use super::shift::lift;

/// A λ-term with μ-binders. λ-indices and μ-indices are separate de Bruijn
/// spaces: `Var(i)` counts enclosing `Lam`s, `MuVar(k)` counts enclosing `Mu`s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MuExpr {
    Var(u32),
    Const(Arc<str>),
    Bot,
    App(Box<MuExpr>, Box<MuExpr>),
    Lam(Box<MuExpr>),
    Mu(Box<MuExpr>),
    MuVar(u32),
}

impl MuExpr {
    pub fn app(f: MuExpr, a: MuExpr) -> Self {
        MuExpr::App(Box::new(f), Box::new(a))
    }

    pub fn lam(b: MuExpr) -> Self {
        MuExpr::Lam(Box::new(b))
    }

    pub fn mu(b: MuExpr) -> Self {
        MuExpr::Mu(Box::new(b))
    }

    pub fn constant(name: &str) -> Self {
        MuExpr::Const(name.into())
    }

    pub fn size(&self) -> usize {
        match self {
            MuExpr::App(f, a) => 1 + f.size() + a.size(),
            MuExpr::Lam(b) | MuExpr::Mu(b) => 1 + b.size(),
            _ => 1,
        }
    }

    /// Largest `|p|` over positions of the expression tree; μ-binders count.
    pub fn height(&self) -> usize {
        match self {
            MuExpr::App(f, a) => 1 + f.height().max(a.height()),
            MuExpr::Lam(b) | MuExpr::Mu(b) => 1 + b.height(),
            _ => 0,
        }
    }
}

impl From<&FiniteTerm> for MuExpr {
    fn from(t: &FiniteTerm) -> Self {
        match t {
            FiniteTerm::Var { i } => MuExpr::Var(*i),
            FiniteTerm::Const { n } => MuExpr::Const(n.clone()),
            FiniteTerm::Bot => MuExpr::Bot,
            FiniteTerm::App { f, a } => MuExpr::app(f.as_ref().into(), a.as_ref().into()),
            FiniteTerm::Lam { b } => MuExpr::lam(b.as_ref().into()),
        }
    }
}

impl fmt::Display for MuExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuExpr::Var(i) => write!(f, "Var {i}"),
            MuExpr::Const(c) => write!(f, "Const {c}"),
            MuExpr::Bot => f.write_str("Bot"),
            MuExpr::App(g, a) => write!(f, "App({g}, {a})"),
            MuExpr::Lam(b) => write!(f, "Lam({b})"),
            MuExpr::Mu(b) => write!(f, "Mu({b})"),
            MuExpr::MuVar(k) => write!(f, "MuVar {k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GuardednessError {
    /// A μ-variable occurs without a constructor between it and its binder.
    #[error("unguarded recursion variable at path `{path}`")]
    Unguarded { path: String },
    #[error("unbound recursion variable {index} at path `{path}`")]
    Unbound { index: u32, path: String },
}

/// Checks that every μ-variable lies strictly beneath an `App` or `Lam`
/// within the body of its binder.
pub fn check_guarded(e: &MuExpr) -> Result<(), GuardednessError> {
    fn go(
        e: &MuExpr,
        binders: u32,
        unguarded: u32,
        path: &mut Vec<u8>,
    ) -> Result<(), GuardednessError> {
        let show = |path: &[u8]| Position::from_indices(path.iter().copied()).to_string();
        match e {
            MuExpr::Var(_) | MuExpr::Const(_) | MuExpr::Bot => Ok(()),
            MuExpr::MuVar(k) if *k >= binders => Err(GuardednessError::Unbound {
                index: *k,
                path: show(path),
            }),
            MuExpr::MuVar(k) if *k < unguarded => {
                Err(GuardednessError::Unguarded { path: show(path) })
            }
            MuExpr::MuVar(_) => Ok(()),
            MuExpr::App(f, a) => {
                path.push(0);
                go(f, binders, 0, path)?;
                path.pop();
                path.push(1);
                go(a, binders, 0, path)?;
                path.pop();
                Ok(())
            }
            MuExpr::Lam(b) => {
                path.push(0);
                go(b, binders, 0, path)?;
                path.pop();
                Ok(())
            }
            MuExpr::Mu(b) => {
                path.push(0);
                go(b, binders + 1, unguarded + 1, path)?;
                path.pop();
                Ok(())
            }
        }
    }
    go(e, 0, 0, &mut Vec::new())
}

enum Shape {
    Var(u32),
    Const(Arc<str>),
    Bot,
    App(Arc<Compiled>, Arc<Compiled>),
    Lam(Arc<Compiled>),
    Mu(Arc<Compiled>),
    MuVar(u32),
}

struct Compiled {
    shape: Shape,
    /// Whether the subexpression has free λ-indices.
    open: bool,
}

fn compile(e: &MuExpr) -> Arc<Compiled> {
    // `lam_free` = 1 + largest free λ-index (0 when closed).
    fn go(e: &MuExpr) -> (Arc<Compiled>, u32) {
        let (shape, lam_free) = match e {
            MuExpr::Var(i) => (Shape::Var(*i), i + 1),
            MuExpr::Const(c) => (Shape::Const(c.clone()), 0),
            MuExpr::Bot => (Shape::Bot, 0),
            MuExpr::MuVar(k) => (Shape::MuVar(*k), 0),
            MuExpr::App(f, a) => {
                let (f, ff) = go(f);
                let (a, fa) = go(a);
                (Shape::App(f, a), ff.max(fa))
            }
            MuExpr::Lam(b) => {
                let (b, fb) = go(b);
                (Shape::Lam(b), fb.saturating_sub(1))
            }
            MuExpr::Mu(b) => {
                let (b, fb) = go(b);
                (Shape::Mu(b), fb)
            }
        };
        (
            Arc::new(Compiled {
                shape,
                open: lam_free > 0,
            }),
            lam_free,
        )
    }
    go(e).0
}

struct Frame {
    binder: Arc<Compiled>,
    lam_depth: u32,
    outer: Env,
}

type Env = Option<Arc<Frame>>;

/// A compiled subexpression in a μ-environment, at a given λ-depth.
struct MuClosure {
    node: Arc<Compiled>,
    env: Env,
    lam_depth: u32,
}

impl MuClosure {
    fn coterm(node: &Arc<Compiled>, env: &Env, lam_depth: u32) -> Coterm {
        Coterm::lazy(MuClosure {
            node: node.clone(),
            env: env.clone(),
            lam_depth,
        })
    }
}

impl Generator for MuClosure {
    fn unfold(&self) -> Node {
        unfold(&self.node, &self.env, self.lam_depth)
    }
}

fn unfold(node: &Arc<Compiled>, env: &Env, lam_depth: u32) -> Node {
    match &node.shape {
        Shape::Var(i) => Node::Var(*i),
        Shape::Const(c) => Node::Const(c.clone()),
        Shape::Bot => Node::Bot,
        Shape::App(f, a) => Node::App(
            MuClosure::coterm(f, env, lam_depth),
            MuClosure::coterm(a, env, lam_depth),
        ),
        Shape::Lam(b) => Node::Lam(MuClosure::coterm(b, env, lam_depth + 1)),
        Shape::Mu(body) => {
            let frame = Arc::new(Frame {
                binder: node.clone(),
                lam_depth,
                outer: env.clone(),
            });
            unfold(body, &Some(frame), lam_depth)
        }
        Shape::MuVar(k) => {
            let mut frame = env.as_ref().expect("checked: μ-variable is bound");
            for _ in 0..*k {
                frame = frame.outer.as_ref().expect("checked: μ-variable is bound");
            }
            let crossed = lam_depth - frame.lam_depth;
            if frame.binder.open && crossed > 0 {
                // The binder's free λ-indices must skip the λs crossed since it.
                let closure = MuClosure::coterm(&frame.binder, &frame.outer, frame.lam_depth);
                lift(&closure, 0, crossed).root().clone()
            } else {
                unfold(&frame.binder, &frame.outer, frame.lam_depth)
            }
        }
    }
}

/// Compiles a guarded μ-expression into the unique coterm solving its equations.
pub fn from_mu(e: &MuExpr) -> Result<Coterm, GuardednessError> {
    check_guarded(e)?;
    Ok(MuClosure::coterm(&compile(e), &None, 0))
}

/// The `iterations`-th approximant of `e` started from `seed`, cut at `depth`.
///
/// Every μ-binder `μX.b` is replaced by `f_iterations`, where `f_0 = seed`
/// and `f_{i+1} = b[f_i/X]`, using eager finite substitution.
pub fn approximant(
    e: &MuExpr,
    iterations: usize,
    seed: &FiniteTerm,
    depth: usize,
) -> Result<FiniteTerm, GuardednessError> {
    check_guarded(e)?;
    let mut env = Vec::new();
    Ok(approx(e, &mut env, 0, depth, iterations, seed))
}

fn approx(
    e: &MuExpr,
    env: &mut Vec<(FiniteTerm, u32)>,
    lam_depth: u32,
    depth_left: usize,
    iterations: usize,
    seed: &FiniteTerm,
) -> FiniteTerm {
    if depth_left == 0 {
        return FiniteTerm::Bot;
    }
    match e {
        MuExpr::Var(i) => FiniteTerm::var(*i),
        MuExpr::Const(c) => FiniteTerm::constant(c.clone()),
        MuExpr::Bot => FiniteTerm::Bot,
        MuExpr::App(f, a) => FiniteTerm::app(
            approx(f, env, lam_depth, depth_left - 1, iterations, seed),
            approx(a, env, lam_depth, depth_left - 1, iterations, seed),
        ),
        MuExpr::Lam(b) => FiniteTerm::lam(approx(
            b,
            env,
            lam_depth + 1,
            depth_left - 1,
            iterations,
            seed,
        )),
        MuExpr::Mu(body) => {
            let mut value = seed.truncate(depth_left);
            for _ in 0..iterations {
                env.push((value, lam_depth));
                let next = approx(body, env, lam_depth, depth_left, iterations, seed);
                env.pop();
                value = next;
            }
            value
        }
        MuExpr::MuVar(k) => {
            let (value, binder_depth) = &env[env.len() - 1 - *k as usize];
            value
                .shifted(0, lam_depth - binder_depth)
                .truncate(depth_left)
        }
    }
}

/// Constructor at `p` computed from the `|p|+1`-th approximant (seed ⊥).
pub fn corec_iterate(e: &MuExpr, p: &Position) -> Result<NodeKind, GuardednessError> {
    corec_iterate_with_seed(e, p, &FiniteTerm::Bot)
}

/// As [`corec_iterate`] with an explicit seed. Returns `Bot` for positions
/// outside the term only when the approximant itself ends there; callers
/// compare against `Coterm::node_at`, which yields `None` in that case.
pub fn corec_iterate_with_seed(
    e: &MuExpr,
    p: &Position,
    seed: &FiniteTerm,
) -> Result<NodeKind, GuardednessError> {
    let n = p.depth() + 1;
    let approx = approximant(e, n, seed, n)?;
    Ok(approx.node_at(p).unwrap_or(NodeKind::Bot))
}

/// Like [`corec_iterate`] but distinguishes positions that leave the term.
pub fn corec_node_at(
    e: &MuExpr,
    p: &Position,
    seed: &FiniteTerm,
) -> Result<Option<NodeKind>, GuardednessError> {
    let n = p.depth() + 1;
    Ok(approximant(e, n, seed, n)?.node_at(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ogre() -> MuExpr {
        MuExpr::mu(MuExpr::lam(MuExpr::MuVar(0)))
    }

    #[test]
    fn ogre_unfolds_to_lambdas() {
        let o = from_mu(&ogre()).unwrap();
        assert_eq!(o.node_at(&"0.0.0".parse().unwrap()), Some(NodeKind::Lam));
        assert_eq!(o.truncate(2).to_string(), "Lam(Lam(Bot))");
    }

    #[test]
    fn mu_free_is_identity_embedding() {
        let e = MuExpr::lam(MuExpr::Var(0));
        assert_eq!(from_mu(&e).unwrap().truncate(10).to_string(), "Lam(Var 0)");
    }

    #[test]
    fn unguarded_rejected() {
        let err = from_mu(&MuExpr::mu(MuExpr::MuVar(0))).unwrap_err();
        assert_eq!(err, GuardednessError::Unguarded { path: "0".into() });
        let nested = MuExpr::mu(MuExpr::mu(MuExpr::lam(MuExpr::MuVar(1))));
        assert!(from_mu(&nested).is_ok());
        let bad = MuExpr::mu(MuExpr::mu(MuExpr::MuVar(1)));
        assert!(from_mu(&bad).is_err());
        assert!(matches!(
            from_mu(&MuExpr::lam(MuExpr::MuVar(0))),
            Err(GuardednessError::Unbound { .. })
        ));
    }

    #[test]
    fn corec_iterate_examples() {
        assert_eq!(
            corec_iterate(&ogre(), &Position::root()).unwrap(),
            NodeKind::Lam
        );
        assert_eq!(
            corec_iterate(&ogre(), &"0.0".parse().unwrap()).unwrap(),
            NodeKind::Lam
        );
        let stream = MuExpr::mu(MuExpr::app(MuExpr::constant("c"), MuExpr::MuVar(0)));
        assert_eq!(
            corec_iterate(&stream, &"1.1.0".parse().unwrap()).unwrap(),
            NodeKind::Const("c".into())
        );
    }

    #[test]
    fn free_lambda_variables_are_shifted_under_recursion() {
        // λy. μX. λx. y X  unfolds to  λy. λx. y (λx. y (...)) with y's index growing.
        let e = MuExpr::lam(MuExpr::mu(MuExpr::lam(MuExpr::app(
            MuExpr::Var(1),
            MuExpr::MuVar(0),
        ))));
        let t = from_mu(&e).unwrap();
        assert_eq!(t.node_at(&"0.0.0".parse().unwrap()), Some(NodeKind::Var(1)));
        assert_eq!(
            t.node_at(&"0.0.1.0.0".parse().unwrap()),
            Some(NodeKind::Var(2))
        );
        assert_eq!(
            corec_iterate(&e, &"0.0.1.0.0".parse().unwrap()).unwrap(),
            NodeKind::Var(2)
        );
    }
}
