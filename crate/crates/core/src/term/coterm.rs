use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::finite::FiniteTerm;
use super::position::Position;

/// Constructor label of a single node, without its children.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// de Bruijn index.
    Var(u32),
    Const(Arc<str>),
    /// The distinguished constant ⊥; never equal to any `Const`.
    Bot,
    App,
    Lam,
}

impl NodeKind {
    pub fn arity(&self) -> usize {
        match self {
            NodeKind::Var(_) | NodeKind::Const(_) | NodeKind::Bot => 0,
            NodeKind::App => 2,
            NodeKind::Lam => 1,
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Var(i) => write!(f, "Var {i}"),
            NodeKind::Const(c) => write!(f, "Const {c}"),
            NodeKind::Bot => f.write_str("Bot"),
            NodeKind::App => f.write_str("App"),
            NodeKind::Lam => f.write_str("Lam"),
        }
    }
}

/// An unfolded root: the constructor together with its child coterms.
#[derive(Clone)]
pub enum Node {
    Var(u32),
    Const(Arc<str>),
    Bot,
    App(Coterm, Coterm),
    Lam(Coterm),
}

impl Node {
    pub fn kind(&self) -> NodeKind {
        match self {
            Node::Var(i) => NodeKind::Var(*i),
            Node::Const(c) => NodeKind::Const(c.clone()),
            Node::Bot => NodeKind::Bot,
            Node::App(..) => NodeKind::App,
            Node::Lam(_) => NodeKind::Lam,
        }
    }

    pub fn child(&self, index: u8) -> Option<&Coterm> {
        match (self, index) {
            (Node::App(f, _), 0) => Some(f),
            (Node::App(_, a), 1) => Some(a),
            (Node::Lam(b), 0) => Some(b),
            _ => None,
        }
    }

    pub fn children(&self) -> Vec<&Coterm> {
        match self {
            Node::App(f, a) => vec![f, a],
            Node::Lam(b) => vec![b],
            _ => Vec::new(),
        }
    }

    /// Rebuilds a node of the same kind over new children.
    /// Panics if `children` does not match the arity.
    pub fn with_children(&self, mut children: Vec<Coterm>) -> Node {
        assert_eq!(children.len(), self.kind().arity(), "arity mismatch");
        match self {
            Node::App(..) => {
                let a = children.pop().unwrap();
                let f = children.pop().unwrap();
                Node::App(f, a)
            }
            Node::Lam(_) => Node::Lam(children.pop().unwrap()),
            other => other.clone(),
        }
    }
}

/// Produces the root of a coterm on demand. Implementations must terminate
/// (productivity) and must not force the coterm that owns them.
pub trait Generator: Send + Sync {
    fn unfold(&self) -> Node;
}

struct Cell {
    node: OnceLock<Node>,
    pending: Mutex<Option<Box<dyn Generator>>>,
}

/// A possibly infinite λ-term over de Bruijn indices.
///
/// Cloning is cheap and shares the underlying node. Roots are unfolded at
/// most once; concurrent callers block on the first unfolding.
#[derive(Clone)]
pub struct Coterm(Arc<Cell>);

impl Coterm {
    pub fn from_node(node: Node) -> Self {
        Coterm(Arc::new(Cell {
            node: OnceLock::from(node),
            pending: Mutex::new(None),
        }))
    }

    /// A coterm whose root is produced by `gen` when first demanded.
    pub fn lazy(gen: impl Generator + 'static) -> Self {
        Coterm(Arc::new(Cell {
            node: OnceLock::new(),
            pending: Mutex::new(Some(Box::new(gen))),
        }))
    }

    pub fn var(index: u32) -> Self {
        Self::from_node(Node::Var(index))
    }

    pub fn constant(name: impl Into<Arc<str>>) -> Self {
        Self::from_node(Node::Const(name.into()))
    }

    pub fn bot() -> Self {
        Self::from_node(Node::Bot)
    }

    pub fn app(f: Coterm, a: Coterm) -> Self {
        Self::from_node(Node::App(f, a))
    }

    pub fn lam(body: Coterm) -> Self {
        Self::from_node(Node::Lam(body))
    }

    pub fn root(&self) -> &Node {
        self.0.node.get_or_init(|| {
            let gen = self
                .0
                .pending
                .lock()
                .unwrap_or_else(|e| e.into_inner())
                .take()
                .expect("coterm generator already consumed");
            gen.unfold()
        })
    }

    pub fn kind(&self) -> NodeKind {
        self.root().kind()
    }

    pub fn is_bot(&self) -> bool {
        matches!(self.root(), Node::Bot)
    }

    /// Address of the shared cell; stable for the lifetime of the value.
    pub fn identity(&self) -> usize {
        Arc::as_ptr(&self.0) as *const () as usize
    }

    pub fn ptr_eq(&self, other: &Coterm) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn subterm(&self, p: &Position) -> Option<Coterm> {
        let mut cur = self.clone();
        for &i in p.indices() {
            let next = cur.root().child(i)?.clone();
            cur = next;
        }
        Some(cur)
    }

    pub fn node_at(&self, p: &Position) -> Option<NodeKind> {
        self.subterm(p).map(|t| t.kind())
    }

    /// Cuts the term at depth `n`: nodes above depth `n` are kept, every
    /// subterm at depth `n` becomes ⊥.
    pub fn truncate(&self, n: usize) -> FiniteTerm {
        if n == 0 {
            return FiniteTerm::Bot;
        }
        match self.root() {
            Node::Var(i) => FiniteTerm::var(*i),
            Node::Const(c) => FiniteTerm::constant(c.clone()),
            Node::Bot => FiniteTerm::Bot,
            Node::App(f, a) => FiniteTerm::app(f.truncate(n - 1), a.truncate(n - 1)),
            Node::Lam(b) => FiniteTerm::lam(b.truncate(n - 1)),
        }
    }

    /// Rebuilds `self` with the subterm at `p` replaced by `replacement`.
    /// Nodes off the path are shared. Returns `None` if `p` leaves the term.
    pub fn replace_at(&self, p: &Position, replacement: Coterm) -> Option<Coterm> {
        fn go(t: &Coterm, path: &[u8], replacement: Coterm) -> Option<Coterm> {
            let Some((&first, rest)) = path.split_first() else {
                return Some(replacement);
            };
            let node = t.root();
            let child = node.child(first)?;
            let new_child = go(child, rest, replacement)?;
            let mut children: Vec<Coterm> = node.children().into_iter().cloned().collect();
            children[first as usize] = new_child;
            Some(Coterm::from_node(node.with_children(children)))
        }
        go(self, p.indices(), replacement)
    }
}

impl From<&FiniteTerm> for Coterm {
    fn from(t: &FiniteTerm) -> Self {
        match t {
            FiniteTerm::Var { i } => Coterm::var(*i),
            FiniteTerm::Const { n } => Coterm::constant(n.clone()),
            FiniteTerm::Bot => Coterm::bot(),
            FiniteTerm::App { f, a } => Coterm::app(f.as_ref().into(), a.as_ref().into()),
            FiniteTerm::Lam { b } => Coterm::lam(b.as_ref().into()),
        }
    }
}

impl From<FiniteTerm> for Coterm {
    fn from(t: FiniteTerm) -> Self {
        Coterm::from(&t)
    }
}

impl fmt::Debug for Coterm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coterm({})", self.truncate(8))
    }
}

/// True iff the truncations of `t` and `s` at depth `n` coincide.
pub fn bisim_up_to(t: &Coterm, s: &Coterm, n: usize) -> bool {
    if n == 0 || t.ptr_eq(s) {
        return true;
    }
    match (t.root(), s.root()) {
        (Node::App(f1, a1), Node::App(f2, a2)) => {
            bisim_up_to(f1, f2, n - 1) && bisim_up_to(a1, a2, n - 1)
        }
        (Node::Lam(b1), Node::Lam(b2)) => bisim_up_to(b1, b2, n - 1),
        (x, y) => x.kind() == y.kind(),
    }
}

/// A distance `2^-k` in the truncation metric, or the bound reported when
/// the terms agree up to the largest depth examined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    /// Exactly `2^-k`: truncations agree at depth `k` and differ at `k + 1`.
    Exact(u32),
    /// At most `2^-max_n`; the true distance may be zero.
    AtMost(u32),
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(k) => write!(f, "2^-{k}"),
            Distance::AtMost(k) => write!(f, "<= 2^-{k}"),
        }
    }
}

impl Distance {
    /// Exponent `k` of the bound `2^-k`.
    pub fn exponent(&self) -> u32 {
        match self {
            Distance::Exact(k) | Distance::AtMost(k) => *k,
        }
    }
}

pub fn metric_dist(t: &Coterm, s: &Coterm, max_n: u32) -> Distance {
    // Truncations are coherent, so the agreeing depths form an initial segment.
    match (1..=max_n).find(|&n| !bisim_up_to(t, s, n as usize)) {
        Some(n) => Distance::Exact(n - 1),
        None => Distance::AtMost(max_n),
    }
}
