use crate::term::{lift, Coterm, Generator, Node};

struct Substituted {
    body: Coterm,
    arg: Coterm,
    index: u32,
}

impl Generator for Substituted {
    fn unfold(&self) -> Node {
        let j = self.index;
        match self.body.root() {
            Node::Var(k) if *k < j => Node::Var(*k),
            Node::Var(k) if *k == j => lift(&self.arg, 0, j).root().clone(),
            Node::Var(k) => Node::Var(k - 1),
            Node::App(f, a) => Node::App(subst(f, &self.arg, j), subst(a, &self.arg, j)),
            Node::Lam(b) => Node::Lam(subst(b, &self.arg, j + 1)),
            other => other.clone(),
        }
    }
}

/// Lazy capture-avoiding substitution of `arg` for index `index` in `body`.
///
/// Indices above `index` are decremented (the binder disappears), so a
/// β-step `(λ.b) a` contracts to `subst(b, a, 0)`.
pub fn subst(body: &Coterm, arg: &Coterm, index: u32) -> Coterm {
    Coterm::lazy(Substituted {
        body: body.clone(),
        arg: arg.clone(),
        index,
    })
}
