use super::coterm::{Coterm, Generator, Node};

struct Lifted {
    term: Coterm,
    cutoff: u32,
    amount: u32,
}

impl Generator for Lifted {
    fn unfold(&self) -> Node {
        let (c, k) = (self.cutoff, self.amount);
        match self.term.root() {
            Node::Var(i) if *i >= c => Node::Var(i + k),
            Node::App(f, a) => Node::App(lift(f, c, k), lift(a, c, k)),
            Node::Lam(b) => Node::Lam(lift(b, c + 1, k)),
            other => other.clone(),
        }
    }
}

/// Lazy de Bruijn shift: free indices `>= cutoff` are increased by `amount`.
pub fn lift(t: &Coterm, cutoff: u32, amount: u32) -> Coterm {
    if amount == 0 {
        return t.clone();
    }
    Coterm::lazy(Lifted {
        term: t.clone(),
        cutoff,
        amount,
    })
}
