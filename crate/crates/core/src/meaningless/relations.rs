use super::Oracle;
use crate::term::{Coterm, Node, Tri};

/// Congruence step shared by both deciders: equal roots and related children.
fn congruent(
    t: &Coterm,
    s: &Coterm,
    n: usize,
    rel: &dyn Fn(&Coterm, &Coterm, usize) -> Tri,
) -> Tri {
    match (t.root(), s.root()) {
        (Node::App(f1, a1), Node::App(f2, a2)) => {
            let first = rel(f1, f2, n - 1);
            if first.is_no() {
                return Tri::No;
            }
            first.and(rel(a1, a2, n - 1))
        }
        (Node::Lam(b1), Node::Lam(b2)) => rel(b1, b2, n - 1),
        (x, y) => Tri::from_bool(x.children().is_empty() && x.kind() == y.kind()),
    }
}

/// Depth-`n` approximation of `t ∼U s`: at each node either both sides are
/// meaningless or the roots agree and the children are related.
pub fn sim_u_up_to(t: &Coterm, s: &Coterm, n: usize, o: &Oracle) -> Tri {
    if n == 0 {
        return Tri::Yes;
    }
    let rel = |a: &Coterm, b: &Coterm, m: usize| sim_u_up_to(a, b, m, o);
    let cong = congruent(t, s, n, &rel);
    if cong.is_yes() {
        return cong;
    }
    let left = o.effective(t);
    let both = if left.is_no() {
        left
    } else {
        left.and(o.effective(s))
    };
    both.or(cong)
}

/// Depth-`n` approximation of parallel ⊥-reduction `t ⇒⊥U s`.
pub fn par_bot_up_to(t: &Coterm, s: &Coterm, n: usize, o: &Oracle) -> Tri {
    if n == 0 {
        return Tri::Yes;
    }
    let rel = |a: &Coterm, b: &Coterm, m: usize| par_bot_up_to(a, b, m, o);
    let cong = congruent(t, s, n, &rel);
    if cong.is_yes() {
        return cong;
    }
    let collapse = if s.is_bot() && !t.is_bot() {
        o.effective(t)
    } else {
        Tri::No
    };
    collapse.or(cong)
}
