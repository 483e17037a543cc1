use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::coterm::NodeKind;
use super::position::Position;

/// A fully materialized finite term, typically a truncation of a coterm.
///
/// Serializes to the JSON tree `{"k":"lam","b":{"k":"var","i":0}}`;
/// `Display` gives the canonical text `Lam(Var 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "k", rename_all = "lowercase")]
pub enum FiniteTerm {
    Var {
        i: u32,
    },
    Const {
        n: Arc<str>,
    },
    Bot,
    App {
        f: Box<FiniteTerm>,
        a: Box<FiniteTerm>,
    },
    Lam {
        b: Box<FiniteTerm>,
    },
}

impl FiniteTerm {
    pub fn var(i: u32) -> Self {
        FiniteTerm::Var { i }
    }

    pub fn constant(name: impl Into<Arc<str>>) -> Self {
        FiniteTerm::Const { n: name.into() }
    }

    pub fn app(f: FiniteTerm, a: FiniteTerm) -> Self {
        FiniteTerm::App {
            f: Box::new(f),
            a: Box::new(a),
        }
    }

    pub fn lam(b: FiniteTerm) -> Self {
        FiniteTerm::Lam { b: Box::new(b) }
    }

    pub fn kind(&self) -> NodeKind {
        match self {
            FiniteTerm::Var { i } => NodeKind::Var(*i),
            FiniteTerm::Const { n } => NodeKind::Const(n.clone()),
            FiniteTerm::Bot => NodeKind::Bot,
            FiniteTerm::App { .. } => NodeKind::App,
            FiniteTerm::Lam { .. } => NodeKind::Lam,
        }
    }

    pub fn children(&self) -> Vec<&FiniteTerm> {
        match self {
            FiniteTerm::App { f, a } => vec![f, a],
            FiniteTerm::Lam { b } => vec![b],
            _ => Vec::new(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(FiniteTerm::size)
            .sum::<usize>()
    }

    /// Length of the longest root-to-leaf path; a leaf has depth 0.
    pub fn depth(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn node_at(&self, p: &Position) -> Option<NodeKind> {
        let mut cur = self;
        for &i in p.indices() {
            cur = *cur.children().get(i as usize)?;
        }
        Some(cur.kind())
    }

    pub fn contains_bot(&self) -> bool {
        match self {
            FiniteTerm::Bot => true,
            other => other.children().into_iter().any(FiniteTerm::contains_bot),
        }
    }

    /// Eager de Bruijn shift: free indices `>= cutoff` grow by `amount`.
    pub fn shifted(&self, cutoff: u32, amount: u32) -> FiniteTerm {
        match self {
            FiniteTerm::Var { i } if *i >= cutoff => FiniteTerm::var(i + amount),
            FiniteTerm::App { f, a } => {
                FiniteTerm::app(f.shifted(cutoff, amount), a.shifted(cutoff, amount))
            }
            FiniteTerm::Lam { b } => FiniteTerm::lam(b.shifted(cutoff + 1, amount)),
            other => other.clone(),
        }
    }

    /// Cuts at depth `n` exactly as `Coterm::truncate` does.
    pub fn truncate(&self, n: usize) -> FiniteTerm {
        if n == 0 {
            return FiniteTerm::Bot;
        }
        match self {
            FiniteTerm::App { f, a } => FiniteTerm::app(f.truncate(n - 1), a.truncate(n - 1)),
            FiniteTerm::Lam { b } => FiniteTerm::lam(b.truncate(n - 1)),
            other => other.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite terms always serialize")
    }
}

impl fmt::Display for FiniteTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteTerm::Var { i } => write!(f, "Var {i}"),
            FiniteTerm::Const { n } => write!(f, "Const {n}"),
            FiniteTerm::Bot => f.write_str("Bot"),
            FiniteTerm::App { f: g, a } => write!(f, "App({g}, {a})"),
            FiniteTerm::Lam { b } => write!(f, "Lam({b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_and_json() {
        let t = FiniteTerm::lam(FiniteTerm::app(FiniteTerm::var(0), FiniteTerm::Bot));
        assert_eq!(t.to_string(), "Lam(App(Var 0, Bot))");
        assert_eq!(
            t.to_json(),
            r#"{"k":"lam","b":{"k":"app","f":{"k":"var","i":0},"a":{"k":"bot"}}}"#
        );
        let back: FiniteTerm = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert_eq!(
            FiniteTerm::constant("c").to_json(),
            r#"{"k":"const","n":"c"}"#
        );
    }

    #[test]
    fn shift_respects_binders() {
        let t = FiniteTerm::app(FiniteTerm::var(0), FiniteTerm::var(2));
        assert_eq!(
            t.shifted(1, 2),
            FiniteTerm::app(FiniteTerm::var(0), FiniteTerm::var(4))
        );
        let l = FiniteTerm::lam(FiniteTerm::var(0));
        assert_eq!(l.shifted(0, 5), l);
    }

    #[test]
    fn depth_and_size() {
        let t = FiniteTerm::lam(FiniteTerm::app(FiniteTerm::var(0), FiniteTerm::Bot));
        assert_eq!(t.depth(), 2);
        assert_eq!(t.size(), 4);
        assert_eq!(t.truncate(t.depth() + 1), t);
    }
}
