use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::reduction::{redexes_bounded, step_at, RuleTag, MAX_SPINE};
use crate::rnf::has_rnf;
use crate::term::{bisim_up_to, Coterm, MuExpr, Node, Tri};

/// Which set of meaningless terms an oracle approximates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    /// The root-active terms.
    RootActive,
    /// Terms reducing to a head-active term or to the ogre.
    HeadOgre,
    /// Exactly ⊥.
    BotOnly,
    /// Union of the component sets.
    Composite(Vec<OracleKind>),
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleKind::RootActive => f.write_str("root-active"),
            OracleKind::HeadOgre => f.write_str("head-ogre"),
            OracleKind::BotOnly => f.write_str("bot-only"),
            OracleKind::Composite(parts) => {
                let names: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "composite({})", names.join(","))
            }
        }
    }
}

/// How an `Unknown` membership verdict is treated by reduction and trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknownPolicy {
    /// Treat as a member, flagging the result as assumed.
    AssumeMeaningless,
    /// Refuse to act on it.
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Oracle {
    pub kind: OracleKind,
    pub fuel: usize,
    pub policy: UnknownPolicy,
}

/// Bound on nodes visited per reduct when enumerating β-redexes in the
/// head/ogre search.
const SEARCH_NODE_BUDGET: usize = 4096;

fn ogre() -> &'static Coterm {
    static OGRE: OnceLock<Coterm> = OnceLock::new();
    OGRE.get_or_init(|| {
        crate::term::from_mu(&MuExpr::mu(MuExpr::lam(MuExpr::MuVar(0)))).expect("guarded")
    })
}

impl Oracle {
    pub fn new(kind: OracleKind, fuel: usize, policy: UnknownPolicy) -> Self {
        Oracle { kind, fuel, policy }
    }

    pub fn root_active(fuel: usize) -> Self {
        Self::new(
            OracleKind::RootActive,
            fuel,
            UnknownPolicy::AssumeMeaningless,
        )
    }

    pub fn membership(&self, t: &Coterm) -> Tri {
        membership_of(&self.kind, self.fuel, t)
    }

    /// Whether a verdict licenses treating the term as meaningless.
    pub fn accepts(&self, verdict: &Tri) -> bool {
        match verdict {
            Tri::Yes => true,
            Tri::No => false,
            Tri::Unknown(_) => self.policy == UnknownPolicy::AssumeMeaningless,
        }
    }

    /// Membership with `Unknown` resolved by the policy: under
    /// `AssumeMeaningless` it becomes `Yes`, under `Strict` it stays.
    pub fn effective(&self, t: &Coterm) -> Tri {
        match self.membership(t) {
            Tri::Unknown(_) if self.policy == UnknownPolicy::AssumeMeaningless => Tri::Yes,
            v => v,
        }
    }
}

fn membership_of(kind: &OracleKind, fuel: usize, t: &Coterm) -> Tri {
    if t.is_bot() {
        return Tri::Yes;
    }
    match kind {
        OracleKind::BotOnly => Tri::No,
        OracleKind::RootActive => match has_rnf(t, fuel) {
            Tri::Yes => Tri::No,
            Tri::No => Tri::Yes,
            unknown => unknown,
        },
        OracleKind::HeadOgre => head_ogre(t, fuel),
        OracleKind::Composite(parts) => {
            // Union: any Yes wins, then any Unknown, else No.
            let mut acc = Tri::No;
            for part in parts {
                acc = acc.or(membership_of(part, fuel, t));
                if acc.is_yes() {
                    break;
                }
            }
            acc
        }
    }
}

/// Is `t ≡ λx1..xn. r t1..tm` with `r` root-active? `Yes` only for a
/// definitely root-active `r` (one that weak-head reduces to ⊥).
fn head_active(t: &Coterm, fuel: usize) -> Tri {
    let mut body = t.clone();
    let mut lambdas = 0;
    while let Node::Lam(b) = body.root() {
        if lambdas > fuel {
            return Tri::unknown("abstraction prefix exceeds fuel");
        }
        lambdas += 1;
        body = b.clone();
    }
    // Every prefix `r t1..tk` of the spine is a candidate for `r`.
    let mut spine = vec![body.clone()];
    let mut cur = body;
    while let Node::App(f, _) = cur.root() {
        if spine.len() > MAX_SPINE {
            return Tri::unknown("application spine exceeds search bound");
        }
        spine.push(f.clone());
        cur = f.clone();
    }
    let mut acc = Tri::No;
    for r in spine.iter().rev() {
        let verdict = match has_rnf(r, fuel) {
            Tri::Yes => Tri::No,
            Tri::No => Tri::Yes,
            unknown => unknown,
        };
        acc = acc.or(verdict);
        if acc.is_yes() {
            break;
        }
    }
    acc
}

/// Breadth-first search over finite β-reducts for a head-active term or a
/// term agreeing with the ogre up to depth `fuel + 1`.
///
/// The search visits at most `fuel` reducts with a frontier of at most
/// `fuel` terms. If every visited reduct has heads with a found root normal
/// form and none looks like the ogre, the answer is `No`, even when the
/// frontier is not exhausted. An undecided head makes it `Unknown`.
fn head_ogre(t: &Coterm, fuel: usize) -> Tri {
    let mut queue = VecDeque::from([t.clone()]);
    let mut visited = 0;
    let mut undecided: Option<Tri> = None;
    while let Some(u) = queue.pop_front() {
        if visited == fuel {
            break;
        }
        visited += 1;
        if bisim_up_to(&u, ogre(), fuel + 1) {
            return Tri::Yes;
        }
        match head_active(&u, fuel) {
            Tri::Yes => return Tri::Yes,
            Tri::No => {}
            unknown => {
                undecided.get_or_insert(unknown);
            }
        }
        for r in redexes_bounded(&u, fuel, None, SEARCH_NODE_BUDGET) {
            if queue.len() >= fuel {
                break;
            }
            if let Ok(next) = step_at(&u, &r.position, RuleTag::Beta) {
                queue.push_back(next);
            }
        }
    }
    undecided.unwrap_or(Tri::No)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn assume(kind: OracleKind, fuel: usize) -> Oracle {
        Oracle::new(kind, fuel, UnknownPolicy::AssumeMeaningless)
    }

    #[test]
    fn membership_examples() {
        let ra = assume(OracleKind::RootActive, 100);
        assert!(ra.membership(&corpus::omega()).is_unknown());
        assert!(ra.accepts(&ra.membership(&corpus::omega())));
        assert_eq!(
            assume(OracleKind::RootActive, 10).membership(&corpus::i()),
            Tri::No
        );
        let ho = assume(OracleKind::HeadOgre, 50);
        assert_eq!(ho.membership(&corpus::omega_ogre()), Tri::No);
        assert_eq!(ho.membership(&corpus::ogre()), Tri::Yes);
        assert!(ho
            .membership(&corpus::named("head_active").unwrap())
            .is_unknown());
        assert_eq!(ho.membership(&corpus::named("bot_head").unwrap()), Tri::Yes);
        assert_eq!(ho.membership(&corpus::i()), Tri::No);
    }

    #[test]
    fn bot_is_member_of_every_kind() {
        for kind in [
            OracleKind::RootActive,
            OracleKind::HeadOgre,
            OracleKind::BotOnly,
            OracleKind::Composite(vec![OracleKind::BotOnly]),
        ] {
            assert_eq!(assume(kind, 5).membership(&Coterm::bot()), Tri::Yes);
        }
        let bo = assume(OracleKind::BotOnly, 5);
        assert_eq!(bo.membership(&corpus::omega()), Tri::No);
    }

    #[test]
    fn composite_join() {
        let c = assume(
            OracleKind::Composite(vec![OracleKind::BotOnly, OracleKind::RootActive]),
            20,
        );
        assert!(c.membership(&corpus::omega()).is_unknown());
        assert_eq!(c.membership(&corpus::i()), Tri::No);
        let c = assume(
            OracleKind::Composite(vec![OracleKind::RootActive, OracleKind::HeadOgre]),
            20,
        );
        assert_eq!(c.membership(&corpus::ogre()), Tri::Yes);
    }

    #[test]
    fn strict_policy_does_not_accept_unknown() {
        let o = Oracle::new(OracleKind::RootActive, 10, UnknownPolicy::Strict);
        let v = o.membership(&corpus::omega());
        assert!(!o.accepts(&v));
        assert!(o.effective(&corpus::omega()).is_unknown());
    }
}
