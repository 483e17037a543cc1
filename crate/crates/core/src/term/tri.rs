use std::fmt;

use serde::{Serialize, Serializer};

/// Three-valued answer of a fuel-bounded semi-decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    /// The search ran out of budget; carries a human-readable reason.
    Unknown(String),
}

impl Tri {
    pub fn unknown(reason: impl Into<String>) -> Self {
        Tri::Unknown(reason.into())
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Tri::Yes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Tri::No)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Tri::Unknown(_))
    }

    /// Same variant, ignoring the reason carried by `Unknown`.
    pub fn same_verdict(&self, other: &Tri) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }

    /// Disjunction: `Yes` if either side is `Yes`, `No` if both are `No`.
    pub fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::Yes, _) | (_, Tri::Yes) => Tri::Yes,
            (Tri::No, Tri::No) => Tri::No,
            (Tri::Unknown(r), _) | (_, Tri::Unknown(r)) => Tri::Unknown(r),
        }
    }

    /// Conjunction: `No` if either side is `No`, `Yes` if both are `Yes`.
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            (Tri::Unknown(r), _) | (_, Tri::Unknown(r)) => Tri::Unknown(r),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Tri::Yes => "Yes",
            Tri::No => "No",
            Tri::Unknown(_) => "Unknown",
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tri::Unknown(reason) => write!(f, "Unknown ({reason})"),
            other => f.write_str(other.label()),
        }
    }
}

impl Serialize for Tri {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}
