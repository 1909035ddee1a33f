use serde::{Deserialize, Serialize};

/// Outcome of a universally quantified check: it holds, or here is the least
/// violating tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision<W> {
    Holds,
    Fails(W),
}

impl<W> Decision<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Decision::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Decision::Holds => None,
            Decision::Fails(w) => Some(w),
        }
    }

    pub fn into_witness(self) -> Option<W> {
        match self {
            Decision::Holds => None,
            Decision::Fails(w) => Some(w),
        }
    }

    pub fn from_witness(w: Option<W>) -> Self {
        match w {
            None => Decision::Holds,
            Some(w) => Decision::Fails(w),
        }
    }
}
