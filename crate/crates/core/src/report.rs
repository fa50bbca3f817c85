use std::fmt;

use serde::Serialize;

/// Outcome of one universally quantified condition.
///
/// A failed check always carries the first violating tuple in node order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check<C> {
    #[serde(rename = "name")]
    pub condition: C,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl<C> Check<C> {
    pub fn pass(condition: C) -> Self {
        Self {
            condition,
            holds: true,
            witness: None,
        }
    }

    pub fn fail(condition: C, witness: Vec<String>) -> Self {
        Self {
            condition,
            holds: false,
            witness: Some(witness),
        }
    }

    pub(crate) fn from_witness(condition: C, witness: Option<Vec<String>>) -> Self {
        match witness {
            None => Self::pass(condition),
            Some(w) => Self::fail(condition, w),
        }
    }
}

impl<C: fmt::Display> fmt::Display for Check<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "{}: holds", self.condition),
            Some(w) => write!(f, "{}: fails at ({})", self.condition, w.join(", ")),
        }
    }
}

pub fn all_hold<C>(checks: &[Check<C>]) -> bool {
    checks.iter().all(|c| c.holds)
}

pub fn first_failure<C>(checks: &[Check<C>]) -> Option<&Check<C>> {
    checks.iter().find(|c| !c.holds)
}
