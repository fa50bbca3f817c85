//! Superamalgam conditions on finite algebra diagrams.
//!
//! The diagram is `h1: A → B1`, `h2: A → B2` (embeddings) completed by
//! `p1: B1 → C`, `p2: B2 → C` with `p1 h1 = p2 h2`.

use std::sync::Arc;

use serde::Serialize;

use super::AmalgamError;
use crate::algebra::FiniteAlgebra;

/// A map between finite algebras given by its table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraHom {
    pub source: Arc<FiniteAlgebra>,
    pub target: Arc<FiniteAlgebra>,
    pub table: Vec<usize>,
}

impl AlgebraHom {
    pub fn new(
        source: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        table: Vec<usize>,
    ) -> Result<Self, AmalgamError> {
        if table.len() != source.size || table.iter().any(|&t| t >= target.size) {
            return Err(AmalgamError::PreconditionFailed(
                "map table does not fit its algebras".into(),
            ));
        }
        Ok(Self { source, target, table })
    }

    pub fn identity(a: Arc<FiniteAlgebra>) -> Self {
        Self {
            table: (0..a.size).collect(),
            source: a.clone(),
            target: a,
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size];
        self.table.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
    }

    /// The first operation this map fails to preserve, if any.
    pub fn homomorphism_violation(&self) -> Option<String> {
        let (a, b, h) = (&self.source, &self.target, |x| self.table[x]);
        if h(a.bot) != b.bot || h(a.top) != b.top {
            return Some("constants".into());
        }
        for x in 0..a.size {
            if h(a.boxed(x)) != b.boxed(h(x)) {
                return Some(format!("box at {x}"));
            }
            if h(a.dia(x)) != b.dia(h(x)) {
                return Some(format!("dia at {x}"));
            }
            for y in 0..a.size {
                if h(a.meet(x, y)) != b.meet(h(x), h(y)) {
                    return Some(format!("meet at ({x}, {y})"));
                }
                if h(a.join(x, y)) != b.join(h(x), h(y)) {
                    return Some(format!("join at ({x}, {y})"));
                }
                if h(a.himp(x, y)) != b.himp(h(x), h(y)) {
                    return Some(format!("himp at ({x}, {y})"));
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseReport {
    pub clause: &'static str,
    pub holds: bool,
    /// First `(b1, b2)` with the premise true and no interpolant `a`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuperamalgamReport {
    pub holds: bool,
    pub clauses: Vec<ClauseReport>,
}

fn precondition(ok: bool, what: &str) -> Result<(), AmalgamError> {
    if ok {
        Ok(())
    } else {
        Err(AmalgamError::PreconditionFailed(what.into()))
    }
}

/// Checks both interpolation clauses by exhaustive search:
/// `p1(b1) ≤ p2(b2) ⟹ ∃a. b1 ≤ h1(a) ∧ h2(a) ≤ b2`, and symmetrically.
pub fn check_superamalgam(
    h1: &AlgebraHom,
    h2: &AlgebraHom,
    p1: &AlgebraHom,
    p2: &AlgebraHom,
) -> Result<SuperamalgamReport, AmalgamError> {
    precondition(h1.source == h2.source, "h1 and h2 have different sources")?;
    precondition(p1.source == h1.target, "p1 does not start at the target of h1")?;
    precondition(p2.source == h2.target, "p2 does not start at the target of h2")?;
    precondition(p1.target == p2.target, "p1 and p2 have different targets")?;
    for (name, m) in [("h1", h1), ("h2", h2), ("p1", p1), ("p2", p2)] {
        if let Some(v) = m.homomorphism_violation() {
            return Err(AmalgamError::PreconditionFailed(format!(
                "{name} is not a homomorphism: {v}"
            )));
        }
        precondition(m.is_injective(), &format!("{name} is not injective"))?;
    }
    let a = &h1.source;
    let commutes = (0..a.size).all(|x| p1.apply(h1.apply(x)) == p2.apply(h2.apply(x)));
    precondition(commutes, "square does not commute: p1 h1 != p2 h2")?;

    let (b1, b2, c) = (&h1.target, &h2.target, &p1.target);
    let clause = |name: &'static str, forward: bool| {
        let mut witness = None;
        'outer: for x in 0..b1.size {
            for y in 0..b2.size {
                let (px, py) = (p1.apply(x), p2.apply(y));
                let premise = if forward { c.le(px, py) } else { c.le(py, px) };
                if !premise {
                    continue;
                }
                let found = (0..a.size).any(|z| {
                    if forward {
                        b1.le(x, h1.apply(z)) && b2.le(h2.apply(z), y)
                    } else {
                        b2.le(y, h2.apply(z)) && b1.le(h1.apply(z), x)
                    }
                });
                if !found {
                    witness = Some((x, y));
                    break 'outer;
                }
            }
        }
        ClauseReport {
            clause: name,
            holds: witness.is_none(),
            witness,
        }
    };
    let clauses = vec![
        clause("p1(b1) <= p2(b2) implies b1 <= h1(a) and h2(a) <= b2", true),
        clause("p2(b2) <= p1(b1) implies b2 <= h2(a) and h1(a) <= b1", false),
    ];
    Ok(SuperamalgamReport {
        holds: clauses.iter().all(|c| c.holds),
        clauses,
    })
}
