//! Finite FS-algebras: Heyting algebras with a box and a diamond.
//!
//! [`FiniteAlgebra`] is the abstract, table-driven form. [`UpsetAlgebra`]
//! builds the dual algebra of a frame, whose elements are upsets.

mod filter;

pub use filter::{
    congruence_filter_bijection_check, enumerate_congruences, enumerate_modal_filters, is_modal_filter,
    modal_filter_generated, quotient_by_modal_filter, BijectionReport, Congruence, ModalFilter, Quotient,
    DEFAULT_CONGRUENCE_BOUND,
};

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::{ConditionReport, Frame};
use crate::nodeset::NodeSet;
use crate::report::Check;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("frame is not an FS-frame: {0}")]
    NotAnFsFrame(ConditionReport),
    #[error("diamond of upset {upset:?} is not an upset")]
    ClosureViolation { upset: Vec<String> },
    #[error("malformed operation table: {0}")]
    MalformedTable(String),
    #[error("set is not a modal filter: {0}")]
    NotAModalFilter(String),
    #[error("algebra has {size} elements, above the enumeration bound {bound}")]
    SizeBoundExceeded { size: usize, bound: usize },
    #[error("quotient operations are not well defined: {0}")]
    IllDefinedQuotient(String),
}

/// Explicit operation tables indexed by element position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAlgebra {
    pub size: usize,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub himp: Vec<Vec<usize>>,
    pub bot: usize,
    pub top: usize,
    #[serde(rename = "box")]
    pub boxx: Vec<usize>,
    pub dia: Vec<usize>,
}

impl FiniteAlgebra {
    /// Checks that every table is total and stays inside the carrier.
    pub fn validate_shape(&self) -> Result<(), AlgebraError> {
        let n = self.size;
        let bad = |what: &str| Err(AlgebraError::MalformedTable(what.to_string()));
        if n == 0 {
            return bad("an algebra needs at least one element");
        }
        if self.bot >= n || self.top >= n {
            return bad("bot/top out of range");
        }
        for (name, t) in [("meet", &self.meet), ("join", &self.join), ("himp", &self.himp)] {
            if t.len() != n || t.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
                return bad(name);
            }
        }
        for (name, t) in [("box", &self.boxx), ("dia", &self.dia)] {
            if t.len() != n || t.iter().any(|&v| v >= n) {
                return bad(name);
            }
        }
        Ok(())
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    #[inline]
    pub fn himp(&self, a: usize, b: usize) -> usize {
        self.himp[a][b]
    }

    #[inline]
    pub fn boxed(&self, a: usize) -> usize {
        self.boxx[a]
    }

    #[inline]
    pub fn dia(&self, a: usize) -> usize {
        self.dia[a]
    }

    /// `a ≤ b` iff `a ∧ b = a`.
    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.meet[a][b] == a
    }

    /// `(a → b) ∧ (b → a)`
    pub fn biimp(&self, a: usize, b: usize) -> usize {
        self.meet(self.himp(a, b), self.himp(b, a))
    }

    /// Two-element Boolean algebra (0 = bottom, 1 = top) with the given modal tables.
    pub fn two_element(boxx: [usize; 2], dia: [usize; 2]) -> Self {
        FiniteAlgebra {
            size: 2,
            meet: vec![vec![0, 0], vec![0, 1]],
            join: vec![vec![0, 1], vec![1, 1]],
            himp: vec![vec![1, 1], vec![0, 1]],
            bot: 0,
            top: 1,
            boxx: boxx.to_vec(),
            dia: dia.to_vec(),
        }
    }

    /// Finite chain `0 < 1 < … < n-1` as a Heyting algebra with the given modal tables.
    pub fn chain(n: usize, boxx: Vec<usize>, dia: Vec<usize>) -> Self {
        let meet = (0..n).map(|a| (0..n).map(|b| a.min(b)).collect()).collect();
        let join = (0..n).map(|a| (0..n).map(|b| a.max(b)).collect()).collect();
        let himp = (0..n)
            .map(|a| (0..n).map(|b| if a <= b { n - 1 } else { b }).collect())
            .collect();
        FiniteAlgebra {
            size: n,
            meet,
            join,
            himp,
            bot: 0,
            top: n - 1,
            boxx,
            dia,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AlgebraAxiom {
    /// Commutativity, associativity, idempotence and absorption of ∧ and ∨.
    Lattice,
    /// `0 ≤ a ≤ 1`
    Bounds,
    /// `c ≤ a → b` iff `c ∧ a ≤ b`
    Residuation,
    /// `□1 = 1` and `◇0 = 0`
    Normality,
    /// `□(a∧b) = □a∧□b` and `◇(a∨b) = ◇a∨◇b`
    Additivity,
    /// `◇(a→b) ≤ □a→◇b`
    ConnectionDia,
    /// `◇a→□b ≤ □(a→b)`
    ConnectionBox,
}

impl fmt::Display for AlgebraAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraAxiom::Lattice => "LATTICE",
            AlgebraAxiom::Bounds => "BOUNDS",
            AlgebraAxiom::Residuation => "RESIDUATION",
            AlgebraAxiom::Normality => "NORMALITY",
            AlgebraAxiom::Additivity => "ADDITIVITY",
            AlgebraAxiom::ConnectionDia => "CONNECTION_DIA",
            AlgebraAxiom::ConnectionBox => "CONNECTION_BOX",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub holds: bool,
    pub axioms: Vec<Check<AlgebraAxiom>>,
}

fn idx(v: &[usize]) -> Vec<String> {
    v.iter().map(|i| i.to_string()).collect()
}

/// Checks the Heyting reduct (lattice laws, bounds, residuation) and the four
/// FS axiom groups over all element tuples. Witnesses are element indices.
pub fn check_fs_algebra(a: &FiniteAlgebra) -> Result<AlgebraReport, AlgebraError> {
    a.validate_shape()?;
    let n = a.size;
    let pairs = || (0..n).flat_map(|x| (0..n).map(move |y| (x, y)));
    let triples = || pairs().flat_map(|(x, y)| (0..n).map(move |z| (x, y, z)));

    let lattice = triples()
        .find(|&(x, y, z)| {
            a.meet(x, y) != a.meet(y, x)
                || a.join(x, y) != a.join(y, x)
                || a.meet(x, x) != x
                || a.join(x, x) != x
                || a.meet(x, a.join(x, y)) != x
                || a.join(x, a.meet(x, y)) != x
                || a.meet(a.meet(x, y), z) != a.meet(x, a.meet(y, z))
                || a.join(a.join(x, y), z) != a.join(x, a.join(y, z))
        })
        .map(|(x, y, z)| idx(&[x, y, z]));
    let bounds = (0..n).find(|&x| !a.le(a.bot, x) || !a.le(x, a.top)).map(|x| idx(&[x]));
    let residuation = triples()
        .find(|&(x, y, c)| a.le(c, a.himp(x, y)) != a.le(a.meet(c, x), y))
        .map(|(x, y, c)| idx(&[x, y, c]));
    let normality = if a.boxed(a.top) != a.top {
        Some(vec!["box".to_string(), a.top.to_string()])
    } else if a.dia(a.bot) != a.bot {
        Some(vec!["dia".to_string(), a.bot.to_string()])
    } else {
        None
    };
    let additivity = pairs()
        .find(|&(x, y)| {
            a.boxed(a.meet(x, y)) != a.meet(a.boxed(x), a.boxed(y)) || a.dia(a.join(x, y)) != a.join(a.dia(x), a.dia(y))
        })
        .map(|(x, y)| idx(&[x, y]));
    let connection_dia = pairs()
        .find(|&(x, y)| !a.le(a.dia(a.himp(x, y)), a.himp(a.boxed(x), a.dia(y))))
        .map(|(x, y)| idx(&[x, y]));
    let connection_box = pairs()
        .find(|&(x, y)| !a.le(a.himp(a.dia(x), a.boxed(y)), a.boxed(a.himp(x, y))))
        .map(|(x, y)| idx(&[x, y]));

    let axioms = vec![
        Check::from_witness(AlgebraAxiom::Lattice, lattice),
        Check::from_witness(AlgebraAxiom::Bounds, bounds),
        Check::from_witness(AlgebraAxiom::Residuation, residuation),
        Check::from_witness(AlgebraAxiom::Normality, normality),
        Check::from_witness(AlgebraAxiom::Additivity, additivity),
        Check::from_witness(AlgebraAxiom::ConnectionDia, connection_dia),
        Check::from_witness(AlgebraAxiom::ConnectionBox, connection_box),
    ];
    Ok(AlgebraReport {
        holds: axioms.iter().all(|c| c.holds),
        axioms,
    })
}

/// All upsets of a frame, in canonical order (cardinality, then members).
pub fn enumerate_upsets(frame: &Frame) -> Vec<NodeSet> {
    // Decide nodes from the top of a linear extension downwards: a node may
    // join the set only once everything strictly above it already has.
    let n = frame.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| frame.up(x).len());
    let mut out = Vec::new();
    let mut current = frame.empty_set();
    fn go(frame: &Frame, order: &[usize], k: usize, current: &mut NodeSet, out: &mut Vec<NodeSet>) {
        if k == order.len() {
            out.push(current.clone());
            return;
        }
        let x = order[k];
        go(frame, order, k + 1, current, out);
        let above_included = frame.up(x).iter().all(|y| y == x || current.contains(y));
        if above_included {
            current.insert(x);
            go(frame, order, k + 1, current, out);
            current.remove(x);
        }
    }
    go(frame, &order, 0, &mut current, &mut out);
    out.sort();
    out
}

/// The dual algebra of a finite FS-frame.
///
/// `◇` is `◇_R`; `□` is `□_{≤∘R}`, which always yields upsets. On frames with
/// `R = ≤∘R∘≤` it coincides with `□_R`.
#[derive(Debug, Clone)]
pub struct UpsetAlgebra {
    base: Frame,
    elements: Vec<NodeSet>,
    index: HashMap<NodeSet, usize>,
    tables: FiniteAlgebra,
}

impl UpsetAlgebra {
    pub fn dual_of(frame: &Frame) -> Result<UpsetAlgebra, AlgebraError> {
        let verdict = frame.is_fs_frame();
        if let Some(bad) = verdict.reports.into_iter().find(|r| !r.holds) {
            return Err(AlgebraError::NotAnFsFrame(bad));
        }
        let elements = enumerate_upsets(frame);
        let index: HashMap<NodeSet, usize> = elements.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
        let n = elements.len();
        let lookup = |s: &NodeSet| -> Option<usize> { index.get(s).copied() };
        let le_r = frame.le_then_r();

        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        let mut himp = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let (u, v) = (&elements[i], &elements[j]);
                meet[i][j] = lookup(&u.intersection(v)).expect("upsets are closed under ∩");
                join[i][j] = lookup(&u.union(v)).expect("upsets are closed under ∪");
                let imp = frame.down_closure(&u.difference(v)).complement();
                himp[i][j] = lookup(&imp).expect("complement of a downset is an upset");
            }
        }
        let mut boxx = vec![0; n];
        let mut dia = vec![0; n];
        for (i, u) in elements.iter().enumerate() {
            let d = frame.dia(u);
            dia[i] = lookup(&d).ok_or_else(|| AlgebraError::ClosureViolation {
                upset: frame.names(u.iter()),
            })?;
            let b = Frame::box_over(&le_r, u);
            boxx[i] = lookup(&b).ok_or_else(|| AlgebraError::ClosureViolation {
                upset: frame.names(u.iter()),
            })?;
        }
        let bot = lookup(&frame.empty_set()).expect("empty set is an upset");
        let top = lookup(&frame.all_nodes()).expect("carrier is an upset");
        Ok(UpsetAlgebra {
            base: frame.clone(),
            elements,
            index,
            tables: FiniteAlgebra {
                size: n,
                meet,
                join,
                himp,
                bot,
                top,
                boxx,
                dia,
            },
        })
    }

    pub fn base(&self) -> &Frame {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[NodeSet] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &NodeSet {
        &self.elements[i]
    }

    pub fn index_of(&self, u: &NodeSet) -> Option<usize> {
        self.index.get(u).copied()
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.tables
    }

    pub fn into_algebra(self) -> FiniteAlgebra {
        self.tables
    }

    pub fn element_names(&self, i: usize) -> Vec<String> {
        self.base.names(self.elements[i].iter())
    }
}

impl std::ops::Deref for UpsetAlgebra {
    type Target = FiniteAlgebra;

    fn deref(&self) -> &FiniteAlgebra {
        &self.tables
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(nodes: &[&str], le: &[(&str, &str)], r: &[(&str, &str)]) -> Frame {
        Frame::from_edges(nodes, le, r).unwrap()
    }

    #[test]
    fn one_point_dual() {
        let alg = UpsetAlgebra::dual_of(&frame(&["a"], &[], &[])).unwrap();
        assert_eq!(alg.len(), 2);
        assert_eq!(alg.boxed(alg.bot), alg.top);
        assert_eq!(alg.dia(alg.top), alg.bot);
        assert!(check_fs_algebra(&alg).unwrap().holds);
    }

    #[test]
    fn antichain_dual_is_boolean() {
        let f = frame(&["a", "b"], &[], &[]);
        let alg = UpsetAlgebra::dual_of(&f).unwrap();
        assert_eq!(alg.len(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let want = alg.element(i).complement().union(alg.element(j));
                assert_eq!(alg.element(alg.himp(i, j)), &want);
            }
        }
    }

    #[test]
    fn rejects_non_fs_frames() {
        let f = frame(&["a", "b", "c"], &[("a", "b")], &[("a", "c")]);
        assert!(matches!(UpsetAlgebra::dual_of(&f), Err(AlgebraError::NotAnFsFrame(_))));
    }

    #[test]
    fn boolean_with_identity_modalities_passes() {
        let a = FiniteAlgebra::two_element([0, 1], [0, 1]);
        assert!(check_fs_algebra(&a).unwrap().holds);
    }

    #[test]
    fn dia_of_bottom_must_be_bottom() {
        let a = FiniteAlgebra::two_element([0, 1], [1, 1]);
        let rep = check_fs_algebra(&a).unwrap();
        let norm = rep
            .axioms
            .iter()
            .find(|c| c.condition == AlgebraAxiom::Normality)
            .unwrap();
        assert_eq!(norm.witness, Some(vec!["dia".into(), "0".into()]));
    }

    #[test]
    fn upset_enumeration_order() {
        let f = frame(&["a", "b"], &[("a", "b")], &[]);
        let ups = enumerate_upsets(&f);
        let as_vecs: Vec<Vec<usize>> = ups.iter().map(|u| u.to_vec()).collect();
        assert_eq!(as_vecs, vec![vec![], vec![1], vec![0, 1]]);
    }

    #[test]
    fn box_agrees_with_plain_box_on_compatible_frames() {
        // R = ≤∘R∘≤ here
        let f = frame(&["a", "b", "c"], &[("a", "b")], &[("a", "c"), ("a", "a"), ("a", "b")]);
        let f = f.with_r_edges(&{
            let rows = f.le_r_le();
            (0..3)
                .flat_map(|x| rows[x].iter().map(move |y| (x, y)))
                .collect::<Vec<_>>()
        });
        assert!(f.check_ik_compatibility().holds);
        for u in enumerate_upsets(&f) {
            assert_eq!(f.box_le_r(&u), f.box_r(&u));
        }
    }
}
