//! Maps between frames and the FS / iK morphism conditions.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::frame::Frame;
use crate::nodeset::NodeSet;
use crate::report::Check;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("source/target mismatch: {0}")]
    SourceTargetMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MorphismCondition {
    Monotone,
    LeBack,
    RForth,
    WeakBack,
    StrongBack,
    RBoundedBack,
}

impl fmt::Display for MorphismCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MorphismCondition::Monotone => "MONOTONE",
            MorphismCondition::LeBack => "LE_BACK",
            MorphismCondition::RForth => "R_FORTH",
            MorphismCondition::WeakBack => "WEAK_BACK",
            MorphismCondition::StrongBack => "STRONG_BACK",
            MorphismCondition::RBoundedBack => "R_BOUNDED_BACK",
        })
    }
}

/// Every requested condition is evaluated; nothing short-circuits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub holds: bool,
    pub conditions: Vec<Check<MorphismCondition>>,
}

impl MorphismReport {
    fn new(conditions: Vec<Check<MorphismCondition>>) -> Self {
        Self {
            holds: conditions.iter().all(|c| c.holds),
            conditions,
        }
    }

    pub fn first_failure(&self) -> Option<&Check<MorphismCondition>> {
        self.conditions.iter().find(|c| !c.holds)
    }

    pub fn get(&self, cond: MorphismCondition) -> Option<&Check<MorphismCondition>> {
        self.conditions.iter().find(|c| c.condition == cond)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameMap {
    source: Arc<Frame>,
    target: Arc<Frame>,
    table: Vec<usize>,
}

impl FrameMap {
    pub fn new(source: Arc<Frame>, target: Arc<Frame>, table: Vec<usize>) -> Result<Self, MorphismError> {
        if table.len() != source.len() {
            return Err(MorphismError::SourceTargetMismatch(format!(
                "table has {} entries but the source has {} nodes",
                table.len(),
                source.len()
            )));
        }
        if let Some((i, &t)) = table.iter().enumerate().find(|(_, &t)| t >= target.len()) {
            return Err(MorphismError::SourceTargetMismatch(format!(
                "image #{t} of `{}` is not a target node",
                source.name(i)
            )));
        }
        Ok(Self { source, target, table })
    }

    /// Builds a map from `(source name, target name)` pairs, which must cover
    /// every source node exactly once.
    pub fn from_pairs<S: AsRef<str>>(
        source: Arc<Frame>,
        target: Arc<Frame>,
        pairs: &[(S, S)],
    ) -> Result<Self, MorphismError> {
        let mut table = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            let i = source
                .index_of(a.as_ref())
                .ok_or_else(|| MorphismError::SourceTargetMismatch(format!("`{}` is not a source node", a.as_ref())))?;
            let j = target
                .index_of(b.as_ref())
                .ok_or_else(|| MorphismError::SourceTargetMismatch(format!("`{}` is not a target node", b.as_ref())))?;
            if table[i] != usize::MAX {
                return Err(MorphismError::SourceTargetMismatch(format!(
                    "`{}` is mapped twice",
                    a.as_ref()
                )));
            }
            table[i] = j;
        }
        if let Some(i) = table.iter().position(|&t| t == usize::MAX) {
            return Err(MorphismError::SourceTargetMismatch(format!(
                "`{}` has no image",
                source.name(i)
            )));
        }
        Self::new(source, target, table)
    }

    pub fn identity(frame: Arc<Frame>) -> Self {
        let table = (0..frame.len()).collect();
        Self {
            source: frame.clone(),
            target: frame,
            table,
        }
    }

    pub fn source(&self) -> &Arc<Frame> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Frame> {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn pairs_named(&self) -> Vec<(String, String)> {
        self.table
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.source.name(i).to_string(), self.target.name(j).to_string()))
            .collect()
    }

    pub fn image_of(&self, s: &NodeSet) -> NodeSet {
        NodeSet::from_iter(self.target.len(), s.iter().map(|x| self.table[x]))
    }

    /// `self` first, then `next`.
    pub fn compose(&self, next: &FrameMap) -> Result<FrameMap, MorphismError> {
        if self.target != next.source {
            return Err(MorphismError::SourceTargetMismatch(
                "target of the first map is not the source of the second".into(),
            ));
        }
        Ok(FrameMap {
            source: self.source.clone(),
            target: next.target.clone(),
            table: self.table.iter().map(|&y| next.table[y]).collect(),
        })
    }

    /// Uncovered target nodes, empty iff the map is onto.
    pub fn uncovered(&self) -> Vec<String> {
        let covered = self.image_of(&self.source.all_nodes());
        self.target.names(covered.complement().iter())
    }

    pub fn is_surjective(&self) -> bool {
        self.uncovered().is_empty()
    }

    fn check(&self, cond: MorphismCondition, w: Option<Vec<String>>) -> Check<MorphismCondition> {
        Check::from_witness(cond, w)
    }

    /// `x ≤ y ⟹ f(x) ≤ f(y)`, witness `(x, y)`.
    pub fn check_monotone(&self) -> Check<MorphismCondition> {
        let (s, t) = (&*self.source, &*self.target);
        let w = (0..s.len()).find_map(|x| {
            s.up(x)
                .iter()
                .find(|&y| !t.le(self.table[x], self.table[y]))
                .map(|y| vec![s.name(x).into(), s.name(y).into()])
        });
        self.check(MorphismCondition::Monotone, w)
    }

    /// `f(x) ≤ b ⟹ ∃x'. x ≤ x' ∧ f(x') = b`, witness `(x, b)`.
    pub fn check_le_back(&self) -> Check<MorphismCondition> {
        let (s, t) = (&*self.source, &*self.target);
        let w = (0..s.len()).find_map(|x| {
            let reach = self.image_of(s.up(x));
            t.up(self.table[x])
                .difference(&reach)
                .first()
                .map(|b| vec![s.name(x).into(), t.name(b).into()])
        });
        self.check(MorphismCondition::LeBack, w)
    }

    /// `xRy ⟹ f(x) R f(y)`, witness `(x, y)`.
    pub fn check_r_forth(&self) -> Check<MorphismCondition> {
        let (s, t) = (&*self.source, &*self.target);
        let w = (0..s.len()).find_map(|x| {
            s.successors(x)
                .iter()
                .find(|&y| !t.r(self.table[x], self.table[y]))
                .map(|y| vec![s.name(x).into(), s.name(y).into()])
        });
        self.check(MorphismCondition::RForth, w)
    }

    /// `f(x) R z ⟹ ∃x'. xRx' ∧ z ≤ f(x')`, witness `(x, z)`.
    pub fn check_weak_back(&self) -> Check<MorphismCondition> {
        let (s, t) = (&*self.source, &*self.target);
        let w = (0..s.len()).find_map(|x| {
            let covered = t.down_closure(&self.image_of(s.successors(x)));
            t.successors(self.table[x])
                .difference(&covered)
                .first()
                .map(|z| vec![s.name(x).into(), t.name(z).into()])
        });
        self.check(MorphismCondition::WeakBack, w)
    }

    /// `f(x) ≤ m ∧ mRz ⟹ ∃x', x''. x ≤ x' ∧ x'Rx'' ∧ f(x'') ≤ z`, witness `(x, m, z)`.
    ///
    /// The final clause reads `f(x'') ≤ z`, the reverse of the weak back
    /// condition's `z ≤ f(x')`; it is checked exactly as written.
    pub fn check_strong_back(&self) -> Check<MorphismCondition> {
        let (s, t) = (&*self.source, &*self.target);
        let w = (0..s.len()).find_map(|x| {
            let reach = self.image_of(&s.r_image(s.up(x)));
            let covered = t.up_closure(&reach);
            t.up(self.table[x]).iter().find_map(|m| {
                t.successors(m)
                    .difference(&covered)
                    .first()
                    .map(|z| vec![s.name(x).into(), t.name(m).into(), t.name(z).into()])
            })
        });
        self.check(MorphismCondition::StrongBack, w)
    }

    /// `f(x) R y ⟹ ∃y'. xRy' ∧ f(y') = y`, witness `(x, y)`.
    pub fn check_r_bounded_back(&self) -> Check<MorphismCondition> {
        let (s, t) = (&*self.source, &*self.target);
        let w = (0..s.len()).find_map(|x| {
            let reach = self.image_of(s.successors(x));
            t.successors(self.table[x])
                .difference(&reach)
                .first()
                .map(|y| vec![s.name(x).into(), t.name(y).into()])
        });
        self.check(MorphismCondition::RBoundedBack, w)
    }

    /// MONOTONE, LE_BACK, R_FORTH, WEAK_BACK, STRONG_BACK.
    pub fn check_fs_morphism(&self) -> MorphismReport {
        MorphismReport::new(vec![
            self.check_monotone(),
            self.check_le_back(),
            self.check_r_forth(),
            self.check_weak_back(),
            self.check_strong_back(),
        ])
    }

    /// MONOTONE, LE_BACK, R_FORTH, R_BOUNDED_BACK.
    pub fn check_ik_morphism(&self) -> MorphismReport {
        MorphismReport::new(vec![
            self.check_monotone(),
            self.check_le_back(),
            self.check_r_forth(),
            self.check_r_bounded_back(),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(f: Frame) -> Arc<Frame> {
        Arc::new(f)
    }

    #[test]
    fn identity_is_a_morphism() {
        let f = arc(Frame::from_edges(&["a", "b"], &[("a", "b")], &[("a", "b"), ("b", "b")]).unwrap());
        let id = FrameMap::identity(f);
        assert!(id.check_fs_morphism().holds);
        assert!(id.is_surjective());
    }

    #[test]
    fn constant_map_fails_bounded_back() {
        let chain = arc(Frame::from_edges(&["a", "b"], &[("a", "b")], &[] as &[(&str, &str)]).unwrap());
        let point = arc(Frame::from_edges(&["p"], &[] as &[(&str, &str)], &[("p", "p")]).unwrap());
        let m = FrameMap::new(chain, point, vec![0, 0]).unwrap();
        let rep = m.check_ik_morphism();
        assert!(!rep.holds);
        assert_eq!(
            rep.get(MorphismCondition::RBoundedBack).unwrap().witness,
            Some(vec!["a".into(), "p".into()])
        );
    }

    #[test]
    fn proper_inclusion_is_not_onto() {
        let small = arc(Frame::from_edges(&["a"], &[] as &[(&str, &str)], &[]).unwrap());
        let big = arc(Frame::from_edges(&["a", "b"], &[] as &[(&str, &str)], &[]).unwrap());
        let m = FrameMap::new(small, big, vec![0]).unwrap();
        assert_eq!(m.uncovered(), vec!["b".to_string()]);
    }

    #[test]
    fn bad_tables_are_rejected() {
        let a = arc(Frame::from_edges(&["a"], &[] as &[(&str, &str)], &[]).unwrap());
        assert!(FrameMap::new(a.clone(), a.clone(), vec![]).is_err());
        assert!(FrameMap::new(a.clone(), a.clone(), vec![3]).is_err());
        assert!(FrameMap::from_pairs(a.clone(), a.clone(), &[("a", "zz")]).is_err());
        let b = arc(Frame::from_edges(&["b"], &[] as &[(&str, &str)], &[]).unwrap());
        let id_a = FrameMap::identity(a);
        let id_b = FrameMap::identity(b);
        assert!(id_a.compose(&id_b).is_err());
    }
}
