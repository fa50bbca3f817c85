//! Co-V-formations, co-amalgam verification and the pullback construction.
//!
//! A co-V-formation is a pair of surjections `f: left → base` and
//! `g: right → base`. A co-amalgam completes it to a commuting square
//! `p1: W → left`, `p2: W → right`.

pub mod chase;
pub mod superamalgam;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::{ConditionReport, Frame};
use crate::morphism::{FrameMap, MorphismError, MorphismReport};

pub use chase::{
    chase_refute, ChaseConfig, ChaseOutcome, Contradiction, Derivation, DerivationEnd, ElementInfo, Inconclusive,
    InconclusiveReason, RefutationCertificate, ReplayError, Rule, TraceStep,
};
pub use superamalgam::{check_superamalgam, AlgebraHom, SuperamalgamReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Mode {
    #[default]
    FS,
    IK,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "FS" => Ok(Mode::FS),
            "IK" => Ok(Mode::IK),
            other => Err(format!("unknown mode `{other}` (expected FS or IK)")),
        }
    }
}

impl Mode {
    /// FS mode asks for an FS-space (F1, F2 and the mixed condition); IK
    /// mode asks for `R = ≤∘R∘≤`.
    pub fn frame_checks(self, frame: &Frame) -> Vec<ConditionReport> {
        match self {
            Mode::FS => frame.check_fs_conditions(),
            Mode::IK => vec![frame.check_ik_compatibility()],
        }
    }

    pub fn morphism_checks(self, map: &FrameMap) -> MorphismReport {
        match self {
            Mode::FS => map.check_fs_morphism(),
            Mode::IK => map.check_ik_morphism(),
        }
    }
}

/// Frame classes for which the pullback is expected to be a co-amalgam.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LogicClass {
    #[serde(rename = "iT")]
    IT,
    #[serde(rename = "iK4")]
    IK4,
    #[serde(rename = "iS4")]
    IS4,
}

impl LogicClass {
    pub const ALL: [LogicClass; 3] = [LogicClass::IT, LogicClass::IK4, LogicClass::IS4];

    pub fn check(self, frame: &Frame) -> ConditionReport {
        match self {
            LogicClass::IT => frame.check_reflexive(),
            LogicClass::IK4 => frame.check_transitive(),
            LogicClass::IS4 => frame.classify().preorder,
        }
    }
}

impl fmt::Display for LogicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogicClass::IT => "iT",
            LogicClass::IK4 => "iK4",
            LogicClass::IS4 => "iS4",
        })
    }
}

impl FromStr for LogicClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "it" => Ok(LogicClass::IT),
            "ik4" => Ok(LogicClass::IK4),
            "is4" => Ok(LogicClass::IS4),
            other => Err(format!("unknown frame class `{other}` (expected iT, iK4 or iS4)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmalgamError {
    #[error(transparent)]
    SourceTargetMismatch(#[from] MorphismError),
    #[error("formation is invalid: {}", .0.summary())]
    FormationInvalid(AmalgamReport),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

/// One condition checked on one named subject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub subject: String,
    pub condition: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(
                f,
                "{} {}: {}",
                self.subject,
                self.condition,
                if self.holds { "holds" } else { "fails" }
            ),
            Some(w) => write!(f, "{} {}: fails at ({})", self.subject, self.condition, w.join(", ")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AmalgamReport {
    pub holds: bool,
    pub findings: Vec<Finding>,
}

impl AmalgamReport {
    fn from_findings(findings: Vec<Finding>) -> Self {
        Self {
            holds: findings.iter().all(|f| f.holds),
            findings,
        }
    }

    pub fn first_failure(&self) -> Option<&Finding> {
        self.findings.iter().find(|f| !f.holds)
    }

    pub fn summary(&self) -> String {
        match self.first_failure() {
            None => "all checks hold".into(),
            Some(f) => f.to_string(),
        }
    }
}

fn frame_findings(subject: &str, reports: Vec<ConditionReport>, out: &mut Vec<Finding>) {
    out.extend(reports.into_iter().map(|r| Finding {
        subject: subject.into(),
        condition: r.condition.to_string(),
        holds: r.holds,
        witness: r.witness,
    }));
}

fn map_findings(subject: &str, mode: Mode, map: &FrameMap, out: &mut Vec<Finding>) {
    out.extend(mode.morphism_checks(map).conditions.into_iter().map(|c| Finding {
        subject: subject.into(),
        condition: c.condition.to_string(),
        holds: c.holds,
        witness: c.witness,
    }));
    let uncovered = map.uncovered();
    out.push(Finding {
        subject: subject.into(),
        condition: "SURJECTIVE".into(),
        holds: uncovered.is_empty(),
        witness: (!uncovered.is_empty()).then_some(uncovered),
    });
}

/// Two maps into a common base frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoVFormation {
    f: FrameMap,
    g: FrameMap,
}

impl CoVFormation {
    pub fn new(f: FrameMap, g: FrameMap) -> Result<Self, AmalgamError> {
        if f.target() != g.target() {
            return Err(MorphismError::SourceTargetMismatch("f and g have different targets".into()).into());
        }
        Ok(Self { f, g })
    }

    /// `(F, F, F, id, id)`.
    pub fn identity(frame: Arc<Frame>) -> Self {
        let id = FrameMap::identity(frame);
        Self { f: id.clone(), g: id }
    }

    pub fn base(&self) -> &Arc<Frame> {
        self.f.target()
    }

    pub fn left(&self) -> &Arc<Frame> {
        self.f.source()
    }

    pub fn right(&self) -> &Arc<Frame> {
        self.g.source()
    }

    pub fn f(&self) -> &FrameMap {
        &self.f
    }

    pub fn g(&self) -> &FrameMap {
        &self.g
    }

    /// Applies `op` to all three frames, keeping the map tables.
    pub fn map_frames(&self, op: impl Fn(&Frame) -> Frame) -> Self {
        let base = Arc::new(op(self.base()));
        let left = Arc::new(op(self.left()));
        let right = Arc::new(op(self.right()));
        let f = FrameMap::new(left, base.clone(), self.f.table().to_vec()).expect("same node sets");
        let g = FrameMap::new(right, base, self.g.table().to_vec()).expect("same node sets");
        Self { f, g }
    }
}

/// Frame checks on base, left and right, then morphism and surjectivity
/// checks on f and g. Every check runs; the report carries all failures.
pub fn validate_formation(c: &CoVFormation, mode: Mode) -> AmalgamReport {
    let mut out = Vec::new();
    frame_findings("base", mode.frame_checks(c.base()), &mut out);
    frame_findings("left", mode.frame_checks(c.left()), &mut out);
    frame_findings("right", mode.frame_checks(c.right()), &mut out);
    map_findings("f", mode, &c.f, &mut out);
    map_findings("g", mode, &c.g, &mut out);
    AmalgamReport::from_findings(out)
}

/// Verifies that `(w, p1, p2)` completes `c` to a commuting square of
/// surjective mode-morphisms.
pub fn check_coamalgam(
    c: &CoVFormation,
    w: &Frame,
    p1: &FrameMap,
    p2: &FrameMap,
    mode: Mode,
) -> Result<AmalgamReport, AmalgamError> {
    for (name, p, target) in [("p1", p1, c.left()), ("p2", p2, c.right())] {
        if **p.source() != *w {
            return Err(MorphismError::SourceTargetMismatch(format!("{name} does not start at W")).into());
        }
        if p.target() != target {
            return Err(MorphismError::SourceTargetMismatch(format!(
                "{name} does not end at its leg of the formation"
            ))
            .into());
        }
    }
    let mut out = Vec::new();
    frame_findings("W", mode.frame_checks(w), &mut out);
    map_findings("p1", mode, p1, &mut out);
    map_findings("p2", mode, p2, &mut out);
    out.push(commutation(c, p1, p2));
    Ok(AmalgamReport::from_findings(out))
}

fn commutation(c: &CoVFormation, p1: &FrameMap, p2: &FrameMap) -> Finding {
    let w = p1.source();
    let bad = (0..w.len()).find(|&x| c.f.apply(p1.apply(x)) != c.g.apply(p2.apply(x)));
    Finding {
        subject: "square".into(),
        condition: "COMMUTES".into(),
        holds: bad.is_none(),
        witness: bad.map(|x| {
            let base = c.base();
            vec![
                w.name(x).to_string(),
                base.name(c.f.apply(p1.apply(x))).to_string(),
                base.name(c.g.apply(p2.apply(x))).to_string(),
            ]
        }),
    }
}

/// The pullback frame with its two projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub frame: Arc<Frame>,
    pub p1: FrameMap,
    pub p2: FrameMap,
    /// `(left, right)` node indices of each pullback node.
    pub pairs: Vec<(usize, usize)>,
}

/// Pairs with equal base image, ordered by left node then right node, with
/// the componentwise order and relation. Nodes are named `(a,b)`.
pub fn pullback(c: &CoVFormation) -> Pullback {
    let (l, r) = (c.left(), c.right());
    let pairs: Vec<(usize, usize)> = (0..l.len())
        .flat_map(|a| (0..r.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| c.f.apply(a) == c.g.apply(b))
        .collect();
    let names = pairs
        .iter()
        .map(|&(a, b)| format!("({},{})", l.name(a), r.name(b)))
        .collect();
    let mut le = Vec::new();
    let mut rel = Vec::new();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(a2, b2)) in pairs.iter().enumerate() {
            if i != j && l.le(a, a2) && r.le(b, b2) {
                le.push((i, j));
            }
            if l.r(a, a2) && r.r(b, b2) {
                rel.push((i, j));
            }
        }
    }
    let frame = Arc::new(Frame::from_indices(names, &le, &rel).expect("componentwise order is antisymmetric"));
    let p1 = FrameMap::new(frame.clone(), l.clone(), pairs.iter().map(|p| p.0).collect()).expect("valid table");
    let p2 = FrameMap::new(frame.clone(), r.clone(), pairs.iter().map(|p| p.1).collect()).expect("valid table");
    Pullback { frame, p1, p2, pairs }
}

/// Checks that the pullback of an iK formation of the given class is an
/// iK co-amalgam of the same class.
pub fn check_pullback_properties(c: &CoVFormation, class: LogicClass) -> Result<AmalgamReport, AmalgamError> {
    let mut pre = validate_formation(c, Mode::IK).findings;
    for (subject, frame) in [("base", c.base()), ("left", c.left()), ("right", c.right())] {
        frame_findings(subject, vec![class.check(frame)], &mut pre);
    }
    let pre = AmalgamReport::from_findings(pre);
    if !pre.holds {
        return Err(AmalgamError::FormationInvalid(pre));
    }
    let pb = pullback(c);
    let mut report = check_coamalgam(c, &pb.frame, &pb.p1, &pb.p2, Mode::IK)?;
    let class_check = class.check(&pb.frame);
    report.findings.insert(
        1,
        Finding {
            subject: "W".into(),
            condition: class_check.condition.to_string(),
            holds: class_check.holds,
            witness: class_check.witness,
        },
    );
    report.holds = report.findings.iter().all(|f| f.holds);
    Ok(report)
}

/// The map `x ↦ (p1(x), p2(x))` from a co-amalgam into the pullback, if
/// every such pair is a pullback node.
pub fn mediating_map(pb: &Pullback, p1: &FrameMap, p2: &FrameMap) -> Option<FrameMap> {
    let w = p1.source();
    let table = (0..w.len())
        .map(|x| pb.pairs.iter().position(|&q| q == (p1.apply(x), p2.apply(x))))
        .collect::<Option<Vec<_>>>()?;
    FrameMap::new(w.clone(), pb.frame.clone(), table).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> Arc<Frame> {
        Arc::new(Frame::from_edges(&["a", "b"], &[("a", "b")], &[("a", "b"), ("b", "b")]).unwrap())
    }

    #[test]
    fn identity_formation_is_valid_and_its_own_coamalgam() {
        let f = chain();
        let c = CoVFormation::identity(f.clone());
        assert!(validate_formation(&c, Mode::FS).holds);
        let id = FrameMap::identity(f.clone());
        assert!(check_coamalgam(&c, &f, &id, &id, Mode::FS).unwrap().holds);
    }

    #[test]
    fn pullback_of_identity_is_diagonal() {
        let c = CoVFormation::identity(chain());
        let pb = pullback(&c);
        assert_eq!(pb.frame.len(), 2);
        assert_eq!(pb.pairs, vec![(0, 0), (1, 1)]);
        assert!(check_coamalgam(&c, &pb.frame, &pb.p1, &pb.p2, Mode::FS).unwrap().holds);
    }

    #[test]
    fn commutation_failure_names_the_node() {
        let f = chain();
        let c = CoVFormation::identity(f.clone());
        let id = FrameMap::identity(f.clone());
        let flip = FrameMap::new(f.clone(), f.clone(), vec![1, 0]).unwrap();
        let r = check_coamalgam(&c, &f, &id, &flip, Mode::FS).unwrap();
        let last = r.findings.last().unwrap();
        assert!(!last.holds);
        assert_eq!(last.witness.as_ref().unwrap(), &["a", "a", "b"]);
    }

    #[test]
    fn non_surjective_leg_is_rejected() {
        let base = Arc::new(Frame::from_edges(&["u", "v"], &[] as &[(&str, &str)], &[]).unwrap());
        let pt = Arc::new(Frame::from_edges(&["p"], &[] as &[(&str, &str)], &[]).unwrap());
        let f = FrameMap::identity(base.clone());
        let g = FrameMap::new(pt, base, vec![0]).unwrap();
        let c = CoVFormation::new(f, g).unwrap();
        let err = check_pullback_properties(&c, LogicClass::IK4).unwrap_err();
        assert!(matches!(err, AmalgamError::FormationInvalid(_)));
    }
}
