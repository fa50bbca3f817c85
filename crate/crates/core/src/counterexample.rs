//! The seven/eight/eight-node co-V-formation whose failure to co-amalgamate
//! witnesses the failure of interpolation for IK, its reflexive variant,
//! and a replay of every claim about them as one structured report.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::amalgam::{chase_refute, check_coamalgam, pullback, ChaseConfig, ChaseOutcome, CoVFormation, Mode};
use crate::frame::Frame;
use crate::morphism::FrameMap;
use crate::semantics::{axiom_suite, Logic, DEFAULT_BUDGET};

type Edges = &'static [(&'static str, &'static str)];

const Z_NODES: &[&str] = &["z0", "z1", "z2", "k0", "k2", "k3", "k4"];
const Z_LE: Edges = &[("z0", "z2"), ("z1", "k0"), ("z1", "k2"), ("z0", "k3"), ("z0", "k4")];
const Z_R: Edges = &[("z0", "z1"), ("z2", "k0"), ("z2", "k2"), ("k3", "k0"), ("k4", "k2")];

const X_NODES: &[&str] = &["x0", "x1", "x2", "a0", "a1", "a2", "a3", "a4"];
const X_LE: Edges = &[("x1", "a0"), ("x0", "x2"), ("x1", "a2"), ("x0", "a3"), ("x0", "a4")];
const X_R: Edges = &[("x0", "x1"), ("x2", "a0"), ("x2", "a1"), ("a3", "a0"), ("a4", "a2")];

const Y_NODES: &[&str] = &["y0", "y1", "y2", "b0", "b1", "b2", "b3", "b4"];
const Y_LE: Edges = &[("y0", "y2"), ("y1", "b2"), ("y1", "b0"), ("y0", "b3"), ("y0", "b4")];
const Y_R: Edges = &[("y0", "y1"), ("y2", "b2"), ("y2", "b1"), ("b3", "b0"), ("b4", "b2")];

const F_MAP: Edges = &[
    ("x0", "z0"),
    ("x1", "z1"),
    ("x2", "z2"),
    ("a0", "k0"),
    ("a1", "k2"),
    ("a2", "k2"),
    ("a3", "k3"),
    ("a4", "k4"),
];
const G_MAP: Edges = &[
    ("y0", "z0"),
    ("y1", "z1"),
    ("y2", "z2"),
    ("b0", "k0"),
    ("b1", "k0"),
    ("b2", "k2"),
    ("b3", "k3"),
    ("b4", "k4"),
];

fn frame(nodes: &[&str], le: Edges, r: Edges) -> Arc<Frame> {
    Arc::new(Frame::from_edges(nodes, le, r).expect("embedded frame is well formed"))
}

pub fn frame_z() -> Arc<Frame> {
    frame(Z_NODES, Z_LE, Z_R)
}

pub fn frame_x() -> Arc<Frame> {
    frame(X_NODES, X_LE, X_R)
}

pub fn frame_y() -> Arc<Frame> {
    frame(Y_NODES, Y_LE, Y_R)
}

/// Builds the formation from (possibly altered) copies of X, Y and Z.
pub fn formation_from(z: Arc<Frame>, x: Arc<Frame>, y: Arc<Frame>) -> CoVFormation {
    let f = FrameMap::from_pairs(x, z.clone(), F_MAP).expect("f covers X");
    let g = FrameMap::from_pairs(y, z, G_MAP).expect("g covers Y");
    CoVFormation::new(f, g).expect("common base")
}

/// `(Z, X, Y, f, g)`.
pub fn paper_formation() -> CoVFormation {
    formation_from(frame_z(), frame_x(), frame_y())
}

/// The same formation with `R` made reflexive on all three frames.
pub fn reflexive_variant() -> CoVFormation {
    paper_formation().map_frames(Frame::reflexive_closure)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DemoStep {
    pub step: String,
    /// The mathematical claim this step confirms.
    pub paper_ref: String,
    pub status: Status,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DemoReport {
    pub steps: Vec<DemoStep>,
}

impl DemoReport {
    pub fn all_pass(&self) -> bool {
        self.steps.iter().all(|s| s.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_table(&self) -> String {
        render_table(
            &["step", "status", "details"],
            self.steps
                .iter()
                .map(|s| {
                    vec![
                        s.step.clone(),
                        match s.status {
                            Status::Pass => "PASS".into(),
                            Status::Fail => "FAIL".into(),
                        },
                        s.details.clone(),
                    ]
                })
                .collect(),
        )
    }
}

/// Plain fixed-width table; the last column is not padded.
pub fn render_table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let cols = header.len();
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (i, cell) in row.iter().enumerate().take(cols - 1) {
            width[i] = width[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &[String]| {
        for (i, cell) in cells.iter().enumerate() {
            if i + 1 < cols {
                let _ = write!(out, "{:<w$}  ", cell, w = width[i]);
            } else {
                out.push_str(cell);
            }
        }
        out.push('\n');
    };
    line(&mut out, &header.iter().map(|h| h.to_uppercase()).collect::<Vec<_>>());
    let rule: Vec<String> = width.iter().map(|&w| "-".repeat(w.max(3))).collect();
    line(&mut out, &rule);
    for row in &rows {
        line(&mut out, row);
    }
    out
}

struct Demo {
    steps: Vec<DemoStep>,
}

impl Demo {
    fn push(&mut self, step: impl Into<String>, claim: &str, ok: bool, details: impl Into<String>) {
        self.steps.push(DemoStep {
            step: step.into(),
            paper_ref: claim.into(),
            status: Status::from_bool(ok),
            details: details.into(),
        });
    }

    fn frames(&mut self, tag: &str, c: &CoVFormation, claim: &str) {
        for (name, fr) in [("Z", c.base()), ("X", c.left()), ("Y", c.right())] {
            let v = fr.is_fs_space();
            let details = match v.reports.iter().find(|r| !r.holds) {
                None => "F1, F2, MIXED hold".to_string(),
                Some(r) => r.to_string(),
            };
            self.push(
                format!("{tag}fs-space {name}{tag_suffix}", tag_suffix = prime(tag)),
                claim,
                v.holds,
                details,
            );
        }
    }

    fn maps(&mut self, tag: &str, c: &CoVFormation, claim: &str) {
        for (name, m) in [("f", c.f()), ("g", c.g())] {
            let rep = m.check_fs_morphism();
            let surj = m.is_surjective();
            let details = match (rep.first_failure(), surj) {
                (Some(fail), _) => fail.to_string(),
                (None, false) => format!("misses {}", m.uncovered().join(", ")),
                (None, true) => "surjective FS-morphism".into(),
            };
            self.push(format!("{tag}fs-morphism {name}"), claim, rep.holds && surj, details);
        }
    }

    fn axioms(&mut self, tag: &str, c: &CoVFormation, logic: Logic, claim: &str) {
        for (name, fr) in [("Z", c.base()), ("X", c.left()), ("Y", c.right())] {
            let step = format!("{tag}axioms {logic} {name}{}", prime(tag));
            match axiom_suite(fr, logic, DEFAULT_BUDGET) {
                Ok(rep) => {
                    let failing: Vec<&str> = rep.failing().map(|r| r.name).collect();
                    let details = if failing.is_empty() {
                        format!("{} schemes valid", rep.results.len())
                    } else {
                        format!("invalid: {}", failing.join(", "))
                    };
                    self.push(step, claim, rep.holds, details);
                }
                Err(e) => self.push(step, claim, false, e.to_string()),
            }
        }
    }

    fn chase(&mut self, tag: &str, c: &CoVFormation, expect: Option<Expected>, claim: &str) {
        let step = format!("{tag}chase refutation");
        match chase_refute(c, Mode::FS, ChaseConfig::default()) {
            Ok(ChaseOutcome::Refuted(cert)) => {
                let con = cert.contradiction();
                let replay = cert.replay(c);
                let mut ok = replay.is_ok();
                if let Some(e) = expect {
                    ok &= cert.elements == e.elements
                        && cert.splits == 0
                        && con.candidates == [(e.pair.0.to_string(), e.pair.1.to_string())]
                        && con.base_values == [(e.base.0.to_string(), e.base.1.to_string())];
                }
                let mut details = format!("{} elements, {} splits; {}", cert.elements, cert.splits, con);
                if let Err(err) = replay {
                    let _ = write!(details, "; replay failed: {err}");
                }
                self.push(step, claim, ok, details);
            }
            Ok(ChaseOutcome::Inconclusive(inc)) => self.push(
                step,
                claim,
                false,
                format!("inconclusive: {:?} after {} elements", inc.reason, inc.elements),
            ),
            Err(e) => self.push(step, claim, false, e.to_string()),
        }
    }
}

fn prime(tag: &str) -> &'static str {
    if tag.is_empty() {
        ""
    } else {
        "'"
    }
}

#[derive(Clone, Copy)]
struct Expected {
    elements: usize,
    pair: (&'static str, &'static str),
    base: (&'static str, &'static str),
}

const CLAIM_SPACES: &str = "X, Y, Z are FS-spaces";
const CLAIM_MORPHISMS: &str = "f and g are surjective FS-morphisms";
const CLAIM_CLASSES: &str = "the frames are transitive and their <= R composite is well founded";
const CLAIM_SOUND: &str = "every FS-frame validates the IK axioms";
const CLAIM_NO_COAMALGAM: &str = "FS-spaces are not closed under co-amalgamation, so IK lacks interpolation";
const CLAIM_VARIANT: &str = "the reflexive variant is still a co-V-formation of FS-frames";
const CLAIM_VARIANT_LOGIC: &str = "reflexive transitive frames validate IKT and IS4";
const CLAIM_VARIANT_CHASE: &str = "the same argument refutes a co-amalgam of the reflexive variant";
const CLAIM_PULLBACK: &str = "the pullback is not an FS co-amalgam of the formation";

/// Replays every claim on the embedded formation.
pub fn run_paper_demo() -> DemoReport {
    run_demo_with(&paper_formation())
}

/// The demo pipeline on an arbitrary formation (e.g. a sabotaged copy).
/// Every step runs regardless of earlier failures.
pub fn run_demo_with(c: &CoVFormation) -> DemoReport {
    let mut d = Demo { steps: Vec::new() };
    d.frames("", c, CLAIM_SPACES);
    d.maps("", c, CLAIM_MORPHISMS);
    for (name, fr) in [("Z", c.base()), ("X", c.left()), ("Y", c.right())] {
        let cls = fr.classify();
        let ok = cls.transitive.holds && cls.igl_wf.holds;
        let details = match [&cls.transitive, &cls.igl_wf].into_iter().find(|r| !r.holds) {
            None => "TRANSITIVE, IGL_WF hold".to_string(),
            Some(r) => r.to_string(),
        };
        d.push(format!("classify {name}"), CLAIM_CLASSES, ok, details);
    }
    d.axioms("", c, Logic::IK, CLAIM_SOUND);
    d.chase(
        "",
        c,
        Some(Expected {
            elements: 4,
            pair: ("a0", "b2"),
            base: ("k0", "k2"),
        }),
        CLAIM_NO_COAMALGAM,
    );

    let v = c.map_frames(Frame::reflexive_closure);
    d.frames("variant ", &v, CLAIM_VARIANT);
    d.maps("variant ", &v, CLAIM_VARIANT);
    d.axioms("variant ", &v, Logic::IKT, CLAIM_VARIANT_LOGIC);
    d.axioms("variant ", &v, Logic::IS4, CLAIM_VARIANT_LOGIC);
    d.chase("variant ", &v, None, CLAIM_VARIANT_CHASE);

    let pb = pullback(c);
    match check_coamalgam(c, &pb.frame, &pb.p1, &pb.p2, Mode::FS) {
        Ok(rep) => {
            let details = match rep.first_failure() {
                Some(f) => format!("{} nodes; first failure {f}", pb.frame.len()),
                None => format!("{} nodes; unexpectedly a co-amalgam", pb.frame.len()),
            };
            d.push("pullback", CLAIM_PULLBACK, !rep.holds, details);
        }
        Err(e) => d.push("pullback", CLAIM_PULLBACK, false, e.to_string()),
    }
    DemoReport { steps: d.steps }
}
