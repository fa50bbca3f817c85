//! Saturation prover for the nonexistence of co-amalgams.
//!
//! The chase builds a partial description of a hypothetical co-amalgam `W`.
//! Each element carries a pair-domain: the `(p1(w), p2(w))` values still
//! possible for it. Facts `w ≤ w'` and `w R w'` are only ever added when
//! every co-amalgam must contain them, and pairs are only ever removed when
//! no co-amalgam could map the element there. An empty domain therefore
//! proves that no co-amalgam of any size exists.
//!
//! Scheduling is fixed: prune to fixpoint, then apply the first open
//! creation obligation (frame rules, then morphism back conditions by
//! element age, then surjectivity seeds). Elements are never merged.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{validate_formation, AmalgamError, CoVFormation, Mode};
use crate::frame::Frame;
use crate::nodeset::NodeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChaseConfig {
    pub max_elements: usize,
    pub max_splits: usize,
}

impl Default for ChaseConfig {
    fn default() -> Self {
        Self {
            max_elements: 32,
            max_splits: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rule {
    Seed,
    PruneForth,
    PruneCommute,
    Compat,
    CreateLeBack,
    CreateWeakBack,
    CreateStrongBack,
    CreateRBounded,
    CreateF1,
    CreateF2,
}

impl Rule {
    /// The condition every co-amalgam satisfies that licenses this rule.
    pub fn justification(self) -> &'static str {
        match self {
            Rule::Seed => "p1 and p2 are surjective",
            Rule::PruneForth => "p1 and p2 preserve <= and R",
            Rule::PruneCommute => "the square commutes: f p1 = g p2",
            Rule::Compat => "W is an iK-frame: R = <= R <=",
            Rule::CreateLeBack => "<=-back condition of p1/p2",
            Rule::CreateWeakBack => "R weak back condition of p1/p2",
            Rule::CreateStrongBack => "strong back condition of p1/p2",
            Rule::CreateRBounded => "R-bounded back condition of p1/p2",
            Rule::CreateF1 => "W satisfies F1",
            Rule::CreateF2 => "W satisfies F2",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One open creation obligation, in element indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Obligation {
    Seed { side: Side, node: usize },
    F1 { e: usize, e2: usize, d: usize },
    F2 { e: usize, d: usize, d2: usize },
    LeBack { side: Side, w: usize, target: usize },
    WeakBack { side: Side, w: usize, target: usize },
    StrongBack { side: Side, w: usize, target: usize },
    RBounded { side: Side, w: usize, target: usize },
}

impl Obligation {
    fn rule(self) -> Rule {
        match self {
            Obligation::Seed { .. } => Rule::Seed,
            Obligation::F1 { .. } => Rule::CreateF1,
            Obligation::F2 { .. } => Rule::CreateF2,
            Obligation::LeBack { .. } => Rule::CreateLeBack,
            Obligation::WeakBack { .. } => Rule::CreateWeakBack,
            Obligation::StrongBack { .. } => Rule::CreateStrongBack,
            Obligation::RBounded { .. } => Rule::CreateRBounded,
        }
    }

    fn fresh(self) -> usize {
        match self {
            Obligation::StrongBack { .. } => 2,
            _ => 1,
        }
    }

    fn premises(self) -> Vec<usize> {
        match self {
            Obligation::Seed { .. } => vec![],
            Obligation::F1 { e, e2, d } => vec![e, e2, d],
            Obligation::F2 { e, d, d2 } => vec![e, d, d2],
            Obligation::LeBack { w, .. }
            | Obligation::WeakBack { w, .. }
            | Obligation::StrongBack { w, .. }
            | Obligation::RBounded { w, .. } => vec![w],
        }
    }

    fn side_target(self) -> Option<(Side, usize)> {
        match self {
            Obligation::Seed { side, node } => Some((side, node)),
            Obligation::LeBack { side, target, .. }
            | Obligation::WeakBack { side, target, .. }
            | Obligation::StrongBack { side, target, .. }
            | Obligation::RBounded { side, target, .. } => Some((side, target)),
            Obligation::F1 { .. } | Obligation::F2 { .. } => None,
        }
    }
}

/// One rule application. Creation steps drive replay; prune and compat
/// steps are derived and recorded for the reader.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub justification: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub created: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub facts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub removed: Vec<(String, String)>,
    #[serde(skip)]
    obligation: Option<Obligation>,
}

impl TraceStep {
    fn derived(rule: Rule) -> Self {
        Self {
            rule,
            justification: rule.justification(),
            premises: vec![],
            side: None,
            target: None,
            created: vec![],
            facts: vec![],
            element: None,
            removed: vec![],
            obligation: None,
        }
    }

    pub fn is_creation(&self) -> bool {
        self.obligation.is_some()
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule)?;
        if !self.premises.is_empty() {
            write!(f, " on {}", self.premises.join(", "))?;
        }
        if let (Some(side), Some(t)) = (self.side, &self.target) {
            write!(f, " [{side:?} {t}]")?;
        }
        if !self.created.is_empty() {
            write!(f, " creates {}", self.created.join(", "))?;
        }
        if !self.facts.is_empty() {
            write!(f, " with {}", self.facts.join(", "))?;
        }
        if let Some(e) = &self.element {
            let pairs: Vec<String> = self.removed.iter().map(|(a, b)| format!("({a},{b})")).collect();
            write!(f, " drops {} from {e}", pairs.join(" "))?;
        }
        Ok(())
    }
}

/// Where an element came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementInfo {
    pub name: String,
    pub rule: Rule,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parents: Vec<String>,
}

/// The element whose domain emptied, its last candidates and their base
/// values under `f` and `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contradiction {
    pub element: String,
    pub rule: Rule,
    pub candidates: Vec<(String, String)>,
    pub base_values: Vec<(String, String)>,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cands: Vec<String> = self.candidates.iter().map(|(a, b)| format!("({a},{b})")).collect();
        let vals: Vec<String> = self.base_values.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(
            f,
            "{} emptied by {}: candidates {} with base values {}",
            self.element,
            self.rule,
            cands.join(" "),
            vals.join(" ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub steps: Vec<TraceStep>,
    pub genealogy: Vec<ElementInfo>,
    pub end: DerivationEnd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivationEnd {
    Contradiction(Contradiction),
    /// Every choice of pair for `element` leads to a contradiction.
    Split {
        element: String,
        branches: Vec<Branch>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub pair: (String, String),
    pub derivation: Derivation,
}

impl Derivation {
    fn element_count(&self) -> usize {
        self.genealogy.len()
            + match &self.end {
                DerivationEnd::Contradiction(_) => 0,
                DerivationEnd::Split { branches, .. } => branches.iter().map(|b| b.derivation.element_count()).sum(),
            }
    }

    fn split_count(&self) -> usize {
        match &self.end {
            DerivationEnd::Contradiction(_) => 0,
            DerivationEnd::Split { branches, .. } => {
                1 + branches.iter().map(|b| b.derivation.split_count()).sum::<usize>()
            }
        }
    }
}

/// Proof that a formation has no co-amalgam.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefutationCertificate {
    pub mode: Mode,
    /// Elements created across all branches.
    pub elements: usize,
    pub splits: usize,
    pub derivation: Derivation,
}

impl RefutationCertificate {
    /// The contradiction closing the first branch.
    pub fn contradiction(&self) -> &Contradiction {
        let mut d = &self.derivation;
        loop {
            match &d.end {
                DerivationEnd::Contradiction(c) => return c,
                DerivationEnd::Split { branches, .. } => d = &branches[0].derivation,
            }
        }
    }

    /// Re-executes the recorded creations against `c`, re-deriving every
    /// pruning step, and checks that the same trace and contradiction result.
    pub fn replay(&self, c: &CoVFormation) -> Result<(), ReplayError> {
        let ctx = Ctx::new(c, self.mode);
        ctx.replay(State::default(), &self.derivation)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: recorded obligation is not enabled")]
    NotEnabled { step: usize },
    #[error("step {step}: re-derived step differs from the record")]
    StepMismatch { step: usize },
    #[error("contradiction reached before the recorded trace ended")]
    EarlyContradiction,
    #[error("re-derived contradiction differs from the record")]
    ContradictionMismatch,
    #[error("split branches do not match the element's domain")]
    SplitMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InconclusiveReason {
    ElementBudget,
    SplitBudget,
    /// Every obligation is met and every domain is a single pair.
    Saturated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inconclusive {
    pub reason: InconclusiveReason,
    pub elements: usize,
    pub splits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ChaseOutcome {
    Refuted(RefutationCertificate),
    Inconclusive(Inconclusive),
}

impl ChaseOutcome {
    pub fn certificate(&self) -> Option<&RefutationCertificate> {
        match self {
            ChaseOutcome::Refuted(c) => Some(c),
            ChaseOutcome::Inconclusive(_) => None,
        }
    }
}

/// Runs the chase on a formation that validates in `mode`.
pub fn chase_refute(c: &CoVFormation, mode: Mode, config: ChaseConfig) -> Result<ChaseOutcome, AmalgamError> {
    let report = validate_formation(c, mode);
    if !report.holds {
        return Err(AmalgamError::FormationInvalid(report));
    }
    let ctx = Ctx::new(c, mode);
    let mut splits = 0;
    let mut peak = 0;
    Ok(match ctx.derive(State::default(), &config, &mut splits, &mut peak) {
        Ok(derivation) => ChaseOutcome::Refuted(RefutationCertificate {
            mode,
            elements: derivation.element_count(),
            splits: derivation.split_count(),
            derivation,
        }),
        Err(reason) => ChaseOutcome::Inconclusive(Inconclusive {
            reason,
            elements: peak,
            splits,
        }),
    })
}

#[derive(Debug, Clone, Default)]
struct State {
    dom: Vec<NodeSet>,
    /// Reflexive-transitive closure of the asserted order facts.
    le: Vec<Vec<bool>>,
    r: Vec<Vec<bool>>,
    genealogy: Vec<ElementInfo>,
}

impl State {
    fn len(&self) -> usize {
        self.dom.len()
    }

    fn name(i: usize) -> String {
        format!("w{i}")
    }

    fn add(&mut self, dom: NodeSet, rule: Rule, parents: &[usize]) -> usize {
        let i = self.len();
        self.dom.push(dom);
        for row in self.le.iter_mut().chain(self.r.iter_mut()) {
            row.push(false);
        }
        let mut le_row = vec![false; i + 1];
        le_row[i] = true;
        self.le.push(le_row);
        self.r.push(vec![false; i + 1]);
        self.genealogy.push(ElementInfo {
            name: Self::name(i),
            rule,
            parents: parents.iter().map(|&p| Self::name(p)).collect(),
        });
        i
    }

    fn assert_le(&mut self, u: usize, v: usize) {
        let below: Vec<usize> = (0..self.len()).filter(|&x| self.le[x][u]).collect();
        let above: Vec<usize> = (0..self.len()).filter(|&y| self.le[v][y]).collect();
        for &x in &below {
            for &y in &above {
                self.le[x][y] = true;
            }
        }
    }
}

struct Ctx<'a> {
    c: &'a CoVFormation,
    mode: Mode,
    nl: usize,
    nr: usize,
    /// `R[↑x]` per left/right node.
    le_r: [Vec<NodeSet>; 2],
}

impl<'a> Ctx<'a> {
    fn new(c: &'a CoVFormation, mode: Mode) -> Self {
        Self {
            c,
            mode,
            nl: c.left().len(),
            nr: c.right().len(),
            le_r: [c.left().le_then_r(), c.right().le_then_r()],
        }
    }

    fn frame(&self, side: Side) -> &Frame {
        match side {
            Side::Left => self.c.left(),
            Side::Right => self.c.right(),
        }
    }

    fn pair(&self, p: usize) -> (usize, usize) {
        (p / self.nr, p % self.nr)
    }

    fn pair_names(&self, p: usize) -> (String, String) {
        let (a, b) = self.pair(p);
        (self.c.left().name(a).to_string(), self.c.right().name(b).to_string())
    }

    fn base_names(&self, p: usize) -> (String, String) {
        let (a, b) = self.pair(p);
        let base = self.c.base();
        (
            base.name(self.c.f().apply(a)).to_string(),
            base.name(self.c.g().apply(b)).to_string(),
        )
    }

    fn universe(&self) -> usize {
        self.nl * self.nr
    }

    /// Pairs whose `side` component lies in `nodes`.
    fn pairs_with(&self, side: Side, nodes: &NodeSet) -> NodeSet {
        NodeSet::from_iter(
            self.universe(),
            (0..self.universe()).filter(|&p| {
                let (a, b) = self.pair(p);
                nodes.contains(if side == Side::Left { a } else { b })
            }),
        )
    }

    fn projection(&self, side: Side, dom: &NodeSet) -> NodeSet {
        let n = self.frame(side).len();
        NodeSet::from_iter(
            n,
            dom.iter().map(|p| {
                let (a, b) = self.pair(p);
                if side == Side::Left {
                    a
                } else {
                    b
                }
            }),
        )
    }

    /// Intersection of `rows[x]` over the projection of the domain.
    fn common(&self, side: Side, dom: &NodeSet, rows: impl Fn(usize) -> NodeSet) -> NodeSet {
        let mut acc = self.frame(side).all_nodes();
        for x in self.projection(side, dom).iter() {
            acc.intersect_with(&rows(x));
        }
        acc
    }

    fn side_index(side: Side) -> usize {
        match side {
            Side::Left => 0,
            Side::Right => 1,
        }
    }

    fn le_targets(&self, st: &State, side: Side, w: usize) -> NodeSet {
        let fr = self.frame(side);
        self.common(side, &st.dom[w], |x| fr.up(x).clone())
    }

    fn r_targets(&self, st: &State, side: Side, w: usize) -> NodeSet {
        let fr = self.frame(side);
        self.common(side, &st.dom[w], |x| fr.successors(x).clone())
    }

    fn strong_targets(&self, st: &State, side: Side, w: usize) -> NodeSet {
        let rows = &self.le_r[Self::side_index(side)];
        self.common(side, &st.dom[w], |x| rows[x].clone())
    }

    fn proj_within(&self, st: &State, side: Side, e: usize, allowed: &NodeSet) -> bool {
        self.projection(side, &st.dom[e]).is_subset(allowed)
    }

    fn back_kinds(&self) -> &'static [Rule] {
        match self.mode {
            Mode::FS => &[Rule::CreateWeakBack, Rule::CreateLeBack, Rule::CreateStrongBack],
            Mode::IK => &[Rule::CreateRBounded, Rule::CreateLeBack],
        }
    }

    fn back_obligation(&self, st: &State, kind: Rule, side: Side, w: usize) -> Option<Obligation> {
        let fr = self.frame(side);
        let n = st.len();
        match kind {
            Rule::CreateLeBack => self.le_targets(st, side, w).iter().find_map(|t| {
                let only = NodeSet::singleton(fr.len(), t);
                let met = (0..n).any(|v| st.le[w][v] && self.proj_within(st, side, v, &only));
                (!met).then_some(Obligation::LeBack { side, w, target: t })
            }),
            Rule::CreateWeakBack => self.r_targets(st, side, w).iter().find_map(|t| {
                let met = (0..n).any(|v| st.r[w][v] && self.proj_within(st, side, v, fr.up(t)));
                (!met).then_some(Obligation::WeakBack { side, w, target: t })
            }),
            Rule::CreateRBounded => self.r_targets(st, side, w).iter().find_map(|t| {
                let only = NodeSet::singleton(fr.len(), t);
                let met = (0..n).any(|v| st.r[w][v] && self.proj_within(st, side, v, &only));
                (!met).then_some(Obligation::RBounded { side, w, target: t })
            }),
            Rule::CreateStrongBack => self.strong_targets(st, side, w).iter().find_map(|t| {
                let met = (0..n)
                    .any(|e| st.le[w][e] && (0..n).any(|v| st.r[e][v] && self.proj_within(st, side, v, fr.down(t))));
                (!met).then_some(Obligation::StrongBack { side, w, target: t })
            }),
            _ => None,
        }
    }

    /// The first open obligation in scheduling order.
    fn next_obligation(&self, st: &State) -> Option<Obligation> {
        let n = st.len();
        if self.mode == Mode::FS {
            for e in 0..n {
                for e2 in (0..n).filter(|&e2| e2 != e && st.le[e][e2]) {
                    for d in (0..n).filter(|&d| st.r[e][d]) {
                        if !(0..n).any(|d2| st.r[e2][d2] && st.le[d][d2]) {
                            return Some(Obligation::F1 { e, e2, d });
                        }
                    }
                }
            }
            for e in 0..n {
                for d in (0..n).filter(|&d| st.r[e][d]) {
                    for d2 in (0..n).filter(|&d2| d2 != d && st.le[d][d2]) {
                        if !(0..n).any(|e2| st.le[e][e2] && st.r[e2][d2]) {
                            return Some(Obligation::F2 { e, d, d2 });
                        }
                    }
                }
            }
        }
        for w in 0..n {
            for &kind in self.back_kinds() {
                for side in [Side::Left, Side::Right] {
                    if let Some(ob) = self.back_obligation(st, kind, side, w) {
                        return Some(ob);
                    }
                }
            }
        }
        for side in [Side::Left, Side::Right] {
            let fr = self.frame(side);
            for node in 0..fr.len() {
                let only = NodeSet::singleton(fr.len(), node);
                if !(0..n).any(|e| self.proj_within(st, side, e, &only)) {
                    return Some(Obligation::Seed { side, node });
                }
            }
        }
        None
    }

    /// Whether the premises of `ob` hold in `st`; satisfaction is not required.
    fn is_enabled(&self, st: &State, ob: Obligation) -> bool {
        let n = st.len();
        let ok = |i: usize| i < n;
        match ob {
            Obligation::Seed { side, node } => node < self.frame(side).len(),
            Obligation::F1 { e, e2, d } => {
                self.mode == Mode::FS && ok(e) && ok(e2) && ok(d) && st.le[e][e2] && st.r[e][d]
            }
            Obligation::F2 { e, d, d2 } => {
                self.mode == Mode::FS && ok(e) && ok(d) && ok(d2) && st.r[e][d] && st.le[d][d2]
            }
            Obligation::LeBack { side, w, target } => ok(w) && self.le_targets(st, side, w).contains(target),
            Obligation::WeakBack { side, w, target } => {
                self.mode == Mode::FS && ok(w) && self.r_targets(st, side, w).contains(target)
            }
            Obligation::RBounded { side, w, target } => {
                self.mode == Mode::IK && ok(w) && self.r_targets(st, side, w).contains(target)
            }
            Obligation::StrongBack { side, w, target } => {
                self.mode == Mode::FS && ok(w) && self.strong_targets(st, side, w).contains(target)
            }
        }
    }

    fn apply(&self, st: &mut State, ob: Obligation) -> TraceStep {
        let full = NodeSet::full(self.universe());
        let at = |side: Side, nodes: NodeSet| self.pairs_with(side, &nodes);
        let mut le_facts = Vec::new();
        let mut r_facts = Vec::new();
        let premises = ob.premises();
        let rule = ob.rule();
        let start = st.len();
        match ob {
            Obligation::Seed { side, node } => {
                let n = self.frame(side).len();
                st.add(at(side, NodeSet::singleton(n, node)), rule, &[]);
            }
            Obligation::F1 { e2, d, .. } => {
                let d2 = st.add(full, rule, &premises);
                r_facts.push((e2, d2));
                le_facts.push((d, d2));
            }
            Obligation::F2 { e, d2, .. } => {
                let e2 = st.add(full, rule, &premises);
                le_facts.push((e, e2));
                r_facts.push((e2, d2));
            }
            Obligation::LeBack { side, w, target } => {
                let n = self.frame(side).len();
                let v = st.add(at(side, NodeSet::singleton(n, target)), rule, &premises);
                le_facts.push((w, v));
            }
            Obligation::WeakBack { side, w, target } => {
                let v = st.add(at(side, self.frame(side).up(target).clone()), rule, &premises);
                r_facts.push((w, v));
            }
            Obligation::RBounded { side, w, target } => {
                let n = self.frame(side).len();
                let v = st.add(at(side, NodeSet::singleton(n, target)), rule, &premises);
                r_facts.push((w, v));
            }
            Obligation::StrongBack { side, w, target } => {
                let e = st.add(full, rule, &premises);
                let v = st.add(at(side, self.frame(side).down(target).clone()), rule, &premises);
                le_facts.push((w, e));
                r_facts.push((e, v));
            }
        }
        for &(u, v) in &le_facts {
            st.assert_le(u, v);
        }
        for &(u, v) in &r_facts {
            st.r[u][v] = true;
        }
        let mut facts: Vec<String> = le_facts
            .iter()
            .map(|&(u, v)| format!("{} <= {}", State::name(u), State::name(v)))
            .collect();
        facts.extend(
            r_facts
                .iter()
                .map(|&(u, v)| format!("{} R {}", State::name(u), State::name(v))),
        );
        let (side, target) = match ob.side_target() {
            Some((s, t)) => (Some(s), Some(self.frame(s).name(t).to_string())),
            None => (None, None),
        };
        TraceStep {
            premises: premises.into_iter().map(State::name).collect(),
            side,
            target,
            created: (start..st.len()).map(State::name).collect(),
            facts,
            obligation: Some(ob),
            ..TraceStep::derived(rule)
        }
    }

    /// Closes `R` under `≤∘R∘≤` (iK mode only).
    fn compat(&self, st: &mut State, steps: &mut Vec<TraceStep>) {
        if self.mode != Mode::IK {
            return;
        }
        let n = st.len();
        let mut added = Vec::new();
        for e in 0..n {
            for e3 in 0..n {
                if st.r[e][e3] {
                    continue;
                }
                let derived = (0..n).any(|e1| st.le[e][e1] && (0..n).any(|e2| st.r[e1][e2] && st.le[e2][e3]));
                if derived {
                    added.push((e, e3));
                }
            }
        }
        if added.is_empty() {
            return;
        }
        for &(u, v) in &added {
            st.r[u][v] = true;
        }
        steps.push(TraceStep {
            facts: added
                .iter()
                .map(|&(u, v)| format!("{} R {}", State::name(u), State::name(v)))
                .collect(),
            ..TraceStep::derived(Rule::Compat)
        });
    }

    fn supported(&self, rel: fn(&Frame, usize, usize) -> bool, p: usize, q: usize) -> bool {
        let (a, b) = self.pair(p);
        let (a2, b2) = self.pair(q);
        rel(self.c.left(), a, a2) && rel(self.c.right(), b, b2)
    }

    /// Restricts `dom[x]` to `keep`, recording the step; returns a
    /// contradiction if the domain empties.
    fn restrict(
        &self,
        st: &mut State,
        x: usize,
        keep: NodeSet,
        rule: Rule,
        premises: Vec<usize>,
        steps: &mut Vec<TraceStep>,
    ) -> Result<bool, Contradiction> {
        if keep == st.dom[x] {
            return Ok(false);
        }
        let removed = st.dom[x].difference(&keep);
        steps.push(TraceStep {
            premises: premises.into_iter().map(State::name).collect(),
            element: Some(State::name(x)),
            removed: removed.iter().map(|p| self.pair_names(p)).collect(),
            ..TraceStep::derived(rule)
        });
        if keep.is_empty() {
            return Err(Contradiction {
                element: State::name(x),
                rule,
                candidates: st.dom[x].iter().map(|p| self.pair_names(p)).collect(),
                base_values: st.dom[x].iter().map(|p| self.base_names(p)).collect(),
            });
        }
        st.dom[x] = keep;
        Ok(true)
    }

    /// Forth pruning to fixpoint, then commutation pruning, until stable.
    fn prune(&self, st: &mut State, steps: &mut Vec<TraceStep>) -> Result<(), Contradiction> {
        let le: fn(&Frame, usize, usize) -> bool = Frame::le;
        let r: fn(&Frame, usize, usize) -> bool = Frame::r;
        loop {
            self.compat(st, steps);
            let mut changed = false;
            loop {
                let n = st.len();
                let mut facts = Vec::new();
                for u in 0..n {
                    for v in 0..n {
                        if u != v && st.le[u][v] {
                            facts.push((u, v, le));
                        }
                    }
                }
                for u in 0..n {
                    for v in 0..n {
                        if st.r[u][v] {
                            facts.push((u, v, r));
                        }
                    }
                }
                let mut inner = false;
                for (u, v, rel) in facts {
                    let keep_u = NodeSet::from_iter(
                        self.universe(),
                        st.dom[u]
                            .iter()
                            .filter(|&p| st.dom[v].iter().any(|q| self.supported(rel, p, q))),
                    );
                    inner |= self.restrict(st, u, keep_u, Rule::PruneForth, vec![u, v], steps)?;
                    let keep_v = NodeSet::from_iter(
                        self.universe(),
                        st.dom[v]
                            .iter()
                            .filter(|&q| st.dom[u].iter().any(|p| self.supported(rel, p, q))),
                    );
                    inner |= self.restrict(st, v, keep_v, Rule::PruneForth, vec![u, v], steps)?;
                }
                if !inner {
                    break;
                }
                changed = true;
            }
            for x in 0..st.len() {
                let keep = NodeSet::from_iter(
                    self.universe(),
                    st.dom[x].iter().filter(|&p| {
                        let (a, b) = self.pair(p);
                        self.c.f().apply(a) == self.c.g().apply(b)
                    }),
                );
                changed |= self.restrict(st, x, keep, Rule::PruneCommute, vec![], steps)?;
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn split_target(&self, st: &State) -> Option<usize> {
        (0..st.len())
            .filter(|&e| st.dom[e].len() > 1)
            .min_by_key(|&e| (st.dom[e].len(), e))
    }

    fn derive(
        &self,
        mut st: State,
        cfg: &ChaseConfig,
        splits: &mut usize,
        peak: &mut usize,
    ) -> Result<Derivation, InconclusiveReason> {
        let start = st.len();
        let mut steps = Vec::new();
        loop {
            if let Err(c) = self.prune(&mut st, &mut steps) {
                return Ok(Derivation {
                    steps,
                    genealogy: st.genealogy[start..].to_vec(),
                    end: DerivationEnd::Contradiction(c),
                });
            }
            match self.next_obligation(&st) {
                Some(ob) => {
                    if st.len() + ob.fresh() > cfg.max_elements {
                        return Err(InconclusiveReason::ElementBudget);
                    }
                    steps.push(self.apply(&mut st, ob));
                    *peak = (*peak).max(st.len());
                }
                None => {
                    let e = self.split_target(&st).ok_or(InconclusiveReason::Saturated)?;
                    if *splits >= cfg.max_splits {
                        return Err(InconclusiveReason::SplitBudget);
                    }
                    *splits += 1;
                    let mut branches = Vec::new();
                    for p in st.dom[e].iter() {
                        let mut child = st.clone();
                        child.dom[e] = NodeSet::singleton(self.universe(), p);
                        let derivation = self.derive(child, cfg, splits, peak)?;
                        branches.push(Branch {
                            pair: self.pair_names(p),
                            derivation,
                        });
                    }
                    return Ok(Derivation {
                        steps,
                        genealogy: st.genealogy[start..].to_vec(),
                        end: DerivationEnd::Split {
                            element: State::name(e),
                            branches,
                        },
                    });
                }
            }
        }
    }

    fn replay(&self, mut st: State, d: &Derivation) -> Result<(), ReplayError> {
        let mut steps = Vec::new();
        for recorded in d.steps.iter().filter_map(|s| s.obligation) {
            if self.prune(&mut st, &mut steps).is_err() {
                return Err(ReplayError::EarlyContradiction);
            }
            if !self.is_enabled(&st, recorded) {
                return Err(ReplayError::NotEnabled { step: steps.len() });
            }
            steps.push(self.apply(&mut st, recorded));
        }
        let outcome = self.prune(&mut st, &mut steps);
        if let Some(i) = (0..steps.len().max(d.steps.len())).find(|&i| steps.get(i) != d.steps.get(i)) {
            return Err(ReplayError::StepMismatch { step: i });
        }
        match (&d.end, outcome) {
            (DerivationEnd::Contradiction(want), Err(got)) if *want == got => Ok(()),
            (DerivationEnd::Contradiction(_), _) => Err(ReplayError::ContradictionMismatch),
            (DerivationEnd::Split { .. }, Err(_)) => Err(ReplayError::EarlyContradiction),
            (DerivationEnd::Split { element, branches }, Ok(())) => {
                let e = (0..st.len())
                    .find(|&e| State::name(e) == *element)
                    .ok_or(ReplayError::SplitMismatch)?;
                let pairs: Vec<usize> = st.dom[e].iter().collect();
                if pairs.len() != branches.len() {
                    return Err(ReplayError::SplitMismatch);
                }
                for (&p, b) in pairs.iter().zip(branches) {
                    if self.pair_names(p) != b.pair {
                        return Err(ReplayError::SplitMismatch);
                    }
                    let mut child = st.clone();
                    child.dom[e] = NodeSet::singleton(self.universe(), p);
                    self.replay(child, &b.derivation)?;
                }
                Ok(())
            }
        }
    }
}
