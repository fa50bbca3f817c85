//! Finite birelational frames `(X, ≤, R)` and their frame-level conditions.
//!
//! The order is stored reflexive-transitively closed; `R` is stored exactly
//! as given. Node order is the construction order and drives every
//! enumeration, so witnesses are always the first violating tuple in
//! lexicographic node order.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::nodeset::NodeSet;
use crate::report::Check;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("edge endpoint `{0}` is not a node")]
    UnknownEndpoint(String),
    #[error("order generators contain a cycle: {}", .0.join(" <= "))]
    OrderCycle(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FrameCondition {
    F1,
    F2,
    Mixed,
    IkCompat,
    Reflexive,
    Transitive,
    Preorder,
    IglWf,
}

impl fmt::Display for FrameCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameCondition::F1 => "F1",
            FrameCondition::F2 => "F2",
            FrameCondition::Mixed => "MIXED",
            FrameCondition::IkCompat => "IK_COMPAT",
            FrameCondition::Reflexive => "REFLEXIVE",
            FrameCondition::Transitive => "TRANSITIVE",
            FrameCondition::Preorder => "PREORDER",
            FrameCondition::IglWf => "IGL_WF",
        })
    }
}

pub type ConditionReport = Check<FrameCondition>;

/// Conjunction of several condition reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub reports: Vec<ConditionReport>,
}

impl Verdict {
    pub fn from_reports(reports: Vec<ConditionReport>) -> Self {
        Self {
            holds: reports.iter().all(|r| r.holds),
            reports,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub reflexive: ConditionReport,
    pub transitive: ConditionReport,
    pub preorder: ConditionReport,
    pub igl_wf: ConditionReport,
}

impl Classification {
    pub fn reports(&self) -> Vec<ConditionReport> {
        vec![
            self.reflexive.clone(),
            self.transitive.clone(),
            self.preorder.clone(),
            self.igl_wf.clone(),
        ]
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<NodeSet>,
    down: Vec<NodeSet>,
    succ: Vec<NodeSet>,
    pred: Vec<NodeSet>,
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Frame")
            .field("nodes", &self.nodes)
            .field("le", &self.le_generators_named())
            .field("r", &self.r_edges_named())
            .finish()
    }
}

impl Frame {
    /// Builds a frame from order generators (closed reflexively and
    /// transitively) and the exact accessibility edges.
    pub fn from_edges<N, E>(nodes: &[N], le_gen: &[(E, E)], r_edges: &[(E, E)]) -> Result<Frame, FrameError>
    where
        N: AsRef<str>,
        E: AsRef<str>,
    {
        let names: Vec<String> = nodes.iter().map(|n| n.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(FrameError::DuplicateNode(n.clone()));
            }
        }
        let lookup = |e: &E| {
            index
                .get(e.as_ref())
                .copied()
                .ok_or_else(|| FrameError::UnknownEndpoint(e.as_ref().to_string()))
        };
        let le: Vec<(usize, usize)> = le_gen
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<_, FrameError>>()?;
        let r: Vec<(usize, usize)> = r_edges
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<_, FrameError>>()?;
        Self::build(names, index, &le, &r)
    }

    /// Index-based constructor; node names must be distinct.
    pub fn from_indices(
        names: Vec<String>,
        le_gen: &[(usize, usize)],
        r_edges: &[(usize, usize)],
    ) -> Result<Frame, FrameError> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(FrameError::DuplicateNode(n.clone()));
            }
        }
        for &(a, b) in le_gen.iter().chain(r_edges) {
            for e in [a, b] {
                if e >= names.len() {
                    return Err(FrameError::UnknownEndpoint(format!("#{e}")));
                }
            }
        }
        Self::build(names, index, le_gen, r_edges)
    }

    fn build(
        names: Vec<String>,
        index: HashMap<String, usize>,
        le_gen: &[(usize, usize)],
        r_edges: &[(usize, usize)],
    ) -> Result<Frame, FrameError> {
        let n = names.len();
        let mut gen_succ = vec![NodeSet::empty(n); n];
        for &(a, b) in le_gen {
            gen_succ[a].insert(b);
        }
        // reflexive-transitive closure by search from every node
        let mut up = Vec::with_capacity(n);
        for start in 0..n {
            let mut seen = NodeSet::singleton(n, start);
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for y in &gen_succ[x] {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            up.push(seen);
        }
        for i in 0..n {
            for j in up[i].iter() {
                if j != i && up[j].contains(i) {
                    let mut cycle = generator_path(&gen_succ, i, j);
                    let back = generator_path(&gen_succ, j, i);
                    cycle.extend(back.into_iter().skip(1));
                    return Err(FrameError::OrderCycle(
                        cycle.into_iter().map(|k| names[k].clone()).collect(),
                    ));
                }
            }
        }
        let mut down = vec![NodeSet::empty(n); n];
        for (i, row) in up.iter().enumerate() {
            for j in row {
                down[j].insert(i);
            }
        }
        let mut succ = vec![NodeSet::empty(n); n];
        let mut pred = vec![NodeSet::empty(n); n];
        for &(a, b) in r_edges {
            succ[a].insert(b);
            pred[b].insert(a);
        }
        Ok(Frame {
            nodes: names,
            index,
            up,
            down,
            succ,
            pred,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn name(&self, i: usize) -> &str {
        &self.nodes[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn names<I: IntoIterator<Item = usize>>(&self, idx: I) -> Vec<String> {
        idx.into_iter().map(|i| self.nodes[i].clone()).collect()
    }

    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn r(&self, a: usize, b: usize) -> bool {
        self.succ[a].contains(b)
    }

    /// `↑x`
    pub fn up(&self, x: usize) -> &NodeSet {
        &self.up[x]
    }

    /// `↓x`
    pub fn down(&self, x: usize) -> &NodeSet {
        &self.down[x]
    }

    /// `R[x]`
    pub fn successors(&self, x: usize) -> &NodeSet {
        &self.succ[x]
    }

    pub fn predecessors(&self, x: usize) -> &NodeSet {
        &self.pred[x]
    }

    pub fn empty_set(&self) -> NodeSet {
        NodeSet::empty(self.len())
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.len())
    }

    pub fn up_closure(&self, s: &NodeSet) -> NodeSet {
        let mut out = self.empty_set();
        for x in s {
            out.union_with(&self.up[x]);
        }
        out
    }

    pub fn down_closure(&self, s: &NodeSet) -> NodeSet {
        let mut out = self.empty_set();
        for x in s {
            out.union_with(&self.down[x]);
        }
        out
    }

    pub fn is_upset(&self, s: &NodeSet) -> bool {
        s.iter().all(|x| self.up[x].is_subset(s))
    }

    /// `R[S]`
    pub fn r_image(&self, s: &NodeSet) -> NodeSet {
        let mut out = self.empty_set();
        for x in s {
            out.union_with(&self.succ[x]);
        }
        out
    }

    /// Rows of the composite `≤∘R`: `x` relates to `y` iff `x ≤ z R y` for some `z`.
    pub fn le_then_r(&self) -> Vec<NodeSet> {
        (0..self.len()).map(|x| self.r_image(&self.up[x])).collect()
    }

    /// Rows of `≤∘R∘≤`.
    pub fn le_r_le(&self) -> Vec<NodeSet> {
        self.le_then_r().iter().map(|row| self.up_closure(row)).collect()
    }

    /// `◇_R U = {x : ∃y. xRy ∧ y ∈ U}`
    pub fn dia(&self, u: &NodeSet) -> NodeSet {
        NodeSet::from_iter(self.len(), (0..self.len()).filter(|&x| self.succ[x].intersects(u)))
    }

    /// `□_S U` for the relation given by `rows`.
    pub fn box_over(rows: &[NodeSet], u: &NodeSet) -> NodeSet {
        NodeSet::from_iter(u.universe(), (0..rows.len()).filter(|&x| rows[x].is_subset(u)))
    }

    /// `□_{≤∘R} U`
    pub fn box_le_r(&self, u: &NodeSet) -> NodeSet {
        Self::box_over(&self.le_then_r(), u)
    }

    /// `□_R U`
    pub fn box_r(&self, u: &NodeSet) -> NodeSet {
        Self::box_over(&self.succ, u)
    }

    /// Covering pairs of the order (its transitive reduction without loops),
    /// sorted by node order.
    pub fn le_generators(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in self.up[x].iter() {
                if x == y {
                    continue;
                }
                let between = self.up[x].intersection(&self.down[y]).iter().any(|z| z != x && z != y);
                if !between {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn r_edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| self.succ[x].iter().map(move |y| (x, y)))
            .collect()
    }

    pub fn le_generators_named(&self) -> Vec<(String, String)> {
        self.le_generators()
            .into_iter()
            .map(|(a, b)| (self.nodes[a].clone(), self.nodes[b].clone()))
            .collect()
    }

    pub fn r_edges_named(&self) -> Vec<(String, String)> {
        self.r_edges()
            .into_iter()
            .map(|(a, b)| (self.nodes[a].clone(), self.nodes[b].clone()))
            .collect()
    }

    /// Same frame with `R` replaced.
    pub fn with_r_edges(&self, r_edges: &[(usize, usize)]) -> Frame {
        let n = self.len();
        let mut succ = vec![NodeSet::empty(n); n];
        let mut pred = vec![NodeSet::empty(n); n];
        for &(a, b) in r_edges {
            succ[a].insert(b);
            pred[b].insert(a);
        }
        Frame {
            succ,
            pred,
            ..self.clone()
        }
    }

    /// Adds `xRx` for every node.
    pub fn reflexive_closure(&self) -> Frame {
        let mut edges = self.r_edges();
        edges.extend((0..self.len()).map(|x| (x, x)));
        self.with_r_edges(&edges)
    }

    fn report(&self, cond: FrameCondition, witness: Option<Vec<usize>>) -> ConditionReport {
        Check::from_witness(cond, witness.map(|w| self.names(w)))
    }

    /// `x ≤ x' ∧ xRy ⟹ ∃y'. x'Ry' ∧ y ≤ y'`, witness `(x, x', y)`.
    pub fn check_f1(&self) -> ConditionReport {
        let witness = (0..self.len()).find_map(|x| {
            self.up[x].iter().find_map(|x2| {
                self.succ[x]
                    .iter()
                    .find(|&y| !self.succ[x2].intersects(&self.up[y]))
                    .map(|y| vec![x, x2, y])
            })
        });
        self.report(FrameCondition::F1, witness)
    }

    /// `xRy ∧ y ≤ y' ⟹ ∃x'. x ≤ x' ∧ x'Ry'`, witness `(x, y, y')`.
    pub fn check_f2(&self) -> ConditionReport {
        let witness = (0..self.len()).find_map(|x| {
            self.succ[x].iter().find_map(|y| {
                self.up[y]
                    .iter()
                    .find(|&y2| !self.up[x].intersects(&self.pred[y2]))
                    .map(|y2| vec![x, y, y2])
            })
        });
        self.report(FrameCondition::F2, witness)
    }

    /// `R[x] = R[↑x] ∩ ↓R[x]`, witness `(x, z)` with `z` in the right side only.
    pub fn check_mixed(&self) -> ConditionReport {
        let witness = (0..self.len()).find_map(|x| {
            let rhs = self
                .r_image(&self.up[x])
                .intersection(&self.down_closure(&self.succ[x]));
            rhs.difference(&self.succ[x]).first().map(|z| vec![x, z])
        });
        self.report(FrameCondition::Mixed, witness)
    }

    pub fn check_fs_conditions(&self) -> Vec<ConditionReport> {
        vec![self.check_f1(), self.check_f2(), self.check_mixed()]
    }

    /// F1 ∧ F2.
    pub fn is_fs_frame(&self) -> Verdict {
        Verdict::from_reports(vec![self.check_f1(), self.check_f2()])
    }

    /// F1 ∧ F2 ∧ MIXED, which for finite frames is the FS-space condition.
    pub fn is_fs_space(&self) -> Verdict {
        Verdict::from_reports(self.check_fs_conditions())
    }

    /// `R = ≤∘R∘≤`, witness a pair in the symmetric difference.
    pub fn check_ik_compatibility(&self) -> ConditionReport {
        let closed = self.le_r_le();
        let witness = (0..self.len()).find_map(|x| {
            let diff = closed[x]
                .difference(&self.succ[x])
                .union(&self.succ[x].difference(&closed[x]));
            diff.first().map(|y| vec![x, y])
        });
        self.report(FrameCondition::IkCompat, witness)
    }

    pub fn check_reflexive(&self) -> ConditionReport {
        let witness = (0..self.len()).find(|&x| !self.r(x, x)).map(|x| vec![x]);
        self.report(FrameCondition::Reflexive, witness)
    }

    /// `R∘R ⊆ R`, witness `(x, y, z)` with `xRyRz` and not `xRz`.
    pub fn check_transitive(&self) -> ConditionReport {
        let witness = (0..self.len()).find_map(|x| {
            self.succ[x]
                .iter()
                .find_map(|y| self.succ[y].difference(&self.succ[x]).first().map(|z| vec![x, y, z]))
        });
        self.report(FrameCondition::Transitive, witness)
    }

    /// No cycle in `≤∘R`; on a finite frame this rules out every infinite
    /// chain `x₁ ≤ y₁ R x₂ ≤ y₂ R …`. The witness is the first cycle found.
    pub fn check_igl_well_founded(&self) -> ConditionReport {
        let rows = self.le_then_r();
        let n = self.len();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut colour = vec![0u8; n];
        let mut witness = None;
        'outer: for start in 0..n {
            if colour[start] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, Vec<usize>)> = vec![(start, rows[start].to_vec())];
            let mut path = vec![start];
            colour[start] = 1;
            while let Some((node, pending)) = stack.last_mut() {
                if let Some(next) = pending.first().copied() {
                    pending.remove(0);
                    match colour[next] {
                        0 => {
                            colour[next] = 1;
                            path.push(next);
                            stack.push((next, rows[next].to_vec()));
                        }
                        1 => {
                            let at = path.iter().position(|&p| p == next).unwrap_or(0);
                            witness = Some(path[at..].to_vec());
                            break 'outer;
                        }
                        _ => {}
                    }
                } else {
                    colour[*node] = 2;
                    stack.pop();
                    path.pop();
                }
            }
        }
        self.report(FrameCondition::IglWf, witness)
    }

    pub fn classify(&self) -> Classification {
        let reflexive = self.check_reflexive();
        let transitive = self.check_transitive();
        let preorder = Check::from_witness(
            FrameCondition::Preorder,
            reflexive.witness.clone().or_else(|| transitive.witness.clone()),
        );
        Classification {
            reflexive,
            transitive,
            preorder,
            igl_wf: self.check_igl_well_founded(),
        }
    }

    /// Graphviz rendering: blue covering edges for `≤`, red edges for `R`.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n");
        for n in &self.nodes {
            out.push_str(&format!("  \"{n}\";\n"));
        }
        for (a, b) in self.le_generators_named() {
            out.push_str(&format!("  \"{a}\" -> \"{b}\" [color=blue];\n"));
        }
        for (a, b) in self.r_edges_named() {
            out.push_str(&format!("  \"{a}\" -> \"{b}\" [color=red];\n"));
        }
        out.push_str("}\n");
        out
    }
}

fn generator_path(gen_succ: &[NodeSet], from: usize, to: usize) -> Vec<usize> {
    let n = gen_succ.len();
    let mut parent = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::from([from]);
    parent[from] = from;
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for y in &gen_succ[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}
