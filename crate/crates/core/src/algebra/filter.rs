//! Modal filters, their congruences and quotients.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{AlgebraError, FiniteAlgebra};
use crate::nodeset::NodeSet;

/// Above this size, congruences are generated from principal congruences
/// instead of by testing every partition.
const BRUTE_FORCE_PARTITION_LIMIT: usize = 6;

pub const DEFAULT_CONGRUENCE_BOUND: usize = 10;

/// A lattice filter closed under `□`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModalFilter {
    members: NodeSet,
}

impl ModalFilter {
    pub fn members(&self) -> &NodeSet {
        &self.members
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members.to_vec()
    }

    /// Validates `members` against `a`.
    pub fn new(a: &FiniteAlgebra, members: NodeSet) -> Result<Self, AlgebraError> {
        is_modal_filter(a, &members).map_err(AlgebraError::NotAModalFilter)?;
        Ok(Self { members })
    }
}

impl Serialize for ModalFilter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.members.to_vec().serialize(s)
    }
}

/// `Ok(())` if `set` contains 1 and is upward closed, meet closed and box
/// closed; otherwise a description of the first violation.
pub fn is_modal_filter(a: &FiniteAlgebra, set: &NodeSet) -> Result<(), String> {
    if !set.contains(a.top) {
        return Err("does not contain the top element".into());
    }
    for x in set {
        if let Some(y) = (0..a.size).find(|&y| a.le(x, y) && !set.contains(y)) {
            return Err(format!("not upward closed: {x} ≤ {y}"));
        }
        if let Some(y) = set.iter().find(|&y| !set.contains(a.meet(x, y))) {
            return Err(format!("not closed under meet: {x} ∧ {y}"));
        }
        if !set.contains(a.boxed(x)) {
            return Err(format!("not closed under box at {x}"));
        }
    }
    Ok(())
}

/// Least modal filter containing `s`, computed as a closure fixpoint under
/// meets, upward closure and `□`.
pub fn modal_filter_generated(a: &FiniteAlgebra, s: &[usize]) -> ModalFilter {
    let mut members = NodeSet::from_iter(a.size, s.iter().copied());
    members.insert(a.top);
    loop {
        let mut next = members.clone();
        for x in &members {
            next.insert(a.boxed(x));
            for y in &members {
                next.insert(a.meet(x, y));
            }
            for y in 0..a.size {
                if a.le(x, y) {
                    next.insert(y);
                }
            }
        }
        if next == members {
            return ModalFilter { members };
        }
        members = next;
    }
}

/// Every modal filter, in canonical member order. On a finite lattice each
/// filter is principal, so the candidates are the sets `↑x`.
pub fn enumerate_modal_filters(a: &FiniteAlgebra) -> Vec<ModalFilter> {
    let mut out: BTreeSet<ModalFilter> = BTreeSet::new();
    for x in 0..a.size {
        let up = NodeSet::from_iter(a.size, (0..a.size).filter(|&y| a.le(x, y)));
        if is_modal_filter(a, &up).is_ok() {
            out.insert(ModalFilter { members: up });
        }
    }
    out.into_iter().collect()
}

/// A congruence as canonical class labels: `labels[i]` is the class of
/// element `i`, classes numbered by first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Congruence {
    labels: Vec<usize>,
}

impl Congruence {
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Self { labels }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            labels: (0..n).collect(),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn class_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// `Θ(F) = {(a, b) : a ↔ b ∈ F}`
    pub fn of_filter(a: &FiniteAlgebra, f: &ModalFilter) -> Self {
        let mut labels = vec![usize::MAX; a.size];
        let mut next = 0;
        for x in 0..a.size {
            if labels[x] != usize::MAX {
                continue;
            }
            for (y, label) in labels.iter_mut().enumerate().skip(x) {
                if *label == usize::MAX && f.contains(a.biimp(x, y)) {
                    *label = next;
                }
            }
            next += 1;
        }
        Self { labels }
    }

    /// `F(Θ) = {a : (a, 1) ∈ Θ}`
    pub fn kernel_filter(&self, a: &FiniteAlgebra) -> NodeSet {
        NodeSet::from_iter(a.size, (0..a.size).filter(|&x| self.related(x, a.top)))
    }

    pub fn is_compatible(&self, a: &FiniteAlgebra) -> bool {
        let n = a.size;
        for x in 0..n {
            for y in (x + 1)..n {
                if !self.related(x, y) {
                    continue;
                }
                if !self.related(a.boxed(x), a.boxed(y)) || !self.related(a.dia(x), a.dia(y)) {
                    return false;
                }
                for c in 0..n {
                    if !self.related(a.meet(x, c), a.meet(y, c))
                        || !self.related(a.join(x, c), a.join(y, c))
                        || !self.related(a.himp(x, c), a.himp(y, c))
                        || !self.related(a.himp(c, x), a.himp(c, y))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn labels(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|x| self.find(x)).collect()
    }
}

/// Smallest congruence containing `seed` pairs and the given relation.
fn congruence_closure(a: &FiniteAlgebra, start: &[usize], seed: &[(usize, usize)]) -> Congruence {
    let n = a.size;
    let mut uf = UnionFind::new(n);
    for (x, &s) in start.iter().enumerate() {
        uf.union(x, s);
    }
    for &(x, y) in seed {
        uf.union(x, y);
    }
    loop {
        let mut changed = false;
        let labels = uf.labels();
        for x in 0..n {
            for y in (x + 1)..n {
                if labels[x] != labels[y] {
                    continue;
                }
                changed |= uf.union(a.boxed(x), a.boxed(y));
                changed |= uf.union(a.dia(x), a.dia(y));
                for c in 0..n {
                    changed |= uf.union(a.meet(x, c), a.meet(y, c));
                    changed |= uf.union(a.join(x, c), a.join(y, c));
                    changed |= uf.union(a.himp(x, c), a.himp(y, c));
                    changed |= uf.union(a.himp(c, x), a.himp(c, y));
                }
            }
        }
        if !changed {
            return Congruence::from_labels(&uf.labels());
        }
    }
}

fn for_each_partition(n: usize, f: &mut impl FnMut(&[usize])) {
    fn go(k: usize, n: usize, max: usize, labels: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if k == n {
            f(labels);
            return;
        }
        for l in 0..=max {
            labels.push(l);
            go(k + 1, n, max.max(l + 1), labels, f);
            labels.pop();
        }
    }
    let mut labels = Vec::with_capacity(n);
    go(0, n, 0, &mut labels, f);
}

/// Every FS-congruence of `a`, in canonical label order.
pub fn enumerate_congruences(a: &FiniteAlgebra, bound: usize) -> Result<Vec<Congruence>, AlgebraError> {
    a.validate_shape()?;
    if a.size > bound {
        return Err(AlgebraError::SizeBoundExceeded { size: a.size, bound });
    }
    let mut found = BTreeSet::new();
    if a.size <= BRUTE_FORCE_PARTITION_LIMIT {
        for_each_partition(a.size, &mut |labels| {
            let c = Congruence::from_labels(labels);
            if c.is_compatible(a) {
                found.insert(c);
            }
        });
    } else {
        let identity: Vec<usize> = (0..a.size).collect();
        let mut principal = BTreeSet::new();
        for x in 0..a.size {
            for y in (x + 1)..a.size {
                principal.insert(congruence_closure(a, &identity, &[(x, y)]));
            }
        }
        let mut frontier = vec![Congruence::identity(a.size)];
        found.insert(Congruence::identity(a.size));
        while let Some(c) = frontier.pop() {
            for p in &principal {
                let seed: Vec<(usize, usize)> = (0..a.size)
                    .flat_map(|x| (0..a.size).map(move |y| (x, y)))
                    .filter(|&(x, y)| p.related(x, y))
                    .collect();
                let joined = congruence_closure(a, &c.labels, &seed);
                if found.insert(joined.clone()) {
                    frontier.push(joined);
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub modal_filters: usize,
    pub congruences: usize,
    /// `F(Θ(F)) = F` for every modal filter and `Θ(F)` is a congruence.
    pub filter_round_trip: bool,
    /// `Θ(F(Θ)) = Θ` for every congruence and `F(Θ)` is a modal filter.
    pub congruence_round_trip: bool,
    pub holds: bool,
    pub failures: Vec<String>,
}

/// Verifies that `F ↦ Θ(F)` and `Θ ↦ F(Θ)` are mutually inverse between the
/// modal filters and the congruences of `a`.
pub fn congruence_filter_bijection_check(a: &FiniteAlgebra, bound: usize) -> Result<BijectionReport, AlgebraError> {
    let congruences = enumerate_congruences(a, bound)?;
    let filters = enumerate_modal_filters(a);
    let cong_set: BTreeSet<&Congruence> = congruences.iter().collect();
    let mut failures = Vec::new();

    let mut filter_round_trip = true;
    for f in &filters {
        let theta = Congruence::of_filter(a, f);
        if !cong_set.contains(&theta) {
            filter_round_trip = false;
            failures.push(format!("Θ({:?}) is not a congruence", f.to_vec()));
        }
        if &theta.kernel_filter(a) != f.members() {
            filter_round_trip = false;
            failures.push(format!("F(Θ({:?})) differs", f.to_vec()));
        }
    }
    let mut congruence_round_trip = true;
    for c in &congruences {
        let kernel = c.kernel_filter(a);
        match ModalFilter::new(a, kernel.clone()) {
            Ok(f) => {
                if &Congruence::of_filter(a, &f) != c {
                    congruence_round_trip = false;
                    failures.push(format!("Θ(F({:?})) differs", c.labels()));
                }
            }
            Err(e) => {
                congruence_round_trip = false;
                failures.push(format!("F({:?}) is not a modal filter: {e}", c.labels()));
            }
        }
    }
    let holds = filter_round_trip && congruence_round_trip && filters.len() == congruences.len();
    Ok(BijectionReport {
        modal_filters: filters.len(),
        congruences: congruences.len(),
        filter_round_trip,
        congruence_round_trip,
        holds,
        failures,
    })
}

/// The quotient algebra and the surjection onto it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quotient {
    pub algebra: FiniteAlgebra,
    pub projection: Vec<usize>,
}

/// Quotient by `Θ(F)`. Classes are numbered by their least element.
pub fn quotient_by_modal_filter(a: &FiniteAlgebra, f: &ModalFilter) -> Result<Quotient, AlgebraError> {
    is_modal_filter(a, f.members()).map_err(AlgebraError::NotAModalFilter)?;
    let theta = Congruence::of_filter(a, f);
    let q = theta.labels().to_vec();
    let k = theta.class_count();
    let mut rep = vec![usize::MAX; k];
    for (x, &c) in q.iter().enumerate() {
        if rep[c] == usize::MAX {
            rep[c] = x;
        }
    }
    let ill = |what: &str, x: usize, y: usize| AlgebraError::IllDefinedQuotient(format!("{what} differs on {x} ~ {y}"));
    for x in 0..a.size {
        let y = rep[q[x]];
        if q[a.boxed(x)] != q[a.boxed(y)] {
            return Err(ill("box", x, y));
        }
        if q[a.dia(x)] != q[a.dia(y)] {
            return Err(ill("dia", x, y));
        }
        for c in 0..a.size {
            if q[a.meet(x, c)] != q[a.meet(y, c)]
                || q[a.join(x, c)] != q[a.join(y, c)]
                || q[a.himp(x, c)] != q[a.himp(y, c)]
                || q[a.himp(c, x)] != q[a.himp(c, y)]
            {
                return Err(ill("a binary operation", x, y));
            }
        }
    }
    let bin = |t: &Vec<Vec<usize>>| -> Vec<Vec<usize>> {
        (0..k).map(|i| (0..k).map(|j| q[t[rep[i]][rep[j]]]).collect()).collect()
    };
    let algebra = FiniteAlgebra {
        size: k,
        meet: bin(&a.meet),
        join: bin(&a.join),
        himp: bin(&a.himp),
        bot: q[a.bot],
        top: q[a.top],
        boxx: (0..k).map(|i| q[a.boxed(rep[i])]).collect(),
        dia: (0..k).map(|i| q[a.dia(rep[i])]).collect(),
    };
    Ok(Quotient { algebra, projection: q })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boolean2() -> FiniteAlgebra {
        FiniteAlgebra::two_element([0, 1], [0, 1])
    }

    #[test]
    fn generated_from_nothing_is_top_only() {
        let a = boolean2();
        assert_eq!(modal_filter_generated(&a, &[]).to_vec(), vec![1]);
    }

    #[test]
    fn identity_box_gives_principal_filter() {
        let a = FiniteAlgebra::chain(4, vec![0, 1, 2, 3], vec![0, 1, 2, 3]);
        assert_eq!(modal_filter_generated(&a, &[1]).to_vec(), vec![1, 2, 3]);
    }

    #[test]
    fn box_pushes_generated_filter_down() {
        // □ maps 2 ↦ 1, so the filter generated by 2 must contain 1.
        let a = FiniteAlgebra::chain(4, vec![0, 0, 1, 3], vec![0, 1, 2, 3]);
        assert_eq!(modal_filter_generated(&a, &[2]).to_vec(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn trivial_and_total_quotients() {
        let a = FiniteAlgebra::chain(3, vec![0, 1, 2], vec![0, 1, 2]);
        let top = modal_filter_generated(&a, &[]);
        let q = quotient_by_modal_filter(&a, &top).unwrap();
        assert_eq!(q.algebra, a);
        let all = modal_filter_generated(&a, &[0]);
        let q = quotient_by_modal_filter(&a, &all).unwrap();
        assert_eq!(q.algebra.size, 1);
    }

    #[test]
    fn rejects_non_filters() {
        let a = boolean2();
        let bad = ModalFilter {
            members: NodeSet::from_iter(2, [0]),
        };
        assert!(matches!(
            quotient_by_modal_filter(&a, &bad),
            Err(AlgebraError::NotAModalFilter(_))
        ));
    }

    #[test]
    fn two_element_bijection() {
        let rep = congruence_filter_bijection_check(&boolean2(), DEFAULT_CONGRUENCE_BOUND).unwrap();
        assert_eq!((rep.modal_filters, rep.congruences), (2, 2));
        assert!(rep.holds);
    }

    #[test]
    fn size_bound_is_enforced() {
        let n = 12;
        let a = FiniteAlgebra::chain(n, (0..n).collect(), (0..n).collect());
        assert!(matches!(
            congruence_filter_bijection_check(&a, 10),
            Err(AlgebraError::SizeBoundExceeded { size: 12, bound: 10 })
        ));
    }

    #[test]
    fn principal_generation_matches_brute_force() {
        // 7-element chain forces the principal-congruence route
        let n = 7;
        let a = FiniteAlgebra::chain(n, (0..n).collect(), (0..n).collect());
        let fast = enumerate_congruences(&a, 10).unwrap();
        let mut slow = Vec::new();
        for_each_partition(n, &mut |l| {
            let c = Congruence::from_labels(l);
            if c.is_compatible(&a) {
                slow.push(c);
            }
        });
        slow.sort();
        assert_eq!(fast, slow);
    }
}
