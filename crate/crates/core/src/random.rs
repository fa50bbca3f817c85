//! Seeded generators for random frames and co-V-formations.
//!
//! Every generator takes an explicit RNG so suites are reproducible from a
//! seed. Frame conditions are reached either by rejection (which keeps
//! sparse relations in the pool) or by closing `R` under repair rules that
//! only ever add edges, so generation always terminates.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::amalgam::{CoVFormation, Mode};
use crate::frame::Frame;
use crate::morphism::FrameMap;
use crate::nodeset::NodeSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FrameClass {
    Any,
    Reflexive,
    Transitive,
    Preorder,
}

impl FrameClass {
    fn reflexive(self) -> bool {
        matches!(self, FrameClass::Reflexive | FrameClass::Preorder)
    }

    fn transitive(self) -> bool {
        matches!(self, FrameClass::Transitive | FrameClass::Preorder)
    }

    /// Mostly unconstrained, with a bias toward the named classes.
    pub fn sample<R: Rng>(rng: &mut R) -> FrameClass {
        *[
            FrameClass::Any,
            FrameClass::Any,
            FrameClass::Reflexive,
            FrameClass::Transitive,
            FrameClass::Preorder,
        ]
        .choose(rng)
        .expect("nonempty")
    }
}

type Matrix = Vec<Vec<bool>>;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("n{i}")).collect()
}

/// Order generators `i ≤ j` for `i < j`, each present with probability `p`.
pub fn random_order<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                gens.push((i, j));
            }
        }
    }
    gens
}

fn order_matrix(n: usize, gens: &[(usize, usize)]) -> Matrix {
    let f = Frame::from_indices(names(n), gens, &[]).expect("forward edges are acyclic");
    (0..n).map(|i| (0..n).map(|j| f.le(i, j)).collect()).collect()
}

fn random_relation<R: Rng>(rng: &mut R, n: usize, p: f64) -> Matrix {
    (0..n).map(|_| (0..n).map(|_| rng.gen_bool(p)).collect()).collect()
}

fn edges(m: &Matrix) -> Vec<(usize, usize)> {
    let n = m.len();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| m[i][j])
        .collect()
}

fn build(n: usize, gens: &[(usize, usize)], r: &Matrix) -> Frame {
    Frame::from_indices(names(n), gens, &edges(r)).expect("acyclic order")
}

fn set(r: &mut Matrix, i: usize, j: usize) -> bool {
    !std::mem::replace(&mut r[i][j], true)
}

fn close_class(r: &mut Matrix, class: FrameClass) -> bool {
    let n = r.len();
    let mut changed = false;
    if class.reflexive() {
        for i in 0..n {
            changed |= set(r, i, i);
        }
    }
    if class.transitive() {
        for k in 0..n {
            for i in 0..n {
                if r[i][k] {
                    for j in 0..n {
                        if r[k][j] {
                            changed |= set(r, i, j);
                        }
                    }
                }
            }
        }
    }
    changed
}

/// Adds the edges F1, F2 and the mixed condition demand until all hold.
fn close_fs(le: &Matrix, r: &mut Matrix) -> bool {
    let n = le.len();
    let mut changed = false;
    for x in 0..n {
        for x2 in 0..n {
            if !le[x][x2] {
                continue;
            }
            for y in 0..n {
                if r[x][y] && !(0..n).any(|y2| r[x2][y2] && le[y][y2]) {
                    changed |= set(r, x2, y);
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if !r[x][y] {
                continue;
            }
            for y2 in 0..n {
                if le[y][y2] && !(0..n).any(|x2| le[x][x2] && r[x2][y2]) {
                    changed |= set(r, x, y2);
                }
            }
        }
    }
    for x in 0..n {
        for z in 0..n {
            if r[x][z] {
                continue;
            }
            let reach = (0..n).any(|m| le[x][m] && r[m][z]);
            let below = (0..n).any(|t| r[x][t] && le[z][t]);
            if reach && below {
                changed |= set(r, x, z);
            }
        }
    }
    changed
}

/// Replaces `R` by `≤∘R∘≤`.
fn close_ik(le: &Matrix, r: &mut Matrix) -> bool {
    let n = le.len();
    let mut changed = false;
    for x in 0..n {
        for y in 0..n {
            if !r[x][y] && (0..n).any(|a| le[x][a] && (0..n).any(|b| r[a][b] && le[b][y])) {
                changed |= set(r, x, y);
            }
        }
    }
    changed
}

fn saturate(le: &Matrix, r: &mut Matrix, mode: Mode, class: FrameClass) {
    loop {
        let a = close_class(r, class);
        let b = match mode {
            Mode::FS => close_fs(le, r),
            Mode::IK => close_ik(le, r),
        };
        if !a && !b {
            return;
        }
    }
}

fn fits(f: &Frame, mode: Mode, class: FrameClass) -> bool {
    let frame_ok = match mode {
        Mode::FS => f.is_fs_space().holds,
        Mode::IK => f.check_ik_compatibility().holds,
    };
    frame_ok && (!class.reflexive() || f.check_reflexive().holds) && (!class.transitive() || f.check_transitive().holds)
}

/// A frame of `mode`'s kind (FS-space or iK-frame) in `class`, with
/// between 1 and `max_nodes` nodes.
pub fn random_frame_in<R: Rng>(rng: &mut R, max_nodes: usize, mode: Mode, class: FrameClass) -> Frame {
    let n = rng.gen_range(1..=max_nodes.max(1));
    let p = rng.gen_range(0.1..0.6);
    let gens = random_order(rng, n, p);
    let le = order_matrix(n, &gens);
    for _ in 0..8 {
        let p = rng.gen_range(0.05..0.4);
        let mut r = random_relation(rng, n, p);
        close_class(&mut r, class);
        let f = build(n, &gens, &r);
        if fits(&f, mode, class) {
            return f;
        }
    }
    let p = rng.gen_range(0.05..0.3);
    let mut r = random_relation(rng, n, p);
    saturate(&le, &mut r, mode, class);
    build(n, &gens, &r)
}

/// A random finite FS-space with a bias toward reflexive and transitive `R`.
pub fn random_fs_space<R: Rng>(rng: &mut R, max_nodes: usize) -> Frame {
    let class = FrameClass::sample(rng);
    random_frame_in(rng, max_nodes, Mode::FS, class)
}

/// A random iK-frame in `class`.
pub fn random_ik_frame<R: Rng>(rng: &mut R, max_nodes: usize, class: FrameClass) -> Frame {
    random_frame_in(rng, max_nodes, Mode::IK, class)
}

/// Any birelational frame: a random order and an arbitrary relation.
pub fn random_frame<R: Rng>(rng: &mut R, max_nodes: usize) -> Frame {
    let n = rng.gen_range(0..=max_nodes);
    let gens = random_order(rng, n, 0.35);
    let r = random_relation(rng, n, 0.25);
    build(n, &gens, &r)
}

/// `A × C` with componentwise order and relation.
pub fn product(a: &Frame, c: &Frame) -> Frame {
    let pairs: Vec<(usize, usize)> = (0..a.len()).flat_map(|x| (0..c.len()).map(move |y| (x, y))).collect();
    let nm = pairs
        .iter()
        .map(|&(x, y)| format!("{}.{}", a.name(x), c.name(y)))
        .collect();
    let mut le = Vec::new();
    let mut r = Vec::new();
    for (i, &(x, y)) in pairs.iter().enumerate() {
        for (j, &(x2, y2)) in pairs.iter().enumerate() {
            if i != j && a.le(x, x2) && c.le(y, y2) {
                le.push((i, j));
            }
            if a.r(x, x2) && c.r(y, y2) {
                r.push((i, j));
            }
        }
    }
    Frame::from_indices(nm, &le, &r).expect("componentwise order is antisymmetric")
}

fn is_serial(f: &Frame) -> bool {
    (0..f.len()).all(|x| !f.successors(x).is_empty())
}

/// `A ⊔ S` for the subframe `S` generated by `seeds` (closed under `↑` and
/// `R`), with the fold map onto `A`. The inclusion of a generated subframe
/// is a morphism of either kind, so the fold is a surjective one.
pub fn fold_with_generated(a: &Arc<Frame>, seeds: &[usize]) -> FrameMap {
    let mut keep = NodeSet::from_iter(a.len(), seeds.iter().copied());
    loop {
        let grown = a.up_closure(&keep).union(&a.r_image(&keep));
        if grown == keep {
            break;
        }
        keep = grown;
    }
    let sub: Vec<usize> = keep.to_vec();
    let mut nm: Vec<String> = a.nodes().to_vec();
    let mut taken: std::collections::HashSet<String> = nm.iter().cloned().collect();
    for &x in &sub {
        // prime until fresh, so folding a fold still has distinct names
        let mut name = format!("{}'", a.name(x));
        while !taken.insert(name.clone()) {
            name.push('\'');
        }
        nm.push(name);
    }
    let n = a.len();
    let at = |x: usize| n + sub.iter().position(|&s| s == x).expect("in subframe");
    let mut le = a.le_generators();
    let mut r = a.r_edges();
    le.extend(
        a.le_generators()
            .into_iter()
            .filter(|&(x, y)| keep.contains(x) && keep.contains(y))
            .map(|(x, y)| (at(x), at(y))),
    );
    r.extend(
        a.r_edges()
            .into_iter()
            .filter(|&(x, _)| keep.contains(x))
            .map(|(x, y)| (at(x), at(y))),
    );
    let b = Frame::from_indices(nm, &le, &r).expect("disjoint union of posets");
    let table = (0..n).chain(sub.iter().copied()).collect();
    FrameMap::new(Arc::new(b), a.clone(), table).expect("fold")
}

/// One leg `B → A` of a formation.
fn random_leg<R: Rng>(rng: &mut R, base: &Arc<Frame>, mode: Mode, class: FrameClass, max_nodes: usize) -> FrameMap {
    let room = max_nodes / base.len().max(1);
    match rng.gen_range(0..4) {
        1 if room >= 2 => {
            for _ in 0..16 {
                let c = random_frame_in(rng, room, mode, class);
                if is_serial(&c) {
                    let b = Arc::new(product(base, &c));
                    let table = (0..b.len()).map(|i| i / c.len()).collect();
                    return FrameMap::new(b, base.clone(), table).expect("projection");
                }
            }
        }
        2 if max_nodes > base.len() => {
            for _ in 0..64 {
                let b = random_frame_in(rng, max_nodes, mode, class);
                if b.len() < base.len() {
                    continue;
                }
                let mut table: Vec<usize> = (0..base.len()).collect();
                table.extend((base.len()..b.len()).map(|_| rng.gen_range(0..base.len())));
                table.shuffle(rng);
                let m = FrameMap::new(Arc::new(b), base.clone(), table).expect("in range");
                let ok = match mode {
                    Mode::FS => m.check_fs_morphism().holds,
                    Mode::IK => m.check_ik_morphism().holds,
                };
                if ok {
                    return m;
                }
            }
        }
        3 if max_nodes > base.len() => {
            for _ in 0..16 {
                let seed = rng.gen_range(0..base.len());
                let m = fold_with_generated(base, &[seed]);
                if m.source().len() <= max_nodes {
                    return m;
                }
            }
        }
        _ => {}
    }
    FrameMap::identity(base.clone())
}

/// A co-V-formation whose frames lie in `class` and pass `mode`'s frame
/// check, with surjective `mode`-morphisms as legs.
pub fn random_formation<R: Rng>(rng: &mut R, mode: Mode, class: FrameClass, max_nodes: usize) -> CoVFormation {
    let base = Arc::new(random_frame_in(rng, max_nodes, mode, class));
    let f = random_leg(rng, &base, mode, class, max_nodes);
    let g = random_leg(rng, &base, mode, class, max_nodes);
    CoVFormation::new(f, g).expect("common base")
}
