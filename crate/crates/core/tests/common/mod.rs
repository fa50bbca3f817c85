//! Independent oracles. Everything here works from the raw relations
//! (`Frame::le`, `Frame::r`) or raw operation tables only, and deliberately
//! avoids the library's closures, bitset algebra and enumeration code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use fskit::algebra::FiniteAlgebra;
use fskit::formula::Formula;
use fskit::frame::Frame;
use proptest::prelude::*;

/// Truth set as a plain boolean vector.
pub type Truth = Vec<bool>;

/// Pointwise intuitionistic Kripke evaluation:
/// `x ⊩ □φ` iff every `x' ≥ x` and every `y` with `x' R y` has `y ⊩ φ`;
/// `x ⊩ ◇φ` iff some `y` with `x R y` has `y ⊩ φ`;
/// `x ⊩ φ → ψ` iff every `x' ≥ x` forcing `φ` forces `ψ`.
pub fn force(f: &Frame, phi: &Formula, v: &BTreeMap<String, Truth>) -> Truth {
    let n = f.len();
    let all = |p: &dyn Fn(usize) -> bool| (0..n).map(p).collect::<Truth>();
    match phi {
        Formula::Var(name) => v[&**name].clone(),
        Formula::Top => vec![true; n],
        Formula::Bot => vec![false; n],
        Formula::And(a, b) => {
            let (a, b) = (force(f, a, v), force(f, b, v));
            all(&|x| a[x] && b[x])
        }
        Formula::Or(a, b) => {
            let (a, b) = (force(f, a, v), force(f, b, v));
            all(&|x| a[x] || b[x])
        }
        Formula::Implies(a, b) => {
            let (a, b) = (force(f, a, v), force(f, b, v));
            all(&|x| (0..n).all(|x2| !f.le(x, x2) || !a[x2] || b[x2]))
        }
        Formula::Box(a) => {
            let a = force(f, a, v);
            all(&|x| (0..n).all(|x2| !f.le(x, x2) || (0..n).all(|y| !f.r(x2, y) || a[y])))
        }
        Formula::Dia(a) => {
            let a = force(f, a, v);
            all(&|x| (0..n).any(|y| f.r(x, y) && a[y]))
        }
    }
}

/// Every upset, found by filtering all `2^n` subsets.
pub fn brute_upsets(f: &Frame) -> Vec<Truth> {
    let n = f.len();
    (0u32..1 << n)
        .map(|mask| (0..n).map(|i| mask >> i & 1 == 1).collect::<Truth>())
        .filter(|s| (0..n).all(|x| (0..n).all(|y| !s[x] || !f.le(x, y) || s[y])))
        .collect()
}

/// Frame validity by brute force over all upset valuations.
pub fn valid_by_forcing(f: &Frame, phi: &Formula) -> bool {
    let ups = brute_upsets(f);
    let vars: Vec<String> = phi.variables().iter().map(|s| s.to_string()).collect();
    let mut idx = vec![0usize; vars.len()];
    loop {
        let v: BTreeMap<String, Truth> = vars.iter().cloned().zip(idx.iter().map(|&i| ups[i].clone())).collect();
        if force(f, phi, &v).iter().any(|t| !t) {
            return false;
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return true;
            }
            idx[k] += 1;
            if idx[k] < ups.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn f1_by_triples(f: &Frame) -> bool {
    let n = f.len();
    (0..n).all(|x| {
        (0..n).all(|x2| (0..n).all(|y| !(f.le(x, x2) && f.r(x, y)) || (0..n).any(|y2| f.r(x2, y2) && f.le(y, y2))))
    })
}

pub fn f2_by_triples(f: &Frame) -> bool {
    let n = f.len();
    (0..n).all(|x| {
        (0..n).all(|y| (0..n).all(|y2| !(f.r(x, y) && f.le(y, y2)) || (0..n).any(|x2| f.le(x, x2) && f.r(x2, y2))))
    })
}

/// `x ≤ x' R z ∧ x R y ∧ z ≤ y ⟹ x R z`
pub fn mixed_by_triples(f: &Frame) -> bool {
    let n = f.len();
    (0..n).all(|x| {
        (0..n).all(|z| {
            f.r(x, z) || !(0..n).any(|x2| f.le(x, x2) && f.r(x2, z)) || !(0..n).any(|y| f.r(x, y) && f.le(z, y))
        })
    })
}

pub fn ik_compat_by_triples(f: &Frame) -> bool {
    let n = f.len();
    (0..n).all(|x| {
        (0..n).all(|y| {
            let closed = (0..n).any(|a| (0..n).any(|b| f.le(x, a) && f.r(a, b) && f.le(b, y)));
            closed == f.r(x, y)
        })
    })
}

pub fn reflexive_by_nodes(f: &Frame) -> bool {
    (0..f.len()).all(|x| f.r(x, x))
}

pub fn transitive_by_triples(f: &Frame) -> bool {
    let n = f.len();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(f.r(x, y) && f.r(y, z)) || f.r(x, z))))
}

/// Modal filters by filtering every subset of the carrier.
pub fn brute_modal_filters(a: &FiniteAlgebra) -> Vec<BTreeSet<usize>> {
    let n = a.size;
    assert!(n <= 16, "subset enumeration is for small algebras");
    let le = |x: usize, y: usize| a.meet[x][y] == x;
    (0u32..1 << n)
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<BTreeSet<usize>>())
        .filter(|s| {
            s.contains(&a.top)
                && s.iter().all(|&x| (0..n).all(|y| !le(x, y) || s.contains(&y)))
                && s.iter().all(|&x| s.iter().all(|&y| s.contains(&a.meet[x][y])))
                && s.iter().all(|&x| s.contains(&a.boxx[x]))
        })
        .collect()
}

/// Least modal filter containing `seeds`: the intersection of all modal
/// filters that contain them.
pub fn least_filter_containing(filters: &[BTreeSet<usize>], seeds: &[usize]) -> BTreeSet<usize> {
    filters
        .iter()
        .filter(|f| seeds.iter().all(|s| f.contains(s)))
        .fold(None::<BTreeSet<usize>>, |acc, f| match acc {
            None => Some(f.clone()),
            Some(a) => Some(a.intersection(f).copied().collect()),
        })
        .expect("the carrier is a modal filter")
}

/// Congruences by enumerating set partitions (restricted growth strings)
/// and testing each against every operation table.
pub fn brute_congruences(a: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let n = a.size;
    let mut out = Vec::new();
    let mut labels = Vec::with_capacity(n);
    fn rec(a: &FiniteAlgebra, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = a.size;
        if labels.len() == n {
            let same = |x: usize, y: usize| labels[x] == labels[y];
            let ok = (0..n).all(|x| {
                (0..n).all(|y| {
                    !same(x, y)
                        || (same(a.boxx[x], a.boxx[y])
                            && same(a.dia[x], a.dia[y])
                            && (0..n).all(|z| {
                                same(a.meet[x][z], a.meet[y][z])
                                    && same(a.join[x][z], a.join[y][z])
                                    && same(a.himp[x][z], a.himp[y][z])
                                    && same(a.himp[z][x], a.himp[z][y])
                            }))
                })
            });
            if ok {
                out.push(labels.clone());
            }
            return;
        }
        let next = labels.iter().max().map_or(0, |m| m + 1);
        for l in 0..=next {
            labels.push(l);
            rec(a, labels, out);
            labels.pop();
        }
    }
    rec(a, &mut labels, &mut out);
    out
}

/// Upsets of `frame`, counted by subset enumeration.
pub fn upset_count(f: &Frame) -> usize {
    brute_upsets(f).len()
}

/// Every frame on `n` nodes: each partial order (from all relations on
/// distinct pairs) combined with each accessibility relation.
pub fn all_frames(n: usize) -> Vec<Frame> {
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let off: Vec<(usize, usize)> = pairs.iter().copied().filter(|(a, b)| a != b).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << off.len() {
        let le: Vec<(usize, usize)> = (0..off.len()).filter(|i| mask >> i & 1 == 1).map(|i| off[i]).collect();
        let rel = |a: usize, b: usize| a == b || le.contains(&(a, b));
        let partial_order = (0..n).all(|a| {
            (0..n).all(|b| {
                (a == b || !(rel(a, b) && rel(b, a))) && (0..n).all(|c| !(rel(a, b) && rel(b, c)) || rel(a, c))
            })
        });
        if !partial_order {
            continue;
        }
        for rmask in 0u32..1 << pairs.len() {
            let r: Vec<(usize, usize)> = (0..pairs.len())
                .filter(|i| rmask >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            out.push(Frame::from_indices(names.clone(), &le, &r).expect("valid frame"));
        }
    }
    out
}

/// Arbitrary frame with up to `max` nodes: a random relation on distinct
/// pairs oriented along node order (so acyclic), plus arbitrary `R`.
pub fn arb_frame(max: usize) -> impl Strategy<Value = Frame> {
    (0..=max).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<bool>(), n * n),
            proptest::collection::vec(any::<bool>(), n * n),
        )
            .prop_map(move |(le_bits, r_bits)| {
                let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
                let le: Vec<(usize, usize)> = (0..n)
                    .flat_map(|a| (0..n).map(move |b| (a, b)))
                    .filter(|&(a, b)| a < b && le_bits[a * n + b])
                    .collect();
                let r: Vec<(usize, usize)> = (0..n)
                    .flat_map(|a| (0..n).map(move |b| (a, b)))
                    .filter(|&(a, b)| r_bits[a * n + b])
                    .collect();
                Frame::from_indices(names, &le, &r).expect("acyclic order")
            })
    })
}

/// Random FS-frames and FS-spaces drawn through the library's seeded
/// generators, so proptest explores seeds rather than raw structure.
pub fn arb_fs_space(max: usize) -> impl Strategy<Value = Frame> {
    any::<u64>().prop_map(move |seed| fskit::random::random_fs_space(&mut fskit::random::rng(seed), max))
}

/// Formulas over the variables `p`, `q` (or fewer), bounded in depth.
pub fn arb_formula(vars: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => proptest::sample::select(vars).prop_map(Formula::var),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bot),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.clone().prop_map(Formula::boxed),
            inner.prop_map(Formula::dia),
        ]
    })
}
