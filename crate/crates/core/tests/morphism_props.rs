mod common;

use std::sync::Arc;

use common::*;
use fskit::frame::Frame;
use fskit::morphism::FrameMap;
use fskit::random::{random_ik_frame, rng, FrameClass};
use proptest::prelude::*;

fn arb_map() -> impl Strategy<Value = FrameMap> {
    (
        arb_frame(3),
        arb_frame(3).prop_filter("nonempty target", |t| !t.is_empty()),
    )
        .prop_flat_map(|(s, t)| {
            let n = s.len();
            let m = t.len();
            proptest::collection::vec(0..m, n)
                .prop_map(move |table| FrameMap::new(Arc::new(s.clone()), Arc::new(t.clone()), table).unwrap())
        })
}

struct Raw<'a> {
    s: &'a Frame,
    t: &'a Frame,
    h: &'a [usize],
}

impl Raw<'_> {
    fn nodes(&self) -> std::ops::Range<usize> {
        0..self.s.len()
    }
    fn tnodes(&self) -> std::ops::Range<usize> {
        0..self.t.len()
    }
    fn monotone(&self) -> bool {
        self.nodes().all(|x| {
            self.nodes()
                .all(|y| !self.s.le(x, y) || self.t.le(self.h[x], self.h[y]))
        })
    }
    fn le_back(&self) -> bool {
        self.nodes().all(|x| {
            self.tnodes()
                .all(|b| !self.t.le(self.h[x], b) || self.nodes().any(|x2| self.s.le(x, x2) && self.h[x2] == b))
        })
    }
    fn r_forth(&self) -> bool {
        self.nodes()
            .all(|x| self.nodes().all(|y| !self.s.r(x, y) || self.t.r(self.h[x], self.h[y])))
    }
    fn weak_back(&self) -> bool {
        self.nodes().all(|x| {
            self.tnodes()
                .all(|z| !self.t.r(self.h[x], z) || self.nodes().any(|x2| self.s.r(x, x2) && self.t.le(z, self.h[x2])))
        })
    }
    fn strong_back(&self) -> bool {
        self.nodes().all(|x| {
            self.tnodes().all(|m| {
                self.tnodes().all(|z| {
                    !(self.t.le(self.h[x], m) && self.t.r(m, z))
                        || self.nodes().any(|x2| {
                            self.s.le(x, x2) && self.nodes().any(|x3| self.s.r(x2, x3) && self.t.le(self.h[x3], z))
                        })
                })
            })
        })
    }
    fn r_bounded_back(&self) -> bool {
        self.nodes().all(|x| {
            self.tnodes()
                .all(|y| !self.t.r(self.h[x], y) || self.nodes().any(|y2| self.s.r(x, y2) && self.h[y2] == y))
        })
    }
}

fn idx(f: &Frame, w: &str) -> usize {
    f.index_of(w).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn witnesses_are_genuine_violations(m in arb_map()) {
        let (s, t, h) = (m.source(), m.target(), m.table());
        let sn = 0..s.len();
        if let Some(w) = m.check_monotone().witness {
            let (x, y) = (idx(s, &w[0]), idx(s, &w[1]));
            prop_assert!(s.le(x, y) && !t.le(h[x], h[y]));
        }
        if let Some(w) = m.check_le_back().witness {
            let (x, b) = (idx(s, &w[0]), idx(t, &w[1]));
            prop_assert!(t.le(h[x], b) && !sn.clone().any(|x2| s.le(x, x2) && h[x2] == b));
        }
        if let Some(w) = m.check_r_forth().witness {
            let (x, y) = (idx(s, &w[0]), idx(s, &w[1]));
            prop_assert!(s.r(x, y) && !t.r(h[x], h[y]));
        }
        if let Some(w) = m.check_weak_back().witness {
            let (x, z) = (idx(s, &w[0]), idx(t, &w[1]));
            prop_assert!(t.r(h[x], z) && !sn.clone().any(|x2| s.r(x, x2) && t.le(z, h[x2])));
        }
        if let Some(w) = m.check_strong_back().witness {
            let (x, mm, z) = (idx(s, &w[0]), idx(t, &w[1]), idx(t, &w[2]));
            prop_assert!(t.le(h[x], mm) && t.r(mm, z));
            prop_assert!(!sn.clone().any(|x2| s.le(x, x2) && sn.clone().any(|x3| s.r(x2, x3) && t.le(h[x3], z))));
        }
        if let Some(w) = m.check_r_bounded_back().witness {
            let (x, y) = (idx(s, &w[0]), idx(t, &w[1]));
            prop_assert!(t.r(h[x], y) && !sn.clone().any(|y2| s.r(x, y2) && h[y2] == y));
        }
    }

    #[test]
    fn conditions_agree_with_enumeration(m in arb_map()) {
        let raw = Raw { s: m.source(), t: m.target(), h: m.table() };
        prop_assert_eq!(m.check_monotone().holds, raw.monotone());
        prop_assert_eq!(m.check_le_back().holds, raw.le_back());
        prop_assert_eq!(m.check_r_forth().holds, raw.r_forth());
        prop_assert_eq!(m.check_weak_back().holds, raw.weak_back());
        prop_assert_eq!(m.check_strong_back().holds, raw.strong_back());
        prop_assert_eq!(m.check_r_bounded_back().holds, raw.r_bounded_back());
        let fs = raw.monotone() && raw.le_back() && raw.r_forth() && raw.weak_back() && raw.strong_back();
        prop_assert_eq!(m.check_fs_morphism().holds, fs);
        let ik = raw.monotone() && raw.le_back() && raw.r_forth() && raw.r_bounded_back();
        prop_assert_eq!(m.check_ik_morphism().holds, ik);
        let onto = raw.tnodes().all(|b| raw.h.contains(&b));
        prop_assert_eq!(m.is_surjective(), onto);
    }

    #[test]
    fn reports_evaluate_every_condition(m in arb_map()) {
        prop_assert_eq!(m.check_fs_morphism().conditions.len(), 5);
        prop_assert_eq!(m.check_ik_morphism().conditions.len(), 4);
    }

    #[test]
    fn identity_is_a_morphism_of_both_kinds(f in arb_fs_space(5)) {
        let id = FrameMap::identity(Arc::new(f));
        prop_assert!(id.check_fs_morphism().holds);
        prop_assert!(id.check_ik_morphism().holds);
        prop_assert!(id.is_surjective());
    }

    #[test]
    fn ik_morphisms_compose(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = Arc::new(random_ik_frame(&mut r, 3, FrameClass::Any));
        let c = fskit::random::fold_with_generated(&a, &[0]);
        let d = fskit::random::fold_with_generated(c.source(), &[c.source().len() - 1]);
        let both = d.compose(&c).unwrap();
        prop_assert!(c.check_ik_morphism().holds && d.check_ik_morphism().holds);
        prop_assert!(both.check_ik_morphism().holds);
        prop_assert!(both.is_surjective());
    }
}

proptest! {
    #[test]
    fn fs_morphisms_compose(seed in any::<u64>()) {
        // chain two random FS legs: B -> A from a formation over A, then C -> B over B
        let mut r = rng(seed);
        let c1 = fskit::random::random_formation(&mut r, fskit::amalgam::Mode::FS, FrameClass::Any, 4);
        let m1 = c1.f().clone();
        let c2 = fskit::random::random_formation(&mut r, fskit::amalgam::Mode::FS, FrameClass::Any, 4);
        let b = m1.source().clone();
        let m2 = if c2.base() == &b { c2.f().clone() } else { fskit::random::fold_with_generated(&b, &[0]) };
        prop_assert!(m1.check_fs_morphism().holds && m2.check_fs_morphism().holds);
        prop_assert!(m2.compose(&m1).unwrap().check_fs_morphism().holds);
    }
}

#[test]
fn counterexample_maps_are_fs_morphisms_also_on_the_reflexive_variant() {
    for c in [
        fskit::counterexample::paper_formation(),
        fskit::counterexample::reflexive_variant(),
    ] {
        for m in [c.f(), c.g()] {
            assert!(m.check_fs_morphism().holds);
            assert!(m.is_surjective());
        }
    }
}

#[test]
fn mismatched_table_is_rejected() {
    let f = Arc::new(Frame::from_edges(&["a"], &[] as &[(&str, &str)], &[] as &[(&str, &str)]).unwrap());
    assert!(FrameMap::new(f.clone(), f.clone(), vec![]).is_err());
    assert!(FrameMap::new(f.clone(), f, vec![1]).is_err());
}
