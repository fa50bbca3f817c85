mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use fskit::algebra::{
    check_fs_algebra, congruence_filter_bijection_check, enumerate_congruences, enumerate_modal_filters,
    modal_filter_generated, quotient_by_modal_filter, Congruence, UpsetAlgebra, DEFAULT_CONGRUENCE_BOUND,
};
use fskit::formula::parse;
use fskit::semantics::evaluate;
use proptest::prelude::*;

fn truth_of(alg: &UpsetAlgebra, i: usize) -> Vec<bool> {
    let u = alg.element(i);
    (0..alg.base().len()).map(|x| u.contains(x)).collect()
}

proptest! {
    #[test]
    fn residuation_on_upsets(f in arb_fs_space(4)) {
        let alg = UpsetAlgebra::dual_of(&f).unwrap();
        let a = alg.algebra();
        let subset = |x: usize, y: usize| alg.element(x).is_subset(alg.element(y));
        for u in 0..a.size {
            for v in 0..a.size {
                let imp = a.himp(u, v);
                for w in 0..a.size {
                    let meet = alg.element(w).intersection(alg.element(u));
                    prop_assert_eq!(subset(w, imp), meet.is_subset(alg.element(v)));
                }
            }
        }
    }

    #[test]
    fn dual_operations_agree_with_pointwise_forcing(f in arb_fs_space(4)) {
        let alg = UpsetAlgebra::dual_of(&f).unwrap();
        prop_assert_eq!(alg.len(), upset_count(&f));
        let ops = ["p & q", "p | q", "p -> q", "box p", "dia p", "T", "F"].map(|s| parse(s).unwrap());
        for i in 0..alg.len() {
            for j in 0..alg.len() {
                let v = BTreeMap::from([("p".into(), i), ("q".into(), j)]);
                let tv = BTreeMap::from([("p".into(), truth_of(&alg, i)), ("q".into(), truth_of(&alg, j))]);
                for phi in &ops {
                    let got = evaluate(phi, alg.algebra(), &v).unwrap();
                    prop_assert_eq!(truth_of(&alg, got), force(&f, phi, &tv), "{}", phi);
                }
            }
        }
    }

    #[test]
    fn dual_algebras_satisfy_the_axioms(f in arb_fs_space(5)) {
        let alg = UpsetAlgebra::dual_of(&f).unwrap();
        prop_assert!(check_fs_algebra(alg.algebra()).unwrap().holds);
    }

    #[test]
    fn modal_filters_match_subset_enumeration(f in arb_fs_space(4)) {
        let alg = UpsetAlgebra::dual_of(&f).unwrap();
        prop_assume!(alg.len() <= 10);
        let a = alg.algebra();
        let lib: BTreeSet<BTreeSet<usize>> =
            enumerate_modal_filters(a).iter().map(|m| m.to_vec().into_iter().collect()).collect();
        let oracle = brute_modal_filters(a);
        prop_assert_eq!(&lib, &oracle.iter().cloned().collect::<BTreeSet<_>>());
        for x in 0..a.size {
            for y in x..a.size {
                let generated: BTreeSet<usize> = modal_filter_generated(a, &[x, y]).to_vec().into_iter().collect();
                prop_assert_eq!(generated, least_filter_containing(&oracle, &[x, y]));
            }
        }
    }

    #[test]
    fn congruences_match_partition_enumeration(f in arb_fs_space(3)) {
        let alg = UpsetAlgebra::dual_of(&f).unwrap();
        let a = alg.algebra();
        let lib: BTreeSet<Vec<usize>> = enumerate_congruences(a, DEFAULT_CONGRUENCE_BOUND)
            .unwrap()
            .iter()
            .map(|c| c.labels().to_vec())
            .collect();
        let oracle: BTreeSet<Vec<usize>> = brute_congruences(a).into_iter().collect();
        prop_assert_eq!(lib, oracle);
        prop_assert!(congruence_filter_bijection_check(a, DEFAULT_CONGRUENCE_BOUND).unwrap().holds);
    }

    #[test]
    fn quotients_are_fs_algebras_with_homomorphic_projections(f in arb_fs_space(3)) {
        let alg = UpsetAlgebra::dual_of(&f).unwrap();
        let a = alg.algebra();
        for filter in enumerate_modal_filters(a) {
            let q = quotient_by_modal_filter(a, &filter).unwrap();
            prop_assert!(check_fs_algebra(&q.algebra).unwrap().holds);
            let h = |x: usize| q.projection[x];
            let b = &q.algebra;
            for x in 0..a.size {
                prop_assert_eq!(h(a.boxed(x)), b.boxed(h(x)));
                prop_assert_eq!(h(a.dia(x)), b.dia(h(x)));
                for y in 0..a.size {
                    prop_assert_eq!(h(a.meet(x, y)), b.meet(h(x), h(y)));
                    prop_assert_eq!(h(a.join(x, y)), b.join(h(x), h(y)));
                    prop_assert_eq!(h(a.himp(x, y)), b.himp(h(x), h(y)));
                }
            }
            // the kernel of the projection is exactly the filter
            let kernel: Vec<usize> = (0..a.size).filter(|&x| h(x) == b.top).collect();
            prop_assert_eq!(kernel, filter.to_vec());
            prop_assert_eq!(Congruence::of_filter(a, &filter).class_count(), b.size);
        }
    }
}

#[test]
fn dual_algebra_requires_an_fs_frame() {
    let f = fskit::frame::Frame::from_edges(&["a", "b"], &[("a", "b")], &[("a", "a")]).unwrap();
    assert!(!f.check_f1().holds);
    assert!(UpsetAlgebra::dual_of(&f).is_err());
}

#[test]
fn malformed_tables_are_rejected() {
    let mut a = fskit::algebra::FiniteAlgebra::two_element([0, 1], [0, 1]);
    a.boxx = vec![0];
    assert!(check_fs_algebra(&a).is_err());
}

#[test]
fn broken_connection_axiom_is_detected() {
    // box constantly 1 with identity dia: dia(0 -> 0) = 1 but box 0 -> dia 0 = 0
    let a = fskit::algebra::FiniteAlgebra::two_element([1, 1], [0, 1]);
    let rep = check_fs_algebra(&a).unwrap();
    let failed: Vec<String> = rep
        .axioms
        .iter()
        .filter(|c| !c.holds)
        .map(|c| c.condition.to_string())
        .collect();
    assert_eq!(failed, ["CONNECTION_DIA"]);
}
