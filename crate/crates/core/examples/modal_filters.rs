//! Modal filters, congruences and quotients of finite FS-algebras.

use fskit::algebra::{
    congruence_filter_bijection_check, enumerate_modal_filters, modal_filter_generated, quotient_by_modal_filter,
    Congruence, UpsetAlgebra, DEFAULT_CONGRUENCE_BOUND,
};
use fskit::frame::Frame;

fn main() {
    // a ≤ b with b R b: a three-element chain of upsets
    let f = Frame::from_edges(&["a", "b"], &[("a", "b")], &[("b", "b")]).unwrap();
    let alg = UpsetAlgebra::dual_of(&f).unwrap();
    let show = |i: usize| format!("{{{}}}", alg.element_names(i).join(","));
    println!(
        "{} elements: {}",
        alg.len(),
        (0..alg.len()).map(show).collect::<Vec<_>>().join(" ")
    );

    for filter in enumerate_modal_filters(&alg) {
        let theta = Congruence::of_filter(&alg, &filter);
        let members: Vec<_> = filter.to_vec().into_iter().map(show).collect();
        println!("filter {members:?} -> congruence with {} classes", theta.class_count());
        let q = quotient_by_modal_filter(&alg, &filter).unwrap();
        println!(
            "  quotient has {} elements, projection {:?}",
            q.algebra.size, q.projection
        );
    }

    let generated = modal_filter_generated(&alg, &[1]);
    println!("modal filter generated by {}: {:?}", show(1), generated.to_vec());

    let report = congruence_filter_bijection_check(&alg, DEFAULT_CONGRUENCE_BOUND).unwrap();
    println!(
        "{} modal filters, {} congruences, maps mutually inverse: {}",
        report.modal_filters, report.congruences, report.holds
    );
}
