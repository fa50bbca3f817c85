//! Frame conditions with witnesses: F1, F2, the mixed condition, iK
//! compatibility and the class predicates.

use fskit::counterexample::frame_x;
use fskit::frame::Frame;

fn show(name: &str, f: &Frame) {
    println!("{name}: {} nodes", f.len());
    let reports = f
        .check_fs_conditions()
        .into_iter()
        .chain([f.check_ik_compatibility()])
        .chain(f.classify().reports());
    for r in reports {
        println!("  {r}");
    }
}

fn main() {
    let x = frame_x();
    show("X", &x);

    // Deleting a3 R a0 breaks F1: a0 is R-reachable from below a3 only.
    let edges: Vec<(usize, usize)> = x
        .r_edges()
        .into_iter()
        .filter(|&(a, b)| (x.name(a), x.name(b)) != ("a3", "a0"))
        .collect();
    show("X without a3 R a0", &x.with_r_edges(&edges));

    show("X with reflexive R", &x.reflexive_closure());

    // A frame that satisfies F1 and F2 but not the mixed condition.
    let f = Frame::from_edges(&["a", "b"], &[("a", "b")], &[("a", "b"), ("b", "a"), ("b", "b")]).unwrap();
    show("two-point non-space", &f);

    println!("\n{}", x.to_dot("X"));
}
