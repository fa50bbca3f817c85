//! The pullback construction: a co-amalgam for iK formations, not for the
//! FS counterexample.

use fskit::amalgam::{check_coamalgam, check_pullback_properties, mediating_map, pullback, LogicClass, Mode};
use fskit::counterexample::paper_formation;
use fskit::random::{random_formation, rng, FrameClass};

fn main() {
    let c = paper_formation();
    let pb = pullback(&c);
    println!("Pb(f, g) has {} nodes: {}", pb.frame.len(), pb.frame.nodes().join(" "));
    let rep = check_coamalgam(&c, &pb.frame, &pb.p1, &pb.p2, Mode::FS).unwrap();
    println!("as an FS co-amalgam: {}", rep.summary());

    let mut r = rng(2024);
    for class in LogicClass::ALL {
        let fc = match class {
            LogicClass::IT => FrameClass::Reflexive,
            LogicClass::IK4 => FrameClass::Transitive,
            LogicClass::IS4 => FrameClass::Preorder,
        };
        let c = random_formation(&mut r, Mode::IK, fc, 5);
        let rep = check_pullback_properties(&c, class).unwrap();
        let pb = pullback(&c);
        println!(
            "{class}: base {}, legs {} and {}, pullback {} nodes: {}",
            c.base().len(),
            c.left().len(),
            c.right().len(),
            pb.frame.len(),
            rep.summary()
        );
        // the pullback mediates to itself through the identity
        assert!(mediating_map(&pb, &pb.p1, &pb.p2).is_some());
    }
}
