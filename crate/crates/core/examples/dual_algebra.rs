//! The dual algebra of upsets of a frame.

use fskit::algebra::{check_fs_algebra, UpsetAlgebra};
use fskit::counterexample::frame_z;

fn main() {
    let z = frame_z();
    let alg = UpsetAlgebra::dual_of(&z).unwrap();
    println!("Up(Z) has {} elements", alg.len());
    let holds = check_fs_algebra(&alg).unwrap().holds;
    println!("FS-algebra axioms {}", if holds { "hold" } else { "fail" });

    let up_k0 = alg
        .index_of(&z.up_closure(&fskit::nodeset::NodeSet::singleton(z.len(), z.index_of("k0").unwrap())))
        .unwrap();
    let show = |i: usize| format!("{{{}}}", alg.element_names(i).join(","));
    println!("U = {}", show(up_k0));
    println!("dia U = {}", show(alg.dia(up_k0)));
    println!("box U = {}", show(alg.boxed(up_k0)));
    println!("U -> 0 = {}", show(alg.himp(up_k0, alg.bot)));
    println!("box 0 = {}", show(alg.boxed(alg.bot)));
}
