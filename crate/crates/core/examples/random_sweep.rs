//! A seeded sweep over random FS-spaces: the IK axioms always hold, and
//! reflexivity/transitivity of R match IKT/IK4 validity.
//!
//! `cargo run --release --example random_sweep -- [COUNT] [SEED]`

use fskit::random::{random_fs_space, rng};
use fskit::semantics::{axiom_suite, Logic, DEFAULT_BUDGET};

fn main() {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let mut r = rng(seed);
    let (mut reflexive, mut transitive, mut mismatches) = (0, 0, 0);
    for _ in 0..count {
        let f = random_fs_space(&mut r, 5);
        let valid = |l| axiom_suite(&f, l, DEFAULT_BUDGET).unwrap().holds;
        assert!(valid(Logic::IK));
        let cls = f.classify();
        reflexive += cls.reflexive.holds as usize;
        transitive += cls.transitive.holds as usize;
        if cls.reflexive.holds != valid(Logic::IKT) || cls.transitive.holds != valid(Logic::IK4) {
            mismatches += 1;
            println!("mismatch on {f:?}");
        }
    }
    println!("{count} frames: {reflexive} reflexive, {transitive} transitive, {mismatches} mismatches");
}
