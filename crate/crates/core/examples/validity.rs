//! Frame validity by sweeping all upset assignments, and axiom suites.

use fskit::counterexample::{frame_z, reflexive_variant};
use fskit::formula::parse;
use fskit::semantics::{axiom_suite, is_valid, Logic, Validity, DEFAULT_BUDGET};

fn main() {
    let z = frame_z();
    for text in ["dia (p -> q) -> (box p -> dia q)", "box p -> p", "p | ~p", "F"] {
        let phi = parse(text).unwrap();
        match is_valid(&phi, &z, DEFAULT_BUDGET).unwrap() {
            Validity::Valid { assignments } => println!("Z |= {phi}  ({assignments} assignments)"),
            Validity::Invalid { counter_assignment, .. } => {
                println!("Z does not validate {phi}: first counter-assignment {counter_assignment:?}")
            }
        }
    }

    let zr = reflexive_variant().base().clone();
    for (name, frame) in [("Z", &z), ("Z'", &zr)] {
        for logic in Logic::ALL {
            let rep = axiom_suite(frame, logic, DEFAULT_BUDGET).unwrap();
            let failing: Vec<_> = rep.failing().map(|r| r.name).collect();
            println!(
                "{name} {logic:>3}: {}",
                if rep.holds {
                    "all schemes valid".to_string()
                } else {
                    format!("fails {failing:?}")
                }
            );
        }
    }
}
