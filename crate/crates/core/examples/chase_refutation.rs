//! Refuting the existence of any co-amalgam by saturation.
//!
//! Prints the derivation for the counterexample formation and its reflexive
//! variant; pass `--json` for the certificate itself.

use fskit::amalgam::{chase_refute, ChaseConfig, ChaseOutcome, CoVFormation, DerivationEnd, Mode};
use fskit::counterexample::{paper_formation, reflexive_variant};

fn run(name: &str, c: &CoVFormation, json: bool) {
    match chase_refute(c, Mode::FS, ChaseConfig::default()).unwrap() {
        ChaseOutcome::Refuted(cert) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&cert).unwrap());
                return;
            }
            println!(
                "{name}: refuted with {} elements and {} splits",
                cert.elements, cert.splits
            );
            for step in &cert.derivation.steps {
                println!("  {step}");
            }
            if let DerivationEnd::Contradiction(con) = &cert.derivation.end {
                println!("  => {con}");
            }
            println!("  replay: {:?}", cert.replay(c));
        }
        ChaseOutcome::Inconclusive(inc) => println!("{name}: inconclusive ({:?})", inc.reason),
    }
}

fn main() {
    let json = std::env::args().any(|a| a == "--json");
    run("formation", &paper_formation(), json);
    run("reflexive variant", &reflexive_variant(), json);
    if !json {
        let id = CoVFormation::identity(paper_formation().base().clone());
        run("identity formation on Z", &id, false);
    }
}
