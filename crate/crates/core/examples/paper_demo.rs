//! Replays every claim about the embedded counterexample formation.
//!
//! `cargo run --example paper_demo` prints a table; pass `--json` for the
//! machine-readable report.

use fskit::counterexample::run_paper_demo;

fn main() {
    let report = run_paper_demo();
    if std::env::args().any(|a| a == "--json") {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_table());
    }
    std::process::exit(if report.all_pass() { 0 } else { 1 });
}
