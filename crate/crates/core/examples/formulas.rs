//! Parsing and printing modal formulas.

use fskit::formula::{parse, Formula};

fn main() {
    for text in [
        "box p -> p",
        "dia (p -> q) -> (box p -> dia q)",
        "[]p & <>q | ~r",
        "(p -> q) -> r",
        "p -> q -> r",
        "box (p & q) <-> box p & box q",
    ] {
        let phi = parse(text).unwrap();
        println!("{text:36} => {phi}   (size {}, depth {})", phi.size(), phi.depth());
        assert_eq!(parse(&phi.render()).unwrap(), phi);
    }

    let built = Formula::implies(
        Formula::dia(Formula::dia(Formula::var("p"))),
        Formula::dia(Formula::var("p")),
    );
    println!("built: {built}");

    for bad in ["p ->", "box", "p <-> q <-> r", "(p & q"] {
        let e = parse(bad).unwrap_err();
        println!(
            "{bad:10} error at {}: found {}, expected {}",
            e.position,
            e.found,
            e.expected.join(" | ")
        );
    }
}
