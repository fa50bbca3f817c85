//! Superamalgam clauses on a small algebra diagram.
//!
//! A = 2 embeds into the three-element chain B1 = B2 = C; the clauses fail
//! because the middle element has no interpolant in A. Pass `--json` to
//! print the diagram in the format `fskit superamalgam` reads.

use std::sync::Arc;

use fskit::algebra::FiniteAlgebra;
use fskit::amalgam::{check_superamalgam, AlgebraHom};
use fskit::io::SuperamalgamDoc;

fn main() {
    let two = FiniteAlgebra::chain(2, vec![0, 1], vec![0, 1]);
    let three = FiniteAlgebra::chain(3, vec![0, 1, 2], vec![0, 1, 2]);
    let doc = SuperamalgamDoc {
        a: two.clone(),
        b1: three.clone(),
        b2: three.clone(),
        c: three.clone(),
        h1: vec![0, 2],
        h2: vec![0, 2],
        p1: vec![0, 1, 2],
        p2: vec![0, 1, 2],
    };
    if std::env::args().any(|a| a == "--json") {
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        return;
    }
    let (a, b) = (Arc::new(two), Arc::new(three));
    let h = AlgebraHom::new(a.clone(), b.clone(), doc.h1.clone()).unwrap();
    let p = AlgebraHom::identity(b.clone());
    let rep = check_superamalgam(&h, &h, &p, &p).unwrap();
    for c in &rep.clauses {
        println!(
            "{}: {}",
            c.clause,
            if c.holds {
                "holds".into()
            } else {
                format!("fails at {:?}", c.witness.unwrap())
            }
        );
    }

    let id = AlgebraHom::identity(a);
    println!(
        "identity diagram on 2: {}",
        check_superamalgam(&id, &id, &id, &id).unwrap().holds
    );
}
