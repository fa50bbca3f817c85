//! Writes the embedded formation as JSON documents the CLI accepts.
//!
//! `cargo run --example json_formats -- DIR` writes `z.json`, `x.json`,
//! `y.json`, `f.json`, `formation.json` and `reflexive_formation.json`
//! into DIR (default `data`), then reads each back to show the round trip
//! is exact.

use std::fs;
use std::path::PathBuf;

use fskit::amalgam::Mode;
use fskit::counterexample::{paper_formation, reflexive_variant};
use fskit::io::{self, Origin};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    fs::create_dir_all(&dir)?;
    let c = paper_formation();
    let docs = [
        ("z.json", io::frame_to_json(c.base())),
        ("x.json", io::frame_to_json(c.left())),
        ("y.json", io::frame_to_json(c.right())),
        ("f.json", io::morphism_to_json(c.f())),
        ("formation.json", io::formation_to_json(&c, Mode::FS)),
        (
            "reflexive_formation.json",
            io::formation_to_json(&reflexive_variant(), Mode::FS),
        ),
    ];
    for (name, text) in &docs {
        fs::write(dir.join(name), format!("{text}\n"))?;
        println!("wrote {}", dir.join(name).display());
    }

    let origin = Origin::inline("formation.json");
    let (back, mode) = io::parse_formation(&docs[4].1, &origin)?;
    assert_eq!(back, c);
    assert_eq!(io::formation_to_json(&back, mode), docs[4].1);
    println!("formation round-trips exactly");
    Ok(())
}
