//! Loads a JSON structure file, builds every declared ring and module,
//! classifies one submodule and writes the structures back out as tables.
//!
//! `cargo run --example structure_file -- [FILE]`

use c1abs::classify::{Class, ClassReport};
use c1abs::cli::doc::{StructureDoc, Workspace};
use c1abs::lab::Caps;

const DEFAULT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/basic.json");

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| DEFAULT.to_string());
    let text = std::fs::read_to_string(&path).expect("readable structure file");
    let ws = match StructureDoc::parse(&text).and_then(|d| Workspace::load(&d, &Caps::default())) {
        Ok(ws) => ws,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(e.exit_code());
        }
    };
    for name in &ws.module_order {
        let m = &ws.modules[name];
        println!("{name}: {} elements over {}", m.size(), m.ring().label());
    }
    for (name, p) in &ws.submodules {
        if !p.is_proper() {
            println!("{name}: not proper");
            continue;
        }
        let report = ClassReport::new(p).expect("classifiable");
        let holds: Vec<&str> = Class::ALL
            .iter()
            .filter(|&&c| report.holds(c))
            .map(|c| c.column())
            .collect();
        println!(
            "{name}: {}",
            if holds.is_empty() {
                "none".to_string()
            } else {
                holds.join(", ")
            }
        );
    }
    let exported = ws.export();
    println!(
        "exported {} rings and {} modules as tables",
        exported.rings.len(),
        exported.modules.len()
    );
}
