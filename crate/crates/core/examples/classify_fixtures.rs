//! Classifies every proper submodule of a few small modules and prints the
//! least violating tuple for each class that fails.
//!
//! `cargo run --example classify_fixtures`

use std::sync::Arc;

use c1abs::classify::{minimal_classical_1abs_primes, Class, ClassReport};
use c1abs::lab::fixtures;
use c1abs::{FiniteModule, FiniteRing};

fn main() -> c1abs::Result<()> {
    for n in [4, 6, 8, 12] {
        let m = Arc::new(FiniteModule::ring_as_module(&Arc::new(FiniteRing::zmod(n)?)));
        println!("{}", m.label());
        for p in m.all_submodules()?.into_iter().filter(|p| p.is_proper()) {
            let report = ClassReport::new(&p)?;
            let cells: Vec<String> = Class::ALL
                .iter()
                .map(|&c| match report.witness(c) {
                    None => format!("{}=yes", c.column()),
                    Some(w) => format!("{}=no {}", c.column(), w.render(&m)),
                })
                .collect();
            println!("  {:<6} {}", p.short_name(), cells.join("  "));
        }
        let minimal: Vec<String> = minimal_classical_1abs_primes(&m)?
            .iter()
            .map(|p| p.short_name())
            .collect();
        println!("  minimal classical 1-absorbing primes: {}", minimal.join(", "));
    }

    println!("pinned fixtures");
    for f in fixtures()? {
        println!("  {} ({} in {})", f.name, f.submodule, f.module);
        for (flag, holds) in &f.flags {
            let w = f.witnesses.get(flag).map_or(String::new(), |w| format!(" {w}"));
            println!("    {flag:<22} {holds}{w}");
        }
    }
    Ok(())
}
