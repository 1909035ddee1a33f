//! Runs the registered checkers over the default corpus and prints the table.
//!
//! `cargo run --release --example theorem_suite -- [theorem ids...]`

use std::time::Instant;

use c1abs::lab::{run_suite, CorpusConfig};

fn main() -> c1abs::Result<()> {
    let config = CorpusConfig {
        theorems: std::env::args().skip(1).collect(),
        ..CorpusConfig::default()
    };
    let start = Instant::now();
    let report = run_suite(&config)?;
    print!("{}", report.table());
    println!(
        "{} checked, {} passed, {} failed, {} skipped in {:.1}s",
        report.checked(),
        report.passes(),
        report.failures(),
        report.skips(),
        start.elapsed().as_secs_f64()
    );
    for (id, t) in &report.theorems {
        for (inst, cx) in t.counterexamples.iter().take(3) {
            println!(
                "  {id} {inst}: {}",
                cx.rendered
                    .as_deref()
                    .map_or(cx.summary.clone(), |r| format!("{} {r}", cx.summary))
            );
        }
        for (reason, n) in &t.skip_reasons {
            println!("  {id} skipped {n}x: {reason}");
        }
    }
    Ok(())
}
