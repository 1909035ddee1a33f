//! Residuals of a classical 1-absorbing prime: `(P:_A abcm)` is the union of
//! `(P:_A abm)` and `(P:_A cm)`, and in fact equals one of them. The example
//! prints which side each nonunit triple lands on and evaluates every
//! equivalent characterization independently.
//!
//! `cargo run --example residual_calculus`

use std::sync::Arc;

use c1abs::classify::{classical_1abs_oracles, residual_union_decomposition, OracleCaps};
use c1abs::{FiniteModule, FiniteRing, Submodule};

fn main() -> c1abs::Result<()> {
    let ring = Arc::new(FiniteRing::zmod(8)?);
    let m = Arc::new(FiniteModule::ring_as_module(&ring));
    let p = Submodule::generated(&m, &[4])?;
    println!("P = {} in {}", p.short_name(), m.label());

    let nu = ring.nonunits();
    let (a, x) = (2, 1);
    for &b in &nu {
        for &c in &nu {
            let u = residual_union_decomposition(&p, a, b, c, x)?;
            println!(
                "  a={a} b={b} c={c}: (P:abcm)={} (P:abm)={} (P:cm)={} side={:?}",
                u.abcm.short_name(),
                u.abm.short_name(),
                u.cm.short_name(),
                u.side
            );
        }
    }

    println!("characterizations of {}:", p.short_name());
    for (form, outcome) in classical_1abs_oracles(&p, &OracleCaps::default())? {
        println!("  {:<32} {outcome:?}", form.name());
    }
    let zero = m.zero_submodule();
    let verdicts = classical_1abs_oracles(&zero, &OracleCaps::default())?;
    let agree = verdicts.values().all(|o| o.truth() == Some(false));
    println!("every characterization rejects {}: {agree}", zero.short_name());
    Ok(())
}
