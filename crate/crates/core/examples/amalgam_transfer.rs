//! Builds the duplication `M⋈I` of a module along an ideal and checks that
//! `P` is classical 1-absorbing prime in `M` exactly when `P⋈I` is in `M⋈I`.
//!
//! `cargo run --example amalgam_transfer`

use std::sync::Arc;

use c1abs::classify::is_classical_one_absorbing_prime;
use c1abs::construct::AmalgamModule;
use c1abs::{FiniteModule, FiniteRing, Ideal};

fn main() -> c1abs::Result<()> {
    for (n, gen) in [(4, 2), (8, 2), (8, 4), (6, 2), (4, 0)] {
        let ring = Arc::new(FiniteRing::zmod(n)?);
        let ideal = Ideal::generated(&ring, &[gen])?;
        let base = Arc::new(FiniteModule::ring_as_module(&ring));
        let dup = AmalgamModule::new(&base, &ideal)?;
        println!(
            "{} along {}: |A⋈I| = {}, |M⋈I| = {}",
            base.label(),
            ideal.short_name(),
            dup.amalgam_ring().ring().size(),
            dup.module().size()
        );
        for p in base.all_submodules()?.into_iter().filter(|p| p.is_proper()) {
            let below = is_classical_one_absorbing_prime(&p)?.holds();
            let lifted = dup.submodule(&p)?;
            let above = is_classical_one_absorbing_prime(&lifted)?;
            let mark = if below == above.holds() { "equal" } else { "DIFFERS" };
            println!("  {:<6} {below:<5} / {:<5} {mark}", p.short_name(), above.holds());
        }
    }
    Ok(())
}
