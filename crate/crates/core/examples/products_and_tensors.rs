//! Products over product rings and free modules `A^k ⊗ M`: a submodule of a
//! product is classical 1-absorbing prime iff it has the shape of one
//! classical prime component with the rest whole, and `P^k` inherits the
//! property from `P`.
//!
//! `cargo run --example products_and_tensors`

use std::sync::Arc;

use c1abs::classify::{is_classical_one_absorbing_prime, is_classical_prime};
use c1abs::construct::{FreeTensor, ProductModule};
use c1abs::{FiniteModule, FiniteRing};

fn main() -> c1abs::Result<()> {
    let z2 = Arc::new(FiniteModule::ring_as_module(&Arc::new(FiniteRing::zmod(2)?)));
    let z4 = Arc::new(FiniteModule::ring_as_module(&Arc::new(FiniteRing::zmod(4)?)));
    let product = ProductModule::new(&[z2.clone(), z4.clone()])?;
    println!("{}", product.module().label());
    for p in product.module().all_submodules()?.into_iter().filter(|p| p.is_proper()) {
        let parts = product.components(&p)?;
        let mut shape = false;
        for (i, c) in parts.iter().enumerate() {
            let rest_whole = parts.iter().enumerate().all(|(j, d)| j == i || !d.is_proper());
            shape |= rest_whole && c.is_proper() && is_classical_prime(c)?.holds();
        }
        let labels: Vec<String> = parts.iter().map(|c| c.short_name()).collect();
        println!(
            "  {:<10} c1ap={:<5} shape={shape}",
            labels.join(" x "),
            is_classical_one_absorbing_prime(&p)?.holds()
        );
    }

    for k in [2, 3] {
        let t = FreeTensor::new(&z4, k)?;
        println!("{}", t.module().label());
        for p in z4.all_submodules()?.into_iter().filter(|p| p.is_proper()) {
            let below = is_classical_one_absorbing_prime(&p)?.holds();
            let above = is_classical_one_absorbing_prime(&t.submodule(&p)?)?.holds();
            println!("  {:<4} P: {below:<5} P^{k}: {above}", p.short_name());
        }
    }
    Ok(())
}
