//! Tests sets for the m-closed condition and separates them from a
//! classical 1-absorbing prime submodule: a maximal submodule avoiding an
//! m-closed set is classical 1-absorbing prime.
//!
//! `cargo run --example krull_separation`

use std::sync::Arc;

use c1abs::classify::{is_c1ap_m_closed, krull_maximal_disjoint, maximal_disjoint_submodules};
use c1abs::{Bits, Decision, FiniteModule, FiniteRing};

fn main() -> c1abs::Result<()> {
    for (n, set) in [
        (4, vec![1, 3]),
        (8, vec![1, 3, 5, 7]),
        (8, vec![4]),
        (6, vec![1, 5]),
        (6, vec![2, 3]),
    ] {
        let m = Arc::new(FiniteModule::ring_as_module(&Arc::new(FiniteRing::zmod(n)?)));
        let s = Bits::from_indices(m.size(), set.iter().copied());
        let names: Vec<&str> = set.iter().map(|&x| m.name(x)).collect();
        print!("{} S={{{}}}: ", m.label(), names.join(","));
        match is_c1ap_m_closed(&m, &s)? {
            Decision::Holds => {
                let p = krull_maximal_disjoint(&m, &s)?;
                println!("m-closed, separated by {}", p.short_name());
            }
            Decision::Fails(w) => {
                let max: Vec<String> = maximal_disjoint_submodules(&m, &s)?
                    .iter()
                    .map(|p| p.short_name())
                    .collect();
                println!("not m-closed ({w}); maximal disjoint: {}", max.join(", "));
            }
        }
    }
    Ok(())
}
