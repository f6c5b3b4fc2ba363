//! Trivalent trees modulo IHX against special derivations, and the one-loop
//! trace of the splitting differential against the divergence.
//!
//! Run with `cargo run --release --example trees_and_divergence`.

use formality::cohomology::{div_factorization_check, tree_h0};
use formality::graph::EnumLimits;
use formality::lie::sder::sder_dimension;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let limits = EnumLimits::default();
    for n in 2..=3 {
        for w in 1..=4 {
            let h = tree_h0(n, w, limits)?;
            println!(
                "n={n} w={w}: {:>3} trees, IHX rank {:>3}, quotient {:>2}, sder {:>2}",
                h.trivalent_trees,
                h.ihx_rank,
                h.dim,
                sder_dimension(n, w)
            );
        }
    }
    println!();
    for n in 3..=4 {
        for w in 1..=3 {
            let d = div_factorization_check(n, w, limits)?;
            println!(
                "n={n} w={w}: {} trees, {} with nonzero divergence, sign {:?}, consistent {}",
                d.samples, d.nontrivial, d.sign, d.consistent
            );
        }
    }
    Ok(())
}
