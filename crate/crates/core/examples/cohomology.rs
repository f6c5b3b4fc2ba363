//! Cohomology of the graph complex in each weight, next to the dimensions of
//! the Drinfeld-Kohno Lie algebra `t_n` computed from Lyndon words.
//!
//! Run with `cargo run --release --example cohomology -- 4`.

use formality::cohomology::{differential_squares, h_cg_dimensions};
use formality::graph::EnumLimits;
use formality::lie::tn::tn_dimension;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map_or(Ok(3), |s| s.parse())?;
    let limits = EnumLimits::default();
    println!("n = {n}");
    println!("{:>6} {:>8} {:>10}  other degrees", "weight", "dim H^0", "dim t_n");
    for w in 1..=3 {
        assert!(differential_squares(n, w, limits)?.passed());
        let dims = h_cg_dimensions(n, w, limits)?;
        let others: Vec<_> = dims.iter().filter(|(d, _)| **d != 0).collect();
        println!(
            "{w:>6} {:>8} {:>10}  {others:?}",
            dims.get(&0).copied().unwrap_or(0),
            tn_dimension(n, w)
        );
    }
    Ok(())
}
