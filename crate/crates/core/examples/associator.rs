//! The weight-two coefficient of the associator as the holonomy of the
//! connection along the standard path, compared with the hexagon solution.
//!
//! Run with `cargo run --release --example associator -- 4000000`.

use formality::kforms::{at_associator, McConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples: usize = std::env::args().nth(1).map_or(Ok(400_000), |s| s.parse())?;
    let est = at_associator(24, &McConfig::new(samples, 42))?;
    let c = est.coefficient;
    println!(
        "log Phi, weight one : {:?}",
        est.weight_one.iter().map(|e| e.value).collect::<Vec<_>>()
    );
    println!(
        "log Phi, [t13, t23] : {:.6} ± {:.1e} ({} samples)",
        c.value, c.stderr, c.samples
    );
    println!("with 12 nodes       : {:.6}", est.coarse.value);
    println!("hexagon solution    : {:.6}", est.hexagon_solution);
    println!(
        "hexagon residuals   : holonomy {:.1e}, inverse {:.1e} -> {}",
        est.hexagon_residual,
        est.inverse_hexagon_residual,
        est.orientation()
    );
    Ok(())
}
