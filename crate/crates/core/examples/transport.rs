//! Flat polynomial connections on simplices with nilpotent values, their
//! iterated integrals `K`, edge holonomies `T` and the homotopy `Psi`.
//!
//! Run with `cargo run --example transport`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use formality::transport::{k_boundary_check, k_map, psi_boundary_check, t_map, t_simplicial_check, PolyConnection};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = PolyConnection::random_gauge(1, 0, 2, 3, &mut rng)?;
    println!("A on the interval: {}", a.form());
    println!("K(A) = {}", k_map(&a)?);
    println!("T(A) = {}", t_map(&a));

    for dim in 0..=2 {
        let a = PolyConnection::random_gauge(dim, 0, 2, 3, &mut rng)?;
        let k = k_boundary_check(&a)?;
        let t = t_simplicial_check(&a)?;
        let b = PolyConnection::random_gauge(dim, 1, 2, 3, &mut rng)?;
        let psi = psi_boundary_check(&b)?;
        println!(
            "simplex {dim}: K(dA) = b K(A) {}, T simplicial {}, Psi identity {} ({} terms)",
            k.passed(),
            t.passed(),
            psi.passed(),
            psi.rhs.len()
        );
    }
    Ok(())
}
