//! Shuffles with signs, and the Alexander-Whitney and shuffle maps between
//! diagonal and bigraded chains of products of poset nerves.
//!
//! Run with `cargo run --example simplicial`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use formality::transport::{
    aw_map, check_decomposition, diagonal_boundary, homology_check, monoidal_aw_check, random_diagonal_chain,
    shuffle_map, shuffles_with_signs, total_boundary, Poset, SimplicialSet,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (s, sign) in &shuffles_with_signs(2, 1).entries {
        println!("shuffle {:?} | {:?}  sign {sign:+}", s.first, s.second);
    }
    let d = check_decomposition(3, 3);
    println!(
        "(3, 3): {} shuffles, splitting at every cut exact: {}",
        d.shuffles,
        d.passed()
    );

    let circle = SimplicialSet::new(vec![Poset::circle()]);
    for level in 0..=2 {
        let h = homology_check(&circle, &circle, level)?;
        println!("torus, level {level}: homology rank {}", h.homology_rank);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = SimplicialSet::random(2, 4, &mut rng);
    let y = SimplicialSet::random(1, 4, &mut rng);
    let a = random_diagonal_chain(&x, &y, 2, 3, &mut rng);
    let image = aw_map(&a)?;
    println!("\nAW of a level-2 diagonal chain has {} terms", image.len());
    println!(
        "AW is a chain map: {}",
        aw_map(&diagonal_boundary(&a))? == total_boundary(&image)
    );
    println!("sh∘AW has {} terms", shuffle_map(&image)?.len());
    let b = random_diagonal_chain(&x, &y, 1, 3, &mut rng);
    println!("monoidal identity: {}", monoidal_aw_check(&a, &b)?.passed());
    Ok(())
}
