//! Free Lie algebras, `t_n`, special derivations and the weight-two hexagon
//! equations, all over the rationals.
//!
//! Run with `cargo run --example lie_algebras`.

use formality::lie::assoc::{solve_weight_two_hexagons, weight_two_candidate, AssociatorResiduals};
use formality::lie::free::{lyndon_words, witt_dimension};
use formality::lie::sder::{embedding_matrix, sder_dimension};
use formality::lie::tn::tn_dimension;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let words: Vec<String> = lyndon_words(2, 4)
        .iter()
        .map(|w| w.iter().map(|&c| char::from(b'x' + c)).collect())
        .collect();
    println!("Lyndon words of length 4 in x, y: {words:?}");
    println!(
        "Witt dimensions on 2 letters: {:?}",
        (1..=6).map(|w| witt_dimension(2, w)).collect::<Vec<_>>()
    );

    println!(
        "\n{:>2} {:>6} {:>5} {:>6} {:>14}",
        "n", "weight", "t_n", "sder", "rank t_n->sder"
    );
    for n in 2..=4 {
        for w in 1..=3 {
            let rank = embedding_matrix(n, w).rank();
            println!(
                "{n:>2} {w:>6} {:>5} {:>6} {rank:>14}",
                tn_dimension(n, w),
                sder_dimension(n, w)
            );
        }
    }

    let c = solve_weight_two_hexagons().ok_or("no solution")?;
    let residuals = AssociatorResiduals::evaluate(&weight_two_candidate(&c, 2))?;
    println!("\nhexagons force Phi = 1 + c [t13, t23] + ... with c = {c}");
    println!("remaining hexagon residual in weight two: {}", residuals.max_hexagon(2));
    Ok(())
}
