//! The configuration-space connection: its weight-one part is the angle form,
//! and its weight-two part is flat up to Monte Carlo and finite-difference
//! error.
//!
//! Run with `cargo run --release --example connection`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use formality::kforms::{angle_form_eval, connection_eval, flatness_residual, Configuration, McConfig, Tangent};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let two = Configuration::new(vec![[0.1, -0.2], [0.9, 0.4]])?;
    let v = Tangent::new(vec![[0.3, 0.5], [-0.2, 0.7]]);
    let a = connection_eval(&two, &v, 1, &McConfig::new(10_000, 0))?;
    println!("A(v) on two points: {:.15} t12", a.coords[1][0].value);
    println!("angle form        : {:.15}", angle_form_eval(&two, 0, 1, &v)?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let three = Configuration::random(3, 0.2, &mut rng);
    let x = Tangent::coordinate(3, 1, 0);
    let y = Tangent::coordinate(3, 2, 1);
    let report = flatness_residual(&three, &x, &y, 1e-4 * three.radius(), &McConfig::new(200_000, 1))?;
    println!("\nweight two at {:?}", three.points());
    println!(
        "  d A_2 (x, y)   = {:+.5} ± {:.1e}",
        report.derivative[0].value, report.derivative[0].stderr
    );
    println!("  [A_1 x, A_1 y] = {:+.5}", report.bracket[0]);
    println!(
        "  residual {:.1e}, error budget {:.1e}",
        report.max_residual, report.error_budget
    );
    Ok(())
}
