//! Parse a graph, put it in canonical form, contract its edges and count the
//! internally connected graphs of small weight.
//!
//! Run with `cargo run --example graphs`.

use formality::graph::{d_contract, enumerate_internally_connected, EnumLimits, GraphJson, RawGraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tripod: RawGraph = "n=3; m=1; edges=[(4,3),(1,4),(2,4)]".parse()?;
    tripod.validate()?;
    let (canonical, sign) = tripod.canonicalize()?;
    println!("input     {}", tripod.to_text());
    println!("canonical {canonical} (sign {sign:+})");
    println!("grading   {:?}", canonical.grading());
    println!("json      {}", serde_json::to_string(&GraphJson::from(&tripod))?);
    println!("d(tripod) = {}", d_contract(&canonical));

    println!("\ninternally connected graphs with 3 external vertices:");
    for w in 1..=4 {
        let graphs = enumerate_internally_connected(3, w, EnumLimits::default())?;
        println!("  weight {w}: {}", graphs.len());
    }
    Ok(())
}
