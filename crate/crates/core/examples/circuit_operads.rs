//! Circuit operads as tables, and their modular operad laws.
//!
//! Run with `cargo run --release --example circuit_operads`.

use brauerkit::coloured::Palette;
use brauerkit::species::CircuitOperad;
use brauerkit::wiring::MatchingAlgebra;

fn main() -> brauerkit::error::Result<()> {
    for pal in [Palette::monochrome("a"), Palette::oriented()] {
        let co = CircuitOperad::from_circuit_algebra(&MatchingAlgebra::new(pal.clone(), 4))?;
        println!("matchings over {}:", serde_json::to_string(&pal)?);
        println!("  circuit operad laws: {}", co.validate());
        println!("  modular operad laws: {}", co.check_modular());
    }
    Ok(())
}
