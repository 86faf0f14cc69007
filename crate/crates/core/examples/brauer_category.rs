//! Composition, tensor, duals and generator factorizations in the Brauer category.
//!
//! Run with `cargo run --example brauer_category`.

use brauerkit::brauer::{parse_word, BrauerDiagram};

fn main() -> brauerkit::error::Result<()> {
    // A cap followed by a cup closes into a single loop.
    let bubble = BrauerDiagram::cap().then(&BrauerDiagram::cup())?;
    println!("cap ; cup = {bubble}");

    // The snake identities straighten to the identity.
    for n in 1..=3 {
        let (left, right) = BrauerDiagram::zigzags(n);
        println!("zigzags at n = {n}: {} {}", left == BrauerDiagram::identity(n), right == BrauerDiagram::identity(n));
    }

    // Diagrams can be written as words in the generators.
    let f = parse_word("(cup + id_2) ; sigma_2 ; (id_1 + cap + id_1)")?;
    println!("parsed: {f}");
    let word = f.factor_generators()?;
    println!("factored back: {word}");
    assert_eq!(word.evaluate()?, f);

    // The dual reverses composition.
    let g = parse_word("sigma_2 + id_1")?;
    let h = BrauerDiagram::identity(1).tensor(&BrauerDiagram::cup());
    let lhs = g.then(&h)?.dual();
    let rhs = h.dual().then(&g.dual())?;
    println!("(g ; h)* = h* ; g*: {}", lhs == rhs);

    println!("\n{}", f.to_dot());
    Ok(())
}
