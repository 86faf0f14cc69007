//! Linear combinations of Brauer diagrams over several coefficient rings.
//!
//! Run with `cargo run --example brauer_algebra`.

use brauerkit::brauer::BrauerDiagram;
use brauerkit::brauer_algebra::{algebra_dimension, bd_to_br_t, br_compose, is_walled, BrElement, Ring};

fn main() -> brauerkit::error::Result<()> {
    for n in 0..=5 {
        println!("dim Br_{n} = {}  ({} open diagrams)", algebra_dimension(n), BrauerDiagram::enumerate_open(n, n).len());
    }

    // Over Z[t] each closed loop contributes a factor t.
    let zt = Ring::IntPoly;
    let t = zt.t()?;
    let e = BrauerDiagram::cup().then(&BrauerDiagram::cap())?;
    let x = BrElement::basis(&zt, &e)?;
    println!("\ne = {e}");
    println!("e * e = {}", br_compose(&x, &x, &t)?);

    // A two-term element over Z/5 with loop parameter 3.
    let f5 = Ring::parse("Z/5")?;
    let s = BrauerDiagram::identity(2).tensor(&BrauerDiagram::identity(0));
    let sum = BrElement::basis(&f5, &s)?.add(&BrElement::term(&f5, &e, f5.from_int(2))?)?;
    println!("(id + 2e)^2 over Z/5 with delta = 3: {}", br_compose(&sum, &sum, &f5.from_int(3))?);

    // Diagrams with loops lift to monomials in t.
    let loopy = BrauerDiagram::cap().then(&BrauerDiagram::cup())?.tensor(&e);
    println!("\nlift of {loopy}: {}", bd_to_br_t(&loopy));

    // The walled Brauer condition on a 2 -> 2 diagram split as 1|1 on each side.
    println!("e is walled for (1, 1, 1, 1): {}", is_walled(&e, (1, 1, 1, 1))?);
    println!("id is walled for (1, 1, 1, 1): {}", is_walled(&BrauerDiagram::identity(2), (1, 1, 1, 1))?);
    Ok(())
}
