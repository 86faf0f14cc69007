//! Graphs with ports: gluing, isomorphism and the category of elements.
//!
//! Run with `cargo run --example graphs`.

use brauerkit::graph::{x_iso, Graph, XGraph};

fn main() -> brauerkit::error::Result<()> {
    let c2 = Graph::corolla_n(2);
    let glued = c2.glue("1", "2")?;
    let wheel = Graph::wheel(1)?;
    println!("C_2 with its ports glued:\n{glued}");
    println!("isomorphic to the wheel W_1: {}", glued.is_isomorphic(&wheel));

    // Gluing a corolla onto the end of a line gives a longer line.
    let line = Graph::line(2);
    let longer = line.disjoint_union(&Graph::corolla_named(&["a", "b"], "new")?)?.glue("2", "a")?;
    let rho = [("1", "1"), ("b", "2")].iter().map(|(p, x)| (p.to_string(), x.to_string())).collect();
    let x = XGraph::new(longer, rho)?;
    println!("line(2) extended by a corolla is line(3): {}", x_iso(&x, &XGraph::identity(Graph::line(3))).is_some());

    let w3 = Graph::wheel(3)?;
    let el = w3.elements();
    println!("\nW_3 has {} sticks, {} corollas and {} essential morphisms", el.sticks.len(), el.corollas.len(), el.morphisms.len());
    println!("canonical form of W_3:\n{}", w3.canonical_form());
    println!("{}", w3.to_dot());
    Ok(())
}
