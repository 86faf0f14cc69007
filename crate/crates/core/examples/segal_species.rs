//! Graphical species, free nerve tables and the Segal condition.
//!
//! Run with `cargo run --release --example segal_species`.

use brauerkit::coloured::Palette;
use brauerkit::graph::Graph;
use brauerkit::species::{evaluate, free_nerve_table, segal_check, species_table, GraphicalSpecies, NamedGraph};

fn main() -> brauerkit::error::Result<()> {
    let pal = Palette::monochrome("a");
    let sign = GraphicalSpecies::sign(pal.clone(), 3);
    for (name, g) in [("C_2", Graph::corolla_n(2)), ("W_1", Graph::wheel(1)?), ("line(2)", Graph::line(2))] {
        println!("sign species on {name}: {} structures", evaluate(&sign, &g)?.len());
    }

    let glued = Graph::corolla_n(3).disjoint_union(&Graph::corolla_n(2).with_prefix("b"))?.glue("3", "b1")?;
    let graphs = vec![
        NamedGraph { id: "w1".into(), graph: Graph::wheel(1)? },
        NamedGraph { id: "glued".into(), graph: glued },
    ];

    // Presheaves that come from species always satisfy the Segal condition.
    let table = species_table(&sign, &graphs)?;
    println!("\nspecies table: {}", segal_check(&table)?);

    // So do nerves of free circuit operads, truncated to small graphs.
    let terminal = GraphicalSpecies::terminal(pal, 3);
    let nerve = free_nerve_table(&terminal, &graphs, 2, 3)?;
    let report = segal_check(&nerve)?;
    println!("free nerve: {report}");

    let mut broken = nerve.clone();
    let value = broken.values["glued"][0].clone();
    broken.drop_value("glued", &value);
    println!("after dropping a value, failing at: {:?}", segal_check(&broken)?.failing());
    Ok(())
}
