//! Substituting graphs into the vertices of a graph, vertex deletion and similarity.
//!
//! Run with `cargo run --example graph_substitution`.

use brauerkit::graph::{Graph, XGraph};
use brauerkit::substitution::{
    check_substitution_associativity, delete_vertex_labels, random_gog, random_nesting, similar, terminal_representative,
};
use brauerkit::util::rng_from_seed;

fn main() -> brauerkit::error::Result<()> {
    let mut rng = rng_from_seed(5);
    let base = Graph::line(2);
    let gog = random_gog(&base, 2, 3, &mut rng);
    let colim = gog.colimit()?;
    println!("base:\n{base}");
    println!("colimit ({} vertices, {} edges):\n{}", colim.graph.num_vertices(), colim.graph.num_edges(), colim.graph);
    println!("bookkeeping problems: {:?}", colim.check(&gog));

    let (outer, inners) = random_nesting(&Graph::corolla_n(3), 2, 3, &mut rng);
    println!("nested substitution is associative: {}", check_substitution_associativity(&outer, &inners)?);

    // Deleting the bivalent vertex of a line.
    let rec = delete_vertex_labels(&Graph::line(2), &["v1"])?;
    println!("\ndeleting v1 from line(2): kind {:?}, result\n{}", rec.kind(), rec.target);

    // Wheels and lines have sticks as terminal representatives.
    for g in [Graph::wheel(3)?, Graph::line(3), Graph::corolla_n(3)] {
        let t = terminal_representative(&XGraph::identity(g.clone()))?;
        println!("terminal representative of a graph with {} vertices: {} vertices", g.num_vertices(), t.graph().num_vertices());
    }
    let w2 = XGraph::identity(Graph::wheel(2)?);
    let w5 = XGraph::identity(Graph::wheel(5)?);
    println!("W_2 similar to W_5: {}", similar(&w2, &w5)?);
    Ok(())
}
