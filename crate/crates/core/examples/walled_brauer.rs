//! Coloured Brauer diagrams and the walled normal form over the oriented palette.
//!
//! Run with `cargo run --example walled_brauer`.

use brauerkit::coloured::{ColouredBrauerDiagram, Palette};
use brauerkit::util::rng_from_seed;

fn main() -> brauerkit::error::Result<()> {
    let pal = Palette::oriented();
    println!("palette: {}", serde_json::to_string(&pal)?);
    let mut rng = rng_from_seed(7);

    let f = ColouredBrauerDiagram::random(&pal, 3, 3, 0, &mut rng)?;
    let g = ColouredBrauerDiagram::random_with_input(&pal, &f.output_type(), 1, 1, &mut rng)?;
    let fg = f.then(&g)?;
    println!("f     = {f}");
    println!("g     = {g}");
    println!("f ; g = {fg}");
    println!("forgetting colours commutes with composition: {}", fg.forget() == f.forget().then(&g.forget())?);

    let nf = fg.to_walled_normal_form()?;
    println!("\nwalled core {} with wall {:?}", nf.core, nf.wall);
    println!("source shuffle {:?}, target shuffle {:?}", nf.source_shuffle.images(), nf.target_shuffle.images());

    let (c, d) = fg.typed_boundary();
    let sort = ColouredBrauerDiagram::from_permutation(&pal, &nf.source_shuffle, &c)?;
    let unsort = ColouredBrauerDiagram::from_permutation(&pal, &nf.target_shuffle.inverse(), &nf.target_shuffle.permute(&d))?;
    println!("shuffle ; core ; unshuffle rebuilds f ; g: {}", sort.then(&nf.core)?.then(&unsort)? == fg);
    Ok(())
}
