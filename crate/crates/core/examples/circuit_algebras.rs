//! Wiring diagrams, operadic composition and circuit algebra checks.
//!
//! Run with `cargo run --release --example circuit_algebras`.

use brauerkit::coloured::Palette;
use brauerkit::wiring::{
    check_circuit_algebra, contraction_wd, enumerate_wiring, operad_gamma, tabulate, CheckConfig, CircuitAlgebra,
    FreeCircuitAlgebra, FreeGenerator, MatchingAlgebra, WiringDiagram,
};

fn main() -> brauerkit::error::Result<()> {
    let pal = Palette::monochrome("a");
    let a = |n: usize| vec!["a".to_string(); n];

    // Contract points 1 and 2 of a four-point block, then points 1 and 2 of the result.
    let outer = contraction_wd(&pal, &a(2), 1, 2)?;
    let inner = contraction_wd(&pal, &a(4), 1, 2)?;
    let both = operad_gamma(&outer, &[inner])?;
    println!("contract twice: {both}");

    // Plugging identities in leaves a diagram unchanged.
    let id = WiringDiagram::identity(&pal, &[a(0)])?;
    println!("unit law: {}", operad_gamma(&id, &[WiringDiagram::identity(&pal, &[a(0)])?])? == id);

    // The matching algebra passes every law it is checked against.
    let cfg = CheckConfig { max_points: 4, max_blocks: 2, samples: 500, ..Default::default() };
    let matching = MatchingAlgebra::new(pal.clone(), 4);
    println!("\nmatching algebra: {}", check_circuit_algebra(&matching, &cfg)?);

    // Tabulate it, break one entry and watch the check find it.
    let pool = enumerate_wiring(&pal, 4, 2, 0, 4)?;
    let mut table = tabulate(&matching, &pool)?;
    let target = table.listed().filter(|wd| wd.blocks().len() == 2).find_map(|wd| {
        let carrier = table.carrier(&wd.output_type()).ok()?;
        let (inputs, current) = table.table(wd)?.iter().next()?;
        let other = carrier.into_iter().find(|y| y != current)?;
        Some((wd.clone(), inputs.clone(), other))
    });
    if let Some((wd, inputs, other)) = target {
        table.set_entry(&wd, inputs, other)?;
        let report = check_circuit_algebra(&table, &cfg)?;
        println!("after corrupting {wd}: {} violations", report.violations.len());
    }

    // A free circuit algebra on one generator with two boundary points.
    let gens = vec![FreeGenerator { name: "f".into(), word: a(2) }];
    let free = FreeCircuitAlgebra::new(pal.clone(), gens, 4)?;
    for n in 0..=4 {
        println!("free algebra carrier at a^{n}: {} elements", free.carrier(&a(n))?.len());
    }
    Ok(())
}
