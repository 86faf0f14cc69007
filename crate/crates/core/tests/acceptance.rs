//! Acceptance suite. Prints one PASS or FAIL line per criterion and exits
//! with a failure status if any criterion fails.

use brauerkit::brauer::BrauerDiagram;
use brauerkit::brauer_algebra::{algebra_dimension, bd_to_br_t, br_compose, is_walled, Ring};
use brauerkit::coloured::{ColouredBrauerDiagram, Palette};
use brauerkit::graph::{x_iso, Graph, XGraph};
use brauerkit::pairing::all_matchings;
use brauerkit::species::{free_nerve_table, segal_check, GraphicalSpecies, NamedGraph};
use brauerkit::substitution::{
    check_deleted_colimit, check_substitution_associativity, random_gog, random_nesting, similar, subdivide,
};
use brauerkit::util::rng_from_seed;
use brauerkit::wiring::{
    check_circuit_algebra, contractible_pairs, contraction_wd, derived_contraction, enumerate_wiring, operad_gamma,
    shift_after_removal, tabulate, CheckConfig, CircuitAlgebra, FreeCircuitAlgebra, FreeGenerator, MatchingAlgebra,
};
use num_bigint::BigUint;
use rand::Rng;
use std::collections::BTreeMap;
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn words(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn triangle_identities() -> Outcome {
    for n in 1..=4 {
        let (l, r) = BrauerDiagram::zigzags(n);
        let id = BrauerDiagram::identity(n);
        ensure(l == id, || format!("left zigzag at n = {n} is {l}"))?;
        ensure(r == id, || format!("right zigzag at n = {n} is {r}"))?;
    }
    Ok("n = 1..4".into())
}

fn trace_identities() -> Outcome {
    let one = BrauerDiagram::cap().then(&BrauerDiagram::cup()).map_err(e)?;
    ensure(one == BrauerDiagram::bubbles(0, 0, BigUint::from(1u32)), || format!("cup after cap is {one}"))?;
    for n in 0..=5 {
        let d = BrauerDiagram::cap_n(n).then(&BrauerDiagram::cup_n(n)).map_err(e)?;
        ensure(d == BrauerDiagram::bubbles(0, 0, BigUint::from(n)), || format!("n = {n}: {d}"))?;
    }
    Ok("n = 0..5".into())
}

fn category_laws() -> Outcome {
    let mut hom: BTreeMap<(usize, usize), Vec<BrauerDiagram>> = BTreeMap::new();
    for m in 0..=3 {
        for n in 0..=3 {
            hom.insert((m, n), BrauerDiagram::enumerate(m, n, 1));
        }
    }
    let mut checked = 0usize;
    for m in 0..=3 {
        for n in 0..=3 {
            for f in &hom[&(m, n)] {
                ensure(BrauerDiagram::identity(m).then(f).ok().as_ref() == Some(f), || format!("left unit fails on {f}"))?;
                ensure(f.then(&BrauerDiagram::identity(n)).ok().as_ref() == Some(f), || format!("right unit fails on {f}"))?;
                checked += 2;
            }
        }
    }
    for m in 0..=3 {
        for n in 0..=3 {
            for p in 0..=3 {
                for q in 0..=3 {
                    for f in &hom[&(m, n)] {
                        for g in &hom[&(n, p)] {
                            let fg = f.then(g).map_err(e)?;
                            for h in &hom[&(p, q)] {
                                let a = fg.then(h).map_err(e)?;
                                let b = f.then(&g.then(h).map_err(e)?).map_err(e)?;
                                ensure(a == b, || format!("associativity fails on {f}; {g}; {h}"))?;
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    let mut rng = rng_from_seed(3);
    let arity = |rng: &mut brauerkit::util::SeededRng, parity: usize| loop {
        let k = rng.gen_range(0..=8usize);
        if (k + parity).is_multiple_of(2) {
            return k;
        }
    };
    for _ in 0..1000 {
        let m = rng.gen_range(0..=8);
        let n = arity(&mut rng, m);
        let p = arity(&mut rng, n);
        let q = arity(&mut rng, p);
        let f = BrauerDiagram::random(m, n, 2, &mut rng).map_err(e)?;
        let g = BrauerDiagram::random(n, p, 2, &mut rng).map_err(e)?;
        let h = BrauerDiagram::random(p, q, 2, &mut rng).map_err(e)?;
        let a = f.then(&g).map_err(e)?.then(&h).map_err(e)?;
        let b = f.then(&g.then(&h).map_err(e)?).map_err(e)?;
        ensure(a == b, || format!("associativity fails on {f}; {g}; {h}"))?;
        ensure(BrauerDiagram::identity(m).then(&f).map_err(e)? == f, || format!("left unit fails on {f}"))?;
        ensure(f.then(&BrauerDiagram::identity(n)).map_err(e)? == f, || format!("right unit fails on {f}"))?;
        checked += 3;
    }
    Ok(format!("{checked} instances, exhaustive up to arity 3 plus 1000 random at arity <= 8"))
}

fn random_composable(rng: &mut brauerkit::util::SeededRng) -> Result<(BrauerDiagram, BrauerDiagram), String> {
    let m = rng.gen_range(0..=6);
    let n = loop {
        let k = rng.gen_range(0..=6);
        if (m + k) % 2 == 0 {
            break k;
        }
    };
    let p = loop {
        let k = rng.gen_range(0..=6);
        if (n + k) % 2 == 0 {
            break k;
        }
    };
    Ok((BrauerDiagram::random(m, n, 2, rng).map_err(e)?, BrauerDiagram::random(n, p, 2, rng).map_err(e)?))
}

fn dual_contravariance() -> Outcome {
    let mut rng = rng_from_seed(4);
    for _ in 0..500 {
        let (f, g) = random_composable(&mut rng)?;
        let lhs = f.then(&g).map_err(e)?.dual();
        let rhs = g.dual().then(&f.dual()).map_err(e)?;
        ensure(lhs == rhs, || format!("fails on {f} then {g}"))?;
    }
    Ok("500 pairs".into())
}

fn enrichment() -> Outcome {
    let mut rng = rng_from_seed(5);
    let t = Ring::IntPoly.t().map_err(e)?;
    for _ in 0..500 {
        let (f, g) = random_composable(&mut rng)?;
        let lhs = bd_to_br_t(&f.then(&g).map_err(e)?);
        let rhs = br_compose(&bd_to_br_t(&f), &bd_to_br_t(&g), &t).map_err(e)?;
        ensure(lhs == rhs, || format!("fails on {f} then {g}: {lhs} vs {rhs}"))?;
    }
    Ok("500 pairs over Z[t]".into())
}

fn dimensions() -> Outcome {
    // Open diagrams n -> n are the perfect matchings of 2n points: (2n-1)!!.
    let expected = [1usize, 3, 15, 105, 945];
    let mut counts = Vec::new();
    for n in 0..=5 {
        let enumerated = BrauerDiagram::enumerate_open(n, n).len();
        let points: Vec<usize> = (0..2 * n).collect();
        let oracle = all_matchings(&points).len();
        ensure(enumerated == oracle, || format!("n = {n}: enumerated {enumerated}, matchings {oracle}"))?;
        ensure(algebra_dimension(n) == BigUint::from(oracle), || format!("n = {n}: dimension formula"))?;
        counts.push(enumerated);
    }
    ensure(counts[0] == 1 && counts[1..] == expected, || format!("counts {counts:?}"))?;
    Ok(format!("n = 0..5: {counts:?}"))
}

fn remove_two(c: &[String], i: usize, j: usize) -> Vec<String> {
    c.iter().enumerate().filter(|(k, _)| k + 1 != i && k + 1 != j).map(|(_, x)| x.clone()).collect()
}

fn contraction_coherence() -> Outcome {
    let pal = Palette::monochrome("a");
    let gens = vec![FreeGenerator { name: "g".into(), word: words(&["a", "a", "a"]) }];
    let alg = FreeCircuitAlgebra::new(pal.clone(), gens, 6).map_err(e)?;
    let c = vec!["a".to_string(); 6];
    let carrier = alg.carrier(&c).map_err(e)?;
    let pairs = contractible_pairs(&pal, &c);
    let mut quadruples = 0;
    let mut instances = 0;
    for &(i, j) in &pairs {
        for &(k, m) in &pairs {
            if [i, j].contains(&k) || [i, j].contains(&m) {
                continue;
            }
            quadruples += 1;
            let cij = remove_two(&c, i, j);
            let ckm = remove_two(&c, k, m);
            let (k2, m2) = (shift_after_removal(k, i, j), shift_after_removal(m, i, j));
            let (i2, j2) = (shift_after_removal(i, k, m), shift_after_removal(j, k, m));
            let first_km = operad_gamma(
                &contraction_wd(&pal, &ckm, i2, j2).map_err(e)?,
                &[contraction_wd(&pal, &c, k, m).map_err(e)?],
            )
            .map_err(e)?;
            let first_ij = operad_gamma(
                &contraction_wd(&pal, &cij, k2, m2).map_err(e)?,
                &[contraction_wd(&pal, &c, i, j).map_err(e)?],
            )
            .map_err(e)?;
            ensure(first_km == first_ij, || format!("wiring diagrams differ at ({i},{j}), ({k},{m})"))?;
            for x in &carrier {
                let lhs = derived_contraction(&alg, &c, k, m, x).and_then(|y| derived_contraction(&alg, &ckm, i2, j2, &y));
                let rhs = derived_contraction(&alg, &c, i, j, x).and_then(|y| derived_contraction(&alg, &cij, k2, m2, &y));
                ensure(lhs.is_ok() && lhs == rhs, || format!("contractions differ at ({i},{j}), ({k},{m}) on {x:?}"))?;
                instances += 1;
            }
        }
    }
    Ok(format!("{quadruples} index quadruples, {} elements, {instances} instances", carrier.len()))
}

fn circuit_algebra_axioms() -> Outcome {
    let pal = Palette::monochrome("a");
    let cfg = CheckConfig { max_points: 3, max_blocks: 2, exhaustive_limit: usize::MAX, ..Default::default() };
    let mut checked = 0;
    for (arities, max_blocks) in [([2, 1], 1), ([1, 1], 2)] {
        let gens = arities
            .iter()
            .enumerate()
            .map(|(i, &k)| FreeGenerator { name: format!("g{i}"), word: vec!["a".to_string(); k] })
            .collect();
        let mut alg = FreeCircuitAlgebra::new(pal.clone(), gens, 4).map_err(e)?;
        alg.max_blocks = max_blocks;
        let r = check_circuit_algebra(&alg, &cfg).map_err(e)?;
        ensure(r.exhaustive && r.passed(), || format!("free algebra on arities {arities:?}: {r}"))?;
        checked += r.checked;
    }

    let cfg = CheckConfig { max_points: 4, ..cfg };
    let matching = MatchingAlgebra::new(pal.clone(), 4);
    let pool = enumerate_wiring(&pal, 4, 2, 0, 4).map_err(e)?;
    let table = tabulate(&matching, &pool).map_err(e)?;
    let clean = check_circuit_algebra(&table, &cfg).map_err(e)?;
    ensure(clean.passed(), || format!("tabulated algebra before corruption: {clean}"))?;
    let (wd, inputs, output) = table
        .listed()
        .filter(|wd| wd.blocks().len() == 2)
        .find_map(|wd| {
            let out = table.carrier(&wd.output_type()).ok()?;
            let (inputs, current) = table.table(wd)?.iter().next()?;
            let other = out.iter().find(|y| *y != current)?;
            Some((wd.clone(), inputs.clone(), other.clone()))
        })
        .ok_or("no corruptible entry")?;
    let mut broken = table.clone();
    broken.set_entry(&wd, inputs, output).map_err(e)?;
    let bad = check_circuit_algebra(&broken, &cfg).map_err(e)?;
    let witness = bad.violations.first().ok_or_else(|| format!("corruption at {wd} not detected"))?;
    Ok(format!(
        "free algebras: {checked} instances, no violations; corruption detected by {} at {}",
        witness.law, witness.instance
    ))
}

fn graph_identities() -> Outcome {
    let w = Graph::wheel(1).map_err(e)?;
    let glued = Graph::corolla_n(2).glue("1", "2").map_err(e)?;
    ensure(x_iso(&XGraph::identity(glued), &XGraph::identity(w)).is_some(), || "C_2 glued is not W".into())?;
    ensure(Graph::stick().glue("1", "2").map_err(e)? == Graph::stick(), || "glued stick is not the stick".into())?;
    for k in 0..=3 {
        let c2 = Graph::corolla_named(&["a", "b"], "new").map_err(e)?;
        let g = Graph::line(k).disjoint_union(&c2).map_err(e)?.glue("2", "a").map_err(e)?;
        let rho = [("1", "1"), ("b", "2")].iter().map(|(p, x)| (p.to_string(), x.to_string())).collect();
        let lhs = XGraph::new(g, rho).map_err(e)?;
        ensure(x_iso(&lhs, &XGraph::identity(Graph::line(k + 1))).is_some(), || format!("line induction fails at k = {k}"))?;
    }
    Ok("C_2 glued ≅ W, stick glued = stick, line induction k <= 3".into())
}

fn colimit_bookkeeping() -> Outcome {
    let mut rng = rng_from_seed(10);
    for case in 0..100 {
        let nv = rng.gen_range(1..=4);
        let ports = rng.gen_range(0..=3);
        let base = Graph::random(nv, 3, ports, &mut rng);
        let gog = random_gog(&base, 3, 3, &mut rng);
        let colim = gog.colimit().map_err(e)?;
        let inner: usize = gog
            .assignment()
            .iter()
            .map(|x| {
                let g = x.graph();
                (0..g.num_edges()).filter(|&e| !g.is_port(e) && !g.is_port(g.tau(e))).count()
            })
            .sum();
        ensure(colim.graph.num_edges() == base.num_edges() + inner, || format!("case {case}: edge count"))?;
        let mut a = colim.graph.port_labels();
        let mut b = base.port_labels();
        a.sort();
        b.sort();
        ensure(a == b, || format!("case {case}: ports {a:?} vs {b:?}"))?;
        let problems = colim.check(&gog);
        ensure(problems.is_empty(), || format!("case {case}: {}", problems.join("; ")))?;
    }
    Ok("100 random substitutions".into())
}

fn monad_laws() -> Outcome {
    let mut rng = rng_from_seed(11);
    for case in 0..50 {
        let base = Graph::random(rng.gen_range(1..=3), 3, 2, &mut rng);
        let (outer, inners) = random_nesting(&base, 2, 3, &mut rng);
        ensure(check_substitution_associativity(&outer, &inners).map_err(e)?, || format!("nesting {case}"))?;
    }
    for case in 0..50 {
        let base = Graph::random(rng.gen_range(1..=3), 3, 2, &mut rng);
        let (g, w) = subdivide(&base, rng.gen_range(1..=3), &mut rng);
        let over = random_gog(&base, 2, 3, &mut rng);
        ensure(check_deleted_colimit(&g, &w, &over).map_err(e)?, || format!("deletion case {case}"))?;
    }
    Ok("50 nestings, 50 deletion cases".into())
}

fn similarity() -> Outcome {
    let id = |g: Graph| XGraph::identity(g);
    ensure(similar(&id(Graph::line(2)), &id(Graph::line(5))).map_err(e)?, || "line(2) ≁ line(5)".into())?;
    let w1 = id(Graph::wheel(1).map_err(e)?);
    let w4 = id(Graph::wheel(4).map_err(e)?);
    let z = id(Graph::isolated_vertex());
    ensure(similar(&w1, &w4).map_err(e)?, || "wheel(1) ≁ wheel(4)".into())?;
    ensure(similar(&w4, &z).map_err(e)?, || "wheel(4) ≁ isolated vertex".into())?;
    let tau = [("1", "2"), ("2", "1")].iter().map(|(p, x)| (p.to_string(), x.to_string())).collect();
    let flipped = XGraph::new(Graph::stick(), tau).map_err(e)?;
    ensure(!similar(&flipped, &id(Graph::stick())).map_err(e)?, || "(|, τ) ~ (|, id)".into())?;
    Ok("line(2) ~ line(5), wheel(1) ~ wheel(4) ~ isolated vertex, (|, τ) ≁ (|, id)".into())
}

fn segal() -> Outcome {
    let glued = Graph::corolla_n(3)
        .disjoint_union(&Graph::corolla_n(2).with_prefix("b"))
        .map_err(e)?
        .glue("3", "b1")
        .map_err(e)?;
    let graphs: Vec<NamedGraph> = [
        ("stick", Graph::stick()),
        ("c0", Graph::corolla_n(0)),
        ("c1", Graph::corolla_n(1)),
        ("c2", Graph::corolla_n(2)),
        ("c3", Graph::corolla_n(3)),
        ("w1", Graph::wheel(1).map_err(e)?),
        ("w2", Graph::wheel(2).map_err(e)?),
        ("glued", glued),
    ]
    .into_iter()
    .map(|(id, graph)| NamedGraph { id: id.into(), graph })
    .collect();
    let s = GraphicalSpecies::terminal(Palette::monochrome("a"), 5);
    let table = free_nerve_table(&s, &graphs, 2, 6).map_err(e)?;
    let r = segal_check(&table).map_err(e)?;
    ensure(r.passed(), || format!("free nerve fails:\n{r}"))?;
    let mut broken = table.clone();
    let value = broken.values["glued"][0].clone();
    broken.drop_value("glued", &value);
    let bad = segal_check(&broken).map_err(e)?;
    ensure(bad.failing() == vec!["glued"], || format!("corruption reported at {:?}", bad.failing()))?;
    let sizes: Vec<String> = r.graphs.iter().map(|g| format!("{}={}", g.graph, g.size)).collect();
    Ok(format!("{}; corruption named glued", sizes.join(" ")))
}

fn walled_functoriality() -> Outcome {
    let pal = Palette::oriented();
    let mut rng = rng_from_seed(14);
    for case in 0..200 {
        let m = rng.gen_range(0..=4);
        let n = loop {
            let k = rng.gen_range(0..=4);
            if (m + k) % 2 == 0 {
                break k;
            }
        };
        let f = ColouredBrauerDiagram::random(&pal, m, n, 1, &mut rng).map_err(e)?;
        let caps = rng.gen_range(0..=1);
        let g = ColouredBrauerDiagram::random_with_input(&pal, &f.output_type(), caps, 1, &mut rng).map_err(e)?;
        let fg = f.then(&g).map_err(e)?;
        let (nf, ng, nfg) = (
            f.to_walled_normal_form().map_err(e)?,
            g.to_walled_normal_form().map_err(e)?,
            fg.to_walled_normal_form().map_err(e)?,
        );
        let core = nf.core.then(&ng.core).map_err(e)?;
        ensure(nfg.core == core, || format!("case {case}: core of the composite differs"))?;
        ensure(nfg.source_shuffle == nf.source_shuffle && nfg.target_shuffle == ng.target_shuffle, || {
            format!("case {case}: shuffles differ")
        })?;
        ensure(is_walled(&nfg.core.forget().with_closed(BigUint::from(0u32)), nfg.wall).map_err(e)?, || format!("case {case}: core is not walled"))?;
        let (c, d) = fg.typed_boundary();
        let sort_c = ColouredBrauerDiagram::from_permutation(&pal, &nfg.source_shuffle, &c).map_err(e)?;
        let sorted_d = nfg.target_shuffle.permute(&d);
        let unsort_d =
            ColouredBrauerDiagram::from_permutation(&pal, &nfg.target_shuffle.inverse(), &sorted_d).map_err(e)?;
        let rebuilt = sort_c.then(&nfg.core).map_err(e)?.then(&unsort_d).map_err(e)?;
        ensure(rebuilt == fg, || format!("case {case}: shuffles and core do not rebuild the diagram"))?;
    }
    Ok("200 composable oriented pairs".into())
}

fn main() {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("triangle identities", triangle_identities),
        ("trace identities", trace_identities),
        ("category laws", category_laws),
        ("dual contravariance", dual_contravariance),
        ("enrichment isomorphism", enrichment),
        ("Brauer algebra dimensions", dimensions),
        ("contraction coherence", contraction_coherence),
        ("circuit-algebra axioms", circuit_algebra_axioms),
        ("graph identities", graph_identities),
        ("colimit bookkeeping", colimit_bookkeeping),
        ("monad laws", monad_laws),
        ("similarity", similarity),
        ("Segal condition", segal),
        ("walled functoriality", walled_functoriality),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
