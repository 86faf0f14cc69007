//! Property tests for the structural invariants of every module. Each case
//! draws a seed and builds its random objects from it, so failures shrink to
//! a reproducible seed.

use brauerkit::brauer::{parse_word, BrauerDiagram};
use brauerkit::brauer_algebra::{bd_to_br_t, br_compose, BrElement, Ring};
use brauerkit::coloured::{ColouredBrauerDiagram, Palette};
use brauerkit::graph::{x_iso, Graph, GraphMorphism, XGraph};
use brauerkit::pairing::{compose_pairings, Pairing};
use brauerkit::perm::Permutation;
use brauerkit::species::{evaluate, evaluate_as_limit, pullback, GraphicalSpecies};
use brauerkit::substitution::{
    check_deleted_colimit, check_substitution_associativity, delete_vertices, identity_gog, random_gog,
    random_nesting, subdivide, terminal_representative,
};
use brauerkit::util::{rng_from_seed, SeededRng};
use brauerkit::wiring::{operad_gamma, WiringDiagram};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::Rng;
use std::collections::BTreeSet;

fn arity_with_parity(rng: &mut SeededRng, max: usize, parity: usize) -> usize {
    loop {
        let k = rng.gen_range(0..=max);
        if (k + parity).is_multiple_of(2) {
            return k;
        }
    }
}

/// Three composable random diagrams `m -> n -> p -> q`.
fn chain(seed: u64, max: usize) -> (BrauerDiagram, BrauerDiagram, BrauerDiagram) {
    let mut rng = rng_from_seed(seed);
    let m = rng.gen_range(0..=max);
    let n = arity_with_parity(&mut rng, max, m);
    let p = arity_with_parity(&mut rng, max, n);
    let q = arity_with_parity(&mut rng, max, p);
    (
        BrauerDiagram::random(m, n, 2, &mut rng).unwrap(),
        BrauerDiagram::random(n, p, 2, &mut rng).unwrap(),
        BrauerDiagram::random(p, q, 2, &mut rng).unwrap(),
    )
}

fn any_diagram(seed: u64, max: usize) -> BrauerDiagram {
    let mut rng = rng_from_seed(seed);
    let m = rng.gen_range(0..=max);
    let n = arity_with_parity(&mut rng, max, m);
    BrauerDiagram::random(m, n, 2, &mut rng).unwrap()
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A random perfect matching on the given labels.
fn matching(labels: &[String], rng: &mut SeededRng) -> Vec<(String, String)> {
    let mut xs = labels.to_vec();
    for i in (1..xs.len()).rev() {
        xs.swap(i, rng.gen_range(0..=i));
    }
    xs.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn composition_is_associative_and_unital(seed in any::<u64>()) {
        let (f, g, h) = chain(seed, 8);
        let a = f.then(&g).unwrap().then(&h).unwrap();
        let b = f.then(&g.then(&h).unwrap()).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(BrauerDiagram::identity(f.m()).then(&f).unwrap(), f.clone());
        prop_assert_eq!(f.then(&BrauerDiagram::identity(f.n())).unwrap(), f);
    }

    #[test]
    fn tensor_is_a_bifunctor(seed in any::<u64>()) {
        let (f, g, _) = chain(seed, 4);
        let (h, k, _) = chain(seed.wrapping_add(1), 4);
        let lhs = f.tensor(&h).then(&g.tensor(&k)).unwrap();
        let rhs = f.then(&g).unwrap().tensor(&h.then(&k).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dual_is_an_involutive_contravariant_functor(seed in any::<u64>()) {
        let (f, g, _) = chain(seed, 8);
        prop_assert_eq!(f.dual().dual(), f.clone());
        prop_assert_eq!(f.then(&g).unwrap().dual(), g.dual().then(&f.dual()).unwrap());
        prop_assert_eq!(f.ev().m(), f.m() + f.n());
        prop_assert_eq!(f.coev().n(), f.m() + f.n());
    }

    #[test]
    fn factorization_evaluates_back(seed in any::<u64>()) {
        let f = any_diagram(seed, 7);
        let word = f.factor_generators().unwrap();
        prop_assert_eq!(word.evaluate().unwrap(), f.clone());
        prop_assert_eq!(parse_word(&word.to_string()).unwrap(), f);
    }

    #[test]
    fn diagram_json_round_trips(seed in any::<u64>()) {
        let f = any_diagram(seed, 8);
        let json = serde_json::to_string(&f).unwrap();
        let back: BrauerDiagram = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn components_are_points_over_two_plus_bubbles(seed in any::<u64>()) {
        let f = any_diagram(seed, 8);
        let expected = BigUint::from((f.m() + f.n()) / 2) + f.closed();
        prop_assert_eq!(f.num_components(), expected);
    }

    #[test]
    fn enrichment_is_functorial(seed in any::<u64>()) {
        let (f, g, _) = chain(seed, 6);
        let t = Ring::IntPoly.t().unwrap();
        prop_assert_eq!(bd_to_br_t(&f.then(&g).unwrap()), br_compose(&bd_to_br_t(&f), &bd_to_br_t(&g), &t).unwrap());
    }

    #[test]
    fn linear_composition_is_bilinear(seed in any::<u64>(), ring in prop::sample::select(vec!["Z", "Q", "Z[t]", "Z/5"])) {
        let ring = Ring::parse(ring).unwrap();
        let mut rng = rng_from_seed(seed);
        let (f1, g, _) = chain(seed, 4);
        let (f1, g) = (f1.with_closed(BigUint::from(0u8)), g.with_closed(BigUint::from(0u8)));
        let f2 = BrauerDiagram::random_open(f1.m(), f1.n(), &mut rng).unwrap();
        let (a, b) = (ring.random(&mut rng), ring.random(&mut rng));
        let delta = ring.random(&mut rng);
        let x = BrElement::term(&ring, &f1, a).unwrap().add(&BrElement::term(&ring, &f2, b).unwrap()).unwrap();
        let y = BrElement::basis(&ring, &g).unwrap();
        let whole = br_compose(&x, &y, &delta).unwrap();
        let parts = x
            .terms()
            .iter()
            .map(|(d, c)| br_compose(&BrElement::term(&ring, d, c.clone()).unwrap(), &y, &delta).unwrap())
            .fold(BrElement::zero(&ring, x.m(), y.n()), |acc, z| acc.add(&z).unwrap());
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn pairing_composition_is_associative(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let (a, b, c) = (rng.gen_range(0..3) * 2, rng.gen_range(0..3) * 2, rng.gen_range(0..3) * 2);
        let (x, y, z, w) = (labels("x", a), labels("y", b), labels("z", c), labels("w", 2));
        let p = Pairing::from_pairs(matching(&[x.clone(), y.clone()].concat(), &mut rng)).unwrap();
        let q = Pairing::from_pairs(matching(&[y.clone(), z.clone()].concat(), &mut rng)).unwrap();
        let r = Pairing::from_pairs(matching(&[z.clone(), w.clone()].concat(), &mut rng)).unwrap();
        let (ys, zs): (BTreeSet<String>, BTreeSet<String>) = (y.into_iter().collect(), z.into_iter().collect());
        let (pq, k1) = compose_pairings(&p, &q, &ys).unwrap();
        let (pq_r, k2) = compose_pairings(&pq, &r, &zs).unwrap();
        let (qr, k3) = compose_pairings(&q, &r, &zs).unwrap();
        let (p_qr, k4) = compose_pairings(&p, &qr, &ys).unwrap();
        prop_assert_eq!(pq_r, p_qr);
        prop_assert_eq!(k1 + k2, k3 + k4);
    }

    #[test]
    fn coloured_composition_forgets_to_monochrome(seed in any::<u64>()) {
        let pal = Palette::from_pairs(&[("a", "b"), ("c", "c")]).unwrap();
        let mut rng = rng_from_seed(seed);
        let m = rng.gen_range(0..=4);
        let n = arity_with_parity(&mut rng, 4, m);
        let f = ColouredBrauerDiagram::random(&pal, m, n, 1, &mut rng).unwrap();
        let g = ColouredBrauerDiagram::random_with_input(&pal, &f.output_type(), 1, 1, &mut rng).unwrap();
        let fg = f.then(&g).unwrap();
        prop_assert_eq!(fg.forget(), f.forget().then(&g.forget()).unwrap());
        prop_assert_eq!(fg.input_type(), f.input_type());
        prop_assert_eq!(fg.output_type(), g.output_type());
        prop_assert_eq!(f.dual().dual(), f);
    }

    #[test]
    fn walled_form_rebuilds_the_diagram(seed in any::<u64>()) {
        let pal = Palette::oriented();
        let mut rng = rng_from_seed(seed);
        let m = rng.gen_range(0..=5);
        let n = arity_with_parity(&mut rng, 5, m);
        let f = ColouredBrauerDiagram::random(&pal, m, n, 1, &mut rng).unwrap();
        let nf = f.to_walled_normal_form().unwrap();
        let (c, d) = f.typed_boundary();
        let sort_c = ColouredBrauerDiagram::from_permutation(&pal, &nf.source_shuffle, &c).unwrap();
        let unsort_d = ColouredBrauerDiagram::from_permutation(&pal, &nf.target_shuffle.inverse(), &nf.target_shuffle.permute(&d)).unwrap();
        prop_assert_eq!(sort_c.then(&nf.core).unwrap().then(&unsort_d).unwrap(), f);
    }

    #[test]
    fn sigma_action_on_wiring_diagrams_is_an_action(seed in any::<u64>()) {
        let pal = Palette::monochrome("a");
        let mut rng = rng_from_seed(seed);
        let k = rng.gen_range(1..=4);
        let words: Vec<Vec<String>> = (0..k).map(|_| vec!["a".to_string(); rng.gen_range(0..=2)]).collect();
        let input: Vec<String> = words.concat();
        let d = ColouredBrauerDiagram::random_with_input(&pal, &input, 1, 0, &mut rng).unwrap();
        let wd = WiringDiagram::new(d, words.iter().map(Vec::len).collect()).unwrap();
        let (s, t) = (Permutation::random(k, &mut rng), Permutation::random(k, &mut rng));
        let stepwise = wd.sigma_action(&s).unwrap().sigma_action(&t).unwrap();
        let at_once = wd.sigma_action(&s.then(&t)).unwrap();
        prop_assert_eq!(stepwise, at_once);
        let id = WiringDiagram::identity(&pal, &[wd.output_type()]).unwrap();
        prop_assert_eq!(operad_gamma(&id, std::slice::from_ref(&wd)).unwrap(), wd.clone());
        let ids: Vec<WiringDiagram> = wd.block_types().iter().map(|c| WiringDiagram::identity(&pal, std::slice::from_ref(c)).unwrap()).collect();
        prop_assert_eq!(operad_gamma(&wd, &ids).unwrap(), wd);
    }

    #[test]
    fn canonical_form_is_a_complete_invariant(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let g = Graph::random(rng.gen_range(1..=4), 4, rng.gen_range(0..=3), &mut rng);
        let renamed = g.with_prefix("r");
        prop_assert_eq!(g.canonical_form(), renamed.canonical_form());
        prop_assert!(g.is_isomorphic(&renamed));
        let f = g.iso(&renamed).unwrap();
        prop_assert!(f.is_iso());
        let back = f.inverse().unwrap();
        prop_assert_eq!(f.then(&back).unwrap(), GraphMorphism::identity(&g));
    }

    #[test]
    fn graph_json_round_trips(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let g = Graph::random(rng.gen_range(0..=4), 4, rng.gen_range(0..=3), &mut rng);
        let back: Graph = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn identity_substitution_recovers_the_graph(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let g = Graph::random(rng.gen_range(1..=4), 3, rng.gen_range(0..=3), &mut rng);
        let colim = identity_gog(&g).colimit().unwrap();
        prop_assert!(x_iso(&XGraph::identity(colim.graph), &XGraph::identity(g)).is_some());
    }

    #[test]
    fn colimit_bookkeeping_holds(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let base = Graph::random(rng.gen_range(1..=4), 3, rng.gen_range(0..=3), &mut rng);
        let gog = random_gog(&base, 3, 3, &mut rng);
        let colim = gog.colimit().unwrap();
        prop_assert_eq!(colim.check(&gog), Vec::<String>::new());
    }

    #[test]
    fn substitution_is_associative(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let base = Graph::random(rng.gen_range(1..=3), 3, 2, &mut rng);
        let (outer, inners) = random_nesting(&base, 2, 3, &mut rng);
        prop_assert!(check_substitution_associativity(&outer, &inners).unwrap());
    }

    #[test]
    fn deletion_commutes_with_substitution(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let base = Graph::random(rng.gen_range(1..=3), 3, 2, &mut rng);
        let (g, w) = subdivide(&base, rng.gen_range(1..=3), &mut rng);
        prop_assert!(x_iso(&XGraph::identity(delete_vertices(&g, &w).unwrap().target), &XGraph::identity(base.clone())).is_some());
        let over = random_gog(&base, 2, 3, &mut rng);
        prop_assert!(check_deleted_colimit(&g, &w, &over).unwrap());
    }

    #[test]
    fn terminal_representative_is_idempotent(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let g = Graph::random(rng.gen_range(1..=4), 4, rng.gen_range(0..=3), &mut rng);
        for c in g.connected_components() {
            let t = terminal_representative(&XGraph::identity(c)).unwrap();
            let again = terminal_representative(&XGraph::identity(t.graph().clone())).unwrap();
            prop_assert!(t.graph().is_isomorphic(again.graph()));
            prop_assert!((0..t.graph().num_vertices()).all(|v| !matches!(t.graph().valency(v), 0 | 2)));
        }
    }

    #[test]
    fn species_evaluation_is_a_limit(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let s = GraphicalSpecies::sign(Palette::oriented(), 3);
        let g = Graph::random(rng.gen_range(1..=3), 3, rng.gen_range(0..=2), &mut rng);
        let mut a = evaluate(&s, &g).unwrap();
        let mut b = evaluate_as_limit(&s, &g).unwrap();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn pullback_along_isomorphisms_is_functorial(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let s = GraphicalSpecies::torsor(Palette::monochrome("a"), 3);
        let g = Graph::random(rng.gen_range(1..=3), 3, rng.gen_range(0..=2), &mut rng);
        let h = g.with_prefix("h");
        let f = g.iso(&h).unwrap();
        let structures = evaluate(&s, &h).unwrap();
        for alpha in structures.iter().take(5) {
            let pulled = pullback(&s, alpha, &f).unwrap();
            let round = pullback(&s, &pulled, &f.inverse().unwrap()).unwrap();
            prop_assert_eq!(&round, alpha);
        }
    }

    #[test]
    fn palette_json_round_trips(n in 1usize..4) {
        let pairs: Vec<(String, String)> = (0..n).map(|i| (format!("c{i}"), format!("d{i}"))).collect();
        let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let pal = Palette::from_pairs(&refs).unwrap();
        let back: Palette = serde_json::from_str(&serde_json::to_string(&pal).unwrap()).unwrap();
        prop_assert_eq!(back, pal);
    }
}

#[test]
fn permutation_helpers_agree() {
    let mut rng = rng_from_seed(1);
    for _ in 0..200 {
        let n = rng.gen_range(0..7);
        let s = Permutation::random(n, &mut rng);
        let mut word = Permutation::identity(n);
        for k in s.adjacent_transpositions() {
            word = word.then(&Permutation::transposition(n, k, k + 1));
        }
        assert_eq!(word, s);
        let keys: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let sorted = Permutation::stable_sort(&keys).permute(&keys);
        assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
    }
}
