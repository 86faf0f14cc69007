//! Graphical species, circuit operads, free circuit operads and the Segal check.
//!
//! A graphical species assigns a finite set `S_c` to every colour word `c` of
//! length at most the arity bound, together with an action of the symmetric
//! groups: relabelling by `σ` moves port `i` to `σ(i)` and sends `S_c` to
//! `S_{σc}`. Only one word per orbit is stored: the sorted word, with the
//! action of its stabiliser given by one index permutation per adjacent
//! transposition of equal colours. An element of `S_c` is the element of the
//! sorted word relabelled by the inverse of the stable sort of `c`.
//!
//! ```
//! use brauerkit::coloured::Palette;
//! use brauerkit::graph::Graph;
//! use brauerkit::species::{evaluate, GraphicalSpecies};
//!
//! let s = GraphicalSpecies::terminal(Palette::monochrome("a"), 3);
//! assert_eq!(evaluate(&s, &Graph::wheel(2).unwrap()).unwrap().len(), 1);
//! ```

use crate::coloured::{multisets, ColouredBrauerDiagram, Palette};
use crate::error::{Error, Result};
use crate::graph::{automorphisms, x_iso, Graph, GraphMorphism, XGraph};
use crate::perm::Permutation;
use crate::substitution::GraphOfGraphs;
use crate::wiring::{
    contractible_pairs, derived_boxtimes, derived_contraction, parse_word_key, product, unit_empty, unit_epsilon, word_key,
    CircuitAlgebra, Violation, WiringDiagram,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// An element of `S_c`: the word `c` and an index into the table of the
/// sorted word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Elem {
    pub word: Vec<String>,
    pub index: usize,
}

impl Elem {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

fn sorted(w: &[String]) -> Vec<String> {
    let mut v = w.to_vec();
    v.sort();
    v
}

/// A finite, arity-bounded coloured graphical species.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphicalSpecies {
    palette: Palette,
    bound: usize,
    /// Sorted word to the names of its elements. Missing words are empty.
    tables: BTreeMap<Vec<String>, Vec<String>>,
    /// Sorted word to the action of each adjacent transposition `(k, k+1)`
    /// fixing it. Missing generators act trivially.
    sigma: BTreeMap<Vec<String>, BTreeMap<usize, Vec<usize>>>,
}

impl GraphicalSpecies {
    /// Validates the tables and checks the Coxeter relations of every
    /// stabiliser action.
    pub fn new(
        palette: Palette,
        bound: usize,
        tables: BTreeMap<Vec<String>, Vec<String>>,
        sigma: BTreeMap<Vec<String>, BTreeMap<usize, Vec<usize>>>,
    ) -> Result<Self> {
        for (w, names) in &tables {
            if w.len() > bound {
                return Err(Error::ArityBoundExceeded(format!("word {} is longer than {bound}", word_key(w))));
            }
            if *w != sorted(w) {
                return Err(Error::InvalidSpecies(format!("table key {} is not sorted", word_key(w))));
            }
            if let Some(c) = w.iter().find(|c| !palette.contains(c)) {
                return Err(Error::InvalidColouring(format!("colour {c} is not in the palette")));
            }
            let unique: BTreeSet<&String> = names.iter().collect();
            if unique.len() != names.len() {
                return Err(Error::DuplicateLabel(format!("an element name repeats at {}", word_key(w))));
            }
        }
        for (w, gens) in &sigma {
            let n = tables.get(w).map_or(0, Vec::len);
            for (&k, img) in gens {
                if k + 1 >= w.len() || w[k] != w[k + 1] {
                    return Err(Error::InvalidSpecies(format!("generator {k} does not fix {}", word_key(w))));
                }
                if img.len() != n || Permutation::new(img.clone()).is_err() {
                    return Err(Error::InvalidSpecies(format!("generator {k} at {} is not a bijection", word_key(w))));
                }
            }
        }
        let s = GraphicalSpecies { palette, bound, tables, sigma };
        s.check_relations()?;
        Ok(s)
    }

    /// One element on every word up to the bound, with trivial actions.
    pub fn terminal(palette: Palette, bound: usize) -> Self {
        let colours = sorted(palette.colours());
        let tables = (0..=bound)
            .flat_map(|n| multisets(&colours, n))
            .map(|w| (w, vec!["*".to_string()]))
            .collect();
        GraphicalSpecies { palette, bound, tables, sigma: BTreeMap::new() }
    }

    /// `S_c = {+, -}` on every word, each adjacent transposition of equal
    /// colours swapping the two.
    pub fn sign(palette: Palette, bound: usize) -> Self {
        let colours = sorted(palette.colours());
        let mut tables = BTreeMap::new();
        let mut sigma = BTreeMap::new();
        for w in (0..=bound).flat_map(|n| multisets(&colours, n)) {
            let gens = (0..w.len().saturating_sub(1)).filter(|&k| w[k] == w[k + 1]).map(|k| (k, vec![1, 0])).collect();
            tables.insert(w.clone(), vec!["+".to_string(), "-".to_string()]);
            sigma.insert(w, gens);
        }
        GraphicalSpecies { palette, bound, tables, sigma }
    }

    /// `S_c` is the stabiliser of `c`, acted on freely: a permutation `p`
    /// relabelled by `σ` becomes `p` followed by `σ`.
    pub fn torsor(palette: Palette, bound: usize) -> Self {
        let colours = sorted(palette.colours());
        let mut tables = BTreeMap::new();
        let mut sigma = BTreeMap::new();
        for w in (0..=bound).flat_map(|n| multisets(&colours, n)) {
            let stab: Vec<Permutation> = Permutation::all(w.len()).into_iter().filter(|p| p.permute(&w) == w).collect();
            let index: BTreeMap<&Permutation, usize> = stab.iter().zip(0..).collect();
            let gens = (0..w.len().saturating_sub(1))
                .filter(|&k| w[k] == w[k + 1])
                .map(|k| {
                    let t = Permutation::transposition(w.len(), k, k + 1);
                    (k, stab.iter().map(|p| index[&p.then(&t)]).collect())
                })
                .collect();
            let names = stab.iter().map(|p| p.images().iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join("")).collect();
            tables.insert(w.clone(), names);
            sigma.insert(w, gens);
        }
        GraphicalSpecies { palette, bound, tables, sigma }
    }

    pub fn palette(&self) -> &Palette {
        &self.palette
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// The stored tables, keyed by sorted word.
    pub fn tables(&self) -> &BTreeMap<Vec<String>, Vec<String>> {
        &self.tables
    }

    /// The stored stabiliser generators, keyed by sorted word.
    pub fn sigma(&self) -> &BTreeMap<Vec<String>, BTreeMap<usize, Vec<usize>>> {
        &self.sigma
    }

    fn gen_apply(&self, rep: &[String], k: usize, i: usize) -> usize {
        self.sigma.get(rep).and_then(|g| g.get(&k)).map_or(i, |img| img[i])
    }

    fn check_relations(&self) -> Result<()> {
        for (w, names) in &self.tables {
            let ks: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&k| w[k] == w[k + 1]).collect();
            let g = |k: usize, i: usize| self.gen_apply(w, k, i);
            for i in 0..names.len() {
                for &k in &ks {
                    if g(k, g(k, i)) != i {
                        return Err(Error::InvalidSpecies(format!("generator {k} at {} is not an involution", word_key(w))));
                    }
                    for &l in ks.iter().filter(|&&l| l > k) {
                        let ok = if l == k + 1 {
                            g(k, g(l, g(k, i))) == g(l, g(k, g(l, i)))
                        } else {
                            g(k, g(l, i)) == g(l, g(k, i))
                        };
                        if !ok {
                            return Err(Error::InvalidSpecies(format!(
                                "generators {k} and {l} at {} violate the Coxeter relations",
                                word_key(w)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_word(&self, w: &[String]) -> Result<()> {
        if w.len() > self.bound {
            return Err(Error::ArityBoundExceeded(format!("word {} is longer than {}", word_key(w), self.bound)));
        }
        if let Some(c) = w.iter().find(|c| !self.palette.contains(c)) {
            return Err(Error::InvalidColouring(format!("colour {c} is not in the palette")));
        }
        Ok(())
    }

    /// The element names of the orbit of `w`.
    pub fn table(&self, w: &[String]) -> &[String] {
        self.tables.get(&sorted(w)).map_or(&[], Vec::as_slice)
    }

    /// Every element of `S_w`.
    pub fn elements(&self, w: &[String]) -> Result<Vec<Elem>> {
        self.check_word(w)?;
        Ok((0..self.table(w).len()).map(|index| Elem { word: w.to_vec(), index }).collect())
    }

    /// Every element of every sorted word.
    pub fn rep_elements(&self) -> Vec<Elem> {
        self.tables
            .iter()
            .flat_map(|(w, names)| (0..names.len()).map(move |index| Elem { word: w.clone(), index }))
            .collect()
    }

    pub fn name(&self, e: &Elem) -> &str {
        &self.table(&e.word)[e.index]
    }

    /// Looks an element up by word and name.
    pub fn elem(&self, w: &[String], name: &str) -> Result<Elem> {
        self.check_word(w)?;
        let index = self
            .table(w)
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownLabel(format!("{name} at {}", word_key(w))))?;
        Ok(Elem { word: w.to_vec(), index })
    }

    /// A printable key `word:name`.
    pub fn key(&self, e: &Elem) -> String {
        format!("{}:{}", word_key(&e.word), self.name(e))
    }

    /// Acts by a stabiliser element of a sorted word.
    fn stab_act(&self, rep: &[String], s: &Permutation, mut i: usize) -> usize {
        for k in s.adjacent_transpositions() {
            debug_assert_eq!(rep[k], rep[k + 1]);
            i = self.gen_apply(rep, k, i);
        }
        i
    }

    /// `σ · e`: port `i` of `e` becomes port `σ(i)`.
    pub fn relabel(&self, e: &Elem, sigma: &Permutation) -> Result<Elem> {
        if sigma.len() != e.word.len() {
            return Err(Error::ArityMismatch(format!("permutation of {} points on a word of length {}", sigma.len(), e.word.len())));
        }
        let w2 = sigma.permute(&e.word);
        let beta = Permutation::stable_sort(&e.word);
        let s = beta.inverse().then(sigma).then(&Permutation::stable_sort(&w2));
        let index = self.stab_act(&sorted(&e.word), &s, e.index);
        Ok(Elem { word: w2, index })
    }
}

#[derive(Serialize, Deserialize)]
struct SpeciesWire {
    palette: Palette,
    bound: usize,
    tables: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    sigma: BTreeMap<String, BTreeMap<usize, Vec<usize>>>,
}

impl Serialize for GraphicalSpecies {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpeciesWire {
            palette: self.palette.clone(),
            bound: self.bound,
            tables: self.tables.iter().map(|(w, n)| (word_key(w), n.clone())).collect(),
            sigma: self.sigma.iter().map(|(w, g)| (word_key(w), g.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GraphicalSpecies {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = SpeciesWire::deserialize(d)?;
        GraphicalSpecies::new(
            w.palette,
            w.bound,
            w.tables.into_iter().map(|(k, v)| (parse_word_key(&k), v)).collect(),
            w.sigma.into_iter().map(|(k, v)| (parse_word_key(&k), v)).collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// An `S`-structure on a graph: a colour per edge with `c(τe) = ω c(e)`, and
/// per vertex an element whose word lists the colours of `τe` for `e ∈ E_v`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Structure {
    pub colours: Vec<String>,
    pub vertices: Vec<Elem>,
}

impl Structure {
    /// A printable key.
    pub fn key(&self, s: &GraphicalSpecies) -> String {
        let vs: Vec<String> = self.vertices.iter().map(|e| s.key(e)).collect();
        format!("{}|{}", self.colours.join(","), vs.join(";"))
    }
}

/// The colour word at `v` under an edge colouring.
pub fn vertex_word(g: &Graph, colours: &[String], v: usize) -> Vec<String> {
    g.incident_edges(v).iter().map(|&e| colours[g.tau(e)].clone()).collect()
}

fn check_valencies(s: &GraphicalSpecies, g: &Graph) -> Result<()> {
    if let Some(v) = (0..g.num_vertices()).find(|&v| g.valency(v) > s.bound()) {
        return Err(Error::ArityBoundExceeded(format!(
            "vertex {} has valency {} above {}",
            g.vertex_label(v),
            g.valency(v),
            s.bound()
        )));
    }
    Ok(())
}

/// `S(G)`: colour every τ-orbit, then choose an element at every vertex.
pub fn evaluate(s: &GraphicalSpecies, g: &Graph) -> Result<Vec<Structure>> {
    check_valencies(s, g)?;
    let pal = s.palette();
    let orbits = g.orbits();
    let choices: Vec<Vec<String>> = orbits.iter().map(|_| pal.colours().to_vec()).collect();
    let mut out = Vec::new();
    for pick in product(&choices) {
        let mut colours = vec![String::new(); g.num_edges()];
        for (&(a, b), c) in orbits.iter().zip(&pick) {
            colours[a] = c.clone();
            colours[b] = pal.omega(c).to_string();
        }
        let per_vertex = (0..g.num_vertices())
            .map(|v| s.elements(&vertex_word(g, &colours, v)))
            .collect::<Result<Vec<_>>>()?;
        for vertices in product(&per_vertex) {
            out.push(Structure { colours: colours.clone(), vertices });
        }
    }
    out.sort();
    Ok(out)
}

/// `S(G)` as the limit over the elements of `G`: a free choice of element
/// per corolla, kept when the sticks agree.
pub fn evaluate_as_limit(s: &GraphicalSpecies, g: &Graph) -> Result<Vec<Structure>> {
    check_valencies(s, g)?;
    let pal = s.palette();
    let els = g.elements();
    let per_corolla = els
        .corollas
        .iter()
        .map(|ev| {
            let mut all = Vec::new();
            for w in pal.words(ev.len()) {
                all.extend(s.elements(&w)?);
            }
            Ok(all)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for vertices in product(&per_corolla) {
        let mut stick: Vec<Option<String>> = vec![None; els.sticks.len()];
        let mut ok = true;
        for m in &els.morphisms {
            // The stick's edge 1 goes to τ s(h) when flipped, else to s(h).
            let port = vertices[m.corolla].word[m.position].clone();
            let c = if m.flipped { port } else { pal.omega(&port).to_string() };
            match &stick[m.stick] {
                Some(d) if *d != c => {
                    ok = false;
                    break;
                }
                _ => stick[m.stick] = Some(c),
            }
        }
        if !ok {
            continue;
        }
        let free: Vec<Vec<String>> = stick
            .iter()
            .map(|c| c.as_ref().map_or_else(|| pal.colours().to_vec(), |c| vec![c.clone()]))
            .collect();
        for pick in product(&free) {
            let mut colours = vec![String::new(); g.num_edges()];
            for (&(a, b), c) in els.sticks.iter().zip(&pick) {
                colours[a] = c.clone();
                colours[b] = pal.omega(c).to_string();
            }
            out.push(Structure { colours, vertices: vertices.clone() });
        }
    }
    out.sort();
    Ok(out)
}

/// `f^* α` along an étale morphism `f : G -> H`.
pub fn pullback(s: &GraphicalSpecies, alpha: &Structure, f: &GraphMorphism) -> Result<Structure> {
    if !f.is_etale() {
        return Err(Error::NotAMorphism("structures pull back along étale morphisms only".into()));
    }
    let (g, h) = (f.source(), f.target());
    let colours = f.edge_map().iter().map(|&e| alpha.colours[e].clone()).collect();
    let vertices = (0..g.num_vertices())
        .map(|w| {
            let fw = f.vertex_map()[w];
            let target_halves = h.halves_at(fw);
            let mut images = vec![0; target_halves.len()];
            for (i, &x) in g.halves_at(w).iter().enumerate() {
                let j = target_halves.iter().position(|&y| y == f.half_map()[x]).expect("étale");
                images[j] = i;
            }
            s.relabel(&alpha.vertices[fw], &Permutation::new(images)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Structure { colours, vertices })
}

/// The least structure in the orbit of `alpha` under the group generated by
/// the given automorphisms, together with the whole orbit.
pub fn orbit_min(s: &GraphicalSpecies, alpha: &Structure, generators: &[GraphMorphism]) -> Result<(Structure, BTreeSet<Structure>)> {
    let mut seen = BTreeSet::from([alpha.clone()]);
    let mut queue = VecDeque::from([alpha.clone()]);
    while let Some(x) = queue.pop_front() {
        for a in generators {
            let y = pullback(s, &x, a)?;
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok((seen.iter().next().expect("nonempty").clone(), seen))
}

/// Violations found by a law check.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, law: &str, ok: Result<bool>, instance: impl FnOnce() -> String) {
        self.checked += 1;
        match ok {
            Ok(true) => {}
            Ok(false) => self.violations.push(Violation { law: law.into(), instance: instance() }),
            Err(e) => self.violations.push(Violation { law: law.into(), instance: format!("{}: {e}", instance()) }),
        }
    }

    fn merge(&mut self, other: LawReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "passed: {} instances", self.checked)
        } else {
            writeln!(f, "failed: {} of {} instances", self.violations.len(), self.checked)?;
            for v in self.violations.iter().take(10) {
                writeln!(f, "  {}: {}", v.law, v.instance)?;
            }
            Ok(())
        }
    }
}

/// Checks a choice of `ε_c ∈ S_(c, ωc)` for every colour: `ε_{ωc}` is `ε_c`
/// with its ports swapped.
pub fn validate_pointed(s: &GraphicalSpecies, epsilon: &BTreeMap<String, Elem>) -> LawReport {
    let mut r = LawReport::default();
    let pal = s.palette();
    for c in pal.colours() {
        let want = vec![c.clone(), pal.omega(c).to_string()];
        let Some(e) = epsilon.get(c) else {
            r.record("pointed", Ok(false), || format!("no ε for colour {c}"));
            continue;
        };
        r.record("pointed", Ok(e.word == want && e.index < s.table(&want).len()), || format!("ε_{c} has word {}", word_key(&e.word)));
        let Some(d) = epsilon.get(pal.omega(c)) else { continue };
        let swapped = s.relabel(e, &Permutation::transposition(2, 0, 1));
        r.record("pointed", swapped.map(|x| x == *d), || format!("ε_{} is not ε_{c} swapped", pal.omega(c)));
    }
    r
}

/// A species with `⊠`, contractions `ζ`, units `ε_c` and the empty unit `⊖`,
/// tabulated on sorted words and extended equivariantly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitOperad {
    species: GraphicalSpecies,
    boxtimes: BTreeMap<(Elem, Elem), Elem>,
    /// Keyed by a sorted-word element and 0-based positions `x < y`.
    contraction: BTreeMap<(Elem, usize, usize), Elem>,
    epsilon: BTreeMap<String, Elem>,
    unit: Option<Elem>,
}

/// An element carrying a label per port, so that laws can be compared after
/// sorting ports by label.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Labelled {
    elem: Elem,
    labels: Vec<usize>,
}

fn compress(p: usize, i: usize, j: usize) -> usize {
    p - usize::from(p > i) - usize::from(p > j)
}

fn remove_two(w: &[String], x: usize, y: usize) -> Vec<String> {
    w.iter().enumerate().filter(|(k, _)| *k != x && *k != y).map(|(_, c)| c.clone()).collect()
}

impl CircuitOperad {
    pub fn new(
        species: GraphicalSpecies,
        boxtimes: BTreeMap<(Elem, Elem), Elem>,
        contraction: BTreeMap<(Elem, usize, usize), Elem>,
        epsilon: BTreeMap<String, Elem>,
        unit: Option<Elem>,
    ) -> Result<Self> {
        let valid = |e: &Elem| e.word.len() <= species.bound() && e.index < species.table(&e.word).len();
        let keys_sorted = |e: &Elem| e.word == sorted(&e.word);
        for ((a, b), r) in &boxtimes {
            if !valid(a) || !valid(b) || !valid(r) || !keys_sorted(a) || !keys_sorted(b) {
                return Err(Error::InvalidTable(format!("⊠ entry ({a:?}, {b:?}) names unknown elements")));
            }
        }
        for ((a, x, y), r) in &contraction {
            if !valid(a) || !valid(r) || !keys_sorted(a) || !(x < y && *y < a.word.len()) {
                return Err(Error::InvalidTable(format!("ζ entry ({a:?}, {x}, {y}) is malformed")));
            }
        }
        if epsilon.values().chain(unit.iter()).any(|e| !valid(e)) {
            return Err(Error::InvalidTable("a unit names an unknown element".into()));
        }
        Ok(CircuitOperad { species, boxtimes, contraction, epsilon, unit })
    }

    pub fn species(&self) -> &GraphicalSpecies {
        &self.species
    }

    pub fn epsilon_table(&self) -> &BTreeMap<String, Elem> {
        &self.epsilon
    }

    /// Overwrites one `⊠` entry on sorted-word elements.
    pub fn set_boxtimes(&mut self, a: Elem, b: Elem, r: Elem) {
        self.boxtimes.insert((a, b), r);
    }

    /// Overwrites one `ζ` entry.
    pub fn set_contraction(&mut self, a: Elem, x: usize, y: usize, r: Elem) {
        self.contraction.insert((a, x.min(y), x.max(y)), r);
    }

    /// Overwrites `ε_c`.
    pub fn set_epsilon(&mut self, c: &str, e: Elem) {
        self.epsilon.insert(c.to_string(), e);
    }

    fn split(&self, e: &Elem) -> (Elem, Permutation) {
        (Elem { word: sorted(&e.word), index: e.index }, Permutation::stable_sort(&e.word))
    }

    /// `a ⊠ b ∈ S_{cd}`.
    pub fn boxtimes(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        if a.len() + b.len() > self.species.bound() {
            return Err(Error::ArityBoundExceeded(format!("{} + {} exceeds {}", a.len(), b.len(), self.species.bound())));
        }
        let (ra, pa) = self.split(a);
        let (rb, pb) = self.split(b);
        let r = self
            .boxtimes
            .get(&(ra.clone(), rb.clone()))
            .ok_or_else(|| Error::MissingAction(format!("⊠ of {} and {}", self.species.key(&ra), self.species.key(&rb))))?;
        self.species.relabel(r, &pa.inverse().direct_sum(&pb.inverse()))
    }

    /// `ζ^{x‡y}(a)` for 0-based positions with `c_x = ω c_y`.
    pub fn contract(&self, a: &Elem, x: usize, y: usize) -> Result<Elem> {
        let n = a.len();
        if x == y || x >= n || y >= n {
            return Err(Error::IndexError(format!("cannot contract {x} with {y} in a word of length {n}")));
        }
        if self.species.palette().omega(&a.word[x]) != a.word[y] {
            return Err(Error::ColourMismatch(format!("positions {x} and {y} carry {} and {}", a.word[x], a.word[y])));
        }
        let (ra, pi) = self.split(a);
        let (x1, y1) = (pi.apply(x), pi.apply(y));
        let (lo, hi) = (x1.min(y1), x1.max(y1));
        let r = self
            .contraction
            .get(&(ra.clone(), lo, hi))
            .ok_or_else(|| Error::MissingAction(format!("ζ^{lo}‡{hi} of {}", self.species.key(&ra))))?;
        let inv = pi.inverse();
        let mut images = vec![0; n - 2];
        for p in (0..n).filter(|&p| p != lo && p != hi) {
            images[compress(p, lo, hi)] = compress(inv.apply(p), x.min(y), x.max(y));
        }
        self.species.relabel(r, &Permutation::new(images)?)
    }

    /// `ε_c ∈ S_(c, ωc)`.
    pub fn epsilon(&self, c: &str) -> Result<Elem> {
        self.epsilon.get(c).cloned().ok_or_else(|| Error::MissingAction(format!("ε for colour {c}")))
    }

    /// `⊖ ∈ S_∅`.
    pub fn unit(&self) -> Result<Elem> {
        self.unit.clone().ok_or_else(|| Error::MissingAction("⊖".into()))
    }

    /// `a ◇^{x‡y} b = ζ^{x‡|a|+y}(a ⊠ b)`.
    pub fn diamond(&self, a: &Elem, b: &Elem, x: usize, y: usize) -> Result<Elem> {
        let ab = self.boxtimes(a, b)?;
        self.contract(&ab, x, a.len() + y)
    }

    fn lab(&self, e: &Elem, first: usize) -> Labelled {
        Labelled { elem: e.clone(), labels: (first..first + e.len()).collect() }
    }

    fn lbox(&self, a: &Labelled, b: &Labelled) -> Result<Labelled> {
        Ok(Labelled { elem: self.boxtimes(&a.elem, &b.elem)?, labels: [a.labels.clone(), b.labels.clone()].concat() })
    }

    fn lcontract(&self, a: &Labelled, l1: usize, l2: usize) -> Result<Labelled> {
        let pos = |l: usize| {
            a.labels.iter().position(|&m| m == l).ok_or_else(|| Error::IndexError(format!("no port labelled {l}")))
        };
        let (x, y) = (pos(l1)?, pos(l2)?);
        Ok(Labelled {
            elem: self.contract(&a.elem, x, y)?,
            labels: a.labels.iter().copied().filter(|&m| m != l1 && m != l2).collect(),
        })
    }

    fn lmove(&self, a: &Labelled, sigma: &Permutation) -> Result<Labelled> {
        Ok(Labelled { elem: self.species.relabel(&a.elem, sigma)?, labels: sigma.permute(&a.labels) })
    }

    fn lnorm(&self, a: &Labelled) -> Result<Labelled> {
        self.lmove(a, &Permutation::stable_sort(&a.labels))
    }

    fn same(&self, a: Result<Labelled>, b: Result<Labelled>) -> Result<bool> {
        Ok(self.lnorm(&a?)? == self.lnorm(&b?)?)
    }

    fn reps(&self) -> Vec<Elem> {
        self.species.rep_elements()
    }

    fn pairs(&self, w: &[String]) -> Vec<(usize, usize)> {
        contractible_pairs(self.species.palette(), w).into_iter().map(|(i, j)| (i - 1, j - 1)).collect()
    }

    /// Checks typing, pointedness, equivariance, `(C1)`–`(C3)`, the unit law
    /// for `ε` and `⊖` as a unit of `⊠`.
    pub fn validate(&self) -> LawReport {
        let s = &self.species;
        let n = s.bound();
        let reps = self.reps();
        let mut r = LawReport::default();
        // Typing and totality.
        for a in &reps {
            for b in reps.iter().filter(|b| a.len() + b.len() <= n) {
                let got = self.boxtimes.get(&(a.clone(), b.clone()));
                let want = [a.word.clone(), b.word.clone()].concat();
                r.record("typing", Ok(got.is_some_and(|x| x.word == want)), || {
                    format!("⊠ of {} and {}", s.key(a), s.key(b))
                });
            }
            for (x, y) in self.pairs(&a.word) {
                let got = self.contraction.get(&(a.clone(), x, y));
                let want = remove_two(&a.word, x, y);
                r.record("typing", Ok(got.is_some_and(|e| e.word == want)), || format!("ζ^{x}‡{y} of {}", s.key(a)));
            }
        }
        r.record("typing", Ok(self.unit.as_ref().is_some_and(|u| u.word.is_empty())), || "⊖ must lie in S_∅".into());
        if n >= 2 {
            r.merge(validate_pointed(s, &self.epsilon));
        }
        if !r.passed() {
            return r;
        }
        // Equivariance under the stabiliser generators.
        for a in &reps {
            let ks: Vec<usize> = (0..a.len().saturating_sub(1)).filter(|&k| a.word[k] == a.word[k + 1]).collect();
            for &k in &ks {
                let t = Permutation::transposition(a.len(), k, k + 1);
                let la = self.lab(a, 0);
                for b in reps.iter().filter(|b| a.len() + b.len() <= n) {
                    let lb = self.lab(b, a.len());
                    let tb = self.lab(b, 0);
                    r.record(
                        "equivariance",
                        self.same(self.lmove(&la, &t).and_then(|x| self.lbox(&x, &lb)), self.lbox(&la, &lb)),
                        || format!("⊠ of {} and {} under ({k} {})", s.key(a), s.key(b), k + 1),
                    );
                    let la2 = self.lab(a, b.len());
                    r.record(
                        "equivariance",
                        self.same(self.lmove(&la2, &t).and_then(|x| self.lbox(&tb, &x)), self.lbox(&tb, &la2)),
                        || format!("⊠ of {} and {} under ({k} {})", s.key(b), s.key(a), k + 1),
                    );
                }
                for (x, y) in self.pairs(&a.word) {
                    r.record(
                        "equivariance",
                        self.same(self.lmove(&la, &t).and_then(|m| self.lcontract(&m, x, y)), self.lcontract(&la, x, y)),
                        || format!("ζ^{x}‡{y} of {} under ({k} {})", s.key(a), k + 1),
                    );
                }
            }
        }
        // (C1): ⊠ is associative.
        for a in &reps {
            for b in reps.iter().filter(|b| a.len() + b.len() <= n) {
                for c in reps.iter().filter(|c| a.len() + b.len() + c.len() <= n) {
                    let left = self.boxtimes(a, b).and_then(|ab| self.boxtimes(&ab, c));
                    let right = self.boxtimes(b, c).and_then(|bc| self.boxtimes(a, &bc));
                    r.record("C1", left.and_then(|l| Ok(l == right?)), || {
                        format!("({} ⊠ {}) ⊠ {}", s.key(a), s.key(b), s.key(c))
                    });
                }
            }
        }
        // (C2): disjoint contractions commute.
        for a in &reps {
            let la = self.lab(a, 0);
            let pairs = self.pairs(&a.word);
            for (i, &(w, x)) in pairs.iter().enumerate() {
                for &(y, z) in &pairs[i + 1..] {
                    if [y, z].iter().any(|p| *p == w || *p == x) {
                        continue;
                    }
                    let one = self.lcontract(&la, w, x).and_then(|m| self.lcontract(&m, y, z));
                    let two = self.lcontract(&la, y, z).and_then(|m| self.lcontract(&m, w, x));
                    r.record("C2", self.same(one, two), || format!("ζ^{w}‡{x} and ζ^{y}‡{z} on {}", s.key(a)));
                }
            }
        }
        // (C3): contraction commutes with ⊠.
        for a in &reps {
            let la = self.lab(a, 0);
            for b in reps.iter().filter(|b| a.len() + b.len() <= n) {
                let lb = self.lab(b, a.len());
                for (x, y) in self.pairs(&a.word) {
                    let one = self.lcontract(&la, x, y).and_then(|m| self.lbox(&m, &lb));
                    let two = self.lbox(&la, &lb).and_then(|m| self.lcontract(&m, x, y));
                    r.record("C3", self.same(one, two), || format!("ζ^{x}‡{y}({}) ⊠ {}", s.key(a), s.key(b)));
                }
            }
        }
        // Unit law: ζ^{x‡2}(a ⊠ ε_{c_x}) is a with port x moved to the end.
        for a in reps.iter().filter(|a| a.len() + 2 <= n) {
            let m = a.len();
            let la = self.lab(a, 0);
            for x in 0..m {
                let ok = self.epsilon(&a.word[x]).and_then(|e| {
                    let glued = self.lcontract(&self.lbox(&la, &self.lab(&e, m))?, x, m + 1)?;
                    let renamed = Labelled {
                        elem: glued.elem,
                        labels: glued.labels.iter().map(|&l| if l == m { x } else { l }).collect(),
                    };
                    Ok(self.lnorm(&renamed)? == la)
                });
                r.record("unit", ok, || format!("ε glued at port {x} of {}", s.key(a)));
            }
        }
        // ⊖ is a two-sided unit for ⊠.
        if let Ok(u) = self.unit() {
            for a in &reps {
                r.record("empty unit", self.boxtimes(a, &u).map(|x| x == *a), || format!("{} ⊠ ⊖", s.key(a)));
                r.record("empty unit", self.boxtimes(&u, a).map(|x| x == *a), || format!("⊖ ⊠ {}", s.key(a)));
            }
        }
        r
    }

    /// Checks the modular operad laws `(M1)`–`(M4)` of the derived `◇`.
    pub fn check_modular(&self) -> LawReport {
        let s = &self.species;
        let n = s.bound();
        let pal = s.palette();
        let reps = self.reps();
        let dual = |c: &str, d: &str| pal.omega(c) == d;
        let mut r = LawReport::default();
        for a in &reps {
            let la = self.lab(a, 0);
            let na = a.len();
            // (M2): two contractions on one element commute; covered pairwise.
            let pairs = self.pairs(&a.word);
            for (i, &(w, x)) in pairs.iter().enumerate() {
                for &(y, z) in &pairs[i + 1..] {
                    if [y, z].iter().any(|p| *p == w || *p == x) {
                        continue;
                    }
                    let one = self.lcontract(&la, w, x).and_then(|m| self.lcontract(&m, y, z));
                    let two = self.lcontract(&la, y, z).and_then(|m| self.lcontract(&m, w, x));
                    r.record("M2", self.same(one, two), || format!("{} at {w}‡{x}, {y}‡{z}", s.key(a)));
                }
            }
            for b in reps.iter().filter(|b| na + b.len() <= n) {
                let lb = self.lab(b, na);
                let ab = self.lbox(&la, &lb);
                let nb = b.len();
                for x in 0..na {
                    for y in (0..nb).filter(|&y| dual(&a.word[x], &b.word[y])) {
                        let d = ab.clone().and_then(|m| self.lcontract(&m, x, na + y));
                        // (M3): a contraction inside `a` commutes with ◇.
                        for (x1, x2) in self.pairs(&a.word).into_iter().filter(|&(p, q)| p != x && q != x) {
                            let one = self
                                .lcontract(&la, x1, x2)
                                .and_then(|m| self.lbox(&m, &lb))
                                .and_then(|m| self.lcontract(&m, x, na + y));
                            r.record("M3", self.same(one, d.clone().and_then(|m| self.lcontract(&m, x1, x2))), || {
                                format!("{} ◇ {} at {x}‡{y} with {x1}‡{x2}", s.key(a), s.key(b))
                            });
                        }
                        // (M4): two ◇-contractions between the same pair commute.
                        for x2 in (0..na).filter(|&p| p != x) {
                            for y2 in (0..nb).filter(|&q| q != y && dual(&a.word[x2], &b.word[q])) {
                                let one = d.clone().and_then(|m| self.lcontract(&m, x2, na + y2));
                                let two = ab
                                    .clone()
                                    .and_then(|m| self.lcontract(&m, x2, na + y2))
                                    .and_then(|m| self.lcontract(&m, x, na + y));
                                r.record("M4", self.same(one, two), || {
                                    format!("{} ◇ {} at {x}‡{y} and {x2}‡{y2}", s.key(a), s.key(b))
                                });
                            }
                        }
                        // (M1): ◇ is associative.
                        for c in reps.iter().filter(|c| na + nb + c.len() <= n) {
                            let lc = self.lab(c, na + nb);
                            for y2 in (0..nb).filter(|&q| q != y) {
                                for z in (0..c.len()).filter(|&z| dual(&b.word[y2], &c.word[z])) {
                                    let one = d
                                        .clone()
                                        .and_then(|m| self.lbox(&m, &lc))
                                        .and_then(|m| self.lcontract(&m, na + y2, na + nb + z));
                                    let two = self
                                        .lbox(&lb, &lc)
                                        .and_then(|m| self.lcontract(&m, na + y2, na + nb + z))
                                        .and_then(|m| self.lbox(&la, &m))
                                        .and_then(|m| self.lcontract(&m, x, na + y));
                                    r.record("M1", self.same(one, two), || {
                                        format!("({} ◇ {}) ◇ {} at {x}‡{y}, {y2}‡{z}", s.key(a), s.key(b), s.key(c))
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        r
    }

    /// Tabulates the circuit operad underlying a circuit algebra. Every
    /// derived operation must land in the carrier.
    pub fn from_circuit_algebra<A: CircuitAlgebra>(alg: &A) -> Result<Self> {
        let pal = alg.palette().clone();
        let n = alg.bound();
        let colours = sorted(pal.colours());
        let reps: Vec<Vec<String>> = (0..=n).flat_map(|k| multisets(&colours, k)).collect();
        let mut carriers: BTreeMap<Vec<String>, Vec<A::Elem>> = BTreeMap::new();
        let mut index: BTreeMap<Vec<String>, BTreeMap<A::Elem, usize>> = BTreeMap::new();
        for w in &reps {
            let c = alg.carrier(w)?;
            index.insert(w.clone(), c.iter().cloned().zip(0..).collect());
            carriers.insert(w.clone(), c);
        }
        let to_elem = |x: &A::Elem, w: &[String]| -> Result<Elem> {
            let pi = Permutation::stable_sort(w);
            let wd = WiringDiagram::new(ColouredBrauerDiagram::from_permutation(&pal, &pi, w)?, vec![w.len()])?;
            let y = alg.act(&wd, std::slice::from_ref(x))?;
            let rep = sorted(w);
            let i = index[&rep]
                .get(&y)
                .copied()
                .ok_or_else(|| Error::InvalidTable(format!("{y:?} is outside the carrier at {}", word_key(&rep))))?;
            Ok(Elem { word: w.to_vec(), index: i })
        };
        let mut tables = BTreeMap::new();
        let mut sigma = BTreeMap::new();
        for w in &reps {
            let c = &carriers[w];
            tables.insert(w.clone(), (0..c.len()).map(|i| format!("x{i}")).collect());
            let mut gens = BTreeMap::new();
            for k in (0..w.len().saturating_sub(1)).filter(|&k| w[k] == w[k + 1]) {
                let t = Permutation::transposition(w.len(), k, k + 1);
                let wd = WiringDiagram::new(ColouredBrauerDiagram::from_permutation(&pal, &t, w)?, vec![w.len()])?;
                let img = c
                    .iter()
                    .map(|x| {
                        let y = alg.act(&wd, std::slice::from_ref(x))?;
                        index[w].get(&y).copied().ok_or_else(|| Error::InvalidTable(format!("{y:?} is outside the carrier")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                gens.insert(k, img);
            }
            sigma.insert(w.clone(), gens);
        }
        let species = GraphicalSpecies::new(pal.clone(), n, tables, sigma)?;
        let mut boxtimes = BTreeMap::new();
        let mut contraction = BTreeMap::new();
        for wa in &reps {
            for wb in reps.iter().filter(|wb| wa.len() + wb.len() <= n) {
                let wab = [wa.clone(), wb.clone()].concat();
                for (i, xa) in carriers[wa].iter().enumerate() {
                    for (j, xb) in carriers[wb].iter().enumerate() {
                        let r = derived_boxtimes(alg, wa, wb, xa, xb)?;
                        boxtimes.insert(
                            (Elem { word: wa.clone(), index: i }, Elem { word: wb.clone(), index: j }),
                            to_elem(&r, &wab)?,
                        );
                    }
                }
            }
            for (i, j) in contractible_pairs(&pal, wa) {
                let rest = remove_two(wa, i - 1, j - 1);
                for (k, x) in carriers[wa].iter().enumerate() {
                    let r = derived_contraction(alg, wa, i, j, x)?;
                    contraction.insert((Elem { word: wa.clone(), index: k }, i - 1, j - 1), to_elem(&r, &rest)?);
                }
            }
        }
        let mut epsilon = BTreeMap::new();
        if n >= 2 {
            for c in &colours {
                let w = vec![c.clone(), pal.omega(c).to_string()];
                epsilon.insert(c.clone(), to_elem(&unit_epsilon(alg, c)?, &w)?);
            }
        }
        let unit = Some(to_elem(&unit_empty(alg)?, &[])?);
        CircuitOperad::new(species, boxtimes, contraction, epsilon, unit)
    }
}

#[derive(Serialize, Deserialize)]
struct ElemWire {
    word: String,
    name: String,
}

#[derive(Serialize, Deserialize)]
struct BoxWire {
    left: ElemWire,
    right: ElemWire,
    result: ElemWire,
}

#[derive(Serialize, Deserialize)]
struct ContractWire {
    elem: ElemWire,
    x: usize,
    y: usize,
    result: ElemWire,
}

#[derive(Serialize, Deserialize)]
struct OperadWire {
    species: GraphicalSpecies,
    boxtimes: Vec<BoxWire>,
    contraction: Vec<ContractWire>,
    epsilon: BTreeMap<String, ElemWire>,
    unit: Option<ElemWire>,
}

impl Serialize for CircuitOperad {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let sp = &self.species;
        let w = |e: &Elem| ElemWire { word: word_key(&e.word), name: sp.name(e).to_string() };
        OperadWire {
            species: sp.clone(),
            boxtimes: self.boxtimes.iter().map(|((a, b), r)| BoxWire { left: w(a), right: w(b), result: w(r) }).collect(),
            contraction: self
                .contraction
                .iter()
                .map(|((a, x, y), r)| ContractWire { elem: w(a), x: *x, y: *y, result: w(r) })
                .collect(),
            epsilon: self.epsilon.iter().map(|(c, e)| (c.clone(), w(e))).collect(),
            unit: self.unit.as_ref().map(w),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CircuitOperad {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = OperadWire::deserialize(d)?;
        let sp = w.species;
        let e = |x: &ElemWire| sp.elem(&parse_word_key(&x.word), &x.name);
        let build = || -> Result<CircuitOperad> {
            let boxtimes = w.boxtimes.iter().map(|b| Ok(((e(&b.left)?, e(&b.right)?), e(&b.result)?))).collect::<Result<_>>()?;
            let contraction = w
                .contraction
                .iter()
                .map(|c| Ok(((e(&c.elem)?, c.x.min(c.y), c.x.max(c.y)), e(&c.result)?)))
                .collect::<Result<_>>()?;
            let epsilon = w.epsilon.iter().map(|(c, x)| Ok((c.clone(), e(x)?))).collect::<Result<_>>()?;
            let unit = w.unit.as_ref().map(e).transpose()?;
            CircuitOperad::new(sp.clone(), boxtimes, contraction, epsilon, unit)
        };
        build().map_err(serde::de::Error::custom)
    }
}

/// Upper limit on the matchings examined by an enumeration.
pub const ENUMERATION_BUDGET: u128 = 400_000;

fn degree_sequences(nv: usize, max_degree: usize, out: &mut Vec<Vec<usize>>, acc: &mut Vec<usize>) {
    if acc.len() == nv {
        out.push(acc.clone());
        return;
    }
    let cap = acc.last().copied().unwrap_or(max_degree).min(max_degree);
    for d in (0..=cap).rev() {
        acc.push(d);
        degree_sequences(nv, max_degree, out, acc);
        acc.pop();
    }
}

fn matching_count(k: usize, h: usize) -> u128 {
    let falling: u128 = (0..k).map(|i| (h - i) as u128).product();
    let rest = h - k;
    let double: u128 = (1..rest).step_by(2).map(|i| i as u128).product();
    falling * double
}

/// Admissible `X`-graphs with at most `v_max` vertices and at most `e_max`
/// τ-orbits, one per isomorphism class.
pub fn enumerate_x_graphs(x: &[String], v_max: usize, e_max: usize) -> Result<Vec<XGraph>> {
    enumerate_x_graphs_bounded(x, v_max, e_max, usize::MAX)
}

/// As [`enumerate_x_graphs`], keeping vertex valencies at most `max_valency`.
///
/// Ports are `p0, p1, ...` with `ρ(p_i) = x_i`; other edges are `e0, ...`,
/// half-edges `h0, ...` and vertices `v0, ...`. Degree sequences are
/// enumerated first, then every matching of the half-edges.
pub fn enumerate_x_graphs_bounded(x: &[String], v_max: usize, e_max: usize, max_valency: usize) -> Result<Vec<XGraph>> {
    let unique: BTreeSet<&String> = x.iter().collect();
    if unique.len() != x.len() {
        return Err(Error::DuplicateLabel(format!("{x:?}")));
    }
    let k = x.len();
    if k > 2 * e_max {
        return Ok(Vec::new());
    }
    let max_h = 2 * e_max - k;
    let mut shapes = Vec::new();
    for nv in 0..=v_max {
        let mut seqs = Vec::new();
        degree_sequences(nv, max_valency.min(max_h), &mut seqs, &mut Vec::new());
        for d in seqs {
            let h: usize = d.iter().sum();
            if h >= k && h <= max_h && (h - k).is_multiple_of(2) {
                shapes.push(d);
            }
        }
    }
    let work: u128 = shapes.iter().map(|d| matching_count(k, d.iter().sum())).sum();
    if work > ENUMERATION_BUDGET {
        return Err(Error::BoundTooLarge(format!(
            "{work} matchings for |X| = {k}, v_max = {v_max}, e_max = {e_max} exceed {ENUMERATION_BUDGET}"
        )));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for d in shapes {
        let h: usize = d.iter().sum();
        let total = k + h;
        let mut edges: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
        edges.extend((0..h).map(|j| format!("e{j}")));
        let halves: Vec<String> = (0..h).map(|j| format!("h{j}")).collect();
        let s: Vec<usize> = (k..total).collect();
        let t: Vec<usize> = d.iter().enumerate().flat_map(|(v, &dv)| std::iter::repeat_n(v, dv)).collect();
        let vertices: Vec<String> = (0..d.len()).map(|v| format!("v{v}")).collect();
        let rho: BTreeMap<String, String> = (0..k).map(|i| (format!("p{i}"), x[i].clone())).collect();
        let mut partner = vec![usize::MAX; total];
        let mut emit = |partner: &[usize]| -> Result<()> {
            let g = Graph::from_indices(edges.clone(), partner.to_vec(), halves.clone(), s.clone(), t.clone(), vertices.clone())?;
            let xg = XGraph::new(g, rho.clone())?;
            if seen.insert(xg.canonical_labelling().certificate) {
                out.push(xg);
            }
            Ok(())
        };
        match_rec(k, total, &mut partner, &mut emit)?;
    }
    Ok(out)
}

fn match_rec(k: usize, total: usize, partner: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    let Some(u) = (0..total).find(|&i| partner[i] == usize::MAX) else {
        return emit(partner);
    };
    for f in (u + 1).max(k)..total {
        if partner[f] == usize::MAX {
            partner[u] = f;
            partner[f] = u;
            match_rec(k, total, partner, emit)?;
            partner[u] = usize::MAX;
            partner[f] = usize::MAX;
        }
    }
    Ok(())
}

/// A truncation of the free circuit operad on a species at one colour word:
/// isomorphism classes of admissible `X`-graphs with `X = {1, ..., n}`, each
/// with its `S`-structures up to automorphism. Port `i` has colour `c_i`.
#[derive(Debug, Clone)]
pub struct FreeComponent {
    pub word: Vec<String>,
    pub graphs: Vec<XGraph>,
    pub automorphisms: Vec<Vec<GraphMorphism>>,
    /// `(graph index, least structure of its orbit)`, sorted.
    pub elements: Vec<(usize, Structure)>,
}

/// Port labels `1, ..., n`.
pub fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

impl FreeComponent {
    /// Printable key of an element.
    pub fn key(&self, s: &GraphicalSpecies, graph: usize, alpha: &Structure) -> String {
        format!("{}|g{graph}|{}", word_key(&self.word), alpha.key(s))
    }

    pub fn keys(&self, s: &GraphicalSpecies) -> Vec<String> {
        self.elements.iter().map(|(g, a)| self.key(s, *g, a)).collect()
    }

    /// The element represented by a structure on the representative graph.
    pub fn canonical(&self, s: &GraphicalSpecies, graph: usize, alpha: &Structure) -> Result<(usize, Structure)> {
        let (min, _) = orbit_min(s, alpha, &self.automorphisms[graph])?;
        Ok((graph, min))
    }

    /// The element represented by a structure on any admissible `X`-graph.
    pub fn classify(&self, s: &GraphicalSpecies, x: &XGraph, alpha: &Structure) -> Result<(usize, Structure)> {
        for (i, rep) in self.graphs.iter().enumerate() {
            if let Some(f) = x_iso(x, rep) {
                return self.canonical(s, i, &pullback(s, alpha, &f.inverse()?)?);
            }
        }
        Err(Error::BoundTooLarge(format!("{x} is outside the enumerated component")))
    }

    fn port_colours_match(&self, x: &XGraph, alpha: &Structure) -> bool {
        self.word
            .iter()
            .enumerate()
            .all(|(i, c)| x.port_for(&(i + 1).to_string()).is_some_and(|p| alpha.colours[p] == *c))
    }
}

/// `T^×S_c` truncated to at most `v_max` vertices and `e_max` τ-orbits.
/// Graphs with vertices above the species bound carry no structure and are
/// left out.
pub fn free_component(s: &GraphicalSpecies, word: &[String], v_max: usize, e_max: usize) -> Result<FreeComponent> {
    let graphs = enumerate_x_graphs_bounded(&numbered(word.len()), v_max, e_max, s.bound())?;
    let mut comp = FreeComponent { word: word.to_vec(), graphs: Vec::new(), automorphisms: Vec::new(), elements: Vec::new() };
    for g in graphs {
        comp.automorphisms.push(automorphisms(&g));
        comp.graphs.push(g);
    }
    for i in 0..comp.graphs.len() {
        let mut seen = BTreeSet::new();
        for alpha in evaluate(s, comp.graphs[i].graph())? {
            if seen.contains(&alpha) || !comp.port_colours_match(&comp.graphs[i], &alpha) {
                continue;
            }
            let (min, orbit) = orbit_min(s, &alpha, &comp.automorphisms[i])?;
            seen.extend(orbit);
            comp.elements.push((i, min));
        }
    }
    comp.elements.sort();
    Ok(comp)
}

/// Contraction in the free circuit operad: glue ports `x < y` (0-based) of
/// the representative, renumber the remaining ports and classify the result
/// in `target`.
pub fn free_contract(
    s: &GraphicalSpecies,
    source: &FreeComponent,
    target: &FreeComponent,
    elem: &(usize, Structure),
    x: usize,
    y: usize,
) -> Result<(usize, Structure)> {
    let xg = &source.graphs[elem.0];
    let (gx, gy) = glue_ports(s, xg, &elem.1, x, y)?;
    target.classify(s, &gx, &gy)
}

/// Glues ports `x < y` (0-based positions in `1, ..., n`) of an `X`-graph
/// with a structure, renumbering the remaining ports.
pub fn glue_ports(s: &GraphicalSpecies, xg: &XGraph, alpha: &Structure, x: usize, y: usize) -> Result<(XGraph, Structure)> {
    let n = xg.boundary().len();
    if !(x < y && y < n) {
        return Err(Error::IndexError(format!("cannot glue {x} with {y} among {n} ports")));
    }
    let g = xg.graph();
    let a = xg.port_for(&(x + 1).to_string()).ok_or_else(|| Error::NotAPort((x + 1).to_string()))?;
    let b = xg.port_for(&(y + 1).to_string()).ok_or_else(|| Error::NotAPort((y + 1).to_string()))?;
    if s.palette().omega(&alpha.colours[a]) != alpha.colours[b] {
        return Err(Error::ColourMismatch(format!("ports {} and {} carry {} and {}", x + 1, y + 1, alpha.colours[a], alpha.colours[b])));
    }
    let glued = g.glue_indices(a, b)?;
    let colours = (0..g.num_edges()).filter(|&e| e != a && e != b).map(|e| alpha.colours[e].clone()).collect();
    let rho = xg
        .rho()
        .iter()
        .filter(|(p, _)| *p != g.edge_label(a) && *p != g.edge_label(b))
        .map(|(p, l)| {
            let i: usize = l.parse().map_err(|_| Error::InvalidParameter(format!("port label {l} is not a number")))?;
            Ok((p.clone(), (compress(i - 1, x, y) + 1).to_string()))
        })
        .collect::<Result<_>>()?;
    Ok((XGraph::new(glued, rho)?, Structure { colours, vertices: alpha.vertices.clone() }))
}

/// Where a restriction map of a presheaf on graphs points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Along {
    /// The essential morphism of the `j`-th τ-orbit `(a, b)`, sending the
    /// stick's edge `1` to `a`.
    Stick(usize),
    /// The essential morphism of a vertex, identifying its corolla with the
    /// target corolla position by position.
    Vertex(usize),
    /// The stick's involution.
    Tau,
}

/// One restriction map `P(G) -> P(target)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Restriction {
    pub graph: String,
    pub along: Along,
    pub target: String,
    pub map: BTreeMap<String, String>,
}

/// A graph with an identifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedGraph {
    pub id: String,
    pub graph: Graph,
}

/// A finite presheaf on a list of graphs, given by values and restriction
/// maps along essential morphisms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafTable {
    pub graphs: Vec<NamedGraph>,
    pub values: BTreeMap<String, Vec<String>>,
    pub restrictions: Vec<Restriction>,
}

impl PresheafTable {
    pub fn graph(&self, id: &str) -> Option<&Graph> {
        self.graphs.iter().find(|g| g.id == id).map(|g| &g.graph)
    }

    pub fn restriction(&self, graph: &str, along: &Along) -> Result<&Restriction> {
        self.restrictions
            .iter()
            .find(|r| r.graph == graph && r.along == *along)
            .ok_or_else(|| Error::MissingRestriction(format!("{graph} along {along:?}")))
    }

    /// Removes one value of a graph together with its restriction entries.
    pub fn drop_value(&mut self, graph: &str, value: &str) {
        if let Some(vs) = self.values.get_mut(graph) {
            vs.retain(|v| v != value);
        }
        for r in self.restrictions.iter_mut().filter(|r| r.graph == graph) {
            r.map.remove(value);
        }
    }
}

/// Outcome of the Segal check at one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegalGraphReport {
    pub graph: String,
    pub size: usize,
    pub limit: usize,
    /// Every value restricts to a compatible family.
    pub compatible: bool,
    pub injective: bool,
    pub surjective: bool,
}

impl SegalGraphReport {
    pub fn passed(&self) -> bool {
        self.compatible && self.injective && self.surjective
    }
}

/// Outcome of the Segal check on every graph of a table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegalReport {
    pub graphs: Vec<SegalGraphReport>,
}

impl SegalReport {
    pub fn passed(&self) -> bool {
        self.graphs.iter().all(SegalGraphReport::passed)
    }

    /// Identifiers of the graphs where the check fails.
    pub fn failing(&self) -> Vec<&str> {
        self.graphs.iter().filter(|g| !g.passed()).map(|g| g.graph.as_str()).collect()
    }
}

impl fmt::Display for SegalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.graphs {
            let verdict = if g.passed() {
                "ok".to_string()
            } else {
                let mut why = Vec::new();
                if !g.compatible {
                    why.push("incompatible restrictions");
                }
                if !g.injective {
                    why.push("not injective");
                }
                if !g.surjective {
                    why.push("not surjective");
                }
                format!("FAIL ({})", why.join(", "))
            };
            writeln!(f, "{}: {} values, limit {}: {verdict}", g.graph, g.size, g.limit)?;
        }
        Ok(())
    }
}

fn lookup<'a>(r: &'a Restriction, value: &str) -> Result<&'a String> {
    r.map
        .get(value)
        .ok_or_else(|| Error::MissingRestriction(format!("{} along {:?} at value {value}", r.graph, r.along)))
}

/// Checks that `P(G) -> lim_{el(G)} P` is a bijection for every graph of the
/// table. The limit is computed from the values at the target corollas and
/// sticks and their own restriction maps.
pub fn segal_check(table: &PresheafTable) -> Result<SegalReport> {
    let mut reports = Vec::new();
    for ng in &table.graphs {
        let g = &ng.graph;
        let id = &ng.id;
        let values = table
            .values
            .get(id)
            .ok_or_else(|| Error::InvalidTable(format!("no values for {id}")))?;
        let els = g.elements();
        let stick_res: Vec<&Restriction> =
            (0..els.sticks.len()).map(|j| table.restriction(id, &Along::Stick(j))).collect::<Result<_>>()?;
        let vertex_res: Vec<&Restriction> =
            (0..els.corollas.len()).map(|v| table.restriction(id, &Along::Vertex(v))).collect::<Result<_>>()?;
        // For every vertex, the restriction of its target corolla along each
        // position, normalised to send the stick's edge 1 to the port's partner.
        let tau_of = |stick: &str| table.restriction(stick, &Along::Tau);
        let mut position_maps: Vec<Vec<(&Restriction, bool)>> = Vec::new();
        for (v, r) in vertex_res.iter().enumerate() {
            let c = table
                .graph(&r.target)
                .ok_or_else(|| Error::InvalidTable(format!("unknown graph {}", r.target)))?;
            let cel = c.elements();
            if cel.corollas.len() != 1 || cel.corollas[0].len() != els.corollas[v].len() {
                return Err(Error::InvalidTable(format!("{} is not a corolla of valency {}", r.target, els.corollas[v].len())));
            }
            let mut maps = vec![None; els.corollas[v].len()];
            for m in &cel.morphisms {
                maps[m.position] = Some((table.restriction(&r.target, &Along::Stick(m.stick))?, m.flipped));
            }
            position_maps.push(maps.into_iter().map(|m| m.expect("one morphism per position")).collect());
        }
        let vertex_values: Vec<Vec<String>> = vertex_res
            .iter()
            .map(|r| table.values.get(&r.target).cloned().ok_or_else(|| Error::InvalidTable(format!("no values for {}", r.target))))
            .collect::<Result<_>>()?;
        let stick_values: Vec<Vec<String>> = stick_res
            .iter()
            .map(|r| table.values.get(&r.target).cloned().ok_or_else(|| Error::InvalidTable(format!("no values for {}", r.target))))
            .collect::<Result<_>>()?;
        // Value at the stick seen from a vertex position, as an element of the
        // stick with edge 1 at τ s(h).
        let seen_from = |v: usize, pos: usize, value: &str| -> Result<(String, String)> {
            let (r, flipped) = position_maps[v][pos];
            let x = lookup(r, value)?;
            let x = if flipped { x.clone() } else { lookup(tau_of(&r.target)?, x)?.clone() };
            Ok((r.target.clone(), x))
        };
        // The same for the orbit's own stick value.
        let orbit_side = |j: usize, flipped: bool, value: &str| -> Result<String> {
            if flipped {
                Ok(value.to_string())
            } else {
                Ok(lookup(tau_of(&stick_res[j].target)?, value)?.clone())
            }
        };
        let mut limit: BTreeSet<Vec<String>> = BTreeSet::new();
        for choice in product(&vertex_values) {
            let mut stick: Vec<Option<String>> = vec![None; els.sticks.len()];
            let mut ok = true;
            for m in &els.morphisms {
                let (_, seen) = seen_from(m.corolla, m.position, &choice[m.corolla])?;
                // Solve for the orbit value: apply τ again when not flipped.
                let value = if m.flipped {
                    seen
                } else {
                    lookup(tau_of(&stick_res[m.stick].target)?, &seen)?.clone()
                };
                match &stick[m.stick] {
                    Some(x) if *x != value => {
                        ok = false;
                        break;
                    }
                    _ => stick[m.stick] = Some(value),
                }
            }
            if !ok {
                continue;
            }
            let free: Vec<Vec<String>> = stick
                .iter()
                .zip(&stick_values)
                .map(|(x, all)| x.as_ref().map_or_else(|| all.clone(), |x| vec![x.clone()]))
                .collect();
            for pick in product(&free) {
                limit.insert([choice.clone(), pick].concat());
            }
        }
        let mut images = BTreeSet::new();
        let mut compatible = true;
        for value in values {
            let mut family = Vec::new();
            for r in &vertex_res {
                family.push(lookup(r, value)?.clone());
            }
            for r in &stick_res {
                family.push(lookup(r, value)?.clone());
            }
            for m in &els.morphisms {
                let (_, seen) = seen_from(m.corolla, m.position, &family[m.corolla])?;
                let own = orbit_side(m.stick, m.flipped, &family[els.corollas.len() + m.stick])?;
                if seen != own {
                    compatible = false;
                }
            }
            images.insert(family);
        }
        reports.push(SegalGraphReport {
            graph: id.clone(),
            size: values.len(),
            limit: limit.len(),
            compatible,
            injective: images.len() == values.len(),
            surjective: limit.is_subset(&images),
        });
    }
    Ok(SegalReport { graphs: reports })
}

enum Shape {
    Stick,
    Corolla,
    General,
}

fn shape(g: &Graph) -> Shape {
    if g.num_vertices() == 0 && g.num_edges() == 2 {
        return Shape::Stick;
    }
    if g.num_vertices() == 1 {
        let ev = g.incident_edges(0);
        if g.num_edges() == 2 * ev.len() && ev.iter().all(|&e| g.is_port(g.tau(e))) {
            return Shape::Corolla;
        }
    }
    Shape::General
}

/// Adds a stick and the corollas needed by the vertices of `graphs`, and
/// returns the identifiers of the stick and of the corolla of each valency.
fn complete_graph_list(graphs: &[NamedGraph]) -> (Vec<NamedGraph>, String, BTreeMap<usize, String>) {
    let mut list = graphs.to_vec();
    let mut stick = None;
    let mut corollas = BTreeMap::new();
    let mut needed = BTreeSet::new();
    for ng in graphs {
        match shape(&ng.graph) {
            Shape::Stick => {
                stick.get_or_insert_with(|| ng.id.clone());
            }
            Shape::Corolla => {
                corollas.entry(ng.graph.valency(0)).or_insert_with(|| ng.id.clone());
            }
            Shape::General => needed.extend((0..ng.graph.num_vertices()).map(|v| ng.graph.valency(v))),
        }
    }
    let stick = stick.unwrap_or_else(|| {
        list.push(NamedGraph { id: "stick".into(), graph: Graph::stick() });
        "stick".into()
    });
    for k in needed {
        corollas.entry(k).or_insert_with(|| {
            let id = format!("corolla{k}");
            list.push(NamedGraph { id: id.clone(), graph: Graph::corolla_n(k) });
            id
        });
    }
    (list, stick, corollas)
}

/// Values and restrictions shared by the stick and corolla shapes.
fn stick_and_corolla_entries(
    pal: &Palette,
    ng: &NamedGraph,
    stick: &str,
    values: &[(String, Vec<String>)],
    table: &mut PresheafTable,
) {
    let g = &ng.graph;
    match shape(g) {
        Shape::Stick => {
            table.restrictions.push(Restriction {
                graph: ng.id.clone(),
                along: Along::Stick(0),
                target: stick.into(),
                map: pal.colours().iter().map(|c| (c.clone(), c.clone())).collect(),
            });
            table.restrictions.push(Restriction {
                graph: ng.id.clone(),
                along: Along::Tau,
                target: ng.id.clone(),
                map: pal.colours().iter().map(|c| (c.clone(), pal.omega(c).to_string())).collect(),
            });
        }
        Shape::Corolla => {
            let ev = g.incident_edges(0);
            table.restrictions.push(Restriction {
                graph: ng.id.clone(),
                along: Along::Vertex(0),
                target: ng.id.clone(),
                map: values.iter().map(|(k, _)| (k.clone(), k.clone())).collect(),
            });
            for (j, &(a, b)) in g.orbits().iter().enumerate() {
                let inner = if ev.contains(&a) { a } else { b };
                let i = ev.iter().position(|&e| e == inner).expect("corolla");
                let map = values
                    .iter()
                    .map(|(k, w)| {
                        let c = if inner == a { pal.omega(&w[i]).to_string() } else { w[i].clone() };
                        (k.clone(), c)
                    })
                    .collect();
                table.restrictions.push(Restriction { graph: ng.id.clone(), along: Along::Stick(j), target: stick.into(), map });
            }
        }
        Shape::General => {}
    }
}

/// The presheaf `G ↦ S(G)` on a list of graphs. A stick and the corollas
/// needed as restriction targets are added when missing.
pub fn species_table(s: &GraphicalSpecies, graphs: &[NamedGraph]) -> Result<PresheafTable> {
    let pal = s.palette();
    let (list, stick, corollas) = complete_graph_list(graphs);
    let mut table = PresheafTable { graphs: list.clone(), ..Default::default() };
    for ng in &list {
        let g = &ng.graph;
        match shape(g) {
            Shape::Stick => {
                table.values.insert(ng.id.clone(), pal.colours().to_vec());
                stick_and_corolla_entries(pal, ng, &stick, &[], &mut table);
            }
            Shape::Corolla => {
                let mut values = Vec::new();
                for w in pal.words(g.valency(0)) {
                    for e in s.elements(&w)? {
                        values.push((s.key(&e), w.clone()));
                    }
                }
                table.values.insert(ng.id.clone(), values.iter().map(|(k, _)| k.clone()).collect());
                stick_and_corolla_entries(pal, ng, &stick, &values, &mut table);
            }
            Shape::General => {
                let structures = evaluate(s, g)?;
                let keys: Vec<String> = structures.iter().map(|a| a.key(s)).collect();
                table.values.insert(ng.id.clone(), keys.clone());
                for (j, &(a, _)) in g.orbits().iter().enumerate() {
                    let map = keys.iter().zip(&structures).map(|(k, x)| (k.clone(), x.colours[a].clone())).collect();
                    table.restrictions.push(Restriction { graph: ng.id.clone(), along: Along::Stick(j), target: stick.clone(), map });
                }
                for v in 0..g.num_vertices() {
                    let map = keys.iter().zip(&structures).map(|(k, x)| (k.clone(), s.key(&x.vertices[v]))).collect();
                    let target = corollas[&g.valency(v)].clone();
                    table.restrictions.push(Restriction { graph: ng.id.clone(), along: Along::Vertex(v), target, map });
                }
            }
        }
    }
    Ok(table)
}

/// Caches free components and their graphs by port count and word.
struct FreeCache<'a> {
    species: &'a GraphicalSpecies,
    v_max: usize,
    e_max: usize,
    components: BTreeMap<Vec<String>, FreeComponent>,
}

impl FreeCache<'_> {
    fn component(&mut self, word: &[String]) -> Result<&FreeComponent> {
        if !self.components.contains_key(word) {
            let c = free_component(self.species, word, self.v_max, self.e_max)?;
            self.components.insert(word.to_vec(), c);
        }
        Ok(&self.components[word])
    }

    /// Graphs and automorphisms for `n` ports, independent of colours.
    fn graphs(&mut self, n: usize) -> Result<(Vec<XGraph>, Vec<Vec<GraphMorphism>>)> {
        let word = vec![self.species.palette().colours()[0].clone(); n];
        let c = self.component(&word)?;
        Ok((c.graphs.clone(), c.automorphisms.clone()))
    }
}

/// The automorphism of a colimit induced by an automorphism of the graph
/// substituted at one vertex.
fn induced_automorphism(colim: &Graph, b: &GraphMorphism, phi: &GraphMorphism) -> Result<GraphMorphism> {
    let mut edges: Vec<usize> = (0..colim.num_edges()).collect();
    let mut halves: Vec<usize> = (0..colim.num_half_edges()).collect();
    let mut vertices: Vec<usize> = (0..colim.num_vertices()).collect();
    for (e, &fe) in phi.edge_map().iter().enumerate() {
        edges[b.edge_map()[e]] = b.edge_map()[fe];
    }
    for (h, &fh) in phi.half_map().iter().enumerate() {
        halves[b.half_map()[h]] = b.half_map()[fh];
    }
    for (v, &fv) in phi.vertex_map().iter().enumerate() {
        vertices[b.vertex_map()[v]] = b.vertex_map()[fv];
    }
    GraphMorphism::new(colim.clone(), colim.clone(), edges, halves, vertices)
}

/// The nerve of the free circuit operad on `S`, truncated to at most `v_max`
/// vertices and `e_max` τ-orbits per substituted graph.
///
/// At a corolla the value is the free component. At any other graph `G` it
/// is computed from colimits: every assignment of enumerated graphs to the
/// vertices of `G`, every structure on the colimit, up to the automorphisms
/// of the substituted graphs acting on the colimit.
pub fn free_nerve_table(s: &GraphicalSpecies, graphs: &[NamedGraph], v_max: usize, e_max: usize) -> Result<PresheafTable> {
    let pal = s.palette();
    let (list, stick, corollas) = complete_graph_list(graphs);
    let mut cache = FreeCache { species: s, v_max, e_max, components: BTreeMap::new() };
    let mut table = PresheafTable { graphs: list.clone(), ..Default::default() };
    for ng in &list {
        let g = &ng.graph;
        match shape(g) {
            Shape::Stick => {
                table.values.insert(ng.id.clone(), pal.colours().to_vec());
                stick_and_corolla_entries(pal, ng, &stick, &[], &mut table);
            }
            Shape::Corolla => {
                let mut values = Vec::new();
                for w in pal.words(g.valency(0)) {
                    let c = cache.component(&w)?;
                    values.extend(c.keys(s).into_iter().map(|k| (k, w.clone())));
                }
                table.values.insert(ng.id.clone(), values.iter().map(|(k, _)| k.clone()).collect());
                stick_and_corolla_entries(pal, ng, &stick, &values, &mut table);
            }
            Shape::General => {
                let nv = g.num_vertices();
                let boundaries: Vec<Vec<String>> = (0..nv)
                    .map(|v| g.incident_edges(v).iter().map(|&e| g.edge_label(g.tau(e)).to_string()).collect())
                    .collect();
                let mut per_vertex = Vec::new();
                for v in 0..nv {
                    per_vertex.push(cache.graphs(g.valency(v))?);
                }
                let choices: Vec<Vec<usize>> = per_vertex.iter().map(|(gs, _)| (0..gs.len()).collect()).collect();
                let mut keys = Vec::new();
                let mut stick_maps: Vec<BTreeMap<String, String>> = vec![BTreeMap::new(); g.orbits().len()];
                let mut vertex_maps: Vec<BTreeMap<String, String>> = vec![BTreeMap::new(); nv];
                for pick in product(&choices) {
                    let assignment = (0..nv)
                        .map(|v| {
                            let rep = &per_vertex[v].0[pick[v]];
                            let rho = rep
                                .rho()
                                .iter()
                                .map(|(p, l)| (p.clone(), boundaries[v][l.parse::<usize>().expect("numbered") - 1].clone()))
                                .collect();
                            XGraph::new(rep.graph().clone(), rho)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let colim = GraphOfGraphs::new(g.clone(), assignment)?.colimit()?;
                    let mut generators = Vec::new();
                    for v in 0..nv {
                        for phi in &per_vertex[v].1[pick[v]] {
                            generators.push(induced_automorphism(&colim.graph, &colim.embeddings[v], phi)?);
                        }
                    }
                    let mut seen = BTreeSet::new();
                    for alpha in evaluate(s, &colim.graph)? {
                        if seen.contains(&alpha) {
                            continue;
                        }
                        let (min, orbit) = orbit_min(s, &alpha, &generators)?;
                        seen.extend(orbit);
                        let picks: Vec<String> = pick.iter().map(|i| i.to_string()).collect();
                        let key = format!("{}|{}", picks.join(","), min.key(s));
                        for (j, &(a, _)) in g.orbits().iter().enumerate() {
                            stick_maps[j].insert(key.clone(), min.colours[a].clone());
                        }
                        for v in 0..nv {
                            let restricted = pullback(s, &min, &colim.embeddings[v])?;
                            let rep = &per_vertex[v].0[pick[v]];
                            let word: Vec<String> =
                                numbered(g.valency(v)).iter().map(|l| restricted.colours[rep.port_for(l).expect("numbered")].clone()).collect();
                            let comp = cache.component(&word)?;
                            let (gi, canon) = comp.canonical(s, pick[v], &restricted)?;
                            vertex_maps[v].insert(key.clone(), comp.key(s, gi, &canon));
                        }
                        keys.push(key);
                    }
                }
                table.values.insert(ng.id.clone(), keys);
                for (j, map) in stick_maps.into_iter().enumerate() {
                    table.restrictions.push(Restriction { graph: ng.id.clone(), along: Along::Stick(j), target: stick.clone(), map });
                }
                for (v, map) in vertex_maps.into_iter().enumerate() {
                    let target = corollas[&g.valency(v)].clone();
                    table.restrictions.push(Restriction { graph: ng.id.clone(), along: Along::Vertex(v), target, map });
                }
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rng_from_seed;
    use crate::wiring::MatchingAlgebra;
    use rand::Rng;

    fn w(s: &str) -> Vec<String> {
        parse_word_key(s)
    }

    fn two_colours() -> Palette {
        Palette::from_pairs(&[("a", "a"), ("+", "-")]).unwrap()
    }

    #[test]
    fn torsor_relabel_matches_composition() {
        let s = GraphicalSpecies::torsor(Palette::monochrome("a"), 4);
        let word = w("a,a,a,a");
        let perms = Permutation::all(4);
        for (i, p) in perms.iter().enumerate() {
            for sigma in &perms {
                let got = s.relabel(&Elem { word: word.clone(), index: i }, sigma).unwrap();
                assert_eq!(got.index, perms.iter().position(|q| *q == p.then(sigma)).unwrap());
            }
        }
    }

    #[test]
    fn relabel_is_functorial() {
        let mut rng = rng_from_seed(7);
        for s in [GraphicalSpecies::torsor(two_colours(), 4), GraphicalSpecies::sign(two_colours(), 4)] {
            let colours = s.palette().colours().to_vec();
            for _ in 0..300 {
                let n = rng.gen_range(0..=4);
                let word: Vec<String> = (0..n).map(|_| colours[rng.gen_range(0..colours.len())].clone()).collect();
                let elems = s.elements(&word).unwrap();
                let e = &elems[rng.gen_range(0..elems.len())];
                let sigma = Permutation::random(n, &mut rng);
                let rho = Permutation::random(n, &mut rng);
                let one = s.relabel(&s.relabel(e, &sigma).unwrap(), &rho).unwrap();
                assert_eq!(one, s.relabel(e, &sigma.then(&rho)).unwrap());
                assert_eq!(s.relabel(e, &Permutation::identity(n)).unwrap(), *e);
                assert_eq!(one.word, sigma.then(&rho).permute(&word));
            }
        }
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let pal = Palette::monochrome("a");
        let tables = BTreeMap::from([(w("a,a,a"), ["x", "y", "z", "t"].map(String::from).to_vec())]);
        // Two commuting disjoint transpositions violate the braid relation.
        let sigma = BTreeMap::from([(w("a,a,a"), BTreeMap::from([(0, vec![1, 0, 2, 3]), (1, vec![0, 1, 3, 2])]))]);
        assert!(matches!(GraphicalSpecies::new(pal.clone(), 3, tables.clone(), sigma), Err(Error::InvalidSpecies(_))));
        // The same transposition for both satisfies every relation.
        let sigma = BTreeMap::from([(w("a,a,a"), BTreeMap::from([(0, vec![1, 0, 2, 3]), (1, vec![1, 0, 2, 3])]))]);
        assert!(GraphicalSpecies::new(pal.clone(), 3, tables.clone(), sigma).is_ok());
        let unsorted = BTreeMap::from([(w("b,a"), vec!["x".to_string()])]);
        let pal2 = Palette::from_pairs(&[("a", "b")]).unwrap();
        assert!(GraphicalSpecies::new(pal2, 3, unsorted, BTreeMap::new()).is_err());
        assert!(matches!(GraphicalSpecies::new(pal, 2, tables, BTreeMap::new()), Err(Error::ArityBoundExceeded(_))));
    }

    #[test]
    fn evaluation_agrees_with_limit_over_elements() {
        let mut rng = rng_from_seed(11);
        let species = [
            GraphicalSpecies::terminal(two_colours(), 3),
            GraphicalSpecies::sign(two_colours(), 3),
            GraphicalSpecies::torsor(Palette::oriented(), 3),
        ];
        for _ in 0..40 {
            let g = Graph::random(rng.gen_range(0..=3), 3, rng.gen_range(0..=2), &mut rng);
            for s in &species {
                assert_eq!(evaluate(s, &g).unwrap(), evaluate_as_limit(s, &g).unwrap(), "{g}");
            }
        }
    }

    #[test]
    fn evaluation_frozen_values() {
        let mono = GraphicalSpecies::terminal(Palette::monochrome("a"), 3);
        assert_eq!(evaluate(&mono, &Graph::wheel(2).unwrap()).unwrap().len(), 1);
        let or = GraphicalSpecies::terminal(Palette::oriented(), 3);
        assert_eq!(evaluate(&or, &Graph::wheel(1).unwrap()).unwrap().len(), 2);
        assert_eq!(evaluate(&or, &Graph::stick()).unwrap().len(), 2);
        let torsor = GraphicalSpecies::torsor(Palette::monochrome("a"), 3);
        assert_eq!(evaluate(&torsor, &Graph::corolla_n(3)).unwrap().len(), 6);
        assert_eq!(evaluate(&torsor, &Graph::line(2)).unwrap().len(), 4);
        assert!(matches!(evaluate(&mono, &Graph::corolla_n(4)), Err(Error::ArityBoundExceeded(_))));
    }

    #[test]
    fn pullback_is_functorial_along_automorphisms() {
        let s = GraphicalSpecies::torsor(two_colours(), 3);
        let g = XGraph::identity(Graph::wheel(3).unwrap());
        let autos = automorphisms(&g);
        for alpha in evaluate(&s, g.graph()).unwrap().iter().take(20) {
            assert_eq!(pullback(&s, alpha, &GraphMorphism::identity(g.graph())).unwrap(), *alpha);
            for f in &autos {
                for h in &autos {
                    let two = pullback(&s, &pullback(&s, alpha, h).unwrap(), f).unwrap();
                    assert_eq!(two, pullback(&s, alpha, &f.then(h).unwrap()).unwrap());
                }
            }
        }
    }

    fn matching_operad(pal: Palette, bound: usize) -> CircuitOperad {
        CircuitOperad::from_circuit_algebra(&MatchingAlgebra::new(pal, bound)).unwrap()
    }

    #[test]
    fn matching_algebra_gives_a_circuit_operad() {
        let co = matching_operad(Palette::monochrome("a"), 4);
        let sizes: Vec<usize> = (0..=4).map(|n| co.species().table(&vec!["a".to_string(); n]).len()).collect();
        assert_eq!(sizes, vec![1, 0, 1, 0, 3]);
        let r = co.validate();
        assert!(r.passed(), "{r}");
        assert!(r.checked > 50);
        let m = co.check_modular();
        assert!(m.passed(), "{m}");
        let oriented = matching_operad(Palette::oriented(), 4);
        assert!(oriented.validate().passed());
        assert!(oriented.check_modular().passed());
    }

    #[test]
    fn corrupted_operad_fails() {
        let co = matching_operad(Palette::monochrome("a"), 4);
        let aa = w("a,a");
        let cap = Elem { word: aa.clone(), index: 0 };
        let four = w("a,a,a,a");
        let good = co.boxtimes(&cap, &cap).unwrap();
        let mut bad = co.clone();
        let other = (0..3).map(|index| Elem { word: four.clone(), index }).find(|e| *e != good).unwrap();
        bad.set_boxtimes(cap.clone(), cap.clone(), other);
        let r = bad.validate();
        assert!(!r.passed());
        let mut missing = co.clone();
        missing.contraction.clear();
        assert!(missing.validate().violations.iter().any(|v| v.law == "typing"));
    }

    #[test]
    fn units_are_unique() {
        // Only the genuine ε satisfies the unit law among the pointed choices.
        let co = matching_operad(Palette::oriented(), 4);
        for c in ["+", "-"] {
            let eps = co.epsilon(c).unwrap();
            for alt in co.species().elements(&eps.word).unwrap() {
                let mut trial = co.clone();
                trial.set_epsilon(c, alt.clone());
                let dual = co.species().palette().omega(c).to_string();
                trial.set_epsilon(&dual, co.species().relabel(&alt, &Permutation::transposition(2, 0, 1)).unwrap());
                assert_eq!(trial.validate().passed(), alt == eps);
            }
        }
    }

    #[test]
    fn operad_json_round_trip() {
        let co = matching_operad(Palette::oriented(), 4);
        let json = serde_json::to_string(&co).unwrap();
        let back: CircuitOperad = serde_json::from_str(&json).unwrap();
        assert_eq!(back, co);
        let s = GraphicalSpecies::torsor(two_colours(), 3);
        let back: GraphicalSpecies = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    /// Every vertex assignment and every involution, deduplicated.
    fn brute_force_classes(x: &[String], v_max: usize, e_max: usize) -> usize {
        let k = x.len();
        let mut certs = BTreeSet::new();
        for nv in 0..=v_max {
            for total in (k..=2 * e_max).filter(|t| t % 2 == 0) {
                let h = total - k;
                if nv == 0 && h > 0 {
                    continue;
                }
                let involutions = involutions(total);
                let mut owners = vec![vec![]];
                for _ in 0..h {
                    owners = owners.into_iter().flat_map(|o: Vec<usize>| (0..nv).map(move |v| [o.clone(), vec![v]].concat())).collect();
                }
                for tau in &involutions {
                    if (0..k).any(|p| tau[p] < k) {
                        continue;
                    }
                    for owner in &owners {
                        let mut order: Vec<usize> = (0..h).collect();
                        order.sort_by_key(|&e| owner[e]);
                        let g = Graph::from_indices(
                            (0..total).map(|e| format!("e{e}")).collect(),
                            tau.clone(),
                            (0..h).map(|j| format!("h{j}")).collect(),
                            order.iter().map(|&e| k + e).collect(),
                            order.iter().map(|&e| owner[e]).collect(),
                            (0..nv).map(|v| format!("v{v}")).collect(),
                        )
                        .unwrap();
                        let rho = (0..k).map(|i| (format!("e{i}"), x[i].clone())).collect();
                        certs.insert(XGraph::new(g, rho).unwrap().canonical_labelling().certificate);
                    }
                }
            }
        }
        certs.len()
    }

    fn involutions(n: usize) -> Vec<Vec<usize>> {
        fn rec(p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let Some(u) = p.iter().position(|&x| x == usize::MAX) else {
                out.push(p.clone());
                return;
            };
            for f in u + 1..p.len() {
                if p[f] == usize::MAX {
                    p[u] = f;
                    p[f] = u;
                    rec(p, out);
                    p[u] = usize::MAX;
                    p[f] = usize::MAX;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut vec![usize::MAX; n], &mut out);
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let cases = [(0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 1, 2), (2, 1, 2), (2, 2, 3), (3, 2, 3), (1, 2, 3)];
        let frozen = [1, 3, 11, 2, 1, 10, 5, 13];
        for (&(k, v_max, e_max), want) in cases.iter().zip(frozen) {
            let x = numbered(k);
            let got = enumerate_x_graphs(&x, v_max, e_max).unwrap();
            assert!(got.iter().all(XGraph::is_admissible));
            assert_eq!(got.len(), brute_force_classes(&x, v_max, e_max), "{k} {v_max} {e_max}");
            assert_eq!(got.len(), want, "{k} {v_max} {e_max}");
        }
        assert!(matches!(enumerate_x_graphs(&[], 4, 12), Err(Error::BoundTooLarge(_))));
        let corolla2 = enumerate_x_graphs(&numbered(2), 1, 2).unwrap();
        assert!(corolla2[0].graph().is_isomorphic(&Graph::corolla_n(2)));
    }

    #[test]
    fn free_components() {
        let term = GraphicalSpecies::terminal(Palette::monochrome("a"), 3);
        let c = free_component(&term, &w("a,a"), 2, 3).unwrap();
        // With one element per word, elements are the graphs themselves.
        assert_eq!(c.elements.len(), c.graphs.len());
        let sign = GraphicalSpecies::sign(Palette::monochrome("a"), 3);
        let c3 = free_component(&sign, &w("a,a,a"), 1, 3).unwrap();
        // The corolla carries both signs; nothing else fits in one vertex.
        assert_eq!(c3.graphs.len(), 1);
        assert_eq!(c3.elements.len(), 2);
        let g = free_component(&sign, &w(""), 1, 3).unwrap();
        // The empty graph, C_0 and a vertex with a loop. Reversing the loop
        // swaps + and -, so the loop contributes a single element.
        assert_eq!(g.graphs.len(), 3);
        let loops: Vec<_> = g.elements.iter().filter(|(i, _)| g.graphs[*i].graph().num_edges() == 2).collect();
        assert_eq!(loops.len(), 1);
        // C_0 carries both elements of the empty word.
        assert_eq!(g.elements.len(), 4);
    }

    #[test]
    fn free_contraction_is_well_defined() {
        let s = GraphicalSpecies::torsor(Palette::monochrome("a"), 3);
        let source = free_component(&s, &w("a,a,a,a"), 2, 4).unwrap();
        let target = free_component(&s, &w("a,a"), 2, 4).unwrap();
        let mut checked = 0;
        for elem in &source.elements {
            for (x, y) in [(0, 1), (1, 3), (0, 2)] {
                let r = free_contract(&s, &source, &target, elem, x, y).unwrap();
                assert!(target.elements.contains(&r));
                for a in &source.automorphisms[elem.0] {
                    let moved = (elem.0, pullback(&s, &elem.1, a).unwrap());
                    assert_eq!(free_contract(&s, &source, &target, &moved, x, y).unwrap(), r);
                    checked += 1;
                }
                let (glued, beta) = glue_ports(&s, &source.graphs[elem.0], &elem.1, x, y).unwrap();
                assert!(evaluate(&s, glued.graph()).unwrap().contains(&beta));
            }
        }
        assert!(checked > 0);
    }

    fn test_graphs() -> Vec<NamedGraph> {
        let glued = Graph::corolla_n(3).disjoint_union(&Graph::corolla_n(2).with_prefix("b")).unwrap().glue("3", "b1").unwrap();
        [
            ("stick", Graph::stick()),
            ("c1", Graph::corolla_n(1)),
            ("c2", Graph::corolla_n(2)),
            ("c3", Graph::corolla_n(3)),
            ("w1", Graph::wheel(1).unwrap()),
            ("w2", Graph::wheel(2).unwrap()),
            ("glued", glued),
        ]
        .into_iter()
        .map(|(id, graph)| NamedGraph { id: id.into(), graph })
        .collect()
    }

    #[test]
    fn species_presheaf_is_segal() {
        for s in [GraphicalSpecies::torsor(two_colours(), 3), GraphicalSpecies::sign(Palette::oriented(), 3)] {
            let table = species_table(&s, &test_graphs()).unwrap();
            let r = segal_check(&table).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn free_nerve_is_segal_and_corruption_is_named() {
        let s = GraphicalSpecies::sign(Palette::monochrome("a"), 3);
        let table = free_nerve_table(&s, &test_graphs(), 2, 3).unwrap();
        let r = segal_check(&table).unwrap();
        assert!(r.passed(), "{r}");
        let w1 = r.graphs.iter().find(|g| g.graph == "w1").unwrap();
        assert!(w1.size > 1);
        let mut bad = table.clone();
        let victim = bad.values["w1"][0].clone();
        bad.drop_value("w1", &victim);
        let r = segal_check(&bad).unwrap();
        assert_eq!(r.failing(), vec!["w1"]);
        let mut missing = table.clone();
        missing.restrictions.retain(|x| !(x.graph == "w2" && x.along == Along::Vertex(1)));
        assert!(matches!(segal_check(&missing), Err(Error::MissingRestriction(_))));
        let json = serde_json::to_string(&table).unwrap();
        let back: PresheafTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, table);
    }
}
