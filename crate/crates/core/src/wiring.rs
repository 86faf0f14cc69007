//! The wiring-diagram operad and finite circuit algebras over it.
//!
//! A wiring diagram is a coloured Brauer diagram whose sources are split
//! into ordered input blocks. Operadic composition plugs wiring diagrams into
//! the blocks of another; a circuit algebra assigns a set to every colour word
//! and a function to every wiring diagram, compatibly with identities, block
//! permutations and composition.
//!
//! ```
//! use brauerkit::coloured::Palette;
//! use brauerkit::wiring::{CircuitAlgebra, MatchingAlgebra};
//!
//! let alg = MatchingAlgebra::new(Palette::monochrome("c"), 4);
//! let eps = brauerkit::wiring::unit_epsilon(&alg, "c").unwrap();
//! assert_eq!(eps.n(), 2);
//! assert_eq!(alg.carrier(&vec!["c".to_string(); 4]).unwrap().len(), 3);
//! ```

use crate::coloured::{ColouredBrauerDiagram, Palette};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::util::rng_from_seed;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A coloured Brauer diagram with its sources split into input blocks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WiringDiagram {
    diagram: ColouredBrauerDiagram,
    blocks: Vec<usize>,
}

impl WiringDiagram {
    pub fn new(diagram: ColouredBrauerDiagram, blocks: Vec<usize>) -> Result<Self> {
        let total: usize = blocks.iter().sum();
        if total != diagram.m() {
            return Err(Error::BlockMismatch(format!(
                "blocks {blocks:?} do not sum to the source arity {}",
                diagram.m()
            )));
        }
        Ok(WiringDiagram { diagram, blocks })
    }

    /// The identity on the concatenation of `words`, one block per word.
    pub fn identity(palette: &Palette, words: &[Vec<String>]) -> Result<Self> {
        let all: Vec<String> = words.concat();
        let d = ColouredBrauerDiagram::identity(palette, &all)?;
        WiringDiagram::new(d, words.iter().map(Vec::len).collect())
    }

    /// A wiring diagram with no input blocks.
    pub fn constant(diagram: ColouredBrauerDiagram) -> Result<Self> {
        WiringDiagram::new(diagram, vec![])
    }

    pub fn diagram(&self) -> &ColouredBrauerDiagram {
        &self.diagram
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn palette(&self) -> &Palette {
        self.diagram.palette()
    }

    /// The input type of each block.
    pub fn block_types(&self) -> Vec<Vec<String>> {
        let input = self.diagram.input_type();
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut at = 0;
        for &b in &self.blocks {
            out.push(input[at..at + b].to_vec());
            at += b;
        }
        out
    }

    pub fn output_type(&self) -> Vec<String> {
        self.diagram.output_type()
    }

    /// Permutes the blocks: old block `i` becomes block `σ(i)`.
    pub fn sigma_action(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.blocks.len() {
            return Err(Error::BlockMismatch(format!(
                "permutation of {} blocks applied to {} blocks",
                sigma.len(),
                self.blocks.len()
            )));
        }
        let expand = sigma.expand_blocks(&self.blocks);
        let new_input = expand.permute(&self.diagram.input_type());
        let shuffle = ColouredBrauerDiagram::from_permutation(self.palette(), &expand.inverse(), &new_input)?;
        WiringDiagram::new(shuffle.then(&self.diagram)?, sigma.permute(&self.blocks))
    }

    /// Random wiring diagram with a prescribed output type.
    pub fn random_with_output<R: Rng>(
        palette: &Palette,
        output: &[String],
        extra_caps: usize,
        max_closed: usize,
        max_blocks: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let h = ColouredBrauerDiagram::random_with_input(palette, &palette.dual_word(output), extra_caps, max_closed, rng)?;
        let d = h.dual();
        let blocks = random_composition(d.m(), max_blocks, rng);
        WiringDiagram::new(d, blocks)
    }
}

/// A random ordered splitting of `m` into at most `max_blocks` parts.
pub fn random_composition<R: Rng>(m: usize, max_blocks: usize, rng: &mut R) -> Vec<usize> {
    if max_blocks == 0 {
        return vec![];
    }
    let k = rng.gen_range(if m > 0 { 1 } else { 0 }..=max_blocks);
    if k == 0 {
        return vec![];
    }
    let mut cuts: Vec<usize> = (0..k - 1).map(|_| rng.gen_range(0..=m)).collect();
    cuts.sort();
    let mut out = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(m - prev);
    out
}

/// All ordered splittings of `m` into exactly `k` parts (parts may be empty).
pub fn compositions(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if m == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=m {
        for mut rest in compositions(m - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Operadic composition: plugs `fs[i]` into block `i` of `g`.
pub fn operad_gamma(g: &WiringDiagram, fs: &[WiringDiagram]) -> Result<WiringDiagram> {
    if fs.len() != g.blocks.len() {
        return Err(Error::BlockMismatch(format!(
            "{} diagrams plugged into {} blocks",
            fs.len(),
            g.blocks.len()
        )));
    }
    for (i, (f, c)) in fs.iter().zip(g.block_types()).enumerate() {
        if f.output_type() != c {
            return Err(Error::TypeMismatch(format!(
                "block {} expects {c:?}, got {:?}",
                i + 1,
                f.output_type()
            )));
        }
    }
    let inner: Vec<ColouredBrauerDiagram> = fs.iter().map(|f| f.diagram.clone()).collect();
    let tensor = ColouredBrauerDiagram::tensor_all(g.palette(), &inner)?;
    let blocks = fs.iter().flat_map(|f| f.blocks.iter().copied()).collect();
    WiringDiagram::new(tensor.then(&g.diagram)?, blocks)
}

/// Every wiring diagram with at most `max_points` boundary points,
/// `max_blocks` blocks and `max_closed` bubbles, whose block and output words
/// have length at most `bound`.
pub fn enumerate_wiring(
    palette: &Palette,
    max_points: usize,
    max_blocks: usize,
    max_closed: usize,
    bound: usize,
) -> Result<Vec<WiringDiagram>> {
    let mut out = Vec::new();
    for m in 0..=max_points {
        for n in 0..=(max_points - m).min(bound) {
            if (m + n) % 2 != 0 {
                continue;
            }
            for input in palette.words(m) {
                for output in palette.words(n) {
                    let ds = ColouredBrauerDiagram::enumerate_typed(palette, &input, &output, max_closed)?;
                    if ds.is_empty() {
                        continue;
                    }
                    for k in 0..=max_blocks {
                        for blocks in compositions(m, k) {
                            if blocks.iter().any(|&b| b > bound) {
                                continue;
                            }
                            for d in &ds {
                                out.push(WiringDiagram { diagram: d.clone(), blocks: blocks.clone() });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A `Set`-valued circuit algebra, truncated at an arity bound.
pub trait CircuitAlgebra {
    type Elem: Clone + Ord + fmt::Debug;

    fn palette(&self) -> &Palette;

    /// Words longer than the bound are rejected.
    fn bound(&self) -> usize;

    /// The (finite, possibly truncated) carrier set at a colour word.
    fn carrier(&self, word: &[String]) -> Result<Vec<Self::Elem>>;

    /// The structure map of a wiring diagram applied to one input per block.
    fn act(&self, wd: &WiringDiagram, inputs: &[Self::Elem]) -> Result<Self::Elem>;
}

fn check_bound(bound: usize, wd: &WiringDiagram) -> Result<()> {
    let out = wd.output_type().len();
    if out > bound || wd.blocks.iter().any(|&b| b > bound) {
        return Err(Error::ArityBoundExceeded(format!("wiring diagram exceeds the arity bound {bound}")));
    }
    Ok(())
}

/// `x ⊠ y`: the two-block identity wiring diagram.
pub fn derived_boxtimes<A: CircuitAlgebra>(alg: &A, c: &[String], d: &[String], x: &A::Elem, y: &A::Elem) -> Result<A::Elem> {
    if c.len() + d.len() > alg.bound() {
        return Err(Error::ArityBoundExceeded(format!("|{c:?}| + |{d:?}| exceeds {}", alg.bound())));
    }
    let wd = WiringDiagram::identity(alg.palette(), &[c.to_vec(), d.to_vec()])?;
    alg.act(&wd, &[x.clone(), y.clone()])
}

/// The wiring diagram `(∪ ⊕ id) ∘ ρ^{i,j}` contracting positions `i < j` (1-based).
pub fn contraction_wd(palette: &Palette, c: &[String], i: usize, j: usize) -> Result<WiringDiagram> {
    if !(1 <= i && i < j && j <= c.len()) {
        return Err(Error::IndexError(format!("cannot contract {i} with {j} in a word of length {}", c.len())));
    }
    let (ci, cj) = (&c[i - 1], &c[j - 1]);
    if !palette.contains(ci) || palette.omega(ci) != cj {
        return Err(Error::ColourMismatch(format!("positions {i} and {j} carry {ci} and {cj}")));
    }
    // ρ moves i to the front, j second, and keeps the rest in order.
    let mut images = vec![0; c.len()];
    let mut next = 2;
    for (k, img) in images.iter_mut().enumerate() {
        *img = if k == i - 1 {
            0
        } else if k == j - 1 {
            1
        } else {
            next += 1;
            next - 1
        };
    }
    let rho = Permutation::new(images)?;
    let shuffle = ColouredBrauerDiagram::from_permutation(palette, &rho, c)?;
    let rest: Vec<String> = rho.permute(c)[2..].to_vec();
    let contract = ColouredBrauerDiagram::cup(palette, ci)?.tensor(&ColouredBrauerDiagram::identity(palette, &rest)?)?;
    WiringDiagram::new(shuffle.then(&contract)?, vec![c.len()])
}

/// `ζ^{i‡j}` on `A(c)`.
pub fn derived_contraction<A: CircuitAlgebra>(alg: &A, c: &[String], i: usize, j: usize, x: &A::Elem) -> Result<A::Elem> {
    let wd = contraction_wd(alg.palette(), c, i, j)?;
    alg.act(&wd, std::slice::from_ref(x))
}

/// `◇^{i‡j} = ζ^{i‡|c|+j} ∘ ⊠`.
pub fn derived_diamond<A: CircuitAlgebra>(
    alg: &A,
    c: &[String],
    d: &[String],
    i: usize,
    j: usize,
    x: &A::Elem,
    y: &A::Elem,
) -> Result<A::Elem> {
    if i == 0 || i > c.len() || j == 0 || j > d.len() {
        return Err(Error::IndexError(format!("({i}, {j}) outside ({}, {})", c.len(), d.len())));
    }
    let xy = derived_boxtimes(alg, c, d, x, y)?;
    let cd = [c, d].concat();
    derived_contraction(alg, &cd, i, c.len() + j, &xy)
}

/// `ε_c ∈ A(c, ωc)`: the cap acting on no inputs.
pub fn unit_epsilon<A: CircuitAlgebra>(alg: &A, c: &str) -> Result<A::Elem> {
    let cap = ColouredBrauerDiagram::cap(alg.palette(), c)?;
    alg.act(&WiringDiagram::constant(cap)?, &[])
}

/// The unit of the graded monoid, in `A(∅)`.
pub fn unit_empty<A: CircuitAlgebra>(alg: &A) -> Result<A::Elem> {
    alg.act(&WiringDiagram::constant(ColouredBrauerDiagram::empty(alg.palette()))?, &[])
}

/// A named generator of a free circuit algebra, of a fixed colour word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeGenerator {
    pub name: String,
    pub word: Vec<String>,
}

/// An element of a free circuit algebra: a wiring diagram decorated by one
/// generator per block, up to permuting blocks together with generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeElem {
    pub shape: WiringDiagram,
    /// Generator indices, one per block of `shape`.
    pub gens: Vec<usize>,
}

/// The free circuit algebra on finitely many generators.
///
/// Generators generate their `Σ`-sets freely, so an element is a decorated
/// shape modulo simultaneous block permutations; elements are stored in a
/// canonical representative (generators sorted, least shape among ties).
#[derive(Debug, Clone)]
pub struct FreeCircuitAlgebra {
    palette: Palette,
    generators: Vec<FreeGenerator>,
    bound: usize,
    /// Largest shape source arity; larger results raise `ArityBoundExceeded`.
    pub max_source: usize,
    /// Carrier enumeration keeps shapes with at most this many bubbles.
    pub max_closed: usize,
    /// Carrier enumeration keeps at most this many generators.
    pub max_blocks: usize,
    /// Restrict to downward shapes and downward actions.
    pub downward: bool,
}

impl FreeCircuitAlgebra {
    pub fn new(palette: Palette, generators: Vec<FreeGenerator>, bound: usize) -> Result<Self> {
        for g in &generators {
            if g.word.len() > bound {
                return Err(Error::ArityBoundExceeded(format!("generator {} is longer than {bound}", g.name)));
            }
            if let Some(c) = g.word.iter().find(|c| !palette.contains(c)) {
                return Err(Error::InvalidColouring(format!("generator {} uses colour {c}", g.name)));
            }
        }
        Ok(FreeCircuitAlgebra {
            palette,
            generators,
            bound,
            max_source: usize::MAX,
            max_closed: 0,
            max_blocks: 2,
            downward: false,
        })
    }

    /// The same generators, restricted to downward wiring diagrams.
    pub fn downward(mut self) -> Self {
        self.downward = true;
        self
    }

    pub fn generators(&self) -> &[FreeGenerator] {
        &self.generators
    }

    /// The element `(id, (g))` of a single generator.
    pub fn generator(&self, index: usize) -> Result<FreeElem> {
        let g = self
            .generators
            .get(index)
            .ok_or_else(|| Error::IndexError(format!("no generator {index}")))?;
        let shape = WiringDiagram::identity(&self.palette, std::slice::from_ref(&g.word))?;
        Ok(FreeElem { shape, gens: vec![index] })
    }

    /// Canonical representative under simultaneous block permutation.
    ///
    /// Blocks are ordered by individualisation and refinement of a
    /// label-free block signature; the least relabelled wiring over the
    /// leaves wins.
    pub fn canonical(&self, e: FreeElem) -> Result<FreeElem> {
        if e.gens.len() < 2 {
            return Ok(e);
        }
        let partners = block_partners(&e.shape);
        let classes = refine(&partners, e.gens.clone());
        let mut best = None;
        search_leaves(&partners, classes, &mut best);
        let (_, order) = best.expect("the search visits at least one leaf");
        let sigma = Permutation::new(order)?;
        Ok(FreeElem { shape: e.shape.sigma_action(&sigma)?, gens: sigma.permute(&e.gens) })
    }

    fn check_shape(&self, shape: &WiringDiagram) -> Result<()> {
        if shape.diagram.m() > self.max_source {
            return Err(Error::ArityBoundExceeded(format!(
                "shape with {} sources exceeds {}",
                shape.diagram.m(),
                self.max_source
            )));
        }
        Ok(())
    }
}

/// Where each source point of each block is wired to.
#[derive(Debug, Clone, Copy)]
enum Wire {
    Output(usize),
    Block(usize, usize),
}

fn block_partners(shape: &WiringDiagram) -> Vec<Vec<Wire>> {
    let mut owner = Vec::new();
    for (b, &size) in shape.blocks.iter().enumerate() {
        owner.extend((0..size).map(|pos| (b, pos)));
    }
    let base = shape.diagram.base();
    let m = base.m();
    let table = base.partner_table();
    let mut out: Vec<Vec<Wire>> = shape.blocks.iter().map(|&s| Vec::with_capacity(s)).collect();
    for (i, &(b, _)) in owner.iter().enumerate() {
        let q = table[i];
        out[b].push(if q >= m {
            Wire::Output(q - m)
        } else {
            Wire::Block(owner[q].0, owner[q].1)
        });
    }
    out
}

type CarrierFn<'a, E> = dyn FnMut(&[String]) -> Result<Vec<E>> + 'a;

type Signature = (usize, Vec<(usize, usize, usize)>);

/// Refines block classes until stable; classes are ranks of signatures.
fn refine(partners: &[Vec<Wire>], mut class: Vec<usize>) -> Vec<usize> {
    let mut count = class.iter().collect::<BTreeSet<_>>().len();
    loop {
        let sigs: Vec<Signature> = partners
            .iter()
            .enumerate()
            .map(|(b, wires)| {
                let ws = wires
                    .iter()
                    .map(|w| match *w {
                        Wire::Output(j) => (0, j, 0),
                        Wire::Block(c, pos) if c == b => (1, 0, pos),
                        Wire::Block(c, pos) => (2, class[c], pos),
                    })
                    .collect();
                (class[b], ws)
            })
            .collect();
        let ranks: BTreeMap<_, usize> = sigs.iter().cloned().collect::<BTreeSet<_>>().into_iter().zip(0..).collect();
        class = sigs.iter().map(|s| ranks[s]).collect();
        if ranks.len() == count {
            return class;
        }
        count = ranks.len();
    }
}

/// Relabelled source wiring of a leaf ordering; equal keys give equal shapes.
fn leaf_key(partners: &[Vec<Wire>], order: &[usize]) -> Vec<(usize, usize)> {
    let k = order.len();
    let mut slot_block = vec![0; k];
    for (b, &r) in order.iter().enumerate() {
        slot_block[r] = b;
    }
    let mut key = Vec::new();
    for &b in &slot_block {
        for w in &partners[b] {
            key.push(match *w {
                Wire::Output(j) => (0, j),
                Wire::Block(c, pos) => (1 + order[c], pos),
            });
        }
    }
    key
}

type Leaf = (Vec<(usize, usize)>, Vec<usize>);

fn search_leaves(partners: &[Vec<Wire>], class: Vec<usize>, best: &mut Option<Leaf>) {
    let k = class.len();
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &class {
        *sizes.entry(c).or_default() += 1;
    }
    let Some((&target, _)) = sizes.iter().find(|(_, &n)| n > 1) else {
        let key = leaf_key(partners, &class);
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            *best = Some((key, class));
        }
        return;
    };
    for b in (0..k).filter(|&b| class[b] == target) {
        let split: Vec<usize> = (0..k).map(|c| 2 * class[c] + usize::from(class[c] == target && c != b)).collect();
        search_leaves(partners, refine(partners, split), best);
    }
}

impl CircuitAlgebra for FreeCircuitAlgebra {
    type Elem = FreeElem;

    fn palette(&self) -> &Palette {
        &self.palette
    }

    fn bound(&self) -> usize {
        self.bound
    }

    fn carrier(&self, word: &[String]) -> Result<Vec<FreeElem>> {
        if word.len() > self.bound {
            return Err(Error::ArityBoundExceeded(format!("word of length {} exceeds {}", word.len(), self.bound)));
        }
        let mut out = BTreeSet::new();
        let ng = self.generators.len();
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..self.max_blocks {
            let mut next = Vec::new();
            for t in &frontier {
                let start = t.last().copied().unwrap_or(0);
                for g in start..ng {
                    let mut t2 = t.clone();
                    t2.push(g);
                    next.push(t2);
                }
            }
            tuples.extend(next.iter().cloned());
            frontier = next;
        }
        for t in tuples {
            let words: Vec<Vec<String>> = t.iter().map(|&g| self.generators[g].word.clone()).collect();
            let input: Vec<String> = words.concat();
            if input.len() > self.max_source {
                continue;
            }
            for d in ColouredBrauerDiagram::enumerate_typed(&self.palette, &input, word, self.max_closed)? {
                if self.downward && !d.base().is_downward() {
                    continue;
                }
                let shape = WiringDiagram::new(d, words.iter().map(Vec::len).collect())?;
                out.insert(self.canonical(FreeElem { shape, gens: t.clone() })?);
            }
        }
        Ok(out.into_iter().collect())
    }

    fn act(&self, wd: &WiringDiagram, inputs: &[FreeElem]) -> Result<FreeElem> {
        if wd.palette() != &self.palette {
            return Err(Error::PaletteMismatch("wiring diagram palette differs".into()));
        }
        check_bound(self.bound, wd)?;
        if self.downward && !wd.diagram.base().is_downward() {
            return Err(Error::MissingAction(format!("{wd} is not downward")));
        }
        let shapes: Vec<WiringDiagram> = inputs.iter().map(|x| x.shape.clone()).collect();
        let shape = operad_gamma(wd, &shapes)?;
        self.check_shape(&shape)?;
        let gens = inputs.iter().flat_map(|x| x.gens.iter().copied()).collect();
        self.canonical(FreeElem { shape, gens })
    }
}

/// Coloured matchings with loops erased: `A(c) = CBD(∅; c)` open.
#[derive(Debug, Clone)]
pub struct MatchingAlgebra {
    palette: Palette,
    bound: usize,
}

impl MatchingAlgebra {
    pub fn new(palette: Palette, bound: usize) -> Self {
        MatchingAlgebra { palette, bound }
    }
}

impl CircuitAlgebra for MatchingAlgebra {
    type Elem = ColouredBrauerDiagram;

    fn palette(&self) -> &Palette {
        &self.palette
    }

    fn bound(&self) -> usize {
        self.bound
    }

    fn carrier(&self, word: &[String]) -> Result<Vec<ColouredBrauerDiagram>> {
        if word.len() > self.bound {
            return Err(Error::ArityBoundExceeded(format!("word of length {} exceeds {}", word.len(), self.bound)));
        }
        ColouredBrauerDiagram::enumerate_typed(&self.palette, &[], word, 0)
    }

    fn act(&self, wd: &WiringDiagram, inputs: &[ColouredBrauerDiagram]) -> Result<ColouredBrauerDiagram> {
        check_bound(self.bound, wd)?;
        if inputs.len() != wd.blocks.len() {
            return Err(Error::BlockMismatch(format!("{} inputs for {} blocks", inputs.len(), wd.blocks.len())));
        }
        for (x, c) in inputs.iter().zip(wd.block_types()) {
            if x.m() != 0 || x.output_type() != c {
                return Err(Error::TypeMismatch(format!("input {x} does not have type {c:?}")));
            }
        }
        let t = ColouredBrauerDiagram::tensor_all(&self.palette, inputs)?;
        let r = t.then(&wd.diagram)?;
        ColouredBrauerDiagram::new(&self.palette, r.base().with_closed(Zero::zero()), r.colours().to_vec(), vec![])
    }
}

/// An extensionally given circuit algebra over a finite list of wiring diagrams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableAlgebra {
    palette: Palette,
    bound: usize,
    carriers: BTreeMap<Vec<String>, Vec<String>>,
    action: BTreeMap<WiringDiagram, BTreeMap<Vec<String>, String>>,
}

impl TableAlgebra {
    /// Validates totality of every table and that outputs lie in the carriers.
    pub fn new(
        palette: Palette,
        bound: usize,
        carriers: BTreeMap<Vec<String>, Vec<String>>,
        action: BTreeMap<WiringDiagram, BTreeMap<Vec<String>, String>>,
    ) -> Result<Self> {
        let alg = TableAlgebra { palette, bound, carriers, action };
        for (wd, table) in &alg.action {
            check_bound(bound, wd)?;
            let inputs = wd
                .block_types()
                .iter()
                .map(|c| alg.carrier(c))
                .collect::<Result<Vec<_>>>()?;
            let tuples = product(&inputs);
            for t in &tuples {
                let out = table
                    .get(t)
                    .ok_or_else(|| Error::InvalidTable(format!("{wd}: no entry for inputs {t:?}")))?;
                if !alg.carrier(&wd.output_type())?.contains(out) {
                    return Err(Error::InvalidTable(format!("{wd}: output {out} outside the carrier")));
                }
            }
            if table.len() != tuples.len() {
                return Err(Error::InvalidTable(format!("{wd}: entries outside the input carriers")));
            }
        }
        Ok(alg)
    }

    /// The wiring diagrams with a listed action.
    pub fn listed(&self) -> impl Iterator<Item = &WiringDiagram> {
        self.action.keys()
    }

    /// Overwrites one table entry without revalidating the axioms.
    pub fn set_entry(&mut self, wd: &WiringDiagram, inputs: Vec<String>, output: String) -> Result<()> {
        let table = self
            .action
            .get_mut(wd)
            .ok_or_else(|| Error::MissingAction(wd.to_string()))?;
        let slot = table
            .get_mut(&inputs)
            .ok_or_else(|| Error::InvalidTable(format!("no entry for {inputs:?}")))?;
        *slot = output;
        Ok(())
    }

    pub fn table(&self, wd: &WiringDiagram) -> Option<&BTreeMap<Vec<String>, String>> {
        self.action.get(wd)
    }
}

impl CircuitAlgebra for TableAlgebra {
    type Elem = String;

    fn palette(&self) -> &Palette {
        &self.palette
    }

    fn bound(&self) -> usize {
        self.bound
    }

    fn carrier(&self, word: &[String]) -> Result<Vec<String>> {
        if word.len() > self.bound {
            return Err(Error::ArityBoundExceeded(format!("word of length {} exceeds {}", word.len(), self.bound)));
        }
        Ok(self.carriers.get(word).cloned().unwrap_or_default())
    }

    fn act(&self, wd: &WiringDiagram, inputs: &[String]) -> Result<String> {
        let table = self
            .action
            .get(wd)
            .ok_or_else(|| Error::MissingAction(wd.to_string()))?;
        table
            .get(inputs)
            .cloned()
            .ok_or_else(|| Error::MissingAction(format!("{wd} on {inputs:?}")))
    }
}

/// Tabulates `alg` on the wiring diagrams of `pool` whose action stays in
/// the carriers; elements are named by their index in the carrier.
pub fn tabulate<A: CircuitAlgebra>(alg: &A, pool: &[WiringDiagram]) -> Result<TableAlgebra> {
    let mut words: BTreeSet<Vec<String>> = BTreeSet::new();
    for wd in pool {
        words.extend(wd.block_types());
        words.insert(wd.output_type());
    }
    let mut carriers = BTreeMap::new();
    let mut names: BTreeMap<Vec<String>, BTreeMap<A::Elem, String>> = BTreeMap::new();
    for w in &words {
        let elems = alg.carrier(w)?;
        let named: BTreeMap<A::Elem, String> = elems.iter().enumerate().map(|(i, x)| (x.clone(), i.to_string())).collect();
        carriers.insert(w.clone(), (0..elems.len()).map(|i| i.to_string()).collect());
        names.insert(w.clone(), named);
    }
    let mut action = BTreeMap::new();
    'wd: for wd in pool {
        let types = wd.block_types();
        let elems = types.iter().map(|c| alg.carrier(c)).collect::<Result<Vec<_>>>()?;
        let out_names = &names[&wd.output_type()];
        let mut table = BTreeMap::new();
        for t in product(&elems) {
            let Ok(y) = alg.act(wd, &t) else { continue 'wd };
            let Some(yname) = out_names.get(&y) else { continue 'wd };
            let key = t.iter().zip(&types).map(|(x, c)| names[c][x].clone()).collect();
            table.insert(key, yname.clone());
        }
        action.insert(wd.clone(), table);
    }
    TableAlgebra::new(alg.palette().clone(), alg.bound(), carriers, action)
}

/// The cartesian product of a list of lists.
pub fn product<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![vec![]];
    for l in lists {
        let mut next = Vec::with_capacity(out.len() * l.len());
        for prefix in &out {
            for x in l {
                let mut p = prefix.clone();
                p.push(x.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Bounds and sampling parameters for the axiom checkers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckConfig {
    /// Largest number of boundary points of a checked wiring diagram.
    pub max_points: usize,
    pub max_blocks: usize,
    pub max_closed: usize,
    /// Number of sampled instances when exhaustive checking is too large.
    pub samples: usize,
    pub seed: u64,
    /// Exhaustive checking is used up to this many instances.
    pub exhaustive_limit: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { max_points: 4, max_blocks: 2, max_closed: 0, samples: 2000, seed: 0, exhaustive_limit: 100_000 }
    }
}

/// One failed law instance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub instance: String,
}

/// Outcome of an axiom check.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub exhaustive: bool,
    pub seed: u64,
    /// Size of the exhaustive instance space.
    pub instances: usize,
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, law: &str, ok: Result<bool>, instance: impl FnOnce() -> String) {
        match ok {
            Ok(true) => self.checked += 1,
            Ok(false) => {
                self.checked += 1;
                self.violations.push(Violation { law: law.into(), instance: instance() });
            }
            Err(_) => self.skipped += 1,
        }
    }

    fn finish(mut self) -> Self {
        self.violations.sort();
        self.violations.dedup();
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} instances checked ({}), {} skipped, {} violations",
            self.checked,
            if self.exhaustive { "exhaustive".to_string() } else { format!("sampled, seed {}", self.seed) },
            self.skipped,
            self.violations.len()
        )?;
        for v in &self.violations {
            writeln!(f, "  {}: {}", v.law, v.instance)?;
        }
        Ok(())
    }
}

/// Compares two results; skips instances outside the tables or bounds, and
/// flags a mismatch when only one side is defined.
fn agree<T: PartialEq>(lhs: Result<T>, rhs: Result<T>) -> Result<bool> {
    match (lhs, rhs) {
        (Ok(a), Ok(b)) => Ok(a == b),
        (Err(e @ Error::MissingAction(_)), _) | (_, Err(e @ Error::MissingAction(_))) => Err(e),
        (Err(e), Err(_)) => Err(e),
        _ => Ok(false),
    }
}

fn show_inputs<T: fmt::Debug>(xs: &[T]) -> String {
    format!("{xs:?}")
}

/// Checks identity, `Σ`-equivariance and the composition square.
///
/// All wiring diagrams within the configured bounds are used; when the
/// number of instances exceeds `exhaustive_limit`, `samples` seeded random
/// instances are checked instead.
pub fn check_circuit_algebra<A: CircuitAlgebra>(alg: &A, cfg: &CheckConfig) -> Result<CheckReport> {
    let universe = enumerate_wiring(alg.palette(), cfg.max_points, cfg.max_blocks, cfg.max_closed, alg.bound())?;
    let mut carriers: BTreeMap<Vec<String>, Vec<A::Elem>> = BTreeMap::new();
    let mut carrier = |w: &[String]| -> Result<Vec<A::Elem>> {
        if let Some(c) = carriers.get(w) {
            return Ok(c.clone());
        }
        let c = alg.carrier(w)?;
        carriers.insert(w.to_vec(), c.clone());
        Ok(c)
    };
    let mut by_output: BTreeMap<Vec<String>, Vec<&WiringDiagram>> = BTreeMap::new();
    for wd in &universe {
        by_output.entry(wd.output_type()).or_default().push(wd);
    }

    // Per wiring diagram, the number of input tuples.
    let mut tuples_of = BTreeMap::new();
    for wd in &universe {
        let mut count = 1usize;
        for c in wd.block_types() {
            count = count.saturating_mul(carrier(&c)?.len());
        }
        tuples_of.insert(wd, count);
    }
    let mut total = 0usize;
    for wd in &universe {
        let k = wd.blocks.len();
        let fact: usize = (1..=k).product();
        total = total.saturating_add(tuples_of[wd].saturating_mul(fact.saturating_sub(1)));
        let mut comp = 1usize;
        for c in wd.block_types() {
            let options: usize = by_output.get(&c).map_or(0, |fs| fs.iter().map(|f| tuples_of[*f]).sum());
            comp = comp.saturating_mul(options);
        }
        total = total.saturating_add(comp);
    }
    let exhaustive = total <= cfg.exhaustive_limit;
    let mut report = CheckReport { exhaustive, seed: cfg.seed, instances: total, ..Default::default() };

    // Identity on every word with a carrier.
    for len in 0..=alg.bound().min(cfg.max_points / 2) {
        for w in alg.palette().words(len) {
            let id = WiringDiagram::identity(alg.palette(), std::slice::from_ref(&w))?;
            for x in carrier(&w)? {
                let ok = agree(alg.act(&id, std::slice::from_ref(&x)), Ok(x.clone()));
                report.record("identity", ok, || format!("word {w:?}, element {x:?}"));
            }
        }
    }

    let sigma_check = |report: &mut CheckReport, wd: &WiringDiagram, sigma: &Permutation, xs: &[A::Elem]| -> Result<()> {
        let moved = wd.sigma_action(sigma)?;
        let lhs = alg.act(&moved, &sigma.permute(xs));
        let rhs = alg.act(wd, xs);
        report.record("equivariance", agree(lhs, rhs), || {
            format!("{wd} permuted by {:?} on {}", sigma.images(), show_inputs(xs))
        });
        Ok(())
    };
    let square_check =
        |report: &mut CheckReport, g: &WiringDiagram, fs: &[WiringDiagram], xs: &[Vec<A::Elem>]| -> Result<()> {
            let composite = operad_gamma(g, fs)?;
            let flat: Vec<A::Elem> = xs.concat();
            let lhs = alg.act(&composite, &flat);
            let inner: Result<Vec<A::Elem>> = fs.iter().zip(xs).map(|(f, x)| alg.act(f, x)).collect();
            let rhs = inner.and_then(|ys| alg.act(g, &ys));
            report.record("composition", agree(lhs, rhs), || {
                let fs: Vec<String> = fs.iter().map(|f| f.to_string()).collect();
                format!("outer {g}; inner [{}]; inputs {}", fs.join(" | "), show_inputs(xs))
            });
            Ok(())
        };

    if exhaustive {
        for wd in &universe {
            let k = wd.blocks.len();
            if k < 2 {
                continue;
            }
            let elems = wd.block_types().iter().map(|c| carrier(c)).collect::<Result<Vec<_>>>()?;
            let tuples = product(&elems);
            for sigma in Permutation::all(k).iter().filter(|s| !s.is_identity()) {
                for xs in &tuples {
                    sigma_check(&mut report, wd, sigma, xs)?;
                }
            }
        }
        for g in &universe {
            let mut per_block: Vec<Vec<(WiringDiagram, Vec<A::Elem>)>> = Vec::new();
            for c in g.block_types() {
                let mut opts = Vec::new();
                for f in by_output.get(&c).cloned().unwrap_or_default() {
                    let elems = f.block_types().iter().map(|b| carrier(b)).collect::<Result<Vec<_>>>()?;
                    for xs in product(&elems) {
                        opts.push((f.clone(), xs));
                    }
                }
                per_block.push(opts);
            }
            for choice in product(&per_block) {
                let (fs, xs): (Vec<WiringDiagram>, Vec<Vec<A::Elem>>) = choice.into_iter().unzip();
                square_check(&mut report, g, &fs, &xs)?;
            }
        }
    } else {
        let mut rng = rng_from_seed(cfg.seed);
        let multi: Vec<&WiringDiagram> = universe.iter().filter(|w| w.blocks.len() >= 2).collect();
        let pick = |rng: &mut crate::util::SeededRng, wd: &WiringDiagram, carrier: &mut CarrierFn<'_, A::Elem>| -> Result<Option<Vec<A::Elem>>> {
            let mut xs = Vec::new();
            for c in wd.block_types() {
                let cs = carrier(&c)?;
                match cs.choose(rng) {
                    Some(x) => xs.push(x.clone()),
                    None => return Ok(None),
                }
            }
            Ok(Some(xs))
        };
        for _ in 0..cfg.samples {
            if let Some(wd) = multi.choose(&mut rng) {
                let sigma = Permutation::random(wd.blocks.len(), &mut rng);
                if let Some(xs) = pick(&mut rng, wd, &mut carrier)? {
                    sigma_check(&mut report, wd, &sigma, &xs)?;
                }
            }
            let Some(g) = universe.choose(&mut rng) else { break };
            let mut fs = Vec::new();
            let mut xs = Vec::new();
            let mut ok = true;
            for c in g.block_types() {
                let Some(f) = by_output.get(&c).and_then(|v| v.choose(&mut rng)) else {
                    ok = false;
                    break;
                };
                match pick(&mut rng, f, &mut carrier)? {
                    Some(x) => {
                        fs.push((*f).clone());
                        xs.push(x);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                square_check(&mut report, g, &fs, &xs)?;
            } else {
                report.skipped += 1;
            }
        }
    }
    Ok(report.finish())
}

/// All pairs of 1-based positions `i < j` of `c` with `c_i = ω c_j`.
pub fn contractible_pairs(palette: &Palette, c: &[String]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            if palette.omega(&c[i]) == c[j] {
                out.push((i + 1, j + 1));
            }
        }
    }
    out
}

/// Index of 1-based position `p` after removing positions `i < j`.
pub fn shift_after_removal(p: usize, i: usize, j: usize) -> usize {
    p - usize::from(p > i) - usize::from(p > j)
}

fn remove_two(c: &[String], i: usize, j: usize) -> Vec<String> {
    c.iter()
        .enumerate()
        .filter(|(k, _)| *k + 1 != i && *k + 1 != j)
        .map(|(_, x)| x.clone())
        .collect()
}

/// Checks the graded-monoid and contraction laws (c1), (c2), (c3) and the
/// unit law (e1) on every element of every word of length at most `max_len`.
///
/// Associativity and the unit of `⊠` are strict here. For (e1) the strand
/// leaving position `i` reappears at the end, so `ζ^{i‡m+2}(x ⊠ ε)` is
/// compared with `x` moved by the cyclic shift taking `i` to `m`.
pub fn check_axioms<A: CircuitAlgebra>(alg: &A, max_len: usize, with_unit: bool) -> Result<CheckReport> {
    let p = alg.palette().clone();
    let max_len = max_len.min(alg.bound());
    let mut report = CheckReport { exhaustive: true, ..Default::default() };
    let mut words = Vec::new();
    for len in 0..=max_len {
        words.extend(p.words(len));
    }
    let mut carriers = BTreeMap::new();
    for w in &words {
        carriers.insert(w.clone(), alg.carrier(w)?);
    }
    let box_ = |c: &[String], d: &[String], x: &A::Elem, y: &A::Elem| derived_boxtimes(alg, c, d, x, y);
    let zeta = |c: &[String], i: usize, j: usize, x: &A::Elem| derived_contraction(alg, c, i, j, x);

    // Unit of the graded monoid.
    match unit_empty(alg) {
        Ok(e) => {
            for w in &words {
                for x in &carriers[w] {
                    report.record("monoid unit", agree(box_(&[], w, &e, x), Ok(x.clone())), || format!("{w:?} {x:?}"));
                    report.record("monoid unit", agree(box_(w, &[], x, &e), Ok(x.clone())), || format!("{w:?} {x:?}"));
                }
            }
        }
        Err(e) => report.violations.push(Violation { law: "monoid unit".into(), instance: e.to_string() }),
    }

    // (c1)
    for a in &words {
        for b in &words {
            for c in &words {
                if a.len() + b.len() + c.len() > max_len {
                    continue;
                }
                let ab = [a.as_slice(), b].concat();
                let bc = [b.as_slice(), c].concat();
                for x in &carriers[a] {
                    for y in &carriers[b] {
                        for z in &carriers[c] {
                            let lhs = box_(a, b, x, y).and_then(|xy| box_(&ab, c, &xy, z));
                            let rhs = box_(b, c, y, z).and_then(|yz| box_(a, &bc, x, &yz));
                            report.record("(c1)", agree(lhs, rhs), || format!("{a:?} {b:?} {c:?} on {x:?} {y:?} {z:?}"));
                        }
                    }
                }
            }
        }
    }

    // (c2)
    for c in &words {
        let pairs = contractible_pairs(&p, c);
        for &(i, j) in &pairs {
            for &(k, m) in &pairs {
                if [i, j].contains(&k) || [i, j].contains(&m) || (i, j) >= (k, m) {
                    continue;
                }
                let cij = remove_two(c, i, j);
                let ckm = remove_two(c, k, m);
                let (k2, m2) = (shift_after_removal(k, i, j), shift_after_removal(m, i, j));
                let (i2, j2) = (shift_after_removal(i, k, m), shift_after_removal(j, k, m));
                for x in &carriers[c] {
                    let lhs = zeta(c, k, m, x).and_then(|y| zeta(&ckm, i2, j2, &y));
                    let rhs = zeta(c, i, j, x).and_then(|y| zeta(&cij, k2, m2, &y));
                    report.record("(c2)", agree(lhs, rhs), || format!("{c:?} pairs ({i},{j}) ({k},{m}) on {x:?}"));
                }
            }
        }
    }

    // (c3)
    for c in &words {
        for d in &words {
            if c.len() + d.len() > max_len {
                continue;
            }
            let cd = [c.as_slice(), d].concat();
            for (i, j) in contractible_pairs(&p, c) {
                let cij = remove_two(c, i, j);
                for x in &carriers[c] {
                    for y in &carriers[d] {
                        let lhs = box_(c, d, x, y).and_then(|xy| zeta(&cd, i, j, &xy));
                        let rhs = zeta(c, i, j, x).and_then(|xi| box_(&cij, d, &xi, y));
                        report.record("(c3)", agree(lhs, rhs), || format!("{c:?} {d:?} ({i},{j}) on {x:?} {y:?}"));
                    }
                }
            }
        }
    }

    if with_unit {
        let e1 = check_e1(alg, &words, &carriers)?;
        report.checked += e1.checked;
        report.skipped += e1.skipped;
        report.violations.extend(e1.violations);
    }
    Ok(report.finish())
}

fn check_e1<A: CircuitAlgebra>(
    alg: &A,
    words: &[Vec<String>],
    carriers: &BTreeMap<Vec<String>, Vec<A::Elem>>,
) -> Result<CheckReport> {
    let p = alg.palette().clone();
    let mut report = CheckReport { exhaustive: true, ..Default::default() };
    for col in p.colours() {
        let eps = match unit_epsilon(alg, col) {
            Ok(e) => e,
            Err(e) => {
                report.violations.push(Violation { law: "(e1)".into(), instance: format!("no ε_{col}: {e}") });
                continue;
            }
        };
        let ce = vec![col.clone(), p.omega(col).to_string()];
        for c in words {
            if c.len() + 2 > alg.bound() {
                continue;
            }
            let m = c.len();
            let cc = [c.as_slice(), &ce].concat();
            for i in (1..=m).filter(|&i| c[i - 1] == *col) {
                // Cyclic shift moving position i to the end.
                let images: Vec<usize> = (0..m).map(|k| if k + 1 == i { m - 1 } else if k + 1 > i { k - 1 } else { k }).collect();
                let shift = ColouredBrauerDiagram::from_permutation(&p, &Permutation::new(images)?, c)?;
                let shift_wd = WiringDiagram::new(shift, vec![m])?;
                for x in &carriers[c] {
                    let lhs = derived_boxtimes(alg, c, &ce, x, &eps).and_then(|y| derived_contraction(alg, &cc, i, m + 2, &y));
                    let rhs = alg.act(&shift_wd, std::slice::from_ref(x));
                    report.record("(e1)", agree(lhs, rhs), || format!("{c:?} position {i} on {x:?}"));
                }
            }
        }
    }
    Ok(report)
}

/// Outcome of a downward check: (c1)–(c3) decide the verdict, and the (e1)
/// probe records whether a unit for `◇` exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DownwardReport {
    pub axioms: CheckReport,
    pub e1_probe: CheckReport,
}

impl DownwardReport {
    pub fn passed(&self) -> bool {
        self.axioms.passed()
    }

    pub fn unital(&self) -> bool {
        self.e1_probe.passed()
    }
}

/// Checks (c1)–(c3) using downward wiring diagrams only, then probes (e1).
pub fn check_downward_algebra<A: CircuitAlgebra>(alg: &A, max_len: usize) -> Result<DownwardReport> {
    let axioms = check_axioms(alg, max_len, false)?;
    let max_len = max_len.min(alg.bound());
    let mut words = Vec::new();
    for len in 0..=max_len {
        words.extend(alg.palette().words(len));
    }
    let mut carriers = BTreeMap::new();
    for w in &words {
        carriers.insert(w.clone(), alg.carrier(w)?);
    }
    let e1_probe = check_e1(alg, &words, &carriers)?.finish();
    Ok(DownwardReport { axioms, e1_probe })
}

#[derive(Serialize, Deserialize)]
struct WiringWire {
    #[serde(flatten)]
    diagram: ColouredBrauerDiagram,
    blocks: Vec<usize>,
}

impl Serialize for WiringDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WiringWire { diagram: self.diagram.clone(), blocks: self.blocks.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WiringDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = WiringWire::deserialize(d)?;
        WiringDiagram::new(w.diagram, w.blocks).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for WiringDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "blocks {:?} {}", self.blocks, self.diagram)
    }
}

/// Word keys in JSON: colours joined by commas, the empty word as `""`.
pub fn word_key(w: &[String]) -> String {
    w.join(",")
}

pub fn parse_word_key(s: &str) -> Vec<String> {
    if s.is_empty() {
        vec![]
    } else {
        s.split(',').map(|x| x.trim().to_string()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct ActionWire {
    wd: WiringDiagram,
    table: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct TableWire {
    palette: Palette,
    bound: usize,
    carriers: BTreeMap<String, Vec<String>>,
    action: Vec<ActionWire>,
}

impl Serialize for TableAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableWire {
            palette: self.palette.clone(),
            bound: self.bound,
            carriers: self.carriers.iter().map(|(w, xs)| (word_key(w), xs.clone())).collect(),
            action: self
                .action
                .iter()
                .map(|(wd, t)| ActionWire {
                    wd: wd.clone(),
                    table: t
                        .iter()
                        .map(|(xs, y)| {
                            let mut row = xs.clone();
                            row.push(y.clone());
                            row
                        })
                        .collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TableAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = TableWire::deserialize(d)?;
        let carriers = w.carriers.iter().map(|(k, v)| (parse_word_key(k), v.clone())).collect();
        let mut action = BTreeMap::new();
        for a in w.action {
            let mut table = BTreeMap::new();
            for mut row in a.table {
                let y = row.pop().ok_or_else(|| serde::de::Error::custom("empty table row"))?;
                table.insert(row, y);
            }
            action.insert(a.wd, table);
        }
        TableAlgebra::new(w.palette, w.bound, carriers, action).map_err(serde::de::Error::custom)
    }
}

impl Serialize for FreeElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut v = serde_json::to_value(&self.shape).map_err(serde::ser::Error::custom)?;
        if let Value::Object(map) = &mut v {
            map.insert("generators".into(), serde_json::to_value(&self.gens).map_err(serde::ser::Error::custom)?);
        }
        v.serialize(s)
    }
}
