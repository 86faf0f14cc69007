//! Involutive palettes and coloured Brauer diagrams.
//!
//! A colouring assigns a colour to every boundary point so that the two ends
//! of a strand carry colours exchanged by the involution `ω`, and assigns an
//! `ω`-orbit to every bubble. The input type of `f : m -> n` reads
//! `ω λ(s_i)`, the output type reads `λ(t_j)`.
//!
//! ```
//! use brauerkit::coloured::{ColouredBrauerDiagram, Palette};
//!
//! let p = Palette::oriented();
//! let cap = ColouredBrauerDiagram::cap(&p, "+").unwrap();
//! let cup = ColouredBrauerDiagram::cup(&p, "+").unwrap();
//! let loop_ = cap.then(&cup).unwrap();
//! assert_eq!(loop_.bubbles(), &[vec!["+".to_string(), "-".to_string()]]);
//! ```

use crate::brauer::{BrauerDiagram, Point};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// An `ω`-orbit, as its sorted list of one or two colours.
pub type Orbit = Vec<String>;

/// A finite colour set with an involution.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Palette {
    colours: Vec<String>,
    omega: BTreeMap<String, String>,
}

impl Palette {
    /// Validates that `omega` is an involution of `colours`.
    pub fn new(colours: Vec<String>, omega: BTreeMap<String, String>) -> Result<Self> {
        let mut sorted = colours.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != colours.len() {
            return Err(Error::DuplicateLabel("palette colour".into()));
        }
        for c in &sorted {
            let w = omega.get(c).ok_or_else(|| Error::InvalidColouring(format!("ω undefined on {c}")))?;
            if omega.get(w) != Some(c) {
                return Err(Error::InvalidColouring(format!("ω is not an involution at {c}")));
            }
        }
        if omega.len() != sorted.len() {
            return Err(Error::InvalidColouring("ω is defined outside the palette".into()));
        }
        Ok(Palette { colours: sorted, omega })
    }

    /// Builds a palette from `ω`-pairs; `[c, c]` marks a fixed colour.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<Self> {
        let mut omega = BTreeMap::new();
        for &(a, b) in pairs {
            for (x, y) in [(a, b), (b, a)] {
                if let Some(old) = omega.insert(x.to_string(), y.to_string()) {
                    if old != y {
                        return Err(Error::InvalidColouring(format!("ω assigned twice at {x}")));
                    }
                }
            }
        }
        Palette::new(omega.keys().cloned().collect(), omega)
    }

    /// One colour fixed by `ω`.
    pub fn monochrome(c: &str) -> Self {
        Palette::from_pairs(&[(c, c)]).expect("valid palette")
    }

    /// The palette `{+, -}` with `ω` exchanging the two.
    pub fn oriented() -> Self {
        Palette::from_pairs(&[("+", "-")]).expect("valid palette")
    }

    pub fn colours(&self) -> &[String] {
        &self.colours
    }

    pub fn contains(&self, c: &str) -> bool {
        self.omega.contains_key(c)
    }

    /// `ω(c)`; panics on a colour outside the palette.
    pub fn omega(&self, c: &str) -> &str {
        self.omega.get(c).unwrap_or_else(|| panic!("colour {c} not in palette"))
    }

    pub fn omega_word(&self, w: &[String]) -> Vec<String> {
        w.iter().map(|c| self.omega(c).to_string()).collect()
    }

    /// `ω` applied letterwise to the reversed word: the dual type.
    pub fn dual_word(&self, w: &[String]) -> Vec<String> {
        w.iter().rev().map(|c| self.omega(c).to_string()).collect()
    }

    pub fn orbit(&self, c: &str) -> Orbit {
        let w = self.omega(c).to_string();
        let mut o = vec![c.to_string(), w];
        o.sort();
        o.dedup();
        o
    }

    /// All `ω`-orbits, sorted.
    pub fn orbits(&self) -> Vec<Orbit> {
        let mut out: Vec<Orbit> = self.colours.iter().map(|c| self.orbit(c)).collect();
        out.dedup();
        out
    }

    pub fn is_oriented(&self) -> bool {
        *self == Palette::oriented()
    }

    fn check_word(&self, w: &[String]) -> Result<()> {
        match w.iter().find(|c| !self.contains(c)) {
            Some(c) => Err(Error::InvalidColouring(format!("colour {c} not in palette"))),
            None => Ok(()),
        }
    }

    /// All words of length `len`, lexicographic.
    pub fn words(&self, len: usize) -> Vec<Vec<String>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    self.colours.iter().map(move |c| {
                        let mut w2 = w.clone();
                        w2.push(c.clone());
                        w2
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct PaletteWire {
    colours: Vec<String>,
    omega: Vec<[String; 2]>,
}

impl Serialize for Palette {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PaletteWire {
            colours: self.colours.clone(),
            omega: self
                .omega
                .iter()
                .filter(|(a, b)| a <= b)
                .map(|(a, b)| [a.clone(), b.clone()])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Palette {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = PaletteWire::deserialize(d)?;
        let mut omega = BTreeMap::new();
        for [a, b] in &w.omega {
            omega.insert(a.clone(), b.clone());
            omega.insert(b.clone(), a.clone());
        }
        Palette::new(w.colours, omega).map_err(serde::de::Error::custom)
    }
}

/// A Brauer diagram with a palette-valued colouring.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColouredBrauerDiagram {
    palette: Palette,
    base: BrauerDiagram,
    /// Colour of each boundary point, indexed like the base partner table.
    colour: Vec<String>,
    /// Orbit of each bubble, sorted.
    bubbles: Vec<Orbit>,
}

impl ColouredBrauerDiagram {
    /// Validates a colouring of `base`.
    pub fn new(palette: &Palette, base: BrauerDiagram, colour: Vec<String>, mut bubbles: Vec<Orbit>) -> Result<Self> {
        if colour.len() != base.m() + base.n() {
            return Err(Error::InvalidColouring(format!(
                "{} colours for {} boundary points",
                colour.len(),
                base.m() + base.n()
            )));
        }
        palette.check_word(&colour)?;
        for (i, &p) in base.partner_table().iter().enumerate() {
            if colour[p] != palette.omega(&colour[i]) {
                return Err(Error::InvalidColouring(format!(
                    "{} has colour {} but its partner {} has {}",
                    base.point(i),
                    colour[i],
                    base.point(p),
                    colour[p]
                )));
            }
        }
        if BigUint::from(bubbles.len()) != *base.closed() {
            return Err(Error::InvalidColouring(format!(
                "{} bubble colours for {} bubbles",
                bubbles.len(),
                base.closed()
            )));
        }
        let orbits = palette.orbits();
        for b in bubbles.iter_mut() {
            b.sort();
            if !orbits.contains(b) {
                return Err(Error::InvalidColouring(format!("{b:?} is not an ω-orbit")));
            }
        }
        bubbles.sort();
        Ok(ColouredBrauerDiagram { palette: palette.clone(), base, colour, bubbles })
    }

    /// Colours the boundary from a map keyed by `s1`, `t1`, ...
    pub fn from_map(
        palette: &Palette,
        base: BrauerDiagram,
        colours: &BTreeMap<String, String>,
        bubbles: Vec<Orbit>,
    ) -> Result<Self> {
        let colour = (0..base.m() + base.n())
            .map(|i| {
                let label = base.point(i).to_string();
                colours.get(&label).cloned().ok_or(Error::UncoveredLabel(label))
            })
            .collect::<Result<Vec<_>>>()?;
        if colours.len() != colour.len() {
            return Err(Error::InvalidColouring("colour map names unknown boundary points".into()));
        }
        Self::new(palette, base, colour, bubbles)
    }

    /// The identity on a colour word.
    pub fn identity(palette: &Palette, word: &[String]) -> Result<Self> {
        Self::from_permutation(palette, &Permutation::identity(word.len()), word)
    }

    /// The permutation diagram with input type `word`; item `i` moves to `σ(i)`.
    pub fn from_permutation(palette: &Palette, sigma: &Permutation, word: &[String]) -> Result<Self> {
        palette.check_word(word)?;
        let mut colour = palette.omega_word(word);
        colour.extend(sigma.permute(word));
        Self::new(palette, BrauerDiagram::from_permutation(sigma), colour, vec![])
    }

    /// `∩_c : () -> (c, ωc)`.
    pub fn cap(palette: &Palette, c: &str) -> Result<Self> {
        palette.check_word(&[c.to_string()])?;
        let colour = vec![c.to_string(), palette.omega(c).to_string()];
        Self::new(palette, BrauerDiagram::cap(), colour, vec![])
    }

    /// `∪_c : (c, ωc) -> ()`.
    pub fn cup(palette: &Palette, c: &str) -> Result<Self> {
        palette.check_word(&[c.to_string()])?;
        let colour = vec![palette.omega(c).to_string(), c.to_string()];
        Self::new(palette, BrauerDiagram::cup(), colour, vec![])
    }

    /// `∩_w = coev(id_w) : () -> (w, ←ωw)`.
    pub fn cap_word(palette: &Palette, w: &[String]) -> Result<Self> {
        Ok(Self::identity(palette, w)?.coev())
    }

    /// `∪_w = ev(id_w) : (←ωw, w) -> ()`.
    pub fn cup_word(palette: &Palette, w: &[String]) -> Result<Self> {
        Ok(Self::identity(palette, w)?.ev())
    }

    /// The empty diagram.
    pub fn empty(palette: &Palette) -> Self {
        Self::new(palette, BrauerDiagram::empty(), vec![], vec![]).expect("empty colouring")
    }

    /// Bubbles only, coloured by the given orbits.
    pub fn bubbles_of(palette: &Palette, orbits: Vec<Orbit>) -> Result<Self> {
        let base = BrauerDiagram::bubbles(0, 0, BigUint::from(orbits.len()));
        Self::new(palette, base, vec![], orbits)
    }

    pub fn palette(&self) -> &Palette {
        &self.palette
    }

    pub fn base(&self) -> &BrauerDiagram {
        &self.base
    }

    pub fn m(&self) -> usize {
        self.base.m()
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn bubbles(&self) -> &[Orbit] {
        &self.bubbles
    }

    /// Colour of a boundary point.
    pub fn colour_of(&self, p: Point) -> &str {
        &self.colour[self.base.index(p)]
    }

    /// Colours indexed like the base partner table.
    pub fn colours(&self) -> &[String] {
        &self.colour
    }

    /// `ω λ(s_1), …, ω λ(s_m)`.
    pub fn input_type(&self) -> Vec<String> {
        self.palette.omega_word(&self.colour[..self.m()])
    }

    /// `λ(t_1), …, λ(t_n)`.
    pub fn output_type(&self) -> Vec<String> {
        self.colour[self.m()..].to_vec()
    }

    /// `(input type, output type)`.
    pub fn typed_boundary(&self) -> (Vec<String>, Vec<String>) {
        (self.input_type(), self.output_type())
    }

    /// Drops the colouring.
    pub fn forget(&self) -> BrauerDiagram {
        self.base.clone()
    }

    fn same_palette(&self, other: &Self) -> Result<()> {
        if self.palette != other.palette {
            return Err(Error::PaletteMismatch("diagrams use different palettes".into()));
        }
        Ok(())
    }

    /// `self.then(g)` is `g ∘ self`.
    pub fn then(&self, g: &ColouredBrauerDiagram) -> Result<Self> {
        self.same_palette(g)?;
        let (out, inp) = (self.output_type(), g.input_type());
        if out != inp {
            return Err(Error::TypeMismatch(format!("output {out:?} does not match input {inp:?}")));
        }
        let (base, cycles) = self.base.then_traced(&g.base)?;
        let m = self.m();
        let mut colour = self.colour[..m].to_vec();
        colour.extend_from_slice(&g.colour[g.m()..]);
        let mut bubbles = self.bubbles.clone();
        bubbles.extend_from_slice(&g.bubbles);
        for cycle in cycles {
            let orbit = self.palette.orbit(&out[cycle[0]]);
            if let Some(&bad) = cycle.iter().find(|&&i| self.palette.orbit(&out[i]) != orbit) {
                return Err(Error::IncoherentCycleColour(format!("middle point {}", bad + 1)));
            }
            bubbles.push(orbit);
        }
        bubbles.sort();
        Ok(ColouredBrauerDiagram { palette: self.palette.clone(), base, colour, bubbles })
    }

    /// `compose(f, g)` is `g ∘ f`.
    pub fn compose(f: &Self, g: &Self) -> Result<Self> {
        f.then(g)
    }

    /// Horizontal composition; types concatenate.
    pub fn tensor(&self, g: &ColouredBrauerDiagram) -> Result<Self> {
        self.same_palette(g)?;
        let base = self.base.tensor(&g.base);
        let (m1, m2) = (self.m(), g.m());
        let mut colour = self.colour[..m1].to_vec();
        colour.extend_from_slice(&g.colour[..m2]);
        colour.extend_from_slice(&self.colour[m1..]);
        colour.extend_from_slice(&g.colour[m2..]);
        let mut bubbles = self.bubbles.clone();
        bubbles.extend_from_slice(&g.bubbles);
        bubbles.sort();
        Ok(ColouredBrauerDiagram { palette: self.palette.clone(), base, colour, bubbles })
    }

    /// Tensor of a list of diagrams over one palette.
    pub fn tensor_all(palette: &Palette, ds: &[ColouredBrauerDiagram]) -> Result<Self> {
        ds.iter().try_fold(Self::empty(palette), |acc, d| acc.tensor(d))
    }

    fn relabel(&self, new_m: usize, new_n: usize, map: &[usize]) -> Self {
        let base = self.base.relabel(new_m, new_n, map);
        let mut colour = vec![String::new(); map.len()];
        for (i, &j) in map.iter().enumerate() {
            colour[j] = self.colour[i].clone();
        }
        ColouredBrauerDiagram { palette: self.palette.clone(), base, colour, bubbles: self.bubbles.clone() }
    }

    /// The dual `c̄ -> d̄` becomes `←ωd̄ -> ←ωc̄`.
    pub fn dual(&self) -> Self {
        let (m, n) = (self.m(), self.n());
        self.relabel(n, m, &BrauerDiagram::dual_map(m, n))
    }

    pub fn ev(&self) -> Self {
        let (m, n) = (self.m(), self.n());
        self.relabel(m + n, 0, &BrauerDiagram::ev_map(m, n))
    }

    pub fn coev(&self) -> Self {
        let (m, n) = (self.m(), self.n());
        self.relabel(0, m + n, &BrauerDiagram::coev_map(m, n))
    }

    /// Pushes the colouring along an involution-preserving map of palettes.
    pub fn pushforward(&self, target: &Palette, map: &BTreeMap<String, String>) -> Result<Self> {
        for c in self.palette.colours() {
            let img = map.get(c).ok_or_else(|| Error::InvalidColouring(format!("map undefined on {c}")))?;
            if !target.contains(img) {
                return Err(Error::InvalidColouring(format!("{img} is not in the target palette")));
            }
            if map.get(self.palette.omega(c)).map(String::as_str) != Some(target.omega(img)) {
                return Err(Error::InvalidColouring(format!("map does not commute with ω at {c}")));
            }
        }
        let colour = self.colour.iter().map(|c| map[c].clone()).collect();
        let bubbles = self.bubbles.iter().map(|o| target.orbit(&map[&o[0]])).collect();
        Self::new(target, self.base.clone(), colour, bubbles)
    }

    /// Every colouring of open diagrams with the given types, with at most
    /// `max_closed` bubbles (bubble colourings as multisets of orbits).
    pub fn enumerate_typed(palette: &Palette, input: &[String], output: &[String], max_closed: usize) -> Result<Vec<Self>> {
        palette.check_word(input)?;
        palette.check_word(output)?;
        let (m, n) = (input.len(), output.len());
        let mut colour = palette.omega_word(input);
        colour.extend_from_slice(output);
        let mut bubble_sets = Vec::new();
        for k in 0..=max_closed {
            bubble_sets.extend(multisets(&palette.orbits(), k));
        }
        let mut out = Vec::new();
        for base in BrauerDiagram::enumerate_open(m, n) {
            if base.partner_table().iter().enumerate().any(|(i, &p)| colour[p] != palette.omega(&colour[i])) {
                continue;
            }
            for bs in &bubble_sets {
                let b = base.with_closed(BigUint::from(bs.len()));
                out.push(ColouredBrauerDiagram { palette: palette.clone(), base: b, colour: colour.clone(), bubbles: bs.clone() });
            }
        }
        Ok(out)
    }

    /// A random coloured diagram `m -> n`.
    pub fn random<R: Rng>(palette: &Palette, m: usize, n: usize, max_closed: usize, rng: &mut R) -> Result<Self> {
        let base = BrauerDiagram::random(m, n, max_closed, rng)?;
        let mut colour = vec![String::new(); m + n];
        for (a, b) in base.pairs() {
            let c = palette.colours().choose(rng).expect("non-empty palette").clone();
            colour[base.index(b)] = palette.omega(&c).to_string();
            colour[base.index(a)] = c;
        }
        let orbits = palette.orbits();
        let k = base.closed().to_usize().expect("small bubble count");
        let bubbles = (0..k).map(|_| orbits.choose(rng).expect("non-empty palette").clone()).collect();
        Self::new(palette, base, colour, bubbles)
    }

    /// A random coloured diagram with a prescribed input type.
    ///
    /// Each source is paired with a later source of matching colour with
    /// probability one half when possible, otherwise sent to a target;
    /// `extra_caps` random caps are added and targets shuffled.
    pub fn random_with_input<R: Rng>(
        palette: &Palette,
        input: &[String],
        extra_caps: usize,
        max_closed: usize,
        rng: &mut R,
    ) -> Result<Self> {
        palette.check_word(input)?;
        let m = input.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(rng);
        let mut used = vec![false; m];
        let mut pairs: Vec<(Option<usize>, Option<usize>)> = Vec::new();
        let mut target_colours: Vec<String> = Vec::new();
        for (k, &i) in order.iter().enumerate() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let want = palette.omega(&input[i]);
            let partner = order[k + 1..].iter().copied().find(|&j| !used[j] && input[j] == want);
            match partner {
                Some(j) if rng.gen_bool(0.5) => {
                    used[j] = true;
                    pairs.push((Some(i), Some(j)));
                }
                _ => {
                    pairs.push((Some(i), None));
                    target_colours.push(input[i].clone());
                }
            }
        }
        for _ in 0..extra_caps {
            let c = palette.colours().choose(rng).expect("non-empty palette").clone();
            pairs.push((None, None));
            target_colours.push(c.clone());
            target_colours.push(palette.omega(&c).to_string());
        }
        // Assign target positions: the t-ends in creation order, then shuffle.
        let n = target_colours.len();
        let mut slot: Vec<usize> = (0..n).collect();
        slot.shuffle(rng);
        let mut colour = palette.omega_word(input);
        colour.resize(m + n, String::new());
        let mut point_pairs = Vec::new();
        let mut next = 0;
        for (a, b) in pairs {
            match (a, b) {
                (Some(i), Some(j)) => point_pairs.push((Point::Source(i), Point::Source(j))),
                (Some(i), None) => {
                    let t = slot[next];
                    colour[m + t] = target_colours[next].clone();
                    next += 1;
                    point_pairs.push((Point::Source(i), Point::Target(t)));
                }
                _ => {
                    let (t1, t2) = (slot[next], slot[next + 1]);
                    colour[m + t1] = target_colours[next].clone();
                    colour[m + t2] = target_colours[next + 1].clone();
                    next += 2;
                    point_pairs.push((Point::Target(t1), Point::Target(t2)));
                }
            }
        }
        let k = rng.gen_range(0..=max_closed);
        let orbits = palette.orbits();
        let bubbles = (0..k).map(|_| orbits.choose(rng).expect("non-empty palette").clone()).collect();
        let base = BrauerDiagram::new(m, n, &point_pairs, BigUint::from(k))?;
        Self::new(palette, base, colour, bubbles)
    }

    /// Splits an oriented diagram into shuffles and a walled core.
    ///
    /// With `π_c` and `π_d` the stable sorts putting `+` before `-` on the
    /// input and output types, the core is `π_d ∘ f ∘ π_c⁻¹`.
    pub fn to_walled_normal_form(&self) -> Result<WalledForm> {
        if !self.palette.is_oriented() {
            return Err(Error::NotOriented("palette is not {+, -} with ω swapping".into()));
        }
        let (c, d) = self.typed_boundary();
        let pi_c = Permutation::stable_sort(&c);
        let pi_d = Permutation::stable_sort(&d);
        let sorted_c = pi_c.permute(&c);
        let unsort = Self::from_permutation(&self.palette, &pi_c.inverse(), &sorted_c)?;
        let sort = Self::from_permutation(&self.palette, &pi_d, &d)?;
        let core = unsort.then(self)?.then(&sort)?;
        let count = |w: &[String], s: &str| w.iter().filter(|x| *x == s).count();
        let wall = (count(&c, "+"), count(&c, "-"), count(&d, "+"), count(&d, "-"));
        Ok(WalledForm { source_shuffle: pi_c, target_shuffle: pi_d, core, wall })
    }
}

/// The walled normal form of an oriented diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalledForm {
    pub source_shuffle: Permutation,
    pub target_shuffle: Permutation,
    pub core: ColouredBrauerDiagram,
    /// `(#+ inputs, #- inputs, #+ outputs, #- outputs)`.
    pub wall: (usize, usize, usize, usize),
}

/// Multisets of size `k` over `items`, as sorted lists.
pub fn multisets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn rec<T: Clone>(items: &[T], start: usize, k: usize, acc: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if k == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..items.len() {
            acc.push(items[i].clone());
            rec(items, i, k - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, 0, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Serialize, Deserialize)]
struct ColouredWire {
    #[serde(flatten)]
    base: BrauerDiagram,
    palette: Palette,
    boundary_colour: BTreeMap<String, String>,
    bubbles: Vec<Orbit>,
}

impl Serialize for ColouredBrauerDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ColouredWire {
            base: self.base.clone(),
            palette: self.palette.clone(),
            boundary_colour: (0..self.colour.len())
                .map(|i| (self.base.point(i).to_string(), self.colour[i].clone()))
                .collect(),
            bubbles: self.bubbles.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColouredBrauerDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = ColouredWire::deserialize(d)?;
        ColouredBrauerDiagram::from_map(&w.palette, w.base, &w.boundary_colour, w.bubbles)
            .map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ColouredBrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, o) = self.typed_boundary();
        write!(f, "({}) -> ({}) {}", i.join(","), o.join(","), self.base)?;
        if !self.bubbles.is_empty() {
            let b: Vec<String> = self.bubbles.iter().map(|o| format!("{{{}}}", o.join(","))).collect();
            write!(f, " bubbles {}", b.join(" "))?;
        }
        Ok(())
    }
}
