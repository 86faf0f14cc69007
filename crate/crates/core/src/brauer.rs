//! The monochrome Brauer category.
//!
//! A diagram `m -> n` pairs the boundary points `s_1..s_m, t_1..t_n` and
//! records a number of closed components ("bubbles"). Vertical composition
//! `g ∘ f` glues the targets of `f` to the sources of `g`; every cycle that
//! closes up in the middle adds one bubble. Tensor places diagrams side by
//! side.
//!
//! ```
//! use brauerkit::brauer::BrauerDiagram;
//!
//! let bubble = BrauerDiagram::cap().then(&BrauerDiagram::cup()).unwrap();
//! assert_eq!(bubble, BrauerDiagram::bubbles(0, 0, 1u32.into()));
//! ```

use crate::error::{Error, Result};
use crate::pairing::{all_matchings, Pairing};
use crate::perm::Permutation;
use crate::util::biguint_json;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A boundary point: `Source(i)` is `s_{i+1}`, `Target(j)` is `t_{j+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Source(usize),
    Target(usize),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Source(i) => write!(f, "s{}", i + 1),
            Point::Target(j) => write!(f, "t{}", j + 1),
        }
    }
}

impl FromStr for Point {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad boundary label {s:?}"));
        let (kind, num) = s.split_at(s.char_indices().nth(1).map(|(i, _)| i).ok_or_else(bad)?);
        let k: usize = num.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        match kind {
            "s" => Ok(Point::Source(k - 1)),
            "t" => Ok(Point::Target(k - 1)),
            _ => Err(bad()),
        }
    }
}

/// A Brauer diagram `m -> n`: a perfect matching of `S ⊔ T` and a bubble count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BrauerDiagram {
    m: usize,
    n: usize,
    /// Partner of each point; sources occupy `0..m`, targets `m..m+n`.
    partner: Vec<usize>,
    closed: BigUint,
}

/// A closed cycle created by composition, listed by the middle positions
/// (targets of the first diagram) it passes through.
pub type MiddleCycle = Vec<usize>;

impl BrauerDiagram {
    /// Builds a diagram from its partner table, validating the involution.
    pub fn from_partner(m: usize, n: usize, partner: Vec<usize>, closed: BigUint) -> Result<Self> {
        if partner.len() != m + n {
            return Err(Error::ArityMismatch(format!(
                "partner table has {} entries for {m}+{n} points",
                partner.len()
            )));
        }
        for (i, &p) in partner.iter().enumerate() {
            let label = Self::point_of(m, i).to_string();
            if p >= m + n {
                return Err(Error::UnknownLabel(format!("partner of {label}")));
            }
            if p == i {
                return Err(Error::SelfPair(label));
            }
            if partner[p] != i {
                return Err(Error::DuplicateLabel(Self::point_of(m, p).to_string()));
            }
        }
        Ok(BrauerDiagram { m, n, partner, closed })
    }

    /// Builds a diagram from explicit pairs of boundary points.
    pub fn new(m: usize, n: usize, pairs: &[(Point, Point)], closed: BigUint) -> Result<Self> {
        let mut partner = vec![usize::MAX; m + n];
        for &(a, b) in pairs {
            let (ia, ib) = (Self::index_of(m, n, a)?, Self::index_of(m, n, b)?);
            if ia == ib {
                return Err(Error::SelfPair(a.to_string()));
            }
            for (i, p) in [(ia, a), (ib, b)] {
                if partner[i] != usize::MAX {
                    return Err(Error::DuplicateLabel(p.to_string()));
                }
            }
            partner[ia] = ib;
            partner[ib] = ia;
        }
        if let Some(i) = partner.iter().position(|&p| p == usize::MAX) {
            return Err(Error::UncoveredLabel(Self::point_of(m, i).to_string()));
        }
        Ok(BrauerDiagram { m, n, partner, closed })
    }

    fn index_of(m: usize, n: usize, p: Point) -> Result<usize> {
        match p {
            Point::Source(i) if i < m => Ok(i),
            Point::Target(j) if j < n => Ok(m + j),
            _ => Err(Error::UnknownLabel(p.to_string())),
        }
    }

    fn point_of(m: usize, i: usize) -> Point {
        if i < m {
            Point::Source(i)
        } else {
            Point::Target(i - m)
        }
    }

    /// The identity `n -> n`, pairing `s_i` with `t_i`.
    pub fn identity(n: usize) -> Self {
        let partner = (0..n).map(|i| n + i).chain(0..n).collect();
        BrauerDiagram { m: n, n, partner, closed: BigUint::zero() }
    }

    /// The open diagram pairing `s_i` with `t_{σ(i)}`.
    pub fn from_permutation(sigma: &Permutation) -> Self {
        let n = sigma.len();
        let mut partner = vec![0; 2 * n];
        for i in 0..n {
            let j = sigma.apply(i);
            partner[i] = n + j;
            partner[n + j] = i;
        }
        BrauerDiagram { m: n, n, partner, closed: BigUint::zero() }
    }

    /// The diagram `0 -> 0` with `k` bubbles.
    pub fn bubbles(m: usize, n: usize, k: BigUint) -> Self {
        assert!(m == 0 && n == 0, "bubbles live in BD(0,0)");
        BrauerDiagram { m: 0, n: 0, partner: vec![], closed: k }
    }

    /// The empty open diagram `0 -> 0`.
    pub fn empty() -> Self {
        Self::identity(0)
    }

    /// `∪ : 2 -> 0`, pairing `s_1` with `s_2`.
    pub fn cup() -> Self {
        BrauerDiagram { m: 2, n: 0, partner: vec![1, 0], closed: BigUint::zero() }
    }

    /// `∩ : 0 -> 2`, pairing `t_1` with `t_2`.
    pub fn cap() -> Self {
        BrauerDiagram { m: 0, n: 2, partner: vec![1, 0], closed: BigUint::zero() }
    }

    /// The symmetry `σ_2 : 2 -> 2`.
    pub fn sigma2() -> Self {
        Self::from_permutation(&Permutation::transposition(2, 0, 1))
    }

    /// `∪_n = ev(id_n) : 2n -> 0`.
    pub fn cup_n(n: usize) -> Self {
        Self::identity(n).ev()
    }

    /// `∩_n = coev(id_n) : 0 -> 2n`.
    pub fn cap_n(n: usize) -> Self {
        Self::identity(n).coev()
    }

    /// The zigzags `(id_n ⊗ ∩_n) ; (∪_n ⊗ id_n)` and `(∩_n ⊗ id_n) ; (id_n ⊗ ∪_n)`.
    /// The triangle identities say both are `id_n`.
    pub fn zigzags(n: usize) -> (Self, Self) {
        let id = Self::identity(n);
        let left = id.tensor(&Self::cap_n(n)).then(&Self::cup_n(n).tensor(&id)).expect("arities match");
        let right = Self::cap_n(n).tensor(&id).then(&id.tensor(&Self::cup_n(n))).expect("arities match");
        (left, right)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn closed(&self) -> &BigUint {
        &self.closed
    }

    /// Partner table indexed by point position (sources, then targets).
    pub fn partner_table(&self) -> &[usize] {
        &self.partner
    }

    pub fn partner(&self, p: Point) -> Point {
        let i = Self::index_of(self.m, self.n, p).expect("point of this diagram");
        Self::point_of(self.m, self.partner[i])
    }

    /// Position of a point in the partner table.
    pub fn index(&self, p: Point) -> usize {
        Self::index_of(self.m, self.n, p).expect("point of this diagram")
    }

    pub fn point(&self, index: usize) -> Point {
        Self::point_of(self.m, index)
    }

    /// The same pairing with a different bubble count.
    pub fn with_closed(&self, closed: BigUint) -> Self {
        BrauerDiagram { closed, ..self.clone() }
    }

    /// The pairs, each ordered and listed by least point.
    pub fn pairs(&self) -> Vec<(Point, Point)> {
        (0..self.m + self.n)
            .filter(|&i| i < self.partner[i])
            .map(|i| (self.point(i), self.point(self.partner[i])))
            .collect()
    }

    /// The underlying pairing on the labels `s1.., t1..`.
    pub fn to_pairing(&self) -> Pairing<Point> {
        Pairing::from_pairs(self.pairs()).expect("diagram pairs form a pairing")
    }

    /// Number of connected components, `(m+n)/2 + closed`.
    pub fn num_components(&self) -> BigUint {
        BigUint::from((self.m + self.n) / 2) + &self.closed
    }

    /// `self.then(g)` is `g ∘ self`: first `self`, then `g`.
    pub fn then(&self, g: &BrauerDiagram) -> Result<Self> {
        Ok(self.then_traced(g)?.0)
    }

    /// `compose(f, g)` is `g ∘ f`.
    pub fn compose(f: &BrauerDiagram, g: &BrauerDiagram) -> Result<Self> {
        f.then(g)
    }

    /// Composition that also reports each newly closed cycle.
    pub fn then_traced(&self, g: &BrauerDiagram) -> Result<(Self, Vec<MiddleCycle>)> {
        let f = self;
        if f.n != g.m {
            return Err(Error::ArityMismatch(format!(
                "cannot compose {}->{} with {}->{}",
                f.m, f.n, g.m, g.n
            )));
        }
        let (m, n, p) = (f.m, f.n, g.n);
        let mut visited = vec![false; n];
        let mut partner = vec![usize::MAX; m + p];

        // Follow an alternating chain. `in_f` says which diagram the current
        // position refers to; the result is a point of the composite.
        let walk = |mut pos: usize, mut in_f: bool, visited: &mut Vec<bool>| -> usize {
            loop {
                if in_f {
                    if pos < m {
                        return pos;
                    }
                    let mid = pos - m;
                    visited[mid] = true;
                    pos = g.partner[mid];
                    in_f = false;
                } else {
                    if pos >= n {
                        return m + (pos - n);
                    }
                    visited[pos] = true;
                    pos = f.partner[m + pos];
                    in_f = true;
                }
            }
        };
        for start in 0..m + p {
            if partner[start] != usize::MAX {
                continue;
            }
            let end = if start < m {
                walk(f.partner[start], true, &mut visited)
            } else {
                walk(g.partner[n + start - m], false, &mut visited)
            };
            partner[start] = end;
            partner[end] = start;
        }
        let mut cycles = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut mid = start;
            loop {
                visited[mid] = true;
                cycle.push(mid);
                let other = g.partner[mid];
                debug_assert!(other < n);
                visited[other] = true;
                cycle.push(other);
                let back = f.partner[m + other] - m;
                if back == start {
                    break;
                }
                mid = back;
            }
            cycles.push(cycle);
        }
        let closed = &f.closed + &g.closed + BigUint::from(cycles.len());
        Ok((BrauerDiagram { m, n: p, partner, closed }, cycles))
    }

    /// Horizontal composition `self ⊕ g`.
    pub fn tensor(&self, g: &BrauerDiagram) -> Self {
        let (m1, n1, m2, n2) = (self.m, self.n, g.m, g.n);
        let m = m1 + m2;
        let remap1 = |i: usize| if i < m1 { i } else { m + (i - m1) };
        let remap2 = |i: usize| if i < m2 { m1 + i } else { m + n1 + (i - m2) };
        let mut partner = vec![0; m + n1 + n2];
        for i in 0..m1 + n1 {
            partner[remap1(i)] = remap1(self.partner[i]);
        }
        for i in 0..m2 + n2 {
            partner[remap2(i)] = remap2(g.partner[i]);
        }
        BrauerDiagram { m, n: n1 + n2, partner, closed: &self.closed + &g.closed }
    }

    /// Tensor of a list of diagrams; the empty list gives `(∅, 0)`.
    pub fn tensor_all<'a, I: IntoIterator<Item = &'a BrauerDiagram>>(ds: I) -> Self {
        ds.into_iter().fold(Self::empty(), |acc, d| acc.tensor(d))
    }

    /// Applies a point relabelling: old position `i` goes to `map[i]`.
    pub fn relabel(&self, new_m: usize, new_n: usize, map: &[usize]) -> Self {
        let mut partner = vec![0; new_m + new_n];
        for i in 0..self.m + self.n {
            partner[map[i]] = map[self.partner[i]];
        }
        BrauerDiagram { m: new_m, n: new_n, partner, closed: self.closed.clone() }
    }

    /// Relabelling used by [`ev`](Self::ev): sources become `t_n..t_1, s_1..s_m`.
    pub fn ev_map(m: usize, n: usize) -> Vec<usize> {
        (0..m).map(|i| n + i).chain((0..n).map(|j| n - 1 - j)).collect()
    }

    /// Relabelling used by [`coev`](Self::coev): targets become `t_1..t_n, s_m..s_1`.
    pub fn coev_map(m: usize, n: usize) -> Vec<usize> {
        (0..m).map(|i| n + (m - 1 - i)).chain(0..n).collect()
    }

    /// Relabelling used by [`dual`](Self::dual): sources `t_n..t_1`, targets `s_m..s_1`.
    pub fn dual_map(m: usize, n: usize) -> Vec<usize> {
        (0..m).map(|i| n + (m - 1 - i)).chain((0..n).map(|j| n - 1 - j)).collect()
    }

    /// `ev(f) : n+m -> 0`.
    pub fn ev(&self) -> Self {
        self.relabel(self.m + self.n, 0, &Self::ev_map(self.m, self.n))
    }

    /// `coev(f) : 0 -> n+m`.
    pub fn coev(&self) -> Self {
        self.relabel(0, self.m + self.n, &Self::coev_map(self.m, self.n))
    }

    /// The dual `f* : n -> m`.
    pub fn dual(&self) -> Self {
        self.relabel(self.n, self.m, &Self::dual_map(self.m, self.n))
    }

    pub fn is_open(&self) -> bool {
        self.closed.is_zero()
    }

    /// Open, and every target is paired with a source.
    pub fn is_downward(&self) -> bool {
        self.is_open() && (self.m..self.m + self.n).all(|i| self.partner[i] < self.m)
    }

    /// The dual is downward.
    pub fn is_upward(&self) -> bool {
        self.dual().is_downward()
    }

    /// Factors the diagram into layered generator slices.
    ///
    /// Layout: a slice of caps (pairs of targets, by least target, then
    /// bubbles), a run of permutation slices, and a slice of cups (pairs of
    /// sources, then bubbles). Fails only when the bubble count does not fit
    /// in memory.
    pub fn factor_generators(&self) -> Result<Word> {
        let (m, n) = (self.m, self.n);
        let k = self
            .closed
            .to_usize()
            .ok_or_else(|| Error::InvalidParameter("too many bubbles to factor".into()))?;
        let mut ss = Vec::new();
        let mut tt = Vec::new();
        for (a, b) in self.pairs() {
            match (a, b) {
                (Point::Source(i), Point::Source(j)) => ss.push((i, j)),
                (Point::Target(i), Point::Target(j)) => tt.push((i, j)),
                _ => {}
            }
        }
        let (a, b) = (ss.len(), tt.len());
        let width = m + 2 * b + 2 * k;
        // Destination slot of each wire before the cup layer.
        let target_slot = |j: usize| 2 * a + 2 * k + j;
        let mut dest = vec![0; width];
        for (i, slot) in dest.iter_mut().enumerate().take(m) {
            *slot = match self.partner(Point::Source(i)) {
                Point::Target(j) => target_slot(j),
                Point::Source(j) => {
                    let q = ss.iter().position(|&(x, y)| x == i.min(j) && y == i.max(j)).expect("ss pair");
                    2 * q + usize::from(i > j)
                }
            };
        }
        for (q, &(x, y)) in tt.iter().enumerate() {
            dest[m + 2 * q] = target_slot(x);
            dest[m + 2 * q + 1] = target_slot(y);
        }
        for r in 0..k {
            dest[m + 2 * b + 2 * r] = 2 * a + 2 * r;
            dest[m + 2 * b + 2 * r + 1] = 2 * a + 2 * r + 1;
        }

        let mut slices = Vec::new();
        if b + k > 0 {
            let mut s = vec![Generator::Id1; m];
            s.extend(std::iter::repeat_n(Generator::Cap, b + k));
            slices.push(s);
        }
        slices.extend(permutation_slices(&dest));
        if a + k > 0 {
            let mut s = vec![Generator::Cup; a + k];
            s.extend(std::iter::repeat_n(Generator::Id1, n));
            slices.push(s);
        }
        if slices.is_empty() {
            slices.push(vec![Generator::Id1; m]);
        }
        Ok(Word { slices })
    }

    /// Boundary lists and components of the cospan presentation.
    pub fn boundary_cospan(&self) -> Cospan {
        Cospan {
            sources: (0..self.m).map(|i| Point::Source(i).to_string()).collect(),
            targets: (0..self.n).map(|j| Point::Target(j).to_string()).collect(),
            components: self.pairs().iter().map(|(a, b)| vec![a.to_string(), b.to_string()]).collect(),
            bubbles: self.closed.clone(),
        }
    }

    /// Every open diagram `m -> n`, in matching-tree order.
    pub fn enumerate_open(m: usize, n: usize) -> Vec<Self> {
        let points: Vec<usize> = (0..m + n).collect();
        all_matchings(&points)
            .into_iter()
            .map(|pairs| {
                let mut partner = vec![0; m + n];
                for (a, b) in pairs {
                    partner[a] = b;
                    partner[b] = a;
                }
                BrauerDiagram { m, n, partner, closed: BigUint::zero() }
            })
            .collect()
    }

    /// Every diagram `m -> n` with at most `max_closed` bubbles.
    pub fn enumerate(m: usize, n: usize, max_closed: usize) -> Vec<Self> {
        let open = Self::enumerate_open(m, n);
        (0..=max_closed)
            .flat_map(|k| open.iter().map(move |d| d.with_closed(BigUint::from(k))))
            .collect()
    }

    /// A uniformly random open diagram; `m + n` must be even.
    pub fn random_open<R: Rng>(m: usize, n: usize, rng: &mut R) -> Result<Self> {
        if !(m + n).is_multiple_of(2) {
            return Err(Error::ArityMismatch(format!("{m}+{n} points cannot be paired")));
        }
        let mut pts: Vec<usize> = (0..m + n).collect();
        pts.shuffle(rng);
        let mut partner = vec![0; m + n];
        for c in pts.chunks(2) {
            partner[c[0]] = c[1];
            partner[c[1]] = c[0];
        }
        Ok(BrauerDiagram { m, n, partner, closed: BigUint::zero() })
    }

    /// A random diagram with a random bubble count in `0..=max_closed`.
    pub fn random<R: Rng>(m: usize, n: usize, max_closed: usize, rng: &mut R) -> Result<Self> {
        let k = rng.gen_range(0..=max_closed);
        Ok(Self::random_open(m, n, rng)?.with_closed(BigUint::from(k)))
    }

    /// Graphviz rendering: sources on top, targets below, bubbles detached.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph brauer {\n  node [shape=point];\n");
        let row = |out: &mut String, name: &str, pts: Vec<Point>| {
            if pts.is_empty() {
                return;
            }
            out.push_str(&format!("  subgraph {name} {{ rank=same;"));
            for p in &pts {
                out.push_str(&format!(" {p} [xlabel=\"{p}\"];"));
            }
            out.push_str(" }\n");
        };
        row(&mut out, "sources", (0..self.m).map(Point::Source).collect());
        row(&mut out, "targets", (0..self.n).map(Point::Target).collect());
        for i in 0..self.m.min(self.n) {
            out.push_str(&format!("  {} -- {} [style=invis];\n", Point::Source(i), Point::Target(i)));
        }
        for (a, b) in self.pairs() {
            out.push_str(&format!("  {a} -- {b};\n"));
        }
        let k = self.closed.to_usize().unwrap_or(usize::MAX).min(64);
        for r in 0..k {
            out.push_str(&format!("  bubble{r} [shape=circle, label=\"\", width=0.3];\n"));
        }
        if BigUint::from(k) < self.closed {
            out.push_str(&format!("  more [shape=plaintext, label=\"+{} bubbles\"];\n", &self.closed - BigUint::from(k)));
        }
        out.push_str("}\n");
        out
    }
}

/// Odd-even transposition sort of wire destinations, one slice per round.
fn permutation_slices(dest: &[usize]) -> Vec<Vec<Generator>> {
    let mut cur = dest.to_vec();
    let w = cur.len();
    let mut slices = Vec::new();
    let mut parity = 0;
    let mut idle_rounds = 0;
    while idle_rounds < 2 {
        let mut swap = vec![false; w];
        let mut any = false;
        let mut k = parity;
        while k + 1 < w {
            if cur[k] > cur[k + 1] {
                cur.swap(k, k + 1);
                swap[k] = true;
                any = true;
            }
            k += 2;
        }
        if any {
            let mut slice = Vec::new();
            let mut i = 0;
            while i < w {
                if swap[i] {
                    slice.push(Generator::Sigma2);
                    i += 2;
                } else {
                    slice.push(Generator::Id1);
                    i += 1;
                }
            }
            slices.push(slice);
            idle_rounds = 0;
        } else {
            idle_rounds += 1;
        }
        parity ^= 1;
    }
    slices
}

/// The cospan presentation of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cospan {
    pub sources: Vec<String>,
    pub targets: Vec<String>,
    pub components: Vec<Vec<String>>,
    #[serde(with = "biguint_json")]
    pub bubbles: BigUint,
}

/// The four generating diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    #[serde(rename = "id_1")]
    Id1,
    #[serde(rename = "sigma_2")]
    Sigma2,
    #[serde(rename = "cup")]
    Cup,
    #[serde(rename = "cap")]
    Cap,
}

impl Generator {
    pub fn diagram(self) -> BrauerDiagram {
        match self {
            Generator::Id1 => BrauerDiagram::identity(1),
            Generator::Sigma2 => BrauerDiagram::sigma2(),
            Generator::Cup => BrauerDiagram::cup(),
            Generator::Cap => BrauerDiagram::cap(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::Id1 => "id_1",
            Generator::Sigma2 => "sigma_2",
            Generator::Cup => "cup",
            Generator::Cap => "cap",
        }
    }
}

/// A layered word: slices read top to bottom, each a tensor of generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    pub slices: Vec<Vec<Generator>>,
}

impl Word {
    /// Evaluates the word; the first slice is applied first.
    pub fn evaluate(&self) -> Result<BrauerDiagram> {
        let mut layers = self.slices.iter().map(|s| {
            BrauerDiagram::tensor_all(s.iter().map(|g| g.diagram()).collect::<Vec<_>>().iter())
        });
        let first = layers.next().ok_or_else(|| Error::ArityMismatch("empty word".into()))?;
        layers.try_fold(first, |acc, layer| acc.then(&layer))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slices: Vec<String> = self
            .slices
            .iter()
            .map(|s| {
                if s.is_empty() {
                    "id_0".to_string()
                } else {
                    s.iter().map(|g| g.name()).collect::<Vec<_>>().join(" + ")
                }
            })
            .collect();
        write!(f, "{}", slices.join(" ; "))
    }
}

/// Parses a generator expression such as `id_1 + cup ; cap + id_1`.
///
/// `+` is tensor and binds tighter than `;`, which composes top to bottom.
/// Atoms: `id_N`, `id`, `sigma_2`, `sigma`, `cup`, `cap`, `cup_N`, `cap_N`,
/// `bubble`, `empty`, and parenthesised expressions.
pub fn parse_word(src: &str) -> Result<BrauerDiagram> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let d = p.seq()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("unexpected {:?}", p.tokens[p.pos])));
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Plus,
    Semi,
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Tok::Plus);
            }
            ';' => {
                chars.next();
                out.push(Tok::Semi);
            }
            '(' => {
                chars.next();
                out.push(Tok::Open);
            }
            ')' => {
                chars.next();
                out.push(Tok::Close);
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(s));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn seq(&mut self) -> Result<BrauerDiagram> {
        let mut acc = self.par()?;
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            let next = self.par()?;
            acc = acc.then(&next)?;
        }
        Ok(acc)
    }

    fn par(&mut self) -> Result<BrauerDiagram> {
        let mut acc = self.atom()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            acc = acc.tensor(&self.atom()?);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<BrauerDiagram> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Open) => {
                self.pos += 1;
                let d = self.seq()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(d)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                generator_atom(&name)
            }
            other => Err(Error::Parse(format!("expected a generator, found {other:?}"))),
        }
    }
}

fn generator_atom(name: &str) -> Result<BrauerDiagram> {
    let indexed = |prefix: &str| -> Option<Result<usize>> {
        name.strip_prefix(prefix)
            .map(|k| k.parse::<usize>().map_err(|_| Error::Parse(format!("bad index in {name:?}"))))
    };
    match name {
        "id" => return Ok(BrauerDiagram::identity(1)),
        "sigma" | "sigma_2" | "swap" => return Ok(BrauerDiagram::sigma2()),
        "cup" => return Ok(BrauerDiagram::cup()),
        "cap" => return Ok(BrauerDiagram::cap()),
        "bubble" => return Ok(BrauerDiagram::bubbles(0, 0, BigUint::from(1u32))),
        "empty" => return Ok(BrauerDiagram::empty()),
        _ => {}
    }
    if let Some(k) = indexed("id_") {
        return Ok(BrauerDiagram::identity(k?));
    }
    if let Some(k) = indexed("cup_") {
        return Ok(BrauerDiagram::cup_n(k?));
    }
    if let Some(k) = indexed("cap_") {
        return Ok(BrauerDiagram::cap_n(k?));
    }
    Err(Error::Parse(format!("unknown generator {name:?}")))
}

#[derive(Serialize, Deserialize)]
struct DiagramWire {
    m: usize,
    n: usize,
    pairs: Vec<[String; 2]>,
    #[serde(with = "biguint_json")]
    closed: BigUint,
}

impl Serialize for BrauerDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramWire {
            m: self.m,
            n: self.n,
            pairs: self.pairs().iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
            closed: self.closed.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BrauerDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = DiagramWire::deserialize(d)?;
        let pairs = w
            .pairs
            .iter()
            .map(|[a, b]| Ok((a.parse::<Point>()?, b.parse::<Point>()?)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        BrauerDiagram::new(w.m, w.n, &pairs, w.closed).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for BrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.pairs().iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "{}->{} [{}] closed {}", self.m, self.n, pairs.join(" "), self.closed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Point::{Source as S, Target as T};

    fn bd(m: usize, n: usize, pairs: &[(Point, Point)], k: u32) -> BrauerDiagram {
        BrauerDiagram::new(m, n, pairs, BigUint::from(k)).unwrap()
    }

    #[test]
    fn identities_and_permutations() {
        assert_eq!(BrauerDiagram::identity(0), bd(0, 0, &[], 0));
        assert_eq!(BrauerDiagram::identity(1), bd(1, 1, &[(S(0), T(0))], 0));
        assert_eq!(BrauerDiagram::sigma2(), bd(2, 2, &[(S(0), T(1)), (S(1), T(0))], 0));
        let cyc = Permutation::new(vec![1, 2, 0]).unwrap();
        assert_eq!(
            BrauerDiagram::from_permutation(&cyc),
            bd(3, 3, &[(S(0), T(1)), (S(1), T(2)), (S(2), T(0))], 0)
        );
    }

    #[test]
    fn traces() {
        let one = BrauerDiagram::cap().then(&BrauerDiagram::cup()).unwrap();
        assert_eq!(one, bd(0, 0, &[], 1));
        let three = BrauerDiagram::cap_n(3).then(&BrauerDiagram::cup_n(3)).unwrap();
        assert_eq!(three, bd(0, 0, &[], 3));
    }

    #[test]
    fn cups_and_caps() {
        assert_eq!(BrauerDiagram::cup_n(1), BrauerDiagram::cup());
        assert_eq!(BrauerDiagram::cap_n(1), BrauerDiagram::cap());
        assert_eq!(BrauerDiagram::cup_n(2), bd(4, 0, &[(S(0), S(3)), (S(1), S(2))], 0));
        assert_eq!(BrauerDiagram::cap_n(0), BrauerDiagram::empty());
        assert_eq!(BrauerDiagram::cup().dual(), BrauerDiagram::cap());
    }

    #[test]
    fn tensor_examples() {
        let cc = BrauerDiagram::cap().tensor(&BrauerDiagram::cap());
        assert_eq!(cc, bd(0, 4, &[(T(0), T(1)), (T(2), T(3))], 0));
        let b = bd(0, 0, &[], 1).tensor(&bd(0, 0, &[], 2));
        assert_eq!(b, bd(0, 0, &[], 3));
    }

    #[test]
    fn directions() {
        let cap = BrauerDiagram::cap();
        assert!(!cap.is_downward());
        assert!(cap.is_upward());
        let s = BrauerDiagram::sigma2();
        assert!(s.is_downward() && s.is_upward());
        let b = bd(0, 0, &[], 1);
        assert!(!b.is_open() && !b.is_downward() && !b.is_upward());
    }

    #[test]
    fn factor_examples() {
        assert_eq!(
            BrauerDiagram::identity(2).factor_generators().unwrap().slices,
            vec![vec![Generator::Id1, Generator::Id1]]
        );
        assert_eq!(
            bd(0, 0, &[], 1).factor_generators().unwrap().slices,
            vec![vec![Generator::Cap], vec![Generator::Cup]]
        );
    }

    #[test]
    fn factor_round_trip_small() {
        for total in (0..=6).step_by(2) {
            for m in 0..=total {
                for d in BrauerDiagram::enumerate(m, total - m, 2) {
                    let w = d.factor_generators().unwrap();
                    assert_eq!(w.evaluate().unwrap(), d, "{w}");
                }
            }
        }
    }

    #[test]
    fn parse_precedence() {
        let d = parse_word("id_1 + cap ; cup + id_1").unwrap();
        assert_eq!(d, BrauerDiagram::identity(1));
        assert_eq!(parse_word("cap ; cup").unwrap(), bd(0, 0, &[], 1));
        assert_eq!(parse_word("(cap ; cup) + (cap ; cup)").unwrap(), bd(0, 0, &[], 2));
        assert!(parse_word("cap ; id_1").is_err());
        assert!(parse_word("cap +").is_err());
    }

    #[test]
    fn cospan_counts() {
        let c = BrauerDiagram::cup_n(2).boundary_cospan();
        assert_eq!(c.components.len(), 2);
        let c = bd(0, 0, &[], 3).boundary_cospan();
        assert!(c.components.is_empty());
        assert_eq!(c.bubbles, BigUint::from(3u32));
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_string(&BrauerDiagram::identity(2)).unwrap();
        assert_eq!(j, r#"{"m":2,"n":2,"pairs":[["s1","t1"],["s2","t2"]],"closed":0}"#);
        let d: BrauerDiagram = serde_json::from_str(&j).unwrap();
        assert_eq!(d, BrauerDiagram::identity(2));
    }

    #[test]
    fn validation() {
        assert!(matches!(
            BrauerDiagram::new(1, 1, &[], BigUint::zero()),
            Err(Error::UncoveredLabel(_))
        ));
        assert!(matches!(
            BrauerDiagram::new(1, 1, &[(S(0), S(0))], BigUint::zero()),
            Err(Error::SelfPair(_))
        ));
        assert!(BrauerDiagram::cup().then(&BrauerDiagram::cup()).is_err());
    }
}
