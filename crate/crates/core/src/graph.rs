//! Graphs with ports in the sense of Joyal and Kock.
//!
//! A graph is a diagram `E <-τ-> E <-s- H -t-> V` of finite sets with `s`
//! injective and `τ` a fixed-point-free involution. Edges outside the image
//! of `s` are ports; a τ-orbit of two ports is a stick component.
//!
//! ```
//! use brauerkit::graph::Graph;
//!
//! let c2 = Graph::corolla(&["1", "2"]).unwrap();
//! let w = c2.glue("1", "2").unwrap();
//! assert!(w.is_isomorphic(&Graph::wheel(1).unwrap()));
//! assert!(w.ports().is_empty());
//! ```

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A finite graph, stored by index with a label for every element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    edges: Vec<String>,
    tau: Vec<usize>,
    halves: Vec<String>,
    s: Vec<usize>,
    t: Vec<usize>,
    vertices: Vec<String>,
    /// Inverse of `s`.
    half_of: Vec<Option<usize>>,
}

fn check_unique(kind: &str, labels: &[String]) -> Result<BTreeMap<String, usize>> {
    let mut map = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        if map.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(format!("{kind} {l}")));
        }
    }
    Ok(map)
}

fn dagger(x: &str) -> String {
    format!("{x}†")
}

impl Graph {
    /// Builds a graph from index data, validating every invariant.
    pub fn from_indices(
        edges: Vec<String>,
        tau: Vec<usize>,
        halves: Vec<String>,
        s: Vec<usize>,
        t: Vec<usize>,
        vertices: Vec<String>,
    ) -> Result<Self> {
        check_unique("edge", &edges)?;
        check_unique("half-edge", &halves)?;
        check_unique("vertex", &vertices)?;
        let ne = edges.len();
        if tau.len() != ne {
            return Err(Error::InvalidGraph("τ must be defined on every edge".into()));
        }
        for (e, &f) in tau.iter().enumerate() {
            if f >= ne || f == e || tau[f] != e {
                return Err(Error::InvalidGraph(format!("τ is not a fixed-point-free involution at {}", edges[e])));
            }
        }
        if s.len() != halves.len() || t.len() != halves.len() {
            return Err(Error::InvalidGraph("s and t must be defined on every half-edge".into()));
        }
        let mut half_of = vec![None; ne];
        for (h, (&e, &v)) in s.iter().zip(&t).enumerate() {
            if e >= ne || v >= vertices.len() {
                return Err(Error::InvalidGraph(format!("half-edge {} points outside the graph", halves[h])));
            }
            if half_of[e].replace(h).is_some() {
                return Err(Error::InvalidGraph(format!("s is not injective at edge {}", edges[e])));
            }
        }
        Ok(Graph { edges, tau, halves, s, t, vertices, half_of })
    }

    /// Builds a graph from labels: τ-orbits as pairs and half-edges as
    /// `(half-edge, edge, vertex)` triples.
    pub fn new(
        edges: Vec<String>,
        tau_pairs: &[(String, String)],
        half_edges: &[(String, String, String)],
        vertices: Vec<String>,
    ) -> Result<Self> {
        let eidx = check_unique("edge", &edges)?;
        let vidx = check_unique("vertex", &vertices)?;
        let look = |m: &BTreeMap<String, usize>, l: &str| m.get(l).copied().ok_or_else(|| Error::UnknownLabel(l.to_string()));
        let mut tau = vec![usize::MAX; edges.len()];
        for (a, b) in tau_pairs {
            let (i, j) = (look(&eidx, a)?, look(&eidx, b)?);
            if tau[i] != usize::MAX || tau[j] != usize::MAX {
                return Err(Error::InvalidGraph(format!("edge listed in two τ-orbits: {a} {b}")));
            }
            tau[i] = j;
            tau[j] = i;
        }
        if let Some(e) = tau.iter().position(|&x| x == usize::MAX) {
            return Err(Error::InvalidGraph(format!("edge {} has no τ-partner", edges[e])));
        }
        let mut halves = Vec::new();
        let mut s = Vec::new();
        let mut t = Vec::new();
        for (h, e, v) in half_edges {
            halves.push(h.clone());
            s.push(look(&eidx, e)?);
            t.push(look(&vidx, v)?);
        }
        Graph::from_indices(edges, tau, halves, s, t, vertices)
    }

    /// The empty graph.
    pub fn empty() -> Self {
        Graph::from_indices(vec![], vec![], vec![], vec![], vec![], vec![]).expect("valid")
    }

    /// The stick `(|)`: two ports `1`, `2` exchanged by τ.
    pub fn stick() -> Self {
        Graph::from_indices(vec!["1".into(), "2".into()], vec![1, 0], vec![], vec![], vec![], vec![]).expect("valid")
    }

    /// The `X`-corolla: edges `X ⊔ X†`, half-edges `X†`, one vertex `*`.
    pub fn corolla<S: AsRef<str>>(xs: &[S]) -> Result<Self> {
        Graph::corolla_named(xs, "*")
    }

    /// The `X`-corolla with a chosen vertex label.
    pub fn corolla_named<S: AsRef<str>>(xs: &[S], vertex: &str) -> Result<Self> {
        let k = xs.len();
        let mut edges: Vec<String> = xs.iter().map(|x| x.as_ref().to_string()).collect();
        edges.extend(xs.iter().map(|x| dagger(x.as_ref())));
        let tau = (0..2 * k).map(|e| if e < k { e + k } else { e - k }).collect();
        let halves = xs.iter().map(|x| dagger(x.as_ref())).collect();
        let s = (k..2 * k).collect();
        Graph::from_indices(edges, tau, halves, s, vec![0; k], vec![vertex.into()])
    }

    /// The corolla on `1..=n`.
    pub fn corolla_n(n: usize) -> Self {
        let xs: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        Graph::corolla(&xs).expect("distinct labels")
    }

    /// The isolated vertex, the corolla on the empty set.
    pub fn isolated_vertex() -> Self {
        Graph::corolla::<&str>(&[]).expect("valid")
    }

    /// The line `L^k`: edges `l_0..l_{2k+1}` with ports `1 = l_0` and
    /// `2 = l_{2k+1}`, τ exchanging `l_{2i}` and `l_{2i+1}`, and vertex `v_i`
    /// incident to `l_{2i-1}` and `l_{2i}`.
    pub fn line(k: usize) -> Self {
        let n = 2 * k + 2;
        let edges: Vec<String> = (0..n)
            .map(|j| if j == 0 { "1".into() } else if j == n - 1 { "2".into() } else { format!("l{j}") })
            .collect();
        let tau = (0..n).map(|j| j ^ 1).collect();
        let mut halves = Vec::new();
        let mut s = Vec::new();
        let mut t = Vec::new();
        for i in 1..=k {
            for j in [2 * i - 1, 2 * i] {
                halves.push(format!("h{j}"));
                s.push(j);
                t.push(i - 1);
            }
        }
        let vertices = (1..=k).map(|i| format!("v{i}")).collect();
        Graph::from_indices(edges, tau, halves, s, t, vertices).expect("valid")
    }

    /// The wheel `W^m`: edges `a_1..a_{2m}` with τ exchanging `a_{2i}` and
    /// `a_{2i+1}` cyclically, and vertex `v_i` incident to `a_{2i-1}`, `a_{2i}`.
    pub fn wheel(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("wheels need at least one vertex".into()));
        }
        let n = 2 * m;
        let edges = (1..=n).map(|j| format!("a{j}")).collect();
        // Index j-1 stores a_j; a_{2i} pairs with a_{2i+1}, a_{2m} with a_1.
        let tau = (0..n)
            .map(|idx| {
                let j = idx + 1;
                let partner = if j % 2 == 0 { if j == n { 1 } else { j + 1 } } else if j == 1 { n } else { j - 1 };
                partner - 1
            })
            .collect();
        let halves = (1..=n).map(|j| format!("h{j}")).collect();
        let s = (0..n).collect();
        let t = (0..n).map(|idx| idx / 2).collect();
        let vertices = (1..=m).map(|i| format!("v{i}")).collect();
        Graph::from_indices(edges, tau, halves, s, t, vertices)
    }

    /// Disjoint union; labels must not clash.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let ne = self.edges.len();
        let nv = self.vertices.len();
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().cloned());
        let mut tau = self.tau.clone();
        tau.extend(other.tau.iter().map(|e| e + ne));
        let mut halves = self.halves.clone();
        halves.extend(other.halves.iter().cloned());
        let mut s = self.s.clone();
        s.extend(other.s.iter().map(|e| e + ne));
        let mut t = self.t.clone();
        t.extend(other.t.iter().map(|v| v + nv));
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().cloned());
        Graph::from_indices(edges, tau, halves, s, t, vertices)
    }

    /// Disjoint union of many graphs.
    pub fn disjoint_union_all(gs: &[Graph]) -> Result<Graph> {
        gs.iter().try_fold(Graph::empty(), |acc, g| acc.disjoint_union(g))
    }

    /// Renames every edge, half-edge and vertex to `prefix` followed by its label.
    pub fn with_prefix(&self, prefix: &str) -> Graph {
        let p = |xs: &[String]| xs.iter().map(|x| format!("{prefix}{x}")).collect();
        Graph { edges: p(&self.edges), halves: p(&self.halves), vertices: p(&self.vertices), ..self.clone() }
    }

    /// Applies label maps; labels missing from a map are kept.
    pub fn relabel(
        &self,
        edges: &BTreeMap<String, String>,
        halves: &BTreeMap<String, String>,
        vertices: &BTreeMap<String, String>,
    ) -> Result<Graph> {
        let f = |xs: &[String], m: &BTreeMap<String, String>| xs.iter().map(|x| m.get(x).cloned().unwrap_or_else(|| x.clone())).collect();
        Graph::from_indices(
            f(&self.edges, edges),
            self.tau.clone(),
            f(&self.halves, halves),
            self.s.clone(),
            self.t.clone(),
            f(&self.vertices, vertices),
        )
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.halves.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.vertices.is_empty()
    }

    pub fn edge_labels(&self) -> &[String] {
        &self.edges
    }

    pub fn half_labels(&self) -> &[String] {
        &self.halves
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge_label(&self, e: usize) -> &str {
        &self.edges[e]
    }

    pub fn half_label(&self, h: usize) -> &str {
        &self.halves[h]
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_index(&self, label: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e == label)
            .ok_or_else(|| Error::UnknownLabel(format!("edge {label}")))
    }

    pub fn half_index(&self, label: &str) -> Result<usize> {
        self.halves
            .iter()
            .position(|e| e == label)
            .ok_or_else(|| Error::UnknownLabel(format!("half-edge {label}")))
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|e| e == label)
            .ok_or_else(|| Error::UnknownLabel(format!("vertex {label}")))
    }

    pub fn tau(&self, e: usize) -> usize {
        self.tau[e]
    }

    pub fn tau_table(&self) -> &[usize] {
        &self.tau
    }

    pub fn s(&self, h: usize) -> usize {
        self.s[h]
    }

    pub fn t(&self, h: usize) -> usize {
        self.t[h]
    }

    /// The half-edge with `s(h) = e`, if `e` is not a port.
    pub fn half_of(&self, e: usize) -> Option<usize> {
        self.half_of[e]
    }

    /// The vertex an edge is incident on, if any.
    pub fn vertex_of(&self, e: usize) -> Option<usize> {
        self.half_of[e].map(|h| self.t[h])
    }

    pub fn is_port(&self, e: usize) -> bool {
        self.half_of[e].is_none()
    }

    /// Ports `E_0`, in edge order.
    pub fn ports(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.is_port(e)).collect()
    }

    pub fn port_labels(&self) -> Vec<String> {
        self.ports().into_iter().map(|e| self.edges[e].clone()).collect()
    }

    /// Inner edges `E_•`: both `e` and `τe` lie in the image of `s`.
    pub fn inner_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| !self.is_port(e) && !self.is_port(self.tau[e]))
            .collect()
    }

    /// τ-orbits as `(e, τe)` with `e < τe`.
    pub fn orbits(&self) -> Vec<(usize, usize)> {
        (0..self.edges.len()).filter(|&e| e < self.tau[e]).map(|e| (e, self.tau[e])).collect()
    }

    /// Stick components: τ-orbits of two ports.
    pub fn stick_components(&self) -> Vec<(usize, usize)> {
        self.orbits()
            .into_iter()
            .filter(|&(a, b)| self.is_port(a) && self.is_port(b))
            .collect()
    }

    /// Half-edges at `v`, in half-edge order.
    pub fn halves_at(&self, v: usize) -> Vec<usize> {
        (0..self.halves.len()).filter(|&h| self.t[h] == v).collect()
    }

    /// Edges `E_v` incident on `v`, in half-edge order.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        self.halves_at(v).into_iter().map(|h| self.s[h]).collect()
    }

    pub fn valency(&self, v: usize) -> usize {
        self.t.iter().filter(|&&x| x == v).count()
    }

    /// Vertices of valency `n`.
    pub fn vertices_of_valency(&self, n: usize) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.valency(v) == n).collect()
    }

    /// Identifies `e1 ~ τe2` and `e2 ~ τe1`, returning `G^{e1‡e2}`.
    ///
    /// When `e1 = τe2` the two ports form a stick component and the graph is
    /// returned unchanged. Otherwise `e1` and `e2` are removed and their
    /// partners become a τ-orbit.
    pub fn glue(&self, e1: &str, e2: &str) -> Result<Graph> {
        let a = self.edge_index(e1).map_err(|_| Error::NotAPort(e1.into()))?;
        let b = self.edge_index(e2).map_err(|_| Error::NotAPort(e2.into()))?;
        self.glue_indices(a, b)
    }

    pub fn glue_indices(&self, a: usize, b: usize) -> Result<Graph> {
        for x in [a, b] {
            if x >= self.edges.len() || !self.is_port(x) {
                return Err(Error::NotAPort(self.edges.get(x).cloned().unwrap_or_else(|| x.to_string())));
            }
        }
        if a == b {
            return Err(Error::SamePort(self.edges[a].clone()));
        }
        if self.tau[a] == b {
            return Ok(self.clone());
        }
        let (ta, tb) = (self.tau[a], self.tau[b]);
        let keep: Vec<usize> = (0..self.edges.len()).filter(|&e| e != a && e != b).collect();
        let mut new_index = vec![usize::MAX; self.edges.len()];
        for (i, &e) in keep.iter().enumerate() {
            new_index[e] = i;
        }
        let tau = keep
            .iter()
            .map(|&e| {
                let f = if e == ta { tb } else if e == tb { ta } else { self.tau[e] };
                new_index[f]
            })
            .collect();
        Graph::from_indices(
            keep.iter().map(|&e| self.edges[e].clone()).collect(),
            tau,
            self.halves.clone(),
            self.s.iter().map(|&e| new_index[e]).collect(),
            self.t.clone(),
            self.vertices.clone(),
        )
    }

    /// Edge and vertex sets of the connected components, ordered by their
    /// smallest element.
    pub fn component_sets(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let ne = self.edges.len();
        let nv = self.vertices.len();
        // Union-find over edges followed by vertices.
        let mut parent: Vec<usize> = (0..ne + nv).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        let union = |p: &mut Vec<usize>, x: usize, y: usize| {
            let (rx, ry) = (find(p, x), find(p, y));
            if rx != ry {
                p[rx.max(ry)] = rx.min(ry);
            }
        };
        for e in 0..ne {
            union(&mut parent, e, self.tau[e]);
        }
        for h in 0..self.halves.len() {
            union(&mut parent, self.s[h], ne + self.t[h]);
        }
        let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for x in 0..ne + nv {
            let r = find(&mut parent, x);
            let g = groups.entry(r).or_default();
            if x < ne {
                g.0.push(x);
            } else {
                g.1.push(x - ne);
            }
        }
        groups.into_values().collect()
    }

    /// The full subgraph on a set of edges and vertices closed under τ, s, t.
    pub fn subgraph(&self, edges: &[usize], vertices: &[usize]) -> Result<Graph> {
        let mut eidx = vec![usize::MAX; self.edges.len()];
        for (i, &e) in edges.iter().enumerate() {
            eidx[e] = i;
        }
        let mut vidx = vec![usize::MAX; self.vertices.len()];
        for (i, &v) in vertices.iter().enumerate() {
            vidx[v] = i;
        }
        let hs: Vec<usize> = (0..self.halves.len()).filter(|&h| vidx[self.t[h]] != usize::MAX).collect();
        if edges.iter().any(|&e| eidx[self.tau[e]] == usize::MAX) || hs.iter().any(|&h| eidx[self.s[h]] == usize::MAX) {
            return Err(Error::InvalidGraph("subgraph is not closed".into()));
        }
        if edges.iter().any(|&e| self.vertex_of(e).is_some_and(|v| vidx[v] == usize::MAX)) {
            return Err(Error::InvalidGraph("subgraph is not closed".into()));
        }
        Graph::from_indices(
            edges.iter().map(|&e| self.edges[e].clone()).collect(),
            edges.iter().map(|&e| eidx[self.tau[e]]).collect(),
            hs.iter().map(|&h| self.halves[h].clone()).collect(),
            hs.iter().map(|&h| eidx[self.s[h]]).collect(),
            hs.iter().map(|&h| vidx[self.t[h]]).collect(),
            vertices.iter().map(|&v| self.vertices[v].clone()).collect(),
        )
    }

    /// Connected components; the empty graph has none.
    pub fn connected_components(&self) -> Vec<Graph> {
        self.component_sets()
            .into_iter()
            .map(|(e, v)| self.subgraph(&e, &v).expect("components are closed"))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.component_sets().len() == 1
    }

    /// The element category, through its essential subcategory.
    pub fn elements(&self) -> Elements {
        let orbits = self.orbits();
        let mut orbit_of = vec![0; self.edges.len()];
        for (i, &(a, b)) in orbits.iter().enumerate() {
            orbit_of[a] = i;
            orbit_of[b] = i;
        }
        let corollas = (0..self.vertices.len()).map(|v| self.incident_edges(v)).collect();
        let morphisms = (0..self.halves.len())
            .map(|h| {
                let e = self.s[h];
                let v = self.t[h];
                let position = self.halves_at(v).iter().position(|&x| x == h).expect("h is at t(h)");
                ElementMorphism { half_edge: h, stick: orbit_of[e], corolla: v, position, flipped: orbits[orbit_of[e]].0 != e }
            })
            .collect();
        Elements { sticks: orbits, corollas, morphisms }
    }

    /// A canonical labelling, invariant under relabelling and, when given,
    /// respecting a colouring of the ports.
    pub fn canonical_labelling(&self, port_colour: Option<&BTreeMap<usize, String>>) -> Labelling {
        let mut comps: Vec<(ComponentCert, Vec<usize>, Vec<usize>)> = self
            .component_sets()
            .into_iter()
            .map(|(es, vs)| canonical_component(self, &es, &vs, port_colour))
            .collect();
        comps.sort_by(|a, b| a.0.cmp(&b.0));
        let mut edge_pos = vec![0; self.edges.len()];
        let mut vertex_pos = vec![0; self.vertices.len()];
        let (mut eo, mut vo) = (0, 0);
        let mut cert = Vec::new();
        for (c, es, vs) in comps {
            for (i, e) in es.into_iter().enumerate() {
                edge_pos[e] = eo + i;
            }
            for (i, v) in vs.into_iter().enumerate() {
                vertex_pos[v] = vo + i;
            }
            eo += c.edges.len();
            vo += c.vertices;
            cert.push(c);
        }
        Labelling { certificate: cert, edge_pos, vertex_pos }
    }

    /// The canonical representative: edges `e0..`, half-edges named after
    /// their edge, vertices `v0..`.
    pub fn canonical_form(&self) -> Graph {
        self.apply_labelling(&self.canonical_labelling(None))
    }

    fn apply_labelling(&self, lab: &Labelling) -> Graph {
        let ne = self.edges.len();
        let mut tau = vec![0; ne];
        for e in 0..ne {
            tau[lab.edge_pos[e]] = lab.edge_pos[self.tau[e]];
        }
        let mut pairs: Vec<(usize, usize)> = (0..self.halves.len())
            .map(|h| (lab.edge_pos[self.s[h]], lab.vertex_pos[self.t[h]]))
            .collect();
        pairs.sort();
        Graph::from_indices(
            (0..ne).map(|i| format!("e{i}")).collect(),
            tau,
            pairs.iter().map(|&(e, _)| format!("h{e}")).collect(),
            pairs.iter().map(|&(e, _)| e).collect(),
            pairs.iter().map(|&(_, v)| v).collect(),
            (0..self.vertices.len()).map(|i| format!("v{i}")).collect(),
        )
        .expect("relabelling preserves validity")
    }

    /// An isomorphism `self -> other`, if one exists.
    pub fn iso(&self, other: &Graph) -> Option<GraphMorphism> {
        let a = self.canonical_labelling(None);
        let b = other.canonical_labelling(None);
        iso_from_labellings(self, other, &a, &b)
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        self.iso(other).is_some()
    }

    /// Graphviz rendering: vertices as dots, τ-orbits as single lines, ports
    /// as stubs ending in an unlabelled point.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n  node [shape=point];\n");
        for (v, l) in self.vertices.iter().enumerate() {
            out.push_str(&format!("  v{v} [xlabel=\"{l}\"];\n"));
        }
        let end = |e: usize, out: &mut String| -> String {
            match self.vertex_of(e) {
                Some(v) => format!("v{v}"),
                None => {
                    out.push_str(&format!("  p{e} [shape=none, label=\"{}\"];\n", self.edges[e]));
                    format!("p{e}")
                }
            }
        };
        for (a, b) in self.orbits() {
            let x = end(a, &mut out);
            let y = end(b, &mut out);
            out.push_str(&format!("  {x} -- {y} [label=\"{}|{}\"];\n", self.edges[a], self.edges[b]));
        }
        out.push_str("}\n");
        out
    }

    /// A random graph with vertex valencies drawn from `0..=max_valency`
    /// and `ports` extra port edges (adjusted by one if parity requires).
    pub fn random<R: Rng>(num_vertices: usize, max_valency: usize, ports: usize, rng: &mut R) -> Graph {
        let vals: Vec<usize> = (0..num_vertices).map(|_| rng.gen_range(0..=max_valency)).collect();
        let total: usize = vals.iter().sum();
        let ports = if (total + ports) % 2 == 1 { ports + 1 } else { ports };
        let ne = total + ports;
        let mut order: Vec<usize> = (0..ne).collect();
        order.shuffle(rng);
        let mut tau = vec![0; ne];
        for pair in order.chunks(2) {
            tau[pair[0]] = pair[1];
            tau[pair[1]] = pair[0];
        }
        let mut t = Vec::new();
        for (v, &d) in vals.iter().enumerate() {
            t.extend(std::iter::repeat_n(v, d));
        }
        Graph::from_indices(
            (0..ne).map(|e| format!("e{e}")).collect(),
            tau,
            (0..total).map(|h| format!("h{h}")).collect(),
            (0..total).collect(),
            t,
            (0..num_vertices).map(|v| format!("v{v}")).collect(),
        )
        .expect("valid by construction")
    }
}

/// Essential data of the element category of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elements {
    /// One stick per τ-orbit `(e, τe)`; the stick's edge `1` goes to `e`.
    pub sticks: Vec<(usize, usize)>,
    /// One corolla per vertex, listing `E_v` in half-edge order.
    pub corollas: Vec<Vec<usize>>,
    /// One morphism per half-edge, from a stick into a corolla.
    pub morphisms: Vec<ElementMorphism>,
}

/// The essential morphism `ch_h` from the stick of `s(h)` into the corolla of `t(h)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementMorphism {
    pub half_edge: usize,
    pub stick: usize,
    pub corolla: usize,
    /// Position of `h` among the half-edges of its vertex.
    pub position: usize,
    /// Whether `s(h)` is the second edge of the stick's orbit.
    pub flipped: bool,
}

impl Elements {
    pub fn num_objects(&self) -> usize {
        self.sticks.len() + self.corollas.len()
    }
}

/// Canonical certificate of a connected component: per edge in canonical
/// order, its port colour, τ-partner and vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentCert {
    pub edges: Vec<(Option<String>, usize, Option<usize>)>,
    pub vertices: usize,
}

/// A canonical labelling: equal certificates mean isomorphic graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labelling {
    pub certificate: Vec<ComponentCert>,
    /// Canonical position of each edge.
    pub edge_pos: Vec<usize>,
    /// Canonical position of each vertex.
    pub vertex_pos: Vec<usize>,
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> (Vec<usize>, usize) {
    let sorted: BTreeSet<T> = sigs.iter().cloned().collect();
    let index: BTreeMap<T, usize> = sorted.into_iter().zip(0..).collect();
    (sigs.iter().map(|s| index[s]).collect(), index.len())
}

struct Local {
    tau: Vec<usize>,
    inc: Vec<Option<usize>>,
    incident: Vec<Vec<usize>>,
}

impl Local {
    fn refine(&self, mut ec: Vec<usize>, mut vc: Vec<usize>) -> (Vec<usize>, Vec<usize>) {
        let (mut ne, mut nv) = (usize::MAX, usize::MAX);
        loop {
            let esig: Vec<(usize, usize, Option<usize>)> = (0..ec.len())
                .map(|e| (ec[e], ec[self.tau[e]], self.inc[e].map(|v| vc[v])))
                .collect();
            let vsig: Vec<(usize, Vec<usize>)> = (0..vc.len())
                .map(|v| {
                    let mut cs: Vec<usize> = self.incident[v].iter().map(|&e| ec[e]).collect();
                    cs.sort();
                    (vc[v], cs)
                })
                .collect();
            let (e2, ce) = rank(&esig);
            let (v2, cv) = rank(&vsig);
            ec = e2;
            vc = v2;
            if ce == ne && cv == nv {
                return (ec, vc);
            }
            ne = ce;
            nv = cv;
        }
    }

    fn leaf(&self, ec: &[usize], colours: &[Option<String>]) -> (ComponentCert, Vec<usize>, Vec<usize>) {
        let n = ec.len();
        let mut order = vec![0; n];
        for (e, &c) in ec.iter().enumerate() {
            order[c] = e;
        }
        // Vertices ordered by their first incident edge.
        let nv = self.incident.len();
        let mut vfirst: Vec<(usize, usize)> = (0..nv)
            .map(|v| (self.incident[v].iter().map(|&e| ec[e]).min().unwrap_or(usize::MAX), v))
            .collect();
        vfirst.sort();
        let mut vpos = vec![0; nv];
        for (i, &(_, v)) in vfirst.iter().enumerate() {
            vpos[v] = i;
        }
        let edges = order
            .iter()
            .map(|&e| (colours[e].clone(), ec[self.tau[e]], self.inc[e].map(|v| vpos[v])))
            .collect();
        let vorder = vfirst.into_iter().map(|(_, v)| v).collect();
        (ComponentCert { edges, vertices: nv }, order, vorder)
    }

    fn search(&self, ec: Vec<usize>, vc: Vec<usize>, colours: &[Option<String>], best: &mut Option<(ComponentCert, Vec<usize>, Vec<usize>)>) {
        let mut count = vec![0usize; ec.len()];
        for &c in &ec {
            count[c] += 1;
        }
        let Some(target) = (0..ec.len()).find(|&c| count[c] > 1) else {
            let leaf = self.leaf(&ec, colours);
            if best.as_ref().is_none_or(|b| leaf.0 < b.0) {
                *best = Some(leaf);
            }
            return;
        };
        for e in (0..ec.len()).filter(|&e| ec[e] == target) {
            let split: Vec<usize> = ec.iter().enumerate().map(|(f, &c)| 2 * c + usize::from(c == target && f != e)).collect();
            let (e2, v2) = self.refine(split, vc.iter().map(|&c| 2 * c).collect());
            self.search(e2, v2, colours, best);
        }
    }
}

/// Returns the certificate and the edges and vertices in canonical order.
fn canonical_component(
    g: &Graph,
    es: &[usize],
    vs: &[usize],
    port_colour: Option<&BTreeMap<usize, String>>,
) -> (ComponentCert, Vec<usize>, Vec<usize>) {
    let mut eloc = BTreeMap::new();
    for (i, &e) in es.iter().enumerate() {
        eloc.insert(e, i);
    }
    let mut vloc = BTreeMap::new();
    for (i, &v) in vs.iter().enumerate() {
        vloc.insert(v, i);
    }
    let local = Local {
        tau: es.iter().map(|&e| eloc[&g.tau[e]]).collect(),
        inc: es.iter().map(|&e| g.vertex_of(e).map(|v| vloc[&v])).collect(),
        incident: vs.iter().map(|&v| g.incident_edges(v).iter().map(|e| eloc[e]).collect()).collect(),
    };
    let colours: Vec<Option<String>> = es.iter().map(|e| port_colour.and_then(|m| m.get(e).cloned())).collect();
    let init_e: Vec<(Option<String>, bool)> = es.iter().zip(&colours).map(|(&e, c)| (c.clone(), g.is_port(e))).collect();
    let init_v: Vec<usize> = vs.iter().map(|&v| g.valency(v)).collect();
    let (ec, _) = rank(&init_e);
    let (vc, _) = rank(&init_v);
    let (ec, vc) = local.refine(ec, vc);
    let mut best = None;
    local.search(ec, vc, &colours, &mut best);
    let (cert, eorder, vorder) = best.expect("at least one leaf");
    (cert, eorder.into_iter().map(|i| es[i]).collect(), vorder.into_iter().map(|i| vs[i]).collect())
}

fn iso_from_labellings(g: &Graph, h: &Graph, a: &Labelling, b: &Labelling) -> Option<GraphMorphism> {
    if a.certificate != b.certificate {
        return None;
    }
    let mut inv_e = vec![0; h.num_edges()];
    for (e, &p) in b.edge_pos.iter().enumerate() {
        inv_e[p] = e;
    }
    let mut inv_v = vec![0; h.num_vertices()];
    for (v, &p) in b.vertex_pos.iter().enumerate() {
        inv_v[p] = v;
    }
    let edge_map: Vec<usize> = a.edge_pos.iter().map(|&p| inv_e[p]).collect();
    let vertex_map: Vec<usize> = a.vertex_pos.iter().map(|&p| inv_v[p]).collect();
    let half_map = (0..g.num_half_edges())
        .map(|x| h.half_of(edge_map[g.s(x)]).expect("certificates agree"))
        .collect();
    Some(GraphMorphism::new(g.clone(), h.clone(), edge_map, half_map, vertex_map).expect("certificates agree"))
}

/// A morphism of graphs: maps commuting with τ, s and t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMorphism {
    source: Graph,
    target: Graph,
    edge_map: Vec<usize>,
    half_map: Vec<usize>,
    vertex_map: Vec<usize>,
}

impl GraphMorphism {
    /// Validates that the maps are total and commute with τ, s and t.
    pub fn new(source: Graph, target: Graph, edge_map: Vec<usize>, half_map: Vec<usize>, vertex_map: Vec<usize>) -> Result<Self> {
        if edge_map.len() != source.num_edges()
            || half_map.len() != source.num_half_edges()
            || vertex_map.len() != source.num_vertices()
            || edge_map.iter().any(|&e| e >= target.num_edges())
            || half_map.iter().any(|&h| h >= target.num_half_edges())
            || vertex_map.iter().any(|&v| v >= target.num_vertices())
        {
            return Err(Error::NotAMorphism("maps are not total".into()));
        }
        for e in 0..source.num_edges() {
            if edge_map[source.tau(e)] != target.tau(edge_map[e]) {
                return Err(Error::NotAMorphism(format!("τ square fails at edge {}", source.edge_label(e))));
            }
        }
        for h in 0..source.num_half_edges() {
            if target.s(half_map[h]) != edge_map[source.s(h)] {
                return Err(Error::NotAMorphism(format!("s square fails at half-edge {}", source.half_label(h))));
            }
            if target.t(half_map[h]) != vertex_map[source.t(h)] {
                return Err(Error::NotAMorphism(format!("t square fails at half-edge {}", source.half_label(h))));
            }
        }
        Ok(GraphMorphism { source, target, edge_map, half_map, vertex_map })
    }

    /// Builds a morphism from label maps. Half-edges are determined by edges.
    pub fn from_labels(
        source: &Graph,
        target: &Graph,
        edges: &BTreeMap<String, String>,
        vertices: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let look = |m: &BTreeMap<String, String>, l: &str| m.get(l).cloned().ok_or_else(|| Error::NotAMorphism(format!("{l} is not mapped")));
        let edge_map = source
            .edge_labels()
            .iter()
            .map(|e| target.edge_index(&look(edges, e)?))
            .collect::<Result<Vec<_>>>()?;
        let vertex_map = source
            .vertex_labels()
            .iter()
            .map(|v| target.vertex_index(&look(vertices, v)?))
            .collect::<Result<Vec<_>>>()?;
        let half_map = (0..source.num_half_edges())
            .map(|h| {
                target
                    .half_of(edge_map[source.s(h)])
                    .ok_or_else(|| Error::NotAMorphism(format!("half-edge {} lands on a port", source.half_label(h))))
            })
            .collect::<Result<Vec<_>>>()?;
        GraphMorphism::new(source.clone(), target.clone(), edge_map, half_map, vertex_map)
    }

    pub fn identity(g: &Graph) -> Self {
        GraphMorphism {
            source: g.clone(),
            target: g.clone(),
            edge_map: (0..g.num_edges()).collect(),
            half_map: (0..g.num_half_edges()).collect(),
            vertex_map: (0..g.num_vertices()).collect(),
        }
    }

    /// `ch_e : (|) -> G`, sending `1` to `e` and `2` to `τe`.
    pub fn choose(g: &Graph, e: usize) -> Self {
        GraphMorphism {
            source: Graph::stick(),
            target: g.clone(),
            edge_map: vec![e, g.tau(e)],
            half_map: vec![],
            vertex_map: vec![],
        }
    }

    /// The neighbourhood corolla `C_v` of a vertex and `es_v : C_v -> G`.
    ///
    /// `C_v` has edges `E_v ⊔ E_v†` labelled as in `G` (with `†` appended for
    /// ports); `e ∈ E_v` maps to `e` and `e†` to `τe`.
    pub fn essential(g: &Graph, v: usize) -> Self {
        let ev = g.incident_edges(v);
        let labels: Vec<String> = ev.iter().map(|&e| g.edge_label(e).to_string()).collect();
        let k = ev.len();
        let mut edges: Vec<String> = labels.iter().map(|l| dagger(l)).collect();
        edges.extend(labels.iter().cloned());
        let c = Graph::from_indices(
            edges,
            (0..2 * k).map(|e| if e < k { e + k } else { e - k }).collect(),
            g.halves_at(v).iter().map(|&h| g.half_label(h).to_string()).collect(),
            (k..2 * k).collect(),
            vec![0; k],
            vec![g.vertex_label(v).to_string()],
        )
        .expect("corolla");
        let mut edge_map: Vec<usize> = ev.iter().map(|&e| g.tau(e)).collect();
        edge_map.extend(ev.iter().copied());
        GraphMorphism { source: c, target: g.clone(), edge_map, half_map: g.halves_at(v), vertex_map: vec![v] }
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.edge_map
    }

    pub fn half_map(&self) -> &[usize] {
        &self.half_map
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &GraphMorphism) -> Result<GraphMorphism> {
        if self.target != g.source {
            return Err(Error::NotAMorphism("composable morphisms must share a graph".into()));
        }
        Ok(GraphMorphism {
            source: self.source.clone(),
            target: g.target.clone(),
            edge_map: self.edge_map.iter().map(|&e| g.edge_map[e]).collect(),
            half_map: self.half_map.iter().map(|&h| g.half_map[h]).collect(),
            vertex_map: self.vertex_map.iter().map(|&v| g.vertex_map[v]).collect(),
        })
    }

    /// Étale: every vertex fibre `H_v -> H'_{f(v)}` is a bijection.
    pub fn is_etale(&self) -> bool {
        (0..self.source.num_vertices()).all(|v| {
            let image: BTreeSet<usize> = self.source.halves_at(v).iter().map(|&h| self.half_map[h]).collect();
            let fibre = self.target.halves_at(self.vertex_map[v]);
            image.len() == self.source.valency(v) && image.len() == fibre.len()
        })
    }

    /// Embedding: étale, injective on vertices and half-edges, injective on
    /// the stick components, whose image misses the rest of the image.
    pub fn is_embedding(&self) -> bool {
        if !self.is_etale() {
            return false;
        }
        let injective = |m: &[usize]| m.iter().collect::<BTreeSet<_>>().len() == m.len();
        if !injective(&self.vertex_map) || !injective(&self.half_map) {
            return false;
        }
        let sticks: BTreeSet<usize> = self.source.stick_components().into_iter().flat_map(|(a, b)| [a, b]).collect();
        let stick_image: Vec<usize> = sticks.iter().map(|&e| self.edge_map[e]).collect();
        if !injective(&stick_image) {
            return false;
        }
        let stick_image: BTreeSet<usize> = stick_image.into_iter().collect();
        (0..self.source.num_edges())
            .filter(|e| !sticks.contains(e))
            .all(|e| !stick_image.contains(&self.edge_map[e]))
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<GraphMorphism> {
        if !self.is_iso() {
            return Err(Error::NotAMorphism("only isomorphisms have inverses".into()));
        }
        let inv = |m: &[usize]| {
            let mut r = vec![0; m.len()];
            for (i, &j) in m.iter().enumerate() {
                r[j] = i;
            }
            r
        };
        Ok(GraphMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            edge_map: inv(&self.edge_map),
            half_map: inv(&self.half_map),
            vertex_map: inv(&self.vertex_map),
        })
    }

    pub fn is_iso(&self) -> bool {
        let bij = |m: &[usize], n: usize| m.len() == n && m.iter().collect::<BTreeSet<_>>().len() == n;
        bij(&self.edge_map, self.target.num_edges())
            && bij(&self.half_map, self.target.num_half_edges())
            && bij(&self.vertex_map, self.target.num_vertices())
    }
}

/// A graph whose ports are labelled bijectively by a finite set `X`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XGraph {
    graph: Graph,
    /// Port label to element of `X`.
    rho: BTreeMap<String, String>,
}

impl XGraph {
    pub fn new(graph: Graph, rho: BTreeMap<String, String>) -> Result<Self> {
        let ports: BTreeSet<String> = graph.port_labels().into_iter().collect();
        let keys: BTreeSet<String> = rho.keys().cloned().collect();
        if ports != keys {
            return Err(Error::BoundaryMismatch(format!("ρ is defined on {keys:?}, ports are {ports:?}")));
        }
        let values: BTreeSet<&String> = rho.values().collect();
        if values.len() != rho.len() {
            return Err(Error::BoundaryMismatch("ρ is not injective".into()));
        }
        Ok(XGraph { graph, rho })
    }

    /// Labels every port by its own name.
    pub fn identity(graph: Graph) -> Self {
        let rho = graph.port_labels().into_iter().map(|p| (p.clone(), p)).collect();
        XGraph { graph, rho }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rho(&self) -> &BTreeMap<String, String> {
        &self.rho
    }

    /// The labelling set `X`.
    pub fn boundary(&self) -> BTreeSet<String> {
        self.rho.values().cloned().collect()
    }

    /// The port edge carrying label `x`.
    pub fn port_for(&self, x: &str) -> Option<usize> {
        self.rho
            .iter()
            .find(|(_, v)| v.as_str() == x)
            .and_then(|(p, _)| self.graph.edge_index(p).ok())
    }

    /// Admissible: no stick components.
    pub fn is_admissible(&self) -> bool {
        self.graph.stick_components().is_empty()
    }

    fn colour_map(&self) -> BTreeMap<usize, String> {
        self.rho
            .iter()
            .map(|(p, x)| (self.graph.edge_index(p).expect("validated"), x.clone()))
            .collect()
    }

    pub fn canonical_labelling(&self) -> Labelling {
        self.graph.canonical_labelling(Some(&self.colour_map()))
    }

    /// Canonical representative with ports labelled by `X` itself.
    pub fn canonical_form(&self) -> XGraph {
        let lab = self.canonical_labelling();
        let g = self.graph.apply_labelling(&lab);
        let rho = self
            .colour_map()
            .into_iter()
            .map(|(e, x)| (format!("e{}", lab.edge_pos[e]), x))
            .collect();
        XGraph { graph: g, rho }
    }
}

/// A port-preserving isomorphism between `X`-graphs, if one exists.
pub fn x_iso(a: &XGraph, b: &XGraph) -> Option<GraphMorphism> {
    if a.boundary() != b.boundary() {
        return None;
    }
    iso_from_labellings(&a.graph, &b.graph, &a.canonical_labelling(), &b.canonical_labelling())
}

/// Every port-preserving isomorphism between `X`-graphs.
pub fn x_isos(a: &XGraph, b: &XGraph) -> Vec<GraphMorphism> {
    if a.boundary() != b.boundary() || a.canonical_labelling().certificate != b.canonical_labelling().certificate {
        return Vec::new();
    }
    all_isos(&a.graph, &b.graph, &a.colour_map(), &b.colour_map())
}

/// Port-preserving automorphisms of an `X`-graph.
pub fn automorphisms(x: &XGraph) -> Vec<GraphMorphism> {
    x_isos(x, x)
}

#[derive(Clone)]
struct IsoState {
    edge: Vec<Option<usize>>,
    edge_used: Vec<bool>,
    vertex: Vec<Option<usize>>,
    vertex_used: Vec<bool>,
}

/// Backtracking search for all isomorphisms `g -> h` matching port colours.
fn all_isos(g: &Graph, h: &Graph, cg: &BTreeMap<usize, String>, ch: &BTreeMap<usize, String>) -> Vec<GraphMorphism> {
    if g.num_edges() != h.num_edges() || g.num_vertices() != h.num_vertices() || g.num_half_edges() != h.num_half_edges() {
        return Vec::new();
    }
    let state = IsoState {
        edge: vec![None; g.num_edges()],
        edge_used: vec![false; h.num_edges()],
        vertex: vec![None; g.num_vertices()],
        vertex_used: vec![false; h.num_vertices()],
    };
    let mut out = Vec::new();
    iso_search(g, h, cg, ch, state, &mut out);
    out
}

fn assign_edge(g: &Graph, h: &Graph, cg: &BTreeMap<usize, String>, ch: &BTreeMap<usize, String>, st: &mut IsoState, e: usize, f: usize) -> bool {
    let mut stack = vec![(e, f)];
    while let Some((e, f)) = stack.pop() {
        match st.edge[e] {
            Some(x) if x == f => continue,
            Some(_) => return false,
            None => {}
        }
        if st.edge_used[f] || g.is_port(e) != h.is_port(f) || cg.get(&e) != ch.get(&f) {
            return false;
        }
        st.edge[e] = Some(f);
        st.edge_used[f] = true;
        stack.push((g.tau(e), h.tau(f)));
        if let (Some(v), Some(w)) = (g.vertex_of(e), h.vertex_of(f)) {
            match st.vertex[v] {
                Some(x) if x == w => {}
                Some(_) => return false,
                None => {
                    if st.vertex_used[w] || g.valency(v) != h.valency(w) {
                        return false;
                    }
                    st.vertex[v] = Some(w);
                    st.vertex_used[w] = true;
                }
            }
        }
    }
    true
}

fn iso_search(g: &Graph, h: &Graph, cg: &BTreeMap<usize, String>, ch: &BTreeMap<usize, String>, st: IsoState, out: &mut Vec<GraphMorphism>) {
    // Prefer an unmapped edge at an already mapped vertex, then ports, then anything.
    let pick = (0..g.num_edges())
        .filter(|&e| st.edge[e].is_none())
        .min_by_key(|&e| match g.vertex_of(e) {
            Some(v) if st.vertex[v].is_some() => 0,
            _ if g.is_port(e) => 1,
            _ => 2,
        });
    if let Some(e) = pick {
        let candidates: Vec<usize> = match g.vertex_of(e).and_then(|v| st.vertex[v]) {
            Some(w) => h.incident_edges(w),
            None => (0..h.num_edges()).collect(),
        };
        for f in candidates {
            if st.edge_used[f] {
                continue;
            }
            let mut next = st.clone();
            if assign_edge(g, h, cg, ch, &mut next, e, f) {
                iso_search(g, h, cg, ch, next, out);
            }
        }
        return;
    }
    // Only isolated vertices remain.
    let Some(v) = (0..g.num_vertices()).find(|&v| st.vertex[v].is_none()) else {
        let edge_map: Vec<usize> = st.edge.iter().map(|x| x.expect("complete")).collect();
        let vertex_map: Vec<usize> = st.vertex.iter().map(|x| x.expect("complete")).collect();
        let half_map = (0..g.num_half_edges())
            .map(|x| h.half_of(edge_map[g.s(x)]).expect("ports match"))
            .collect();
        out.push(GraphMorphism::new(g.clone(), h.clone(), edge_map, half_map, vertex_map).expect("search keeps squares"));
        return;
    };
    for w in 0..h.num_vertices() {
        if !st.vertex_used[w] && h.valency(w) == 0 {
            let mut next = st.clone();
            next.vertex[v] = Some(w);
            next.vertex_used[w] = true;
            iso_search(g, h, cg, ch, next, out);
        }
    }
}

#[derive(Serialize, Deserialize)]
struct HalfWire {
    id: String,
    edge: String,
    vertex: String,
}

#[derive(Serialize, Deserialize)]
struct GraphWire {
    edges: Vec<String>,
    tau: Vec<(String, String)>,
    half_edges: Vec<HalfWire>,
    vertices: Vec<String>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphWire {
            edges: self.edges.clone(),
            tau: self.orbits().into_iter().map(|(a, b)| (self.edges[a].clone(), self.edges[b].clone())).collect(),
            half_edges: (0..self.halves.len())
                .map(|h| HalfWire {
                    id: self.halves[h].clone(),
                    edge: self.edges[self.s[h]].clone(),
                    vertex: self.vertices[self.t[h]].clone(),
                })
                .collect(),
            vertices: self.vertices.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = GraphWire::deserialize(d)?;
        let halves: Vec<(String, String, String)> = w.half_edges.into_iter().map(|h| (h.id, h.edge, h.vertex)).collect();
        Graph::new(w.edges, &w.tau, &halves, w.vertices).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct XGraphWire {
    graph: Graph,
    rho: BTreeMap<String, String>,
}

impl Serialize for XGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        XGraphWire { graph: self.graph.clone(), rho: self.rho.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for XGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = XGraphWire::deserialize(d)?;
        XGraph::new(w.graph, w.rho).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orbits: Vec<String> = self
            .orbits()
            .into_iter()
            .map(|(a, b)| format!("{}~{}", self.edges[a], self.edges[b]))
            .collect();
        let halves: Vec<String> = (0..self.halves.len())
            .map(|h| format!("{}@{}", self.edges[self.s[h]], self.vertices[self.t[h]]))
            .collect();
        write!(f, "E[{}] H[{}] V[{}]", orbits.join(" "), halves.join(" "), self.vertices.join(" "))
    }
}

impl fmt::Display for XGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rho: Vec<String> = self.rho.iter().map(|(p, x)| format!("{p}->{x}")).collect();
        write!(f, "{} ρ[{}]", self.graph, rho.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rng_from_seed;

    fn shuffled(g: &Graph, seed: u64) -> Graph {
        let mut rng = rng_from_seed(seed);
        let mut pe: Vec<usize> = (0..g.num_edges()).collect();
        pe.shuffle(&mut rng);
        let mut pv: Vec<usize> = (0..g.num_vertices()).collect();
        pv.shuffle(&mut rng);
        let mut inv = vec![0; pe.len()];
        for (i, &p) in pe.iter().enumerate() {
            inv[p] = i;
        }
        let mut vinv = vec![0; pv.len()];
        for (i, &p) in pv.iter().enumerate() {
            vinv[p] = i;
        }
        Graph::from_indices(
            (0..g.num_edges()).map(|i| format!("x{i}")).collect(),
            (0..g.num_edges()).map(|i| pe[g.tau(inv[i])]).collect(),
            (0..g.num_half_edges()).map(|h| format!("y{h}")).collect(),
            (0..g.num_half_edges()).map(|h| pe[g.s(h)]).collect(),
            (0..g.num_half_edges()).map(|h| pv[g.t(h)]).collect(),
            (0..g.num_vertices()).map(|v| format!("z{v}")).collect(),
        )
        .unwrap()
    }

    #[test]
    fn constructor_shapes() {
        let s = Graph::stick();
        assert_eq!((s.num_edges(), s.num_half_edges(), s.num_vertices()), (2, 0, 0));
        let w = Graph::wheel(1).unwrap();
        assert_eq!((w.num_edges(), w.num_vertices()), (2, 1));
        assert!(w.ports().is_empty());
        assert_eq!(w.inner_edges().len(), 2);
        assert_eq!(Graph::line(0), Graph::stick());
        let l3 = Graph::line(3);
        assert_eq!((l3.num_edges(), l3.num_half_edges(), l3.num_vertices()), (8, 6, 3));
        let w4 = Graph::wheel(4).unwrap();
        assert_eq!((w4.num_edges(), w4.num_half_edges(), w4.num_vertices()), (8, 8, 4));
        assert!(w4.vertices_of_valency(2).len() == 4);
        let c0 = Graph::isolated_vertex();
        assert_eq!((c0.num_edges(), c0.num_vertices()), (0, 1));
        assert!(matches!(Graph::wheel(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn gluing_examples() {
        let c2 = Graph::corolla_n(2);
        assert!(c2.glue("1", "2").unwrap().is_isomorphic(&Graph::wheel(1).unwrap()));
        assert_eq!(Graph::stick().glue("1", "2").unwrap(), Graph::stick());
        let d = Graph::corolla_named(&["x1", "x2"], "u").unwrap().disjoint_union(&Graph::corolla_named(&["y1", "y2", "y3"], "w").unwrap()).unwrap();
        let m = d.glue("x1", "y1").unwrap();
        assert_eq!(m.num_vertices(), 2);
        assert_eq!(m.inner_edges().len(), 2);
        assert_eq!(m.ports().len(), 3);
        assert!(matches!(c2.glue("1", "1"), Err(Error::SamePort(_))));
        assert!(matches!(c2.glue("1†", "2"), Err(Error::NotAPort(_))));
    }

    #[test]
    fn line_induction() {
        for k in 0..4 {
            let c2 = Graph::corolla(&["a", "b"]).unwrap();
            let g = Graph::line(k).disjoint_union(&c2).unwrap().glue("2", "a").unwrap();
            assert!(g.is_isomorphic(&Graph::line(k + 1)), "k = {k}");
        }
    }

    #[test]
    fn components() {
        let g = Graph::stick().disjoint_union(&Graph::wheel(2).unwrap()).unwrap();
        assert_eq!(g.connected_components().len(), 2);
        assert!(!Graph::empty().is_connected());
        assert!(Graph::empty().connected_components().is_empty());
        for k in 0..4 {
            assert!(Graph::line(k).is_connected());
            assert!(Graph::wheel(k + 1).unwrap().is_connected());
        }
    }

    #[test]
    fn elements_counts() {
        let w = Graph::wheel(1).unwrap();
        let el = w.elements();
        assert_eq!((el.sticks.len(), el.corollas.len(), el.morphisms.len()), (1, 1, 2));
        let st = Graph::stick().elements();
        assert_eq!((st.sticks.len(), st.corollas.len()), (1, 0));
    }

    #[test]
    fn canonical_form_is_relabelling_invariant() {
        let mut rng = rng_from_seed(3);
        for seed in 0..100 {
            let g = Graph::random(rng.gen_range(0..4), 3, rng.gen_range(0..3), &mut rng);
            let h = shuffled(&g, seed);
            assert_eq!(g.canonical_form(), h.canonical_form());
            let f = g.iso(&h).unwrap();
            assert!(f.is_iso() && f.is_etale());
        }
        assert!(!Graph::wheel(2).unwrap().is_isomorphic(&Graph::line(2)));
    }

    #[test]
    fn x_iso_respects_labels() {
        let c = Graph::corolla_n(2);
        let a = XGraph::identity(c.clone());
        let swapped: BTreeMap<String, String> = [("1".to_string(), "2".to_string()), ("2".to_string(), "1".to_string())].into();
        let b = XGraph::new(c.clone(), swapped).unwrap();
        assert!(c.is_isomorphic(&c));
        // The corolla's port swap is an automorphism, so both labellings agree.
        assert!(x_iso(&a, &b).is_some());
        let l = Graph::line(2);
        let la = XGraph::identity(l.clone());
        let lb = XGraph::new(l, [("1".to_string(), "2".to_string()), ("2".to_string(), "1".to_string())].into()).unwrap();
        assert!(x_iso(&la, &lb).is_some());
        let d = Graph::corolla_n(2).disjoint_union(&Graph::corolla(&["3"]).unwrap().with_prefix("b")).unwrap();
        let da = XGraph::identity(d.clone());
        let mut rho = da.rho().clone();
        rho.insert("1".into(), "b3".into());
        rho.insert("b3".into(), "1".into());
        let db = XGraph::new(d, rho).unwrap();
        assert!(x_iso(&da, &db).is_none());
    }

    fn brute_force_automorphisms(x: &XGraph) -> usize {
        let g = x.graph();
        let colours = x.colour_map();
        crate::perm::Permutation::all(g.num_edges())
            .into_iter()
            .filter(|p| {
                let f = |e: usize| p.apply(e);
                let mut vmap: BTreeMap<usize, usize> = BTreeMap::new();
                (0..g.num_edges()).all(|e| {
                    f(g.tau(e)) == g.tau(f(e))
                        && colours.get(&e) == colours.get(&f(e))
                        && match (g.vertex_of(e), g.vertex_of(f(e))) {
                            (None, None) => true,
                            (Some(v), Some(w)) => *vmap.entry(v).or_insert(w) == w,
                            _ => false,
                        }
                })
            })
            .count()
    }

    #[test]
    fn automorphism_counts_match_brute_force() {
        let cases = [XGraph::identity(Graph::wheel(1).unwrap()),
            XGraph::identity(Graph::wheel(2).unwrap()),
            XGraph::identity(Graph::wheel(3).unwrap()),
            XGraph::identity(Graph::line(2)),
            XGraph::identity(Graph::corolla_n(3)),
            XGraph::identity(Graph::corolla_n(2).glue("1", "2").unwrap()),
            XGraph::identity(Graph::corolla_n(4).glue("1", "2").unwrap())];
        let frozen = [2, 4, 6, 1, 1, 2, 2];
        for (x, want) in cases.iter().zip(frozen) {
            let autos = automorphisms(x);
            assert_eq!(autos.len(), want, "{x}");
            assert_eq!(autos.len(), brute_force_automorphisms(x), "{x}");
            for a in &autos {
                assert!(a.is_iso());
                let back = a.inverse().unwrap();
                assert_eq!(a.then(&back).unwrap(), GraphMorphism::identity(x.graph()));
            }
        }
        let two = XGraph::identity(Graph::isolated_vertex().disjoint_union(&Graph::isolated_vertex().with_prefix("b")).unwrap());
        assert_eq!(automorphisms(&two).len(), 2);
        assert_eq!(automorphisms(&XGraph::identity(Graph::empty())).len(), 1);
    }

    #[test]
    fn morphism_checks() {
        let g = Graph::wheel(2).unwrap();
        for e in 0..g.num_edges() {
            assert!(GraphMorphism::choose(&g, e).is_etale());
        }
        for v in 0..g.num_vertices() {
            let es = GraphMorphism::essential(&g, v);
            assert!(es.is_etale() && es.is_embedding());
        }
        let w = Graph::wheel(1).unwrap();
        let es = GraphMorphism::essential(&w, 0);
        assert!(es.is_embedding());
        assert_eq!(es.edge_map().iter().collect::<BTreeSet<_>>().len(), 2);
        assert!(es.edge_map().len() == 4);
        // A vertex map collapsing two half-edges is not étale.
        let c2 = Graph::corolla_n(2);
        let c1 = Graph::corolla_n(1);
        let bad = GraphMorphism::new(c2.clone(), c1.clone(), vec![0, 0, 1, 1], vec![0, 0], vec![0]);
        assert!(!bad.unwrap().is_etale());
        // The double cover W^2 -> W^1 is étale but not an embedding.
        let w2 = Graph::wheel(2).unwrap();
        let cover = GraphMorphism::new(w2, w.clone(), vec![0, 1, 0, 1], vec![0, 1, 0, 1], vec![0, 0]).unwrap();
        assert!(cover.is_etale() && !cover.is_embedding());
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::line(2).disjoint_union(&Graph::isolated_vertex()).unwrap();
        let j = serde_json::to_string(&g).unwrap();
        let back: Graph = serde_json::from_str(&j).unwrap();
        assert_eq!(back, g);
        let x = XGraph::identity(Graph::corolla_n(3));
        let back: XGraph = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        assert_eq!(back, x);
        assert!(g.to_dot().starts_with("graph G"));
    }
}
