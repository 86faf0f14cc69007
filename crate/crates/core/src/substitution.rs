//! Graphs of graphs, their colimits, and vertex deletion.
//!
//! A graph of graphs over a base graph `G` assigns to every vertex `v` an
//! `X_v`-graph, where `X_v` is the set of labels of the τ-partners of the
//! edges incident on `v`, so that a corolla's boundary is its set of ports.
//! Its colimit substitutes each assigned graph into its vertex. Vertex
//! deletion removes bivalent and isolated vertices; together with
//! isomorphisms it generates the similarity relation on graphs.
//!
//! ```
//! use brauerkit::graph::{Graph, XGraph};
//! use brauerkit::substitution::{identity_gog, GraphOfGraphs};
//! use std::collections::BTreeMap;
//!
//! let w = Graph::wheel(1).unwrap();
//! assert!(identity_gog(&w).colimit().unwrap().graph.is_isomorphic(&w));
//!
//! // Substituting a line with two vertices into the wheel's vertex.
//! let rho: BTreeMap<String, String> = [("1", "a1"), ("2", "a2")]
//!     .iter()
//!     .map(|(p, x)| (p.to_string(), x.to_string()))
//!     .collect();
//! let line = XGraph::new(Graph::line(2), rho).unwrap();
//! let gog = GraphOfGraphs::new(w, vec![line]).unwrap();
//! let colim = gog.colimit().unwrap();
//! assert!(colim.graph.is_isomorphic(&Graph::wheel(2).unwrap()));
//! ```

use crate::error::{Error, Result};
use crate::graph::{x_iso, Graph, GraphMorphism, XGraph};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Separator between a vertex label and the label of an element substituted
/// into it.
pub const SEP: &str = "/";

/// The labels of `τe` for the edges `e` incident on `v`: the boundary of the
/// neighbourhood corolla of `v`.
pub fn vertex_boundary(g: &Graph, v: usize) -> BTreeSet<String> {
    g.incident_edges(v).into_iter().map(|e| g.edge_label(g.tau(e)).to_string()).collect()
}

/// A base graph with an `X_v`-graph assigned to every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphOfGraphs {
    base: Graph,
    assignment: Vec<XGraph>,
}

impl GraphOfGraphs {
    /// Checks that the ports of `assignment[v]` are labelled by `X_v`.
    pub fn new(base: Graph, assignment: Vec<XGraph>) -> Result<Self> {
        if assignment.len() != base.num_vertices() {
            return Err(Error::BoundaryMismatch(format!(
                "{} assignments for {} vertices",
                assignment.len(),
                base.num_vertices()
            )));
        }
        for (v, xg) in assignment.iter().enumerate() {
            let want = vertex_boundary(&base, v);
            if xg.boundary() != want {
                return Err(Error::BoundaryMismatch(format!(
                    "vertex {} has boundary {want:?} but its graph is labelled by {:?}",
                    base.vertex_label(v),
                    xg.boundary()
                )));
            }
        }
        Ok(GraphOfGraphs { base, assignment })
    }

    /// Builds the assignment from a map keyed by vertex label.
    pub fn from_map(base: Graph, mut assign: BTreeMap<String, XGraph>) -> Result<Self> {
        let mut assignment = Vec::new();
        for v in base.vertex_labels() {
            let xg = assign
                .remove(v)
                .ok_or_else(|| Error::BoundaryMismatch(format!("vertex {v} has no assigned graph")))?;
            assignment.push(xg);
        }
        if let Some(extra) = assign.keys().next() {
            return Err(Error::UnknownLabel(format!("vertex {extra}")));
        }
        GraphOfGraphs::new(base, assignment)
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn assignment(&self) -> &[XGraph] {
        &self.assignment
    }

    pub fn assigned(&self, v: usize) -> &XGraph {
        &self.assignment[v]
    }

    /// Non-degenerate: no assigned graph has a stick component.
    pub fn is_degenerate(&self) -> bool {
        self.assignment.iter().any(|x| !x.is_admissible())
    }

    /// Substitutes every assigned graph into its vertex.
    ///
    /// Edges of the base keep their labels and indices. An inner edge, half-edge
    /// or vertex `x` of the graph at `v` becomes `v/x`. A port `p` of the graph
    /// at `v` with `ρ(p) = x` is identified with the base edge `x`, and `τp`
    /// with `τx`.
    pub fn colimit(&self) -> Result<Colimit> {
        let g = &self.base;
        let mut edges: Vec<String> = g.edge_labels().to_vec();
        let mut tau: Vec<usize> = g.tau_table().to_vec();
        let mut origin: Vec<EdgeOrigin> = (0..g.num_edges()).map(EdgeOrigin::Base).collect();
        let (mut halves, mut s, mut t) = (Vec::new(), Vec::new(), Vec::new());
        let mut vertices = Vec::new();
        let mut vertex_map = Vec::new();
        let mut maps = Vec::new();
        for (v, xg) in self.assignment.iter().enumerate() {
            let gv = xg.graph();
            if let Some(&(a, b)) = gv.stick_components().first() {
                return Err(Error::DegenerateSubstitution(format!(
                    "the graph at {} has a stick component {}~{}",
                    g.vertex_label(v),
                    gv.edge_label(a),
                    gv.edge_label(b)
                )));
            }
            let vl = g.vertex_label(v);
            let mut emap = vec![usize::MAX; gv.num_edges()];
            for p in gv.ports() {
                let x = g.edge_index(&xg.rho()[gv.edge_label(p)])?;
                emap[p] = x;
                emap[gv.tau(p)] = g.tau(x);
            }
            let start = edges.len();
            for (e, slot) in emap.iter_mut().enumerate() {
                if *slot == usize::MAX {
                    *slot = edges.len();
                    edges.push(format!("{vl}{SEP}{}", gv.edge_label(e)));
                    origin.push(EdgeOrigin::Inner { vertex: v, edge: e });
                    tau.push(usize::MAX);
                }
            }
            for e in 0..gv.num_edges() {
                if emap[e] >= start {
                    tau[emap[e]] = emap[gv.tau(e)];
                }
            }
            let h0 = halves.len();
            let v0 = vertices.len();
            for h in 0..gv.num_half_edges() {
                halves.push(format!("{vl}{SEP}{}", gv.half_label(h)));
                s.push(emap[gv.s(h)]);
                t.push(v0 + gv.t(h));
            }
            for w in 0..gv.num_vertices() {
                vertices.push(format!("{vl}{SEP}{}", gv.vertex_label(w)));
                vertex_map.push(v);
            }
            maps.push((emap, (h0..h0 + gv.num_half_edges()).collect::<Vec<_>>(), (v0..v0 + gv.num_vertices()).collect::<Vec<_>>()));
        }
        let colim = Graph::from_indices(edges, tau, halves, s, t, vertices)?;
        let embeddings = self
            .assignment
            .iter()
            .zip(maps)
            .map(|(xg, (e, h, v))| GraphMorphism::new(xg.graph().clone(), colim.clone(), e, h, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Colimit { graph: colim, edge_origin: origin, vertex_map, embeddings })
    }
}

/// Where an edge of a colimit comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeOrigin {
    /// An edge of the base graph.
    Base(usize),
    /// An inner edge of the graph assigned to a base vertex.
    Inner { vertex: usize, edge: usize },
}

/// The colimit of a graph of graphs together with its bookkeeping.
#[derive(Debug, Clone)]
pub struct Colimit {
    pub graph: Graph,
    /// The bijection `E(colim) -> E(G) ⊔ ⊔_v E•(Γ_v)`.
    pub edge_origin: Vec<EdgeOrigin>,
    /// The surjection `V(colim) -> V(G)`.
    pub vertex_map: Vec<usize>,
    /// The morphism `b_v : Γ_v -> colim` for every base vertex.
    pub embeddings: Vec<GraphMorphism>,
}

impl Colimit {
    /// Checks the bookkeeping against the graph of graphs it came from and
    /// returns a description of every failed property.
    pub fn check(&self, gog: &GraphOfGraphs) -> Vec<String> {
        let mut failures = Vec::new();
        let g = gog.base();
        let inner: usize = gog.assignment().iter().map(|x| x.graph().inner_edges().len()).sum();
        if self.graph.num_edges() != g.num_edges() + inner {
            failures.push(format!(
                "edge count {} differs from {} + {inner}",
                self.graph.num_edges(),
                g.num_edges()
            ));
        }
        let mut seen = BTreeSet::new();
        for (i, o) in self.edge_origin.iter().enumerate() {
            let ok = match *o {
                EdgeOrigin::Base(e) => e < g.num_edges() && self.graph.edge_label(i) == g.edge_label(e),
                EdgeOrigin::Inner { vertex, edge } => gog.assigned(vertex).graph().inner_edges().contains(&edge),
            };
            if !ok || !seen.insert(*o) {
                failures.push(format!("edge {} has a bad origin", self.graph.edge_label(i)));
            }
        }
        if self.graph.port_labels() != g.port_labels() {
            failures.push(format!("ports {:?} differ from {:?}", self.graph.port_labels(), g.port_labels()));
        }
        let hit: BTreeSet<usize> = self.vertex_map.iter().copied().collect();
        for v in 0..g.num_vertices() {
            if !hit.contains(&v) && gog.assigned(v).graph().num_vertices() > 0 {
                failures.push(format!("vertex {} has no preimage", g.vertex_label(v)));
            }
        }
        for (v, b) in self.embeddings.iter().enumerate() {
            if !b.is_embedding() {
                failures.push(format!("the map from the graph at {} is not an embedding", g.vertex_label(v)));
            }
        }
        failures
    }
}

/// The graph of graphs assigning to each vertex its own neighbourhood corolla.
pub fn identity_gog(g: &Graph) -> GraphOfGraphs {
    let assignment = (0..g.num_vertices())
        .map(|v| {
            let xs: Vec<String> = g.incident_edges(v).into_iter().map(|e| g.edge_label(g.tau(e)).to_string()).collect();
            XGraph::identity(Graph::corolla_named(&xs, g.vertex_label(v)).expect("incident edges are distinct"))
        })
        .collect();
    GraphOfGraphs::new(g.clone(), assignment).expect("corollas match their boundary")
}

/// The kind of a vertex deletion on one connected component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "tag", content = "size")]
pub enum DeletionKind {
    /// Some vertices removed and the remaining edges re-spliced; ports unchanged.
    Generic,
    /// Every vertex of a line `L^k` removed, leaving its two ports as a stick.
    LineCollapse(usize),
    /// Every vertex of a wheel `W^m` removed, leaving a stick on its first edge.
    WheelCollapse(usize),
    /// An isolated vertex replaced by a stick.
    IsolatedZ,
}

/// A vertex deletion morphism `G -> G_{\W}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarityRecord {
    pub source: Graph,
    pub target: Graph,
    /// Labels of the deleted vertices.
    pub deleted: Vec<String>,
    /// One entry per connected component of the source that lost a vertex.
    pub components: Vec<DeletionKind>,
}

impl SimilarityRecord {
    /// The kind of the deletion when at most one component is affected, and
    /// the most special kind otherwise.
    pub fn kind(&self) -> DeletionKind {
        self.components.iter().copied().max().unwrap_or(DeletionKind::Generic)
    }

    /// Whether the deletion is the identity on ports.
    pub fn preserves_ports(&self) -> bool {
        !self
            .components
            .iter()
            .any(|k| matches!(k, DeletionKind::WheelCollapse(_) | DeletionKind::IsolatedZ))
    }
}

/// Deletes a set `W` of bivalent or isolated vertices.
///
/// A component that loses some but not all of its vertices is re-spliced: for
/// a deleted vertex with incident edges `a`, `b`, the partners `τa` and `τb`
/// become a τ-orbit. A component that loses every vertex is a line, a wheel or
/// an isolated vertex and collapses to a stick. For a line the stick is its
/// two ports, for a wheel it is the orbit of its first edge, and for an
/// isolated vertex `v` it has fresh edges `v/1` and `v/2`.
pub fn delete_vertices(g: &Graph, w: &[usize]) -> Result<SimilarityRecord> {
    let mut wset = BTreeSet::new();
    for &v in w {
        if v >= g.num_vertices() {
            return Err(Error::UnknownLabel(format!("vertex index {v}")));
        }
        let d = g.valency(v);
        if d != 0 && d != 2 {
            return Err(Error::NotDeletable(g.vertex_label(v).to_string()));
        }
        wset.insert(v);
    }
    let ne = g.num_edges();
    let mut alive = vec![true; ne];
    let mut tau: Vec<usize> = g.tau_table().to_vec();
    let mut extra: Vec<String> = Vec::new();
    let mut components = Vec::new();
    for (es, vs) in g.component_sets() {
        let dels: Vec<usize> = vs.iter().copied().filter(|v| wset.contains(v)).collect();
        if dels.is_empty() {
            continue;
        }
        if dels.len() == vs.len() {
            for &e in &es {
                alive[e] = false;
            }
            if es.is_empty() {
                components.push(DeletionKind::IsolatedZ);
                extra.push(format!("{}{SEP}1", g.vertex_label(vs[0])));
                extra.push(format!("{}{SEP}2", g.vertex_label(vs[0])));
                continue;
            }
            let ports: Vec<usize> = es.iter().copied().filter(|&e| g.is_port(e)).collect();
            let (a, b) = if ports.is_empty() {
                components.push(DeletionKind::WheelCollapse(vs.len()));
                (es[0], g.tau(es[0]))
            } else {
                components.push(DeletionKind::LineCollapse(vs.len()));
                (ports[0], ports[1])
            };
            alive[a] = true;
            alive[b] = true;
            tau[a] = b;
            tau[b] = a;
            continue;
        }
        components.push(DeletionKind::Generic);
        for v in dels {
            let inc = g.incident_edges(v);
            let (a, b) = (inc[0], inc[1]);
            let (x, y) = (tau[a], tau[b]);
            debug_assert!(x != b, "a loop at a deleted vertex means the whole component is a wheel");
            tau[x] = y;
            tau[y] = x;
            alive[a] = false;
            alive[b] = false;
        }
    }
    let keep: Vec<usize> = (0..ne).filter(|&e| alive[e]).collect();
    let mut idx = vec![usize::MAX; ne];
    for (i, &e) in keep.iter().enumerate() {
        idx[e] = i;
    }
    let mut edges: Vec<String> = keep.iter().map(|&e| g.edge_label(e).to_string()).collect();
    let mut new_tau: Vec<usize> = keep.iter().map(|&e| idx[tau[e]]).collect();
    for pair in extra.chunks(2) {
        let i = edges.len();
        edges.extend(pair.iter().cloned());
        new_tau.extend([i + 1, i]);
    }
    let vkeep: Vec<usize> = (0..g.num_vertices()).filter(|v| !wset.contains(v)).collect();
    let mut vidx = vec![usize::MAX; g.num_vertices()];
    for (i, &v) in vkeep.iter().enumerate() {
        vidx[v] = i;
    }
    let hkeep: Vec<usize> = (0..g.num_half_edges()).filter(|&h| !wset.contains(&g.t(h))).collect();
    let target = Graph::from_indices(
        edges,
        new_tau,
        hkeep.iter().map(|&h| g.half_label(h).to_string()).collect(),
        hkeep.iter().map(|&h| idx[g.s(h)]).collect(),
        hkeep.iter().map(|&h| vidx[g.t(h)]).collect(),
        vkeep.iter().map(|&v| g.vertex_label(v).to_string()).collect(),
    )?;
    Ok(SimilarityRecord {
        source: g.clone(),
        target,
        deleted: wset.iter().map(|&v| g.vertex_label(v).to_string()).collect(),
        components,
    })
}

/// Deletes vertices given by label.
pub fn delete_vertex_labels<S: AsRef<str>>(g: &Graph, w: &[S]) -> Result<SimilarityRecord> {
    let idx = w.iter().map(|l| g.vertex_index(l.as_ref())).collect::<Result<Vec<_>>>()?;
    delete_vertices(g, &idx)
}

/// The terminal object of the similarity class of a connected `X`-graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Terminal {
    /// A connected `X`-graph without bivalent or isolated vertices.
    Graph(XGraph),
    /// The stick obtained from a line, with the line's port labelling. The
    /// first edge of the stick is the line's first port in edge order.
    LabelledStick(XGraph),
    /// The stick obtained from a wheel or an isolated vertex; it carries no
    /// labelling.
    Stick(Graph),
}

impl Terminal {
    pub fn graph(&self) -> &Graph {
        match self {
            Terminal::Graph(x) | Terminal::LabelledStick(x) => x.graph(),
            Terminal::Stick(g) => g,
        }
    }
}

/// Deletes every bivalent and isolated vertex of a connected `X`-graph.
pub fn terminal_representative(x: &XGraph) -> Result<Terminal> {
    let g = x.graph();
    if !g.is_connected() {
        return Err(Error::InvalidParameter("terminal representatives need a connected graph".into()));
    }
    let w: Vec<usize> = (0..g.num_vertices()).filter(|&v| matches!(g.valency(v), 0 | 2)).collect();
    let rec = delete_vertices(g, &w)?;
    Ok(match rec.kind() {
        DeletionKind::WheelCollapse(_) | DeletionKind::IsolatedZ => Terminal::Stick(rec.target),
        DeletionKind::LineCollapse(_) => Terminal::LabelledStick(XGraph::new(rec.target, x.rho().clone())?),
        DeletionKind::Generic if rec.target.num_vertices() == 0 => Terminal::LabelledStick(XGraph::new(rec.target, x.rho().clone())?),
        DeletionKind::Generic => Terminal::Graph(XGraph::new(rec.target, x.rho().clone())?),
    })
}

/// Whether two connected `X`-graphs are similar.
///
/// Labelled sticks are compared by the labels on their first and second
/// edge, so `(|, id)` and `(|, τ)` are not similar.
pub fn similar(a: &XGraph, b: &XGraph) -> Result<bool> {
    let labels = |x: &XGraph| -> Vec<String> {
        x.graph().edge_labels().iter().map(|e| x.rho()[e].clone()).collect()
    };
    Ok(match (terminal_representative(a)?, terminal_representative(b)?) {
        (Terminal::Graph(x), Terminal::Graph(y)) => x_iso(&x, &y).is_some(),
        (Terminal::LabelledStick(x), Terminal::LabelledStick(y)) => labels(&x) == labels(&y),
        (Terminal::Stick(_), Terminal::Stick(_)) => true,
        _ => false,
    })
}

/// Relabels the assignment of `inner` (a graph of graphs over the graph at
/// `v`) into the colimit of `outer`.
fn push_forward(outer: &GraphOfGraphs, colim: &Colimit, inners: &[GraphOfGraphs]) -> Result<GraphOfGraphs> {
    let mut assignment = Vec::new();
    for (c, &v) in colim.vertex_map.iter().enumerate() {
        let gv = outer.assigned(v).graph();
        let b = &colim.embeddings[v];
        let w = b.vertex_map().iter().position(|&x| x == c).expect("vertex comes from v");
        let inner = inners[v].assigned(w);
        let rho = inner
            .rho()
            .iter()
            .map(|(p, x)| Ok((p.clone(), colim.graph.edge_label(b.edge_map()[gv.edge_index(x)?]).to_string())))
            .collect::<Result<BTreeMap<_, _>>>()?;
        assignment.push(XGraph::new(inner.graph().clone(), rho)?);
    }
    GraphOfGraphs::new(colim.graph.clone(), assignment)
}

/// Substitutes the nested graphs of graphs in both orders.
///
/// `inners[v]` is a graph of graphs over the graph that `outer` assigns to
/// `v`. Returns the colimit of the colimits and the colimit of the
/// substituted assignment.
pub fn nested_colimits(outer: &GraphOfGraphs, inners: &[GraphOfGraphs]) -> Result<(Graph, Graph)> {
    if inners.len() != outer.base().num_vertices() {
        return Err(Error::ShapeMismatch(format!(
            "{} inner graphs of graphs for {} vertices",
            inners.len(),
            outer.base().num_vertices()
        )));
    }
    for (v, inner) in inners.iter().enumerate() {
        if inner.base() != outer.assigned(v).graph() {
            return Err(Error::ShapeMismatch(format!(
                "the inner graph of graphs at {} is not over the outer assignment",
                outer.base().vertex_label(v)
            )));
        }
    }
    let colim = outer.colimit()?;
    let first = push_forward(outer, &colim, inners)?.colimit()?.graph;
    let assignment = inners
        .iter()
        .enumerate()
        .map(|(v, inner)| XGraph::new(inner.colimit()?.graph, outer.assigned(v).rho().clone()))
        .collect::<Result<Vec<_>>>()?;
    let second = GraphOfGraphs::new(outer.base().clone(), assignment)?.colimit()?.graph;
    Ok((first, second))
}

/// Substitution is associative: both evaluation orders of a nesting agree up
/// to a port-preserving isomorphism.
pub fn check_substitution_associativity(outer: &GraphOfGraphs, inners: &[GraphOfGraphs]) -> Result<bool> {
    let (a, b) = nested_colimits(outer, inners)?;
    Ok(x_iso(&XGraph::identity(a), &XGraph::identity(b)).is_some())
}

/// Extends a graph of graphs over `G_{\W}` to one over `G` by assigning to
/// each deleted vertex its own corolla.
///
/// Vertices and edges of `G_{\W}` are matched with those of `G` by label.
/// The boundary of a kept vertex changes where its τ-partners were deleted,
/// so the labellings are transported along the incident edges.
pub fn extend_over_deleted(g: &Graph, w: &[usize], deleted: &GraphOfGraphs) -> Result<GraphOfGraphs> {
    let id = identity_gog(g);
    let d = deleted.base();
    let shape = |e: Error| Error::ShapeMismatch(e.to_string());
    let mut assignment = Vec::new();
    for v in 0..g.num_vertices() {
        if w.contains(&v) {
            assignment.push(id.assigned(v).clone());
            continue;
        }
        let i = d.vertex_index(g.vertex_label(v)).map_err(shape)?;
        let mut to_g = BTreeMap::new();
        for e in d.incident_edges(i) {
            let eg = g.edge_index(d.edge_label(e)).map_err(shape)?;
            to_g.insert(d.edge_label(d.tau(e)).to_string(), g.edge_label(g.tau(eg)).to_string());
        }
        let xg = deleted.assigned(i);
        let rho = xg.rho().iter().map(|(p, x)| (p.clone(), to_g[x].clone())).collect();
        assignment.push(XGraph::new(xg.graph().clone(), rho)?);
    }
    GraphOfGraphs::new(g.clone(), assignment)
}

/// Deleting commutes with substituting: for a graph of graphs `Γ` over
/// `G_{\W}` and its extension `Γ^W` over `G`, the colimit of `Γ^W` with the
/// copies of `W` deleted is isomorphic to the colimit of `Γ`.
pub fn check_deleted_colimit(g: &Graph, w: &[usize], deleted: &GraphOfGraphs) -> Result<bool> {
    let rec = delete_vertices(g, w)?;
    if x_iso(&XGraph::identity(rec.target.clone()), &XGraph::identity(deleted.base().clone())).is_none() {
        return Err(Error::ShapeMismatch("the graph of graphs is not over G with W deleted".into()));
    }
    let ext = extend_over_deleted(g, w, deleted)?;
    let colim = ext.colimit()?;
    let copies: Vec<usize> = colim
        .vertex_map
        .iter()
        .enumerate()
        .filter(|(_, v)| w.contains(v))
        .map(|(c, _)| c)
        .collect();
    let lhs = delete_vertices(&colim.graph, &copies)?.target;
    let rhs = deleted.colimit()?.graph;
    Ok(x_iso(&XGraph::identity(lhs), &XGraph::identity(rhs)).is_some())
}

/// A random graph with exactly the given boundary, no stick components and
/// between one and `max_vertices` vertices.
pub fn random_admissible<R: Rng>(boundary: &[String], max_vertices: usize, max_valency: usize, rng: &mut R) -> XGraph {
    let k = boundary.len();
    let nv = rng.gen_range(1..=max_vertices.max(1));
    let mut vals: Vec<usize> = (0..nv).map(|_| rng.gen_range(0..=max_valency)).collect();
    while vals.iter().sum::<usize>() < k || (vals.iter().sum::<usize>() - k) % 2 == 1 {
        let v = rng.gen_range(0..nv);
        vals[v] += 1;
    }
    let total: usize = vals.iter().sum();
    let ne = k + total;
    let mut inner: Vec<usize> = (k..ne).collect();
    inner.shuffle(rng);
    let mut tau = vec![0; ne];
    for p in 0..k {
        tau[p] = inner[p];
        tau[inner[p]] = p;
    }
    for pair in inner[k..].chunks(2) {
        tau[pair[0]] = pair[1];
        tau[pair[1]] = pair[0];
    }
    let mut t = Vec::new();
    for (v, &d) in vals.iter().enumerate() {
        t.extend(std::iter::repeat_n(v, d));
    }
    let mut edges: Vec<String> = (0..k).map(|p| format!("p{p}")).collect();
    edges.extend((0..total).map(|j| format!("e{j}")));
    let g = Graph::from_indices(
        edges,
        tau,
        (0..total).map(|h| format!("h{h}")).collect(),
        (k..ne).collect(),
        t,
        (0..nv).map(|v| format!("v{v}")).collect(),
    )
    .expect("valid by construction");
    let mut xs = boundary.to_vec();
    xs.shuffle(rng);
    let rho = (0..k).map(|p| format!("p{p}")).zip(xs).collect();
    XGraph::new(g, rho).expect("ports match the boundary")
}

/// A random non-degenerate graph of graphs over `base`.
pub fn random_gog<R: Rng>(base: &Graph, max_vertices: usize, max_valency: usize, rng: &mut R) -> GraphOfGraphs {
    let assignment = (0..base.num_vertices())
        .map(|v| {
            let xs: Vec<String> = vertex_boundary(base, v).into_iter().collect();
            random_admissible(&xs, max_vertices, max_valency, rng)
        })
        .collect();
    GraphOfGraphs::new(base.clone(), assignment).expect("boundaries match")
}

/// A random nesting: a graph of graphs over `base` and, for each of its
/// assigned graphs, a graph of graphs over that.
pub fn random_nesting<R: Rng>(base: &Graph, max_vertices: usize, max_valency: usize, rng: &mut R) -> (GraphOfGraphs, Vec<GraphOfGraphs>) {
    let outer = random_gog(base, max_vertices, max_valency, rng);
    let inners = outer
        .assignment()
        .iter()
        .map(|x| random_gog(x.graph(), max_vertices, max_valency, rng))
        .collect();
    (outer, inners)
}

/// Inserts `count` new bivalent vertices, each subdividing a random τ-orbit.
/// Returns the new graph and its new vertices; deleting them recovers `g`.
pub fn subdivide<R: Rng>(g: &Graph, count: usize, rng: &mut R) -> (Graph, Vec<usize>) {
    let mut edges: Vec<String> = g.edge_labels().to_vec();
    let mut tau: Vec<usize> = g.tau_table().to_vec();
    let mut halves: Vec<String> = g.half_labels().to_vec();
    let mut s: Vec<usize> = (0..g.num_half_edges()).map(|h| g.s(h)).collect();
    let mut t: Vec<usize> = (0..g.num_half_edges()).map(|h| g.t(h)).collect();
    let mut vertices: Vec<String> = g.vertex_labels().to_vec();
    let mut added = Vec::new();
    for i in 0..count {
        if edges.is_empty() {
            break;
        }
        let a = rng.gen_range(0..edges.len());
        let ta = tau[a];
        let (b, c) = (edges.len(), edges.len() + 1);
        edges.push(format!("sub{i}a"));
        edges.push(format!("sub{i}b"));
        tau.extend([a, ta]);
        tau[a] = b;
        tau[ta] = c;
        let w = vertices.len();
        vertices.push(format!("sub{i}"));
        for (e, name) in [(b, "a"), (c, "b")] {
            halves.push(format!("sub{i}{name}h"));
            s.push(e);
            t.push(w);
        }
        added.push(w);
    }
    let g = Graph::from_indices(edges, tau, halves, s, t, vertices).expect("valid by construction");
    (g, added)
}

#[derive(Serialize, Deserialize)]
struct GogWire {
    base: Graph,
    assign: BTreeMap<String, XGraph>,
}

impl Serialize for GraphOfGraphs {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GogWire {
            base: self.base.clone(),
            assign: self
                .base
                .vertex_labels()
                .iter()
                .cloned()
                .zip(self.assignment.iter().cloned())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GraphOfGraphs {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = GogWire::deserialize(d)?;
        GraphOfGraphs::from_map(w.base, w.assign).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rng_from_seed;

    fn rho(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn identity_colimit_recovers_graph() {
        let c3 = Graph::corolla_n(3);
        let w2 = Graph::wheel(2).unwrap();
        for g in [Graph::stick(), w2, c3, Graph::line(3), Graph::empty()] {
            let gog = identity_gog(&g);
            assert!(!gog.is_degenerate());
            let colim = gog.colimit().unwrap();
            assert!(colim.check(&gog).is_empty());
            assert!(colim.graph.is_isomorphic(&g), "{g}");
        }
    }

    #[test]
    fn lines_into_a_wheel() {
        let w = Graph::wheel(1).unwrap();
        for k in 1..4 {
            let line = XGraph::new(Graph::line(k), rho(&[("1", "a1"), ("2", "a2")])).unwrap();
            let gog = GraphOfGraphs::new(w.clone(), vec![line]).unwrap();
            let colim = gog.colimit().unwrap();
            assert!(colim.check(&gog).is_empty());
            assert_eq!(colim.graph.num_edges(), 2 * k);
            assert!(colim.graph.is_isomorphic(&Graph::wheel(k).unwrap()));
        }
    }

    #[test]
    fn single_vertex_substitution() {
        let c = Graph::corolla_n(3);
        let mut rng = rng_from_seed(4);
        let xs: Vec<String> = vec!["1".into(), "2".into(), "3".into()];
        for _ in 0..20 {
            let x = random_admissible(&xs, 3, 3, &mut rng);
            let gog = GraphOfGraphs::new(c.clone(), vec![x.clone()]).unwrap();
            let colim = gog.colimit().unwrap();
            assert!(colim.check(&gog).is_empty());
            assert!(x_iso(&XGraph::identity(colim.graph), &x).is_some());
        }
    }

    #[test]
    fn boundary_and_degeneracy_errors() {
        let c = Graph::corolla_n(2);
        let bad = XGraph::new(Graph::line(1), rho(&[("1", "1"), ("2", "3")])).unwrap();
        assert!(matches!(GraphOfGraphs::new(c.clone(), vec![bad]), Err(Error::BoundaryMismatch(_))));
        let stick = XGraph::identity(Graph::stick());
        let gog = GraphOfGraphs::new(c, vec![stick]).unwrap();
        assert!(gog.is_degenerate());
        assert!(matches!(gog.colimit(), Err(Error::DegenerateSubstitution(_))));
    }

    #[test]
    fn deletion_special_cases() {
        let l3 = Graph::line(3);
        let r = delete_vertices(&l3, &[0, 1, 2]).unwrap();
        assert_eq!(r.kind(), DeletionKind::LineCollapse(3));
        assert_eq!(r.target.port_labels(), vec!["1", "2"]);
        assert!(r.target.is_isomorphic(&Graph::stick()));

        let w2 = Graph::wheel(2).unwrap();
        let r = delete_vertices(&w2, &[0, 1]).unwrap();
        assert_eq!(r.kind(), DeletionKind::WheelCollapse(2));
        assert_eq!(r.target.edge_labels(), &["a1".to_string(), "a4".to_string()]);
        assert!(!r.preserves_ports());

        let r = delete_vertices(&w2, &[0]).unwrap();
        assert_eq!(r.kind(), DeletionKind::Generic);
        assert!(r.target.is_isomorphic(&Graph::wheel(1).unwrap()));

        let r = delete_vertices(&Graph::isolated_vertex(), &[0]).unwrap();
        assert_eq!(r.kind(), DeletionKind::IsolatedZ);
        assert!(r.target.is_isomorphic(&Graph::stick()));

        let r = delete_vertices(&Graph::line(4), &[1, 2]).unwrap();
        assert!(r.target.is_isomorphic(&Graph::line(2)));
        assert_eq!(r.target.port_labels(), vec!["1", "2"]);

        assert!(matches!(delete_vertices(&Graph::corolla_n(3), &[0]), Err(Error::NotDeletable(_))));
    }

    #[test]
    fn deletion_composes() {
        let mut rng = rng_from_seed(9);
        for _ in 0..30 {
            let h = Graph::random(3, 3, 2, &mut rng);
            let (g, w) = subdivide(&h, 3, &mut rng);
            let back = delete_vertices(&g, &w).unwrap().target;
            assert!(x_iso(&XGraph::identity(back.clone()), &XGraph::identity(h.clone())).is_some());
            // Deleting in two steps agrees with deleting at once.
            let first = delete_vertices(&g, &w[..1]).unwrap().target;
            let rest: Vec<usize> = w[1..].iter().map(|&v| first.vertex_index(g.vertex_label(v)).unwrap()).collect();
            let two = delete_vertices(&first, &rest).unwrap().target;
            assert!(x_iso(&XGraph::identity(two), &XGraph::identity(back)).is_some());
        }
    }

    #[test]
    fn terminal_and_similarity() {
        let id2 = rho(&[("1", "1"), ("2", "2")]);
        let sw2 = rho(&[("1", "2"), ("2", "1")]);
        let l2 = XGraph::new(Graph::line(2), id2.clone()).unwrap();
        let l5 = XGraph::new(Graph::line(5), id2.clone()).unwrap();
        assert!(similar(&l2, &l5).unwrap());
        let l2t = XGraph::new(Graph::line(2), sw2.clone()).unwrap();
        assert!(!similar(&l2, &l2t).unwrap());
        let st = XGraph::new(Graph::stick(), sw2).unwrap();
        let si = XGraph::new(Graph::stick(), id2).unwrap();
        assert!(!similar(&st, &si).unwrap());
        assert!(similar(&si, &l5).unwrap());

        let w1 = XGraph::identity(Graph::wheel(1).unwrap());
        let w4 = XGraph::identity(Graph::wheel(4).unwrap());
        let z = XGraph::identity(Graph::isolated_vertex());
        assert!(similar(&w1, &w4).unwrap());
        assert!(similar(&w4, &z).unwrap());

        let c3 = XGraph::identity(Graph::corolla_n(3));
        assert_eq!(terminal_representative(&c3).unwrap(), Terminal::Graph(c3.clone()));
        let t = terminal_representative(&XGraph::identity(Graph::wheel(3).unwrap())).unwrap();
        assert!(matches!(t, Terminal::Stick(_)));
    }

    #[test]
    fn terminal_is_idempotent() {
        let mut rng = rng_from_seed(12);
        let mut checked = 0;
        while checked < 20 {
            let h = Graph::random(3, 4, 3, &mut rng);
            if !h.is_connected() {
                continue;
            }
            let (g, _) = subdivide(&h, 2, &mut rng);
            if let Terminal::Graph(t) = terminal_representative(&XGraph::identity(g)).unwrap() {
                assert_eq!(terminal_representative(&t).unwrap(), Terminal::Graph(t.clone()));
                checked += 1;
            }
        }
    }

    #[test]
    fn random_bookkeeping_associativity_and_deletion() {
        let mut rng = rng_from_seed(1);
        for _ in 0..20 {
            let base = Graph::random(3, 3, 2, &mut rng);
            let (outer, inners) = random_nesting(&base, 2, 3, &mut rng);
            let colim = outer.colimit().unwrap();
            assert!(colim.check(&outer).is_empty());
            assert!(check_substitution_associativity(&outer, &inners).unwrap());

            let (g, w) = subdivide(&base, 2, &mut rng);
            let gog = random_gog(&base, 2, 3, &mut rng);
            assert!(check_deleted_colimit(&g, &w, &gog).unwrap());
        }
    }

    #[test]
    fn gog_json_round_trip() {
        let gog = identity_gog(&Graph::wheel(2).unwrap());
        let s = serde_json::to_string(&gog).unwrap();
        let back: GraphOfGraphs = serde_json::from_str(&s).unwrap();
        assert_eq!(back, gog);
        let rec = delete_vertices(&Graph::line(2), &[0, 1]).unwrap();
        let v = serde_json::to_value(&rec).unwrap();
        assert_eq!(v["components"][0]["tag"], "line_collapse");
    }
}
