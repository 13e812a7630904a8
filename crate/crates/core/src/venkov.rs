//! Primitive Venkov graphs and the gain-cycle rank criterion.
//!
//! Vertices are pairs of opposite facets; every primitive (six-facet) belt
//! contributes three labeled edges, one for each pair of its facet pairs.
//! Gain cycles are the half-belt triangles plus cycles that close around a
//! codimension-3 face. The criterion holds when they span the whole cycle
//! space over the rationals.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::linalg::{RowSpan, Rational};
use crate::zonograph::{
    classify_3d, connected_partitions, enumerate_belts, enumerate_facets, quotient, Belt, Edge,
    FacetPair, Parallelohedron3Kind, VertexSet, ZonotopeGraph,
};

/// One labeled edge of a Venkov graph, oriented from the smaller vertex
/// index to the larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VenkovEdge {
    pub belt: usize,
    pub tail: usize,
    pub head: usize,
}

/// A multigraph whose edges carry the id of the belt that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VenkovGraph<V> {
    pub vertices: Vec<V>,
    pub edges: Vec<VenkovEdge>,
}

/// Coefficients over the edges of a Venkov graph, relative to each edge's
/// fixed orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleVector {
    pub coefficients: Vec<Rational>,
}

impl CycleVector {
    pub fn len(&self) -> usize {
        self.coefficients.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<V> VenkovGraph<V> {
    pub fn new(vertices: Vec<V>) -> Self {
        VenkovGraph { vertices, edges: Vec::new() }
    }

    /// Adds the edge `{a, b}` labeled `belt` and returns its index.
    pub fn add_edge(&mut self, belt: usize, a: usize, b: usize) -> usize {
        assert!(a != b && a < self.vertices.len() && b < self.vertices.len());
        let (tail, head) = if a < b { (a, b) } else { (b, a) };
        self.edges.push(VenkovEdge { belt, tail, head });
        self.edges.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Index of the edge labeled `belt` between `a` and `b`.
    pub fn find_edge(&self, belt: usize, a: usize, b: usize) -> Option<usize> {
        let (tail, head) = if a < b { (a, b) } else { (b, a) };
        self.edges.iter().position(|e| e.belt == belt && e.tail == tail && e.head == head)
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.tail, e.head);
        }
        uf.count()
    }

    /// Dimension of the cycle space: `E - V + #components`.
    pub fn cycle_dim(&self) -> usize {
        self.edges.len() + self.component_count() - self.vertices.len()
    }

    /// Signed sum of coefficients at each vertex (head minus tail).
    pub fn boundary(&self, cycle: &CycleVector) -> Vec<Rational> {
        assert_eq!(cycle.coefficients.len(), self.edges.len());
        let mut out = vec![Rational::zero(); self.vertices.len()];
        for (e, c) in self.edges.iter().zip(&cycle.coefficients) {
            if c.is_zero() {
                continue;
            }
            out[e.head] += c;
            out[e.tail] -= c;
        }
        out
    }

    pub fn is_closed(&self, cycle: &CycleVector) -> bool {
        self.boundary(cycle).iter().all(Rational::is_zero)
    }

    /// Cycle vector of a closed walk `start, ...` given by its edge indices.
    ///
    /// Panics if consecutive edges do not chain or the walk is not closed.
    pub fn cycle_from_walk(&self, start: usize, walk: &[usize]) -> CycleVector {
        let mut coefficients = vec![Rational::zero(); self.edges.len()];
        let mut at = start;
        for &idx in walk {
            let e = self.edges[idx];
            let (sign, next) = if e.tail == at {
                (1, e.head)
            } else if e.head == at {
                (-1, e.tail)
            } else {
                panic!("walk breaks at edge {idx}");
            };
            coefficients[idx] += &Rational::from(sign);
            at = next;
        }
        assert_eq!(at, start, "walk is not closed");
        let cycle = CycleVector { coefficients };
        assert!(self.is_closed(&cycle), "cycle has nonzero boundary");
        cycle
    }

    /// Fundamental cycles of the subgraph made of `edge_subset`, using the
    /// spanning forest grown from the lexicographically smallest edges.
    pub fn fundamental_cycles(&self, edge_subset: &[usize]) -> Vec<CycleVector> {
        let mut sorted: Vec<usize> = edge_subset.to_vec();
        sorted.sort_by_key(|&i| {
            let e = self.edges[i];
            (e.tail, e.head, e.belt, i)
        });
        sorted.dedup();
        let mut uf = UnionFind::new(self.vertices.len());
        let mut tree_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.vertices.len()];
        let mut chords = Vec::new();
        for &i in &sorted {
            let e = self.edges[i];
            if uf.union(e.tail, e.head) {
                tree_adj[e.tail].push((e.head, i));
                tree_adj[e.head].push((e.tail, i));
            } else {
                chords.push(i);
            }
        }
        chords
            .into_iter()
            .map(|chord| {
                let e = self.edges[chord];
                // Tree path from head back to tail, then the chord closes it.
                let mut walk = tree_path(&tree_adj, e.head, e.tail);
                walk.insert(0, chord);
                self.cycle_from_walk(e.tail, &walk)
            })
            .collect()
    }

    /// Graphviz rendering with caller-supplied vertex and edge labels.
    pub fn to_dot<FV, FE>(&self, name: &str, vertex_label: FV, edge_label: FE) -> String
    where
        FV: Fn(usize) -> String,
        FE: Fn(&VenkovEdge) -> String,
    {
        let mut out = String::new();
        let _ = writeln!(out, "graph {name} {{");
        for v in 0..self.vertices.len() {
            let _ = writeln!(out, "  \"{}\";", vertex_label(v));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{}\"];",
                vertex_label(e.tail),
                vertex_label(e.head),
                edge_label(e)
            );
        }
        out.push_str("}\n");
        out
    }
}

fn tree_path(adj: &[Vec<(usize, usize)>], from: usize, to: usize) -> Vec<usize> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &(w, edge) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((v, edge));
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut at = to;
    while at != from {
        let (p, edge) = prev[at].expect("endpoints lie in one tree");
        path.push(edge);
        at = p;
    }
    path.reverse();
    path
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), components: n }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if the two were in different sets.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        self.components -= 1;
        true
    }

    pub(crate) fn count(&self) -> usize {
        self.components
    }
}

/// Adds the three edges of a primitive belt between facet-pair indices.
/// Returns the edge indices for the pairs (x,y), (y,z), (x,z) with x<y<z.
pub fn add_belt_edges<V>(vg: &mut VenkovGraph<V>, belt: usize, members: [usize; 3]) -> [usize; 3] {
    let mut m = members;
    m.sort_unstable();
    let [x, y, z] = m;
    let xy = vg.add_edge(belt, x, y);
    let yz = vg.add_edge(belt, y, z);
    let xz = vg.add_edge(belt, x, z);
    [xy, yz, xz]
}

/// Primitive Venkov graph of a zonotope: one vertex per facet pair and three
/// edges per primitive belt, labeled with the belt's index in
/// [`enumerate_belts`] order.
pub fn build_venkov(g: &ZonotopeGraph) -> VenkovGraph<FacetPair> {
    let facets = enumerate_facets(g);
    let belts = enumerate_belts(g);
    venkov_from_parts(facets, &belts)
}

fn venkov_from_parts(facets: Vec<FacetPair>, belts: &[Belt]) -> VenkovGraph<FacetPair> {
    let index: BTreeMap<FacetPair, usize> = facets.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut vg = VenkovGraph::new(facets);
    for (id, belt) in belts.iter().enumerate().filter(|(_, b)| b.primitive) {
        let members: Vec<usize> = belt.facets.iter().map(|f| index[f]).collect();
        add_belt_edges(&mut vg, id, [members[0], members[1], members[2]]);
    }
    vg
}

/// One triangle per belt label, traversing that belt's three edges.
pub fn half_belt_cycles<V>(vg: &VenkovGraph<V>) -> Vec<CycleVector> {
    let mut by_belt: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, e) in vg.edges.iter().enumerate() {
        by_belt.entry(e.belt).or_default().push(i);
    }
    by_belt
        .into_values()
        .map(|edges| {
            assert_eq!(edges.len(), 3, "a primitive belt has exactly three edges");
            let mut verts: Vec<usize> = edges.iter().flat_map(|&i| [vg.edges[i].tail, vg.edges[i].head]).collect();
            verts.sort_unstable();
            verts.dedup();
            let [x, y, z] = [verts[0], verts[1], verts[2]];
            let pick = |a: usize, b: usize| {
                *edges
                    .iter()
                    .find(|&&i| vg.edges[i].tail == a && vg.edges[i].head == b)
                    .expect("triangle edge")
            };
            vg.cycle_from_walk(x, &[pick(x, y), pick(y, z), pick(x, z)])
        })
        .collect()
}

/// The cycle-space contribution of one family of codimension-3 faces.
///
/// Such a family is a partition of the graph's vertices into four connected
/// parts; projecting along it contracts each part to a point and leaves a
/// three-dimensional zonotope. With five vertices this is projection along
/// the single zone vector `edge`.
#[derive(Clone, Debug)]
pub struct ProjectionSpan {
    pub parts: Vec<VertexSet>,
    /// Graph edges inside the parts (the contracted zone vectors).
    pub zone: Vec<Edge>,
    pub contracted: ZonotopeGraph,
    pub kind: Parallelohedron3Kind,
    /// Venkov vertices (facet-pair indices) kept by the projection.
    pub vertices: Vec<usize>,
    /// Venkov edges coming from primitive belts kept by the projection.
    pub edges: Vec<usize>,
    pub basis: Vec<CycleVector>,
}

impl ProjectionSpan {
    /// The contracted zone vector when exactly one was contracted.
    pub fn edge(&self) -> Option<Edge> {
        match self.zone.as_slice() {
            [e] => Some(*e),
            _ => None,
        }
    }
}

fn refines(parts: &[VertexSet], coarse: &[VertexSet]) -> bool {
    parts.iter().all(|p| coarse.iter().any(|c| p.intersection(*c) == *p))
}

/// For every connected four-part partition (every zone vector, for five
/// vertices): the contracted graph, its 3D kind, and a basis of the full
/// cycle space of the surviving subgraph of the Venkov graph.
///
/// A three-dimensional zonotope (four vertices) gets a single entry with
/// all-singleton parts, i.e. its whole cycle space; graphs on fewer than
/// four vertices have no codimension-3 faces and get none.
pub fn projection_spans(g: &ZonotopeGraph, vg: &VenkovGraph<FacetPair>) -> Vec<ProjectionSpan> {
    let belts = enumerate_belts(g);
    let mut spans: Vec<ProjectionSpan> = connected_partitions(g, 4)
        .into_iter()
        .map(|parts| {
            let contracted = quotient(g, &parts).expect("parts cover the graph");
            let kind = classify_3d(&contracted).expect("four connected parts");
            let zone: Vec<Edge> = g
                .edges()
                .iter()
                .copied()
                .filter(|&(a, b)| parts.iter().any(|p| p.contains(a) && p.contains(b)))
                .collect();
            let vertices: Vec<usize> = vg
                .vertices
                .iter()
                .enumerate()
                .filter(|(_, f)| refines(&parts, &[f.first, f.second]))
                .map(|(k, _)| k)
                .collect();
            let edges: Vec<usize> = vg
                .edges
                .iter()
                .enumerate()
                .filter(|(_, e)| refines(&parts, &belts[e.belt].parts))
                .map(|(k, _)| k)
                .collect();
            let basis = vg.fundamental_cycles(&edges);
            ProjectionSpan { parts, zone, contracted, kind, vertices, edges, basis }
        })
        .collect();
    spans.sort_by(|a, b| a.zone.cmp(&b.zone));
    spans
}

/// Compact per-projection entry of a [`GainReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionSummary {
    pub zone: Vec<Edge>,
    pub kind: Parallelohedron3Kind,
    pub survivors: Vec<usize>,
    pub subgraph_edges: usize,
    pub basis_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GainReport {
    pub cycle_dim: usize,
    pub gain_rank: usize,
    pub half_belt_rank: usize,
    pub pass: bool,
    pub projections: Vec<ProjectionSummary>,
}

/// Ranks of a stacked generating set: half-belt cycles first, then the rest.
/// Returns `(half_belt_rank, total_rank)`.
pub fn stacked_rank<V>(
    vg: &VenkovGraph<V>,
    half_belts: &[CycleVector],
    others: &[CycleVector],
) -> (usize, usize) {
    let mut span = RowSpan::new(vg.edge_count());
    let target = vg.cycle_dim();
    for c in half_belts {
        assert!(vg.is_closed(c));
        span.insert(&c.coefficients);
    }
    let half = span.rank();
    for c in others {
        assert!(vg.is_closed(c));
        if span.rank() == target {
            break;
        }
        span.insert(&c.coefficients);
    }
    assert!(span.rank() <= target, "gain rank exceeds the cycle dimension");
    (half, span.rank())
}

/// Everything computed for one zonotope.
#[derive(Clone, Debug)]
pub struct ZonotopeAnalysis {
    pub graph: ZonotopeGraph,
    pub facets: Vec<FacetPair>,
    pub belts: Vec<Belt>,
    pub venkov: VenkovGraph<FacetPair>,
    pub half_belts: Vec<CycleVector>,
    pub projections: Vec<ProjectionSpan>,
    pub report: GainReport,
}

pub fn analyze(g: &ZonotopeGraph) -> ZonotopeAnalysis {
    let facets = enumerate_facets(g);
    let belts = enumerate_belts(g);
    let venkov = venkov_from_parts(facets.clone(), &belts);
    let half_belts = half_belt_cycles(&venkov);
    let projections = projection_spans(g, &venkov);
    let others: Vec<CycleVector> = projections.iter().flat_map(|p| p.basis.iter().cloned()).collect();
    let (half_belt_rank, gain_rank) = stacked_rank(&venkov, &half_belts, &others);
    let cycle_dim = venkov.cycle_dim();
    let report = GainReport {
        cycle_dim,
        gain_rank,
        half_belt_rank,
        pass: gain_rank == cycle_dim,
        projections: projections
            .iter()
            .map(|p| ProjectionSummary {
                zone: p.zone.clone(),
                kind: p.kind,
                survivors: p.vertices.clone(),
                subgraph_edges: p.edges.len(),
                basis_size: p.basis.len(),
            })
            .collect(),
    };
    ZonotopeAnalysis { graph: g.clone(), facets, belts, venkov, half_belts, projections, report }
}

/// Decides whether the gain cycles generate the cycle space over the rationals.
pub fn check_gain_generation(g: &ZonotopeGraph) -> GainReport {
    analyze(g).report
}
