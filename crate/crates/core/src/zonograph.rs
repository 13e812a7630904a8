//! Graph calculus for zonotopes whose zone vectors are `e_i - e_j`.
//!
//! A connected simple graph on vertices `1..=n` encodes such a zonotope, one
//! zone vector per edge. Pairs of opposite facets are the bipartitions of the
//! vertex set into two connected parts, belts are tripartitions into three
//! connected parts, and projecting along a zone vector contracts its edge.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{GraphError, GraphParseError};

/// Largest vertex count accepted by [`ZonotopeGraph::new`].
pub const MAX_VERTICES: usize = 8;

/// A set of vertex labels (1-based), stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(u32);

impl VertexSet {
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        let mut bits = 0u32;
        for v in labels {
            debug_assert!((1..=32).contains(&v));
            bits |= 1 << (v - 1);
        }
        VertexSet(bits)
    }

    /// The set `{1, ..., n}`.
    pub fn all(n: usize) -> Self {
        VertexSet(if n == 0 { 0 } else { (1u32 << n) - 1 })
    }

    pub const fn from_bits(bits: u32) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        v >= 1 && self.0 & (1 << (v - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest label in the set.
    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }

    /// Labels in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |b| self.0 & (1 << b) != 0).map(|b| b + 1)
    }

    pub fn labels(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Ordering key: size first, then the sorted label list.
    fn size_lex_key(self) -> (usize, Vec<usize>) {
        (self.len(), self.labels())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().join(","))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.labels().serialize(serializer)
    }
}

/// An undirected edge `{low, high}` with `low < high`.
pub type Edge = (usize, usize);

fn normalize_edge(a: usize, b: usize) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Connected simple graph on vertices `1..=n`; edge `{i, j}` stands for the
/// zone vector `e_i - e_j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZonotopeGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl ZonotopeGraph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::VertexCount { n, max: MAX_VERTICES });
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            let e = normalize_edge(a, b);
            if !set.insert(e) {
                return Err(GraphError::ParallelEdge(e.0, e.1));
            }
        }
        let g = ZonotopeGraph { n, edges: set.into_iter().collect() };
        if !g.is_connected_subset(VertexSet::all(n)) {
            return Err(GraphError::NotConnected);
        }
        Ok(g)
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Self::new(n, (1..=n).tuple_combinations())
    }

    /// Path `1-2-...-n`.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        Self::new(n, (1..n).map(|i| (i, i + 1)))
    }

    /// Cycle `1-2-...-n-1`.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        Self::new(n, (1..=n).map(|i| (i, i % n + 1)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges sorted lexicographically, each with its smaller end first.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::all(self.n)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&normalize_edge(a, b)).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet::from_labels(self.edges.iter().filter_map(|&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        }))
    }

    /// Whether the induced subgraph on `set` is nonempty and connected.
    pub fn is_connected_subset(&self, set: VertexSet) -> bool {
        let Some(start) = set.min() else {
            return false;
        };
        let mut seen = VertexSet::from_labels([start]);
        let mut frontier = vec![start];
        while let Some(v) = frontier.pop() {
            for w in self.neighbors(v).intersection(set).difference(seen).iter() {
                seen = seen.union(VertexSet::from_labels([w]));
                frontier.push(w);
            }
        }
        seen == set
    }

    /// Whether at least one edge joins `a` and `b`.
    pub fn joins(&self, a: VertexSet, b: VertexSet) -> bool {
        self.edges
            .iter()
            .any(|&(x, y)| (a.contains(x) && b.contains(y)) || (a.contains(y) && b.contains(x)))
    }

    /// Number of edges with exactly one end in `part`.
    pub fn crossing_edges(&self, part: VertexSet) -> Vec<Edge> {
        self.edges
            .iter()
            .copied()
            .filter(|&(a, b)| part.contains(a) != part.contains(b))
            .collect()
    }

    /// Graph with vertex `v` renamed to `perm[v - 1]`.
    pub fn relabeled(&self, perm: &[usize]) -> ZonotopeGraph {
        assert_eq!(perm.len(), self.n);
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|&(a, b)| normalize_edge(perm[a - 1], perm[b - 1]))
            .collect();
        edges.sort_unstable();
        ZonotopeGraph { n: self.n, edges }
    }

    /// Lexicographically smallest relabeling; equal for isomorphic graphs.
    pub fn canonical_form(&self) -> ZonotopeGraph {
        (1..=self.n)
            .permutations(self.n)
            .map(|perm| self.relabeled(&perm))
            .min()
            .expect("at least one permutation")
    }

    pub fn is_isomorphic(&self, other: &ZonotopeGraph) -> bool {
        self.n == other.n
            && self.edges.len() == other.edges.len()
            && self.canonical_form() == other.canonical_form()
    }
}

impl fmt::Display for ZonotopeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={}; edges={}",
            self.n,
            self.edges.iter().map(|(a, b)| format!("{a}-{b}")).join(",")
        )
    }
}

impl fmt::Debug for ZonotopeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ZonotopeGraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Character of the input with its 1-based position.
#[derive(Clone, Copy)]
struct Located {
    ch: char,
    line: usize,
    column: usize,
}

struct TextParser {
    chars: Vec<Located>,
    pos: usize,
    end: (usize, usize),
}

impl TextParser {
    fn new(input: &str) -> Self {
        let mut chars = Vec::new();
        let (mut line, mut column) = (1, 1);
        for ch in input.chars() {
            if !ch.is_whitespace() {
                chars.push(Located { ch, line, column });
            }
            if ch == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        TextParser { chars, pos: 0, end: (line, column) }
    }

    fn error(&self, message: impl Into<String>) -> GraphParseError {
        let (line, column) = match self.chars.get(self.pos) {
            Some(c) => (c.line, c.column),
            None => self.end,
        };
        GraphParseError { line, column, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.ch)
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<(), GraphParseError> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{ch}'")))
        }
    }

    fn keyword(&mut self) -> Result<String, GraphParseError> {
        let mut word = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_alphabetic()) {
            word.push(c);
            self.pos += 1;
        }
        if word.is_empty() {
            Err(self.error("expected 'n' or 'edges'"))
        } else {
            Ok(word)
        }
    }

    fn number(&mut self) -> Result<(usize, usize), GraphParseError> {
        let start = self.pos;
        let mut value: usize = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(d as usize))
                .ok_or_else(|| self.error("number too large"))?;
            self.pos += 1;
        }
        if self.pos == start {
            Err(self.error("expected a number"))
        } else {
            Ok((value, start))
        }
    }

    fn at(&self, index: usize, message: impl Into<String>) -> GraphParseError {
        let saved = self.chars[index];
        GraphParseError { line: saved.line, column: saved.column, message: message.into() }
    }

    fn parse(mut self) -> Result<ZonotopeGraph, GraphParseError> {
        let mut n: Option<usize> = None;
        let mut edges: Option<Vec<(usize, usize, usize)>> = None;
        while self.peek().is_some() {
            let key_pos = self.pos;
            let key = self.keyword()?;
            self.expect('=')?;
            match key.as_str() {
                "n" if n.is_none() => n = Some(self.number()?.0),
                "edges" if edges.is_none() => {
                    let mut list = Vec::new();
                    if !matches!(self.peek(), None | Some(';')) {
                        loop {
                            let (a, at) = self.number()?;
                            self.expect('-')?;
                            let (b, _) = self.number()?;
                            list.push((a, b, at));
                            if !self.eat(',') {
                                break;
                            }
                        }
                    }
                    edges = Some(list);
                }
                _ => return Err(self.at(key_pos, format!("unexpected field '{key}'"))),
            }
            if !self.eat(';') && self.peek().is_some() {
                return Err(self.error("expected ';'"));
            }
        }
        let n = n.ok_or_else(|| self.error("missing field 'n'"))?;
        let edges = edges.ok_or_else(|| self.error("missing field 'edges'"))?;
        for &(a, b, at) in &edges {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(self.at(at, format!("edge {a}-{b} has a vertex outside 1..={n}")));
            }
        }
        let end_error = |e: GraphError| GraphParseError {
            line: self.end.0,
            column: self.end.1,
            message: e.to_string(),
        };
        ZonotopeGraph::new(n, edges.iter().map(|&(a, b, _)| (a, b))).map_err(end_error)
    }
}

impl FromStr for ZonotopeGraph {
    type Err = GraphParseError;

    /// Parses `n=5; edges=1-2,2-3` (whitespace-insensitive) or the JSON form
    /// `{"n":5,"edges":[[1,2],[2,3]]}`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim_start().starts_with('{') {
            let parsed: JsonGraph = serde_json::from_str(s).map_err(|e| GraphParseError {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
            let (line, column) = s
                .lines()
                .enumerate()
                .last()
                .map(|(i, l)| (i + 1, l.chars().count() + 1))
                .unwrap_or((1, 1));
            ZonotopeGraph::new(parsed.n, parsed.edges).map_err(|e| GraphParseError {
                line,
                column,
                message: e.to_string(),
            })
        } else {
            TextParser::new(s).parse()
        }
    }
}

/// A pair of opposite facets: a bipartition of the vertices into two
/// connected parts. `first` always holds vertex 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct FacetPair {
    pub first: VertexSet,
    pub second: VertexSet,
}

impl FacetPair {
    /// Normalizes so that the part containing vertex 1 comes first.
    pub fn from_part(part: VertexSet, all: VertexSet) -> FacetPair {
        let other = all.difference(part);
        if part.contains(1) {
            FacetPair { first: part, second: other }
        } else {
            FacetPair { first: other, second: part }
        }
    }

    /// Whether `a` and `b` lie in the same part.
    pub fn keeps_together(&self, a: usize, b: usize) -> bool {
        self.first.contains(a) == self.first.contains(b)
    }

    fn order_key(&self) -> (usize, Vec<usize>) {
        self.first.size_lex_key()
    }
}

impl Ord for FacetPair {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for FacetPair {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FacetPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} and {}", self.first, self.second)
    }
}

/// A belt: three connected parts. Parts are ordered by their smallest vertex.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Belt {
    pub parts: [VertexSet; 3],
    pub primitive: bool,
    /// The two or three facet pairs obtained by merging two of the parts,
    /// in canonical facet order.
    pub facets: Vec<FacetPair>,
}

impl Belt {
    pub fn keeps_together(&self, a: usize, b: usize) -> bool {
        self.parts.iter().any(|p| p.contains(a) && p.contains(b))
    }

    fn order_key(&self) -> ((usize, Vec<usize>), (usize, Vec<usize>)) {
        (self.parts[0].size_lex_key(), self.parts[1].size_lex_key())
    }
}

impl fmt::Display for Belt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}, and {}", self.parts[0], self.parts[1], self.parts[2])
    }
}

/// The five three-dimensional parallelohedra, as projections of 4D zonotopes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parallelohedron3Kind {
    TruncatedOctahedron,
    ElongatedDodecahedron,
    RhombicDodecahedron,
    HexagonalPrism,
    Cube,
}

impl Parallelohedron3Kind {
    pub fn name(self) -> &'static str {
        match self {
            Parallelohedron3Kind::TruncatedOctahedron => "truncated octahedron",
            Parallelohedron3Kind::ElongatedDodecahedron => "elongated dodecahedron",
            Parallelohedron3Kind::RhombicDodecahedron => "rhombic dodecahedron",
            Parallelohedron3Kind::HexagonalPrism => "hexagonal prism",
            Parallelohedron3Kind::Cube => "cube",
        }
    }
}

impl fmt::Display for Parallelohedron3Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// All connected bipartitions, ordered by the size of the part holding
/// vertex 1 and then lexicographically.
pub fn enumerate_facets(g: &ZonotopeGraph) -> Vec<FacetPair> {
    let all = g.vertices();
    let mut facets: Vec<FacetPair> = (1..all.bits())
        .map(VertexSet::from_bits)
        .filter(|s| s.contains(1) && *s != all)
        .filter(|&s| g.is_connected_subset(s) && g.is_connected_subset(all.difference(s)))
        .map(|s| FacetPair::from_part(s, all))
        .collect();
    facets.sort();
    facets
}

fn subsets_of(set: VertexSet) -> impl Iterator<Item = VertexSet> {
    // Nonempty submasks of `set`, largest first.
    let bits = set.bits();
    let mut sub = bits;
    let mut done = bits == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let current = sub;
        if sub == 0 {
            done = true;
            return None;
        }
        sub = (sub - 1) & bits;
        Some(VertexSet::from_bits(current))
    })
}

/// All connected tripartitions with their primitivity and facet pairs.
pub fn enumerate_belts(g: &ZonotopeGraph) -> Vec<Belt> {
    let all = g.vertices();
    let mut belts = Vec::new();
    for a in subsets_of(all).filter(|s| s.contains(1) && *s != all) {
        if !g.is_connected_subset(a) {
            continue;
        }
        let rest = all.difference(a);
        let anchor = rest.min().expect("rest is nonempty");
        for b in subsets_of(rest).filter(|s| s.contains(anchor) && *s != rest) {
            let c = rest.difference(b);
            if !g.is_connected_subset(b) || !g.is_connected_subset(c) {
                continue;
            }
            belts.push(make_belt(g, [a, b, c]));
        }
    }
    belts.sort_by_key(Belt::order_key);
    belts
}

fn make_belt(g: &ZonotopeGraph, parts: [VertexSet; 3]) -> Belt {
    let all = g.vertices();
    let [a, b, c] = parts;
    let primitive = g.joins(a, b) && g.joins(b, c) && g.joins(a, c);
    let mut facets: Vec<FacetPair> = [(a.union(b), c), (a.union(c), b), (b.union(c), a)]
        .into_iter()
        .filter(|(merged, _)| g.is_connected_subset(*merged))
        .map(|(merged, _)| FacetPair::from_part(merged, all))
        .collect();
    facets.sort();
    Belt { parts, primitive, facets }
}

/// Label map for contracting `{i, j}`: the larger end folds into the smaller
/// and labels above it shift down by one. Index `v - 1` holds the new label.
pub fn contraction_map(n: usize, edge: Edge) -> Vec<usize> {
    let (lo, hi) = normalize_edge(edge.0, edge.1);
    (1..=n)
        .map(|v| match v.cmp(&hi) {
            std::cmp::Ordering::Equal => lo,
            std::cmp::Ordering::Greater => v - 1,
            std::cmp::Ordering::Less => v,
        })
        .collect()
}

/// Glues the ends of `edge`, dropping the loop and merging parallel edges.
pub fn contract(g: &ZonotopeGraph, edge: Edge) -> Result<ZonotopeGraph, GraphError> {
    if !g.has_edge(edge.0, edge.1) {
        return Err(GraphError::MissingEdge(edge.0, edge.1));
    }
    let map = contraction_map(g.n, edge);
    let edges: BTreeSet<Edge> = g
        .edges
        .iter()
        .map(|&(a, b)| normalize_edge(map[a - 1], map[b - 1]))
        .filter(|(a, b)| a != b)
        .collect();
    ZonotopeGraph::new(g.n - 1, edges)
}

/// Image of a vertex set under [`contraction_map`].
pub fn contract_set(set: VertexSet, map: &[usize]) -> VertexSet {
    VertexSet::from_labels(set.iter().map(|v| map[v - 1]))
}

/// All partitions of the vertices into `k` nonempty parts that each induce a
/// connected subgraph. Parts are ordered by their smallest vertex and the
/// partitions by the size-then-lexicographic order of their parts.
pub fn connected_partitions(g: &ZonotopeGraph, k: usize) -> Vec<Vec<VertexSet>> {
    fn extend(
        g: &ZonotopeGraph,
        rest: VertexSet,
        k: usize,
        current: &mut Vec<VertexSet>,
        out: &mut Vec<Vec<VertexSet>>,
    ) {
        if k == 1 {
            if g.is_connected_subset(rest) {
                current.push(rest);
                out.push(current.clone());
                current.pop();
            }
            return;
        }
        let Some(anchor) = rest.min() else {
            return;
        };
        for part in subsets_of(rest).filter(|s| s.contains(anchor) && *s != rest) {
            if rest.difference(part).len() < k - 1 || !g.is_connected_subset(part) {
                continue;
            }
            current.push(part);
            extend(g, rest.difference(part), k - 1, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if k >= 1 && k <= g.n() {
        extend(g, g.vertices(), k, &mut Vec::new(), &mut out);
    }
    out.sort_by_key(|parts| parts.iter().map(|p| p.size_lex_key()).collect::<Vec<_>>());
    out
}

/// Quotient graph that merges each part into one vertex; part `k` (in the
/// given order) becomes vertex `k + 1`.
pub fn quotient(g: &ZonotopeGraph, parts: &[VertexSet]) -> Result<ZonotopeGraph, GraphError> {
    let label = |v: usize| parts.iter().position(|p| p.contains(v)).map(|k| k + 1);
    let mut edges = BTreeSet::new();
    for &(a, b) in &g.edges {
        let (Some(x), Some(y)) = (label(a), label(b)) else {
            return Err(GraphError::VertexOutOfRange { vertex: a.max(b), n: g.n });
        };
        if x != y {
            edges.insert(normalize_edge(x, y));
        }
    }
    ZonotopeGraph::new(parts.len(), edges)
}

/// Recognizes the 3D parallelohedron encoded by a connected 4-vertex graph.
pub fn classify_3d(g: &ZonotopeGraph) -> Result<Parallelohedron3Kind, GraphError> {
    if g.n() != 4 {
        return Err(GraphError::WrongVertexCount { expected: 4, found: g.n() });
    }
    if !g.is_connected_subset(g.vertices()) {
        return Err(GraphError::NotConnected);
    }
    Ok(match g.edge_count() {
        6 => Parallelohedron3Kind::TruncatedOctahedron,
        5 => Parallelohedron3Kind::ElongatedDodecahedron,
        4 if has_triangle(g) => Parallelohedron3Kind::HexagonalPrism,
        4 => Parallelohedron3Kind::RhombicDodecahedron,
        _ => Parallelohedron3Kind::Cube,
    })
}

fn has_triangle(g: &ZonotopeGraph) -> bool {
    (1..=g.n())
        .tuple_combinations()
        .any(|(a, b, c)| g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c))
}

/// Facet pairs and primitive belts that survive projection along `edge`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionSurvivors {
    pub facets: Vec<FacetPair>,
    pub primitive_belts: Vec<Belt>,
}

/// Facet pairs and primitive belts whose partitions keep both ends of `edge`
/// in one part.
pub fn projection_survivors(
    g: &ZonotopeGraph,
    edge: Edge,
) -> Result<ProjectionSurvivors, GraphError> {
    if !g.has_edge(edge.0, edge.1) {
        return Err(GraphError::MissingEdge(edge.0, edge.1));
    }
    let (i, j) = edge;
    let facets = enumerate_facets(g).into_iter().filter(|f| f.keeps_together(i, j)).collect();
    let primitive_belts = enumerate_belts(g)
        .into_iter()
        .filter(|b| b.primitive && b.keeps_together(i, j))
        .collect();
    Ok(ProjectionSurvivors { facets, primitive_belts })
}

/// A block (maximal 2-connected piece, or a bridge) of the graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Block {
    pub vertices: VertexSet,
    pub edges: Vec<Edge>,
}

impl Block {
    /// The block as a graph on its own vertices, relabeled `1..=k` in order.
    pub fn as_graph(&self) -> ZonotopeGraph {
        let labels = self.vertices.labels();
        let index = |v: usize| labels.iter().position(|&x| x == v).expect("vertex in block") + 1;
        ZonotopeGraph::new(labels.len(), self.edges.iter().map(|&(a, b)| (index(a), index(b))))
            .expect("a block is connected")
    }
}

/// Block decomposition (Hopcroft–Tarjan). One block means the zonotope is
/// irreducible; several blocks mean it is the direct product of theirs.
pub fn reducibility(g: &ZonotopeGraph) -> Vec<Block> {
    struct State<'a> {
        g: &'a ZonotopeGraph,
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<Edge>,
        blocks: Vec<Block>,
    }

    fn visit(st: &mut State<'_>, v: usize, parent: usize) {
        st.time += 1;
        st.disc[v] = st.time;
        st.low[v] = st.time;
        for w in st.g.neighbors(v).iter() {
            if st.disc[w] == 0 {
                st.stack.push(normalize_edge(v, w));
                visit(st, w, v);
                st.low[v] = st.low[v].min(st.low[w]);
                if st.low[w] >= st.disc[v] {
                    let mut edges = Vec::new();
                    let target = normalize_edge(v, w);
                    while let Some(e) = st.stack.pop() {
                        edges.push(e);
                        if e == target {
                            break;
                        }
                    }
                    edges.sort_unstable();
                    let vertices = VertexSet::from_labels(edges.iter().flat_map(|&(a, b)| [a, b]));
                    st.blocks.push(Block { vertices, edges });
                }
            } else if w != parent && st.disc[w] < st.disc[v] {
                st.stack.push(normalize_edge(v, w));
                st.low[v] = st.low[v].min(st.disc[w]);
            }
        }
    }

    let mut st = State {
        g,
        disc: vec![0; g.n() + 1],
        low: vec![0; g.n() + 1],
        time: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
    };
    visit(&mut st, 1, 0);
    st.blocks.sort();
    st.blocks
}

/// Every connected simple graph on five vertices, one per isomorphism
/// class (as its canonical form), sorted by edge count and then edges.
pub fn enumerate_candidate_graphs() -> Vec<ZonotopeGraph> {
    connected_graph_classes(5)
}

/// Canonical representatives of all connected graphs on `n` vertices.
pub fn connected_graph_classes(n: usize) -> Vec<ZonotopeGraph> {
    let pairs: Vec<Edge> = (1..=n).tuple_combinations().collect();
    let mut classes = BTreeSet::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges = pairs.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &e)| e);
        if let Ok(g) = ZonotopeGraph::new(n, edges) {
            classes.insert(g.canonical_form());
        }
    }
    let mut out: Vec<ZonotopeGraph> = classes.into_iter().collect();
    out.sort_by(|a, b| (a.edge_count(), &a.edges).cmp(&(b.edge_count(), &b.edges)));
    out
}

/// The zonotope discussed as the worked example: a 5-cycle with chord 2-5.
pub fn house_graph() -> ZonotopeGraph {
    ZonotopeGraph::new(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (2, 5)])
        .expect("valid graph")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(labels: &[usize]) -> VertexSet {
        VertexSet::from_labels(labels.iter().copied())
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> ZonotopeGraph {
        ZonotopeGraph::new(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn rejects_invalid_graphs() {
        assert_eq!(ZonotopeGraph::new(3, [(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(ZonotopeGraph::new(3, [(1, 2), (2, 1), (2, 3)]), Err(GraphError::ParallelEdge(1, 2)));
        assert_eq!(ZonotopeGraph::new(4, [(1, 2), (3, 4)]), Err(GraphError::NotConnected));
        assert!(matches!(ZonotopeGraph::new(3, [(1, 4)]), Err(GraphError::VertexOutOfRange { .. })));
        assert!(ZonotopeGraph::new(1, []).is_ok());
    }

    #[test]
    fn house_facets_match_worked_example() {
        let facets = enumerate_facets(&house_graph());
        let expected: Vec<(Vec<usize>, Vec<usize>)> = vec![
            (vec![1], vec![2, 3, 4, 5]),
            (vec![1, 2], vec![3, 4, 5]),
            (vec![1, 5], vec![2, 3, 4]),
            (vec![1, 2, 3], vec![4, 5]),
            (vec![1, 2, 5], vec![3, 4]),
            (vec![1, 4, 5], vec![2, 3]),
            (vec![1, 2, 3, 4], vec![5]),
            (vec![1, 2, 3, 5], vec![4]),
            (vec![1, 2, 4, 5], vec![3]),
            (vec![1, 3, 4, 5], vec![2]),
        ];
        let got: Vec<_> = facets.iter().map(|f| (f.first.labels(), f.second.labels())).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn path_facets_are_prefix_splits() {
        let facets = enumerate_facets(&ZonotopeGraph::path(5).unwrap());
        assert_eq!(facets.len(), 4);
        for (k, f) in facets.iter().enumerate() {
            assert_eq!(f.first, VertexSet::from_labels(1..=k + 1));
        }
    }

    #[test]
    fn complete_graph_facets_brute_force() {
        // Oracle: every proper nonempty subset containing 1 gives a bipartition.
        let expected = (1u32..32).filter(|m| m & 1 == 1 && *m != 31).count();
        assert_eq!(expected, 15);
        assert_eq!(enumerate_facets(&ZonotopeGraph::complete(5).unwrap()).len(), expected);
    }

    #[test]
    fn house_belts_match_worked_example() {
        let belts = enumerate_belts(&house_graph());
        assert_eq!(belts.len(), 13);
        assert_eq!(belts.iter().filter(|b| b.primitive).count(), 10);
        let f3 = &belts[2];
        assert_eq!(f3.parts, [set(&[1]), set(&[2, 5]), set(&[3, 4])]);
        assert!(!f3.primitive);
        let facets = enumerate_facets(&house_graph());
        assert_eq!(f3.facets, vec![facets[0], facets[4]]);
        let non_primitive: Vec<usize> =
            belts.iter().enumerate().filter(|(_, b)| !b.primitive).map(|(i, _)| i + 1).collect();
        assert_eq!(non_primitive, vec![3, 5, 6]);
        assert_eq!(belts[12].parts, [set(&[1, 4, 5]), set(&[2]), set(&[3])]);
    }

    #[test]
    fn five_cycle_belts_all_primitive() {
        // Oracle: brute-force all labelings of C5 into three nonempty arcs.
        let g = ZonotopeGraph::cycle(5).unwrap();
        let mut count = 0;
        for labels in itertools::repeat_n(0..3usize, 5).multi_cartesian_product() {
            let parts: Vec<VertexSet> = (0..3)
                .map(|p| VertexSet::from_labels((1..=5).filter(|v| labels[v - 1] == p)))
                .collect();
            if parts.iter().all(|&p| g.is_connected_subset(p)) {
                count += 1;
                assert!(g.joins(parts[0], parts[1]) && g.joins(parts[1], parts[2]) && g.joins(parts[0], parts[2]));
            }
        }
        let belts = enumerate_belts(&g);
        assert_eq!(belts.len() * 6, count);
        assert!(belts.iter().all(|b| b.primitive && b.facets.len() == 3));
    }

    #[test]
    fn contraction_examples() {
        let g = house_graph();
        let c45 = contract(&g, (4, 5)).unwrap();
        assert_eq!(classify_3d(&c45).unwrap(), Parallelohedron3Kind::ElongatedDodecahedron);
        let c25 = contract(&g, (2, 5)).unwrap();
        assert_eq!(c25.edge_count(), 4);
        assert_eq!(classify_3d(&c25).unwrap(), Parallelohedron3Kind::HexagonalPrism);
        let k5 = ZonotopeGraph::complete(5).unwrap();
        assert_eq!(contract(&k5, (1, 3)).unwrap(), ZonotopeGraph::complete(4).unwrap());
        assert_eq!(contract(&g, (1, 3)), Err(GraphError::MissingEdge(1, 3)));
    }

    #[test]
    fn classify_all_four_vertex_graphs() {
        let classes = connected_graph_classes(4);
        assert_eq!(classes.len(), 6);
        let kinds: Vec<_> = classes.iter().map(|g| classify_3d(g).unwrap()).collect();
        assert_eq!(kinds.iter().filter(|k| **k == Parallelohedron3Kind::Cube).count(), 2);
        assert_eq!(classify_3d(&ZonotopeGraph::complete(4).unwrap()).unwrap(), Parallelohedron3Kind::TruncatedOctahedron);
        assert_eq!(classify_3d(&ZonotopeGraph::cycle(4).unwrap()).unwrap(), Parallelohedron3Kind::RhombicDodecahedron);
        let star = graph(4, &[(1, 2), (1, 3), (1, 4)]);
        assert_eq!(classify_3d(&star).unwrap(), Parallelohedron3Kind::Cube);
        assert!(classify_3d(&house_graph()).is_err());
    }

    #[test]
    fn survivors_of_house_projections() {
        let g = house_graph();
        let facets = enumerate_facets(&g);
        let index = |f: &FacetPair| facets.iter().position(|x| x == f).unwrap() + 1;
        let s45 = projection_survivors(&g, (4, 5)).unwrap();
        assert_eq!(s45.facets.iter().map(index).collect::<Vec<_>>(), vec![1, 2, 4, 6, 9, 10]);
        let s25 = projection_survivors(&g, (2, 5)).unwrap();
        assert_eq!(s25.facets.iter().map(index).collect::<Vec<_>>(), vec![1, 5, 8, 9]);
        let path = ZonotopeGraph::path(5).unwrap();
        assert_eq!(projection_survivors(&path, (1, 2)).unwrap().facets.len(), 3);
    }

    #[test]
    fn survivors_biject_with_contracted_facets() {
        for g in enumerate_candidate_graphs() {
            for &e in g.edges() {
                let map = contraction_map(g.n(), e);
                let contracted = contract(&g, e).unwrap();
                let surv = projection_survivors(&g, e).unwrap();
                let mapped: BTreeSet<_> = surv
                    .facets
                    .iter()
                    .map(|f| FacetPair::from_part(contract_set(f.first, &map), contracted.vertices()))
                    .collect();
                let direct: BTreeSet<_> = enumerate_facets(&contracted).into_iter().collect();
                assert_eq!(mapped, direct, "{g} along {e:?}");
                let prim = enumerate_belts(&contracted).into_iter().filter(|b| b.primitive).count();
                assert_eq!(surv.primitive_belts.len(), prim);
            }
        }
    }

    #[test]
    fn blocks() {
        assert_eq!(reducibility(&house_graph()).len(), 1);
        let bowtie = graph(5, &[(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5)]);
        let blocks = reducibility(&bowtie);
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].vertices, set(&[1, 2, 3]));
        assert_eq!(blocks[1].as_graph(), ZonotopeGraph::complete(3).unwrap());
        for tree in [ZonotopeGraph::path(5).unwrap(), graph(5, &[(1, 2), (1, 3), (1, 4), (1, 5)])] {
            assert_eq!(reducibility(&tree).len(), 4);
        }
    }

    #[test]
    fn twenty_one_connected_five_vertex_graphs() {
        let graphs = enumerate_candidate_graphs();
        assert_eq!(graphs.len(), 21);
        let trees = graphs.iter().filter(|g| g.edge_count() == 4).count();
        assert_eq!(trees, 3);
        for (i, a) in graphs.iter().enumerate() {
            for b in &graphs[i + 1..] {
                assert!(!a.is_isomorphic(b));
            }
        }
    }

    #[test]
    fn every_belt_has_two_or_three_facets() {
        for g in enumerate_candidate_graphs() {
            for b in enumerate_belts(&g) {
                assert_eq!(b.primitive, b.facets.len() == 3, "{g}: {b}");
                assert!(b.facets.len() == 2 || b.facets.len() == 3);
            }
        }
    }

    #[test]
    fn text_format_round_trip() {
        let g: ZonotopeGraph = " n = 5 ;\n edges = 1-2, 2-3,3-4,4-5,5-1,2-5".parse().unwrap();
        assert_eq!(g, house_graph());
        assert_eq!(g.to_string().parse::<ZonotopeGraph>().unwrap(), g);
        let j: ZonotopeGraph = r#"{"n":5,"edges":[[1,2],[2,3],[3,4],[4,5],[5,1],[2,5]]}"#.parse().unwrap();
        assert_eq!(j, g);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = "n=5; edges=1-2,2x3".parse::<ZonotopeGraph>().unwrap_err();
        assert_eq!((err.line, err.column), (1, 17));
        let err = "n=5;\nedges=1-2,3-9".parse::<ZonotopeGraph>().unwrap_err();
        assert_eq!((err.line, err.column), (2, 11));
        let err = "n=4; edges=1-2,3-4".parse::<ZonotopeGraph>().unwrap_err();
        assert!(err.message.contains("graph not connected"));
        let err = r#"{"n":4,"edges":[[1,2],[3,4]]}"#.parse::<ZonotopeGraph>().unwrap_err();
        assert!(err.message.contains("graph not connected"));
        assert!("n=5".parse::<ZonotopeGraph>().is_err());
    }

    #[test]
    fn four_part_partitions_of_five_vertices_are_edges() {
        for g in enumerate_candidate_graphs() {
            let parts = connected_partitions(&g, 4);
            assert_eq!(parts.len(), g.edge_count(), "{g}");
            for p in &parts {
                let merged: Vec<VertexSet> = p.iter().copied().filter(|s| s.len() == 2).collect();
                assert_eq!(merged.len(), 1);
                let labels = merged[0].labels();
                let edge = (labels[0], labels[1]);
                assert!(g.has_edge(edge.0, edge.1));
                assert_eq!(quotient(&g, p).unwrap().canonical_form(), contract(&g, edge).unwrap().canonical_form());
            }
        }
    }

    #[test]
    fn partitions_match_facets_and_belts() {
        // Two-part and three-part connected partitions are the facet pairs
        // and belts.
        for g in enumerate_candidate_graphs() {
            assert_eq!(connected_partitions(&g, 2).len(), enumerate_facets(&g).len());
            assert_eq!(connected_partitions(&g, 3).len(), enumerate_belts(&g).len());
            assert_eq!(connected_partitions(&g, 5).len(), 1);
            assert!(connected_partitions(&g, 6).is_empty());
        }
        let c4 = ZonotopeGraph::cycle(4).unwrap();
        assert_eq!(connected_partitions(&c4, 4), vec![(1..=4).map(|v| VertexSet::from_labels([v])).collect::<Vec<_>>()]);
    }
}
