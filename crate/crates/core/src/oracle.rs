//! Facets and belts of a zonotope computed directly from its generators.
//!
//! A zonotope of rank `r` has one pair of opposite facets for every flat of
//! rank `r - 1` of its generator matroid, and one belt for every flat of rank
//! `r - 2`. The facets of a belt are parallel to the generators of its flat;
//! it has two facets for every direction class of the remaining generators
//! modulo the flat.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::linalg::{dot, primitive_integer, rank_of, RatMatrix, RatVector, Rational, RowSpan};
use crate::zonograph::{enumerate_belts, enumerate_facets, ZonotopeGraph};

/// Nonzero, pairwise non-parallel rational zone vectors of one ambient
/// dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<RatVector>", into = "Vec<RatVector>")]
pub struct GeneratorSet {
    vectors: Vec<RatVector>,
    dim: usize,
    rank: usize,
}

impl GeneratorSet {
    pub fn new(vectors: Vec<RatVector>) -> Result<Self, OracleError> {
        let dim = vectors.first().map_or(0, Vec::len);
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(OracleError::Ragged);
        }
        if let Some(i) = vectors.iter().position(|v| v.iter().all(Rational::is_zero)) {
            return Err(OracleError::ZeroGenerator(i));
        }
        for (i, j) in (0..vectors.len()).tuple_combinations() {
            if rank_of(dim, [&vectors[i][..], &vectors[j][..]]) < 2 {
                return Err(OracleError::ParallelGenerators(i, j));
            }
        }
        let rank = rank_of(dim, vectors.iter().map(Vec::as_slice));
        Ok(GeneratorSet { vectors, dim, rank })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self, OracleError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect())
    }

    pub fn vectors(&self) -> &[RatVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the zonotope.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Image of every generator under `x -> m x`.
    pub fn transformed(&self, m: &RatMatrix) -> Result<GeneratorSet, OracleError> {
        let images = self.vectors.iter().map(|v| m.mul_vec(v)).collect::<Result<Vec<_>, _>>()?;
        GeneratorSet::new(images)
    }

    fn span_rank(&self, members: &[usize]) -> usize {
        rank_of(self.dim, members.iter().map(|&i| &self.vectors[i][..]))
    }

    /// All generators lying in the span of `members`.
    fn closure(&self, members: &[usize]) -> Vec<usize> {
        let mut span = RowSpan::new(self.dim);
        for &i in members {
            span.insert(&self.vectors[i]);
        }
        (0..self.vectors.len()).filter(|&i| span.contains(&self.vectors[i])).collect()
    }

    /// Flats of the given rank, each as its sorted generator indices.
    pub fn flats(&self, rank: usize) -> Vec<Vec<usize>> {
        let mut out = BTreeSet::new();
        for subset in (0..self.vectors.len()).combinations(rank) {
            if self.span_rank(&subset) == rank {
                out.insert(self.closure(&subset));
            }
        }
        out.into_iter().collect()
    }
}

impl TryFrom<Vec<RatVector>> for GeneratorSet {
    type Error = OracleError;

    fn try_from(vectors: Vec<RatVector>) -> Result<Self, Self::Error> {
        GeneratorSet::new(vectors)
    }
}

impl From<GeneratorSet> for Vec<RatVector> {
    fn from(g: GeneratorSet) -> Self {
        g.vectors
    }
}

/// All proper nonempty flats of the generator matroid as bitmasks over
/// generator indices, grouped by rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatLattice {
    generators: usize,
    by_rank: Vec<BTreeSet<u64>>,
}

impl FlatLattice {
    pub fn new(gens: &GeneratorSet) -> Self {
        assert!(gens.len() <= 64);
        let by_rank = (1..gens.rank)
            .map(|r| gens.flats(r).iter().map(|f| f.iter().fold(0u64, |acc, &i| acc | 1 << i)).collect())
            .collect();
        FlatLattice { generators: gens.len(), by_rank }
    }

    /// Number of flats of each rank, starting with rank 1.
    pub fn counts(&self) -> Vec<usize> {
        self.by_rank.iter().map(BTreeSet::len).collect()
    }

    /// Searches for a bijection of generators carrying flats onto flats of
    /// the same rank, i.e. a matroid isomorphism.
    pub fn is_isomorphic(&self, other: &FlatLattice) -> bool {
        if self.generators != other.generators || self.counts() != other.counts() {
            return false;
        }
        let mut map = Vec::with_capacity(self.generators);
        self.extend(other, &mut map, 0)
    }

    fn image(map: &[usize], set: u64) -> u64 {
        map.iter().enumerate().filter(|(i, _)| set & (1 << i) != 0).fold(0, |acc, (_, &j)| acc | 1 << j)
    }

    fn consistent(&self, other: &FlatLattice, map: &[usize]) -> bool {
        let k = map.len() - 1;
        let domain: u64 = (1u64 << map.len()) - 1;
        let range: u64 = map.iter().fold(0, |acc, &j| acc | 1 << j);
        let newest = map[k];
        self.by_rank.iter().zip(&other.by_rank).all(|(mine, theirs)| {
            let forward = mine
                .iter()
                .filter(|&&f| f & (1 << k) != 0 && f & !domain == 0)
                .all(|&f| theirs.contains(&Self::image(map, f)));
            let backward = theirs
                .iter()
                .filter(|&&f| f & (1 << newest) != 0 && f & !range == 0)
                .count()
                == mine.iter().filter(|&&f| f & (1 << k) != 0 && f & !domain == 0).count();
            forward && backward
        })
    }

    fn extend(&self, other: &FlatLattice, map: &mut Vec<usize>, used: u64) -> bool {
        if map.len() == self.generators {
            return true;
        }
        for cand in 0..other.generators {
            if used & (1 << cand) != 0 {
                continue;
            }
            map.push(cand);
            if self.consistent(other, map) && self.extend(other, map, used | 1 << cand) {
                return true;
            }
            map.pop();
        }
        false
    }
}

/// A pair of opposite facets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetClass {
    /// Primitive integer normal inside the span of the generators, with its
    /// first nonzero coordinate positive.
    pub normal: RatVector,
    /// Generators parallel to the facets.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeltClass {
    /// Generators parallel to the codimension-2 faces of the belt.
    pub flat: Vec<usize>,
    /// Number of facets in the belt.
    pub size: usize,
    /// Indices into the facet classes of the facets in the belt.
    pub facets: Vec<usize>,
}

pub fn pi_generators(g: &ZonotopeGraph) -> GeneratorSet {
    let vectors = g
        .edges()
        .iter()
        .map(|&(i, j)| {
            let mut v = vec![Rational::zero(); g.n()];
            v[i - 1] = Rational::one();
            v[j - 1] = Rational::from(-1);
            v
        })
        .collect();
    GeneratorSet::new(vectors).expect("edges of a simple graph give distinct directions")
}

fn normal_of(gens: &GeneratorSet, basis: &[RatVector], members: &[usize]) -> RatVector {
    let rows: Vec<RatVector> =
        members.iter().map(|&m| basis.iter().map(|b| dot(b, &gens.vectors[m])).collect()).collect();
    let a = RatMatrix::from_rows(basis.len(), rows).expect("rectangular");
    let null = a.nullspace();
    assert_eq!(null.len(), 1, "a hyperplane flat has a one-dimensional normal space");
    let mut normal = vec![Rational::zero(); gens.dim];
    for (c, b) in null[0].iter().zip(basis) {
        for (x, y) in normal.iter_mut().zip(b) {
            *x += &(c * y);
        }
    }
    let mut ints: RatVector = primitive_integer(&normal).into_iter().map(Rational::from).collect();
    if ints.iter().find(|x| !x.is_zero()).is_some_and(Rational::is_negative) {
        ints = ints.into_iter().map(|x| -x).collect();
    }
    ints
}

fn require_rank(gens: &GeneratorSet) -> Result<(), OracleError> {
    if gens.rank < 2 {
        Err(OracleError::RankTooSmall(gens.rank))
    } else {
        Ok(())
    }
}

pub fn oracle_facets(gens: &GeneratorSet) -> Result<Vec<FacetClass>, OracleError> {
    require_rank(gens)?;
    let all: Vec<&[Rational]> = gens.vectors.iter().map(Vec::as_slice).collect();
    let m = RatMatrix::from_rows(gens.dim, all.iter().map(|v| v.to_vec()).collect())?;
    let (reduced, pivots) = m.rref();
    let basis: Vec<RatVector> = (0..pivots.len()).map(|r| reduced.row(r).to_vec()).collect();
    Ok(gens
        .flats(gens.rank - 1)
        .into_iter()
        .map(|members| FacetClass { normal: normal_of(gens, &basis, &members), members })
        .collect())
}

pub fn oracle_belts(gens: &GeneratorSet) -> Result<Vec<BeltClass>, OracleError> {
    let facets = oracle_facets(gens)?;
    let mut out = Vec::new();
    for flat in gens.flats(gens.rank - 2) {
        let rest: Vec<usize> = (0..gens.len()).filter(|i| !flat.contains(i)).collect();
        // Direction classes modulo the flat, compared by an exact rank test.
        let mut classes: Vec<usize> = Vec::new();
        for &g in &rest {
            let fresh = classes.iter().all(|&c| {
                let mut probe = flat.clone();
                probe.extend([c, g]);
                gens.span_rank(&probe) > gens.rank - 1
            });
            if fresh {
                classes.push(g);
            }
        }
        let members: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter(|(_, f)| flat.iter().all(|i| f.members.contains(i)))
            .map(|(k, _)| k)
            .collect();
        assert_eq!(members.len(), classes.len(), "every direction class spans one facet");
        out.push(BeltClass { flat, size: 2 * classes.len(), facets: members });
    }
    Ok(out)
}

/// The graphical zonotope of `K_{3,3}`: the nine edge indicator vectors
/// projected orthogonally onto the cycle space, in coordinates of a
/// fundamental-cycle basis.
///
/// Vertices are `a0, a1, a2, b0, b1, b2`; edge `a_i b_j` has index `3i + j`
/// and is oriented from `a_i` to `b_j`.
pub fn k33_generators() -> GeneratorSet {
    // Spanning tree: a0b0, a0b1, a0b2, a1b0, a2b0.
    let chords = [(1, 1), (1, 2), (2, 1), (2, 2)];
    let idx = |(i, j): (usize, usize)| 3 * i + j;
    // Chord a_i b_j closes a_i b_j, b_j a_0, a_0 b_0, b_0 a_i.
    let cycles: Vec<RatVector> = chords
        .iter()
        .map(|&(i, j)| {
            let mut c = vec![Rational::zero(); 9];
            c[idx((i, j))] += &Rational::one();
            c[idx((0, j))] -= &Rational::one();
            c[idx((0, 0))] += &Rational::one();
            c[idx((i, 0))] -= &Rational::one();
            c
        })
        .collect();
    let ct = RatMatrix::from_rows(9, cycles).expect("rectangular");
    let gram = ct.mul(&ct.transpose()).expect("shapes agree");
    let coords = gram.inverse().expect("cycles are independent").mul(&ct).expect("shapes agree");
    let vectors = (0..9).map(|e| (0..4).map(|r| coords.get(r, e).clone()).collect()).collect();
    GeneratorSet::new(vectors).expect("K33 has no parallel edge projections")
}

/// Result of comparing the graph calculus with the oracle on one graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crosscheck {
    pub graph: ZonotopeGraph,
    pub graph_facets: usize,
    pub oracle_facets: usize,
    pub graph_belts: usize,
    pub oracle_belts: usize,
    /// Oracle belt sizes with their multiplicities.
    pub belt_sizes: BTreeMap<usize, usize>,
    pub facet_bijection: bool,
    pub belt_bijection: bool,
    pub size_law: bool,
}

impl Crosscheck {
    pub fn pass(&self) -> bool {
        self.facet_bijection && self.belt_bijection && self.size_law
    }
}

/// Matches facet pairs and belts of `g` against the oracle by zone
/// membership: a partition corresponds to the flat of edges not crossing it.
pub fn crosscheck(g: &ZonotopeGraph) -> Result<Crosscheck, OracleError> {
    let gens = pi_generators(g);
    let facets = oracle_facets(&gens)?;
    let belts = oracle_belts(&gens)?;
    let edges = g.edges();
    let inside = |parts: &[crate::zonograph::VertexSet]| -> Vec<usize> {
        (0..edges.len())
            .filter(|&k| parts.iter().any(|p| p.contains(edges[k].0) && p.contains(edges[k].1)))
            .collect()
    };
    let graph_facets = enumerate_facets(g);
    let graph_belts = enumerate_belts(g);
    let facet_flats: BTreeSet<Vec<usize>> = facets.iter().map(|f| f.members.clone()).collect();
    let from_graph: BTreeSet<Vec<usize>> =
        graph_facets.iter().map(|f| inside(&[f.first, f.second])).collect();
    let facet_bijection = graph_facets.len() == facets.len() && from_graph == facet_flats;
    let by_flat: BTreeMap<&Vec<usize>, &BeltClass> = belts.iter().map(|b| (&b.flat, b)).collect();
    let belt_bijection = graph_belts.len() == belts.len()
        && graph_belts.iter().all(|b| {
            by_flat.get(&inside(&b.parts)).is_some_and(|o| {
                o.size == if b.primitive { 6 } else { 4 } && o.facets.len() == b.facets.len()
            })
        });
    let mut belt_sizes = BTreeMap::new();
    for b in &belts {
        *belt_sizes.entry(b.size).or_insert(0) += 1;
    }
    let size_law = belt_sizes.keys().all(|s| *s == 4 || *s == 6);
    Ok(Crosscheck {
        graph: g.clone(),
        graph_facets: graph_facets.len(),
        oracle_facets: facets.len(),
        graph_belts: graph_belts.len(),
        oracle_belts: belts.len(),
        belt_sizes,
        facet_bijection,
        belt_bijection,
        size_law,
    })
}
