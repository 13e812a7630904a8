//! The star of the origin in the Delone tiling of `D4` by cross-polytopes and
//! in its refinements by families of parallel hyperplanes.
//!
//! `D4` is the lattice of integer vectors with even coordinate sum. Its
//! Delone tiling consists of three translation classes of regular
//! 4-dimensional cross-polytopes, with centers in `e1 + D4`,
//! `(1/2,1/2,1/2,1/2) + D4` and `(-1/2,1/2,1/2,1/2) + D4`. A slicing
//! configuration cuts every tile of a family through its center by up to
//! three hyperplanes, each orthogonal to one of the tile's axes.
//!
//! Only faces through the origin are modeled; by lattice transitivity they
//! determine the whole tiling. Dual to them, origin edges up to sign are the
//! facet pairs of the Voronoi cell, origin triangles are its primitive
//! codimension-2 faces, and origin 3-faces whose 2-faces at the origin are
//! all triangles give trivially contractible cycles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{DeloneError, PolytopeError};
use crate::linalg::{RatVector, Rational};
use crate::polytope::Polytope;
use crate::venkov::{add_belt_edges, half_belt_cycles, stacked_rank, CycleVector, VenkovGraph};

pub type LatticePoint = [i64; 4];

const ORIGIN: LatticePoint = [0; 4];

fn add(a: LatticePoint, b: LatticePoint) -> LatticePoint {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn sub(a: LatticePoint, b: LatticePoint) -> LatticePoint {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

fn neg(a: LatticePoint) -> LatticePoint {
    [-a[0], -a[1], -a[2], -a[3]]
}

fn idot(a: LatticePoint, b: LatticePoint) -> i64 {
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

pub fn in_d4(p: LatticePoint) -> bool {
    p.iter().sum::<i64>() % 2 == 0
}

/// A basis of `D4`.
pub const D4_BASIS: [LatticePoint; 4] = [[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1], [0, 0, 1, 1]];

/// The representative of an edge class `{a, -a}`: the one whose first
/// nonzero coordinate is positive.
pub fn edge_class(a: LatticePoint) -> LatticePoint {
    match a.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => neg(a),
        _ => a,
    }
}

fn to_rational(p: LatticePoint) -> RatVector {
    p.iter().map(|&x| Rational::from(x)).collect()
}

fn to_lattice(v: &[Rational]) -> LatticePoint {
    let mut out = [0; 4];
    for (o, x) in out.iter_mut().zip(v) {
        *o = x.to_i64().expect("tiling vertices are integral");
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CrossFamily {
    F1,
    F2,
    F3,
}

impl CrossFamily {
    pub const ALL: [CrossFamily; 3] = [CrossFamily::F1, CrossFamily::F2, CrossFamily::F3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            CrossFamily::F1 => "F1",
            CrossFamily::F2 => "F2",
            CrossFamily::F3 => "F3",
        }
    }

    /// Twice the center of the representative cross-polytope.
    pub fn doubled_center(self) -> LatticePoint {
        match self {
            CrossFamily::F1 => [2, 0, 0, 0],
            CrossFamily::F2 => [1, 1, 1, 1],
            CrossFamily::F3 => [-1, 1, 1, 1],
        }
    }

    /// Twice the four half-diagonals of the representative; its vertices are
    /// `center ± axis`. The first axis points from the origin to the center.
    pub fn doubled_axes(self) -> [LatticePoint; 4] {
        match self {
            CrossFamily::F1 => [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]],
            CrossFamily::F2 => [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]],
            CrossFamily::F3 => [[-1, 1, 1, 1], [-1, 1, -1, -1], [-1, -1, 1, -1], [-1, -1, -1, 1]],
        }
    }

    /// Vertices `center - axis_k, center + axis_k` for `k = 0..4`.
    pub fn representative(self) -> Vec<LatticePoint> {
        let c = self.doubled_center();
        self.doubled_axes()
            .iter()
            .flat_map(|u| {
                let lo = sub(c, *u);
                let hi = add(c, *u);
                [lo.map(|x| x / 2), hi.map(|x| x / 2)]
            })
            .collect()
    }
}

impl fmt::Display for CrossFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Hyperplanes `<normal, x> = offset` with `offset` in `base + step Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperplaneFamily {
    pub family: CrossFamily,
    /// The axis of the representative the hyperplanes are orthogonal to.
    pub axis: usize,
    pub normal: LatticePoint,
    pub base: i64,
    pub step: i64,
}

impl HyperplaneFamily {
    /// The family extending the equator of the representative orthogonal to
    /// `axis`, made periodic under `D4`.
    pub fn through_equator(family: CrossFamily, axis: usize) -> Self {
        let u = family.doubled_axes()[axis];
        let g = u.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        let normal = u.map(|x| x / g);
        let doubled = idot(normal, family.doubled_center());
        assert!(doubled % 2 == 0, "centers pair integrally with axis normals");
        let step = D4_BASIS.iter().fold(0i64, |acc, b| acc.gcd(&idot(normal, *b)));
        HyperplaneFamily { family, axis, normal, base: (doubled / 2).rem_euclid(step), step }
    }

    pub fn contains_offset(&self, offset: i64) -> bool {
        (offset - self.base).rem_euclid(self.step) == 0
    }

    /// Offsets of member hyperplanes strictly between `lo` and `hi`.
    fn offsets_between(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo + 1..hi).filter(|&o| self.contains_offset(o)).collect()
    }
}

fn window_translations(radius: i64) -> Vec<LatticePoint> {
    let r = -radius..=radius;
    itertools::iproduct!(r.clone(), r.clone(), r.clone(), r)
        .map(|(a, b, c, d)| [a, b, c, d])
        .filter(|p| in_d4(*p))
        .collect()
}

/// Checks that `h` cuts every tile of its own family exactly through an
/// equator, and misses the interiors of all other tiles, on every tile
/// meeting the box `[-2, 2]^4`; by periodicity this covers all tiles.
pub fn check_family(h: &HyperplaneFamily) -> Result<(), DeloneError> {
    for family in CrossFamily::ALL {
        let rep = family.representative();
        for d in window_translations(2) {
            let values: Vec<i64> = rep.iter().map(|v| idot(h.normal, add(*v, d))).collect();
            let (lo, hi) = (*values.iter().min().expect("8 vertices"), *values.iter().max().expect("8 vertices"));
            let cutting = h.offsets_between(lo, hi);
            if family != h.family {
                if let Some(o) = cutting.first() {
                    return Err(DeloneError::InadmissibleSlice(format!(
                        "hyperplane <{:?}, x> = {o} cuts a tile of {family}",
                        h.normal
                    )));
                }
                continue;
            }
            let equator = match cutting.as_slice() {
                [o] => *o,
                _ => {
                    return Err(DeloneError::InadmissibleSlice(format!(
                        "a tile of {family} is cut by {} hyperplanes of the family",
                        cutting.len()
                    )))
                }
            };
            let on = values.iter().filter(|&&x| x == equator).count();
            let below = values.iter().filter(|&&x| x < equator).count();
            if on != 6 || below != 1 {
                return Err(DeloneError::InadmissibleSlice(format!(
                    "hyperplane <{:?}, x> = {equator} misses the equator of a tile of {family}",
                    h.normal
                )));
            }
        }
    }
    Ok(())
}

/// Hyperplane families that refine the tiling without new vertices and cut
/// only `f`, in axis order.
pub fn admissible_families(f: CrossFamily) -> Vec<HyperplaneFamily> {
    static CACHE: OnceLock<Vec<Vec<HyperplaneFamily>>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            CrossFamily::ALL
                .iter()
                .map(|&fam| {
                    (0..4)
                        .map(|axis| HyperplaneFamily::through_equator(fam, axis))
                        .filter(|h| check_family(h).is_ok())
                        .collect()
                })
                .collect()
        })[f.index()]
        .clone()
}

/// Chosen hyperplane families per cross-polytope family, as indices into
/// [`admissible_families`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlicingConfig {
    #[serde(rename = "F1", default)]
    pub f1: Vec<usize>,
    #[serde(rename = "F2", default)]
    pub f2: Vec<usize>,
    #[serde(rename = "F3", default)]
    pub f3: Vec<usize>,
}

impl SlicingConfig {
    pub fn new(f1: Vec<usize>, f2: Vec<usize>, f3: Vec<usize>) -> Result<Self, DeloneError> {
        let cfg = SlicingConfig { f1, f2, f3 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn chosen(&self, f: CrossFamily) -> &[usize] {
        match f {
            CrossFamily::F1 => &self.f1,
            CrossFamily::F2 => &self.f2,
            CrossFamily::F3 => &self.f3,
        }
    }

    fn chosen_mut(&mut self, f: CrossFamily) -> &mut Vec<usize> {
        match f {
            CrossFamily::F1 => &mut self.f1,
            CrossFamily::F2 => &mut self.f2,
            CrossFamily::F3 => &mut self.f3,
        }
    }

    pub fn validate(&self) -> Result<(), DeloneError> {
        for f in CrossFamily::ALL {
            let chosen = self.chosen(f);
            let available = admissible_families(f).len();
            if let Some(i) = chosen.iter().find(|&&i| i >= available) {
                return Err(DeloneError::InadmissibleConfig(format!(
                    "{f}: direction {i} out of range (only {available} admissible)"
                )));
            }
            if chosen.iter().collect::<BTreeSet<_>>().len() != chosen.len() {
                return Err(DeloneError::InadmissibleConfig(format!("{f}: a direction is repeated")));
            }
            if chosen.len() > 3 {
                return Err(DeloneError::InadmissibleConfig(format!(
                    "{f}: {} families cut one cross-polytope family; at most 3 keep the vertex set",
                    chosen.len()
                )));
            }
        }
        Ok(())
    }

    pub fn counts(&self) -> [usize; 3] {
        CrossFamily::ALL.map(|f| self.chosen(f).len())
    }

    /// Every valid configuration, in lexicographic order of sorted subsets.
    pub fn all() -> Vec<SlicingConfig> {
        let subsets = |f: CrossFamily| -> Vec<Vec<usize>> {
            let n = admissible_families(f).len();
            (0..=n.min(3)).flat_map(|k| (0..n).combinations(k)).collect()
        };
        itertools::iproduct!(subsets(CrossFamily::F1), subsets(CrossFamily::F2), subsets(CrossFamily::F3))
            .map(|(f1, f2, f3)| SlicingConfig { f1, f2, f3 })
            .collect()
    }

    /// Whether every family is cut 0, 1 or 3 times.
    pub fn is_zhitomirskii(&self) -> bool {
        self.counts().iter().all(|&c| c != 2)
    }

    /// The configuration keeping only the families cut three times.
    pub fn triple_cut_part(&self) -> SlicingConfig {
        let mut out = self.clone();
        for f in CrossFamily::ALL {
            if out.chosen(f).len() != 3 {
                out.chosen_mut(f).clear();
            }
        }
        out
    }

    fn sorted(&self) -> SlicingConfig {
        let mut out = self.clone();
        for f in CrossFamily::ALL {
            out.chosen_mut(f).sort_unstable();
        }
        out
    }
}

impl fmt::Display for SlicingConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[usize]| v.iter().map(ToString::to_string).join(",");
        write!(f, "F1=[{}] F2=[{}] F3=[{}]", show(&self.f1), show(&self.f2), show(&self.f3))
    }
}

/// A face of a lattice polytope: sorted vertex indices and dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
struct PieceFace {
    dim: usize,
    vertices: Vec<usize>,
}

/// A polytope with integral vertices and integral facet inequalities.
#[derive(Clone, Debug)]
struct Piece {
    vertices: Vec<LatticePoint>,
    faces: Vec<PieceFace>,
    /// `(normal, offset, vertices on the facet)`, with `<normal, x> <= offset`.
    facets: Vec<(LatticePoint, i64, Vec<usize>)>,
}

impl Piece {
    fn from_polytope(p: &Polytope) -> Self {
        let vertices: Vec<LatticePoint> = p.vertices().iter().map(|v| to_lattice(v)).collect();
        let faces = p
            .faces()
            .iter()
            .filter(|f| f.dim < 4)
            .map(|f| PieceFace { dim: f.dim, vertices: f.vertices.clone() })
            .collect();
        let facets = p
            .facets()
            .iter()
            .map(|f| {
                let mut all = f.halfspace.normal.clone();
                all.push(f.halfspace.offset.clone());
                let ints: Vec<i64> = crate::linalg::primitive_integer(&all)
                    .iter()
                    .map(|x| i64::try_from(x).expect("small coefficients"))
                    .collect();
                // primitive_integer keeps the sign of the input.
                ([ints[0], ints[1], ints[2], ints[3]], ints[4], f.vertices.clone())
            })
            .collect();
        Piece { vertices, faces, facets }
    }

    fn face_points(&self, face: &PieceFace, shift: LatticePoint) -> Vec<LatticePoint> {
        let mut pts: Vec<LatticePoint> = face.vertices.iter().map(|&i| add(self.vertices[i], shift)).collect();
        pts.sort_unstable();
        pts
    }

    fn points_inside_from(&self, v: usize, direction: LatticePoint) -> bool {
        self.facets.iter().filter(|(_, _, on)| on.contains(&v)).all(|(n, _, _)| idot(*n, direction) < 0)
    }
}

/// New faces created by slicing one cross-polytope.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SliceCensus {
    pub cuts: usize,
    pub pieces: usize,
    pub new_edges: usize,
    /// New 2-faces by number of vertices.
    pub new_polygons: BTreeMap<usize, usize>,
    /// New 3-faces by shape.
    pub new_cells: BTreeMap<String, usize>,
}

impl SliceCensus {
    pub fn polygons(&self, corners: usize) -> usize {
        self.new_polygons.get(&corners).copied().unwrap_or(0)
    }

    pub fn cells(&self, shape: &str) -> usize {
        self.new_cells.get(shape).copied().unwrap_or(0)
    }
}

fn cell_shape(vertices: usize) -> String {
    match vertices {
        4 => "tetrahedron".to_string(),
        5 => "square pyramid".to_string(),
        6 => "octahedron".to_string(),
        n => format!("{n}-vertex cell"),
    }
}

/// A representative cross-polytope cut by some hyperplanes through its
/// center.
#[derive(Clone, Debug)]
struct Subdivision {
    pieces: Vec<Piece>,
    census: SliceCensus,
    /// Faces of dimension 1 to 3 that slicing created, as sorted points.
    new_faces: Vec<(usize, Vec<LatticePoint>)>,
}

fn subdivide(f: CrossFamily, planes: &[(LatticePoint, i64)]) -> Result<Subdivision, DeloneError> {
    let rep = f.representative();
    let whole = Polytope::new(rep.iter().map(|p| to_rational(*p)).collect())?;
    for (normal, offset) in planes {
        let values: Vec<i64> = rep.iter().map(|v| idot(*normal, *v)).collect();
        let on = values.iter().filter(|&&x| x == *offset).count();
        let below = values.iter().filter(|&&x| x < *offset).count();
        if on != 6 || below != 1 {
            return Err(DeloneError::InadmissibleSlice(format!(
                "<{normal:?}, x> = {offset} is not an equator of the {f} representative"
            )));
        }
    }
    let mut pieces = vec![whole.clone()];
    for (normal, offset) in planes {
        let n = to_rational(*normal);
        let o = Rational::from(*offset);
        let mut next = Vec::new();
        for p in pieces {
            match p.split(&n, &o) {
                Ok(Some([a, b])) => next.extend([a, b]),
                Ok(None) => next.push(p),
                Err(PolytopeError::NewVertex(a, b)) => {
                    return Err(DeloneError::InadmissibleSlice(format!(
                        "{} cuts of {f} create a vertex inside the edge {a:?}-{b:?}",
                        planes.len()
                    )))
                }
                Err(e) => return Err(e.into()),
            }
        }
        pieces = next;
    }
    let pieces: Vec<Piece> = pieces.iter().map(Piece::from_polytope).collect();
    let union: BTreeSet<LatticePoint> = pieces.iter().flat_map(|p| p.vertices.iter().copied()).collect();
    if union != rep.iter().copied().collect() {
        return Err(DeloneError::InadmissibleSlice(format!("slicing {f} changes its vertex set")));
    }
    let whole = Piece::from_polytope(&whole);
    let before: BTreeSet<Vec<LatticePoint>> = whole.faces.iter().map(|fc| whole.face_points(fc, ORIGIN)).collect();
    let mut after: BTreeMap<Vec<LatticePoint>, usize> = BTreeMap::new();
    for p in &pieces {
        for fc in &p.faces {
            after.insert(p.face_points(fc, ORIGIN), fc.dim);
        }
    }
    let mut census = SliceCensus { cuts: planes.len(), pieces: pieces.len(), ..SliceCensus::default() };
    let mut new_faces = Vec::new();
    for (pts, dim) in after.iter().filter(|(pts, _)| !before.contains(*pts)) {
        if (1..=3).contains(dim) {
            new_faces.push((*dim, pts.clone()));
        }
        match dim {
            1 => census.new_edges += 1,
            2 => *census.new_polygons.entry(pts.len()).or_insert(0) += 1,
            3 => *census.new_cells.entry(cell_shape(pts.len())).or_insert(0) += 1,
            _ => {}
        }
    }
    Ok(Subdivision { pieces, census, new_faces })
}

fn planes_of(f: CrossFamily, chosen: &[usize]) -> Vec<(LatticePoint, i64)> {
    let families = admissible_families(f);
    let c2 = f.doubled_center();
    chosen
        .iter()
        .map(|&i| {
            let h = &families[i];
            (h.normal, idot(h.normal, c2) / 2)
        })
        .collect()
}

fn subdivision(f: CrossFamily, chosen: &[usize]) -> &'static Subdivision {
    static CACHE: OnceLock<BTreeMap<(CrossFamily, Vec<usize>), Subdivision>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let mut out = BTreeMap::new();
        for f in CrossFamily::ALL {
            let n = admissible_families(f).len();
            for k in 0..=n.min(3) {
                for subset in (0..n).combinations(k) {
                    let sub = subdivide(f, &planes_of(f, &subset)).expect("admissible cuts subdivide cleanly");
                    out.insert((f, subset), sub);
                }
            }
        }
        out
    });
    let mut key = chosen.to_vec();
    key.sort_unstable();
    &cache[&(f, key)]
}

/// Face census of the representative of `f` cut by the chosen admissible
/// families. Fails when the cuts would create a vertex.
pub fn slice_census(f: CrossFamily, chosen: &[usize]) -> Result<SliceCensus, DeloneError> {
    let families = admissible_families(f);
    if let Some(i) = chosen.iter().find(|&&i| i >= families.len()) {
        return Err(DeloneError::InadmissibleSlice(format!("{f} has no admissible family {i}")));
    }
    if chosen.len() <= 3 && chosen.iter().collect::<BTreeSet<_>>().len() == chosen.len() {
        return Ok(subdivision(f, chosen).census.clone());
    }
    Ok(subdivide(f, &planes_of(f, chosen))?.census)
}

/// A tile of the star: a piece of a translated cross-polytope having the
/// origin as a vertex.
#[derive(Clone, Debug, Serialize)]
pub struct StarTile {
    pub family: CrossFamily,
    /// The tile is the cut representative plus this translation.
    pub translation: LatticePoint,
    pub cuts: Vec<usize>,
    pub vertices: Vec<LatticePoint>,
    #[serde(skip)]
    piece: &'static Piece,
    #[serde(skip)]
    origin: usize,
}

/// A face through the origin, with the origin faces of one dimension less
/// on its boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarFace {
    pub dim: usize,
    pub points: Vec<LatticePoint>,
    pub tiles: Vec<usize>,
    pub boundary: Vec<usize>,
}

impl StarFace {
    pub fn is_triangle(&self) -> bool {
        self.dim == 2 && self.points.len() == 3
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DeloneStar {
    pub config: SlicingConfig,
    pub tiles: Vec<StarTile>,
    /// Faces of dimension 1 to 3 through the origin.
    pub faces: Vec<StarFace>,
}

impl DeloneStar {
    pub fn faces_of_dim(&self, dim: usize) -> impl Iterator<Item = (usize, &StarFace)> {
        self.faces.iter().enumerate().filter(move |(_, f)| f.dim == dim)
    }

    /// Union of the tiles' vertices.
    pub fn vertex_set(&self) -> BTreeSet<LatticePoint> {
        self.tiles.iter().flat_map(|t| t.vertices.iter().copied()).collect()
    }

    pub fn all_polygons_triangles(&self) -> bool {
        self.faces_of_dim(2).all(|(_, f)| f.points.len() == 3)
    }

    pub fn polygon_census(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for (_, f) in self.faces_of_dim(2) {
            *out.entry(f.points.len()).or_insert(0) += 1;
        }
        out
    }

    /// For every probe direction, the number of tiles whose tangent cone at
    /// the origin contains it in its interior.
    pub fn probe_counts(&self, probes: &[LatticePoint]) -> Vec<usize> {
        probes
            .iter()
            .map(|&p| self.tiles.iter().filter(|t| t.piece.points_inside_from(t.origin, p)).count())
            .collect()
    }

    /// Checks that the tiles cover a neighborhood of the origin without
    /// overlap, on a set of generic directions.
    pub fn check_neighborhood(&self) -> Result<(), DeloneError> {
        let probes = generic_probes();
        for (p, count) in probes.iter().zip(self.probe_counts(&probes)) {
            if count != 1 {
                return Err(DeloneError::MalformedStar(format!("direction {p:?} lies in {count} tiles")));
            }
        }
        Ok(())
    }
}

/// Directions `(±1, ±5, ±25, ±125)` in every coordinate order. None lies on
/// a hyperplane whose normal has coefficients of absolute value at most 4.
pub fn generic_probes() -> Vec<LatticePoint> {
    let base = [1i64, 5, 25, 125];
    let mut out = Vec::new();
    for perm in (0..4).permutations(4) {
        for signs in 0..16u32 {
            let mut p = [0; 4];
            for (k, &slot) in perm.iter().enumerate() {
                p[slot] = if signs & (1 << k) != 0 { -base[k] } else { base[k] };
            }
            out.push(p);
        }
    }
    out
}

/// The star of the origin in the tiling refined by `cfg`.
pub fn sliced_star(cfg: &SlicingConfig) -> Result<DeloneStar, DeloneError> {
    cfg.validate()?;
    let cfg = cfg.sorted();
    let mut tiles = Vec::new();
    for f in CrossFamily::ALL {
        let chosen = cfg.chosen(f);
        let sub = subdivision(f, chosen);
        for v in f.representative() {
            let shift = neg(v);
            for piece in &sub.pieces {
                let Some(origin) = piece.vertices.iter().position(|&p| p == v) else {
                    continue;
                };
                let vertices: Vec<LatticePoint> = piece.vertices.iter().map(|&p| add(p, shift)).collect();
                if let Some(bad) = vertices.iter().find(|&&p| !in_d4(p)) {
                    return Err(DeloneError::InadmissibleConfig(format!("vertex {bad:?} is not in D4")));
                }
                tiles.push(StarTile { family: f, translation: shift, cuts: chosen.to_vec(), vertices, piece, origin });
            }
        }
    }
    let mut index: BTreeMap<Vec<LatticePoint>, usize> = BTreeMap::new();
    let mut faces: Vec<StarFace> = Vec::new();
    let mut boundaries: Vec<BTreeSet<Vec<LatticePoint>>> = Vec::new();
    for (t, tile) in tiles.iter().enumerate() {
        let piece = tile.piece;
        let at_origin: Vec<&PieceFace> =
            piece.faces.iter().filter(|f| (1..=3).contains(&f.dim) && f.vertices.contains(&tile.origin)).collect();
        for face in &at_origin {
            let points = piece.face_points(face, tile.translation);
            let boundary: BTreeSet<Vec<LatticePoint>> = at_origin
                .iter()
                .filter(|g| g.dim + 1 == face.dim && g.vertices.iter().all(|x| face.vertices.contains(x)))
                .map(|g| piece.face_points(g, tile.translation))
                .collect();
            match index.get(&points) {
                Some(&i) => {
                    if boundaries[i] != boundary {
                        return Err(DeloneError::MalformedStar(format!(
                            "face {points:?} has different boundaries in different tiles"
                        )));
                    }
                    faces[i].tiles.push(t);
                }
                None => {
                    index.insert(points.clone(), faces.len());
                    faces.push(StarFace { dim: face.dim, points, tiles: vec![t], boundary: Vec::new() });
                    boundaries.push(boundary);
                }
            }
        }
    }
    // Renumber by (dimension, points) for a canonical order.
    let mut order: Vec<usize> = (0..faces.len()).collect();
    order.sort_by(|&a, &b| (faces[a].dim, &faces[a].points).cmp(&(faces[b].dim, &faces[b].points)));
    let mut sorted: Vec<StarFace> = order.iter().map(|&i| faces[i].clone()).collect();
    let position: BTreeMap<Vec<LatticePoint>, usize> =
        sorted.iter().enumerate().map(|(i, f)| (f.points.clone(), i)).collect();
    for (slot, &old) in sorted.iter_mut().zip(&order) {
        slot.boundary = boundaries[old].iter().map(|pts| position[pts]).collect();
        slot.boundary.sort_unstable();
    }
    Ok(DeloneStar { config: cfg, tiles, faces: sorted })
}

/// Checks that every face created by slicing a tile through the origin
/// shows up among the star's faces, and that every star face absent from
/// the unsliced star was created that way. Returns the number of created
/// faces found.
pub fn census_in_star(star: &DeloneStar) -> Result<usize, DeloneError> {
    let present: BTreeMap<&Vec<LatticePoint>, usize> = star.faces.iter().map(|f| (&f.points, f.dim)).collect();
    static BASE: OnceLock<BTreeSet<Vec<LatticePoint>>> = OnceLock::new();
    let old = BASE.get_or_init(|| base_star().faces.into_iter().map(|f| f.points).collect());
    let mut expected: BTreeSet<Vec<LatticePoint>> = BTreeSet::new();
    for f in CrossFamily::ALL {
        let division = subdivision(f, star.config.chosen(f));
        for v in f.representative() {
            for (dim, pts) in division.new_faces.iter().filter(|(_, pts)| pts.contains(&v)) {
                let mut moved: Vec<LatticePoint> = pts.iter().map(|&p| sub(p, v)).collect();
                moved.sort_unstable();
                if present.get(&moved) != Some(dim) {
                    return Err(DeloneError::MalformedStar(format!(
                        "created {dim}-face {moved:?} of {f} is missing from the star"
                    )));
                }
                expected.insert(moved);
            }
        }
    }
    if let Some(extra) = star.faces.iter().find(|f| !old.contains(&f.points) && !expected.contains(&f.points)) {
        return Err(DeloneError::MalformedStar(format!("face {:?} appeared without a cut", extra.points)));
    }
    Ok(expected.len())
}

pub fn base_star() -> DeloneStar {
    sliced_star(&SlicingConfig::default()).expect("the unsliced tiling is valid")
}

/// Venkov graph of a star together with its gain cycles.
#[derive(Clone, Debug)]
pub struct StarVenkov {
    /// Vertices are edge classes; edges are labeled by belt index.
    pub graph: VenkovGraph<LatticePoint>,
    /// Each belt as the sorted vertex indices of its triangle.
    pub belts: Vec<[usize; 3]>,
    pub half_belts: Vec<CycleVector>,
    pub contractible: Vec<CycleVector>,
}

impl StarVenkov {
    /// Number of trivially contractible cycles by length.
    pub fn contractible_lengths(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for c in &self.contractible {
            *out.entry(c.len()).or_insert(0) += 1;
        }
        out
    }
}

pub fn venkov_from_star(star: &DeloneStar) -> Result<StarVenkov, DeloneError> {
    let edges: Vec<LatticePoint> =
        star.faces_of_dim(1).map(|(_, f)| *f.points.iter().find(|&&p| p != ORIGIN).expect("an edge")).collect();
    let classes: Vec<LatticePoint> = edges.iter().map(|&a| edge_class(a)).collect::<BTreeSet<_>>().into_iter().collect();
    if edges.len() != 2 * classes.len() {
        return Err(DeloneError::MalformedStar(format!(
            "{} origin edges do not pair up into {} antipodal classes",
            edges.len(),
            classes.len()
        )));
    }
    let vertex_of: BTreeMap<LatticePoint, usize> = classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let vertex = |a: LatticePoint| vertex_of[&edge_class(a)];

    let mut belt_triangles: BTreeMap<[usize; 3], Vec<usize>> = BTreeMap::new();
    for (i, f) in star.faces_of_dim(2).filter(|(_, f)| f.is_triangle()) {
        let others: Vec<LatticePoint> = f.points.iter().copied().filter(|&p| p != ORIGIN).collect();
        let (a, b) = (others[0], others[1]);
        let mut key = [vertex(a), vertex(b), vertex(sub(b, a))];
        key.sort_unstable();
        if key[0] == key[1] || key[1] == key[2] {
            return Err(DeloneError::MalformedStar(format!("triangle {:?} has parallel edges", f.points)));
        }
        belt_triangles.entry(key).or_default().push(i);
    }
    if let Some((key, tris)) = belt_triangles.iter().find(|(_, t)| t.len() != 6) {
        return Err(DeloneError::MalformedStar(format!(
            "belt {key:?} has {} origin triangles instead of 6",
            tris.len()
        )));
    }
    let belts: Vec<[usize; 3]> = belt_triangles.keys().copied().collect();
    let belt_of_face: BTreeMap<usize, usize> =
        belt_triangles.values().enumerate().flat_map(|(b, tris)| tris.iter().map(move |&t| (t, b))).collect();
    let mut graph = VenkovGraph::new(classes.clone());
    for (b, members) in belts.iter().enumerate() {
        add_belt_edges(&mut graph, b, *members);
    }
    let half_belts = half_belt_cycles(&graph);

    let mut contractible = Vec::new();
    for (_, cell) in star.faces_of_dim(3) {
        if !cell.boundary.iter().all(|&i| star.faces[i].is_triangle()) {
            continue;
        }
        // Walk the vertex figure: origin edges joined by origin triangles.
        let mut adjacency: BTreeMap<LatticePoint, Vec<(LatticePoint, usize)>> = BTreeMap::new();
        for &t in &cell.boundary {
            let others: Vec<LatticePoint> = star.faces[t].points.iter().copied().filter(|&p| p != ORIGIN).collect();
            adjacency.entry(others[0]).or_default().push((others[1], t));
            adjacency.entry(others[1]).or_default().push((others[0], t));
        }
        if adjacency.values().any(|n| n.len() != 2) {
            return Err(DeloneError::MalformedStar(format!("vertex figure of {:?} is not a polygon", cell.points)));
        }
        let start = *adjacency.keys().next().expect("a 3-face has origin edges");
        let (mut prev, mut at) = (None, start);
        let mut walk = Vec::new();
        loop {
            let &(next, tri) = adjacency[&at].iter().find(|(p, _)| Some(*p) != prev).expect("a polygon");
            let e = graph.find_edge(belt_of_face[&tri], vertex(at), vertex(next)).expect("belt edges exist");
            walk.push(e);
            prev = Some(at);
            at = next;
            if at == start || walk.len() > adjacency.len() {
                break;
            }
        }
        if walk.len() != adjacency.len() {
            return Err(DeloneError::MalformedStar(format!("vertex figure of {:?} is disconnected", cell.points)));
        }
        contractible.push(graph.cycle_from_walk(vertex(start), &walk));
    }
    Ok(StarVenkov { graph, belts, half_belts, contractible })
}

/// Outcome of the gain-cycle check on one sliced star.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct D4Report {
    pub config: SlicingConfig,
    pub cut_counts: [usize; 3],
    pub tiles: usize,
    pub venkov_vertices: usize,
    pub venkov_edges: usize,
    pub half_belts: usize,
    /// Trivially contractible cycles by length.
    pub contractible: BTreeMap<usize, usize>,
    /// Origin 2-faces by number of vertices.
    pub polygons: BTreeMap<usize, usize>,
    pub all_triangles: bool,
    pub cycle_dim: usize,
    /// Rank of the trivially contractible cycles alone.
    pub contractible_rank: usize,
    pub gain_rank: usize,
    pub pass: bool,
}

fn report_for(star: &DeloneStar, v: &StarVenkov) -> D4Report {
    let (contractible_rank, gain_rank) = stacked_rank(&v.graph, &v.contractible, &v.half_belts);
    let cycle_dim = v.graph.cycle_dim();
    D4Report {
        config: star.config.clone(),
        cut_counts: star.config.counts(),
        tiles: star.tiles.len(),
        venkov_vertices: v.graph.vertex_count(),
        venkov_edges: v.graph.edge_count(),
        half_belts: v.half_belts.len(),
        contractible: v.contractible_lengths(),
        polygons: star.polygon_census(),
        all_triangles: star.all_polygons_triangles(),
        cycle_dim,
        contractible_rank,
        gain_rank,
        pass: gain_rank == cycle_dim,
    }
}

pub fn verify_nonzonotopal(cfg: &SlicingConfig) -> Result<D4Report, DeloneError> {
    let star = sliced_star(cfg)?;
    star.check_neighborhood()?;
    census_in_star(&star)?;
    Ok(report_for(&star, &venkov_from_star(&star)?))
}

/// Outcome of checking every admissible configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct D4Sweep {
    pub configs: usize,
    pub passed: usize,
    pub all_triangle_configs: usize,
    /// Configurations whose all-triangle status differs from "every family
    /// cut 0, 1 or 3 times".
    pub zhitomirskii_mismatches: Vec<SlicingConfig>,
    pub graph_pairs_checked: usize,
    /// Configurations whose Venkov graph differs from the one keeping only
    /// the families cut three times.
    pub graph_pair_mismatches: Vec<SlicingConfig>,
    pub failures: Vec<SlicingConfig>,
    /// Configurations by (cycle dimension, Venkov edges).
    pub shapes: BTreeMap<String, usize>,
}

impl D4Sweep {
    pub fn pass(&self) -> bool {
        self.passed == self.configs
            && self.failures.is_empty()
            && self.zhitomirskii_mismatches.is_empty()
            && self.graph_pair_mismatches.is_empty()
    }
}

fn venkov_signature(cfg: &SlicingConfig) -> Result<(Vec<LatticePoint>, Vec<[usize; 3]>), DeloneError> {
    let v = venkov_from_star(&sliced_star(cfg)?)?;
    Ok((v.graph.vertices.clone(), v.belts))
}

/// Runs [`verify_nonzonotopal`] on every configuration in `configs`, in
/// parallel, and compares each Venkov graph with that of its triple-cut part.
pub fn sweep(configs: &[SlicingConfig]) -> Result<(Vec<D4Report>, D4Sweep), DeloneError> {
    use rayon::prelude::*;
    let reduced: BTreeSet<SlicingConfig> = configs.iter().map(|c| c.sorted().triple_cut_part()).collect();
    let reference: BTreeMap<SlicingConfig, (Vec<LatticePoint>, Vec<[usize; 3]>)> = reduced
        .into_par_iter()
        .map(|c| venkov_signature(&c).map(|sig| (c, sig)))
        .collect::<Result<_, _>>()?;
    let results: Vec<(D4Report, bool)> = configs
        .par_iter()
        .map(|cfg| {
            let star = sliced_star(cfg)?;
            star.check_neighborhood()?;
            census_in_star(&star)?;
            let v = venkov_from_star(&star)?;
            let same = reference[&star.config.triple_cut_part()] == (v.graph.vertices.clone(), v.belts.clone());
            let report = report_for(&star, &v);
            Ok((report, same))
        })
        .collect::<Result<_, DeloneError>>()?;
    let mut summary = D4Sweep {
        configs: results.len(),
        passed: 0,
        all_triangle_configs: 0,
        zhitomirskii_mismatches: Vec::new(),
        graph_pairs_checked: results.len(),
        graph_pair_mismatches: Vec::new(),
        failures: Vec::new(),
        shapes: BTreeMap::new(),
    };
    for (r, same) in &results {
        if r.pass {
            summary.passed += 1;
        } else {
            summary.failures.push(r.config.clone());
        }
        if r.all_triangles {
            summary.all_triangle_configs += 1;
        }
        if r.all_triangles != r.config.is_zhitomirskii() {
            summary.zhitomirskii_mismatches.push(r.config.clone());
        }
        if !same {
            summary.graph_pair_mismatches.push(r.config.clone());
        }
        *summary.shapes.entry(format!("cycle_dim={} E={}", r.cycle_dim, r.venkov_edges)).or_insert(0) += 1;
    }
    Ok((results.into_iter().map(|(r, _)| r).collect(), summary))
}
