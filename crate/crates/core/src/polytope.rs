//! Face lattices of small full-dimensional polytopes given by their vertices.
//!
//! Facets come from brute force over affinely independent vertex subsets;
//! every other face is an intersection of facets. This is exact and fast
//! enough for polytopes with a dozen or so vertices in dimension four.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::PolytopeError;
use crate::linalg::{dot, rank_of, vec_sub, RatMatrix, RatVector, Rational};

/// The closed halfspace `<normal, x> <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: RatVector,
    pub offset: Rational,
}

impl Halfspace {
    /// `<normal, x> - offset`: negative inside, zero on the boundary.
    pub fn excess(&self, x: &[Rational]) -> Rational {
        dot(&self.normal, x) - &self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub halfspace: Halfspace,
    pub vertices: Vec<usize>,
}

/// A nonempty face, as sorted indices into the polytope's vertex list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    vertices: Vec<RatVector>,
    dim: usize,
    facets: Vec<Facet>,
    faces: Vec<Face>,
}

fn affine_rank(points: &[&RatVector]) -> usize {
    match points.split_first() {
        None => 0,
        Some((first, rest)) => {
            let diffs: Vec<RatVector> = rest.iter().map(|p| vec_sub(p, first)).collect();
            rank_of(first.len(), diffs.iter().map(Vec::as_slice))
        }
    }
}

fn hyperplane_through(points: &[&RatVector]) -> Option<(RatVector, Rational)> {
    let dim = points[0].len();
    let diffs: Vec<RatVector> = points[1..].iter().map(|p| vec_sub(p, points[0])).collect();
    let null = RatMatrix::from_rows(dim, diffs).expect("rectangular").nullspace();
    if null.len() != 1 {
        return None;
    }
    let normal = null.into_iter().next().expect("one vector");
    let offset = dot(&normal, points[0]);
    Some((normal, offset))
}

impl Polytope {
    /// Convex hull of `points`, which must affinely span their ambient space.
    /// Points that are not extreme are dropped.
    pub fn new(points: Vec<RatVector>) -> Result<Self, PolytopeError> {
        let dim = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(PolytopeError::Ragged);
        }
        let points: Vec<RatVector> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let refs: Vec<&RatVector> = points.iter().collect();
        let found = affine_rank(&refs);
        if found != dim || dim == 0 {
            return Err(PolytopeError::NotFullDimensional { expected: dim, found });
        }
        let hull = Self::from_points(points, dim);
        let extreme: Vec<usize> =
            hull.faces.iter().filter(|f| f.dim == 0).map(|f| f.vertices[0]).collect();
        if extreme.len() == hull.vertices.len() {
            return Ok(hull);
        }
        let kept = extreme.into_iter().map(|i| hull.vertices[i].clone()).collect();
        Ok(Self::from_points(kept, dim))
    }

    fn from_points(vertices: Vec<RatVector>, dim: usize) -> Self {
        let mut facets: Vec<Facet> = Vec::new();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for subset in (0..vertices.len()).combinations(dim) {
            let chosen: Vec<&RatVector> = subset.iter().map(|&i| &vertices[i]).collect();
            let Some((normal, offset)) = hyperplane_through(&chosen) else {
                continue;
            };
            let values: Vec<Rational> = vertices.iter().map(|v| dot(&normal, v) - &offset).collect();
            let on: Vec<usize> = (0..vertices.len()).filter(|&i| values[i].is_zero()).collect();
            if seen.contains(&on) {
                continue;
            }
            let halfspace = if values.iter().all(|x| !x.is_positive()) {
                Halfspace { normal, offset }
            } else if values.iter().all(|x| !x.is_negative()) {
                Halfspace { normal: normal.into_iter().map(|x| -x).collect(), offset: -offset }
            } else {
                continue;
            };
            seen.insert(on.clone());
            facets.push(Facet { halfspace, vertices: on });
        }
        facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        let mut sets: BTreeSet<Vec<usize>> = facets.iter().map(|f| f.vertices.clone()).collect();
        loop {
            let current: Vec<Vec<usize>> = sets.iter().cloned().collect();
            let mut grew = false;
            for (a, b) in current.iter().tuple_combinations() {
                let meet: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
                if !meet.is_empty() && sets.insert(meet) {
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        sets.insert((0..vertices.len()).collect());
        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|vs| {
                let refs: Vec<&RatVector> = vs.iter().map(|&i| &vertices[i]).collect();
                Face { dim: affine_rank(&refs), vertices: vs }
            })
            .collect();
        faces.sort();
        Polytope { vertices, dim, facets, faces }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    pub fn vertex_index(&self, point: &[Rational]) -> Option<usize> {
        self.vertices.iter().position(|v| v.as_slice() == point)
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Every nonempty face including the polytope itself, ordered by
    /// dimension and then vertex indices.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_dim(&self, dim: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == dim)
    }

    /// Faces containing the vertex `v`.
    pub fn faces_at(&self, v: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.vertices.contains(&v))
    }

    pub fn face_points(&self, face: &Face) -> Vec<RatVector> {
        face.vertices.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.facets.iter().all(|f| !f.halfspace.excess(x).is_positive())
    }

    /// Whether `direction` points strictly into the polytope from vertex `v`,
    /// i.e. lies in the interior of the tangent cone there.
    pub fn points_inside_from(&self, v: usize, direction: &[Rational]) -> bool {
        self.facets
            .iter()
            .filter(|f| f.vertices.contains(&v))
            .all(|f| dot(&f.halfspace.normal, direction).is_negative())
    }

    /// Cuts along `<normal, x> = offset`. Returns `None` when the hyperplane
    /// misses the interior and the two closed halves otherwise. Fails if the
    /// hyperplane crosses an edge anywhere but at a vertex.
    pub fn split(&self, normal: &[Rational], offset: &Rational) -> Result<Option<[Polytope; 2]>, PolytopeError> {
        let values: Vec<Rational> = self.vertices.iter().map(|v| dot(normal, v) - offset).collect();
        if values.iter().all(|x| !x.is_negative()) || values.iter().all(|x| !x.is_positive()) {
            return Ok(None);
        }
        for edge in self.faces_of_dim(1) {
            let (a, b) = (edge.vertices[0], edge.vertices[1]);
            if (values[a].is_positive() && values[b].is_negative())
                || (values[a].is_negative() && values[b].is_positive())
            {
                let show = |v: &RatVector| v.iter().map(ToString::to_string).collect();
                return Err(PolytopeError::NewVertex(show(&self.vertices[a]), show(&self.vertices[b])));
            }
        }
        let side = |keep: fn(&Rational) -> bool| -> Vec<RatVector> {
            (0..self.vertices.len()).filter(|&i| keep(&values[i])).map(|i| self.vertices[i].clone()).collect()
        };
        let below = Polytope::new(side(|x| !x.is_positive()))?;
        let above = Polytope::new(side(|x| !x.is_negative()))?;
        Ok(Some([below, above]))
    }

    /// Face counts by dimension, from vertices up to the polytope itself.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dim).map(|d| self.faces_of_dim(d).count()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vector;

    fn cross_polytope(d: usize) -> Polytope {
        let mut pts = Vec::new();
        for i in 0..d {
            for s in [1, -1] {
                let mut v = vec![0; d];
                v[i] = s;
                pts.push(int_vector(&v));
            }
        }
        Polytope::new(pts).unwrap()
    }

    fn cube(d: usize) -> Polytope {
        let pts = (0..1u32 << d)
            .map(|m| int_vector(&(0..d).map(|i| i64::from((m >> i) & 1)).collect::<Vec<_>>()))
            .collect();
        Polytope::new(pts).unwrap()
    }

    #[test]
    fn f_vectors() {
        assert_eq!(cross_polytope(3).f_vector(), vec![6, 12, 8, 1]);
        assert_eq!(cross_polytope(4).f_vector(), vec![8, 24, 32, 16, 1]);
        assert_eq!(cube(3).f_vector(), vec![8, 12, 6, 1]);
        assert_eq!(cube(4).f_vector(), vec![16, 32, 24, 8, 1]);
    }

    #[test]
    fn drops_interior_points() {
        let mut pts: Vec<RatVector> = cross_polytope(3).vertices().to_vec();
        pts.push(int_vector(&[0, 0, 0]));
        let p = Polytope::new(pts).unwrap();
        assert_eq!(p.vertices().len(), 6);
        assert!(p.contains(&int_vector(&[0, 0, 0])));
        assert!(!p.contains(&int_vector(&[1, 1, 0])));
    }

    #[test]
    fn rejects_flat_input() {
        let pts = vec![int_vector(&[0, 0]), int_vector(&[1, 1]), int_vector(&[2, 2])];
        assert_eq!(Polytope::new(pts), Err(PolytopeError::NotFullDimensional { expected: 2, found: 1 }));
    }

    #[test]
    fn equator_split_of_a_cross_polytope() {
        let p = cross_polytope(4);
        let [below, above] = p.split(&int_vector(&[1, 0, 0, 0]), &Rational::zero()).unwrap().unwrap();
        // Pyramids over an octahedron: 7 vertices, 9 facets.
        for half in [&below, &above] {
            assert_eq!(half.vertices().len(), 7);
            assert_eq!(half.facets().len(), 9);
        }
        assert!(p.split(&int_vector(&[1, 0, 0, 0]), &Rational::one()).unwrap().is_none());
        assert!(matches!(
            p.split(&int_vector(&[1, 1, 0, 0]), &Rational::one()),
            Ok(None)
        ));
        assert!(matches!(
            p.split(&int_vector(&[2, 1, 0, 0]), &Rational::zero()),
            Err(PolytopeError::NewVertex(..))
        ));
    }

    #[test]
    fn tangent_cone() {
        let c = cube(2);
        let origin = c.vertex_index(&int_vector(&[0, 0])).unwrap();
        assert!(c.points_inside_from(origin, &int_vector(&[1, 2])));
        assert!(!c.points_inside_from(origin, &int_vector(&[1, 0])));
        assert!(!c.points_inside_from(origin, &int_vector(&[-1, 2])));
    }
}
