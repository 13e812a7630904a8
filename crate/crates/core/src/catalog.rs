//! Zonotope classes of all connected five-vertex graphs.
//!
//! Different graphs can give the same zonotope up to combinatorial type: a
//! forest of bridges is always a parallelepiped, whatever its shape. Graphs
//! are grouped by isomorphism of the lattice of flats of their generators,
//! computed by the oracle, and the grouping is cross-checked against
//! isomorphism of the graphic matroids. Facet/belt incidence alone is too
//! coarse: it does not separate `K_{2,3}` from `K_{2,3}` plus an edge joining
//! its two branch vertices.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::oracle::{oracle_belts, oracle_facets, pi_generators, FlatLattice};
use crate::venkov::{check_gain_generation, GainReport};
use crate::zonograph::{
    classify_3d, enumerate_belts, enumerate_candidate_graphs, enumerate_facets, reducibility,
    ZonotopeGraph,
};

type FacetSignature = (usize, Vec<(usize, Vec<usize>)>);

/// Facet classes and belts (with their sizes) of a zonotope, as abstract
/// incidences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub facets: usize,
    pub belts: Vec<(usize, Vec<usize>)>,
    pair_belt: Vec<Vec<Option<usize>>>,
}

impl Incidence {
    pub fn new(facets: usize, belts: Vec<(usize, Vec<usize>)>) -> Self {
        let mut pair_belt = vec![vec![None; facets]; facets];
        for (b, (_, members)) in belts.iter().enumerate() {
            for &x in members {
                for &y in members {
                    if x != y {
                        assert!(pair_belt[x][y].is_none(), "two facets share at most one belt");
                        pair_belt[x][y] = Some(b);
                    }
                }
            }
        }
        Incidence { facets, belts, pair_belt }
    }

    /// Oracle incidence of the zonotope of `g`.
    pub fn of_graph(g: &ZonotopeGraph) -> Self {
        let gens = pi_generators(g);
        let facets = oracle_facets(&gens).expect("five-vertex graphs have rank 4");
        let belts = oracle_belts(&gens).expect("five-vertex graphs have rank 4");
        Incidence::new(facets.len(), belts.into_iter().map(|b| (b.size, b.facets)).collect())
    }

    /// Stable colors of facets after iterated refinement by the sizes of
    /// the belts through them and the colors of their belt neighbors.
    fn facet_colors(&self) -> Vec<usize> {
        let mut colors = vec![0usize; self.facets];
        loop {
            let signatures: Vec<FacetSignature> = (0..self.facets)
                .map(|f| {
                    let mut around: Vec<(usize, Vec<usize>)> = self
                        .belts
                        .iter()
                        .filter(|(_, m)| m.contains(&f))
                        .map(|(size, m)| {
                            let mut c: Vec<usize> = m.iter().filter(|&&x| x != f).map(|&x| colors[x]).collect();
                            c.sort_unstable();
                            (*size, c)
                        })
                        .collect();
                    around.sort();
                    (colors[f], around)
                })
                .collect();
            let mut palette: Vec<_> = signatures.clone();
            palette.sort();
            palette.dedup();
            let next: Vec<usize> =
                signatures.iter().map(|s| palette.binary_search(s).expect("present")).collect();
            let stable = palette.len() == colors.iter().collect::<std::collections::BTreeSet<_>>().len();
            colors = next;
            if stable {
                return colors;
            }
        }
    }

    /// An isomorphism invariant: counts and the sorted refined colors.
    pub fn invariant(&self) -> (usize, Vec<usize>, Vec<usize>) {
        let mut sizes: Vec<usize> = self.belts.iter().map(|b| b.0).collect();
        sizes.sort_unstable();
        let mut colors = self.facet_colors();
        colors.sort_unstable();
        (self.facets, sizes, colors)
    }

    /// Searches for a facet bijection that carries belts to belts of the
    /// same size.
    pub fn is_isomorphic(&self, other: &Incidence) -> bool {
        if self.invariant() != other.invariant() {
            return false;
        }
        let (ca, cb) = (self.facet_colors(), other.facet_colors());
        let mut map = vec![usize::MAX; self.facets];
        let mut used = vec![false; other.facets];
        let mut belt_map: BTreeMap<usize, usize> = BTreeMap::new();
        self.extend(other, 0, &ca, &cb, &mut map, &mut used, &mut belt_map)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        other: &Incidence,
        next: usize,
        ca: &[usize],
        cb: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        belt_map: &mut BTreeMap<usize, usize>,
    ) -> bool {
        if next == self.facets {
            return true;
        }
        for cand in 0..other.facets {
            if used[cand] || ca[next] != cb[cand] {
                continue;
            }
            let mut added = Vec::new();
            let mut ok = true;
            for (prev, &image) in map.iter().enumerate().take(next) {
                match (self.pair_belt[next][prev], other.pair_belt[cand][image]) {
                    (None, None) => {}
                    (Some(a), Some(b)) if self.belts[a].0 == other.belts[b].0 => match belt_map.get(&a) {
                        Some(&known) if known != b => ok = false,
                        Some(_) => {}
                        None => {
                            if belt_map.values().any(|&v| v == b) {
                                ok = false;
                            } else {
                                belt_map.insert(a, b);
                                added.push(a);
                            }
                        }
                    },
                    _ => ok = false,
                }
                if !ok {
                    break;
                }
            }
            if ok {
                map[next] = cand;
                used[cand] = true;
                if self.extend(other, next + 1, ca, cb, map, used, belt_map) {
                    return true;
                }
                used[cand] = false;
                map[next] = usize::MAX;
            }
            for a in added {
                belt_map.remove(&a);
            }
        }
        false
    }
}

/// Rank function of the graphic matroid of `g`, indexed by edge bitmask.
fn matroid_ranks(g: &ZonotopeGraph) -> Vec<usize> {
    let m = g.edge_count();
    (0u32..1 << m)
        .map(|mask| {
            let mut parent: Vec<usize> = (0..=g.n()).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                p[x] = r;
                r
            }
            let mut rank = 0;
            for (k, &(a, b)) in g.edges().iter().enumerate() {
                if mask & (1 << k) != 0 {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra] = rb;
                        rank += 1;
                    }
                }
            }
            rank
        })
        .collect()
}

/// Whether the graphic matroids of `a` and `b` are isomorphic, by a search
/// over edge bijections that preserve the rank of every subset.
pub fn matroids_isomorphic(a: &ZonotopeGraph, b: &ZonotopeGraph) -> bool {
    if a.edge_count() != b.edge_count() {
        return false;
    }
    let (ra, rb) = (matroid_ranks(a), matroid_ranks(b));
    let m = a.edge_count();
    fn search(k: usize, m: usize, ra: &[usize], rb: &[usize], map: &mut Vec<usize>, used: u32) -> bool {
        if k == m {
            return true;
        }
        for cand in 0..m {
            if used & (1 << cand) != 0 {
                continue;
            }
            map.push(cand);
            let consistent = (0u32..1 << k).all(|sub| {
                let src = sub | (1 << k);
                let dst = (0..=k).filter(|&i| src & (1 << i) != 0).fold(0u32, |acc, i| acc | (1 << map[i]));
                ra[src as usize] == rb[dst as usize]
            });
            if consistent && search(k + 1, m, ra, rb, map, used | (1 << cand)) {
                return true;
            }
            map.pop();
        }
        false
    }
    search(0, m, &ra, &rb, &mut Vec::new(), 0)
}

/// One factor of a direct-sum decomposition.
pub fn factor_name(block: &ZonotopeGraph) -> &'static str {
    match block.n() {
        2 => "segment",
        3 => "hexagon",
        4 => classify_3d(block).map(|k| k.name()).unwrap_or("unknown"),
        _ => "irreducible",
    }
}

/// A combinatorial type of four-dimensional Π-zonotope with the graphs
/// producing it.
#[derive(Clone, Debug, Serialize)]
pub struct ZonotopeClass {
    pub representative: ZonotopeGraph,
    pub members: Vec<ZonotopeGraph>,
    pub facets: usize,
    pub belts: usize,
    pub primitive_belts: usize,
    pub factors: Vec<String>,
    pub zhitomirskii: bool,
    pub report: GainReport,
}

impl ZonotopeClass {
    pub fn is_reducible(&self) -> bool {
        self.factors.len() > 1
    }

    pub fn description(&self) -> String {
        if self.factors.iter().all(|f| f == "segment") {
            return format!("{}-dimensional cube", self.factors.len());
        }
        if self.is_reducible() {
            return format!("direct sum: {}", self.factors.join(" + "));
        }
        if self.zhitomirskii {
            return "irreducible; all belts primitive".to_string();
        }
        "irreducible".to_string()
    }
}

fn factors(g: &ZonotopeGraph) -> Vec<String> {
    let mut names: Vec<String> =
        reducibility(g).iter().map(|b| factor_name(&b.as_graph()).to_string()).collect();
    names.sort();
    names
}

/// Groups `graphs` into zonotope classes, ordered reducible first and then
/// by facet count, edge count and graph text.
pub fn classify_zonotopes(graphs: &[ZonotopeGraph]) -> Vec<ZonotopeClass> {
    let mut groups: Vec<(FlatLattice, Vec<ZonotopeGraph>)> = Vec::new();
    for g in graphs {
        let inc = FlatLattice::new(&pi_generators(g));
        match groups.iter_mut().find(|(other, _)| other.is_isomorphic(&inc)) {
            Some((_, members)) => members.push(g.clone()),
            None => groups.push((inc, vec![g.clone()])),
        }
    }
    let mut classes: Vec<ZonotopeClass> = groups
        .into_iter()
        .map(|(_, mut members)| {
            members.sort_by_key(|g| (g.edge_count(), g.to_string()));
            let representative = members[0].clone();
            let belts = enumerate_belts(&representative);
            let primitive_belts = belts.iter().filter(|b| b.primitive).count();
            ZonotopeClass {
                facets: enumerate_facets(&representative).len(),
                belts: belts.len(),
                primitive_belts,
                factors: factors(&representative),
                zhitomirskii: primitive_belts == belts.len(),
                report: check_gain_generation(&representative),
                members,
                representative,
            }
        })
        .collect();
    classes.sort_by_key(|c| {
        (!c.is_reducible(), c.facets, c.representative.edge_count(), c.representative.to_string())
    });
    classes
}

/// Classes of all connected five-vertex graphs.
pub fn zonotope_classes() -> Vec<ZonotopeClass> {
    classify_zonotopes(&enumerate_candidate_graphs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(text: &str) -> ZonotopeGraph {
        text.parse().unwrap()
    }

    #[test]
    fn sixteen_classes() {
        let classes = zonotope_classes();
        assert_eq!(classes.len(), 16);
        assert_eq!(classes.iter().map(|c| c.members.len()).sum::<usize>(), 21);
        assert_eq!(classes.iter().filter(|c| c.is_reducible()).count(), 6);
        assert!(classes.iter().all(|c| c.report.pass));
    }

    #[test]
    fn trees_collapse_to_the_cube() {
        let classes = zonotope_classes();
        let cube = &classes[0];
        assert_eq!(cube.members.len(), 3);
        assert!(cube.members.iter().all(|m| m.edge_count() == 4));
        assert_eq!(cube.facets, 4);
        assert_eq!(cube.description(), "4-dimensional cube");
    }

    #[test]
    fn collapsing_groups() {
        let sizes: Vec<(usize, usize)> = zonotope_classes()
            .iter()
            .filter(|c| c.members.len() > 1)
            .map(|c| (c.representative.edge_count(), c.members.len()))
            .collect();
        assert_eq!(sizes, vec![(4, 3), (5, 3), (6, 2)]);
    }

    #[test]
    fn reducible_factors() {
        let mut found: Vec<Vec<String>> =
            zonotope_classes().into_iter().filter(|c| c.is_reducible()).map(|c| c.factors).collect();
        found.sort();
        let mut expected: Vec<Vec<String>> = vec![
            vec!["segment"; 4],
            vec!["hexagon", "segment", "segment"],
            vec!["rhombic dodecahedron", "segment"],
            vec!["elongated dodecahedron", "segment"],
            vec!["segment", "truncated octahedron"],
            vec!["hexagon", "hexagon"],
        ]
        .into_iter()
        .map(|v| v.into_iter().map(String::from).collect())
        .collect();
        expected.sort();
        assert_eq!(found, expected);
    }

    #[test]
    fn flat_lattice_and_graphic_matroid_agree() {
        let graphs = enumerate_candidate_graphs();
        let lattices: Vec<FlatLattice> = graphs.iter().map(|g| FlatLattice::new(&pi_generators(g))).collect();
        for (a, la) in graphs.iter().zip(&lattices) {
            for (b, lb) in graphs.iter().zip(&lattices) {
                assert_eq!(la.is_isomorphic(lb), matroids_isomorphic(a, b), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn incidence_is_coarser_than_the_lattice() {
        let graphs = enumerate_candidate_graphs();
        for a in &graphs {
            for b in &graphs {
                if matroids_isomorphic(a, b) {
                    assert!(Incidence::of_graph(a).is_isomorphic(&Incidence::of_graph(b)), "{a} vs {b}");
                }
            }
        }
        let k23 = g("n=5; edges=1-3,1-4,1-5,2-3,2-4,2-5");
        let k23_plus = g("n=5; edges=1-2,1-3,1-4,1-5,2-3,2-4,2-5");
        assert!(Incidence::of_graph(&k23).is_isomorphic(&Incidence::of_graph(&k23_plus)));
        assert!(!matroids_isomorphic(&k23, &k23_plus));
    }

    #[test]
    fn cycle_is_zhitomirskii() {
        let classes = zonotope_classes();
        let c5 = classes.iter().find(|c| c.representative.is_isomorphic(&ZonotopeGraph::cycle(5).unwrap())).unwrap();
        assert!(c5.zhitomirskii);
        assert!(!c5.is_reducible());
        assert_eq!(c5.facets, 10);
    }

    #[test]
    fn matroid_isomorphism_examples() {
        let star = g("n=5; edges=1-2,1-3,1-4,1-5");
        let path = ZonotopeGraph::path(5).unwrap();
        assert!(matroids_isomorphic(&star, &path));
        let tri_two_pendants = g("n=5; edges=1-2,2-3,1-3,3-4,4-5");
        let tri_spread = g("n=5; edges=1-2,2-3,1-3,1-4,2-5");
        assert!(matroids_isomorphic(&tri_two_pendants, &tri_spread));
        assert!(!matroids_isomorphic(&ZonotopeGraph::cycle(5).unwrap(), &g("n=5; edges=1-2,2-3,3-4,4-1,4-5")));
    }
}
