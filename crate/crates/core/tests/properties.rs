mod common;

use parallelo_core::linalg::{rank_of, RatMatrix, RatVector, Rational};
use parallelo_core::oracle::{k33_generators, pi_generators};
use parallelo_core::venkov::{analyze, VenkovGraph};
use parallelo_core::zonograph::{enumerate_candidate_graphs, house_graph};
use parallelo_core::{LinalgError, ZonotopeGraph};
use proptest::prelude::*;

use common::{oracle_signature, unimodular};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = (usize, Vec<RatVector>)> {
    (1..=max_cols).prop_flat_map(move |cols| {
        (Just(cols), prop::collection::vec(prop::collection::vec(small_rational(), cols), 0..=max_rows))
    })
}

proptest! {
    #[test]
    fn quotient_times_inverse_is_one(a in -50i64..=50, b in -50i64..=50) {
        prop_assume!(a != 0 && b != 0);
        let x = Rational::new(a, b).unwrap();
        let y = Rational::new(b, a).unwrap();
        prop_assert_eq!(&x * &y, Rational::one());
        prop_assert_eq!(x.recip().unwrap(), y);
    }

    #[test]
    fn rank_is_bounded_and_permutation_invariant(
        (cols, rows) in matrix(6, 5),
        seed in any::<u64>(),
    ) {
        let r = rank_of(cols, rows.iter().map(Vec::as_slice));
        prop_assert!(r <= rows.len().min(cols));
        let mut shuffled = rows.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            let j = (seed.rotate_left(i as u32) % (i as u64 + 1)) as usize;
            shuffled.swap(i, j);
        }
        prop_assert_eq!(rank_of(cols, shuffled.iter().map(Vec::as_slice)), r);
        let m = RatMatrix::from_rows(cols, rows.clone()).unwrap();
        prop_assert_eq!(m.rank(), r);
        prop_assert_eq!(m.transpose().rank(), r);
    }

    #[test]
    fn rows_lie_in_the_row_space((cols, rows) in matrix(5, 5), coeffs in prop::collection::vec(small_rational(), 5)) {
        prop_assume!(!rows.is_empty());
        let m = RatMatrix::from_rows(cols, rows.clone()).unwrap();
        for row in &rows {
            prop_assert!(m.in_row_space(row).unwrap());
        }
        let mut combo = vec![Rational::zero(); cols];
        for (row, c) in rows.iter().zip(&coeffs) {
            for (x, y) in combo.iter_mut().zip(row) {
                *x = &*x + &(c * y);
            }
        }
        prop_assert!(m.in_row_space(&combo).unwrap());
        prop_assert_eq!(
            m.in_row_space(&vec![Rational::one(); cols + 1]),
            Err(LinalgError::Dimension { expected: cols, found: cols + 1 })
        );
    }

    #[test]
    fn fundamental_cycles_are_closed_and_span(
        n in 1usize..7,
        raw in prop::collection::vec((0usize..7, 0usize..7, 0usize..4), 0..14),
    ) {
        let mut vg: VenkovGraph<usize> = VenkovGraph::new((0..n).collect());
        for (a, b, belt) in raw {
            let (a, b) = (a % n, b % n);
            if a != b {
                vg.add_edge(belt, a, b);
            }
        }
        let all: Vec<usize> = (0..vg.edge_count()).collect();
        let cycles = vg.fundamental_cycles(&all);
        prop_assert_eq!(cycles.len(), vg.cycle_dim());
        for c in &cycles {
            prop_assert!(vg.is_closed(c));
            prop_assert!(vg.boundary(c).iter().all(Rational::is_zero));
        }
        prop_assert_eq!(rank_of(vg.edge_count(), cycles.iter().map(|c| c.coefficients.as_slice())), vg.cycle_dim());
    }

    #[test]
    fn oracle_combinatorics_survive_unimodular_maps(seed in any::<u64>(), which in 0usize..22) {
        let gens = match enumerate_candidate_graphs().get(which) {
            Some(g) => pi_generators(g),
            None => k33_generators(),
        };
        let image = gens.transformed(&unimodular(seed, gens.ambient_dim())).unwrap();
        prop_assert_eq!(oracle_signature(&gens), oracle_signature(&image));
    }

    #[test]
    fn graph_text_round_trips(mask in 0u32..1024) {
        let pairs: Vec<(usize, usize)> =
            (1..=5).flat_map(|a| ((a + 1)..=5).map(move |b| (a, b))).collect();
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, e)| *e).collect();
        match ZonotopeGraph::new(5, edges) {
            Ok(g) => {
                let text = g.to_string();
                prop_assert_eq!(text.parse::<ZonotopeGraph>().unwrap(), g.clone());
                let report = analyze(&g).report;
                prop_assert!(report.half_belt_rank <= report.gain_rank);
                prop_assert!(report.gain_rank <= report.cycle_dim);
            }
            Err(e) => prop_assert_eq!(e.to_string(), "graph not connected"),
        }
    }
}

/// Simple cycles of a multigraph with at most `max_len` edges, each as the
/// sequence of edge indices, starting from its smallest vertex.
fn simple_cycles<V>(vg: &VenkovGraph<V>, max_len: usize) -> Vec<(usize, Vec<usize>)> {
    fn extend<V>(
        vg: &VenkovGraph<V>,
        start: usize,
        at: usize,
        visited: &mut Vec<usize>,
        walk: &mut Vec<usize>,
        max_len: usize,
        out: &mut Vec<(usize, Vec<usize>)>,
    ) {
        for (k, e) in vg.edges.iter().enumerate() {
            if walk.contains(&k) {
                continue;
            }
            let next = match (e.tail == at, e.head == at) {
                (true, _) => e.head,
                (_, true) => e.tail,
                _ => continue,
            };
            if next == start && !walk.is_empty() {
                let mut closed = walk.clone();
                closed.push(k);
                out.push((start, closed));
            } else if next > start && !visited.contains(&next) && walk.len() + 1 < max_len {
                visited.push(next);
                walk.push(k);
                extend(vg, start, next, visited, walk, max_len, out);
                walk.pop();
                visited.pop();
            }
        }
    }
    let mut out = Vec::new();
    for start in 0..vg.vertex_count() {
        extend(vg, start, start, &mut vec![start], &mut Vec::new(), max_len, &mut out);
    }
    out
}

#[test]
fn every_short_simple_cycle_of_the_example_is_generated() {
    let a = analyze(&house_graph());
    let rows: Vec<RatVector> = a
        .half_belts
        .iter()
        .chain(a.projections.iter().flat_map(|p| p.basis.iter()))
        .map(|c| c.coefficients.clone())
        .collect();
    let gain = RatMatrix::from_rows(a.venkov.edge_count(), rows).unwrap();
    assert_eq!(gain.rank(), 21);
    let cycles = simple_cycles(&a.venkov, 6);
    assert!(cycles.len() > 100, "only {} simple cycles", cycles.len());
    for (start, walk) in &cycles {
        let c = a.venkov.cycle_from_walk(*start, walk);
        assert!(a.venkov.is_closed(&c));
        assert!(gain.in_row_space(&c.coefficients).unwrap(), "cycle {walk:?} from {start} not generated");
    }
}
