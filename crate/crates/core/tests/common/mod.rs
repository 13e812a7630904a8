#![allow(dead_code)]

use std::collections::BTreeSet;

use parallelo_core::linalg::RatMatrix;
use parallelo_core::oracle::{oracle_belts, oracle_facets, FlatLattice, GeneratorSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random integer matrix of determinant ±1: a product of elementary row
/// operations and sign flips.
pub fn unimodular(seed: u64, dim: usize) -> RatMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..4 * dim {
        let (i, j) = (rng.random_range(0..dim), rng.random_range(0..dim));
        if i == j {
            if rng.random_bool(0.3) {
                rows[i].iter_mut().for_each(|x| *x = -*x);
            }
            continue;
        }
        let k: i64 = rng.random_range(-2..=2);
        let source = rows[j].clone();
        for (x, y) in rows[i].iter_mut().zip(source) {
            *x += k * y;
        }
    }
    RatMatrix::from_int_rows(dim, &rows).expect("square")
}

/// Facet flats, belts with sizes, and flat counts: everything the oracle
/// reports that does not depend on coordinates.
pub type OracleSignature = (BTreeSet<Vec<usize>>, BTreeSet<(Vec<usize>, usize)>, Vec<usize>);

pub fn oracle_signature(gens: &GeneratorSet) -> OracleSignature {
    let facets = oracle_facets(gens).expect("rank at least 2");
    let belts = oracle_belts(gens).expect("rank at least 2");
    (
        facets.into_iter().map(|f| f.members).collect(),
        belts.into_iter().map(|b| (b.flat, b.size)).collect(),
        FlatLattice::new(gens).counts(),
    )
}
