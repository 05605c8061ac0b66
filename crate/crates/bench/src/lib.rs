//! Shared inputs for the benchmarks.

use clipseq_core::{build_triangulation, random_312_avoider, Permutation, Triangulation};

/// Triangulation of the `n`-gon built from a seeded random 312-avoider.
pub fn random_triangulation(n: u32, seed: u64) -> Triangulation {
    build_triangulation(&random_312_avoider(n - 2, seed)).expect("random avoiders build")
}

/// A decent 312-avoider of length `2m`: the permutation of the alternating
/// form obtained by pairing consecutive values of a random avoider.
pub fn random_decent(m: u32, seed: u64) -> Permutation {
    let base = random_312_avoider(m, seed);
    let values = base.iter().flat_map(|&v| [2 * v, 2 * v - 1]).collect();
    Permutation::new(values).expect("doubling keeps a permutation")
}
