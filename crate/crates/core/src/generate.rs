//! Seeded generators for randomized kernels, targets, and permutations.
//!
//! These back the property and acceptance tests: every generator is a pure
//! function of the supplied [`RandomStream`], so failures replay exactly.

use crate::dist::{Distribution, UnnormalizedWeights};
use crate::kernel::TransitionKernel;
use crate::sampler::RandomStream;
use crate::structure::{check_aperiodic, check_irreducible};

/// Dense kernel with strictly positive entries: rows drawn uniformly with a
/// floor of 0.05 before normalization, so the minimum entry stays sane.
pub fn random_dense_kernel(k: usize, rng: &mut RandomStream) -> TransitionKernel {
    let rows = (0..k)
        .map(|_| {
            let raw: Vec<f64> = (0..k).map(|_| 0.05 + rng.next_f64()).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / total).collect()
        })
        .collect();
    TransitionKernel::from_rows(rows).expect("normalized positive rows")
}

/// Sparse kernel whose positivity pattern contains a full directed cycle
/// (hence irreducible) plus random extra edges; may be periodic.
pub fn random_irreducible_kernel(k: usize, rng: &mut RandomStream) -> TransitionKernel {
    let kernel = random_patterned_kernel(k, rng, false);
    debug_assert!(check_irreducible(&kernel));
    kernel
}

/// As [`random_irreducible_kernel`] but with one guaranteed self loop, which
/// makes the chain aperiodic.
pub fn random_aperiodic_kernel(k: usize, rng: &mut RandomStream) -> TransitionKernel {
    let kernel = random_patterned_kernel(k, rng, true);
    debug_assert!(check_aperiodic(&kernel));
    kernel
}

fn random_patterned_kernel(
    k: usize,
    rng: &mut RandomStream,
    force_self_loop: bool,
) -> TransitionKernel {
    let mut pattern = vec![vec![false; k]; k];
    for z in 0..k {
        pattern[z][(z + 1) % k] = true;
    }
    if force_self_loop {
        let z = rng.next_u64() as usize % k;
        pattern[z][z] = true;
    }
    let extra_edges = (rng.next_u64() as usize) % (k * k / 2 + 1);
    for _ in 0..extra_edges {
        let z = rng.next_u64() as usize % k;
        let s = rng.next_u64() as usize % k;
        pattern[z][s] = true;
    }
    let rows = pattern
        .into_iter()
        .map(|row| {
            let raw: Vec<f64> = row
                .into_iter()
                .map(|on| if on { 0.1 + rng.next_f64() } else { 0.0 })
                .collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / total).collect()
        })
        .collect();
    TransitionKernel::from_rows(rows).expect("normalized rows")
}

/// Arbitrary sparsity pattern with at least one edge per row; the result may
/// be reducible or periodic. Used to exercise definition-agreement checks.
pub fn random_pattern_kernel(k: usize, rng: &mut RandomStream) -> TransitionKernel {
    let rows = (0..k)
        .map(|_| {
            let mut row: Vec<f64> = (0..k)
                .map(|_| {
                    if rng.next_f64() < 0.35 {
                        0.1 + rng.next_f64()
                    } else {
                        0.0
                    }
                })
                .collect();
            if row.iter().all(|&v| v == 0.0) {
                let s = rng.next_u64() as usize % k;
                row[s] = 1.0;
            }
            let total: f64 = row.iter().sum();
            row.into_iter().map(|v| v / total).collect()
        })
        .collect();
    TransitionKernel::from_rows(rows).expect("normalized rows")
}

/// Strictly positive weights, uniform in `[0.1, 1.1)`.
pub fn random_positive_weights(k: usize, rng: &mut RandomStream) -> UnnormalizedWeights {
    let weights = (0..k).map(|_| 0.1 + rng.next_f64()).collect();
    UnnormalizedWeights::from_weights(weights).expect("positive weights")
}

/// Weights of the form `2^e` with random exponents in `[-6, 6]`. Scaling
/// such weights by a constant is exact in IEEE arithmetic, which bit-exact
/// scale-invariance checks require.
pub fn random_dyadic_weights(k: usize, rng: &mut RandomStream) -> UnnormalizedWeights {
    let weights = (0..k)
        .map(|_| {
            let exponent = (rng.next_u64() % 13) as i32 - 6;
            (2.0f64).powi(exponent)
        })
        .collect();
    UnnormalizedWeights::from_weights(weights).expect("positive weights")
}

/// Strictly positive random distribution.
pub fn random_positive_distribution(k: usize, rng: &mut RandomStream) -> Distribution {
    random_positive_weights(k, rng)
        .normalize()
        .expect("positive weights normalize")
}

/// Fisher-Yates shuffle of `0..k`.
pub fn random_permutation(k: usize, rng: &mut RandomStream) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    perm
}
