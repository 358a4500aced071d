//! Structural analysis of transition kernels: irreducibility, period,
//! and the positivity certificate behind geometric convergence bounds.
//!
//! All graph work runs on the *positivity pattern* of the kernel (an edge
//! `z -> s` exists iff the entry is strictly positive), so the verdicts are
//! exact: no thresholding of floating-point matrix powers is involved.

use serde::Serialize;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::kernel::TransitionKernel;
use crate::util::gcd;

/// Structural verdicts for one kernel.
///
/// `period` is present iff the kernel is irreducible; `positivity_index`
/// (serialized as `N`) and `epsilon` are present iff it is aperiodic, in
/// which case `epsilon` is the smallest entry of the `N`-th power.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub irreducible: bool,
    pub aperiodic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub positivity_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

/// Adjacency lists of the positivity graph.
fn positivity_adjacency(k: &TransitionKernel) -> Vec<Vec<usize>> {
    k.rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v > 0.0)
                .map(|(s, _)| s)
                .collect()
        })
        .collect()
}

fn bfs(adjacency: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adjacency.len()];
    let mut queue = VecDeque::new();
    seen[start] = true;
    queue.push_back(start);
    while let Some(z) = queue.pop_front() {
        for &s in &adjacency[z] {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
    }
    seen
}

/// States reachable from `start` in one or more steps of positive
/// probability (the start itself is included, as it is always reachable in
/// zero steps).
pub fn reachable(k: &TransitionKernel, start: usize) -> Vec<bool> {
    bfs(&positivity_adjacency(k), start)
}

/// True iff every state can reach every other state with positive
/// probability in some number of steps: the positivity graph is strongly
/// connected. Decided by forward and backward reachability from state 0.
pub fn check_irreducible(k: &TransitionKernel) -> bool {
    let adjacency = positivity_adjacency(k);
    if !bfs(&adjacency, 0).iter().all(|&v| v) {
        return false;
    }
    let n = adjacency.len();
    let mut transposed = vec![Vec::new(); n];
    for (z, targets) in adjacency.iter().enumerate() {
        for &s in targets {
            transposed[s].push(z);
        }
    }
    bfs(&transposed, 0).iter().all(|&v| v)
}

/// Period of an irreducible kernel: the gcd of the lengths of all closed
/// walks through any fixed state. Computed as the gcd of `depth[z] + 1 -
/// depth[s]` over all edges `z -> s`, with depths taken from a BFS tree
/// rooted at state 0; for strongly connected graphs this equals the cycle
/// gcd. A period of 1 means aperiodic.
pub fn compute_period(k: &TransitionKernel) -> Result<usize> {
    if !check_irreducible(k) {
        return Err(Error::NotIrreducible);
    }
    let adjacency = positivity_adjacency(k);
    let n = adjacency.len();
    let mut depth = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    depth[0] = 0;
    queue.push_back(0);
    while let Some(z) = queue.pop_front() {
        for &s in &adjacency[z] {
            if depth[s] == usize::MAX {
                depth[s] = depth[z] + 1;
                queue.push_back(s);
            }
        }
    }
    let mut g: u64 = 0;
    for (z, targets) in adjacency.iter().enumerate() {
        for &s in targets {
            let diff = depth[z] as i64 + 1 - depth[s] as i64;
            g = gcd(g, diff.unsigned_abs());
        }
    }
    debug_assert!(g > 0);
    Ok(g as usize)
}

/// True iff the kernel is irreducible with period 1; equivalently, some
/// power of the kernel (and all later powers) is entrywise positive.
pub fn check_aperiodic(k: &TransitionKernel) -> bool {
    check_irreducible(k) && matches!(compute_period(k), Ok(1))
}

/// Classical primitivity bound: an aperiodic kernel on `k` states has an
/// all-positive power with exponent at most `k^2 - 2k + 2`.
pub fn wielandt_bound(k: usize) -> usize {
    if k == 1 {
        1
    } else {
        k * k - 2 * k + 2
    }
}

/// Boolean k x k matrix with bit-packed rows; tracks which entries of a
/// kernel power are positive without any floating-point arithmetic.
#[derive(Clone)]
struct PatternMatrix {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl PatternMatrix {
    fn from_kernel(k: &TransitionKernel) -> Self {
        let n = k.size();
        let words = n.div_ceil(64);
        let mut rows = vec![0u64; n * words];
        for (z, row) in k.rows().iter().enumerate() {
            for (s, &v) in row.iter().enumerate() {
                if v > 0.0 {
                    rows[z * words + s / 64] |= 1 << (s % 64);
                }
            }
        }
        PatternMatrix { n, words, rows }
    }

    fn multiply(&self, other: &PatternMatrix) -> PatternMatrix {
        let mut rows = vec![0u64; self.n * self.words];
        for z in 0..self.n {
            let out = &mut rows[z * self.words..(z + 1) * self.words];
            for j in 0..self.n {
                if self.rows[z * self.words + j / 64] >> (j % 64) & 1 == 1 {
                    let other_row = &other.rows[j * other.words..(j + 1) * other.words];
                    for (o, &w) in out.iter_mut().zip(other_row) {
                        *o |= w;
                    }
                }
            }
        }
        PatternMatrix {
            n: self.n,
            words: self.words,
            rows,
        }
    }

    fn all_positive(&self) -> bool {
        for z in 0..self.n {
            for w in 0..self.words {
                let bits_here = 64.min(self.n - w * 64);
                let mask = if bits_here == 64 {
                    u64::MAX
                } else {
                    (1u64 << bits_here) - 1
                };
                if self.rows[z * self.words + w] & mask != mask {
                    return false;
                }
            }
        }
        true
    }
}

/// Smallest exponent with positive pattern for every entry, up to the
/// Wielandt bound. Exact: works on the positivity pattern only.
fn smallest_positive_power(k: &TransitionKernel) -> Option<usize> {
    let base = PatternMatrix::from_kernel(k);
    let mut current = base.clone();
    let cap = wielandt_bound(k.size());
    for n in 1..=cap {
        if current.all_positive() {
            return Some(n);
        }
        if n < cap {
            current = current.multiply(&base);
        }
    }
    None
}

/// The executable content of the geometric convergence argument: the
/// smallest exponent `N` with an entrywise-positive power, together with
/// `epsilon`, the minimum entry of that power.
///
/// The search for `N` runs on the exact positivity pattern; `epsilon` is then
/// read off the floating-point power. The search is capped at the Wielandt
/// bound, which an aperiodic kernel is guaranteed to satisfy.
pub fn positivity_certificate(k: &TransitionKernel) -> Result<(usize, f64)> {
    if !check_aperiodic(k) {
        return Err(Error::NotAperiodic);
    }
    let n = smallest_positive_power(k).ok_or(Error::NotAperiodic)?;
    let epsilon = k.power(n)?.min_entry();
    if !(epsilon > 0.0) {
        // Positive pattern but underflowed float power: outside the numeric
        // range this crate supports.
        return Err(Error::SingularSystem {
            detail: format!("minimum entry of the {n}-th power underflowed to {epsilon}"),
        });
    }
    Ok((n, epsilon))
}

/// Run all structural checks and collect the verdicts.
pub fn analyze(k: &TransitionKernel) -> StructureReport {
    let irreducible = check_irreducible(k);
    let period = if irreducible {
        Some(compute_period(k).expect("irreducible"))
    } else {
        None
    };
    let aperiodic = period == Some(1);
    let (positivity_index, epsilon) = if aperiodic {
        let (n, eps) = positivity_certificate(k).expect("aperiodic");
        (Some(n), Some(eps))
    } else {
        (None, None)
    };
    StructureReport {
        irreducible,
        aperiodic,
        period,
        positivity_index,
        epsilon,
    }
}
