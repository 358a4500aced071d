//! Row-stochastic transition kernels and their algebra.

use crate::error::{Error, Result};
use crate::space::StateSpace;
use crate::util::{neumaier_sum, Fnv1a};
use crate::STOCHASTIC_TOL;

/// A transition kernel over a finite state space, stored as a dense
/// row-stochastic matrix: `rows[z][s]` is the probability of moving from
/// state `z` to state `s` in one step.
///
/// Every row is validated at construction to be non-negative, finite, and
/// summing to one within [`STOCHASTIC_TOL`](crate::STOCHASTIC_TOL). Products
/// of valid kernels are not re-normalized; the tolerance absorbs the rounding
/// of an exact matrix product.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionKernel {
    space: StateSpace,
    rows: Vec<Vec<f64>>,
}

impl TransitionKernel {
    pub fn new(space: StateSpace, rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = space.size();
        if rows.len() != k {
            return Err(Error::SpaceMismatch {
                left: k,
                right: rows.len(),
            });
        }
        for (row_index, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::RaggedMatrix {
                    row: row_index,
                    len: row.len(),
                    expected: k,
                });
            }
            for (col, &value) in row.iter().enumerate() {
                if !(value.is_finite() && value >= 0.0) {
                    return Err(Error::InvalidKernelEntry {
                        row: row_index,
                        col,
                        value,
                    });
                }
            }
            let sum = neumaier_sum(row.iter().copied());
            if !((sum - 1.0).abs() <= STOCHASTIC_TOL) {
                return Err(Error::RowNotStochastic {
                    row: row_index,
                    sum,
                    tol: STOCHASTIC_TOL,
                });
            }
        }
        Ok(TransitionKernel { space, rows })
    }

    /// Build over a fresh unlabeled space.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let space = StateSpace::new(rows.len())?;
        Self::new(space, rows)
    }

    /// The identity kernel: every state is absorbing.
    pub fn identity(k: usize) -> Result<Self> {
        let space = StateSpace::new(k)?;
        let rows = (0..k)
            .map(|i| {
                let mut row = vec![0.0; k];
                row[i] = 1.0;
                row
            })
            .collect();
        Ok(TransitionKernel { space, rows })
    }

    /// Every row uniform over all `k` states.
    pub fn uniform(k: usize) -> Result<Self> {
        let space = StateSpace::new(k)?;
        let rows = vec![vec![1.0 / k as f64; k]; k];
        Ok(TransitionKernel { space, rows })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn size(&self) -> usize {
        self.space.size()
    }

    pub fn row(&self, z: usize) -> &[f64] {
        &self.rows[z]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn entry(&self, z: usize, s: usize) -> f64 {
        self.rows[z][s]
    }

    /// Smallest matrix entry.
    pub fn min_entry(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|row| row.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// Matrix product `self * other`: one step of `self` followed by one step
    /// of `other`.
    pub fn compose(&self, other: &TransitionKernel) -> Result<TransitionKernel> {
        self.space.check_same(other.space())?;
        let k = self.size();
        let mut rows = vec![vec![0.0; k]; k];
        for (z, out_row) in rows.iter_mut().enumerate() {
            for (j, &a) in self.rows[z].iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (s, &b) in other.rows[j].iter().enumerate() {
                    out_row[s] += a * b;
                }
            }
        }
        TransitionKernel::new(self.space.clone(), rows)
    }

    /// `n`-step kernel, computed by repeated squaring; `n = 0` is the
    /// identity.
    pub fn power(&self, n: usize) -> Result<TransitionKernel> {
        let mut result = TransitionKernel::identity(self.size())?;
        let mut base = self.clone();
        let mut exp = n;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.compose(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(result)
    }

    /// Relabel states: state `s` moves to index `perm[s]`.
    ///
    /// Panics if `perm` is not a permutation of `0..k`.
    pub fn permute(&self, perm: &[usize]) -> TransitionKernel {
        let k = self.size();
        assert_eq!(perm.len(), k, "permutation length mismatch");
        let mut seen = vec![false; k];
        for &t in perm {
            assert!(t < k && !seen[t], "not a permutation");
            seen[t] = true;
        }
        let mut rows = vec![vec![0.0; k]; k];
        for z in 0..k {
            for s in 0..k {
                rows[perm[z]][perm[s]] = self.rows[z][s];
            }
        }
        TransitionKernel {
            space: StateSpace::new(k).expect("non-empty"),
            rows,
        }
    }

    /// Opaque, deterministic identifier of the kernel contents; used to tag
    /// simulated traces with the kernel that generated them.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv1a::new();
        h.write_u64(self.size() as u64);
        for row in &self.rows {
            for &v in row {
                h.write_f64(v);
            }
        }
        h.finish()
    }
}
