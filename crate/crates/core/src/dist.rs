//! Probability distributions and unnormalized target weights.

use crate::error::{Error, Result};
use crate::kernel::TransitionKernel;
use crate::space::StateSpace;
use crate::util::neumaier_sum;
use crate::STOCHASTIC_TOL;

/// A probability vector over a finite state space.
///
/// Entries are validated at construction: non-negative, finite, and summing
/// to one within [`STOCHASTIC_TOL`](crate::STOCHASTIC_TOL). Instances are
/// immutable; every operation returns a new value.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    space: StateSpace,
    mass: Vec<f64>,
}

impl Distribution {
    pub fn new(space: StateSpace, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != space.size() {
            return Err(Error::SpaceMismatch {
                left: space.size(),
                right: mass.len(),
            });
        }
        for (index, &value) in mass.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidMassEntry { index, value });
            }
        }
        let sum = neumaier_sum(mass.iter().copied());
        if !((sum - 1.0).abs() <= STOCHASTIC_TOL) {
            return Err(Error::MassNotNormalized {
                sum,
                tol: STOCHASTIC_TOL,
            });
        }
        Ok(Distribution { space, mass })
    }

    /// Build over a fresh unlabeled space.
    pub fn from_mass(mass: Vec<f64>) -> Result<Self> {
        let space = StateSpace::new(mass.len())?;
        Self::new(space, mass)
    }

    /// Uniform distribution over `k` states.
    pub fn uniform(k: usize) -> Result<Self> {
        let space = StateSpace::new(k)?;
        Ok(Distribution {
            mass: vec![1.0 / k as f64; k],
            space,
        })
    }

    /// Point mass at `state`.
    pub fn point(k: usize, state: usize) -> Result<Self> {
        let space = StateSpace::new(k)?;
        if state >= k {
            return Err(Error::StateOutOfRange { state, size: k });
        }
        let mut mass = vec![0.0; k];
        mass[state] = 1.0;
        Ok(Distribution { space, mass })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// One step of the chain applied to this law: returns `pi^t k`.
    pub fn push_forward(&self, k: &TransitionKernel) -> Result<Distribution> {
        self.space.check_same(k.space())?;
        let n = self.len();
        let mut out = vec![0.0; n];
        for (z, &p) in self.mass.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let row = k.row(z);
            for (s, &q) in row.iter().enumerate() {
                out[s] += p * q;
            }
        }
        Distribution::new(self.space.clone(), out)
    }

    /// True iff `max_s |(pi^t k)_s - pi_s| <= tol`.
    pub fn is_invariant_under(&self, k: &TransitionKernel, tol: f64) -> Result<bool> {
        if !(tol > 0.0) {
            return Err(Error::InvalidTolerance {
                value: tol,
                requirement: "must be > 0",
            });
        }
        let pushed = self.push_forward(k)?;
        let gap = self
            .mass
            .iter()
            .zip(pushed.mass.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        Ok(gap <= tol)
    }

    /// Worst-case reversibility violation: `max_{s,z} |pi_s k_sz - pi_z k_zs|`.
    ///
    /// Zero means the chain is exactly reversible with respect to `self`.
    pub fn detailed_balance_residual(&self, k: &TransitionKernel) -> Result<f64> {
        self.space.check_same(k.space())?;
        let n = self.len();
        let mut worst = 0.0f64;
        for s in 0..n {
            for z in 0..n {
                let forward = self.mass[s] * k.row(s)[z];
                let backward = self.mass[z] * k.row(z)[s];
                worst = worst.max((forward - backward).abs());
            }
        }
        Ok(worst)
    }

    /// Relabel states: entry `s` moves to index `perm[s]`.
    ///
    /// Panics if `perm` is not a permutation of `0..k`.
    pub fn permute(&self, perm: &[usize]) -> Distribution {
        assert_eq!(perm.len(), self.len(), "permutation length mismatch");
        let mut out = vec![f64::NAN; self.len()];
        for (s, &target) in perm.iter().enumerate() {
            assert!(out[target].is_nan(), "not a permutation");
            out[target] = self.mass[s];
        }
        Distribution {
            space: StateSpace::new(self.len()).expect("non-empty"),
            mass: out,
        }
    }
}

/// Non-negative target weights proportional to a probability distribution.
///
/// The normalization constant is never required by Metropolis–Hastings, so
/// weights only need to be finite, non-negative, and not identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct UnnormalizedWeights {
    space: StateSpace,
    weight: Vec<f64>,
}

impl UnnormalizedWeights {
    pub fn new(space: StateSpace, weight: Vec<f64>) -> Result<Self> {
        if weight.len() != space.size() {
            return Err(Error::SpaceMismatch {
                left: space.size(),
                right: weight.len(),
            });
        }
        let mut any_positive = false;
        for (index, &value) in weight.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidWeightEntry { index, value });
            }
            any_positive |= value > 0.0;
        }
        if !any_positive {
            return Err(Error::AllWeightsZero);
        }
        Ok(UnnormalizedWeights { space, weight })
    }

    pub fn from_weights(weight: Vec<f64>) -> Result<Self> {
        let space = StateSpace::new(weight.len())?;
        Self::new(space, weight)
    }

    /// View a distribution as (already normalized) weights.
    pub fn from_distribution(pi: &Distribution) -> Self {
        UnnormalizedWeights {
            space: pi.space().clone(),
            weight: pi.mass().to_vec(),
        }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.weight
    }

    pub fn len(&self) -> usize {
        self.weight.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Normalize into a probability distribution.
    pub fn normalize(&self) -> Result<Distribution> {
        let total = neumaier_sum(self.weight.iter().copied());
        let mass = self.weight.iter().map(|w| w / total).collect();
        Distribution::new(self.space.clone(), mass)
    }
}
