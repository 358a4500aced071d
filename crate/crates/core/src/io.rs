//! File formats: JSON kernel/distribution/weights files, plus the two small
//! CLI argument grammars (function specs and grid specs).
//!
//! Parsers reject invalid input with an error naming the first offending
//! row or entry. All of them are total over arbitrary input and fuzzed in
//! `fuzz/fuzz_targets/`.

use serde::{Deserialize, Serialize};

use crate::dist::{Distribution, UnnormalizedWeights};
use crate::error::{Error, Result};
use crate::kernel::TransitionKernel;
use crate::space::StateSpace;

#[derive(Debug, Serialize, Deserialize)]
struct KernelFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct VectorFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    mass: Vec<f64>,
}

fn space_for(labels: Option<Vec<String>>, size: usize) -> Result<StateSpace> {
    match labels {
        Some(labels) => {
            if labels.len() != size {
                return Err(Error::LabelCountMismatch {
                    expected: size,
                    got: labels.len(),
                });
            }
            StateSpace::with_labels(labels)
        }
        None => StateSpace::new(size),
    }
}

/// Parse a kernel file: `{"labels"?: [..], "matrix": [[..], ..]}`.
pub fn parse_kernel_json(text: &str) -> Result<TransitionKernel> {
    let file: KernelFile = serde_json::from_str(text)?;
    let space = space_for(file.labels, file.matrix.len())?;
    TransitionKernel::new(space, file.matrix)
}

/// Serialize a kernel to its file format.
pub fn kernel_to_json(k: &TransitionKernel) -> String {
    let file = KernelFile {
        labels: k.space().labels().map(|l| l.to_vec()),
        matrix: k.rows().to_vec(),
    };
    serde_json::to_string(&file).expect("kernel serializes")
}

/// Parse a distribution file: `{"labels"?: [..], "mass": [..]}`. The mass
/// must be normalized.
pub fn parse_distribution_json(text: &str) -> Result<Distribution> {
    let file: VectorFile = serde_json::from_str(text)?;
    let space = space_for(file.labels, file.mass.len())?;
    Distribution::new(space, file.mass)
}

/// Serialize a distribution to its file format.
pub fn distribution_to_json(d: &Distribution) -> String {
    let file = VectorFile {
        labels: d.space().labels().map(|l| l.to_vec()),
        mass: d.mass().to_vec(),
    };
    serde_json::to_string(&file).expect("distribution serializes")
}

/// Parse a weights file. Shares the distribution file shape, but the mass
/// array only needs to be non-negative with at least one positive entry;
/// normalization constants are irrelevant to Metropolis–Hastings.
pub fn parse_weights_json(text: &str) -> Result<UnnormalizedWeights> {
    let file: VectorFile = serde_json::from_str(text)?;
    let space = space_for(file.labels, file.mass.len())?;
    UnnormalizedWeights::new(space, file.mass)
}

/// Serialize weights to the shared vector file format.
pub fn weights_to_json(w: &UnnormalizedWeights) -> String {
    let file = VectorFile {
        labels: w.space().labels().map(|l| l.to_vec()),
        mass: w.weights().to_vec(),
    };
    serde_json::to_string(&file).expect("weights serialize")
}

/// Function specification for estimators: either the 1-based state number
/// itself or an indicator of one state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionSpec {
    /// `f(s) = s + 1` (the 1-based state number, matching the CLI surface).
    Identity,
    /// `f(s) = 1` iff `s` is the stored 0-based state.
    Indicator(usize),
}

impl FunctionSpec {
    /// Parse `identity` or `indicator:<state>` with a 1-based state number.
    pub fn parse(spec: &str) -> Result<FunctionSpec> {
        if spec == "identity" {
            return Ok(FunctionSpec::Identity);
        }
        if let Some(raw) = spec.strip_prefix("indicator:") {
            let state: usize = raw.parse().map_err(|_| Error::InvalidFunctionSpec {
                spec: spec.to_string(),
            })?;
            if state == 0 {
                return Err(Error::InvalidFunctionSpec {
                    spec: spec.to_string(),
                });
            }
            return Ok(FunctionSpec::Indicator(state - 1));
        }
        Err(Error::InvalidFunctionSpec {
            spec: spec.to_string(),
        })
    }

    /// The indicator target must exist in a `k`-state space.
    pub fn validate(&self, k: usize) -> Result<()> {
        if let FunctionSpec::Indicator(state) = *self {
            if state >= k {
                return Err(Error::StateOutOfRange { state, size: k });
            }
        }
        Ok(())
    }

    pub fn eval(&self, state: usize) -> f64 {
        match *self {
            FunctionSpec::Identity => (state + 1) as f64,
            FunctionSpec::Indicator(target) => {
                if state == target {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Parse a `<width>x<height>` grid spec with positive decimal integers.
pub fn parse_grid(spec: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidGridSpec {
        spec: spec.to_string(),
    };
    let (w, h) = spec.split_once('x').ok_or_else(bad)?;
    let width: usize = w.parse().map_err(|_| bad())?;
    let height: usize = h.parse().map_err(|_| bad())?;
    if width == 0 || height == 0 || !w.bytes().all(|b| b.is_ascii_digit()) || !h.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    Ok((width, height))
}
