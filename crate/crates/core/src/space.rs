//! Finite state spaces.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// A finite state space `{0, ..., size-1}`, optionally carrying one distinct
/// label per state.
///
/// Labels are presentation metadata: two spaces are interchangeable for all
/// algebraic operations whenever their sizes agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    size: usize,
    labels: Option<Vec<String>>,
}

impl StateSpace {
    /// Unlabeled space with `size` states.
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptySpace);
        }
        Ok(StateSpace { size, labels: None })
    }

    /// Labeled space; requires one distinct label per state.
    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        Ok(StateSpace {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    /// Attach labels to an existing space.
    pub fn relabel(&self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::LabelCountMismatch {
                expected: self.size,
                got: labels.len(),
            });
        }
        Self::with_labels(labels)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Sizes must agree for two objects to interoperate.
    pub(crate) fn check_same(&self, other: &StateSpace) -> Result<()> {
        if self.size != other.size {
            return Err(Error::SpaceMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(())
    }
}
