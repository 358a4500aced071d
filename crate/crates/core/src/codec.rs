//! Bijection between flat state indices and coordinate tuples of a product
//! space `V^m`.

use crate::error::{Error, Result};

/// Index codec for a product space with `coords` coordinates, each taking
/// `values_per_coord` values.
///
/// Flat indices run `0..total` with the *first* coordinate most significant:
/// for two binary coordinates the order is `(0,0), (0,1), (1,0), (1,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductSpaceCodec {
    coords: usize,
    values_per_coord: usize,
    total: usize,
}

impl ProductSpaceCodec {
    pub fn new(coords: usize, values_per_coord: usize) -> Result<Self> {
        if coords == 0 || values_per_coord == 0 {
            return Err(Error::ProductSpaceTooLarge {
                coords,
                values: values_per_coord,
            });
        }
        let total = (values_per_coord as u128).checked_pow(coords as u32);
        let total = match total {
            Some(t) if t <= usize::MAX as u128 => t as usize,
            _ => {
                return Err(Error::ProductSpaceTooLarge {
                    coords,
                    values: values_per_coord,
                })
            }
        };
        Ok(ProductSpaceCodec {
            coords,
            values_per_coord,
            total,
        })
    }

    pub fn coords(&self) -> usize {
        self.coords
    }

    pub fn values_per_coord(&self) -> usize {
        self.values_per_coord
    }

    /// Number of states in the product space.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Flat index of a coordinate tuple.
    ///
    /// Panics if the tuple has the wrong arity or a value out of range.
    pub fn encode(&self, tuple: &[usize]) -> usize {
        assert_eq!(tuple.len(), self.coords, "tuple arity mismatch");
        let mut index = 0usize;
        for &value in tuple {
            assert!(value < self.values_per_coord, "coordinate value out of range");
            index = index * self.values_per_coord + value;
        }
        index
    }

    /// Coordinate tuple of a flat index.
    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mut tuple = vec![0usize; self.coords];
        self.decode_into(index, &mut tuple);
        tuple
    }

    /// Like [`decode`](Self::decode) but reusing a caller-owned buffer.
    pub fn decode_into(&self, index: usize, tuple: &mut [usize]) {
        assert!(index < self.total, "index out of range");
        assert_eq!(tuple.len(), self.coords, "tuple arity mismatch");
        let mut rest = index;
        for slot in tuple.iter_mut().rev() {
            *slot = rest % self.values_per_coord;
            rest /= self.values_per_coord;
        }
    }
}
