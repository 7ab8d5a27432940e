//! Indexed collections of domain elements.
//!
//! A [`Dataset`] is an ordered, non-empty list of opaque elements from a
//! single domain; the element type parameter carries the domain (real
//! vectors, labeled graphs, ...). Indices `0..n-1` are stable and are the
//! handles used by dissimilarity matrices, granules, and cluster
//! assignments.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DatasetError {
    #[error("a dataset must contain at least one element")]
    Empty,
    #[error("element {index} has dimension {found}, expected {expected}")]
    MixedDimensions {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("element index {index} out of range for dataset of {len} elements")]
    IndexOutOfRange { index: usize, len: usize },
}

/// An ordered, non-empty collection of elements from one domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    elements: Vec<T>,
}

impl<T> Dataset<T> {
    /// Wraps a non-empty element list.
    pub fn new(elements: Vec<T>) -> Result<Self, DatasetError> {
        if elements.is_empty() {
            return Err(DatasetError::Empty);
        }
        Ok(Self { elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Always false; kept for interface completeness.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn get(&self, index: usize) -> Option<&T> {
        self.elements.get(index)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.elements.iter()
    }

    /// Extracts the sub-dataset at the given indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self, DatasetError>
    where
        T: Clone,
    {
        let mut elements = Vec::with_capacity(indices.len());
        for &index in indices {
            let element = self
                .elements
                .get(index)
                .ok_or(DatasetError::IndexOutOfRange {
                    index,
                    len: self.elements.len(),
                })?;
            elements.push(element.clone());
        }
        Self::new(elements)
    }
}

impl<'a, T> IntoIterator for &'a Dataset<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}
