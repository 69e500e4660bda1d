//! Points and displacements in the space of assessments.
//!
//! Every social body carries one [`AssessmentVector`] per kinematic quantity
//! (position, velocity). Coordinates are plain `f64` in units of leo; the
//! dimension is fixed per scenario and must be at least 1.

use crate::error::{Error, Result};

/// A point or displacement in n-dimensional assessment space.
///
/// Coordinates are guaranteed finite; construction rejects NaN and infinities
/// so downstream arithmetic never has to re-check.
#[derive(Debug, Clone, PartialEq)]
pub struct AssessmentVector {
    coords: Vec<f64>,
}

impl AssessmentVector {
    /// Builds a vector, rejecting empty coordinate lists and non-finite entries.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter {
                name: "assessment vector".into(),
                reason: "dimension must be at least 1".into(),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                quantity: "assessment coordinate".into(),
            });
        }
        Ok(Self { coords })
    }

    /// The zero vector of dimension `n` (panics if `n == 0`).
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "dimension must be at least 1");
        Self {
            coords: vec![0.0; n],
        }
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> f64 {
        self.coords[i]
    }

    pub fn set(&mut self, i: usize, value: f64) {
        self.coords[i] = value;
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Dot product. Panics on dimension mismatch; callers validate dimensions
    /// once at state construction.
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.coords.len(), other.coords.len());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.coords.len(), other.coords.len());
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.coords.len(), other.coords.len());
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    /// In-place `self += k * other`, the workhorse of the integrators.
    pub fn add_scaled(&mut self, other: &Self, k: f64) {
        assert_eq!(self.coords.len(), other.coords.len());
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += k * b;
        }
    }

    /// True when every coordinate is finite. Stepping re-checks this because
    /// arithmetic on valid inputs can still overflow.
    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }
}

/// Euclidean distance between two points of equal dimension.
pub fn distance(a: &AssessmentVector, b: &AssessmentVector) -> Result<f64> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.dimension(),
            found: b.dimension(),
        });
    }
    Ok(a.sub(b).norm())
}
