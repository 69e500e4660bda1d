//! Social mass and its components.
//!
//! A body's mass is composed of an intellectual, a physical, and an economic
//! part. Units are dimensionless: only ratios of masses enter the dynamics,
//! so any consistent scale works. The combiner collapsing the three parts
//! into one scalar is a named strategy recorded in scenario configs; the
//! default is the plain sum, and every strategy must map all-zero components
//! to zero mass and nothing else to zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The three parts of a social mass. All components are finite and >= 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassComponents {
    pub intellectual: f64,
    pub physical: f64,
    pub economic: f64,
}

impl MassComponents {
    pub fn new(intellectual: f64, physical: f64, economic: f64) -> Result<Self> {
        for (name, value) in [
            ("intellectual mass", intellectual),
            ("physical mass", physical),
            ("economic mass", economic),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite {
                    quantity: name.into(),
                });
            }
            if value < 0.0 {
                return Err(Error::OutOfRange {
                    quantity: name.into(),
                    value,
                    min: 0.0,
                    max: f64::INFINITY,
                });
            }
        }
        Ok(Self {
            intellectual,
            physical,
            economic,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.intellectual == 0.0 && self.physical == 0.0 && self.economic == 0.0
    }
}

/// Strategy for collapsing [`MassComponents`] into one scalar mass.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassCombiner {
    /// Unweighted sum of the three components (the default).
    #[default]
    Sum,
    /// Weighted sum. Weights must be finite and strictly positive so the
    /// zero set stays "all components zero".
    Weighted { weights: [f64; 3] },
}

impl MassCombiner {
    pub fn validate(&self) -> Result<()> {
        if let MassCombiner::Weighted { weights } = self {
            if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "mass combiner weights".into(),
                    reason: "all three weights must be finite and > 0".into(),
                });
            }
        }
        Ok(())
    }

    pub fn combine(&self, c: &MassComponents) -> f64 {
        match self {
            MassCombiner::Sum => c.intellectual + c.physical + c.economic,
            MassCombiner::Weighted { weights } => {
                weights[0] * c.intellectual + weights[1] * c.physical + weights[2] * c.economic
            }
        }
    }
}

/// Collapses components with the default combiner. Zero iff all three
/// components are zero.
pub fn combine_mass(c: &MassComponents) -> f64 {
    MassCombiner::Sum.combine(c)
}
