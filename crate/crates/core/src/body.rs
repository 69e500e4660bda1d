//! Social bodies: the point particles of the simulation, and the complex
//! bodies (countries, parties, firms) they move around.

use crate::error::{Error, Result};
use crate::mass::{MassCombiner, MassComponents};
use crate::vector::AssessmentVector;

/// A point-like social body with mass, position, and velocity.
///
/// When the body was specified through its mass components, `mass` is the
/// combiner's output and `mass_components` records the breakdown; bodies
/// configured with a bare scalar mass carry `None` there.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialBody {
    pub id: String,
    pub mass_components: Option<MassComponents>,
    pub mass: f64,
    pub position: AssessmentVector,
    pub velocity: AssessmentVector,
}

impl SocialBody {
    /// Body with an explicit scalar mass.
    pub fn new(
        id: impl Into<String>,
        mass: f64,
        position: AssessmentVector,
        velocity: AssessmentVector,
    ) -> Result<Self> {
        let body = Self {
            id: id.into(),
            mass_components: None,
            mass,
            position,
            velocity,
        };
        body.validate()?;
        Ok(body)
    }

    /// Body whose mass is combined from components.
    pub fn from_components(
        id: impl Into<String>,
        components: MassComponents,
        combiner: &MassCombiner,
        position: AssessmentVector,
        velocity: AssessmentVector,
    ) -> Result<Self> {
        combiner.validate()?;
        let body = Self {
            id: id.into(),
            mass_components: Some(components),
            mass: combiner.combine(&components),
            position,
            velocity,
        };
        body.validate()?;
        Ok(body)
    }

    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::InvalidParameter {
                name: "body id".into(),
                reason: "must not be empty".into(),
            });
        }
        if !self.mass.is_finite() {
            return Err(Error::NonFinite {
                quantity: format!("mass of `{}`", self.id),
            });
        }
        if self.mass <= 0.0 {
            return Err(Error::InvalidParameter {
                name: format!("mass of `{}`", self.id),
                reason: "simulated bodies need strictly positive mass".into(),
            });
        }
        if self.position.dimension() != self.velocity.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.position.dimension(),
                found: self.velocity.dimension(),
            });
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.position.dimension()
    }
}

/// A compound social body: a named container of member ids with a center,
/// a radius, and a public-layer thickness.
///
/// Members may be other complexes (nested structure) or leaf ids. Leaves are
/// evaluators for polling purposes and need not correspond to simulated
/// [`SocialBody`] entries. By default the radius equals the transitive leaf
/// count; scenarios may pin it to a fixed value instead.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBody {
    pub id: String,
    pub members: Vec<String>,
    /// Resolved radius R. Defaults to the leaf count, override allowed.
    pub radius: f64,
    /// Public-layer thickness ΔR; must satisfy 0 < ΔR and stay small
    /// relative to R (the thin-layer bound is checked at scenario load).
    pub layer_thickness: f64,
    pub center: AssessmentVector,
    /// Total mass m_c of the complex.
    pub mass: f64,
}

impl ComplexBody {
    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::InvalidParameter {
                name: "complex id".into(),
                reason: "must not be empty".into(),
            });
        }
        for v in [self.radius, self.layer_thickness, self.mass] {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    quantity: format!("parameters of complex `{}`", self.id),
                });
            }
        }
        if self.radius <= 0.0 {
            return Err(Error::InvalidParameter {
                name: format!("radius of `{}`", self.id),
                reason: "must be > 0".into(),
            });
        }
        if self.layer_thickness <= 0.0 {
            return Err(Error::InvalidParameter {
                name: format!("layer thickness of `{}`", self.id),
                reason: "must be > 0".into(),
            });
        }
        if self.mass <= 0.0 {
            return Err(Error::InvalidParameter {
                name: format!("mass of complex `{}`", self.id),
                reason: "must be > 0".into(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> AssessmentVector {
        AssessmentVector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn rejects_zero_mass() {
        let e = SocialBody::new("a", 0.0, v(&[0.0]), v(&[0.0])).unwrap_err();
        assert!(matches!(e, Error::InvalidParameter { .. }));
    }

    #[test]
    fn rejects_mismatched_position_velocity() {
        let e = SocialBody::new("a", 1.0, v(&[0.0, 0.0]), v(&[0.0])).unwrap_err();
        assert!(matches!(e, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn mass_from_components_uses_combiner() {
        let c = MassComponents::new(2.0, 3.0, 5.0).unwrap();
        let b =
            SocialBody::from_components("a", c, &MassCombiner::Sum, v(&[0.0]), v(&[0.0])).unwrap();
        assert_eq!(b.mass, 10.0);
        assert_eq!(b.mass_components, Some(c));
    }

    #[test]
    fn all_zero_components_rejected_as_zero_mass() {
        let c = MassComponents::new(0.0, 0.0, 0.0).unwrap();
        assert!(
            SocialBody::from_components("a", c, &MassCombiner::Sum, v(&[0.0]), v(&[0.0])).is_err()
        );
    }

    #[test]
    fn complex_validation() {
        let ok = ComplexBody {
            id: "c".into(),
            members: vec!["a".into()],
            radius: 1.0,
            layer_thickness: 0.1,
            center: v(&[0.0]),
            mass: 1.0,
        };
        assert!(ok.validate().is_ok());
        let bad = ComplexBody {
            layer_thickness: 0.0,
            ..ok.clone()
        };
        assert!(bad.validate().is_err());
        let bad = ComplexBody {
            radius: -2.0,
            ..ok
        };
        assert!(bad.validate().is_err());
    }
}
