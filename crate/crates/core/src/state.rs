//! The complete state of a scenario at one instant.

use crate::body::{ComplexBody, SocialBody};
use crate::error::{Error, Result};
use crate::forces::ForceModel;
use crate::vector::AssessmentVector;

/// A one-sided rigid plane a body cannot cross: position · normal >= offset.
///
/// Contact is fully inelastic along the normal — the inward velocity
/// component is removed, the tangential one kept — which is what makes a
/// minimal-assessment line behave like a rigid slippery surface.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneConstraint {
    pub body: String,
    normal: AssessmentVector,
    pub offset: f64,
    /// Set when the normal is a coordinate axis; lets the clamp assign
    /// exact values instead of going through projection arithmetic.
    axis: Option<usize>,
}

impl PlaneConstraint {
    /// Axis-aligned floor: coordinate `dimension_index` may not drop below
    /// `min`.
    pub fn floor(
        body: impl Into<String>,
        dimension_index: usize,
        min: f64,
        dimension: usize,
    ) -> Result<Self> {
        if dimension_index >= dimension {
            return Err(Error::OutOfRange {
                quantity: "floor dimension index".into(),
                value: dimension_index as f64,
                min: 0.0,
                max: (dimension - 1) as f64,
            });
        }
        if !min.is_finite() {
            return Err(Error::NonFinite {
                quantity: "floor value".into(),
            });
        }
        let mut normal = AssessmentVector::zeros(dimension);
        normal.set(dimension_index, 1.0);
        Ok(Self {
            body: body.into(),
            normal,
            offset: min,
            axis: Some(dimension_index),
        })
    }

    /// General one-sided plane. The normal is normalized to unit length.
    pub fn plane(body: impl Into<String>, normal: AssessmentVector, offset: f64) -> Result<Self> {
        if !offset.is_finite() {
            return Err(Error::NonFinite {
                quantity: "plane offset".into(),
            });
        }
        let n = normal.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidParameter {
                name: "plane normal".into(),
                reason: "must be a nonzero finite vector".into(),
            });
        }
        let unit = normal.scaled(1.0 / n);
        let axis = single_axis(&unit);
        Ok(Self {
            body: body.into(),
            normal: unit,
            offset,
            axis,
        })
    }

    pub fn normal(&self) -> &AssessmentVector {
        &self.normal
    }

    /// The coordinate index when the plane is axis-aligned.
    pub fn axis(&self) -> Option<usize> {
        self.axis
    }

    /// Clamps a position/velocity pair onto the admissible half-space.
    pub fn apply(&self, position: &mut AssessmentVector, velocity: &mut AssessmentVector) {
        if let Some(d) = self.axis {
            if position.get(d) <= self.offset {
                position.set(d, self.offset);
                if velocity.get(d) < 0.0 {
                    velocity.set(d, 0.0);
                }
            }
            return;
        }
        let s = position.dot(&self.normal);
        if s <= self.offset {
            position.add_scaled(&self.normal, self.offset - s);
            let vn = velocity.dot(&self.normal);
            if vn < 0.0 {
                velocity.add_scaled(&self.normal, -vn);
            }
        }
    }
}

fn single_axis(unit: &AssessmentVector) -> Option<usize> {
    let mut axis = None;
    for (i, &c) in unit.as_slice().iter().enumerate() {
        if c == 1.0 && axis.is_none() {
            axis = Some(i);
        } else if c != 0.0 {
            return None;
        }
    }
    axis
}

/// Bodies, complexes, force bindings, and constraints at a given time.
///
/// Construct through [`SimulationState::new`], which validates the whole
/// graph: consistent dimensions, unique ids, resolvable references, acyclic
/// complex membership. Treat the fields as read-only; the dynamics engine
/// produces new states rather than mutating old ones.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub t: f64,
    pub dimension: usize,
    pub bodies: Vec<SocialBody>,
    pub complexes: Vec<ComplexBody>,
    pub forces: Vec<ForceModel>,
    pub constraints: Vec<PlaneConstraint>,
}

impl SimulationState {
    pub fn new(
        t: f64,
        bodies: Vec<SocialBody>,
        complexes: Vec<ComplexBody>,
        forces: Vec<ForceModel>,
        constraints: Vec<PlaneConstraint>,
    ) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::NonFinite {
                quantity: "time".into(),
            });
        }
        let Some(first) = bodies.first() else {
            return Err(Error::InvalidParameter {
                name: "bodies".into(),
                reason: "a scenario needs at least one body".into(),
            });
        };
        let dimension = first.dimension();
        let state = Self {
            t,
            dimension,
            bodies,
            complexes,
            forces,
            constraints,
        };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::InvalidParameter {
                name: "dimension".into(),
                reason: "must be at least 1".into(),
            });
        }

        let mut body_ids = std::collections::BTreeSet::new();
        for b in &self.bodies {
            b.validate()?;
            if b.dimension() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    found: b.dimension(),
                });
            }
            if !body_ids.insert(b.id.as_str()) {
                return Err(Error::InvalidParameter {
                    name: format!("body id `{}`", b.id),
                    reason: "duplicate".into(),
                });
            }
        }

        let mut complex_ids = std::collections::BTreeSet::new();
        for c in &self.complexes {
            c.validate()?;
            if c.center.dimension() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    found: c.center.dimension(),
                });
            }
            if body_ids.contains(c.id.as_str()) {
                return Err(Error::InvalidParameter {
                    name: format!("complex id `{}`", c.id),
                    reason: "collides with a body id".into(),
                });
            }
            if !complex_ids.insert(c.id.as_str()) {
                return Err(Error::InvalidParameter {
                    name: format!("complex id `{}`", c.id),
                    reason: "duplicate".into(),
                });
            }
        }
        // Surfaces cycles and leafless complexes at load time.
        for c in &self.complexes {
            crate::assessment::leaf_members(c, &self.complexes)?;
        }

        for f in &self.forces {
            f.validate(self.dimension)?;
            for id in f.coupled_bodies() {
                if !body_ids.contains(id) {
                    return Err(Error::UnknownId { id: id.into() });
                }
            }
            if let ForceModel::Attraction { first, second, .. } = f {
                if first == second {
                    return Err(Error::InvalidParameter {
                        name: "attraction binding".into(),
                        reason: format!("`{first}` cannot attract itself"),
                    });
                }
            }
            if let ForceModel::SurfaceGravity { complex, .. } = f {
                if !complex_ids.contains(complex.as_str()) {
                    return Err(Error::UnknownId {
                        id: complex.clone(),
                    });
                }
            }
        }

        for c in &self.constraints {
            if !body_ids.contains(c.body.as_str()) {
                return Err(Error::UnknownId { id: c.body.clone() });
            }
            if c.normal().dimension() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    found: c.normal().dimension(),
                });
            }
        }
        Ok(())
    }

    pub fn body(&self, id: &str) -> Result<&SocialBody> {
        self.bodies
            .iter()
            .find(|b| b.id == id)
            .ok_or_else(|| Error::UnknownId { id: id.into() })
    }

    pub fn body_index(&self, id: &str) -> Result<usize> {
        self.bodies
            .iter()
            .position(|b| b.id == id)
            .ok_or_else(|| Error::UnknownId { id: id.into() })
    }

    pub fn complex(&self, id: &str) -> Result<&ComplexBody> {
        self.complexes
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::UnknownId { id: id.into() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forces::ForceParams;

    fn v(coords: &[f64]) -> AssessmentVector {
        AssessmentVector::new(coords.to_vec()).unwrap()
    }

    fn body(id: &str, pos: &[f64]) -> SocialBody {
        SocialBody::new(id, 1.0, v(pos), AssessmentVector::zeros(pos.len())).unwrap()
    }

    #[test]
    fn rejects_duplicate_body_ids() {
        let e = SimulationState::new(
            0.0,
            vec![body("a", &[0.0]), body("a", &[1.0])],
            vec![],
            vec![],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(e, Error::InvalidParameter { .. }));
    }

    #[test]
    fn rejects_unknown_force_reference() {
        let e = SimulationState::new(
            0.0,
            vec![body("a", &[0.0])],
            vec![],
            vec![ForceModel::Elasticity {
                body: "ghost".into(),
                params: ForceParams::elastic(1.0, v(&[0.0])),
            }],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(e, Error::UnknownId { .. }));
    }

    #[test]
    fn rejects_self_attraction() {
        let e = SimulationState::new(
            0.0,
            vec![body("a", &[0.0]), body("b", &[1.0])],
            vec![],
            vec![ForceModel::Attraction {
                first: "a".into(),
                second: "a".into(),
                params: ForceParams::attraction(1.0),
            }],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(e, Error::InvalidParameter { .. }));
    }

    #[test]
    fn rejects_mixed_dimensions() {
        let e = SimulationState::new(
            0.0,
            vec![body("a", &[0.0]), body("b", &[1.0, 2.0])],
            vec![],
            vec![],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(e, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn axis_floor_clamps_exactly() {
        let c = PlaneConstraint::floor("b", 1, 100.0, 2).unwrap();
        let mut pos = v(&[3.0, 99.97]);
        let mut vel = v(&[1.5, -0.2]);
        c.apply(&mut pos, &mut vel);
        assert_eq!(pos.as_slice(), &[3.0, 100.0]);
        assert_eq!(vel.as_slice(), &[1.5, 0.0], "tangential velocity survives");
    }

    #[test]
    fn floor_leaves_interior_untouched() {
        let c = PlaneConstraint::floor("b", 0, 0.0, 1).unwrap();
        let mut pos = v(&[0.5]);
        let mut vel = v(&[-1.0]);
        c.apply(&mut pos, &mut vel);
        assert_eq!(pos.as_slice(), &[0.5]);
        assert_eq!(vel.as_slice(), &[-1.0]);
    }

    #[test]
    fn oblique_plane_projects() {
        let n = v(&[1.0, 1.0]);
        let c = PlaneConstraint::plane("b", n, 0.0).unwrap();
        let mut pos = v(&[-1.0, 0.0]);
        let mut vel = v(&[-1.0, -1.0]);
        c.apply(&mut pos, &mut vel);
        // Projected onto x + y = 0 along the diagonal.
        assert!((pos.get(0) + pos.get(1)).abs() < 1e-15);
        assert!((vel.get(0) - vel.get(1)).abs() < 1e-15);
        assert!(
            vel.dot(c.normal()).abs() < 1e-15,
            "inward velocity removed"
        );
    }

    #[test]
    fn resting_contact_zeroes_inward_velocity() {
        let c = PlaneConstraint::floor("b", 0, 2.0, 1).unwrap();
        let mut pos = v(&[2.0]);
        let mut vel = v(&[-3.0]);
        c.apply(&mut pos, &mut vel);
        assert_eq!(pos.as_slice(), &[2.0]);
        assert_eq!(vel.as_slice(), &[0.0]);
    }
}
