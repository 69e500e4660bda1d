//! Force laws acting on social bodies.
//!
//! Five kinds are composable per scenario: pairwise attraction falling off
//! with the square of assessment distance, a restoring elasticity toward an
//! equilibrium, a destabilizing change force pointing away from it, a
//! constant driving force proportional to the benefits-to-costs ratio of a
//! transaction, and the near-surface gravity a large complex exerts on
//! bodies in its public layer. All laws depend on positions only, never on
//! velocities; there is deliberately no damping term.

use crate::assessment::{classify_layer, LayerClass};
use crate::body::{ComplexBody, SocialBody};
use crate::error::{Error, Result};
use crate::state::SimulationState;
use crate::vector::AssessmentVector;

/// Default softening length guarding the attraction denominator.
pub const SOFTENING_DEFAULT: f64 = 1e-6;

/// Tolerance on the unit-length requirement of driving-force directions.
pub const DIRECTION_UNIT_TOL: f64 = 1e-12;

/// Scalar parameters shared by the positional force laws.
///
/// Each law reads its own subset: attraction uses `gamma` and `softening`,
/// elasticity `k_e` and `equilibrium`, change `k_c` and `equilibrium`,
/// surface gravity `gamma`. Unused fields are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceParams {
    /// Attraction constant γ.
    pub gamma: f64,
    /// Elasticity coefficient k_e.
    pub k_e: f64,
    /// Change-force coefficient k_c.
    pub k_c: f64,
    /// Softening length ε added in quadrature to the attraction distance.
    pub softening: f64,
    /// Equilibrium point for elasticity and change.
    pub equilibrium: AssessmentVector,
}

impl ForceParams {
    pub fn attraction(gamma: f64) -> Self {
        Self {
            gamma,
            k_e: 0.0,
            k_c: 0.0,
            softening: SOFTENING_DEFAULT,
            equilibrium: AssessmentVector::zeros(1),
        }
    }

    pub fn elastic(k_e: f64, equilibrium: AssessmentVector) -> Self {
        Self {
            gamma: 0.0,
            k_e,
            k_c: 0.0,
            softening: SOFTENING_DEFAULT,
            equilibrium,
        }
    }

    pub fn change(k_c: f64, equilibrium: AssessmentVector) -> Self {
        Self {
            gamma: 0.0,
            k_e: 0.0,
            k_c,
            softening: SOFTENING_DEFAULT,
            equilibrium,
        }
    }

    pub fn surface_gravity(gamma: f64) -> Self {
        Self {
            gamma,
            k_e: 0.0,
            k_c: 0.0,
            softening: SOFTENING_DEFAULT,
            equilibrium: AssessmentVector::zeros(1),
        }
    }

    pub fn with_softening(mut self, softening: f64) -> Self {
        self.softening = softening;
        self
    }

    fn validate_common(&self) -> Result<()> {
        for (name, v) in [
            ("gamma", self.gamma),
            ("k_e", self.k_e),
            ("k_c", self.k_c),
            ("softening", self.softening),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    quantity: name.into(),
                });
            }
        }
        if self.k_e < 0.0 || self.k_c < 0.0 || self.softening < 0.0 {
            return Err(Error::InvalidParameter {
                name: "force params".into(),
                reason: "k_e, k_c, and softening must be >= 0".into(),
            });
        }
        Ok(())
    }

    fn validate_gamma_positive(&self) -> Result<()> {
        if self.gamma <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma".into(),
                reason: "must be > 0 for attraction and surface gravity".into(),
            });
        }
        Ok(())
    }
}

/// A driving force: constant direction, magnitude scale * (PB / PC).
#[derive(Debug, Clone, PartialEq)]
pub struct DrivingForceSpec {
    pub perceived_benefits: f64,
    pub perceived_costs: f64,
    /// Unit vector (within 1e-12) along which the force acts.
    pub direction: AssessmentVector,
    pub scale: f64,
}

impl DrivingForceSpec {
    pub fn new(
        perceived_benefits: f64,
        perceived_costs: f64,
        direction: AssessmentVector,
        scale: f64,
    ) -> Result<Self> {
        let spec = Self {
            perceived_benefits,
            perceived_costs,
            direction,
            scale,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("perceived benefits", self.perceived_benefits),
            ("perceived costs", self.perceived_costs),
            ("driving-force scale", self.scale),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: name.into(),
                    reason: "must be finite and > 0".into(),
                });
            }
        }
        if (self.direction.norm() - 1.0).abs() > DIRECTION_UNIT_TOL {
            return Err(Error::InvalidParameter {
                name: "driving-force direction".into(),
                reason: format!(
                    "must be a unit vector (norm deviates by more than {DIRECTION_UNIT_TOL})"
                ),
            });
        }
        Ok(())
    }

    /// Benefits-to-costs ratio PB / PC.
    pub fn ratio(&self) -> f64 {
        self.perceived_benefits / self.perceived_costs
    }

    /// Whether the ratio strictly exceeds one, i.e. the transaction the
    /// force models may actually happen. Exactly 1.0 does not qualify.
    pub fn transaction_likely(&self) -> bool {
        self.ratio() > 1.0
    }
}

/// The kind of a force binding, for reporting and dispatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceKind {
    Attraction,
    Elasticity,
    Change,
    Driving,
    SurfaceGravity,
}

impl std::fmt::Display for ForceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ForceKind::Attraction => "attraction",
            ForceKind::Elasticity => "elasticity",
            ForceKind::Change => "change",
            ForceKind::Driving => "driving",
            ForceKind::SurfaceGravity => "surface_gravity",
        };
        f.write_str(s)
    }
}

/// A force law bound to the bodies it couples. The variant carries exactly
/// the coupling its kind needs, so arity mismatches cannot be represented.
#[derive(Debug, Clone, PartialEq)]
pub enum ForceModel {
    /// Mutual attraction between two bodies.
    Attraction {
        first: String,
        second: String,
        params: ForceParams,
    },
    /// Restoring force pulling one body toward `params.equilibrium`.
    Elasticity { body: String, params: ForceParams },
    /// Destabilizing force pushing one body away from `params.equilibrium`.
    Change { body: String, params: ForceParams },
    /// Constant transaction force on one body.
    Driving { body: String, spec: DrivingForceSpec },
    /// Near-surface pull of a complex on a body in its public layer.
    SurfaceGravity {
        body: String,
        complex: String,
        params: ForceParams,
        /// Skip the public-layer precondition when set.
        waive_layer_check: bool,
    },
}

impl ForceModel {
    pub fn kind(&self) -> ForceKind {
        match self {
            ForceModel::Attraction { .. } => ForceKind::Attraction,
            ForceModel::Elasticity { .. } => ForceKind::Elasticity,
            ForceModel::Change { .. } => ForceKind::Change,
            ForceModel::Driving { .. } => ForceKind::Driving,
            ForceModel::SurfaceGravity { .. } => ForceKind::SurfaceGravity,
        }
    }

    /// Ids of the bodies this binding applies force to.
    pub fn coupled_bodies(&self) -> Vec<&str> {
        match self {
            ForceModel::Attraction { first, second, .. } => vec![first, second],
            ForceModel::Elasticity { body, .. }
            | ForceModel::Change { body, .. }
            | ForceModel::Driving { body, .. }
            | ForceModel::SurfaceGravity { body, .. } => vec![body],
        }
    }

    pub fn validate(&self, dimension: usize) -> Result<()> {
        match self {
            ForceModel::Attraction { params, .. } => {
                params.validate_common()?;
                params.validate_gamma_positive()
            }
            ForceModel::Elasticity { params, .. } | ForceModel::Change { params, .. } => {
                params.validate_common()?;
                if params.equilibrium.dimension() != dimension {
                    return Err(Error::DimensionMismatch {
                        expected: dimension,
                        found: params.equilibrium.dimension(),
                    });
                }
                Ok(())
            }
            ForceModel::Driving { spec, .. } => {
                spec.validate()?;
                if spec.direction.dimension() != dimension {
                    return Err(Error::DimensionMismatch {
                        expected: dimension,
                        found: spec.direction.dimension(),
                    });
                }
                Ok(())
            }
            ForceModel::SurfaceGravity { params, .. } => {
                params.validate_common()?;
                params.validate_gamma_positive()
            }
        }
    }
}

/// Attraction exerted on `body` by `other`: magnitude
/// γ m₁ m₂ / (r² + ε²), pointing from `body` toward `other`.
///
/// Swapping the arguments negates the result exactly, component for
/// component, so paired evaluations conserve momentum to the last bit.
/// Coincident bodies are an error at ε = 0 and feel no force otherwise.
pub fn attraction_force(
    body: &SocialBody,
    other: &SocialBody,
    params: &ForceParams,
) -> Result<AssessmentVector> {
    let delta = other.position.sub(&body.position);
    let r2: f64 = delta.as_slice().iter().map(|d| d * d).sum();
    if r2 == 0.0 {
        if params.softening == 0.0 {
            return Err(Error::Singularity {
                body_a: body.id.clone(),
                body_b: other.id.clone(),
            });
        }
        return Ok(AssessmentVector::zeros(body.dimension()));
    }
    let magnitude =
        params.gamma * (body.mass * other.mass) / (r2 + params.softening * params.softening);
    let scale = magnitude / r2.sqrt();
    Ok(delta.scaled(scale))
}

/// Elastic restoring force -k_e (position - equilibrium).
pub fn elasticity_force(body: &SocialBody, params: &ForceParams) -> Result<AssessmentVector> {
    displacement(body, params).map(|d| d.scaled(-params.k_e))
}

/// Change force +k_c (position - equilibrium).
pub fn change_force(body: &SocialBody, params: &ForceParams) -> Result<AssessmentVector> {
    displacement(body, params).map(|d| d.scaled(params.k_c))
}

fn displacement(body: &SocialBody, params: &ForceParams) -> Result<AssessmentVector> {
    if params.equilibrium.dimension() != body.dimension() {
        return Err(Error::DimensionMismatch {
            expected: body.dimension(),
            found: params.equilibrium.dimension(),
        });
    }
    Ok(body.position.sub(&params.equilibrium))
}

/// The driving force vector: scale * (PB / PC) along the unit direction.
pub fn driving_force(spec: &DrivingForceSpec) -> AssessmentVector {
    spec.direction.scaled(spec.scale * spec.ratio())
}

/// Surface gravity of `complex` on `body`: magnitude (γ m_c / R²) m,
/// directed from the body toward the complex center. The magnitude is
/// position-independent — it is the thin-layer constant — so it holds
/// across the whole public layer.
///
/// Requires the body to sit in the public layer unless `waive_layer_check`.
pub fn surface_gravity_force(
    body: &SocialBody,
    complex: &ComplexBody,
    params: &ForceParams,
    waive_layer_check: bool,
) -> Result<AssessmentVector> {
    if body.dimension() != complex.center.dimension() {
        return Err(Error::DimensionMismatch {
            expected: body.dimension(),
            found: complex.center.dimension(),
        });
    }
    let toward_center = complex.center.sub(&body.position);
    let dist = toward_center.norm();
    if !waive_layer_check {
        let class = classify_layer(dist, complex)?;
        if class != LayerClass::OrdinaryPublic {
            return Err(Error::OutsideLayer {
                body: body.id.clone(),
                complex: complex.id.clone(),
            });
        }
    }
    if dist == 0.0 {
        if params.softening == 0.0 {
            return Err(Error::Singularity {
                body_a: body.id.clone(),
                body_b: complex.id.clone(),
            });
        }
        return Ok(AssessmentVector::zeros(body.dimension()));
    }
    let g = params.gamma * complex.mass / (complex.radius * complex.radius);
    let magnitude = g * body.mass;
    Ok(toward_center.scaled(magnitude / dist))
}

/// Evaluates one binding's contribution to the force on `body`, or `None`
/// when the binding does not couple it.
pub fn evaluate_contribution(
    model: &ForceModel,
    body: &SocialBody,
    state: &SimulationState,
) -> Result<Option<AssessmentVector>> {
    let f = match model {
        ForceModel::Attraction {
            first,
            second,
            params,
        } => {
            let other_id = if body.id == *first {
                second
            } else if body.id == *second {
                first
            } else {
                return Ok(None);
            };
            let other = state.body(other_id)?;
            Some(attraction_force(body, other, params)?)
        }
        ForceModel::Elasticity { body: id, params } if *id == body.id => {
            Some(elasticity_force(body, params)?)
        }
        ForceModel::Change { body: id, params } if *id == body.id => {
            Some(change_force(body, params)?)
        }
        ForceModel::Driving { body: id, spec } if *id == body.id => Some(driving_force(spec)),
        ForceModel::SurfaceGravity {
            body: id,
            complex,
            params,
            waive_layer_check,
        } if *id == body.id => {
            let complex = state.complex(complex)?;
            Some(surface_gravity_force(body, complex, params, *waive_layer_check)?)
        }
        _ => None,
    };
    Ok(f)
}

/// Sums every binding's contribution to the force on `body`, in the order
/// the bindings are listed.
pub fn net_force(body: &SocialBody, state: &SimulationState) -> Result<AssessmentVector> {
    let mut total = AssessmentVector::zeros(body.dimension());
    for model in &state.forces {
        if let Some(f) = evaluate_contribution(model, body, state)? {
            total = total.add(&f);
        }
    }
    Ok(total)
}

/// Long-run character of an elasticity + change combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClass {
    /// k_c < k_e: the restoring force wins; motion stays bounded.
    Sustainable,
    /// k_c = k_e: forces cancel; the body is static or drifts inertially.
    Neutral,
    /// k_c > k_e: displacement grows without bound.
    Unsustainable,
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StabilityClass::Sustainable => "sustainable",
            StabilityClass::Neutral => "neutral",
            StabilityClass::Unsustainable => "unsustainable",
        };
        f.write_str(s)
    }
}

/// Classifies by the sign of k_c - k_e.
pub fn stability_class(k_e: f64, k_c: f64) -> StabilityClass {
    if k_c < k_e {
        StabilityClass::Sustainable
    } else if k_c == k_e {
        StabilityClass::Neutral
    } else {
        StabilityClass::Unsustainable
    }
}
