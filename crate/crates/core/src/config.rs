//! TOML scenario configs.
//!
//! A scenario file declares bodies, complexes, force bindings, the
//! integrator, optional constraints, and an optional expectation block.
//! Body positions are either literal coordinates or an instruction to
//! aggregate a poll-record file against a complex's membership tree.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::assessment::{aggregate_assessment, parse_poll_records};
use crate::body::{ComplexBody, SocialBody};
use crate::dynamics::IntegratorConfig;
use crate::error::{Error, Result};
use crate::forces::{DrivingForceSpec, ForceModel, ForceParams};
use crate::mass::{MassCombiner, MassComponents};
use crate::scenarios::{BuiltScenario, Expectation};
use crate::state::{PlaneConstraint, SimulationState};
use crate::vector::AssessmentVector;

/// Layer thickness may not exceed this fraction of the radius unless the
/// config raises the cap explicitly.
pub const DEFAULT_LAYER_RATIO_MAX: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bodies: Vec<BodyConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub complexes: Vec<ComplexConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forces: Vec<ForceConfig>,
    pub integrator: IntegratorConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<ConstraintConfig>,
    #[serde(
        default = "default_outputs",
        skip_serializing_if = "outputs_is_default"
    )]
    pub outputs: Vec<OutputKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_combiner: Option<MassCombiner>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layer_ratio_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyConfig {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_components: Option<MassComponentsConfig>,
    pub position: PositionConfig,
    pub velocity: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassComponentsConfig {
    pub intellectual: f64,
    pub physical: f64,
    pub economic: f64,
}

/// Either literal coordinates or "aggregate this poll file".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PositionConfig {
    Coordinates(Vec<f64>),
    Polls { polls: PollSource },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PollSource {
    /// Poll-record file, resolved relative to the config file.
    pub file: String,
    /// Complex whose leaf members are the eligible evaluators.
    pub complex: String,
    /// Optional per-dimension lower clamp applied after aggregation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexConfig {
    pub id: String,
    pub members: Vec<String>,
    pub layer_thickness: f64,
    pub center: Vec<f64>,
    pub mass: f64,
    /// Fixed radius override; defaults to the transitive leaf count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForceConfig {
    Attraction {
        first: String,
        second: String,
        gamma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        softening: Option<f64>,
    },
    Elasticity {
        body: String,
        k_e: f64,
        equilibrium: Vec<f64>,
    },
    Change {
        body: String,
        k_c: f64,
        equilibrium: Vec<f64>,
    },
    Driving {
        body: String,
        perceived_benefits: f64,
        perceived_costs: f64,
        direction: Vec<f64>,
        scale: f64,
    },
    SurfaceGravity {
        body: String,
        complex: String,
        gamma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        waive_layer_check: Option<bool>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConstraintConfig {
    Floor {
        body: String,
        dimension: usize,
        min: f64,
    },
    Plane {
        body: String,
        normal: Vec<f64>,
        offset: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExpectedConfig {
    Oscillator { omega: f64, a: f64, b: f64 },
    Ratio { acceleration_ratio: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Trajectories,
    Energy,
}

fn default_outputs() -> Vec<OutputKind> {
    vec![OutputKind::Trajectories]
}

fn outputs_is_default(v: &[OutputKind]) -> bool {
    v == default_outputs()
}

/// A parsed config together with the state it describes.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScenario {
    pub config: ScenarioConfig,
    pub state: SimulationState,
}

/// Reads a scenario file and builds its state; poll files are resolved
/// relative to the config's directory.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<LoadedScenario> {
    let path = path.as_ref();
    let config = ScenarioConfig::load(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let state = config.to_state(base)?;
    Ok(LoadedScenario { config, state })
}

impl ScenarioConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config {
            message: e.to_string(),
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config {
            message: e.to_string(),
        })
    }

    /// The configured layer-thickness cap as a fraction of the radius.
    pub fn layer_ratio_max(&self) -> f64 {
        self.layer_ratio_max.unwrap_or(DEFAULT_LAYER_RATIO_MAX)
    }

    /// Builds the simulation state. `base_dir` anchors relative poll-file
    /// paths.
    pub fn to_state(&self, base_dir: impl AsRef<Path>) -> Result<SimulationState> {
        let base_dir = base_dir.as_ref();
        if self.dimension == 0 {
            return Err(Error::Config {
                message: "dimension must be at least 1".into(),
            });
        }
        if self.bodies.is_empty() {
            return Err(Error::Config {
                message: "at least one body is required".into(),
            });
        }
        let ratio_max = self.layer_ratio_max();
        if !ratio_max.is_finite() || ratio_max <= 0.0 {
            return Err(Error::Config {
                message: format!("layer_ratio_max must be finite and > 0, got {ratio_max}"),
            });
        }
        let combiner = self.mass_combiner.unwrap_or_default();
        combiner.validate()?;

        let complexes = self.build_complexes()?;
        for c in &complexes {
            if c.layer_thickness > ratio_max * c.radius {
                return Err(Error::Config {
                    message: format!(
                        "complex `{}`: layer thickness {} exceeds {} of radius {}",
                        c.id, c.layer_thickness, ratio_max, c.radius
                    ),
                });
            }
        }

        let mut poll_cache: BTreeMap<String, Vec<crate::assessment::PollRecord>> = BTreeMap::new();
        let mut bodies = Vec::with_capacity(self.bodies.len());
        for b in &self.bodies {
            bodies.push(self.build_body(b, &complexes, base_dir, &mut poll_cache, combiner)?);
        }

        let forces = self
            .forces
            .iter()
            .map(|f| self.build_force(f))
            .collect::<Result<Vec<_>>>()?;
        let constraints = self
            .constraints
            .iter()
            .map(|c| self.build_constraint(c))
            .collect::<Result<Vec<_>>>()?;

        SimulationState::new(0.0, bodies, complexes, forces, constraints)
    }

    fn build_complexes(&self) -> Result<Vec<ComplexBody>> {
        // Radius defaults to the transitive leaf count, which needs the
        // whole registry; build with placeholders first.
        let mut complexes: Vec<ComplexBody> = self
            .complexes
            .iter()
            .map(|c| {
                let center = self.vector("complex center", &c.center)?;
                Ok(ComplexBody {
                    id: c.id.clone(),
                    members: c.members.clone(),
                    radius: c.radius.unwrap_or(1.0),
                    layer_thickness: c.layer_thickness,
                    center,
                    mass: c.mass,
                })
            })
            .collect::<Result<_>>()?;
        for (i, cfg) in self.complexes.iter().enumerate() {
            if cfg.radius.is_none() {
                complexes[i].radius = crate::assessment::radius(&complexes[i], &complexes)?;
            }
        }
        Ok(complexes)
    }

    fn build_body(
        &self,
        b: &BodyConfig,
        complexes: &[ComplexBody],
        base_dir: &Path,
        poll_cache: &mut BTreeMap<String, Vec<crate::assessment::PollRecord>>,
        combiner: MassCombiner,
    ) -> Result<SocialBody> {
        let position = match &b.position {
            PositionConfig::Coordinates(v) => self.vector("position", v)?,
            PositionConfig::Polls { polls } => {
                let resolved = base_dir.join(&polls.file);
                let key = resolved.to_string_lossy().into_owned();
                if !poll_cache.contains_key(&key) {
                    let text = std::fs::read_to_string(&resolved)?;
                    poll_cache.insert(key.clone(), parse_poll_records(&text)?);
                }
                let records = &poll_cache[&key];
                let complex = complexes
                    .iter()
                    .find(|c| c.id == polls.complex)
                    .ok_or_else(|| Error::UnknownId {
                        id: polls.complex.clone(),
                    })?;
                let mut position =
                    aggregate_assessment(records, &b.id, complex, complexes, self.dimension)?;
                if let Some(floor) = &polls.floor {
                    let floor = self.vector("position floor", floor)?;
                    for i in 0..self.dimension {
                        if position.get(i) < floor.get(i) {
                            position.set(i, floor.get(i));
                        }
                    }
                }
                position
            }
        };
        let velocity = self.vector("velocity", &b.velocity)?;

        match (b.mass, &b.mass_components) {
            (Some(_), Some(_)) => Err(Error::Config {
                message: format!("body `{}`: give mass or mass_components, not both", b.id),
            }),
            (None, None) => Err(Error::Config {
                message: format!("body `{}`: mass or mass_components is required", b.id),
            }),
            (Some(mass), None) => SocialBody::new(&b.id, mass, position, velocity),
            (None, Some(mc)) => {
                let components = MassComponents::new(mc.intellectual, mc.physical, mc.economic)?;
                SocialBody::from_components(&b.id, components, &combiner, position, velocity)
            }
        }
    }

    fn build_force(&self, f: &ForceConfig) -> Result<ForceModel> {
        Ok(match f {
            ForceConfig::Attraction {
                first,
                second,
                gamma,
                softening,
            } => {
                let mut params = ForceParams::attraction(*gamma);
                if let Some(eps) = softening {
                    params = params.with_softening(*eps);
                }
                ForceModel::Attraction {
                    first: first.clone(),
                    second: second.clone(),
                    params,
                }
            }
            ForceConfig::Elasticity {
                body,
                k_e,
                equilibrium,
            } => ForceModel::Elasticity {
                body: body.clone(),
                params: ForceParams::elastic(*k_e, self.vector("equilibrium", equilibrium)?),
            },
            ForceConfig::Change {
                body,
                k_c,
                equilibrium,
            } => ForceModel::Change {
                body: body.clone(),
                params: ForceParams::change(*k_c, self.vector("equilibrium", equilibrium)?),
            },
            ForceConfig::Driving {
                body,
                perceived_benefits,
                perceived_costs,
                direction,
                scale,
            } => ForceModel::Driving {
                body: body.clone(),
                spec: DrivingForceSpec::new(
                    *perceived_benefits,
                    *perceived_costs,
                    self.vector("driving direction", direction)?,
                    *scale,
                )?,
            },
            ForceConfig::SurfaceGravity {
                body,
                complex,
                gamma,
                waive_layer_check,
            } => ForceModel::SurfaceGravity {
                body: body.clone(),
                complex: complex.clone(),
                params: ForceParams::surface_gravity(*gamma),
                waive_layer_check: waive_layer_check.unwrap_or(false),
            },
        })
    }

    fn build_constraint(&self, c: &ConstraintConfig) -> Result<PlaneConstraint> {
        match c {
            ConstraintConfig::Floor {
                body,
                dimension,
                min,
            } => PlaneConstraint::floor(body, *dimension, *min, self.dimension),
            ConstraintConfig::Plane {
                body,
                normal,
                offset,
            } => PlaneConstraint::plane(body, self.vector("constraint normal", normal)?, *offset),
        }
    }

    fn vector(&self, what: &str, coords: &[f64]) -> Result<AssessmentVector> {
        if coords.len() != self.dimension {
            return Err(Error::Config {
                message: format!(
                    "{what} has {} coordinates, scenario dimension is {}",
                    coords.len(),
                    self.dimension
                ),
            });
        }
        AssessmentVector::new(coords.to_vec())
    }
}

impl BuiltScenario {
    /// The config file equivalent of this template.
    pub fn to_config(&self) -> ScenarioConfig {
        ScenarioConfig::from(self)
    }
}

impl From<&BuiltScenario> for ScenarioConfig {
    fn from(built: &BuiltScenario) -> Self {
        let state = &built.state;
        let bodies = state
            .bodies
            .iter()
            .map(|b| BodyConfig {
                id: b.id.clone(),
                mass: if b.mass_components.is_some() {
                    None
                } else {
                    Some(b.mass)
                },
                mass_components: b.mass_components.as_ref().map(|c| MassComponentsConfig {
                    intellectual: c.intellectual,
                    physical: c.physical,
                    economic: c.economic,
                }),
                position: PositionConfig::Coordinates(b.position.as_slice().to_vec()),
                velocity: b.velocity.as_slice().to_vec(),
            })
            .collect();
        let complexes = state
            .complexes
            .iter()
            .map(|c| ComplexConfig {
                id: c.id.clone(),
                members: c.members.clone(),
                layer_thickness: c.layer_thickness,
                center: c.center.as_slice().to_vec(),
                mass: c.mass,
                radius: Some(c.radius),
            })
            .collect();
        let forces = state
            .forces
            .iter()
            .map(|f| match f {
                ForceModel::Attraction {
                    first,
                    second,
                    params,
                } => ForceConfig::Attraction {
                    first: first.clone(),
                    second: second.clone(),
                    gamma: params.gamma,
                    softening: Some(params.softening),
                },
                ForceModel::Elasticity { body, params } => ForceConfig::Elasticity {
                    body: body.clone(),
                    k_e: params.k_e,
                    equilibrium: params.equilibrium.as_slice().to_vec(),
                },
                ForceModel::Change { body, params } => ForceConfig::Change {
                    body: body.clone(),
                    k_c: params.k_c,
                    equilibrium: params.equilibrium.as_slice().to_vec(),
                },
                ForceModel::Driving { body, spec } => ForceConfig::Driving {
                    body: body.clone(),
                    perceived_benefits: spec.perceived_benefits,
                    perceived_costs: spec.perceived_costs,
                    direction: spec.direction.as_slice().to_vec(),
                    scale: spec.scale,
                },
                ForceModel::SurfaceGravity {
                    body,
                    complex,
                    params,
                    waive_layer_check,
                } => ForceConfig::SurfaceGravity {
                    body: body.clone(),
                    complex: complex.clone(),
                    gamma: params.gamma,
                    waive_layer_check: Some(*waive_layer_check),
                },
            })
            .collect();
        let constraints = state
            .constraints
            .iter()
            .map(|c| match c.axis() {
                Some(d) => ConstraintConfig::Floor {
                    body: c.body.clone(),
                    dimension: d,
                    min: c.offset,
                },
                None => ConstraintConfig::Plane {
                    body: c.body.clone(),
                    normal: c.normal().as_slice().to_vec(),
                    offset: c.offset,
                },
            })
            .collect();
        let expected = match &built.expected {
            Expectation::Oscillator(exp) => Some(ExpectedConfig::Oscillator {
                omega: exp.solution.omega,
                a: exp.solution.a,
                b: exp.solution.b,
            }),
            Expectation::AccelerationRatio(r) => Some(ExpectedConfig::Ratio {
                acceleration_ratio: *r,
            }),
            Expectation::Stability { .. } => None,
        };
        ScenarioConfig {
            name: Some(built.name.clone()),
            dimension: state.dimension,
            bodies,
            complexes,
            forces,
            integrator: built.integrator.clone(),
            constraints,
            outputs: default_outputs(),
            expected,
            mass_combiner: None,
            layer_ratio_max: None,
        }
    }
}
