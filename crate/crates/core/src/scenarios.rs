//! Ready-made scenario templates with known closed-form behavior.
//!
//! Each builder returns a validated state, a suggested integrator config,
//! and a machine-checkable expectation (an oscillator solution, an
//! acceleration ratio, or a stability law). They are the backbone of the
//! verification suite and double as worked examples of the engine's API.

use std::f64::consts::FRAC_PI_2;

use crate::analytic::OscillatorSolution;
use crate::body::{ComplexBody, SocialBody};
use crate::dynamics::{IntegratorConfig, Method};
use crate::error::{Error, Result};
use crate::forces::{stability_class, ForceModel, ForceParams, StabilityClass};
use crate::state::{PlaneConstraint, SimulationState};
use crate::vector::AssessmentVector;

/// Largest tg β the small-angle pendulum accepts under strict checking.
pub const SMALL_ANGLE_TAN_MAX: f64 = 0.05;

/// A scalar oscillation embedded in the state: the coordinate
/// (position - origin) · axis follows `solution`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorExpectation {
    pub body: String,
    pub origin: AssessmentVector,
    /// Unit vector along the oscillation.
    pub axis: AssessmentVector,
    pub solution: OscillatorSolution,
}

impl OscillatorExpectation {
    /// Projects a position onto the oscillation coordinate.
    pub fn project(&self, position: &AssessmentVector) -> f64 {
        position.sub(&self.origin).dot(&self.axis)
    }
}

/// What a template promises about its own trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum Expectation {
    Oscillator(OscillatorExpectation),
    /// |a_heavy| / |a_light| for the two-body probe.
    AccelerationRatio(f64),
    /// Elasticity-versus-change probe: class plus the growth/oscillation
    /// rate √(|k_c - k_e| / m) (zero when neutral).
    Stability {
        body: String,
        class: StabilityClass,
        x0: f64,
        rate: f64,
    },
}

/// A named, runnable scenario with its expectation attached.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltScenario {
    pub name: String,
    pub description: String,
    pub state: SimulationState,
    pub integrator: IntegratorConfig,
    pub expected: Expectation,
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::InvalidParameter {
            name: name.into(),
            reason: "must be finite and > 0".into(),
        });
    }
    Ok(())
}

/// A crowd following a fashion: 1-D elastic oscillator started from the
/// indifference point with velocity A0·ω, so x(t) = A0 sin ωt and the
/// craze peaks a quarter period in.
pub fn build_fashion_oscillator(k_e: f64, m: f64, a0: f64) -> Result<BuiltScenario> {
    require_positive("k_e", k_e)?;
    require_positive("m", m)?;
    if !a0.is_finite() || a0 < 0.0 {
        return Err(Error::InvalidParameter {
            name: "a0".into(),
            reason: "must be finite and >= 0".into(),
        });
    }
    let omega = (k_e / m).sqrt();
    let solution = OscillatorSolution::new(a0, 0.0, omega)?;

    let crowd = SocialBody::new(
        "crowd",
        m,
        AssessmentVector::zeros(1),
        AssessmentVector::new(vec![a0 * omega])?,
    )?;
    let elastic = ForceModel::Elasticity {
        body: "crowd".into(),
        params: ForceParams::elastic(k_e, AssessmentVector::zeros(1)),
    };
    let state = SimulationState::new(0.0, vec![crowd], vec![], vec![elastic], vec![])?;

    let integrator = IntegratorConfig {
        method: Method::Rk4,
        dt: solution.period / 1000.0,
        t_end: 10.0 * solution.period,
        record_every: 10,
    };
    Ok(BuiltScenario {
        name: "fashion".into(),
        description: "crowd adopting and abandoning a fashion around indifference".into(),
        state,
        integrator,
        expected: Expectation::Oscillator(OscillatorExpectation {
            body: "crowd".into(),
            origin: AssessmentVector::zeros(1),
            axis: AssessmentVector::new(vec![1.0])?,
            solution,
        }),
    })
}

/// Geometry knobs of the pendulum builder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumOptions {
    /// Angle between the surface normal and the first coordinate axis.
    /// π/2 puts the surface point on the second axis (motion along the
    /// first); 0 pins the first coordinate and lets only the second move.
    pub alpha: f64,
    /// Reject initial angles with tg β above [`SMALL_ANGLE_TAN_MAX`].
    pub strict_small_angle: bool,
}

impl Default for PendulumOptions {
    fn default() -> Self {
        Self {
            alpha: FRAC_PI_2,
            strict_small_angle: true,
        }
    }
}

/// A citizen resting on the rigid surface of a large complex, nudged
/// sideways by the angle `beta0`: a pendulum with ω = √(g/R),
/// g = γ m_c / R².
pub fn build_attraction_pendulum(
    gamma: f64,
    m_c: f64,
    radius: f64,
    m: f64,
    beta0: f64,
) -> Result<BuiltScenario> {
    build_attraction_pendulum_with(gamma, m_c, radius, m, beta0, PendulumOptions::default())
}

/// [`build_attraction_pendulum`] with explicit geometry options.
pub fn build_attraction_pendulum_with(
    gamma: f64,
    m_c: f64,
    radius: f64,
    m: f64,
    beta0: f64,
    options: PendulumOptions,
) -> Result<BuiltScenario> {
    require_positive("gamma", gamma)?;
    require_positive("m_c", m_c)?;
    require_positive("radius", radius)?;
    require_positive("m", m)?;
    if !beta0.is_finite() {
        return Err(Error::NonFinite {
            quantity: "beta0".into(),
        });
    }
    let tan_beta = beta0.tan();
    if options.strict_small_angle && tan_beta.abs() > SMALL_ANGLE_TAN_MAX {
        return Err(Error::OutOfRange {
            quantity: "tg beta0".into(),
            value: tan_beta,
            min: -SMALL_ANGLE_TAN_MAX,
            max: SMALL_ANGLE_TAN_MAX,
        });
    }

    // Surface normal and tangent; the axis-aligned cases are kept exact so
    // the floor clamp can assign coordinates instead of projecting.
    let (c, s) = if options.alpha == 0.0 {
        (1.0, 0.0)
    } else if options.alpha == FRAC_PI_2 {
        (0.0, 1.0)
    } else {
        (options.alpha.cos(), options.alpha.sin())
    };
    let normal = AssessmentVector::new(vec![c, s])?;
    let tangent = AssessmentVector::new(vec![s, -c])?;

    let x0 = radius * tan_beta;
    let foot = normal.scaled(radius);
    let mut position = foot.clone();
    position.add_scaled(&tangent, x0);

    let citizen = SocialBody::new("citizen", m, position, AssessmentVector::zeros(2))?;
    let country = ComplexBody {
        id: "country".into(),
        members: vec!["citizen".into()],
        radius,
        layer_thickness: 0.01 * radius,
        center: AssessmentVector::zeros(2),
        mass: m_c,
    };
    // Between clamps the integrator lets the body dip a ~g·dt² hair
    // below the surface, where the strict layer check would reject the
    // binding; the plane constraint is what holds it in the layer, so the
    // per-binding check is waived here.
    let gravity = ForceModel::SurfaceGravity {
        body: "citizen".into(),
        complex: "country".into(),
        params: ForceParams::surface_gravity(gamma),
        waive_layer_check: true,
    };
    let surface = PlaneConstraint::plane("citizen", normal, radius)?;
    let state = SimulationState::new(
        0.0,
        vec![citizen],
        vec![country],
        vec![gravity],
        vec![surface],
    )?;

    let g = gamma * m_c / (radius * radius);
    let solution = OscillatorSolution::new(0.0, x0, (g / radius).sqrt())?;
    let integrator = IntegratorConfig {
        method: Method::Leapfrog,
        dt: solution.period / 1000.0,
        t_end: 2.5 * solution.period,
        record_every: 1,
    };
    Ok(BuiltScenario {
        name: "pendulum".into(),
        description: "citizen swinging on the rigid surface of a large complex".into(),
        state,
        integrator,
        expected: Expectation::Oscillator(OscillatorExpectation {
            body: "citizen".into(),
            origin: foot,
            axis: tangent,
            solution,
        }),
    })
}

/// A heavy celebrity and an ordinary body at rest at separation r0 under
/// mutual attraction; probes that the accelerations come out in inverse
/// proportion to the masses.
pub fn build_celebrity_pair(m_c: f64, m: f64, r0: f64, gamma: f64) -> Result<BuiltScenario> {
    require_positive("m_c", m_c)?;
    require_positive("m", m)?;
    require_positive("r0", r0)?;
    require_positive("gamma", gamma)?;

    let celebrity = SocialBody::new(
        "celebrity",
        m_c,
        AssessmentVector::zeros(1),
        AssessmentVector::zeros(1),
    )?;
    let ordinary = SocialBody::new(
        "ordinary",
        m,
        AssessmentVector::new(vec![r0])?,
        AssessmentVector::zeros(1),
    )?;
    let attraction = ForceModel::Attraction {
        first: "celebrity".into(),
        second: "ordinary".into(),
        params: ForceParams::attraction(gamma),
    };
    let state = SimulationState::new(
        0.0,
        vec![celebrity, ordinary],
        vec![],
        vec![attraction],
        vec![],
    )?;
    let integrator = IntegratorConfig {
        method: Method::Leapfrog,
        dt: 0.01,
        t_end: 10.0,
        record_every: 10,
    };
    Ok(BuiltScenario {
        name: "celebrity_pair".into(),
        description: "mutual attraction moves the ordinary body, barely the celebrity".into(),
        state,
        integrator,
        expected: Expectation::AccelerationRatio(m / m_c),
    })
}

/// Ratio |a(of_body)| / |a(relative_to)| from the net forces of the
/// current state — the first-step instrumentation of the celebrity pair.
pub fn acceleration_ratio(
    state: &SimulationState,
    of_body: &str,
    relative_to: &str,
) -> Result<f64> {
    let numerator = body_acceleration(state, of_body)?;
    let denominator = body_acceleration(state, relative_to)?;
    if denominator == 0.0 {
        return Err(Error::InvalidParameter {
            name: "acceleration ratio".into(),
            reason: format!("`{relative_to}` feels no force"),
        });
    }
    Ok(numerator / denominator)
}

fn body_acceleration(state: &SimulationState, id: &str) -> Result<f64> {
    let body = state.body(id)?;
    let f = crate::forces::net_force(body, state)?;
    Ok(crate::dynamics::acceleration(body, &f)?.norm())
}

/// A body pulled home by k_e and pushed out by k_c from the same
/// equilibrium, released from rest at x0. The sign of k_c - k_e decides
/// whether it oscillates, sits still, or runs away as a hyperbolic cosine.
pub fn build_stability_probe(k_e: f64, k_c: f64, m: f64, x0: f64) -> Result<BuiltScenario> {
    for (name, v) in [("k_e", k_e), ("k_c", k_c)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidParameter {
                name: name.into(),
                reason: "must be finite and >= 0".into(),
            });
        }
    }
    require_positive("m", m)?;
    if !x0.is_finite() {
        return Err(Error::NonFinite {
            quantity: "x0".into(),
        });
    }

    let probe = SocialBody::new(
        "probe",
        m,
        AssessmentVector::new(vec![x0])?,
        AssessmentVector::zeros(1),
    )?;
    let eq = AssessmentVector::zeros(1);
    let forces = vec![
        ForceModel::Elasticity {
            body: "probe".into(),
            params: ForceParams::elastic(k_e, eq.clone()),
        },
        ForceModel::Change {
            body: "probe".into(),
            params: ForceParams::change(k_c, eq),
        },
    ];
    let state = SimulationState::new(0.0, vec![probe], vec![], forces, vec![])?;

    let class = stability_class(k_e, k_c);
    let rate = ((k_c - k_e).abs() / m).sqrt();
    let integrator = match class {
        StabilityClass::Sustainable => {
            let period = 2.0 * std::f64::consts::PI / rate;
            IntegratorConfig {
                method: Method::Rk4,
                dt: period / 1000.0,
                t_end: 50.0 * period,
                record_every: 10,
            }
        }
        StabilityClass::Neutral => IntegratorConfig {
            method: Method::Rk4,
            dt: 0.01,
            t_end: 10.0,
            record_every: 1,
        },
        StabilityClass::Unsustainable => {
            let horizon = 3.0 / rate;
            IntegratorConfig {
                method: Method::Rk4,
                dt: horizon / 3000.0,
                t_end: horizon,
                record_every: 1,
            }
        }
    };
    Ok(BuiltScenario {
        name: "stability_probe".into(),
        description: "elasticity against change: bounded, static, or runaway".into(),
        state,
        integrator,
        expected: Expectation::Stability {
            body: "probe".into(),
            class,
            x0,
            rate,
        },
    })
}

/// Recognizes states whose motion has a closed-form harmonic solution:
/// a single body on elastic/change bindings with net positive stiffness
/// around one equilibrium, or a single body held on a plane in the surface
/// gravity of one complex. Returns the embedded scalar oscillator, or
/// `None` when no solution is known.
pub fn detect_oscillator(state: &SimulationState) -> Option<OscillatorExpectation> {
    if state.bodies.len() != 1 {
        return None;
    }
    let body = &state.bodies[0];

    // Pure stiffness case: every binding is elasticity or change on this
    // body, all sharing one equilibrium.
    let mut k_net = 0.0;
    let mut equilibrium: Option<&AssessmentVector> = None;
    let mut stiffness_only = !state.forces.is_empty();
    for f in &state.forces {
        match f {
            ForceModel::Elasticity { params, .. } => {
                k_net += params.k_e;
                match equilibrium {
                    None => equilibrium = Some(&params.equilibrium),
                    Some(eq) if *eq == params.equilibrium => {}
                    _ => return None,
                }
            }
            ForceModel::Change { params, .. } => {
                k_net -= params.k_c;
                match equilibrium {
                    None => equilibrium = Some(&params.equilibrium),
                    Some(eq) if *eq == params.equilibrium => {}
                    _ => return None,
                }
            }
            _ => {
                stiffness_only = false;
            }
        }
    }

    if stiffness_only && state.constraints.is_empty() {
        let eq = equilibrium?;
        if k_net <= 0.0 {
            return None;
        }
        let omega = (k_net / body.mass).sqrt();
        let d0 = body.position.sub(eq);
        let axis = colinear_axis(&d0, &body.velocity)?;
        let x0 = d0.dot(&axis);
        let v0 = body.velocity.dot(&axis);
        let solution = OscillatorSolution::new(v0 / omega, x0, omega).ok()?;
        return Some(OscillatorExpectation {
            body: body.id.clone(),
            origin: eq.clone(),
            axis,
            solution,
        });
    }

    // Pendulum case: one surface-gravity binding plus one plane constraint.
    if state.forces.len() == 1 && state.constraints.len() == 1 {
        if let ForceModel::SurfaceGravity {
            body: fb,
            complex,
            params,
            ..
        } = &state.forces[0]
        {
            let constraint = &state.constraints[0];
            if fb != &body.id || constraint.body != body.id {
                return None;
            }
            let c = state.complex(complex).ok()?;
            let normal = constraint.normal();
            let foot_dist = constraint.offset - c.center.dot(normal);
            let mut foot = c.center.clone();
            foot.add_scaled(normal, foot_dist);

            let d = body.position.sub(&foot);
            let mut d_t = d.clone();
            d_t.add_scaled(normal, -d.dot(normal));
            let mut v_t = body.velocity.clone();
            v_t.add_scaled(normal, -body.velocity.dot(normal));

            let axis = colinear_axis(&d_t, &v_t)?;
            let g = params.gamma * c.mass / (c.radius * c.radius);
            let omega = (g / c.radius).sqrt();
            let x0 = d_t.dot(&axis);
            let v0 = v_t.dot(&axis);
            let solution = OscillatorSolution::new(v0 / omega, x0, omega).ok()?;
            return Some(OscillatorExpectation {
                body: body.id.clone(),
                origin: foot,
                axis,
                solution,
            });
        }
    }
    None
}

/// Unit vector shared by displacement and velocity when the motion is
/// genuinely one-dimensional; `None` when they point different ways or
/// both vanish.
fn colinear_axis(d: &AssessmentVector, v: &AssessmentVector) -> Option<AssessmentVector> {
    let dn = d.norm();
    let vn = v.norm();
    if dn == 0.0 && vn == 0.0 {
        return None;
    }
    let axis = if dn >= vn {
        d.scaled(1.0 / dn)
    } else {
        v.scaled(1.0 / vn)
    };
    // Both vectors must lie along the axis.
    for (vec, norm) in [(d, dn), (v, vn)] {
        if norm > 0.0 {
            let residual = vec.sub(&axis.scaled(vec.dot(&axis))).norm();
            if residual > 1e-9 * norm {
                return None;
            }
        }
    }
    Some(axis)
}
