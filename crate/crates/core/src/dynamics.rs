//! Time integration of the equations of motion.
//!
//! Three fixed-step methods are available. Leapfrog (kick-drift-kick) is
//! the default: it is symplectic, so energy stays bounded over long runs of
//! the conservative force laws. RK4 gives fourth-order accuracy for short,
//! high-precision runs; semi-implicit Euler is the cheap baseline. All
//! force laws are velocity-independent, which is what lets RK4 evaluate
//! stage forces from positions alone.
//!
//! Stepping is strictly deterministic: same state, same config, same
//! floating-point trajectory, bit for bit.

use crate::body::SocialBody;
use crate::error::{Error, Result};
use crate::forces::{net_force, ForceModel};
use crate::state::SimulationState;
use crate::vector::AssessmentVector;

/// Integration method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Rk4,
    SemiImplicitEuler,
    #[default]
    Leapfrog,
}

/// Step size, horizon, and sampling cadence of a run.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct IntegratorConfig {
    #[serde(default)]
    pub method: Method,
    pub dt: f64,
    pub t_end: f64,
    /// Record every k-th step (the initial state is always recorded).
    #[serde(default = "default_record_every")]
    pub record_every: usize,
}

fn default_record_every() -> usize {
    1
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "dt".into(),
                reason: "must be finite and > 0".into(),
            });
        }
        if !self.t_end.is_finite() || self.t_end < self.dt {
            return Err(Error::InvalidParameter {
                name: "t_end".into(),
                reason: "must be finite and >= dt".into(),
            });
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter {
                name: "record_every".into(),
                reason: "must be >= 1".into(),
            });
        }
        Ok(())
    }

    /// Number of whole steps covering `t_end` (nearest integer, at least 1).
    pub fn steps(&self) -> u64 {
        ((self.t_end / self.dt).round() as u64).max(1)
    }
}

/// One recorded instant of one body.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub position: AssessmentVector,
    pub velocity: AssessmentVector,
}

/// The recorded motion of one body. The first sample is at t = 0 and times
/// increase strictly.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub body_id: String,
    pub samples: Vec<TrajectorySample>,
}

/// a = F / m, component-wise.
pub fn acceleration(body: &SocialBody, force: &AssessmentVector) -> Result<AssessmentVector> {
    if force.dimension() != body.dimension() {
        return Err(Error::DimensionMismatch {
            expected: body.dimension(),
            found: force.dimension(),
        });
    }
    AssessmentVector::new(force.as_slice().iter().map(|f| f / body.mass).collect())
}

fn wrap_runtime(body: &str, t: f64, e: Error) -> Error {
    match e {
        e @ Error::Runtime { .. } => e,
        other => Error::Runtime {
            body: body.into(),
            t,
            source: Box::new(other),
        },
    }
}

fn accelerations(state: &SimulationState) -> Result<Vec<AssessmentVector>> {
    state
        .bodies
        .iter()
        .map(|b| {
            let f = net_force(b, state).map_err(|e| wrap_runtime(&b.id, state.t, e))?;
            acceleration(b, &f)
        })
        .collect()
}

// base + (k1 + 2 k2 + 2 k3 + k4) dt/6, with the stage sum taken first so
// the scale factor is applied once per component.
fn rk4_combine(
    base: &AssessmentVector,
    k1: &AssessmentVector,
    k2: &AssessmentVector,
    k3: &AssessmentVector,
    k4: &AssessmentVector,
    dt: f64,
) -> AssessmentVector {
    let mut out = base.clone();
    for j in 0..base.dimension() {
        let s = k1.get(j) + 2.0 * (k2.get(j) + k3.get(j)) + k4.get(j);
        out.set(j, base.get(j) + (s * dt) / 6.0);
    }
    out
}

fn advance_in_place(state: &mut SimulationState, method: Method, dt: f64) -> Result<()> {
    match method {
        Method::SemiImplicitEuler => {
            let accs = accelerations(state)?;
            for (b, a) in state.bodies.iter_mut().zip(&accs) {
                b.velocity.add_scaled(a, dt);
                let v = b.velocity.clone();
                b.position.add_scaled(&v, dt);
            }
        }
        Method::Leapfrog => {
            let accs = accelerations(state)?;
            for (b, a) in state.bodies.iter_mut().zip(&accs) {
                b.velocity.add_scaled(a, dt / 2.0);
                let v = b.velocity.clone();
                b.position.add_scaled(&v, dt);
            }
            let accs = accelerations(state)?;
            for (b, a) in state.bodies.iter_mut().zip(&accs) {
                b.velocity.add_scaled(a, dt / 2.0);
            }
        }
        Method::Rk4 => {
            let n = state.bodies.len();
            let x0: Vec<_> = state.bodies.iter().map(|b| b.position.clone()).collect();
            let v0: Vec<_> = state.bodies.iter().map(|b| b.velocity.clone()).collect();

            // Stage derivatives: dx/dt = v, dv/dt = a(x).
            let k1v = accelerations(state)?;
            let k1x = v0.clone();

            for i in 0..n {
                let mut x = x0[i].clone();
                x.add_scaled(&k1x[i], dt / 2.0);
                state.bodies[i].position = x;
            }
            let k2v = accelerations(state)?;
            let mut k2x = v0.clone();
            for i in 0..n {
                k2x[i].add_scaled(&k1v[i], dt / 2.0);
            }

            for i in 0..n {
                let mut x = x0[i].clone();
                x.add_scaled(&k2x[i], dt / 2.0);
                state.bodies[i].position = x;
            }
            let k3v = accelerations(state)?;
            let mut k3x = v0.clone();
            for i in 0..n {
                k3x[i].add_scaled(&k2v[i], dt / 2.0);
            }

            for i in 0..n {
                let mut x = x0[i].clone();
                x.add_scaled(&k3x[i], dt);
                state.bodies[i].position = x;
            }
            let k4v = accelerations(state)?;
            let mut k4x = v0.clone();
            for i in 0..n {
                k4x[i].add_scaled(&k3v[i], dt);
            }

            for i in 0..n {
                state.bodies[i].position =
                    rk4_combine(&x0[i], &k1x[i], &k2x[i], &k3x[i], &k4x[i], dt);
                state.bodies[i].velocity =
                    rk4_combine(&v0[i], &k1v[i], &k2v[i], &k3v[i], &k4v[i], dt);
            }
        }
    }

    state.t += dt;

    for c in &state.constraints {
        // Constraint bodies were validated at construction.
        if let Some(b) = state.bodies.iter_mut().find(|b| b.id == c.body) {
            c.apply(&mut b.position, &mut b.velocity);
        }
    }

    for b in &state.bodies {
        if !b.position.is_finite() || !b.velocity.is_finite() {
            return Err(wrap_runtime(
                &b.id,
                state.t,
                Error::NonFinite {
                    quantity: "integrated state".into(),
                },
            ));
        }
    }
    Ok(())
}

/// Advances the state by one step of `cfg.dt` and returns the new state.
pub fn step(state: &SimulationState, cfg: &IntegratorConfig) -> Result<SimulationState> {
    cfg.validate()?;
    let mut next = state.clone();
    advance_in_place(&mut next, cfg.method, cfg.dt)?;
    Ok(next)
}

/// Runs the whole horizon and returns one trajectory per body, in body
/// order. Fails atomically: any stepping error discards all output.
///
/// The state at t = 0 is always the first sample; afterwards every
/// `record_every`-th step is recorded. A horizon of `t_end = k * dt` with
/// `record_every = 1` therefore yields k + 1 samples.
pub fn simulate(state: &SimulationState, cfg: &IntegratorConfig) -> Result<Vec<Trajectory>> {
    cfg.validate()?;
    state.validate()?;
    let steps = cfg.steps();
    let mut work = state.clone();
    work.t = 0.0;

    let mut trajectories: Vec<Trajectory> = state
        .bodies
        .iter()
        .map(|b| Trajectory {
            body_id: b.id.clone(),
            samples: Vec::with_capacity(steps as usize / cfg.record_every + 2),
        })
        .collect();

    record(&work, &mut trajectories);
    for k in 1..=steps {
        advance_in_place(&mut work, cfg.method, cfg.dt)?;
        if k % cfg.record_every as u64 == 0 {
            record(&work, &mut trajectories);
        }
    }
    Ok(trajectories)
}

fn record(state: &SimulationState, trajectories: &mut [Trajectory]) {
    for (b, tr) in state.bodies.iter().zip(trajectories.iter_mut()) {
        tr.samples.push(TrajectorySample {
            t: state.t,
            position: b.position.clone(),
            velocity: b.velocity.clone(),
        });
    }
}

/// Kinetic and potential energy of a state under its force bindings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub potential: f64,
}

impl EnergyBreakdown {
    pub fn total(&self) -> f64 {
        self.kinetic + self.potential
    }
}

/// Evaluates the energy integral of every binding. All five force laws are
/// gradients of closed-form potentials, so this is exact up to rounding:
/// attraction contributes -γ m₁ m₂ / r at ε = 0 and the softened arctan
/// form otherwise, surface gravity g m r, elasticity +½ k_e r², change
/// -½ k_c r², and a driving force -F · x.
pub fn energy(state: &SimulationState) -> Result<EnergyBreakdown> {
    let kinetic = state
        .bodies
        .iter()
        .map(|b| 0.5 * b.mass * b.velocity.dot(&b.velocity))
        .sum();

    let mut potential = 0.0;
    for f in &state.forces {
        potential += match f {
            ForceModel::Attraction {
                first,
                second,
                params,
            } => {
                let a = state.body(first)?;
                let b = state.body(second)?;
                let r = a.position.sub(&b.position).norm();
                let eps = params.softening;
                let scale = params.gamma * (a.mass * b.mass);
                if eps == 0.0 {
                    if r == 0.0 {
                        return Err(Error::Singularity {
                            body_a: a.id.clone(),
                            body_b: b.id.clone(),
                        });
                    }
                    -scale / r
                } else if r == 0.0 {
                    -scale * std::f64::consts::FRAC_PI_2 / eps
                } else {
                    // atan(eps/r) = π/2 - atan(r/eps), minus the
                    // cancellation when r >> eps.
                    -scale * (eps / r).atan() / eps
                }
            }
            ForceModel::Elasticity { body, params } => {
                let b = state.body(body)?;
                let d = b.position.sub(&params.equilibrium);
                0.5 * params.k_e * d.dot(&d)
            }
            ForceModel::Change { body, params } => {
                let b = state.body(body)?;
                let d = b.position.sub(&params.equilibrium);
                -0.5 * params.k_c * d.dot(&d)
            }
            ForceModel::Driving { body, spec } => {
                let b = state.body(body)?;
                -crate::forces::driving_force(spec).dot(&b.position)
            }
            ForceModel::SurfaceGravity {
                body,
                complex,
                params,
                ..
            } => {
                let b = state.body(body)?;
                let c = state.complex(complex)?;
                let g = params.gamma * c.mass / (c.radius * c.radius);
                g * b.mass * b.position.sub(&c.center).norm()
            }
        };
    }
    Ok(EnergyBreakdown { kinetic, potential })
}

/// Convenience wrapper returning kinetic + potential.
pub fn total_energy(state: &SimulationState) -> Result<f64> {
    energy(state).map(|e| e.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forces::ForceParams;

    fn v(coords: &[f64]) -> AssessmentVector {
        AssessmentVector::new(coords.to_vec()).unwrap()
    }

    fn free_body_state(pos: &[f64], vel: &[f64]) -> SimulationState {
        let b = SocialBody::new("b", 1.0, v(pos), v(vel)).unwrap();
        SimulationState::new(0.0, vec![b], vec![], vec![], vec![]).unwrap()
    }

    fn elastic_state(k_e: f64, mass: f64, pos: &[f64], vel: &[f64]) -> SimulationState {
        let b = SocialBody::new("b", mass, v(pos), v(vel)).unwrap();
        let f = ForceModel::Elasticity {
            body: "b".into(),
            params: ForceParams::elastic(k_e, AssessmentVector::zeros(pos.len())),
        };
        SimulationState::new(0.0, vec![b], vec![], vec![f], vec![]).unwrap()
    }

    #[test]
    fn acceleration_examples() {
        let b = SocialBody::new("b", 2.0, v(&[0.0, 0.0]), v(&[0.0, 0.0])).unwrap();
        let a = acceleration(&b, &AssessmentVector::zeros(2)).unwrap();
        assert_eq!(a.as_slice(), &[0.0, 0.0]);
        let a = acceleration(&b, &v(&[1.0, 0.0])).unwrap();
        assert_eq!(a.as_slice(), &[0.5, 0.0]);
    }

    #[test]
    fn acceleration_ratio_is_inverse_mass_ratio() {
        let light = SocialBody::new("l", 1.0, v(&[0.0]), v(&[0.0])).unwrap();
        let heavy = SocialBody::new("h", 100.0, v(&[0.0]), v(&[0.0])).unwrap();
        let f = v(&[3.0]);
        let al = acceleration(&light, &f).unwrap().norm();
        let ah = acceleration(&heavy, &f).unwrap().norm();
        assert!((al / ah - 100.0).abs() < 1e-12);
    }

    #[test]
    fn inertial_motion_is_exact_for_all_methods() {
        // v * dt = 0.125 is a power of two, so every sum below is exact.
        for method in [Method::SemiImplicitEuler, Method::Leapfrog, Method::Rk4] {
            let cfg = IntegratorConfig {
                method,
                dt: 0.5,
                t_end: 5.0,
                record_every: 1,
            };
            let state = free_body_state(&[0.0, 1.0], &[0.25, 0.0]);
            let trajectories = simulate(&state, &cfg).unwrap();
            for (k, s) in trajectories[0].samples.iter().enumerate() {
                assert_eq!(s.velocity.as_slice(), &[0.25, 0.0], "{method:?}");
                assert_eq!(s.position.get(0), 0.125 * k as f64, "{method:?}");
                assert_eq!(s.position.get(1), 1.0, "{method:?}");
            }
        }
    }

    #[test]
    fn semi_implicit_euler_advances_by_v_dt() {
        let cfg = IntegratorConfig {
            method: Method::SemiImplicitEuler,
            dt: 0.7,
            t_end: 7.0,
            record_every: 1,
        };
        let state = free_body_state(&[0.3], &[1.9]);
        let trajectories = simulate(&state, &cfg).unwrap();
        let samples = &trajectories[0].samples;
        for w in samples.windows(2) {
            assert_eq!(w[1].position.get(0), w[0].position.get(0) + 1.9 * 0.7);
        }
    }

    #[test]
    fn rk4_single_step_matches_closed_form() {
        let dt = 2.0 * std::f64::consts::PI / 1000.0;
        let state = elastic_state(1.0, 1.0, &[1.0], &[0.0]);
        let cfg = IntegratorConfig {
            method: Method::Rk4,
            dt,
            t_end: dt,
            record_every: 1,
        };
        let next = step(&state, &cfg).unwrap();
        let expected_x = dt.cos();
        let expected_v = -dt.sin();
        assert!((next.bodies[0].position.get(0) - expected_x).abs() < 1e-10 * expected_x.abs());
        assert!((next.bodies[0].velocity.get(0) - expected_v).abs() < 1e-10);
    }

    #[test]
    fn leapfrog_conserves_pair_momentum_each_step() {
        let a = SocialBody::new("a", 3.0, v(&[0.0, 0.0]), v(&[0.1, -0.2])).unwrap();
        let b = SocialBody::new("b", 7.0, v(&[4.0, 1.0]), v(&[-0.05, 0.3])).unwrap();
        let f = ForceModel::Attraction {
            first: "a".into(),
            second: "b".into(),
            params: ForceParams::attraction(2.0).with_softening(0.0),
        };
        let mut state = SimulationState::new(0.0, vec![a, b], vec![], vec![f], vec![]).unwrap();
        let cfg = IntegratorConfig {
            method: Method::Leapfrog,
            dt: 0.01,
            t_end: 0.01,
            record_every: 1,
        };
        let momentum = |s: &SimulationState| {
            let mut p = AssessmentVector::zeros(2);
            for b in &s.bodies {
                p.add_scaled(&b.velocity, b.mass);
            }
            p
        };
        for _ in 0..50 {
            let before = momentum(&state);
            state = step(&state, &cfg).unwrap();
            let after = momentum(&state);
            assert!(after.sub(&before).norm() < 1e-9);
        }
    }

    #[test]
    fn simulate_fencepost_sample_count() {
        let dt = 0.1;
        let cfg = IntegratorConfig {
            method: Method::Leapfrog,
            dt,
            t_end: 10.0 * dt,
            record_every: 1,
        };
        let state = free_body_state(&[0.0], &[1.0]);
        let trajectories = simulate(&state, &cfg).unwrap();
        assert_eq!(trajectories[0].samples.len(), 11);
        assert_eq!(trajectories[0].samples[0].t, 0.0);
    }

    #[test]
    fn record_every_thins_samples() {
        let cfg = IntegratorConfig {
            method: Method::Leapfrog,
            dt: 0.1,
            t_end: 1.0,
            record_every: 3,
        };
        let state = free_body_state(&[0.0], &[1.0]);
        let trajectories = simulate(&state, &cfg).unwrap();
        // Steps 0 (initial), 3, 6, 9.
        assert_eq!(trajectories[0].samples.len(), 4);
    }

    #[test]
    fn simulate_is_bitwise_deterministic() {
        let state = elastic_state(2.0, 1.5, &[1.0, -0.5], &[0.0, 0.25]);
        let cfg = IntegratorConfig {
            method: Method::Rk4,
            dt: 0.01,
            t_end: 5.0,
            record_every: 7,
        };
        let t1 = simulate(&state, &cfg).unwrap();
        let t2 = simulate(&state, &cfg).unwrap();
        assert_eq!(t1, t2);
        for (s1, s2) in t1[0].samples.iter().zip(&t2[0].samples) {
            for i in 0..2 {
                assert_eq!(
                    s1.position.get(i).to_bits(),
                    s2.position.get(i).to_bits()
                );
                assert_eq!(
                    s1.velocity.get(i).to_bits(),
                    s2.velocity.get(i).to_bits()
                );
            }
        }
    }

    #[test]
    fn singular_pair_fails_atomically() {
        let a = SocialBody::new("a", 1.0, v(&[0.0]), v(&[0.0])).unwrap();
        let b = SocialBody::new("b", 1.0, v(&[0.0]), v(&[0.0])).unwrap();
        let f = ForceModel::Attraction {
            first: "a".into(),
            second: "b".into(),
            params: ForceParams::attraction(1.0).with_softening(0.0),
        };
        let state = SimulationState::new(0.0, vec![a, b], vec![], vec![f], vec![]).unwrap();
        let cfg = IntegratorConfig {
            method: Method::Leapfrog,
            dt: 0.1,
            t_end: 1.0,
            record_every: 1,
        };
        let e = simulate(&state, &cfg).unwrap_err();
        match e {
            Error::Runtime { body, t, source } => {
                assert_eq!(body, "a");
                assert_eq!(t, 0.0);
                assert!(matches!(*source, Error::Singularity { .. }));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn floor_constraint_stops_normal_motion_only() {
        // Gravity-free body flying diagonally into a floor at x1 = 0.
        let b = SocialBody::new("b", 1.0, v(&[0.0, 1.0]), v(&[1.0, -2.0])).unwrap();
        let floor = crate::state::PlaneConstraint::floor("b", 1, 0.0, 2).unwrap();
        let state = SimulationState::new(0.0, vec![b], vec![], vec![], vec![floor]).unwrap();
        let cfg = IntegratorConfig {
            method: Method::SemiImplicitEuler,
            dt: 0.25,
            t_end: 2.0,
            record_every: 1,
        };
        let tr = simulate(&state, &cfg).unwrap();
        let last = tr[0].samples.last().unwrap();
        assert_eq!(last.position.get(1), 0.0, "came to rest on the floor");
        assert_eq!(last.velocity.get(1), 0.0, "normal velocity zeroed");
        assert_eq!(last.velocity.get(0), 1.0, "tangential velocity kept");
        assert!((last.position.get(0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn energy_frozen_values() {
        // Elastic: 0.5 * k_e * r^2 = 0.5 * 1 * 4 = 2.
        let state = elastic_state(1.0, 1.0, &[2.0], &[0.0]);
        assert_eq!(total_energy(&state).unwrap(), 2.0);

        // Two unit masses 2 apart, gamma 1, eps 0, speeds 0.3 each:
        // kinetic 0.09, attraction potential -0.5.
        let a = SocialBody::new("a", 1.0, v(&[-1.0, 0.0]), v(&[0.0, 0.3])).unwrap();
        let b = SocialBody::new("b", 1.0, v(&[1.0, 0.0]), v(&[0.0, -0.3])).unwrap();
        let f = ForceModel::Attraction {
            first: "a".into(),
            second: "b".into(),
            params: ForceParams::attraction(1.0).with_softening(0.0),
        };
        let state = SimulationState::new(0.0, vec![a, b], vec![], vec![f], vec![]).unwrap();
        let e = energy(&state).unwrap();
        assert!((e.kinetic - 0.09).abs() < 1e-15);
        assert!((e.potential + 0.5).abs() < 1e-15);
    }

    #[test]
    fn softened_attraction_potential_matches_hard_limit() {
        // For r >> eps the softened potential converges to -gamma m1 m2 / r.
        let a = SocialBody::new("a", 1.0, v(&[0.0]), v(&[0.0])).unwrap();
        let b = SocialBody::new("b", 1.0, v(&[2.0]), v(&[0.0])).unwrap();
        let soft = ForceModel::Attraction {
            first: "a".into(),
            second: "b".into(),
            params: ForceParams::attraction(1.0).with_softening(1e-8),
        };
        let state =
            SimulationState::new(0.0, vec![a, b], vec![], vec![soft], vec![]).unwrap();
        let e = energy(&state).unwrap();
        assert!((e.potential + 0.5).abs() < 1e-12);
    }
}
