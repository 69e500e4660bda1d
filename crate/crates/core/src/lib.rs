//! Deterministic dynamics of social bodies in an n-dimensional assessment
//! space.
//!
//! Bodies carry a scalar social mass (optionally combined from
//! intellectual, physical, and economic components) and live at positions
//! measured in *leo* along public-assessment axes. Forces between them —
//! mutual attraction, elastic pull toward an equilibrium, its
//! change-seeking mirror image, constant driving, and the surface gravity
//! of large complexes — compose freely, and the resulting motion is
//! integrated with fixed-step methods chosen for exact reproducibility:
//! the same state and config yield bit-identical trajectories on every
//! run.
//!
//! The crate also ships the bookkeeping around the dynamics: poll-record
//! aggregation that places bodies from raw assessments, layer
//! classification around complexes, closed-form harmonic solutions and
//! spectral estimation for verifying runs, scenario templates with known
//! behavior, a TOML config format, and CSV output.

pub mod analytic;
pub mod assessment;
pub mod body;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod forces;
pub mod mass;
pub mod output;
pub mod scenarios;
pub mod state;
pub mod vector;

pub use analytic::{
    dominant_frequency, evaluate_solution, fit_harmonic, solve_harmonic, zero_crossing_period,
    HarmonicSpec, OmegaSource, OscillatorSolution, MIN_SPECTRAL_SAMPLES,
};
pub use assessment::{
    aggregate_assessment, classify_layer, leaf_members, parse_poll_records, radius, LayerClass,
    PollRecord, POLL_MAX, POLL_MIN,
};
pub use body::{ComplexBody, SocialBody};
pub use config::{
    load_scenario, BodyConfig, ComplexConfig, ConstraintConfig, ExpectedConfig, ForceConfig,
    LoadedScenario, OutputKind, PositionConfig, ScenarioConfig, DEFAULT_LAYER_RATIO_MAX,
};
pub use dynamics::{
    acceleration, energy, simulate, step, total_energy, EnergyBreakdown, IntegratorConfig, Method,
    Trajectory, TrajectorySample,
};
pub use error::{Error, Result};
pub use forces::{
    attraction_force, change_force, driving_force, elasticity_force, net_force, stability_class,
    surface_gravity_force, DrivingForceSpec, ForceKind, ForceModel, ForceParams, StabilityClass,
    SOFTENING_DEFAULT,
};
pub use mass::{combine_mass, MassCombiner, MassComponents};
pub use output::{
    energy_csv_string, parse_trajectory_csv, trajectory_csv_string, write_trajectory_csv,
    TrajectoryTable,
};
pub use scenarios::{
    acceleration_ratio, build_attraction_pendulum, build_attraction_pendulum_with,
    build_celebrity_pair, build_fashion_oscillator, build_stability_probe, detect_oscillator,
    BuiltScenario, Expectation, OscillatorExpectation, PendulumOptions, SMALL_ANGLE_TAN_MAX,
};
pub use state::{PlaneConstraint, SimulationState};
pub use vector::{distance, AssessmentVector};
