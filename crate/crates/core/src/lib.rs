//! Deterministic home-robot emergency-response simulator and planning library.
//!
//! The crate models a small apartment instrumented with ambient sensors and a
//! mobile robot, and provides the algorithmic building blocks for an
//! emergency-response pipeline:
//!
//! - [`world`] — occupancy-grid apartment map, scripted agents, fixed-timestep
//!   world stepping with a seeded random source.
//! - [`sensors`] — noisy percepts derived from ground truth: ambient sensor
//!   events, gas readings with asymmetric lag, laser-scan clusters, faces.
//! - [`detect`] — breath-presence state machine with adaptive thresholds,
//!   exponential trend filtering, random-forest anomaly detection, and
//!   fallen-person / fall-direction classifiers.
//! - [`plan`] — grid A*, travel-time conversion, and budgeted reward-collecting
//!   tour planning with a brute-force reference solver.
//! - [`motion`] — playful reaching trajectories via metric-preconditioned
//!   gradient descent, and a six-segment alphanumeric stroke generator.
//! - [`triage`] — body-part localization from a prior model and rule-based
//!   vital-sign classification with an overall priority.
//! - [`scenario`] — config parsing, the end-to-end pipeline, the JSON-lines
//!   event log, and run metrics.
//!
//! Numeric kernels are generic over the scalar type via [`scalar::Scalar`]
//! (`f32` or `f64`); the simulator itself runs on [`Real`]. Identical seed and
//! config produce byte-identical event logs.

pub mod detect;
pub mod geom;
pub mod motion;
pub mod plan;
pub mod scalar;
pub mod scenario;
pub mod sensors;
pub mod triage;
pub mod world;

/// Scalar type used by the simulator and all concrete aliases.
pub type Real = f64;

/// 2D trajectory over [`Real`].
pub type Trajectory2 = motion::Trajectory<Real, 2>;
/// 3D trajectory over [`Real`].
pub type Trajectory3 = motion::Trajectory<Real, 3>;
/// Breath-detector sandwich state over [`Real`].
pub type SandwichState = detect::breath::SandwichState<Real>;
/// Anomaly forest over [`Real`] features.
pub type Forest = detect::forest::Forest<Real>;
/// Grid path over [`Real`] costs.
pub type Path = plan::grid::Path<Real>;
/// Reward-collecting tour over [`Real`].
pub type TourPlan = plan::tour::TourPlan<Real>;
