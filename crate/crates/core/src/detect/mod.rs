//! Recognition algorithms: the breath-presence state machine and trend
//! filter, the environmental anomaly classifier, and fallen-person and
//! fall-direction detection.
//!
//! All detectors are explicit-state step functions: the caller owns the
//! state, passes it in, and receives it back.

pub mod breath;
pub mod corpus;
pub mod fallen;
pub mod features;
pub mod forest;
pub mod fuse;
pub mod trend;

use thiserror::Error;

pub use breath::{breath_step, BreathConfig, BreathDetector, Presence, SandwichState, Transition};
pub use fallen::{detect_fallen, fall_direction, FallCall, FallConfig, FallenCandidate, FallenConfig};
pub use features::{extract_features, AnomalyFeatureVector, FeatureConfig, TimeBucket};
pub use forest::{classify_anomaly, train_forest, AnomalyVerdict, Forest, ForestParams};
pub use fuse::{fuse_presence, FuseConfig, PresenceEstimate, Side};
pub use trend::{trend_filter, ChangePoint, Direction, TrendConfig, TrendSegment};

#[derive(Debug, Error, PartialEq)]
pub enum DetectError {
    #[error("window holds {got} samples, need at least {min}")]
    WindowTooShort { got: usize, min: usize },
    #[error("shoulder track holds {got} samples, need at least {min}")]
    TrackTooShort { got: usize, min: usize },
    #[error("degenerate training set: {0}")]
    DegenerateTraining(String),
    #[error("bad model file: {0}")]
    ModelFormat(String),
}
