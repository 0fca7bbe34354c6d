//! Health assessment of a fallen person: body-part localization from a prior
//! model and rule-based vital-sign classification with an overall priority.

pub mod fixtures;
pub mod parts;
pub mod vitals;

use thiserror::Error;

pub use parts::{locate_parts, AnthropometricConfig, BodyFrame, BodyPart, BodyPartEstimate};
pub use vitals::{
    assess_airway, assess_bleeding, assess_breathing, assess_cyanosis, triage_report, Airway,
    BleedSeverity, BleedingVerdict, Breathing, Circulation, Priority, TriageConfig, VitalsReport,
};

#[derive(Debug, Error, PartialEq)]
pub enum TriageError {
    #[error("observation window of {got} s is below the minimum {min} s")]
    WindowTooShort { got: f64, min: f64 },
    #[error("red-color track is empty")]
    EmptyTrack,
    #[error("bad body frame: {0}")]
    BadFrame(String),
}
