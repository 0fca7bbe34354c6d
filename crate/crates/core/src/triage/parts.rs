//! Body-part localization from a simplified prior model: parts of interest
//! for first aid sit at fixed anthropometric multiples of the head length
//! along and beside the body axis.

use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::triage::TriageError;
use crate::Real;

/// Pose anchor recovered from face and skin detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyFrame {
    pub face_center: Vec2,
    /// Unit vector from the face toward the feet.
    pub body_axis: Vec2,
    /// Head length, meters.
    pub scale: Real,
    pub confidence: Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BodyPart {
    Chest,
    LeftHand,
    RightHand,
    Chin,
    Mouth,
    Nose,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyPartEstimate {
    pub part: BodyPart,
    pub position: Vec2,
    pub uncertainty_radius: Real,
}

/// Prior-model constants in head lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnthropometricConfig {
    pub chin_axial: Real,
    pub mouth_axial: Real,
    pub nose_axial: Real,
    pub chest_axial: Real,
    pub hand_axial: Real,
    pub hand_lateral: Real,
    /// Base uncertainty radius, meters, grown with axial distance.
    pub uncertainty_base_m: Real,
    pub uncertainty_per_headlen_m: Real,
}

impl Default for AnthropometricConfig {
    fn default() -> Self {
        AnthropometricConfig {
            chin_axial: 0.5,
            mouth_axial: 0.35,
            nose_axial: 0.25,
            chest_axial: 2.0,
            hand_axial: 3.0,
            hand_lateral: 1.0,
            uncertainty_base_m: 0.02,
            uncertainty_per_headlen_m: 0.01,
        }
    }
}

/// Place all six parts of interest. The left hand lies toward the
/// counter-clockwise perpendicular of the body axis.
pub fn locate_parts(
    frame: &BodyFrame,
    cfg: &AnthropometricConfig,
) -> Result<Vec<BodyPartEstimate>, TriageError> {
    if frame.scale <= 0.0 {
        return Err(TriageError::BadFrame("scale must be positive".into()));
    }
    let axis = frame
        .body_axis
        .normalized(1e-9)
        .ok_or_else(|| TriageError::BadFrame("degenerate body axis".into()))?;
    let lateral = axis.rot90();
    let place = |axial: Real, side: Real| {
        frame
            .face_center
            .add(axis.scale(axial * frame.scale))
            .add(lateral.scale(side * frame.scale))
    };
    let radius = |axial: Real| cfg.uncertainty_base_m + cfg.uncertainty_per_headlen_m * axial;
    Ok(vec![
        BodyPartEstimate {
            part: BodyPart::Chest,
            position: place(cfg.chest_axial, 0.0),
            uncertainty_radius: radius(cfg.chest_axial),
        },
        BodyPartEstimate {
            part: BodyPart::LeftHand,
            position: place(cfg.hand_axial, cfg.hand_lateral),
            uncertainty_radius: radius(cfg.hand_axial),
        },
        BodyPartEstimate {
            part: BodyPart::RightHand,
            position: place(cfg.hand_axial, -cfg.hand_lateral),
            uncertainty_radius: radius(cfg.hand_axial),
        },
        BodyPartEstimate {
            part: BodyPart::Chin,
            position: place(cfg.chin_axial, 0.0),
            uncertainty_radius: radius(cfg.chin_axial),
        },
        BodyPartEstimate {
            part: BodyPart::Mouth,
            position: place(cfg.mouth_axial, 0.0),
            uncertainty_radius: radius(cfg.mouth_axial),
        },
        BodyPartEstimate {
            part: BodyPart::Nose,
            position: place(cfg.nose_axial, 0.0),
            uncertainty_radius: radius(cfg.nose_axial),
        },
    ])
}
