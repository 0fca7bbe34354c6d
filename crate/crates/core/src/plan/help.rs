//! Helpfulness scoring of detected faces: nearer people and adults (taller
//! faces) are expected to be more helpful.

use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::plan::tour::HelpNode;
use crate::sensors::PerceivedFace;
use crate::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HelpfulnessConfig {
    pub w_dist: Real,
    pub w_adult: Real,
    /// Proximity score reaches zero at this distance, meters.
    pub d_max: Real,
    /// Faces at or above this height count as adults, meters.
    pub h_adult: Real,
    /// Assumed true face width for distance estimation, meters.
    pub face_width_prior: Real,
}

impl Default for HelpfulnessConfig {
    fn default() -> Self {
        HelpfulnessConfig {
            w_dist: 0.5,
            w_adult: 0.5,
            d_max: 5.0,
            h_adult: 1.1,
            face_width_prior: 0.15,
        }
    }
}

/// Distance estimated from apparent face size (small-angle inversion).
pub fn estimate_distance(face: &PerceivedFace, cfg: &HelpfulnessConfig) -> Real {
    debug_assert!(face.apparent_width > 0.0);
    cfg.face_width_prior / face.apparent_width
}

/// Reward: `w_dist * proximity + w_adult * adult`, with proximity
/// `clamp(1 - d/d_max, 0, 1)` and adult a hard height threshold.
pub fn helpfulness(face: &PerceivedFace, cfg: &HelpfulnessConfig) -> Real {
    let distance = estimate_distance(face, cfg);
    let proximity = (1.0 - distance / cfg.d_max).clamp(0.0, 1.0);
    let adult = if face.face_center_height >= cfg.h_adult { 1.0 } else { 0.0 };
    cfg.w_dist * proximity + cfg.w_adult * adult
}

/// Build a help node from a face: position from bearing plus estimated
/// distance, reward from the helpfulness score.
pub fn node_from_face(
    face: &PerceivedFace,
    robot_position: Vec2,
    robot_heading: Real,
    cfg: &HelpfulnessConfig,
    visited: bool,
) -> HelpNode<Real> {
    let d = estimate_distance(face, cfg);
    let angle = robot_heading + face.bearing;
    let pos = robot_position.add(Vec2::new(angle.cos(), angle.sin()).scale(d));
    HelpNode {
        id: face.agent_id.clone(),
        position: [pos.x, pos.y],
        reward: helpfulness(face, cfg),
        visited,
    }
}
