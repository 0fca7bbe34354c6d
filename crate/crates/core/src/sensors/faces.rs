//! Face perception, abstracted to geometric visibility with a
//! distance-dependent miss probability. Apparent width follows the
//! small-angle rule, so distance can be estimated from face size.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{wrap_angle, Vec2};
use crate::sensors::gas::gaussian;
use crate::sensors::PerceptConfig;
use crate::world::WorldState;
use crate::Real;

/// One detected face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerceivedFace {
    pub agent_id: String,
    /// Visual angle subtended by the face, radians.
    pub apparent_width: Real,
    /// Face center above ground, meters (noisy).
    pub face_center_height: Real,
    /// Bearing from the robot heading, radians, CCW positive.
    pub bearing: Real,
}

/// Detect faces of agents inside the field of view and range.
///
/// `apparent_width = true_face_width / distance` (small-angle); a detection
/// is dropped with probability `p_miss(distance)`, which is 0 at close range
/// and ramps linearly to `p_miss_max` at `max_range`.
pub fn perceive_faces(
    state: &WorldState,
    robot_position: Vec2,
    robot_heading: Real,
    fov: Real,
    max_range: Real,
    cfg: &PerceptConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<PerceivedFace> {
    debug_assert!(fov > 0.0 && fov <= std::f64::consts::PI);
    debug_assert!(max_range > 0.0);
    let mut faces = Vec::new();
    for agent in &state.agents {
        let offset = agent.position.sub(robot_position);
        let distance = offset.norm();
        if distance <= 1e-9 || distance > max_range {
            continue;
        }
        let bearing = wrap_angle(offset.azimuth() - robot_heading);
        if bearing.abs() > fov / 2.0 {
            continue;
        }
        if !state.map.line_of_sight(robot_position, agent.position) {
            continue;
        }
        if cfg.noise_enabled {
            let p_miss = miss_probability(distance, max_range, cfg);
            if p_miss > 0.0 && rng.gen_range(0.0..1.0) < p_miss {
                continue;
            }
        }
        let mut height = agent.face_height(cfg.fallen_face_height_m);
        if cfg.noise_enabled {
            height += gaussian(rng) * cfg.face_height_sigma_m;
        }
        faces.push(PerceivedFace {
            agent_id: agent.id.clone(),
            apparent_width: cfg.face_width_m / distance,
            face_center_height: height,
            bearing,
        });
    }
    faces
}

fn miss_probability(distance: Real, max_range: Real, cfg: &PerceptConfig) -> Real {
    if distance <= cfg.p_miss_free_range_m || max_range <= cfg.p_miss_free_range_m {
        0.0
    } else {
        cfg.p_miss_max
            * ((distance - cfg.p_miss_free_range_m) / (max_range - cfg.p_miss_free_range_m)).min(1.0)
    }
}
