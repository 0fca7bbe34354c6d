//! Laser-scan clustering: agents and props become sized, temperature-tagged
//! clusters when visible from the robot.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{wrap_angle, Vec2};
use crate::sensors::gas::gaussian;
use crate::sensors::PerceptConfig;
use crate::world::WorldState;
use crate::Real;

/// One cluster of laser returns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanCluster {
    pub centroid: Vec2,
    pub major_extent: Real,
    pub minor_extent: Real,
    pub mean_temperature: Real,
    /// False for objects absent from the known map.
    pub in_known_map: bool,
}

/// Cluster every agent and prop visible from the robot.
///
/// Standing agents cluster at roughly shoulder width. Fallen agents cluster
/// at visible body length, foreshortened to body width when the viewing ray
/// lies within `foreshorten_angle_deg` of the body axis (the scanner then
/// sees the width and not the length).
pub fn sample_laser_clusters(
    state: &WorldState,
    robot_position: Vec2,
    cfg: &PerceptConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<ScanCluster> {
    let mut clusters = Vec::new();
    for agent in &state.agents {
        let dist = robot_position.dist(agent.position);
        if dist > cfg.laser_range_m || !state.map.line_of_sight(robot_position, agent.position) {
            continue;
        }
        let (mut major, mut minor) = match agent.body_axis() {
            None => (cfg.shoulder_width_m, cfg.body_minor_m),
            Some(axis) => {
                let ray = agent.position.sub(robot_position);
                let angle = wrap_angle(ray.azimuth() - axis.azimuth()).abs();
                let along = angle.min(std::f64::consts::PI - angle);
                if along <= cfg.foreshorten_angle_deg.to_radians() {
                    (cfg.body_minor_m, cfg.body_minor_m)
                } else {
                    (agent.body_height, cfg.body_minor_m)
                }
            }
        };
        let mut temperature = agent.skin_temperature;
        if cfg.noise_enabled {
            major = (major + gaussian(rng) * cfg.laser_extent_sigma).max(0.01);
            minor = (minor + gaussian(rng) * cfg.laser_extent_sigma).max(0.01);
            temperature += gaussian(rng) * cfg.laser_temp_sigma;
        }
        if minor > major {
            std::mem::swap(&mut major, &mut minor);
        }
        clusters.push(ScanCluster {
            centroid: agent.position,
            major_extent: major,
            minor_extent: minor,
            mean_temperature: temperature,
            in_known_map: false,
        });
    }
    for prop in &state.props {
        let dist = robot_position.dist(prop.position);
        if dist > cfg.laser_range_m || !state.map.line_of_sight(robot_position, prop.position) {
            continue;
        }
        let mut major = prop.major_extent;
        let mut minor = prop.minor_extent;
        let mut temperature = prop.temperature;
        if cfg.noise_enabled {
            major = (major + gaussian(rng) * cfg.laser_extent_sigma).max(0.01);
            minor = (minor + gaussian(rng) * cfg.laser_extent_sigma).max(0.01);
            temperature += gaussian(rng) * cfg.laser_temp_sigma;
        }
        if minor > major {
            std::mem::swap(&mut major, &mut minor);
        }
        clusters.push(ScanCluster {
            centroid: prop.position,
            major_extent: major,
            minor_extent: minor,
            mean_temperature: temperature,
            in_known_map: prop.in_known_map,
        });
    }
    clusters
}
