//! Percept generation: ground truth in, noisy sensor views out.
//!
//! All samplers are pure functions of the world state plus an explicit noise
//! stream; with noise disabled they are deterministic functions of the state.

pub mod events;
pub mod faces;
pub mod gas;
pub mod laser;
pub mod skeleton;

use serde::{Deserialize, Serialize};

use crate::Real;

pub use events::{sample_environment_sensors, SensorEvent};
pub use faces::{perceive_faces, PerceivedFace};
pub use gas::{sample_gas, GasConfig, GasSample};
pub use laser::{sample_laser_clusters, ScanCluster};

/// Noise and geometry parameters shared by the laser and face samplers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PerceptConfig {
    /// Master switch; false makes every percept a pure function of the state.
    pub noise_enabled: bool,
    pub laser_range_m: Real,
    pub laser_temp_sigma: Real,
    pub laser_extent_sigma: Real,
    /// Standing cluster major extent, meters.
    pub shoulder_width_m: Real,
    /// Cluster minor extent (body width), meters.
    pub body_minor_m: Real,
    /// Viewing rays within this angle of the body axis see only the width.
    pub foreshorten_angle_deg: Real,
    /// True face width prior, meters.
    pub face_width_m: Real,
    pub face_height_sigma_m: Real,
    /// Face miss probability at max range.
    pub p_miss_max: Real,
    /// No misses at or below this distance, meters.
    pub p_miss_free_range_m: Real,
    /// Face center height of a person lying on the floor, meters.
    pub fallen_face_height_m: Real,
}

impl Default for PerceptConfig {
    fn default() -> Self {
        PerceptConfig {
            noise_enabled: true,
            laser_range_m: 5.0,
            laser_temp_sigma: 0.5,
            laser_extent_sigma: 0.03,
            shoulder_width_m: 0.42,
            body_minor_m: 0.3,
            foreshorten_angle_deg: 30.0,
            face_width_m: 0.15,
            face_height_sigma_m: 0.03,
            p_miss_max: 0.3,
            p_miss_free_range_m: 2.0,
            fallen_face_height_m: 0.15,
        }
    }
}
