//! Shoulder tracking of a frontally observed person, as a skeleton sensor
//! would report it: timestamped shoulder height plus horizontal displacement
//! in the subject-aligned frame (+x forward, +y to the subject's left).

use rand_chacha::ChaCha8Rng;

use crate::geom::Vec2;
use crate::sensors::gas::gaussian;
use crate::world::FallDirection;
use crate::Real;

/// One shoulder observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShoulderSample {
    pub t: Real,
    pub height: Real,
    /// Horizontal displacement from the track start, subject frame.
    pub displacement: Vec2,
}

/// Synthesize the shoulder track of a person falling in `direction`.
///
/// The track covers `lead_s` of standing, a fall lasting `fall_s`, and a short
/// settled tail, sampled at `dt`. `height_sigma` adds per-sample noise when
/// positive.
#[allow(clippy::too_many_arguments)]
pub fn observe_fall_track(
    standing_shoulder_height: Real,
    direction: FallDirection,
    lead_s: Real,
    fall_s: Real,
    dt: Real,
    height_sigma: Real,
    displacement_m: Real,
    rng: &mut ChaCha8Rng,
) -> Vec<ShoulderSample> {
    let dir = match direction {
        FallDirection::Forward => Vec2::new(1.0, 0.0),
        FallDirection::Backward => Vec2::new(-1.0, 0.0),
        FallDirection::Left => Vec2::new(0.0, 1.0),
        FallDirection::Right => Vec2::new(0.0, -1.0),
    };
    let fallen_height = standing_shoulder_height * 0.15;
    let total = lead_s + fall_s + 0.5;
    let steps = (total / dt).round() as usize;
    let mut track = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let t = i as Real * dt;
        let phase = ((t - lead_s) / fall_s).clamp(0.0, 1.0);
        let mut height = standing_shoulder_height + (fallen_height - standing_shoulder_height) * phase;
        let mut disp = dir.scale(displacement_m * phase);
        if height_sigma > 0.0 {
            height += gaussian(rng) * height_sigma;
            disp = disp.add(Vec2::new(gaussian(rng), gaussian(rng)).scale(height_sigma * 0.5));
        }
        track.push(ShoulderSample { t, height, displacement: disp });
    }
    track
}

/// Track of a person who merely bends down: height dips slowly and recovers.
pub fn observe_bend_track(
    standing_shoulder_height: Real,
    dip_m: Real,
    duration_s: Real,
    dt: Real,
) -> Vec<ShoulderSample> {
    let steps = (duration_s / dt).round() as usize;
    (0..=steps)
        .map(|i| {
            let t = i as Real * dt;
            let phase = (std::f64::consts::PI * t / duration_s).sin();
            ShoulderSample {
                t,
                height: standing_shoulder_height - dip_m * phase,
                displacement: Vec2::ZERO,
            }
        })
        .collect()
}
