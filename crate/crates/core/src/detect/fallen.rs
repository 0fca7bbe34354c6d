//! Fallen-person detection from laser clusters, and fall-direction
//! classification from shoulder tracks.

use serde::{Deserialize, Serialize};

use crate::detect::DetectError;
use crate::geom::Vec2;
use crate::sensors::laser::ScanCluster;
use crate::world::FallDirection;
use crate::Real;

/// Size and temperature gates for a human-sized, human-temperature anomaly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FallenConfig {
    pub size_min_m: Real,
    pub size_max_m: Real,
    pub temp_min_c: Real,
    pub temp_max_c: Real,
}

impl Default for FallenConfig {
    fn default() -> Self {
        FallenConfig { size_min_m: 0.4, size_max_m: 2.1, temp_min_c: 30.0, temp_max_c: 40.0 }
    }
}

/// A cluster that passed the fallen-person gates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FallenCandidate {
    pub position: Vec2,
    pub confidence: Real,
    pub size_ok: bool,
    pub temperature_ok: bool,
}

/// Distance of `x` from the nearer interval edge, normalized to [0, 1]
/// where 1 means dead center.
fn interval_margin(x: Real, lo: Real, hi: Real) -> Real {
    let half = (hi - lo) / 2.0;
    if half <= 0.0 {
        return 0.0;
    }
    ((x - lo).min(hi - x) / half).clamp(0.0, 1.0)
}

/// Gate clusters on map-anomaly, size, and temperature. Confidence is the
/// product of the per-criterion margins.
pub fn detect_fallen(clusters: &[ScanCluster], cfg: &FallenConfig) -> Vec<FallenCandidate> {
    clusters
        .iter()
        .filter_map(|c| {
            if c.in_known_map {
                return None;
            }
            let size_ok = c.major_extent >= cfg.size_min_m && c.major_extent <= cfg.size_max_m;
            let temperature_ok =
                c.mean_temperature >= cfg.temp_min_c && c.mean_temperature <= cfg.temp_max_c;
            if !(size_ok && temperature_ok) {
                return None;
            }
            let confidence = interval_margin(c.major_extent, cfg.size_min_m, cfg.size_max_m)
                * interval_margin(c.mean_temperature, cfg.temp_min_c, cfg.temp_max_c);
            Some(FallenCandidate { position: c.centroid, confidence, size_ok, temperature_ok })
        })
        .collect()
}

/// Fall-direction thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FallConfig {
    /// Shoulder height must drop at least this much, meters.
    pub drop_threshold_m: Real,
    /// ... within this window, seconds.
    pub window_s: Real,
}

impl Default for FallConfig {
    fn default() -> Self {
        FallConfig { drop_threshold_m: 0.5, window_s: 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FallCall {
    Fall(FallDirection),
    NoFall,
}

/// Classify a shoulder track: a drop of at least the threshold within the
/// window is a fall, and the azimuth quadrant of the net horizontal
/// displacement names the direction.
///
/// The track is `(t, shoulder_height, displacement)` with displacement in the
/// subject frame (+x forward, +y left). Quadrant boundaries are assigned
/// counter-clockwise-inclusive, so exactly 45 degrees is Forward.
pub fn fall_direction(
    track: &[(Real, Real, Vec2)],
    cfg: &FallConfig,
) -> Result<FallCall, DetectError> {
    if track.len() < 2 {
        return Err(DetectError::TrackTooShort { got: track.len(), min: 2 });
    }
    for (i, (t_i, h_i, d_i)) in track.iter().enumerate() {
        for (t_j, h_j, d_j) in track.iter().skip(i + 1) {
            if t_j - t_i > cfg.window_s {
                break;
            }
            if h_i - h_j >= cfg.drop_threshold_m {
                let disp = d_j.sub(*d_i);
                return Ok(FallCall::Fall(quadrant(disp)));
            }
        }
    }
    Ok(FallCall::NoFall)
}

/// Quadrant of an azimuth, counter-clockwise-inclusive:
/// Forward (-45, 45], Left (45, 135], Backward (135, 180] and (-180, -135],
/// Right (-135, -45].
fn quadrant(disp: Vec2) -> FallDirection {
    let deg = disp.azimuth().to_degrees();
    if deg > -45.0 && deg <= 45.0 {
        FallDirection::Forward
    } else if deg > 45.0 && deg <= 135.0 {
        FallDirection::Left
    } else if deg > -135.0 && deg <= -45.0 {
        FallDirection::Right
    } else {
        FallDirection::Backward
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::sensors::skeleton::observe_fall_track;

    fn cluster(major: Real, temp: Real, known: bool) -> ScanCluster {
        ScanCluster {
            centroid: Vec2::new(1.0, 1.0),
            major_extent: major,
            minor_extent: major.min(0.3),
            mean_temperature: temp,
            in_known_map: known,
        }
    }

    #[test]
    fn human_sized_human_temperature_cluster_is_a_candidate() {
        let out = detect_fallen(&[cluster(1.7, 33.0, false)], &FallenConfig::default());
        assert_eq!(out.len(), 1);
        assert!(out[0].size_ok && out[0].temperature_ok);
        assert!(out[0].confidence > 0.0 && out[0].confidence <= 1.0);
    }

    #[test]
    fn small_hot_kettle_is_rejected() {
        let out = detect_fallen(&[cluster(0.2, 60.0, false)], &FallenConfig::default());
        assert!(out.is_empty());
    }

    #[test]
    fn known_map_objects_are_ignored() {
        let out = detect_fallen(&[cluster(1.7, 33.0, true)], &FallenConfig::default());
        assert!(out.is_empty());
    }

    #[test]
    fn classification_matches_threshold_predicate_on_grid() {
        let cfg = FallenConfig::default();
        let extents: Vec<Real> = (0..60).map(|i| 0.1 + i as Real * 0.04).collect();
        let temps: Vec<Real> = (0..50).map(|i| 20.0 + i as Real * 0.5).collect();
        for &e in &extents {
            for &t in &temps {
                let got = !detect_fallen(&[cluster(e, t, false)], &cfg).is_empty();
                let want = e >= cfg.size_min_m
                    && e <= cfg.size_max_m
                    && t >= cfg.temp_min_c
                    && t <= cfg.temp_max_c;
                assert_eq!(got, want, "extent {e} temp {t}");
            }
        }
    }

    #[test]
    fn pushed_mannequin_directions_are_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for dir in [
            FallDirection::Forward,
            FallDirection::Backward,
            FallDirection::Left,
            FallDirection::Right,
        ] {
            let track = observe_fall_track(1.45, dir, 0.5, 0.7, 0.05, 0.01, 0.6, &mut rng);
            let samples: Vec<(Real, Real, Vec2)> =
                track.iter().map(|s| (s.t, s.height, s.displacement)).collect();
            assert_eq!(
                fall_direction(&samples, &FallConfig::default()).unwrap(),
                FallCall::Fall(dir)
            );
        }
    }

    #[test]
    fn slow_bend_is_not_a_fall() {
        let track = crate::sensors::skeleton::observe_bend_track(1.45, 0.3, 4.0, 0.1);
        let samples: Vec<(Real, Real, Vec2)> =
            track.iter().map(|s| (s.t, s.height, s.displacement)).collect();
        assert_eq!(
            fall_direction(&samples, &FallConfig::default()).unwrap(),
            FallCall::NoFall
        );
    }

    #[test]
    fn forty_five_degree_boundary_is_forward() {
        let d = 0.5f64;
        let track = vec![
            (0.0, 1.4, Vec2::ZERO),
            (0.5, 0.6, Vec2::new(d, d)), // azimuth exactly 45 degrees
        ];
        assert_eq!(
            fall_direction(&track, &FallConfig::default()).unwrap(),
            FallCall::Fall(FallDirection::Forward)
        );
    }

    #[test]
    fn other_ccw_inclusive_boundaries() {
        let mk = |x: f64, y: f64| {
            vec![(0.0, 1.4, Vec2::ZERO), (0.5, 0.6, Vec2::new(x, y))]
        };
        let cfg = FallConfig::default();
        assert_eq!(fall_direction(&mk(-0.5, 0.5), &cfg).unwrap(), FallCall::Fall(FallDirection::Left)); // 135
        assert_eq!(fall_direction(&mk(-0.5, -0.5), &cfg).unwrap(), FallCall::Fall(FallDirection::Backward)); // -135
        assert_eq!(fall_direction(&mk(0.5, -0.5), &cfg).unwrap(), FallCall::Fall(FallDirection::Right)); // -45
    }

    #[test]
    fn track_too_short_is_an_error() {
        let track = vec![(0.0, 1.4, Vec2::ZERO)];
        assert!(matches!(
            fall_direction(&track, &FallConfig::default()),
            Err(DetectError::TrackTooShort { .. })
        ));
    }

    #[test]
    fn slow_drop_outside_window_is_not_a_fall() {
        // 0.6 m drop spread over 5 s: never 0.5 m within any 2 s window
        let track: Vec<(Real, Real, Vec2)> = (0..=50)
            .map(|i| {
                let t = i as Real * 0.1;
                (t, 1.4 - 0.12 * t, Vec2::new(0.01 * t, 0.0))
            })
            .collect();
        assert_eq!(
            fall_direction(&track, &FallConfig::default()).unwrap(),
            FallCall::NoFall
        );
    }
}
