//! Presence fusion: the fast sandwich machine catches sudden large changes,
//! the slower trend filter catches slight changes over longer spans, and pan
//! readings give a rough side estimate (left or right).

use serde::{Deserialize, Serialize};

use crate::detect::breath::Presence;
use crate::detect::trend::{ChangePoint, Direction};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
    Center,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PresenceEstimate {
    pub present: bool,
    pub side: Side,
}

/// Fusion parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FuseConfig {
    /// A rising change point within this many seconds still signals presence.
    pub hold_window_s: Real,
    /// Pan-reading spread must exceed this to commit to a side.
    pub noise_floor: Real,
    /// Bearings within this of straight ahead count as center, radians.
    pub center_band_rad: Real,
}

impl Default for FuseConfig {
    fn default() -> Self {
        FuseConfig {
            hold_window_s: 60.0,
            noise_floor: 2.0,
            center_band_rad: 15.0f64.to_radians(),
        }
    }
}

/// Combine the fast state, recent slow change points, and pan samples.
///
/// `slow` pairs each change point with its timestamp; `pan_samples` are
/// `(bearing_rad, reading)` pairs collected while panning. Present when the
/// fast state is `Close` or a rising slow change lies within the hold
/// window. Side is the argmax-bearing bucket when the bucket means spread
/// beyond the noise floor and at least two distinct bearings were sampled.
pub fn fuse_presence(
    fast_state: Presence,
    slow: &[(Real, ChangePoint)],
    now: Real,
    pan_samples: &[(Real, Real)],
    cfg: &FuseConfig,
) -> PresenceEstimate {
    let slow_presence = slow.iter().any(|(t, cp)| {
        cp.direction == Direction::Rising && now - *t <= cfg.hold_window_s
    });
    let present = fast_state == Presence::Close || slow_presence;

    let mut distinct_bearings = 0usize;
    let mut seen: Vec<Real> = Vec::new();
    for (b, _) in pan_samples {
        if !seen.iter().any(|s| (s - b).abs() < 1e-9) {
            seen.push(*b);
            distinct_bearings += 1;
        }
    }
    let side = if distinct_bearings < 2 {
        Side::Unknown
    } else {
        let mut sums = [(0.0, 0usize); 3]; // left, center, right
        for (bearing, reading) in pan_samples {
            let idx = if *bearing > cfg.center_band_rad {
                0
            } else if *bearing < -cfg.center_band_rad {
                2
            } else {
                1
            };
            sums[idx].0 += reading;
            sums[idx].1 += 1;
        }
        let means: Vec<(usize, Real)> = sums
            .iter()
            .enumerate()
            .filter(|(_, (_, n))| *n > 0)
            .map(|(i, (s, n))| (i, s / *n as Real))
            .collect();
        if means.len() < 2 {
            Side::Unknown
        } else {
            let max = means.iter().cloned().fold((0, Real::NEG_INFINITY), |acc, m| {
                if m.1 > acc.1 {
                    m
                } else {
                    acc
                }
            });
            let min = means.iter().map(|m| m.1).fold(Real::INFINITY, Real::min);
            if max.1 - min <= cfg.noise_floor {
                Side::Unknown
            } else {
                match max.0 {
                    0 => Side::Left,
                    1 => Side::Center,
                    _ => Side::Right,
                }
            }
        }
    };
    PresenceEstimate { present, side }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_close_alone_means_present() {
        let est = fuse_presence(Presence::Close, &[], 100.0, &[], &FuseConfig::default());
        assert!(est.present);
        assert_eq!(est.side, Side::Unknown);
    }

    #[test]
    fn recent_rising_change_means_present() {
        let cp = ChangePoint { index: 10, direction: Direction::Rising };
        let est = fuse_presence(Presence::Far, &[(95.0, cp)], 100.0, &[], &FuseConfig::default());
        assert!(est.present);
    }

    #[test]
    fn stale_rising_change_does_not_hold() {
        let cp = ChangePoint { index: 10, direction: Direction::Rising };
        let est = fuse_presence(Presence::Far, &[(10.0, cp)], 100.0, &[], &FuseConfig::default());
        assert!(!est.present);
    }

    #[test]
    fn pan_argmax_selects_left() {
        let pan: Vec<(f64, f64)> = vec![
            (0.6, 405.0),
            (0.5, 404.0),
            (-0.5, 401.0),
            (-0.6, 400.5),
        ];
        let est = fuse_presence(Presence::Close, &[], 0.0, &pan, &FuseConfig::default());
        assert_eq!(est.side, Side::Left);
    }

    #[test]
    fn spread_below_noise_floor_gives_unknown_side() {
        let pan: Vec<(f64, f64)> = vec![(0.5, 400.4), (-0.5, 400.0)];
        let est = fuse_presence(Presence::Close, &[], 0.0, &pan, &FuseConfig::default());
        assert_eq!(est.side, Side::Unknown);
    }

    #[test]
    fn single_bearing_gives_unknown_side() {
        let pan: Vec<(f64, f64)> = vec![(0.5, 410.0), (0.5, 409.0)];
        let est = fuse_presence(Presence::Close, &[], 0.0, &pan, &FuseConfig::default());
        assert_eq!(est.side, Side::Unknown);
    }
}
