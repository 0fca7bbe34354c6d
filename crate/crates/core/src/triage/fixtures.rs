//! Labeled fixture sets for the vital-sign classifiers, with a documented
//! noise model. Truth values sit clear of the thresholds, so classification
//! with noise disabled is exact; the noisy accuracies are calibrated against
//! the reported floors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sensors::gas::gaussian;
use crate::triage::vitals::{
    assess_airway, assess_breathing, assess_cyanosis, Airway, Breathing, Circulation, TriageConfig,
};
use crate::world::agent::{BodyRegion, FaceOrientation};
use crate::Real;

/// Observation noise applied to triage percepts.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct TriageNoise {
    pub enabled: bool,
    pub blueness_sigma: Real,
    pub pitch_sigma_deg: Real,
    /// Probability the face orientation is misread as another one.
    pub orientation_flip_p: Real,
    /// Relative jitter on each breath interval.
    pub interval_rel_sigma: Real,
    /// Absolute jitter on each tracked red area, m^2.
    pub area_sigma_m2: Real,
}

impl Default for TriageNoise {
    fn default() -> Self {
        TriageNoise {
            enabled: true,
            blueness_sigma: 0.08,
            pitch_sigma_deg: 8.0,
            orientation_flip_p: 0.05,
            interval_rel_sigma: 0.1,
            area_sigma_m2: 2e-4,
        }
    }
}

impl TriageNoise {
    pub fn disabled() -> Self {
        TriageNoise { enabled: false, ..TriageNoise::default() }
    }

    pub fn blueness(&self, truth: Real, rng: &mut ChaCha8Rng) -> Real {
        if !self.enabled {
            return truth;
        }
        (truth + gaussian(rng) * self.blueness_sigma).clamp(0.0, 1.0)
    }

    pub fn pitch(&self, truth: Real, rng: &mut ChaCha8Rng) -> Real {
        if !self.enabled {
            return truth;
        }
        (truth + gaussian(rng) * self.pitch_sigma_deg).clamp(-90.0, 90.0)
    }

    pub fn orientation(&self, truth: FaceOrientation, rng: &mut ChaCha8Rng) -> FaceOrientation {
        if !self.enabled || rng.gen_range(0.0..1.0) >= self.orientation_flip_p {
            return truth;
        }
        match (truth, rng.gen_range(0..2)) {
            (FaceOrientation::Front, 0) => FaceOrientation::Side,
            (FaceOrientation::Front, _) => FaceOrientation::Down,
            (FaceOrientation::Side, 0) => FaceOrientation::Front,
            (FaceOrientation::Side, _) => FaceOrientation::Down,
            (FaceOrientation::Down, 0) => FaceOrientation::Side,
            (FaceOrientation::Down, _) => FaceOrientation::Front,
        }
    }

    pub fn intervals(&self, truth: &[Real], rng: &mut ChaCha8Rng) -> Vec<Real> {
        truth
            .iter()
            .map(|t| {
                if self.enabled {
                    (t * (1.0 + gaussian(rng) * self.interval_rel_sigma)).max(0.2)
                } else {
                    *t
                }
            })
            .collect()
    }

    pub fn area(&self, truth: Real, rng: &mut ChaCha8Rng) -> Real {
        if !self.enabled {
            return truth;
        }
        (truth + gaussian(rng) * self.area_sigma_m2).max(0.0)
    }
}

/// 40 cyanosis cases: 24 blued hands across six blueness levels, 16 clean.
pub fn cyanosis_fixtures() -> Vec<(Real, Circulation)> {
    let blued = [0.33, 0.38, 0.45, 0.55, 0.65, 0.75];
    let clean = [0.05, 0.12, 0.18, 0.25];
    let mut out = Vec::with_capacity(40);
    for _ in 0..4 {
        for b in blued {
            out.push((b, Circulation::Cyanotic));
        }
        for b in clean {
            out.push((b, Circulation::Normal));
        }
    }
    out
}

/// 40 airway cases: chin up or down crossed with front/side/down faces.
pub fn airway_fixtures() -> Vec<((Real, FaceOrientation), Airway)> {
    let cfg = TriageConfig::default();
    let ups = [18.0, 25.0, 32.0, 40.0];
    let downs = [-30.0, -18.0, -8.0, 2.0];
    let orientations = [FaceOrientation::Front, FaceOrientation::Side, FaceOrientation::Down];
    let mut out = Vec::new();
    // 4 pitches x 3 orientations x (up, down) = 24; repeated to 48, trimmed to 40
    'outer: for rep in 0..2 {
        for &o in &orientations {
            for (&up, &down) in ups.iter().zip(&downs) {
                for pitch in [up, down] {
                    let label = assess_airway(pitch, o, &cfg);
                    out.push(((pitch, o), label));
                    if out.len() == 40 {
                        break 'outer;
                    }
                }
            }
        }
        let _ = rep;
    }
    out
}

/// 40 breathing cases: 10 regular plus 30 fast/slow/agonal.
pub fn breathing_fixtures() -> Vec<(Vec<Real>, Real, Breathing)> {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut out = Vec::new();
    let make = |mean: Real, cv: Real, window: Real, rng: &mut ChaCha8Rng| -> Vec<Real> {
        let n = (window / mean).floor().max(2.0) as usize;
        (0..n).map(|_| (mean * (1.0 + gaussian(rng) * cv)).max(0.3)).collect()
    };
    for _ in 0..10 {
        out.push((make(4.0, 0.08, 30.0, &mut rng), 30.0, Breathing::Normal));
    }
    for _ in 0..10 {
        out.push((make(1.8, 0.08, 25.0, &mut rng), 25.0, Breathing::Fast));
    }
    for _ in 0..10 {
        out.push((make(9.5, 0.1, 40.0, &mut rng), 40.0, Breathing::Slow));
    }
    for _ in 0..10 {
        // gasps separated by long irregular pauses
        let intervals = vec![3.0, 16.0, 2.5, 20.0, 3.5, 18.0];
        out.push((intervals, 63.0, Breathing::Agonal));
    }
    out
}

/// 36 bleeding-location cases: six per region, one dominant growing pool.
pub fn bleeding_location_fixtures() -> Vec<(Vec<(Real, BodyRegion, Real)>, BodyRegion)> {
    let regions = [
        BodyRegion::Head,
        BodyRegion::Body,
        BodyRegion::LeftArm,
        BodyRegion::RightArm,
        BodyRegion::LeftLeg,
        BodyRegion::RightLeg,
    ];
    let mut out = Vec::new();
    for (k, &region) in regions.iter().enumerate() {
        for rep in 0..6 {
            let final_area = 3e-3 + 1e-3 * rep as Real + 2e-4 * k as Real;
            let mut track = Vec::new();
            for i in 0..10 {
                let t = i as Real;
                track.push((t, region, final_area * (0.4 + 0.6 * t / 9.0)));
                // faint traces elsewhere stay below the reporting floor
                let other = regions[(k + 1 + (rep % 5)) % 6];
                track.push((t, other, 0.5e-4));
            }
            out.push((track, region));
        }
    }
    out
}

/// 18 bleeding-rate cases: six massive, six slight, six non-expanding.
pub fn bleeding_rate_fixtures() -> Vec<(Vec<(Real, BodyRegion, Real)>, super::vitals::BleedSeverity)> {
    use super::vitals::BleedSeverity;
    let mut out = Vec::new();
    let rates_massive = [8e-4, 1e-3, 1.2e-3, 9e-4, 7e-4, 1.5e-3];
    let rates_slight = [5e-5, 1e-4, 2e-4, 3e-4, 1.5e-4, 2.5e-4];
    for r in rates_massive {
        out.push((rate_track(r), BleedSeverity::Massive));
    }
    for r in rates_slight {
        out.push((rate_track(r), BleedSeverity::Slight));
    }
    for _ in 0..6 {
        out.push((rate_track(0.0), BleedSeverity::None));
    }
    out
}

fn rate_track(rate: Real) -> Vec<(Real, BodyRegion, Real)> {
    (0..11)
        .map(|i| {
            let t = i as Real;
            (t, BodyRegion::Body, 2e-3 + rate * t)
        })
        .collect()
}

/// Classify the cyanosis fixtures under the noise model; returns accuracy.
pub fn cyanosis_accuracy(noise: &TriageNoise, cfg: &TriageConfig, seed: u64) -> Real {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fixtures = cyanosis_fixtures();
    let correct = fixtures
        .iter()
        .filter(|(b, label)| assess_cyanosis(noise.blueness(*b, &mut rng), cfg) == *label)
        .count();
    correct as Real / fixtures.len() as Real
}

pub fn airway_accuracy(noise: &TriageNoise, cfg: &TriageConfig, seed: u64) -> Real {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fixtures = airway_fixtures();
    let correct = fixtures
        .iter()
        .filter(|((pitch, orientation), label)| {
            let p = noise.pitch(*pitch, &mut rng);
            let o = noise.orientation(*orientation, &mut rng);
            assess_airway(p, o, cfg) == *label
        })
        .count();
    correct as Real / fixtures.len() as Real
}

pub fn breathing_accuracy(noise: &TriageNoise, cfg: &TriageConfig, seed: u64) -> Real {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fixtures = breathing_fixtures();
    let correct = fixtures
        .iter()
        .filter(|(intervals, window, label)| {
            let observed = noise.intervals(intervals, &mut rng);
            assess_breathing(&observed, *window, cfg).unwrap() == *label
        })
        .count();
    correct as Real / fixtures.len() as Real
}

pub fn bleeding_location_accuracy(noise: &TriageNoise, cfg: &TriageConfig, seed: u64) -> Real {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fixtures = bleeding_location_fixtures();
    let correct = fixtures
        .iter()
        .filter(|(track, label)| {
            let observed: Vec<(Real, BodyRegion, Real)> = track
                .iter()
                .map(|(t, r, a)| (*t, *r, noise.area(*a, &mut rng)))
                .collect();
            super::vitals::assess_bleeding(&observed, cfg).unwrap().location == Some(*label)
        })
        .count();
    correct as Real / fixtures.len() as Real
}

pub fn bleeding_rate_accuracy(noise: &TriageNoise, cfg: &TriageConfig, seed: u64) -> Real {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fixtures = bleeding_rate_fixtures();
    let correct = fixtures
        .iter()
        .filter(|(track, label)| {
            let observed: Vec<(Real, BodyRegion, Real)> = track
                .iter()
                .map(|(t, r, a)| (*t, *r, noise.area(*a, &mut rng)))
                .collect();
            super::vitals::assess_bleeding(&observed, cfg).unwrap().severity == *label
        })
        .count();
    correct as Real / fixtures.len() as Real
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_free_accuracy_is_exact_for_all_classifiers() {
        let noise = TriageNoise::disabled();
        let cfg = TriageConfig::default();
        assert_eq!(cyanosis_accuracy(&noise, &cfg, 1), 1.0);
        assert_eq!(airway_accuracy(&noise, &cfg, 1), 1.0);
        assert_eq!(breathing_accuracy(&noise, &cfg, 1), 1.0);
        assert_eq!(bleeding_location_accuracy(&noise, &cfg, 1), 1.0);
        assert_eq!(bleeding_rate_accuracy(&noise, &cfg, 1), 1.0);
    }

    #[test]
    fn noisy_accuracies_meet_reported_floors() {
        let noise = TriageNoise::default();
        let cfg = TriageConfig::default();
        let cyanosis = cyanosis_accuracy(&noise, &cfg, 2024);
        let airway = airway_accuracy(&noise, &cfg, 2024);
        let breathing = breathing_accuracy(&noise, &cfg, 2024);
        let location = bleeding_location_accuracy(&noise, &cfg, 2024);
        let rate = bleeding_rate_accuracy(&noise, &cfg, 2024);
        assert!(cyanosis >= 0.65, "cyanosis {cyanosis}");
        assert!(airway >= 0.75, "airway {airway}");
        assert!(breathing >= 0.85, "breathing {breathing}");
        assert!(location >= 0.97, "location {location}");
        assert!(rate >= 0.85, "rate {rate}");
        let overall = (cyanosis + airway + breathing + (location + rate) / 2.0) / 4.0;
        assert!(overall >= 0.78, "overall {overall}");
    }

    #[test]
    fn fixture_counts_match_the_design() {
        assert_eq!(cyanosis_fixtures().len(), 40);
        assert_eq!(airway_fixtures().len(), 40);
        assert_eq!(breathing_fixtures().len(), 40);
        assert_eq!(bleeding_location_fixtures().len(), 36);
        assert_eq!(bleeding_rate_fixtures().len(), 18);
    }
}
