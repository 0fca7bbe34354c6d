//! Rule-based vital-sign classification: circulation from hand blueness,
//! airway from chin pose, breathing from detected breath intervals, bleeding
//! from the growth of red regions, and an overall red/yellow/green priority.
//!
//! Every classifier is a deterministic threshold function; all thresholds
//! live in [`TriageConfig`].

use serde::{Deserialize, Serialize};

use crate::triage::TriageError;
use crate::world::agent::{BodyRegion, FaceOrientation};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Circulation {
    Normal,
    Cyanotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Airway {
    Open,
    ObstructedRisk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Breathing {
    Normal,
    Fast,
    Slow,
    Agonal,
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BleedSeverity {
    Massive,
    Slight,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BleedingVerdict {
    pub location: Option<BodyRegion>,
    pub severity: BleedSeverity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Priority {
    Green,
    Yellow,
    Red,
}

/// Complete per-sign triage classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VitalsReport {
    pub circulation: Circulation,
    pub airway: Airway,
    pub breathing: Breathing,
    pub bleeding: BleedingVerdict,
    pub priority: Priority,
}

/// Clinical thresholds; defaults motivated by first-aid conventions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TriageConfig {
    /// Blueness ratio at or above this is cyanotic.
    pub blueness_threshold: Real,
    /// Chin pitch at or above this (degrees, chin up) keeps the airway open.
    pub pitch_open_deg: Real,
    /// Breaths per minute above this is fast.
    pub rate_fast: Real,
    /// Breaths per minute below this is slow.
    pub rate_slow: Real,
    /// Interval coefficient of variation above this (with a slow rate) is agonal.
    pub cv_agonal: Real,
    /// Expansion rate at or above this is massive bleeding, m^2/s.
    pub bleed_rate_massive: Real,
    /// Pools smaller than this do not count as bleeding, m^2.
    pub bleed_area_min: Real,
    /// Minimum breathing observation window, seconds.
    pub min_window_s: Real,
}

impl Default for TriageConfig {
    fn default() -> Self {
        TriageConfig {
            blueness_threshold: 0.3,
            pitch_open_deg: 10.0,
            rate_fast: 25.0,
            rate_slow: 8.0,
            cv_agonal: 0.6,
            bleed_rate_massive: 5e-4, // 5 cm^2/s
            bleed_area_min: 1e-4,
            min_window_s: 15.0,
        }
    }
}

/// Relative blueness in the distal hands against the threshold.
pub fn assess_cyanosis(blueness: Real, cfg: &TriageConfig) -> Circulation {
    debug_assert!((0.0..=1.0).contains(&blueness));
    if blueness >= cfg.blueness_threshold {
        Circulation::Cyanotic
    } else {
        Circulation::Normal
    }
}

/// Open airway requires the chin up and the face not turned down.
pub fn assess_airway(chin_pitch_deg: Real, orientation: FaceOrientation, cfg: &TriageConfig) -> Airway {
    debug_assert!((-90.0..=90.0).contains(&chin_pitch_deg));
    if chin_pitch_deg >= cfg.pitch_open_deg && orientation != FaceOrientation::Down {
        Airway::Open
    } else {
        Airway::ObstructedRisk
    }
}

/// Breathing from detected breath intervals over an observation window.
///
/// Absent without breaths; otherwise the rate is 60 over the mean interval,
/// fast above `rate_fast`, agonal when highly irregular and slow, slow below
/// `rate_slow`, normal in between.
pub fn assess_breathing(
    intervals: &[Real],
    window_s: Real,
    cfg: &TriageConfig,
) -> Result<Breathing, TriageError> {
    if window_s < cfg.min_window_s {
        return Err(TriageError::WindowTooShort { got: window_s, min: cfg.min_window_s });
    }
    if intervals.is_empty() {
        return Ok(Breathing::Absent);
    }
    let n = intervals.len() as Real;
    let mean = intervals.iter().sum::<Real>() / n;
    let rate = 60.0 / mean;
    let var = intervals.iter().map(|x| (x - mean) * (x - mean)).sum::<Real>() / n;
    let cv = var.sqrt() / mean;
    Ok(if rate > cfg.rate_fast {
        Breathing::Fast
    } else if rate < cfg.rate_slow && cv > cfg.cv_agonal {
        Breathing::Agonal
    } else if rate < cfg.rate_slow {
        Breathing::Slow
    } else {
        Breathing::Normal
    })
}

/// Bleeding from the tracked red regions: the location is the region with
/// the largest final area (none when all pools are below the minimum), the
/// severity follows that region's expansion rate.
pub fn assess_bleeding(
    red_track: &[(Real, BodyRegion, Real)],
    cfg: &TriageConfig,
) -> Result<BleedingVerdict, TriageError> {
    if red_track.is_empty() {
        return Err(TriageError::EmptyTrack);
    }
    let regions = [
        BodyRegion::Head,
        BodyRegion::Body,
        BodyRegion::LeftArm,
        BodyRegion::RightArm,
        BodyRegion::LeftLeg,
        BodyRegion::RightLeg,
    ];
    let mut best: Option<(BodyRegion, Real)> = None;
    for region in regions {
        let samples: Vec<&(Real, BodyRegion, Real)> =
            red_track.iter().filter(|(_, r, _)| *r == region).collect();
        let final_area = samples.last().map(|(_, _, a)| *a).unwrap_or(0.0);
        if final_area >= cfg.bleed_area_min && best.map_or(true, |(_, a)| final_area > a) {
            best = Some((region, final_area));
        }
    }
    let Some((location, _)) = best else {
        return Ok(BleedingVerdict { location: None, severity: BleedSeverity::None });
    };
    let samples: Vec<&(Real, BodyRegion, Real)> =
        red_track.iter().filter(|(_, r, _)| *r == location).collect();
    let rate = if samples.len() >= 2 {
        let (t0, _, a0) = samples.first().unwrap();
        let (t1, _, a1) = samples.last().unwrap();
        if t1 - t0 > 0.0 {
            (a1 - a0) / (t1 - t0)
        } else {
            0.0
        }
    } else {
        0.0
    };
    let severity = if rate >= cfg.bleed_rate_massive {
        BleedSeverity::Massive
    } else if rate > 0.0 {
        BleedSeverity::Slight
    } else {
        BleedSeverity::None
    };
    Ok(BleedingVerdict { location: Some(location), severity })
}

/// Aggregate the four verdicts into a priority.
///
/// Red: absent or agonal breathing, massive bleeding, or cyanosis together
/// with an airway at risk. Yellow: any other non-normal finding. Green:
/// everything normal.
pub fn triage_report(
    circulation: Circulation,
    airway: Airway,
    breathing: Breathing,
    bleeding: BleedingVerdict,
) -> VitalsReport {
    let red = matches!(breathing, Breathing::Absent | Breathing::Agonal)
        || bleeding.severity == BleedSeverity::Massive
        || (circulation == Circulation::Cyanotic && airway == Airway::ObstructedRisk);
    let any_finding = circulation == Circulation::Cyanotic
        || airway == Airway::ObstructedRisk
        || breathing != Breathing::Normal
        || bleeding.severity != BleedSeverity::None
        || bleeding.location.is_some();
    let priority = if red {
        Priority::Red
    } else if any_finding {
        Priority::Yellow
    } else {
        Priority::Green
    };
    VitalsReport { circulation, airway, breathing, bleeding, priority }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> TriageConfig {
        TriageConfig::default()
    }

    #[test]
    fn cyanosis_extremes() {
        assert_eq!(assess_cyanosis(0.0, &cfg()), Circulation::Normal);
        assert_eq!(assess_cyanosis(1.0, &cfg()), Circulation::Cyanotic);
        assert_eq!(assess_cyanosis(0.3, &cfg()), Circulation::Cyanotic);
    }

    #[test]
    fn airway_rules() {
        assert_eq!(assess_airway(30.0, FaceOrientation::Front, &cfg()), Airway::Open);
        assert_eq!(assess_airway(30.0, FaceOrientation::Down, &cfg()), Airway::ObstructedRisk);
        assert_eq!(assess_airway(-5.0, FaceOrientation::Front, &cfg()), Airway::ObstructedRisk);
        assert_eq!(assess_airway(10.0, FaceOrientation::Side, &cfg()), Airway::Open);
    }

    #[test]
    fn breathing_rules() {
        let four_second = vec![4.0; 5];
        assert_eq!(assess_breathing(&four_second, 20.0, &cfg()).unwrap(), Breathing::Normal);
        assert_eq!(assess_breathing(&[], 20.0, &cfg()).unwrap(), Breathing::Absent);
        let fast = vec![1.8; 10];
        assert_eq!(assess_breathing(&fast, 20.0, &cfg()).unwrap(), Breathing::Fast);
        let slow = vec![9.0, 8.8, 9.2];
        assert_eq!(assess_breathing(&slow, 27.0, &cfg()).unwrap(), Breathing::Slow);
        let agonal = vec![2.0, 18.0, 3.0, 22.0];
        assert_eq!(assess_breathing(&agonal, 45.0, &cfg()).unwrap(), Breathing::Agonal);
    }

    #[test]
    fn breathing_window_too_short() {
        assert!(matches!(
            assess_breathing(&[4.0], 10.0, &cfg()),
            Err(TriageError::WindowTooShort { .. })
        ));
    }

    #[test]
    fn bleeding_rules() {
        // all areas zero
        let track: Vec<(f64, BodyRegion, f64)> =
            vec![(0.0, BodyRegion::Head, 0.0), (1.0, BodyRegion::Head, 0.0)];
        let v = assess_bleeding(&track, &cfg()).unwrap();
        assert_eq!(v.location, None);
        assert_eq!(v.severity, BleedSeverity::None);

        // left leg growing at 10 cm^2/s
        let track: Vec<(f64, BodyRegion, f64)> = (0..10)
            .map(|i| (i as f64, BodyRegion::LeftLeg, 1e-3 * (1.0 + i as f64)))
            .collect();
        let v = assess_bleeding(&track, &cfg()).unwrap();
        assert_eq!(v.location, Some(BodyRegion::LeftLeg));
        assert_eq!(v.severity, BleedSeverity::Massive);

        // static pool: located but not expanding
        let track: Vec<(f64, BodyRegion, f64)> =
            vec![(0.0, BodyRegion::Body, 3e-3), (5.0, BodyRegion::Body, 3e-3)];
        let v = assess_bleeding(&track, &cfg()).unwrap();
        assert_eq!(v.location, Some(BodyRegion::Body));
        assert_eq!(v.severity, BleedSeverity::None);

        assert!(matches!(assess_bleeding(&[], &cfg()), Err(TriageError::EmptyTrack)));
    }

    #[test]
    fn report_trivials() {
        let clean = BleedingVerdict { location: None, severity: BleedSeverity::None };
        let all_normal = triage_report(Circulation::Normal, Airway::Open, Breathing::Normal, clean);
        assert_eq!(all_normal.priority, Priority::Green);

        let absent = triage_report(Circulation::Normal, Airway::Open, Breathing::Absent, clean);
        assert_eq!(absent.priority, Priority::Red);

        let slight = BleedingVerdict { location: Some(BodyRegion::Head), severity: BleedSeverity::Slight };
        let yellow = triage_report(Circulation::Normal, Airway::Open, Breathing::Normal, slight);
        assert_eq!(yellow.priority, Priority::Yellow);

        let both = triage_report(Circulation::Cyanotic, Airway::ObstructedRisk, Breathing::Normal, clean);
        assert_eq!(both.priority, Priority::Red);
    }
}
