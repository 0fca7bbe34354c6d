//! Aggregation of raw sensor events into per-room anomaly features.

use serde::{Deserialize, Serialize};

use crate::sensors::SensorEvent;
use crate::world::map::SensorKind;
use crate::world::HomeMap;
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeBucket {
    Night,
    Morning,
    Day,
    Evening,
}

impl TimeBucket {
    /// Bucket for an hour-of-day in [0, 24).
    pub fn from_hour(hour: Real) -> TimeBucket {
        let h = hour.rem_euclid(24.0);
        if (6.0..12.0).contains(&h) {
            TimeBucket::Morning
        } else if (12.0..17.0).contains(&h) {
            TimeBucket::Day
        } else if (17.0..21.0).contains(&h) {
            TimeBucket::Evening
        } else {
            TimeBucket::Night
        }
    }

    pub fn ordinal(self) -> usize {
        match self {
            TimeBucket::Night => 0,
            TimeBucket::Morning => 1,
            TimeBucket::Day => 2,
            TimeBucket::Evening => 3,
        }
    }
}

/// Activity of one room over the feature window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomFeatures {
    pub room: String,
    /// Seconds an agent sat or lay on a pressure sensor in this room.
    pub pressure_dwell_s: Real,
    pub contact_open_count: Real,
    /// Fraction of window steps with PIR motion in this room.
    pub pir_activity_fraction: Real,
}

/// Classifier input: per-room activity plus the time-of-day bucket and the
/// time since motion was last seen anywhere. Rooms are ordered by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnomalyFeatureVector {
    pub rooms: Vec<RoomFeatures>,
    pub time_bucket: TimeBucket,
    pub seconds_since_motion: Real,
}

impl AnomalyFeatureVector {
    /// Flatten to a numeric vector: [dwell, opens, pir] per room, then the
    /// bucket ordinal and the seconds since motion.
    pub fn to_vec(&self) -> Vec<Real> {
        let mut v = Vec::with_capacity(self.rooms.len() * 3 + 2);
        for r in &self.rooms {
            v.push(r.pressure_dwell_s);
            v.push(r.contact_open_count);
            v.push(r.pir_activity_fraction);
        }
        v.push(self.time_bucket.ordinal() as Real);
        v.push(self.seconds_since_motion);
        v
    }

    pub fn feature_len(n_rooms: usize) -> usize {
        n_rooms * 3 + 2
    }

    /// All features finite and non-negative.
    pub fn is_valid(&self) -> bool {
        self.to_vec().iter().all(|x| x.is_finite() && *x >= 0.0)
    }
}

/// Extraction parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    /// Trailing window length, seconds.
    pub window_s: Real,
    /// World step used to convert event counts to seconds.
    pub dt: Real,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig { window_s: 300.0, dt: 0.1 }
    }
}

/// Aggregate the events of the trailing window into a feature vector.
///
/// `start_hour` is the wall-clock hour at world clock zero, so the bucket
/// reflects the scenario's time of day.
pub fn extract_features(
    events: &[SensorEvent],
    map: &HomeMap,
    clock: Real,
    start_hour: Real,
    cfg: &FeatureConfig,
) -> AnomalyFeatureVector {
    let mut room_names: Vec<String> = map.rooms.iter().map(|r| r.name.clone()).collect();
    room_names.sort();
    let mut rooms: Vec<RoomFeatures> = room_names
        .iter()
        .map(|name| RoomFeatures {
            room: name.clone(),
            pressure_dwell_s: 0.0,
            contact_open_count: 0.0,
            pir_activity_fraction: 0.0,
        })
        .collect();

    let window_start = clock - cfg.window_s;
    let mut last_motion: Option<Real> = None;
    for e in events {
        if e.t < window_start - 1e-9 || e.t > clock + 1e-9 {
            continue;
        }
        let room = match map.sensor_room(&e.id) {
            Some(r) => r.name.clone(),
            None => continue,
        };
        let slot = rooms.iter_mut().find(|r| r.room == room).expect("room listed");
        match e.kind {
            SensorKind::Pressure => {
                if e.value {
                    slot.pressure_dwell_s += cfg.dt;
                }
            }
            SensorKind::Contact => {
                if e.value {
                    slot.contact_open_count += 1.0;
                }
            }
            SensorKind::Pir => {
                if e.value {
                    slot.pir_activity_fraction += cfg.dt / cfg.window_s;
                    last_motion = Some(last_motion.map_or(e.t, |m: Real| m.max(e.t)));
                }
            }
        }
    }

    let seconds_since_motion = match last_motion {
        Some(t) => (clock - t).max(0.0),
        None => cfg.window_s,
    };
    let hour = start_hour + clock / 3600.0;
    AnomalyFeatureVector {
        rooms,
        time_bucket: TimeBucket::from_hour(hour),
        seconds_since_motion,
    }
}
