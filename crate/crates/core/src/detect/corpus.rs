//! Labeled scenario corpus for training and evaluating the anomaly forest:
//! normal days plus three anomaly archetypes (long pressure dwell, night
//! exit, redundant cooking), synthesized deterministically from a seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::detect::features::{AnomalyFeatureVector, RoomFeatures, TimeBucket};
use crate::Real;

/// Rooms of the bundled apartment, sorted, as the feature layout expects.
pub const CORPUS_ROOMS: [&str; 4] = ["bathroom", "bedroom", "hallway", "kitchen"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusParams {
    pub n_normal: usize,
    pub n_long_dwell: usize,
    pub n_night_exit: usize,
    pub n_cooking: usize,
    pub seed: u64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams { n_normal: 120, n_long_dwell: 40, n_night_exit: 40, n_cooking: 40, seed: 4242 }
    }
}

fn blank_rooms() -> Vec<RoomFeatures> {
    CORPUS_ROOMS
        .iter()
        .map(|name| RoomFeatures {
            room: (*name).to_string(),
            pressure_dwell_s: 0.0,
            contact_open_count: 0.0,
            pir_activity_fraction: 0.0,
        })
        .collect()
}

fn day_bucket(rng: &mut ChaCha8Rng) -> TimeBucket {
    match rng.gen_range(0..3) {
        0 => TimeBucket::Morning,
        1 => TimeBucket::Day,
        _ => TimeBucket::Evening,
    }
}

/// Synthesize the labeled corpus: `(features, anomalous)` pairs.
///
/// Normal days come in three flavors (active, nobody moving, and sleeping on
/// the bed at night), so that inactivity alone never reads as an emergency.
pub fn generate_corpus(params: &CorpusParams) -> Vec<(AnomalyFeatureVector, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut out = Vec::new();

    let n_active = params.n_normal / 2;
    let n_quiet = params.n_normal / 4;
    let n_sleep = params.n_normal - n_active - n_quiet;

    for _ in 0..n_active {
        // a person occupies one or two rooms at a time
        let mut rooms = blank_rooms();
        let here = rng.gen_range(0..rooms.len());
        rooms[here].pir_activity_fraction = rng.gen_range(0.02..0.35);
        if rng.gen_bool(0.5) {
            let also = rng.gen_range(0..rooms.len());
            rooms[also].pir_activity_fraction = rng.gen_range(0.01..0.2);
        }
        // ordinary sitting or lying, never very long
        let idx = rng.gen_range(0..rooms.len());
        rooms[idx].pressure_dwell_s = rng.gen_range(0.0..100.0);
        rooms[3].contact_open_count = rng.gen_range(0..=3) as Real;
        out.push((
            AnomalyFeatureVector {
                rooms,
                time_bucket: day_bucket(&mut rng),
                seconds_since_motion: rng.gen_range(0.0..60.0),
            },
            false,
        ));
    }

    for i in 0..n_quiet {
        // still or nearly still house: little to no motion is not an
        // emergency by itself
        let mut rooms = blank_rooms();
        for r in &mut rooms {
            r.pir_activity_fraction = rng.gen_range(0.0..0.02);
        }
        let bucket = if i % 3 == 0 { TimeBucket::Night } else { day_bucket(&mut rng) };
        out.push((
            AnomalyFeatureVector {
                rooms,
                time_bucket: bucket,
                seconds_since_motion: rng.gen_range(0.0..300.0),
            },
            false,
        ));
    }

    for _ in 0..n_sleep {
        // asleep on the bed pressure sensor at night
        let mut rooms = blank_rooms();
        rooms[1].pressure_dwell_s = rng.gen_range(150.0..300.0); // bedroom
        for r in &mut rooms {
            r.pir_activity_fraction = rng.gen_range(0.0..0.03);
        }
        out.push((
            AnomalyFeatureVector {
                rooms,
                time_bucket: TimeBucket::Night,
                seconds_since_motion: rng.gen_range(30.0..300.0),
            },
            false,
        ));
    }

    for _ in 0..params.n_long_dwell {
        // fell and stayed down: long dwell outside the night-bed pattern
        let mut rooms = blank_rooms();
        let idx = rng.gen_range(0..rooms.len());
        rooms[idx].pressure_dwell_s = rng.gen_range(80.0..280.0);
        for r in &mut rooms {
            r.pir_activity_fraction = rng.gen_range(0.0..0.05);
        }
        let bucket = if idx == 1 {
            // a bedroom fall is only distinguishable from sleep by daylight
            day_bucket(&mut rng)
        } else if rng.gen_bool(0.2) {
            TimeBucket::Night
        } else {
            day_bucket(&mut rng)
        };
        out.push((
            AnomalyFeatureVector {
                rooms,
                time_bucket: bucket,
                seconds_since_motion: rng.gen_range(60.0..300.0),
            },
            true,
        ));
    }

    for _ in 0..params.n_night_exit {
        let mut rooms = blank_rooms();
        rooms[2].pir_activity_fraction = rng.gen_range(0.05..0.3); // hallway
        rooms[2].contact_open_count = rng.gen_range(1..=2) as Real; // front door
        out.push((
            AnomalyFeatureVector {
                rooms,
                time_bucket: TimeBucket::Night,
                seconds_since_motion: rng.gen_range(0.0..20.0),
            },
            true,
        ));
    }

    for _ in 0..params.n_cooking {
        let mut rooms = blank_rooms();
        rooms[3].contact_open_count = rng.gen_range(4..=9) as Real; // kitchen
        rooms[3].pir_activity_fraction = rng.gen_range(0.1..0.4);
        for r in rooms.iter_mut().take(3) {
            r.pir_activity_fraction = rng.gen_range(0.0..0.1);
        }
        out.push((
            AnomalyFeatureVector {
                rooms,
                time_bucket: day_bucket(&mut rng),
                seconds_since_motion: rng.gen_range(0.0..30.0),
            },
            true,
        ));
    }
    out
}

/// Deliberately coarse hand rules; the oracle floor the forest must beat.
pub fn rule_baseline(fv: &AnomalyFeatureVector) -> bool {
    let max_dwell = fv
        .rooms
        .iter()
        .map(|r| r.pressure_dwell_s)
        .fold(Real::NEG_INFINITY, Real::max);
    let max_opens = fv
        .rooms
        .iter()
        .map(|r| r.contact_open_count)
        .fold(Real::NEG_INFINITY, Real::max);
    (max_dwell > 150.0 && fv.time_bucket != TimeBucket::Night)
        || (fv.time_bucket == TimeBucket::Night && max_opens >= 1.0)
        || max_opens >= 5.0
}
