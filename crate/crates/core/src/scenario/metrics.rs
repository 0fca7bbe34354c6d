//! Deterministic aggregation of event logs into run metrics, plus batch
//! aggregation across seeds.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::scenario::log::{EventLog, Record};
use crate::scenario::run::Decision;
use crate::scenario::ScenarioError;
use crate::triage::VitalsReport;
use crate::Real;

/// What a scenario's config implies about the right answers.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// When the scripted incident (first fall) happens.
    pub incident_at: Option<Real>,
    /// Whether the victim's vitals warrant help.
    pub victim_needs_help: Option<bool>,
    /// The helper a perfect perception pipeline would pick first.
    pub best_helper: Option<String>,
    /// Noise-free triage reports per agent.
    pub true_reports: BTreeMap<String, VitalsReport>,
}

/// One dispatch -> arrival measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrivalStat {
    pub room: String,
    pub seconds: Real,
}

/// Per-run metrics. Times are seconds from the measured anchor.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunMetrics {
    pub duration_s: Real,
    /// First anomalous verdict minus the true incident time.
    pub time_to_detect_s: Option<Real>,
    /// First timed dispatch -> arrival interval (bathroom dispatches are
    /// excluded from timing, mirroring the evaluation protocol).
    pub time_to_arrive_s: Option<Real>,
    pub arrivals: Vec<ArrivalStat>,
    pub dialogue_outcome_correct: Option<bool>,
    /// Fraction of the four triage verdicts matching the noise-free truth.
    pub triage_accuracy: Option<Real>,
    pub help_target_correct: Option<bool>,
}

/// Rooms excluded from arrival timing by default: the robot starts next to
/// the bathroom and only has to turn.
pub const TIMING_EXCLUDED_ROOMS: [&str; 1] = ["bathroom"];

/// Aggregate a typed event log.
pub fn compute_metrics(
    log: &EventLog,
    truth: Option<&GroundTruth>,
    duration_s: Real,
) -> Result<RunMetrics, ScenarioError> {
    let mut metrics = RunMetrics { duration_s, ..RunMetrics::default() };
    let mut open_dispatch: Option<(Real, String)> = None;
    let mut first_verdict_t: Option<Real> = None;
    let mut first_dialogue: Option<Decision> = None;
    let mut first_visit: Option<String> = None;
    let mut triage: Option<(String, VitalsReport)> = None;

    for record in log.records() {
        match record {
            Record::AnomalyVerdict { t, anomalous: true, .. } => {
                first_verdict_t.get_or_insert(*t);
            }
            Record::Dispatch { t, room, .. } => {
                open_dispatch = Some((*t, room.clone()));
            }
            Record::Arrival { t, .. } => {
                if let Some((t0, room)) = open_dispatch.take() {
                    metrics.arrivals.push(ArrivalStat { room, seconds: t - t0 });
                }
            }
            Record::Dialogue { decision, .. } => {
                first_dialogue.get_or_insert(*decision);
            }
            Record::TriageReport { agent, report, .. } => {
                if triage.is_none() {
                    triage = Some((agent.clone(), *report));
                }
            }
            Record::Visit { node, .. } => {
                first_visit.get_or_insert(node.clone());
            }
            _ => {}
        }
    }

    metrics.time_to_arrive_s = metrics
        .arrivals
        .iter()
        .find(|a| !TIMING_EXCLUDED_ROOMS.contains(&a.room.as_str()))
        .map(|a| a.seconds);

    if let Some(truth) = truth {
        if let (Some(v), Some(incident)) = (first_verdict_t, truth.incident_at) {
            metrics.time_to_detect_s = Some(v - incident);
        }
        if let (Some(decision), Some(needs)) = (first_dialogue, truth.victim_needs_help) {
            let called = decision != Decision::StandDown;
            metrics.dialogue_outcome_correct = Some(called == needs);
        }
        if let Some((agent, observed)) = &triage {
            if let Some(expected) = truth.true_reports.get(agent) {
                let mut correct = 0;
                if observed.circulation == expected.circulation {
                    correct += 1;
                }
                if observed.airway == expected.airway {
                    correct += 1;
                }
                if observed.breathing == expected.breathing {
                    correct += 1;
                }
                if observed.bleeding.severity == expected.bleeding.severity {
                    correct += 1;
                }
                metrics.triage_accuracy = Some(correct as Real / 4.0);
            }
        }
        if let (Some(visit), Some(best)) = (&first_visit, &truth.best_helper) {
            metrics.help_target_correct = Some(visit == best);
        }
    }

    for a in &metrics.arrivals {
        if a.seconds < 0.0 || a.seconds > duration_s {
            return Err(ScenarioError::Runtime {
                what: format!("arrival interval {} outside [0, duration]", a.seconds),
            });
        }
    }
    Ok(metrics)
}

/// Aggregates over a batch of runs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BatchMetrics {
    pub runs: usize,
    pub mean_time_to_arrive_s: Option<Real>,
    pub max_time_to_arrive_s: Option<Real>,
    pub timed_arrivals: usize,
    pub dialogue_correct_rate: Option<Real>,
    pub mean_triage_accuracy: Option<Real>,
    pub help_correct_rate: Option<Real>,
}

pub fn aggregate(runs: &[RunMetrics]) -> BatchMetrics {
    let mut arrive: Vec<Real> = Vec::new();
    for r in runs {
        arrive.extend(
            r.arrivals
                .iter()
                .filter(|a| !TIMING_EXCLUDED_ROOMS.contains(&a.room.as_str()))
                .map(|a| a.seconds),
        );
    }
    let dialogue: Vec<bool> = runs.iter().filter_map(|r| r.dialogue_outcome_correct).collect();
    let triage: Vec<Real> = runs.iter().filter_map(|r| r.triage_accuracy).collect();
    let help: Vec<bool> = runs.iter().filter_map(|r| r.help_target_correct).collect();
    let mean = |v: &[Real]| {
        if v.is_empty() {
            None
        } else {
            Some(v.iter().sum::<Real>() / v.len() as Real)
        }
    };
    let rate = |v: &[bool]| {
        if v.is_empty() {
            None
        } else {
            Some(v.iter().filter(|x| **x).count() as Real / v.len() as Real)
        }
    };
    BatchMetrics {
        runs: runs.len(),
        mean_time_to_arrive_s: mean(&arrive),
        max_time_to_arrive_s: arrive.iter().copied().fold(None, |acc: Option<Real>, x| {
            Some(acc.map_or(x, |a| a.max(x)))
        }),
        timed_arrivals: arrive.len(),
        dialogue_correct_rate: rate(&dialogue),
        mean_triage_accuracy: mean(&triage),
        help_correct_rate: rate(&help),
    }
}

/// Recompute metrics from a serialized JSON-lines log (no ground truth).
/// Malformed records are reported with their line number.
pub fn metrics_from_jsonl(text: &str, duration_hint: Option<Real>) -> Result<RunMetrics, ScenarioError> {
    let mut metrics = RunMetrics::default();
    let mut open_dispatch: Option<(Real, String)> = None;
    let mut last_t: Real = 0.0;
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(line).map_err(|e| ScenarioError::Metrics {
            line: line_no + 1,
            what: e.to_string(),
        })?;
        let t = v.get("t").and_then(Value::as_f64).ok_or(ScenarioError::Metrics {
            line: line_no + 1,
            what: "record lacks a numeric t".into(),
        })?;
        last_t = last_t.max(t);
        let kind = v.get("kind").and_then(Value::as_str).unwrap_or_default();
        match kind {
            "dispatch" => {
                let room = v
                    .get("room")
                    .and_then(Value::as_str)
                    .ok_or(ScenarioError::Metrics {
                        line: line_no + 1,
                        what: "dispatch lacks room".into(),
                    })?
                    .to_string();
                open_dispatch = Some((t, room));
            }
            "arrival" => {
                if let Some((t0, room)) = open_dispatch.take() {
                    metrics.arrivals.push(ArrivalStat { room, seconds: t - t0 });
                }
            }
            _ => {}
        }
    }
    metrics.duration_s = duration_hint.unwrap_or(last_t);
    metrics.time_to_arrive_s = metrics
        .arrivals
        .iter()
        .find(|a| !TIMING_EXCLUDED_ROOMS.contains(&a.room.as_str()))
        .map(|a| a.seconds);
    Ok(metrics)
}
