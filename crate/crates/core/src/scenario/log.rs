//! JSON-lines event log. Every record carries its timestamp and the
//! emitting module name; timestamps never decrease. Serialization is fully
//! deterministic: equal runs produce byte-identical logs.

use serde_json::{json, Value};

use crate::detect::{Direction, Side};
use crate::scenario::run::Decision;
use crate::triage::VitalsReport;
use crate::world::map::Cell;
use crate::world::FallDirection;
use crate::Real;

/// One log record. Sensor records serialize to the central-database format
/// `{"t":..., "id":..., "kind":..., "value":...}` (plus the module field).
#[derive(Debug, Clone, PartialEq)]
pub enum Record {
    Sensor { t: Real, id: String, kind: String, value: bool },
    BreathTransition { t: Real, to: String, reading: Real },
    ChangePoint { t: Real, index: u64, direction: Direction },
    Presence { t: Real, present: bool, side: Side },
    AnomalyVerdict { t: Real, anomalous: bool, room: String, score: Real },
    FallenCandidate { t: Real, x: Real, y: Real, confidence: Real },
    FallDirectionCall { t: Real, agent: String, direction: Option<FallDirection> },
    Dispatch { t: Real, room: String, target: Cell },
    PathRecord { t: Real, cells: Vec<Cell>, cost_s: Real },
    Arrival { t: Real, x: Real, y: Real },
    Dialogue { t: Real, agent: String, decision: Decision, responded: bool, heard_correct: Option<bool> },
    EmsCall { t: Real },
    StandDown { t: Real },
    TriageReport { t: Real, agent: String, report: VitalsReport },
    Tour { t: Real, nodes: Vec<String>, reward: Real, cost_s: Real, budget_s: Real },
    Visit { t: Real, node: String },
    Playful { t: Real, peak_deviation: Real, helpful: bool, safe: bool, clear: bool },
    RunEnd { t: Real },
}

impl Record {
    pub fn t(&self) -> Real {
        match self {
            Record::Sensor { t, .. }
            | Record::BreathTransition { t, .. }
            | Record::ChangePoint { t, .. }
            | Record::Presence { t, .. }
            | Record::AnomalyVerdict { t, .. }
            | Record::FallenCandidate { t, .. }
            | Record::FallDirectionCall { t, .. }
            | Record::Dispatch { t, .. }
            | Record::PathRecord { t, .. }
            | Record::Arrival { t, .. }
            | Record::Dialogue { t, .. }
            | Record::EmsCall { t }
            | Record::StandDown { t }
            | Record::TriageReport { t, .. }
            | Record::Tour { t, .. }
            | Record::Visit { t, .. }
            | Record::Playful { t, .. }
            | Record::RunEnd { t } => *t,
        }
    }

    pub fn module(&self) -> &'static str {
        match self {
            Record::Sensor { .. } => "sensors",
            Record::BreathTransition { .. }
            | Record::ChangePoint { .. }
            | Record::Presence { .. }
            | Record::AnomalyVerdict { .. }
            | Record::FallenCandidate { .. }
            | Record::FallDirectionCall { .. } => "detect",
            Record::Dispatch { .. } | Record::PathRecord { .. } | Record::Tour { .. } => "plan",
            Record::Arrival { .. } | Record::Visit { .. } | Record::RunEnd { .. } => "scenario",
            Record::Dialogue { .. } | Record::EmsCall { .. } | Record::StandDown { .. } => {
                "dialogue"
            }
            Record::TriageReport { .. } => "triage",
            Record::Playful { .. } => "motion",
        }
    }

    pub fn to_json(&self) -> Value {
        let module = self.module();
        match self {
            Record::Sensor { t, id, kind, value } => {
                json!({"t": t, "id": id, "kind": kind, "value": value, "module": module})
            }
            Record::BreathTransition { t, to, reading } => {
                json!({"t": t, "module": module, "kind": "breath_transition", "to": to, "reading": reading})
            }
            Record::ChangePoint { t, index, direction } => {
                json!({"t": t, "module": module, "kind": "change_point", "index": index,
                       "direction": format!("{direction:?}")})
            }
            Record::Presence { t, present, side } => {
                json!({"t": t, "module": module, "kind": "presence", "present": present,
                       "side": format!("{side:?}")})
            }
            Record::AnomalyVerdict { t, anomalous, room, score } => {
                json!({"t": t, "module": module, "kind": "anomaly_verdict",
                       "anomalous": anomalous, "room": room, "score": score})
            }
            Record::FallenCandidate { t, x, y, confidence } => {
                json!({"t": t, "module": module, "kind": "fallen_candidate",
                       "x": x, "y": y, "confidence": confidence})
            }
            Record::FallDirectionCall { t, agent, direction } => {
                json!({"t": t, "module": module, "kind": "fall_direction", "agent": agent,
                       "direction": direction.map(|d| format!("{d:?}"))})
            }
            Record::Dispatch { t, room, target } => {
                json!({"t": t, "module": module, "kind": "dispatch", "room": room,
                       "target": [target.x, target.y]})
            }
            Record::PathRecord { t, cells, cost_s } => {
                let cell_list: Vec<[usize; 2]> = cells.iter().map(|c| [c.x, c.y]).collect();
                json!({"t": t, "module": module, "kind": "path", "cells": cell_list, "cost_s": cost_s})
            }
            Record::Arrival { t, x, y } => {
                json!({"t": t, "module": module, "kind": "arrival", "x": x, "y": y})
            }
            Record::Dialogue { t, agent, decision, responded, heard_correct } => {
                json!({"t": t, "module": module, "kind": "dialogue", "agent": agent,
                       "decision": format!("{decision:?}"), "responded": responded,
                       "heard_correct": heard_correct})
            }
            Record::EmsCall { t } => json!({"t": t, "module": module, "kind": "ems_call"}),
            Record::StandDown { t } => json!({"t": t, "module": module, "kind": "stand_down"}),
            Record::TriageReport { t, agent, report } => {
                json!({"t": t, "module": module, "kind": "triage_report", "agent": agent,
                       "circulation": format!("{:?}", report.circulation),
                       "airway": format!("{:?}", report.airway),
                       "breathing": format!("{:?}", report.breathing),
                       "bleeding_location": report.bleeding.location.map(|r| format!("{r:?}")),
                       "bleeding_severity": format!("{:?}", report.bleeding.severity),
                       "priority": format!("{:?}", report.priority)})
            }
            Record::Tour { t, nodes, reward, cost_s, budget_s } => {
                json!({"t": t, "module": module, "kind": "tour", "nodes": nodes,
                       "reward": reward, "cost_s": cost_s, "budget_s": budget_s})
            }
            Record::Visit { t, node } => {
                json!({"t": t, "module": module, "kind": "visit", "node": node})
            }
            Record::Playful { t, peak_deviation, helpful, safe, clear } => {
                json!({"t": t, "module": module, "kind": "playful_motion",
                       "peak_deviation": peak_deviation, "helpful": helpful,
                       "safe": safe, "clear": clear})
            }
            Record::RunEnd { t } => json!({"t": t, "module": module, "kind": "run_end"}),
        }
    }
}

/// Ordered JSON-lines log.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventLog {
    records: Vec<Record>,
}

impl EventLog {
    pub fn new() -> Self {
        EventLog { records: Vec::new() }
    }

    pub fn push(&mut self, record: Record) {
        if let Some(last) = self.records.last() {
            debug_assert!(record.t() >= last.t() - 1e-9, "timestamps must not decrease");
        }
        self.records.push(record);
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_json().to_string());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sensor_record_uses_the_central_database_format() {
        let r = Record::Sensor { t: 1.5, id: "bed_pressure".into(), kind: "pressure".into(), value: true };
        let line = r.to_json().to_string();
        assert!(line.starts_with(r#"{"t":1.5,"id":"bed_pressure","kind":"pressure","value":true"#));
        assert!(line.contains(r#""module":"sensors""#));
    }

    #[test]
    fn every_record_kind_carries_module_and_t() {
        let records = vec![
            Record::EmsCall { t: 3.0 },
            Record::Dispatch { t: 1.0, room: "bedroom".into(), target: Cell::new(5, 6) },
            Record::RunEnd { t: 10.0 },
        ];
        for r in records {
            let v = r.to_json();
            assert!(v.get("module").is_some());
            assert!(v.get("t").is_some());
        }
    }

    #[test]
    fn jsonl_is_one_line_per_record() {
        let mut log = EventLog::new();
        log.push(Record::EmsCall { t: 1.0 });
        log.push(Record::RunEnd { t: 2.0 });
        assert_eq!(log.to_jsonl().lines().count(), 2);
    }
}
