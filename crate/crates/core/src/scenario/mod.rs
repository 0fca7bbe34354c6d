//! Runnable end-to-end scenarios: config parsing, the
//! dispatch-dialogue-triage-helpfind pipeline, the event log, and metrics.

pub mod config;
pub mod log;
pub mod metrics;
pub mod run;

use thiserror::Error;

pub use config::{
    AgentConfig, DetectionConfig, DialogueConfig, HelperConfig, Mission, PlanningConfig,
    RobotConfig, ScenarioConfig, TriageSection,
};
pub use log::{EventLog, Record};
pub use metrics::{aggregate, compute_metrics, metrics_from_jsonl, BatchMetrics, GroundTruth, RunMetrics};
pub use run::{dialogue_exchange, derive_ground_truth, needs_help, run_scenario, true_report, Decision, DialogueOutcome};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config error: {what}")]
    Config { what: String },
    #[error("runtime failure: {what}")]
    Runtime { what: String },
    #[error("malformed record at line {line}: {what}")]
    Metrics { line: usize, what: String },
}
