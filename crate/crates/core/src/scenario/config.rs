//! Scenario configuration: the map, agents, schedules, and every tunable of
//! the detection/planning/motion/triage pipeline. Seeds are mandatory; no
//! run ever draws wall-clock entropy.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::detect::{
    BreathConfig, FallConfig, FallenConfig, FeatureConfig, ForestParams, FuseConfig, TrendConfig,
};
use crate::geom::Vec2;
use crate::plan::HelpfulnessConfig;
use crate::scenario::ScenarioError;
use crate::sensors::{GasConfig, PerceptConfig};
use crate::triage::fixtures::TriageNoise;
use crate::triage::TriageConfig;
use crate::world::agent::{Pose, ScriptStep, VitalsProfile};
use crate::world::state::ScheduleEntry;
use crate::world::{load_map, AgentState, HomeMap};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mission {
    /// Watch the sensors, dispatch on anomalies, escalate as needed.
    Monitor,
    /// Start seeking a helper immediately.
    FindHelp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RobotConfig {
    pub start: Vec2,
    pub speed: Real,
}

impl Default for RobotConfig {
    fn default() -> Self {
        RobotConfig { start: Vec2::new(1.45, 2.65), speed: 0.3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    pub id: String,
    pub position: Vec2,
    #[serde(default)]
    pub heading: Real,
    #[serde(default = "default_body_height")]
    pub body_height: Real,
    #[serde(default = "default_face_height")]
    pub face_height_offset: Real,
    #[serde(default = "default_skin_temp")]
    pub skin_temperature: Real,
    /// Seconds between exhalations; null marks absent breathing.
    #[serde(default = "default_breathing")]
    pub breathing_interval: Option<Real>,
    #[serde(default = "default_responsiveness")]
    pub responsiveness: Real,
    #[serde(default = "default_response_delay")]
    pub response_delay: Real,
    #[serde(default)]
    pub vitals: VitalsProfile,
    #[serde(default)]
    pub script: Vec<ScriptStep>,
}

fn default_body_height() -> Real {
    1.7
}
fn default_face_height() -> Real {
    1.55
}
fn default_skin_temp() -> Real {
    33.0
}
fn default_breathing() -> Option<Real> {
    Some(4.0)
}
fn default_responsiveness() -> Real {
    1.0
}
fn default_response_delay() -> Real {
    1.0
}

impl AgentConfig {
    pub fn build(&self) -> AgentState {
        let mut agent = AgentState::new(self.id.clone(), self.position);
        agent.heading = self.heading;
        agent.pose = Pose::Standing;
        agent.body_height = self.body_height;
        agent.face_height_offset = self.face_height_offset;
        agent.skin_temperature = self.skin_temperature;
        agent.breathing_interval = self.breathing_interval;
        agent.responsiveness = self.responsiveness;
        agent.response_delay = self.response_delay;
        agent.vitals_truth = self.vitals;
        agent.script = self.script.clone();
        agent
    }
}

/// A bystander candidate for help-finding; built as a static standing agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HelperConfig {
    pub id: String,
    pub position: Vec2,
    /// Face center height above ground, meters.
    pub face_height: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectionConfig {
    pub breath: BreathConfig,
    pub trend: TrendConfig,
    pub fuse: FuseConfig,
    pub forest: ForestParams,
    pub fallen: FallenConfig,
    pub fall: FallConfig,
    pub features: FeatureConfig,
    /// Anomaly classification cadence, seconds.
    pub classify_every_s: Real,
    /// Gas trend-filter cadence, seconds.
    pub trend_every_s: Real,
    /// Trailing gas window fed to the trend filter, seconds.
    pub trend_window_s: Real,
    /// Laser fallen-scan cadence, seconds.
    pub fallen_scan_every_s: Real,
    /// Suppress re-dispatch for this long after a dispatch, seconds.
    pub redispatch_cooldown_s: Real,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        DetectionConfig {
            breath: BreathConfig::default(),
            trend: TrendConfig::default(),
            fuse: FuseConfig::default(),
            forest: ForestParams::default(),
            fallen: FallenConfig::default(),
            fall: FallConfig::default(),
            features: FeatureConfig::default(),
            classify_every_s: 5.0,
            trend_every_s: 10.0,
            trend_window_s: 60.0,
            fallen_scan_every_s: 5.0,
            redispatch_cooldown_s: 300.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlanningConfig {
    /// Help-finding time budget, seconds.
    pub budget_s: Real,
    pub helpfulness: HelpfulnessConfig,
    /// A node counts as visited within this distance, meters.
    pub visit_radius_m: Real,
    pub fov_deg: Real,
    pub max_range_m: Real,
    /// Faces below this height are not help candidates (they are lying down).
    pub min_candidate_height_m: Real,
}

impl Default for PlanningConfig {
    fn default() -> Self {
        PlanningConfig {
            budget_s: 300.0,
            helpfulness: HelpfulnessConfig::default(),
            visit_radius_m: 0.3,
            fov_deg: 90.0,
            max_range_m: 6.0,
            min_candidate_height_m: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TriageSection {
    pub thresholds: TriageConfig,
    pub noise: TriageNoise,
    /// Observation window at the victim, seconds.
    pub window_s: Real,
}

impl Default for TriageSection {
    fn default() -> Self {
        TriageSection { thresholds: TriageConfig::default(), noise: TriageNoise::default(), window_s: 20.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DialogueConfig {
    /// Probability the channel relays an answer faithfully.
    pub channel_accuracy: Real,
    pub timeout_s: Real,
}

impl Default for DialogueConfig {
    fn default() -> Self {
        DialogueConfig { channel_accuracy: 0.769, timeout_s: 10.0 }
    }
}

/// A scripted playful reach while the robot is idle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayfulReach {
    pub at_s: Real,
    pub goal: Vec2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MotionSection {
    pub amplitude: Real,
    pub lambda: Real,
    pub waypoints: usize,
    pub scheduled: Vec<PlayfulReach>,
}

impl Default for MotionSection {
    fn default() -> Self {
        MotionSection { amplitude: 0.2, lambda: 1.0, waypoints: 21, scheduled: Vec::new() }
    }
}

/// Complete scenario description. `seed` has no default on purpose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    /// Map file path (relative to the config file) or `builtin:<name>` with
    /// name `apartment_3x3` or `open_room_4x4`.
    pub map: String,
    pub seed: u64,
    pub duration_s: Real,
    #[serde(default = "default_dt")]
    pub dt: Real,
    /// Wall-clock hour at scenario start, for time-of-day features.
    #[serde(default = "default_start_hour")]
    pub start_hour: Real,
    #[serde(default = "default_mission")]
    pub mission: Mission,
    #[serde(default)]
    pub robot: RobotConfig,
    #[serde(default)]
    pub agents: Vec<AgentConfig>,
    #[serde(default)]
    pub helpers: Vec<HelperConfig>,
    #[serde(default)]
    pub schedule: Vec<ScheduleEntry>,
    #[serde(default)]
    pub gas: GasConfig,
    /// Positions of gas sensors in the world, meters.
    #[serde(default)]
    pub gas_sensors: Vec<Vec2>,
    #[serde(default)]
    pub percept: PerceptConfig,
    #[serde(default)]
    pub detection: DetectionConfig,
    #[serde(default)]
    pub planning: PlanningConfig,
    #[serde(default)]
    pub motion: MotionSection,
    #[serde(default)]
    pub triage: TriageSection,
    #[serde(default)]
    pub dialogue: DialogueConfig,
}

fn default_dt() -> Real {
    0.1
}
fn default_start_hour() -> Real {
    12.0
}
fn default_mission() -> Mission {
    Mission::Monitor
}

impl ScenarioConfig {
    /// Minimal programmatic config on the bundled apartment.
    pub fn bundled(seed: u64, duration_s: Real) -> ScenarioConfig {
        ScenarioConfig {
            map: "builtin:apartment_3x3".into(),
            seed,
            duration_s,
            dt: default_dt(),
            start_hour: default_start_hour(),
            mission: Mission::Monitor,
            robot: RobotConfig::default(),
            agents: Vec::new(),
            helpers: Vec::new(),
            schedule: Vec::new(),
            gas: GasConfig::default(),
            gas_sensors: Vec::new(),
            percept: PerceptConfig::default(),
            detection: DetectionConfig::default(),
            planning: PlanningConfig::default(),
            motion: MotionSection::default(),
            triage: TriageSection::default(),
            dialogue: DialogueConfig::default(),
        }
    }

    /// Parse a config file and pre-flight validate it (including that the
    /// referenced map exists and loads).
    pub fn load(path: &Path) -> Result<(ScenarioConfig, HomeMap), ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Config {
            what: format!("cannot read {}: {e}", path.display()),
        })?;
        let cfg: ScenarioConfig =
            serde_json::from_str(&text).map_err(|e| ScenarioError::Config {
                what: format!("{} does not parse: {e}", path.display()),
            })?;
        let base = path.parent().map(PathBuf::from).unwrap_or_default();
        let map = cfg.resolve_map(&base)?;
        cfg.validate(&map)?;
        Ok((cfg, map))
    }

    pub fn resolve_map(&self, base_dir: &Path) -> Result<HomeMap, ScenarioError> {
        if let Some(name) = self.map.strip_prefix("builtin:") {
            return match name {
                "apartment_3x3" => Ok(HomeMap::bundled_apartment()),
                "open_room_4x4" => load_map(include_str!("../../../../maps/open_room_4x4.json"))
                    .map_err(|e| ScenarioError::Config { what: e.to_string() }),
                other => Err(ScenarioError::Config {
                    what: format!("unknown builtin map {other:?}"),
                }),
            };
        }
        let path = base_dir.join(&self.map);
        if !path.exists() {
            return Err(ScenarioError::Config {
                what: format!("map file {} does not exist", path.display()),
            });
        }
        let text = std::fs::read_to_string(&path).map_err(|e| ScenarioError::Config {
            what: format!("cannot read map {}: {e}", path.display()),
        })?;
        load_map(&text).map_err(|e| ScenarioError::Config { what: e.to_string() })
    }

    pub fn validate(&self, map: &HomeMap) -> Result<(), ScenarioError> {
        let fail = |what: String| Err(ScenarioError::Config { what });
        if self.duration_s <= 0.0 {
            return fail("duration_s must be positive".into());
        }
        if self.dt <= 0.0 {
            return fail("dt must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.dialogue.channel_accuracy) {
            return fail(format!(
                "dialogue.channel_accuracy {} outside [0, 1]",
                self.dialogue.channel_accuracy
            ));
        }
        if self.robot.speed <= 0.0 {
            return fail("robot.speed must be positive".into());
        }
        let robot_cell = map.cell_of(self.robot.start);
        if !robot_cell.map(|c| map.is_free(c)).unwrap_or(false) {
            return fail(format!(
                "robot start ({}, {}) is not on a free cell",
                self.robot.start.x, self.robot.start.y
            ));
        }
        for agent in &self.agents {
            if !(0.0..=1.0).contains(&agent.responsiveness) {
                return fail(format!("agent {} responsiveness outside [0, 1]", agent.id));
            }
            let cell = map.cell_of(agent.position);
            if !cell.map(|c| map.is_free(c)).unwrap_or(false) {
                return fail(format!("agent {} starts on a blocked cell", agent.id));
            }
        }
        for helper in &self.helpers {
            let cell = map.cell_of(helper.position);
            if !cell.map(|c| map.is_free(c)).unwrap_or(false) {
                return fail(format!("helper {} starts on a blocked cell", helper.id));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_seed_fails_to_parse() {
        let text = r#"{"map": "builtin:apartment_3x3", "duration_s": 10.0}"#;
        assert!(serde_json::from_str::<ScenarioConfig>(text).is_err());
    }

    #[test]
    fn bad_channel_accuracy_is_rejected() {
        let mut cfg = ScenarioConfig::bundled(1, 10.0);
        cfg.dialogue.channel_accuracy = 1.5;
        let map = HomeMap::bundled_apartment();
        assert!(cfg.validate(&map).is_err());
    }

    #[test]
    fn missing_map_file_is_rejected() {
        let mut cfg = ScenarioConfig::bundled(1, 10.0);
        cfg.map = "does_not_exist.json".into();
        assert!(cfg.resolve_map(Path::new("/tmp")).is_err());
    }

    #[test]
    fn bundled_config_validates() {
        let cfg = ScenarioConfig::bundled(1, 10.0);
        let map = cfg.resolve_map(Path::new(".")).unwrap();
        cfg.validate(&map).unwrap();
    }

    #[test]
    fn robot_start_inside_wall_is_rejected() {
        let mut cfg = ScenarioConfig::bundled(1, 10.0);
        cfg.robot.start = Vec2::new(0.0, 0.0);
        let map = HomeMap::bundled_apartment();
        assert!(cfg.validate(&map).is_err());
    }
}
