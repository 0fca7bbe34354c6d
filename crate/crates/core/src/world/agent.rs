//! Human agents: pose, vitals ground truth, and movement scripts.

use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::Real;

/// Direction a person fell, relative to their pre-fall heading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FallDirection {
    Forward,
    Backward,
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Pose {
    Standing,
    Fallen(FallDirection),
}

/// Orientation of the face as seen by an assessing observer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceOrientation {
    Front,
    Side,
    Down,
}

/// Bleeding site regions used by the triage pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BodyRegion {
    Head,
    Body,
    LeftArm,
    RightArm,
    LeftLeg,
    RightLeg,
}

/// Ground-truth breathing pattern; `mean_interval_s = None` means no breathing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreathingTruth {
    pub mean_interval_s: Option<Real>,
    /// Coefficient of variation of the intervals.
    #[serde(default)]
    pub cv: Real,
}

impl Default for BreathingTruth {
    fn default() -> Self {
        BreathingTruth { mean_interval_s: Some(4.0), cv: 0.1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BleedingTruth {
    pub region: BodyRegion,
    /// Pool area at observation start, m^2.
    pub initial_area_m2: Real,
    /// Expansion rate, m^2/s.
    pub expansion_rate_m2_s: Real,
}

/// Feature-level ground truth the triage classifiers assess.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VitalsProfile {
    /// Blueness ratio at the distal hands, in [0, 1].
    pub blueness: Real,
    /// Chin pitch in degrees; positive is chin-up.
    pub chin_pitch_deg: Real,
    pub face_orientation: FaceOrientation,
    pub breathing: BreathingTruth,
    #[serde(default)]
    pub bleeding: Option<BleedingTruth>,
}

impl Default for VitalsProfile {
    fn default() -> Self {
        VitalsProfile {
            blueness: 0.05,
            chin_pitch_deg: 20.0,
            face_orientation: FaceOrientation::Front,
            breathing: BreathingTruth::default(),
            bleeding: None,
        }
    }
}

/// One scripted agent action, applied when the world clock reaches `at_s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AgentAction {
    /// Walk with a constant velocity until the next action.
    SetVelocity { velocity: Vec2 },
    /// Walk toward a point at the given speed, then stop there.
    WalkTo { target: Vec2, speed: Real },
    Stop,
    Fall { direction: FallDirection },
    StandUp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScriptStep {
    pub at_s: Real,
    #[serde(flatten)]
    pub action: AgentAction,
}

/// Current movement order, derived from the script.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MotionOrder {
    Hold,
    Velocity(Vec2),
    Toward { target: Vec2, speed: Real },
}

/// A simulated person.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    pub id: String,
    pub position: Vec2,
    pub heading: Real,
    pub pose: Pose,
    pub body_height: Real,
    /// Face center above ground when standing, meters.
    pub face_height_offset: Real,
    pub skin_temperature: Real,
    /// Seconds between exhalations; `None` marks absent breathing.
    pub breathing_interval: Option<Real>,
    /// Probability the agent answers when spoken to.
    pub responsiveness: Real,
    pub response_delay: Real,
    pub vitals_truth: VitalsProfile,
    pub script: Vec<ScriptStep>,
    pub(crate) next_script_idx: usize,
    pub(crate) motion: MotionOrder,
    pub(crate) time_since_exhale: Real,
    /// Distance moved during the last step, meters.
    pub(crate) moved_last_step: Real,
}

impl AgentState {
    pub fn new(id: impl Into<String>, position: Vec2) -> Self {
        AgentState {
            id: id.into(),
            position,
            heading: 0.0,
            pose: Pose::Standing,
            body_height: 1.7,
            face_height_offset: 1.55,
            skin_temperature: 33.0,
            breathing_interval: Some(4.0),
            responsiveness: 1.0,
            response_delay: 1.0,
            vitals_truth: VitalsProfile::default(),
            script: Vec::new(),
            next_script_idx: 0,
            motion: MotionOrder::Hold,
            time_since_exhale: 0.0,
            moved_last_step: 0.0,
        }
    }

    pub fn with_script(mut self, script: Vec<ScriptStep>) -> Self {
        self.script = script;
        self
    }

    pub fn is_fallen(&self) -> bool {
        matches!(self.pose, Pose::Fallen(_))
    }

    /// Face center height above ground in the current pose.
    pub fn face_height(&self, fallen_face_height: Real) -> Real {
        match self.pose {
            Pose::Standing => self.face_height_offset,
            Pose::Fallen(_) => fallen_face_height,
        }
    }

    /// Long-axis direction of the body when lying down.
    pub fn body_axis(&self) -> Option<Vec2> {
        match self.pose {
            Pose::Standing => None,
            Pose::Fallen(dir) => {
                let forward = Vec2::new(self.heading.cos(), self.heading.sin());
                let axis = match dir {
                    FallDirection::Forward => forward,
                    FallDirection::Backward => forward.scale(-1.0),
                    FallDirection::Left => forward.rot90(),
                    FallDirection::Right => forward.rot90().scale(-1.0),
                };
                Some(axis)
            }
        }
    }
}
