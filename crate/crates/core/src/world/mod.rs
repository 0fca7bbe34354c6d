//! Apartment model, human agents, robot state, and deterministic stepping.

pub mod agent;
pub mod map;
pub mod state;

pub use agent::{AgentAction, AgentState, FallDirection, Pose, ScriptStep, VitalsProfile};
pub use map::{load_map, Cell, HomeMap, MapError, SensorKind, SensorLocation};
pub use state::{step_world, Prop, RobotMode, RobotState, ScheduleEntry, WorldAction, WorldState};
