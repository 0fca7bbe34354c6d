//! World state and the fixed-timestep update.
//!
//! The world is a value: stepping consumes nothing global, draws randomness
//! only from the embedded seeded stream, and two runs with equal seed and
//! config produce bit-identical state sequences.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::sensors::gas::{GasConfig, GasSensorSim};
use crate::world::agent::{AgentAction, AgentState, MotionOrder, Pose};
use crate::world::map::HomeMap;
use crate::Real;

/// Robot activity mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RobotMode {
    Idle,
    Dispatching,
    Dialogue,
    Triage,
    SeekingHelp,
}

/// Polyline the robot is currently following, meters.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveRoute {
    pub points: Vec<Vec2>,
    pub progress_m: Real,
}

impl ActiveRoute {
    pub fn length(&self) -> Real {
        self.points.windows(2).map(|w| w[0].dist(w[1])).sum()
    }

    /// Position at the current progress along the polyline.
    pub fn position(&self) -> Vec2 {
        let mut remaining = self.progress_m;
        for w in self.points.windows(2) {
            let seg = w[0].dist(w[1]);
            if remaining <= seg {
                if seg <= 0.0 {
                    return w[0];
                }
                return w[0].add(w[1].sub(w[0]).scale(remaining / seg));
            }
            remaining -= seg;
        }
        *self.points.last().expect("route has points")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobotState {
    pub position: Vec2,
    pub heading: Real,
    /// Travel speed, m/s. The default 0.3 is a calibration exposed in config.
    pub speed: Real,
    pub mode: RobotMode,
    pub home_position: Vec2,
    pub route: Option<ActiveRoute>,
    /// Set during the step in which the robot reaches the end of its route.
    pub arrived_this_step: bool,
}

impl RobotState {
    pub fn new(position: Vec2) -> Self {
        RobotState {
            position,
            heading: 0.0,
            speed: 0.3,
            mode: RobotMode::Idle,
            home_position: position,
            route: None,
            arrived_this_step: false,
        }
    }

    pub fn follow(&mut self, points: Vec<Vec2>) {
        self.route = Some(ActiveRoute { points, progress_m: 0.0 });
        self.arrived_this_step = false;
    }
}

/// Inanimate object visible to the laser scanner (e.g. a cooling kettle).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop {
    pub id: String,
    pub position: Vec2,
    pub major_extent: Real,
    pub minor_extent: Real,
    pub temperature: Real,
    pub ambient: Real,
    /// Exponential cooling time constant, seconds.
    pub cool_tau_s: Real,
    pub in_known_map: bool,
}

/// Continuous gas emitter at a fixed position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasSource {
    pub position: Vec2,
    /// Emission amplitude in sensor units at zero distance.
    pub rate: Real,
}

/// One exhalation puff feeding the gas plume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exhalation {
    pub t: Real,
    pub position: Vec2,
}

/// Scheduled world-level action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WorldAction {
    OpenContact { sensor: String },
    CloseContact { sensor: String },
    SpawnProp { prop: Prop },
    RemoveProp { id: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub at_s: Real,
    #[serde(flatten)]
    pub action: WorldAction,
}

/// Contact sensor state change that occurred during the last step.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactChange {
    pub sensor_id: String,
    pub open: bool,
}

/// Complete simulation state.
#[derive(Debug, Clone)]
pub struct WorldState {
    pub clock: Real,
    pub dt: Real,
    pub map: HomeMap,
    pub agents: Vec<AgentState>,
    pub robot: RobotState,
    pub props: Vec<Prop>,
    pub gas_sources: Vec<GasSource>,
    pub gas_cfg: GasConfig,
    pub gas_sensors: Vec<GasSensorSim>,
    pub rng: ChaCha8Rng,
    pub schedule: Vec<ScheduleEntry>,
    next_schedule_idx: usize,
    /// Puffs still contributing to the plume.
    pub exhalations: Vec<Exhalation>,
    /// Contact open/close actions applied during the last step.
    pub contact_changes: Vec<ContactChange>,
    /// Exhalations emitted during the last step.
    pub exhaled_this_step: Vec<Exhalation>,
}

impl WorldState {
    pub fn new(map: HomeMap, robot_start: Vec2, seed: u64) -> Self {
        WorldState {
            clock: 0.0,
            dt: 0.1,
            map,
            agents: Vec::new(),
            robot: RobotState::new(robot_start),
            props: Vec::new(),
            gas_sources: Vec::new(),
            gas_cfg: GasConfig::default(),
            gas_sensors: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            schedule: Vec::new(),
            next_schedule_idx: 0,
            exhalations: Vec::new(),
            contact_changes: Vec::new(),
            exhaled_this_step: Vec::new(),
        }
    }

    pub fn add_agent(&mut self, agent: AgentState) {
        self.agents.push(agent);
    }

    pub fn add_gas_sensor(&mut self, position: Vec2) {
        self.gas_sensors.push(GasSensorSim::new(position, &self.gas_cfg));
    }

    pub fn agent(&self, id: &str) -> Option<&AgentState> {
        self.agents.iter().find(|a| a.id == id)
    }

    pub fn agent_mut(&mut self, id: &str) -> Option<&mut AgentState> {
        self.agents.iter_mut().find(|a| a.id == id)
    }

    /// Gas plume concentration above baseline at a position.
    pub fn plume_excess(&self, at: Vec2) -> Real {
        let cfg = &self.gas_cfg;
        let mut sum = 0.0;
        for puff in &self.exhalations {
            let age = self.clock - puff.t;
            let d2 = at.sub(puff.position).dot(at.sub(puff.position));
            sum += cfg.amplitude
                * (-d2 / (2.0 * cfg.sigma_m * cfg.sigma_m)).exp()
                * (-age / cfg.puff_tau_s).exp();
        }
        for src in &self.gas_sources {
            let d2 = at.sub(src.position).dot(at.sub(src.position));
            sum += src.rate * (-d2 / (2.0 * cfg.sigma_m * cfg.sigma_m)).exp();
        }
        sum
    }
}

/// Advance the world by one fixed step.
///
/// Scripted agent movements are applied, fallen agents do not move,
/// exhalation events are emitted on each agent's breathing schedule, props
/// cool, gas sensors integrate the plume, and the robot advances along its
/// route. Total function: never fails.
pub fn step_world(state: &mut WorldState, dt: Real) {
    debug_assert!(dt > 0.0);
    state.clock += dt;
    state.contact_changes.clear();
    state.exhaled_this_step.clear();
    let clock = state.clock;

    // scheduled world actions
    while state.next_schedule_idx < state.schedule.len()
        && state.schedule[state.next_schedule_idx].at_s <= clock + 1e-9
    {
        let entry = state.schedule[state.next_schedule_idx].clone();
        state.next_schedule_idx += 1;
        match entry.action {
            WorldAction::OpenContact { sensor } => {
                state.contact_changes.push(ContactChange { sensor_id: sensor, open: true });
            }
            WorldAction::CloseContact { sensor } => {
                state.contact_changes.push(ContactChange { sensor_id: sensor, open: false });
            }
            WorldAction::SpawnProp { prop } => state.props.push(prop),
            WorldAction::RemoveProp { id } => state.props.retain(|p| p.id != id),
        }
    }

    // agents: scripts, motion, exhalation
    for agent in &mut state.agents {
        while agent.next_script_idx < agent.script.len()
            && agent.script[agent.next_script_idx].at_s <= clock + 1e-9
        {
            let step = agent.script[agent.next_script_idx].clone();
            agent.next_script_idx += 1;
            match step.action {
                AgentAction::SetVelocity { velocity } => {
                    agent.motion = MotionOrder::Velocity(velocity);
                    if let Some(dir) = velocity.normalized(1e-12) {
                        agent.heading = dir.azimuth();
                    }
                }
                AgentAction::WalkTo { target, speed } => {
                    agent.motion = MotionOrder::Toward { target, speed };
                }
                AgentAction::Stop => agent.motion = MotionOrder::Hold,
                AgentAction::Fall { direction } => {
                    agent.pose = Pose::Fallen(direction);
                    agent.motion = MotionOrder::Hold;
                }
                AgentAction::StandUp => agent.pose = Pose::Standing,
            }
        }

        let old_pos = agent.position;
        if !agent.is_fallen() {
            let delta = match agent.motion {
                MotionOrder::Hold => Vec2::ZERO,
                MotionOrder::Velocity(v) => v.scale(dt),
                MotionOrder::Toward { target, speed } => {
                    let to_go = target.sub(agent.position);
                    let dist = to_go.norm();
                    if dist <= speed * dt {
                        agent.motion = MotionOrder::Hold;
                        to_go
                    } else {
                        to_go.scale(speed * dt / dist)
                    }
                }
            };
            if delta.norm() > 0.0 {
                let candidate = agent.position.add(delta);
                // continuous coordinates, collision-checked against the cell grid
                let free = state
                    .map
                    .cell_of(candidate)
                    .map(|c| state.map.is_free(c))
                    .unwrap_or(false);
                if free {
                    agent.position = candidate;
                    if let Some(dir) = delta.normalized(1e-12) {
                        agent.heading = dir.azimuth();
                    }
                } else {
                    agent.motion = MotionOrder::Hold;
                }
            }
        }
        agent.moved_last_step = agent.position.dist(old_pos);

        if let Some(interval) = agent.breathing_interval {
            agent.time_since_exhale += dt;
            while agent.time_since_exhale >= interval - 1e-9 {
                agent.time_since_exhale -= interval;
                let puff = Exhalation { t: clock, position: agent.position };
                state.exhalations.push(puff);
                state.exhaled_this_step.push(puff);
            }
        }
    }

    // props cool toward ambient
    for prop in &mut state.props {
        if prop.cool_tau_s > 0.0 {
            let k = (-dt / prop.cool_tau_s).exp();
            prop.temperature = prop.ambient + (prop.temperature - prop.ambient) * k;
        }
    }

    // prune puffs that no longer contribute
    let cutoff = state.gas_cfg.puff_tau_s * 6.0;
    let now = state.clock;
    state.exhalations.retain(|p| now - p.t <= cutoff);

    // gas sensors integrate the plume
    let cfg = state.gas_cfg.clone();
    let mut targets = Vec::with_capacity(state.gas_sensors.len());
    for sensor in &state.gas_sensors {
        targets.push(cfg.baseline + state.plume_excess(sensor.position));
    }
    for (sensor, target) in state.gas_sensors.iter_mut().zip(targets) {
        sensor.step(target, dt, &cfg, &mut state.rng);
    }

    // robot follows its route
    state.robot.arrived_this_step = false;
    if let Some(route) = &mut state.robot.route {
        route.progress_m += state.robot.speed * dt;
        let len = route.length();
        let before = state.robot.position;
        if route.progress_m >= len {
            state.robot.position = *route.points.last().expect("route has points");
            state.robot.route = None;
            state.robot.arrived_this_step = true;
        } else {
            state.robot.position = route.position();
        }
        if let Some(dir) = state.robot.position.sub(before).normalized(1e-9) {
            state.robot.heading = dir.azimuth();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::agent::ScriptStep;

    fn empty_world() -> WorldState {
        WorldState::new(HomeMap::bundled_apartment(), Vec2::new(1.45, 2.65), 7)
    }

    #[test]
    fn empty_world_step_only_advances_clock() {
        let mut w = empty_world();
        let agents_before = w.agents.clone();
        step_world(&mut w, 0.1);
        assert!((w.clock - 0.1).abs() < 1e-12);
        assert_eq!(w.agents, agents_before);
    }

    #[test]
    fn scripted_walk_advances_position() {
        let mut w = empty_world();
        // kitchen interior: free straight run to the east
        let mut a = AgentState::new("p", Vec2::new(2.0, 0.5));
        a.breathing_interval = None;
        a.script = vec![ScriptStep {
            at_s: 0.0,
            action: AgentAction::SetVelocity { velocity: Vec2::new(0.3, 0.0) },
        }];
        w.add_agent(a);
        for _ in 0..10 {
            step_world(&mut w, 0.1);
        }
        let agent = w.agent("p").unwrap();
        assert!((agent.position.x - 2.3).abs() < 1e-9, "x = {}", agent.position.x);
        assert!((agent.position.y - 0.5).abs() < 1e-12);
    }

    #[test]
    fn breathing_interval_four_seconds_gives_fifteen_exhalations_in_sixty() {
        // oracle: reference scalar count, floor(60 / 4) = 15
        let mut w = empty_world();
        let mut a = AgentState::new("p", Vec2::new(1.5, 0.5));
        a.breathing_interval = Some(4.0);
        w.add_agent(a);
        let mut events = 0usize;
        for _ in 0..600 {
            step_world(&mut w, 0.1);
            events += w.exhaled_this_step.len();
        }
        assert_eq!(events, 15);
    }

    #[test]
    fn fallen_agents_do_not_move() {
        let mut w = empty_world();
        let mut a = AgentState::new("p", Vec2::new(1.5, 0.5));
        a.breathing_interval = None;
        a.script = vec![
            ScriptStep { at_s: 0.0, action: AgentAction::SetVelocity { velocity: Vec2::new(0.3, 0.0) } },
            ScriptStep { at_s: 0.5, action: AgentAction::Fall { direction: crate::world::agent::FallDirection::Forward } },
        ];
        w.add_agent(a);
        let mut pos_at_fall = None;
        for _ in 0..20 {
            step_world(&mut w, 0.1);
            let agent = w.agent("p").unwrap();
            if agent.is_fallen() && pos_at_fall.is_none() {
                pos_at_fall = Some(agent.position);
            }
        }
        let agent = w.agent("p").unwrap();
        assert!(agent.is_fallen());
        assert_eq!(Some(agent.position), pos_at_fall);
    }

    #[test]
    fn agents_stop_at_walls() {
        let mut w = empty_world();
        let mut a = AgentState::new("p", Vec2::new(1.35, 0.35));
        a.breathing_interval = None;
        // walk straight into the outer wall
        a.script = vec![ScriptStep {
            at_s: 0.0,
            action: AgentAction::SetVelocity { velocity: Vec2::new(0.0, -1.0) },
        }];
        w.add_agent(a);
        for _ in 0..30 {
            step_world(&mut w, 0.1);
        }
        let agent = w.agent("p").unwrap();
        let cell = w.map.cell_of(agent.position).unwrap();
        assert!(w.map.is_free(cell));
    }

    #[test]
    fn agent_count_is_conserved() {
        let mut w = empty_world();
        w.add_agent(AgentState::new("a", Vec2::new(1.5, 0.5)));
        w.add_agent(AgentState::new("b", Vec2::new(2.0, 0.5)));
        for _ in 0..100 {
            step_world(&mut w, 0.1);
            assert_eq!(w.agents.len(), 2);
        }
    }

    #[test]
    fn clock_increases_by_exactly_dt() {
        let mut w = empty_world();
        let mut prev = w.clock;
        for _ in 0..50 {
            step_world(&mut w, 0.1);
            assert_eq!(w.clock, prev + 0.1);
            prev = w.clock;
        }
    }
}
