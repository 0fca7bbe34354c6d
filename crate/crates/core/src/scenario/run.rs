//! The end-to-end pipeline: step the world, sample sensors, detect
//! anomalies / breath / fallen people, dispatch on anomalies, hold the
//! verbal exchange, triage unresponsive or fallen victims, and seek helpers
//! when the triage priority is red.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::detect::{
    classify_anomaly, detect_fallen, extract_features, fall_direction, train_forest,
    BreathDetector, FallCall, Presence, trend_filter,
};
use crate::detect::corpus::{generate_corpus, CorpusParams};
use crate::geom::Vec2;
use crate::plan::{astar, node_from_face, plan_tour, travel_time, CostMatrix, HelpNode, NavGrid};
use crate::motion::{check_guidelines, optimize, peak_deviation, playful_offsets, seed_straight, PlayfulParams};
use crate::scenario::config::{Mission, ScenarioConfig};
use crate::scenario::log::{EventLog, Record};
use crate::scenario::metrics::{compute_metrics, GroundTruth, RunMetrics};
use crate::scenario::ScenarioError;
use crate::sensors::{perceive_faces, sample_environment_sensors, sample_laser_clusters, SensorEvent};
use crate::sensors::skeleton::observe_fall_track;
use crate::triage::vitals::{
    assess_airway, assess_bleeding, assess_breathing, assess_cyanosis, triage_report, Breathing,
    Priority, TriageConfig, VitalsReport, BleedingVerdict, BleedSeverity,
};
use crate::world::agent::{AgentAction, AgentState, VitalsProfile};
use crate::world::map::{Cell, SensorKind, SensorLocation};
use crate::world::{step_world, HomeMap, Pose, RobotMode, WorldState};
use crate::Real;

/// Outcome of asking whether to call emergency services.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    CallEms,
    StandDown,
    TimeoutCall,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DialogueOutcome {
    pub decision: Decision,
    pub responded: bool,
    /// Whether the heard answer matched the spoken one; None when silent.
    pub heard_correct: Option<bool>,
    /// Seconds from the question to the decision.
    pub decided_after_s: Real,
}

/// Ground-truth breathing verdict straight from the profile parameters.
fn breathing_truth_verdict(vitals: &VitalsProfile, cfg: &TriageConfig) -> Breathing {
    match vitals.breathing.mean_interval_s {
        None => Breathing::Absent,
        Some(mean) => {
            let rate = 60.0 / mean;
            let cv = vitals.breathing.cv;
            if rate > cfg.rate_fast {
                Breathing::Fast
            } else if rate < cfg.rate_slow && cv > cfg.cv_agonal {
                Breathing::Agonal
            } else if rate < cfg.rate_slow {
                Breathing::Slow
            } else {
                Breathing::Normal
            }
        }
    }
}

/// Noise-free triage report of a profile; the answer an honest, fully
/// informed assessment would give.
pub fn true_report(vitals: &VitalsProfile, cfg: &TriageConfig) -> VitalsReport {
    let circulation = assess_cyanosis(vitals.blueness, cfg);
    let airway = assess_airway(vitals.chin_pitch_deg, vitals.face_orientation, cfg);
    let breathing = breathing_truth_verdict(vitals, cfg);
    let bleeding = match vitals.bleeding {
        None => BleedingVerdict { location: None, severity: BleedSeverity::None },
        Some(site) => {
            let located = site.initial_area_m2 >= cfg.bleed_area_min
                || site.expansion_rate_m2_s > 0.0;
            let severity = if site.expansion_rate_m2_s >= cfg.bleed_rate_massive {
                BleedSeverity::Massive
            } else if site.expansion_rate_m2_s > 0.0 {
                BleedSeverity::Slight
            } else {
                BleedSeverity::None
            };
            BleedingVerdict { location: located.then_some(site.region), severity }
        }
    };
    triage_report(circulation, airway, breathing, bleeding)
}

/// Whether the person's ground-truth vitals warrant help.
pub fn needs_help(vitals: &VitalsProfile, cfg: &TriageConfig) -> bool {
    true_report(vitals, cfg).priority != Priority::Green
}

/// The verbal exchange: the agent answers with probability `responsiveness`
/// after `response_delay`; the channel flips the heard answer with
/// probability `1 - channel_accuracy`; silence until the timeout forces a
/// call.
pub fn dialogue_exchange(
    agent: &AgentState,
    channel_accuracy: Real,
    timeout_s: Real,
    triage_cfg: &TriageConfig,
    rng: &mut ChaCha8Rng,
) -> DialogueOutcome {
    debug_assert!((0.0..=1.0).contains(&channel_accuracy));
    let answers = rng.gen_range(0.0..1.0) < agent.responsiveness;
    let flip = rng.gen_range(0.0..1.0) >= channel_accuracy;
    if !answers || agent.response_delay >= timeout_s {
        return DialogueOutcome {
            decision: Decision::TimeoutCall,
            responded: false,
            heard_correct: None,
            decided_after_s: timeout_s,
        };
    }
    let wants_help = needs_help(&agent.vitals_truth, triage_cfg);
    let heard_yes = if flip { !wants_help } else { wants_help };
    DialogueOutcome {
        decision: if heard_yes { Decision::CallEms } else { Decision::StandDown },
        responded: true,
        heard_correct: Some(!flip),
        decided_after_s: agent.response_delay,
    }
}

/// Derive the evaluable truth of a scenario from its config.
pub fn derive_ground_truth(cfg: &ScenarioConfig) -> GroundTruth {
    let incident_at = cfg
        .agents
        .iter()
        .flat_map(|a| a.script.iter())
        .filter(|s| matches!(s.action, AgentAction::Fall { .. }))
        .map(|s| s.at_s)
        .fold(None, |acc: Option<Real>, t| Some(acc.map_or(t, |a| a.min(t))));
    let victim = cfg
        .agents
        .iter()
        .find(|a| a.script.iter().any(|s| matches!(s.action, AgentAction::Fall { .. })))
        .or_else(|| cfg.agents.first());
    let needs = victim.map(|v| needs_help(&v.vitals, &cfg.triage.thresholds));
    let mut true_reports = BTreeMap::new();
    for a in &cfg.agents {
        true_reports.insert(a.id.clone(), true_report(&a.vitals, &cfg.triage.thresholds));
    }
    // true best helper: exact geometry, no perception noise
    let h = &cfg.planning.helpfulness;
    let best_helper = cfg
        .helpers
        .iter()
        .map(|helper| {
            let d = helper.position.dist(cfg.robot.start);
            let proximity = (1.0 - d / h.d_max).clamp(0.0, 1.0);
            let adult = if helper.face_height >= h.h_adult { 1.0 } else { 0.0 };
            (helper.id.clone(), h.w_dist * proximity + h.w_adult * adult)
        })
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(b.0.cmp(&a.0)))
        .map(|(id, _)| id);
    GroundTruth { incident_at, victim_needs_help: needs, best_helper, true_reports }
}

struct SeekState {
    started_at: Real,
    visited: BTreeSet<String>,
    last_tour: Vec<String>,
    routed_to: Option<String>,
}

struct DialogueRun {
    agent_id: String,
    started_at: Real,
    outcome: DialogueOutcome,
    logged: bool,
}

struct Runner {
    cfg: ScenarioConfig,
    world: WorldState,
    grid: NavGrid,
    log: EventLog,
    rng_percept: ChaCha8Rng,
    rng_dialogue: ChaCha8Rng,
    rng_triage: ChaCha8Rng,
    forest: crate::Forest,
    breath: Option<BreathDetector<Real>>,
    gas_history: VecDeque<(Real, Real)>,
    gas_samples_seen: u64,
    last_cp_abs: u64,
    event_window: VecDeque<SensorEvent>,
    last_classify: Real,
    last_trend: Real,
    last_fallen_scan: Real,
    last_dispatch: Option<Real>,
    dispatch_room: Option<String>,
    dialogue: Option<DialogueRun>,
    triage_until: Option<(Real, String)>,
    seek: Option<SeekState>,
    going_home: bool,
    prev_fallen: BTreeSet<String>,
    playful_next: usize,
}

impl Runner {
    fn new(cfg: &ScenarioConfig, map: HomeMap) -> Result<Runner, ScenarioError> {
        cfg.validate(&map)?;
        let mut world = WorldState::new(map, cfg.robot.start, cfg.seed);
        world.dt = cfg.dt;
        world.robot.speed = cfg.robot.speed;
        world.gas_cfg = cfg.gas.clone();
        world.schedule = cfg.schedule.clone();
        for pos in &cfg.gas_sensors {
            world.add_gas_sensor(*pos);
        }
        for a in &cfg.agents {
            world.add_agent(a.build());
        }
        for h in &cfg.helpers {
            let mut agent = AgentState::new(h.id.clone(), h.position);
            agent.face_height_offset = h.face_height;
            agent.breathing_interval = None;
            agent.responsiveness = 1.0;
            world.add_agent(agent);
        }
        // anomaly model trained deterministically from the bundled corpus
        let corpus = generate_corpus(&CorpusParams { seed: cfg.detection.forest.seed, ..CorpusParams::default() });
        let labeled: Vec<(Vec<Real>, bool)> =
            corpus.iter().map(|(fv, y)| (fv.to_vec(), *y)).collect();
        let forest = train_forest(&labeled, &cfg.detection.forest)
            .map_err(|e| ScenarioError::Runtime { what: e.to_string() })?;
        let breath = (!world.gas_sensors.is_empty()).then(|| {
            let mut breath_cfg = cfg.detection.breath.clone();
            breath_cfg.sample_dt_s = cfg.dt;
            BreathDetector::new(cfg.gas.baseline, breath_cfg)
        });
        let grid = NavGrid::from_map(&world.map);
        let seek = (cfg.mission == Mission::FindHelp).then(|| SeekState {
            started_at: 0.0,
            visited: BTreeSet::new(),
            last_tour: Vec::new(),
            routed_to: None,
        });
        let mut runner = Runner {
            world,
            grid,
            log: EventLog::new(),
            rng_percept: ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15),
            rng_dialogue: ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5851_f42d_4c95_7f2d),
            rng_triage: ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x14057b7e_f767_814f),
            forest,
            breath,
            gas_history: VecDeque::new(),
            gas_samples_seen: 0,
            last_cp_abs: 0,
            event_window: VecDeque::new(),
            last_classify: -1e9,
            last_trend: -1e9,
            last_fallen_scan: -1e9,
            last_dispatch: None,
            dispatch_room: None,
            dialogue: None,
            triage_until: None,
            seek,
            going_home: false,
            prev_fallen: BTreeSet::new(),
            playful_next: 0,
            cfg: cfg.clone(),
        };
        if runner.seek.is_some() {
            runner.world.robot.mode = RobotMode::SeekingHelp;
            runner.world.robot.heading = heading_default(cfg);
        }
        Ok(runner)
    }

    fn run(mut self) -> Result<(EventLog, RunMetrics), ScenarioError> {
        let steps = (self.cfg.duration_s / self.cfg.dt).round() as u64;
        for _ in 0..steps {
            self.tick()?;
        }
        self.log.push(Record::RunEnd { t: self.world.clock });
        let truth = derive_ground_truth(&self.cfg);
        let metrics = compute_metrics(&self.log, Some(&truth), self.cfg.duration_s)
            .map_err(|e| ScenarioError::Runtime { what: e.to_string() })?;
        Ok((self.log, metrics))
    }

    fn tick(&mut self) -> Result<(), ScenarioError> {
        step_world(&mut self.world, self.cfg.dt);
        let now = self.world.clock;

        // ambient sensors feed the central database (the log) and the window
        let events = sample_environment_sensors(&self.world);
        for e in &events {
            self.log.push(Record::Sensor {
                t: e.t,
                id: e.id.clone(),
                kind: kind_name(e.kind).into(),
                value: e.value,
            });
            self.event_window.push_back(e.clone());
        }
        let horizon = now - self.cfg.detection.features.window_s - 1.0;
        while self.event_window.front().map(|e| e.t < horizon).unwrap_or(false) {
            self.event_window.pop_front();
        }

        // breath detection on the first gas sensor
        if let Some(detector) = &mut self.breath {
            let sample = self.world.gas_sensors[0].sample();
            self.gas_history.push_back((now, sample.reading));
            self.gas_samples_seen += 1;
            let keep = (self.cfg.detection.trend_window_s / self.cfg.dt) as usize + 1;
            while self.gas_history.len() > keep {
                self.gas_history.pop_front();
            }
            if let Some(tr) = detector.step(sample.reading) {
                self.log.push(Record::BreathTransition {
                    t: now,
                    to: match tr.to {
                        Presence::Close => "Close".into(),
                        Presence::Far => "Far".into(),
                    },
                    reading: tr.reading,
                });
            }
            if now - self.last_trend >= self.cfg.detection.trend_every_s
                && self.gas_history.len() >= 8
            {
                self.last_trend = now;
                let window: Vec<(Real, Real)> = self.gas_history.iter().copied().collect();
                if let Ok((_, cps)) = trend_filter(&window, &self.cfg.detection.trend) {
                    let window_start_abs = self.gas_samples_seen - window.len() as u64;
                    for cp in cps {
                        let abs = window_start_abs + cp.index as u64;
                        if abs > self.last_cp_abs {
                            self.last_cp_abs = abs;
                            self.log.push(Record::ChangePoint {
                                t: now,
                                index: abs,
                                direction: cp.direction,
                            });
                        }
                    }
                }
            }
        }

        // falls observed as shoulder tracks when an agent goes down
        let fallen_now: Vec<(String, crate::world::FallDirection, Real)> = self
            .world
            .agents
            .iter()
            .filter_map(|a| match a.pose {
                Pose::Fallen(d) if !self.prev_fallen.contains(&a.id) => {
                    Some((a.id.clone(), d, a.body_height))
                }
                _ => None,
            })
            .collect();
        for (id, direction, body_height) in fallen_now {
            self.prev_fallen.insert(id.clone());
            let sigma = if self.cfg.percept.noise_enabled { 0.02 } else { 0.0 };
            let track = observe_fall_track(
                0.85 * body_height,
                direction,
                0.4,
                0.6,
                self.cfg.dt,
                sigma,
                0.6,
                &mut self.rng_percept,
            );
            let samples: Vec<(Real, Real, Vec2)> =
                track.iter().map(|s| (s.t, s.height, s.displacement)).collect();
            let call = fall_direction(&samples, &self.cfg.detection.fall)
                .map_err(|e| ScenarioError::Runtime { what: e.to_string() })?;
            self.log.push(Record::FallDirectionCall {
                t: now,
                agent: id,
                direction: match call {
                    FallCall::Fall(d) => Some(d),
                    FallCall::NoFall => None,
                },
            });
        }

        // periodic laser sweep for fallen-person candidates
        if now - self.last_fallen_scan >= self.cfg.detection.fallen_scan_every_s {
            self.last_fallen_scan = now;
            let clusters = sample_laser_clusters(
                &self.world,
                self.world.robot.position,
                &self.cfg.percept,
                &mut self.rng_percept,
            );
            for cand in detect_fallen(&clusters, &self.cfg.detection.fallen) {
                // standing people also gate through size/temperature checks;
                // only report ones that are actually lying low
                let nearest_fallen = self
                    .world
                    .agents
                    .iter()
                    .any(|a| a.is_fallen() && a.position.dist(cand.position) < 0.3);
                if nearest_fallen {
                    self.log.push(Record::FallenCandidate {
                        t: now,
                        x: cand.position.x,
                        y: cand.position.y,
                        confidence: cand.confidence,
                    });
                }
            }
        }

        // anomaly classification while idle (monitor missions only)
        if self.cfg.mission == Mission::Monitor
            && self.world.robot.mode == RobotMode::Idle
            && now - self.last_classify >= self.cfg.detection.classify_every_s
        {
            self.last_classify = now;
            let cooled = self
                .last_dispatch
                .map(|t| now - t >= self.cfg.detection.redispatch_cooldown_s)
                .unwrap_or(true);
            if cooled {
                let events: Vec<SensorEvent> = self.event_window.iter().cloned().collect();
                let fv = extract_features(
                    &events,
                    &self.world.map,
                    now,
                    self.cfg.start_hour,
                    &self.cfg.detection.features,
                );
                let verdict = classify_anomaly(&self.forest, &fv);
                if verdict.anomalous {
                    self.log.push(Record::AnomalyVerdict {
                        t: now,
                        anomalous: true,
                        room: verdict.room.clone(),
                        score: verdict.score,
                    });
                    self.dispatch(&verdict.room)?;
                }
            }
        }

        // robot arrival handling
        if self.world.robot.arrived_this_step {
            match self.world.robot.mode {
                RobotMode::Dispatching => {
                    let p = self.world.robot.position;
                    self.log.push(Record::Arrival { t: now, x: p.x, y: p.y });
                    self.start_dialogue(now);
                }
                RobotMode::Idle => {}
                _ => {}
            }
            if self.going_home {
                self.going_home = false;
                self.world.robot.mode = RobotMode::Idle;
            }
        }

        // dialogue resolution in sim time
        if let Some(d) = &mut self.dialogue {
            if !d.logged && now - d.started_at >= d.outcome.decided_after_s {
                d.logged = true;
                self.log.push(Record::Dialogue {
                    t: now,
                    agent: d.agent_id.clone(),
                    decision: d.outcome.decision,
                    responded: d.outcome.responded,
                    heard_correct: d.outcome.heard_correct,
                });
                match d.outcome.decision {
                    Decision::StandDown => {
                        self.log.push(Record::StandDown { t: now });
                        let agent_id = d.agent_id.clone();
                        self.dialogue = None;
                        let _ = agent_id;
                        self.route_home();
                    }
                    Decision::CallEms | Decision::TimeoutCall => {
                        self.log.push(Record::EmsCall { t: now });
                        let agent_id = d.agent_id.clone();
                        let unresponsive = !d.outcome.responded;
                        self.dialogue = None;
                        let fallen = self
                            .world
                            .agent(&agent_id)
                            .map(|a| a.is_fallen())
                            .unwrap_or(false);
                        if unresponsive || fallen {
                            self.world.robot.mode = RobotMode::Triage;
                            self.triage_until = Some((now + self.cfg.triage.window_s, agent_id));
                        } else {
                            self.route_home();
                        }
                    }
                }
            }
        }

        // triage at the victim
        if let Some((done_at, agent_id)) = &self.triage_until {
            if now >= *done_at {
                let agent_id = agent_id.clone();
                self.triage_until = None;
                let report = self.observe_and_triage(&agent_id)?;
                self.log.push(Record::TriageReport { t: now, agent: agent_id, report });
                if report.priority == Priority::Red && !self.cfg.helpers.is_empty() {
                    self.world.robot.mode = RobotMode::SeekingHelp;
                    self.seek = Some(SeekState {
                        started_at: now,
                        visited: BTreeSet::new(),
                        last_tour: Vec::new(),
                        routed_to: None,
                    });
                } else {
                    self.route_home();
                }
            }
        }

        // help seeking
        if self.world.robot.mode == RobotMode::SeekingHelp {
            self.seek_tick(now)?;
        }

        // scripted playful reaches while idle
        while self.playful_next < self.cfg.motion.scheduled.len()
            && self.cfg.motion.scheduled[self.playful_next].at_s <= now
        {
            let reach = self.cfg.motion.scheduled[self.playful_next].clone();
            self.playful_next += 1;
            if self.world.robot.mode == RobotMode::Idle {
                let start = self.world.robot.position;
                let seed = seed_straight(
                    [start.x, start.y],
                    [reach.goal.x, reach.goal.y],
                    self.cfg.motion.waypoints.max(3),
                    0.1,
                );
                let params: PlayfulParams<Real, 2> = PlayfulParams {
                    amplitude: self.cfg.motion.amplitude,
                    lambda: self.cfg.motion.lambda,
                    ..PlayfulParams::default()
                };
                let (targets, _) = playful_offsets(&seed, params.amplitude);
                let (out, _) = optimize(&seed, &params)
                    .map_err(|e| ScenarioError::Runtime { what: e.to_string() })?;
                let _ = targets;
                let report = check_guidelines(&out, &params, [reach.goal.x, reach.goal.y]);
                self.log.push(Record::Playful {
                    t: now,
                    peak_deviation: peak_deviation(&out),
                    helpful: report.helpful,
                    safe: report.safe,
                    clear: report.clear,
                });
            }
        }
        Ok(())
    }

    fn dispatch(&mut self, room: &str) -> Result<(), ScenarioError> {
        let now = self.world.clock;
        let target = self.dispatch_target(room);
        let start = self
            .world
            .map
            .cell_of(self.world.robot.position)
            .ok_or_else(|| ScenarioError::Runtime { what: "robot off-map".into() })?;
        let path = astar::<Real>(&self.grid, start, target)
            .map_err(|e| ScenarioError::Runtime { what: e.to_string() })?;
        let cost_s = travel_time(&path, self.world.robot.speed, self.grid.cell_size);
        self.log.push(Record::Dispatch { t: now, room: room.into(), target });
        self.log.push(Record::PathRecord { t: now, cells: path.cells.clone(), cost_s });
        self.world.robot.follow(path.polyline(&self.grid));
        self.world.robot.mode = RobotMode::Dispatching;
        self.last_dispatch = Some(now);
        self.dispatch_room = Some(room.into());
        Ok(())
    }

    /// The most active cell sensor of the room, or the room center.
    fn dispatch_target(&self, room: &str) -> Cell {
        let map = &self.world.map;
        let mut best: Option<(usize, Cell)> = None;
        for sensor in &map.sensor_placements {
            let in_room = map.sensor_room(&sensor.id).map(|r| r.name == room).unwrap_or(false);
            if !in_room {
                continue;
            }
            if let SensorLocation::Cell(cell) = &sensor.location {
                let activity = self
                    .event_window
                    .iter()
                    .filter(|e| e.id == sensor.id && e.value)
                    .count();
                if activity > 0 && best.map(|(a, _)| activity > a).unwrap_or(true) {
                    best = Some((activity, *cell));
                }
            }
        }
        if let Some((_, cell)) = best {
            return cell;
        }
        // nearest free cell to the room center
        let rect = map.room(room).map(|r| r.rect).unwrap_or(crate::world::map::CellRect {
            x0: 0,
            y0: 0,
            x1: map.width - 1,
            y1: map.height - 1,
        });
        let cx = (rect.x0 + rect.x1) as f64 / 2.0;
        let cy = (rect.y0 + rect.y1) as f64 / 2.0;
        let mut best_cell = Cell::new(rect.x0, rect.y0);
        let mut best_d = f64::INFINITY;
        for y in rect.y0..=rect.y1 {
            for x in rect.x0..=rect.x1 {
                let c = Cell::new(x, y);
                if map.is_free(c) {
                    let d = (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2);
                    if d < best_d {
                        best_d = d;
                        best_cell = c;
                    }
                }
            }
        }
        best_cell
    }

    fn start_dialogue(&mut self, now: Real) {
        self.world.robot.mode = RobotMode::Dialogue;
        let robot = self.world.robot.position;
        let agent = self
            .world
            .agents
            .iter()
            .filter(|a| !self.cfg.helpers.iter().any(|h| h.id == a.id))
            .min_by(|a, b| {
                a.position
                    .dist(robot)
                    .partial_cmp(&b.position.dist(robot))
                    .unwrap()
            });
        match agent {
            Some(a) => {
                let outcome = dialogue_exchange(
                    a,
                    self.cfg.dialogue.channel_accuracy,
                    self.cfg.dialogue.timeout_s,
                    &self.cfg.triage.thresholds,
                    &mut self.rng_dialogue,
                );
                self.dialogue = Some(DialogueRun {
                    agent_id: a.id.clone(),
                    started_at: now,
                    outcome,
                    logged: false,
                });
            }
            None => {
                // nobody to ask: treat as silence
                self.log.push(Record::Dialogue {
                    t: now,
                    agent: String::new(),
                    decision: Decision::TimeoutCall,
                    responded: false,
                    heard_correct: None,
                });
                self.log.push(Record::EmsCall { t: now });
                self.route_home();
            }
        }
    }

    fn observe_and_triage(&mut self, agent_id: &str) -> Result<VitalsReport, ScenarioError> {
        let vitals = self
            .world
            .agent(agent_id)
            .map(|a| a.vitals_truth)
            .ok_or_else(|| ScenarioError::Runtime { what: format!("agent {agent_id} missing") })?;
        let noise = &self.cfg.triage.noise;
        let cfg = &self.cfg.triage.thresholds;
        let rng = &mut self.rng_triage;
        let window = self.cfg.triage.window_s;

        let blueness = noise.blueness(vitals.blueness, rng);
        let circulation = assess_cyanosis(blueness, cfg);

        let pitch = noise.pitch(vitals.chin_pitch_deg, rng);
        let orientation = noise.orientation(vitals.face_orientation, rng);
        let airway = assess_airway(pitch, orientation, cfg);

        let truth_intervals: Vec<Real> = match vitals.breathing.mean_interval_s {
            None => Vec::new(),
            Some(mean) => {
                let n = (window / mean).floor().max(1.0) as usize;
                (0..n)
                    .map(|_| {
                        (mean
                            * (1.0
                                + crate::sensors::gas::gaussian(rng) * vitals.breathing.cv))
                        .max(0.3)
                    })
                    .collect()
            }
        };
        let observed = noise.intervals(&truth_intervals, rng);
        let breathing = assess_breathing(&observed, window, cfg)
            .map_err(|e| ScenarioError::Runtime { what: e.to_string() })?;

        let track: Vec<(Real, crate::world::agent::BodyRegion, Real)> = match vitals.bleeding {
            None => vec![(0.0, crate::world::agent::BodyRegion::Body, 0.0), (window, crate::world::agent::BodyRegion::Body, 0.0)],
            Some(site) => (0..=10)
                .map(|i| {
                    let t = window * i as Real / 10.0;
                    let area = site.initial_area_m2 + site.expansion_rate_m2_s * t;
                    (t, site.region, noise.area(area, rng))
                })
                .collect(),
        };
        let bleeding = assess_bleeding(&track, cfg)
            .map_err(|e| ScenarioError::Runtime { what: e.to_string() })?;

        Ok(triage_report(circulation, airway, breathing, bleeding))
    }

    fn route_home(&mut self) {
        let start = self.world.map.cell_of(self.world.robot.position);
        let home = self.world.map.cell_of(self.world.robot.home_position);
        if let (Some(s), Some(h)) = (start, home) {
            if let Ok(path) = astar::<Real>(&self.grid, s, h) {
                self.world.robot.follow(path.polyline(&self.grid));
                self.going_home = true;
                self.world.robot.mode = RobotMode::Dispatching;
                return;
            }
        }
        self.world.robot.mode = RobotMode::Idle;
    }

    fn seek_tick(&mut self, now: Real) -> Result<(), ScenarioError> {
        let Some(seek) = &mut self.seek else {
            return Ok(());
        };
        let elapsed = now - seek.started_at;
        let remaining = self.cfg.planning.budget_s - elapsed;
        if remaining <= 0.0 {
            self.seek = None;
            self.route_home();
            return Ok(());
        }
        let robot_pos = self.world.robot.position;
        let robot_heading = self.world.robot.heading;
        let faces = perceive_faces(
            &self.world,
            robot_pos,
            robot_heading,
            self.cfg.planning.fov_deg.to_radians(),
            self.cfg.planning.max_range_m,
            &self.cfg.percept,
            &mut self.rng_percept,
        );
        let candidates: Vec<_> = faces
            .iter()
            .filter(|f| f.face_center_height >= self.cfg.planning.min_candidate_height_m)
            .collect();
        if candidates.is_empty() && self.world.robot.route.is_none() {
            // nothing in view: scan by rotating in place
            self.world.robot.heading =
                crate::geom::wrap_angle(self.world.robot.heading + 1.5 * self.cfg.dt);
        }

        // visits count on true proximity
        let mut newly_visited = Vec::new();
        for agent in &self.world.agents {
            let is_helper = self.cfg.helpers.iter().any(|h| h.id == agent.id);
            if is_helper
                && !seek.visited.contains(&agent.id)
                && agent.position.dist(robot_pos) <= self.cfg.planning.visit_radius_m
            {
                newly_visited.push(agent.id.clone());
            }
        }
        for id in newly_visited {
            seek.visited.insert(id.clone());
            self.log.push(Record::Visit { t: now, node: id });
        }

        let nodes: Vec<HelpNode<Real>> = candidates
            .iter()
            .map(|f| {
                node_from_face(
                    f,
                    robot_pos,
                    robot_heading,
                    &self.cfg.planning.helpfulness,
                    seek.visited.contains(&f.agent_id),
                )
            })
            .collect();
        if nodes.iter().all(|n| n.visited) {
            // nothing left worth visiting
            if !nodes.is_empty() || seek.visited.len() == self.cfg.helpers.len() {
                self.seek = None;
                self.route_home();
                return Ok(());
            }
        }

        // travel costs from grid paths between estimated positions
        let mut places: Vec<Vec2> = vec![robot_pos];
        places.extend(nodes.iter().map(|n| Vec2::new(n.position[0], n.position[1])));
        let speed = self.world.robot.speed;
        let cost = CostMatrix::from_fn(nodes.len(), |i, j| {
            let (a, b) = (places[i], places[j]);
            match (self.world.map.cell_of(a), self.world.map.cell_of(b)) {
                (Some(ca), Some(cb)) => match astar::<Real>(&self.grid, ca, cb) {
                    Ok(p) => travel_time(&p, speed, self.grid.cell_size),
                    Err(_) => a.dist(b) / speed,
                },
                _ => a.dist(b) / speed,
            }
        });
        let plan = plan_tour(&nodes, &cost, remaining);
        if plan.node_ids != seek.last_tour {
            seek.last_tour = plan.node_ids.clone();
            self.log.push(Record::Tour {
                t: now,
                nodes: plan.node_ids.clone(),
                reward: plan.total_reward,
                cost_s: plan.total_cost,
                budget_s: remaining,
            });
        }
        if let Some(&first) = plan.order.first() {
            let target_id = nodes[first].id.clone();
            if seek.routed_to.as_deref() != Some(&target_id) || self.world.robot.route.is_none() {
                seek.routed_to = Some(target_id.clone());
                let target = Vec2::new(nodes[first].position[0], nodes[first].position[1]);
                if let (Some(s), Some(g)) =
                    (self.world.map.cell_of(robot_pos), self.world.map.cell_of(target))
                {
                    if let Ok(path) = astar::<Real>(&self.grid, s, g) {
                        self.world.robot.follow(path.polyline(&self.grid));
                        self.world.robot.mode = RobotMode::SeekingHelp;
                    }
                }
            }
        }
        Ok(())
    }
}

fn kind_name(kind: SensorKind) -> &'static str {
    match kind {
        SensorKind::Pressure => "pressure",
        SensorKind::Contact => "contact",
        SensorKind::Pir => "pir",
    }
}

fn heading_default(cfg: &ScenarioConfig) -> Real {
    // face the centroid of the helpers, if any
    if cfg.helpers.is_empty() {
        return 0.0;
    }
    let mut cx = 0.0;
    let mut cy = 0.0;
    for h in &cfg.helpers {
        cx += h.position.x;
        cy += h.position.y;
    }
    let n = cfg.helpers.len() as Real;
    let centroid = Vec2::new(cx / n, cy / n);
    centroid.sub(cfg.robot.start).azimuth()
}

/// Execute a scenario to completion.
pub fn run_scenario(
    cfg: &ScenarioConfig,
    map: HomeMap,
) -> Result<(EventLog, RunMetrics), ScenarioError> {
    Runner::new(cfg, map)?.run()
}
