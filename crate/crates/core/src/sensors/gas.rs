//! Gas sensor simulation: Gaussian puff plume plus an asymmetric first-order
//! sensor lag (fast rise, slow decay), matching the documented behavior of a
//! metal-oxide air-quality sensor whose readings take on the order of a
//! minute to revert after exposure.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::Real;

/// Plume and sensor-dynamics parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GasConfig {
    /// Resting reading in sensor units.
    pub baseline: Real,
    /// Per-puff amplitude at zero distance, sensor units.
    pub amplitude: Real,
    /// Gaussian plume spread, meters.
    pub sigma_m: Real,
    /// Exponential puff lifetime, seconds.
    pub puff_tau_s: Real,
    /// Sensor rise time constant, seconds.
    pub rise_tau_s: Real,
    /// Sensor decay time constant, seconds.
    pub decay_tau_s: Real,
    /// Additive Gaussian noise std as a fraction of `amplitude`; 0 disables.
    pub noise_frac: Real,
}

impl Default for GasConfig {
    fn default() -> Self {
        GasConfig {
            baseline: 400.0,
            amplitude: 60.0,
            sigma_m: 0.5,
            puff_tau_s: 30.0,
            rise_tau_s: 2.0,
            decay_tau_s: 60.0,
            noise_frac: 0.01,
        }
    }
}

/// One timestamped gas reading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasSample {
    pub timestamp: Real,
    pub reading: Real,
}

/// Pure asymmetric first-order lag: rises with `rise_tau_s`, decays with
/// `decay_tau_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasLag {
    pub reading: Real,
}

impl GasLag {
    pub fn new(initial: Real) -> Self {
        GasLag { reading: initial }
    }

    /// Advance toward `target` by `dt`; returns the new reading.
    pub fn step(&mut self, target: Real, dt: Real, cfg: &GasConfig) -> Real {
        let tau = if target > self.reading { cfg.rise_tau_s } else { cfg.decay_tau_s };
        let k = 1.0 - (-dt / tau).exp();
        self.reading += (target - self.reading) * k;
        self.reading
    }
}

/// A simulated gas sensor embedded in the world: position, lag state, and the
/// last noisy sample.
#[derive(Debug, Clone, PartialEq)]
pub struct GasSensorSim {
    pub position: Vec2,
    pub lag: GasLag,
    pub last_sample: Real,
    pub last_timestamp: Real,
}

impl GasSensorSim {
    pub fn new(position: Vec2, cfg: &GasConfig) -> Self {
        GasSensorSim {
            position,
            lag: GasLag::new(cfg.baseline),
            last_sample: cfg.baseline,
            last_timestamp: 0.0,
        }
    }

    pub(crate) fn step(&mut self, target: Real, dt: Real, cfg: &GasConfig, rng: &mut ChaCha8Rng) {
        let clean = self.lag.step(target, dt, cfg);
        let noisy = if cfg.noise_frac > 0.0 {
            clean + gaussian(rng) * cfg.noise_frac * cfg.amplitude
        } else {
            clean
        };
        // readings never drop below the physical floor
        self.last_sample = noisy.max(0.0);
        self.last_timestamp += dt;
    }

    pub fn sample(&self) -> GasSample {
        GasSample { timestamp: self.last_timestamp, reading: self.last_sample }
    }
}

/// Standard normal draw via Box-Muller; two uniforms per call keeps the
/// stream layout independent of caller history.
pub(crate) fn gaussian(rng: &mut ChaCha8Rng) -> Real {
    let u1: Real = rng.gen_range(1e-12..1.0);
    let u2: Real = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Current sample of the sensor nearest to `sensor_position` (within 1 cm),
/// or `None` when no sensor sits there.
pub fn sample_gas(state: &crate::world::WorldState, sensor_position: Vec2) -> Option<GasSample> {
    state
        .gas_sensors
        .iter()
        .find(|s| s.position.dist(sensor_position) < 0.01)
        .map(|s| s.sample())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{step_world, AgentState, HomeMap, WorldState};

    #[test]
    fn no_agents_reading_stays_at_baseline() {
        let cfg = GasConfig::default();
        let mut w = WorldState::new(HomeMap::bundled_apartment(), Vec2::new(1.45, 2.65), 3);
        w.add_gas_sensor(Vec2::new(1.45, 2.65));
        for _ in 0..600 {
            step_world(&mut w, 0.1);
        }
        let s = sample_gas(&w, Vec2::new(1.45, 2.65)).unwrap();
        let noise_bound = 6.0 * cfg.noise_frac * cfg.amplitude;
        assert!((s.reading - cfg.baseline).abs() < noise_bound, "reading {}", s.reading);
    }

    #[test]
    fn step_response_reaches_63_percent_after_rise_tau() {
        // analytic first-order step response: 1 - exp(-t / tau)
        let cfg = GasConfig::default();
        let mut lag = GasLag::new(cfg.baseline);
        let target = cfg.baseline + cfg.amplitude;
        let dt = 0.01;
        let steps = (cfg.rise_tau_s / dt).round() as usize;
        for _ in 0..steps {
            lag.step(target, dt, &cfg);
        }
        let frac = (lag.reading - cfg.baseline) / cfg.amplitude;
        assert!((frac - 0.632).abs() < 0.01, "frac = {frac}");
    }

    #[test]
    fn reading_reverts_toward_baseline_in_one_to_three_minutes() {
        // agent exhaling 0.3 m away for 30 s, then leaving
        let mut w = WorldState::new(HomeMap::bundled_apartment(), Vec2::new(1.45, 2.65), 11);
        let sensor_pos = Vec2::new(1.5, 1.5);
        w.add_gas_sensor(sensor_pos);
        let mut a = AgentState::new("p", Vec2::new(1.8, 1.5));
        a.breathing_interval = Some(4.0);
        w.add_agent(a);
        for _ in 0..300 {
            step_world(&mut w, 0.1);
        }
        // teleport far away and stop breathing
        {
            let agent = w.agent_mut("p").unwrap();
            agent.position = Vec2::new(2.8, 0.3);
            agent.breathing_interval = None;
        }
        w.exhalations.clear();
        let leave_t = w.clock;
        let cfg = w.gas_cfg.clone();
        let mut reverted_at = None;
        for _ in 0..3000 {
            step_world(&mut w, 0.1);
            let s = sample_gas(&w, sensor_pos).unwrap();
            if (s.reading - cfg.baseline).abs() <= 0.05 * cfg.baseline {
                reverted_at = Some(w.clock - leave_t);
                break;
            }
        }
        let t = reverted_at.expect("reading reverts");
        assert!((60.0..=180.0).contains(&t), "reversion took {t} s");
    }

    #[test]
    fn reading_is_continuous_in_time() {
        let mut w = WorldState::new(HomeMap::bundled_apartment(), Vec2::new(1.45, 2.65), 5);
        let sensor_pos = Vec2::new(1.5, 1.5);
        w.add_gas_sensor(sensor_pos);
        let mut a = AgentState::new("p", Vec2::new(1.7, 1.5));
        a.breathing_interval = Some(3.0);
        w.add_agent(a);
        let dt = 0.1;
        let cfg = w.gas_cfg.clone();
        let mut prev = sample_gas(&w, sensor_pos).unwrap().reading;
        let mut max_target = 0.0f64;
        for _ in 0..1200 {
            step_world(&mut w, dt);
            let target_excess = w.plume_excess(sensor_pos);
            max_target = max_target.max(target_excess);
            let cur = sample_gas(&w, sensor_pos).unwrap().reading;
            let noise_bound = 2.0 * 6.0 * cfg.noise_frac * cfg.amplitude;
            let bound = max_target / cfg.rise_tau_s * dt + noise_bound;
            assert!((cur - prev).abs() <= bound, "jump {} > bound {}", (cur - prev).abs(), bound);
            prev = cur;
        }
    }

    #[test]
    fn noise_disabled_makes_sampling_pure() {
        let run = || {
            let mut w = WorldState::new(HomeMap::bundled_apartment(), Vec2::new(1.45, 2.65), 9);
            w.gas_cfg.noise_frac = 0.0;
            let pos = Vec2::new(1.5, 1.5);
            w.add_gas_sensor(pos);
            let mut a = AgentState::new("p", Vec2::new(1.7, 1.5));
            a.breathing_interval = Some(4.0);
            w.add_agent(a);
            let mut out = Vec::new();
            for _ in 0..200 {
                step_world(&mut w, 0.1);
                out.push(sample_gas(&w, pos).unwrap().reading.to_bits());
            }
            out
        };
        assert_eq!(run(), run());
    }
}
