//! Breath-presence detection: a two-state machine (human close or far) with
//! two adaptive thresholds that sandwich the current sensor value.
//!
//! While the signal drifts in the expected direction for the current state
//! (rising when close, falling when far) the thresholds re-center around the
//! reading; an excursion against that drift that crosses a threshold flips
//! the state.

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

use crate::scalar::{cast, Scalar};

/// Belief about whether a person is near the sensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Presence {
    Close,
    Far,
}

/// Emitted when the state flips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition<T> {
    pub to: Presence,
    pub reading: T,
}

/// The sandwich state machine. Invariant: `lower < last_reading < upper`
/// after every step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichState<T: Scalar> {
    pub presence: Presence,
    pub upper: T,
    pub lower: T,
    pub margin: T,
    pub last_reading: T,
}

impl<T: Scalar> SandwichState<T> {
    /// Start in `Far` with thresholds sandwiching the first reading.
    pub fn new(initial_reading: T, margin: T) -> Self {
        SandwichState {
            presence: Presence::Far,
            upper: initial_reading + margin,
            lower: initial_reading - margin,
            margin,
            last_reading: initial_reading,
        }
    }

    fn sandwich(&mut self, reading: T) {
        self.upper = reading + self.margin;
        self.lower = reading - self.margin;
    }
}

/// One step of the sandwich machine. Total function; at most one transition
/// per sample, and transitions strictly alternate Close/Far.
pub fn breath_step<T: Scalar>(
    mut s: SandwichState<T>,
    reading: T,
) -> (SandwichState<T>, Option<Transition<T>>) {
    let rising = reading > s.last_reading;
    let falling = reading < s.last_reading;
    let mut event = None;
    if (s.presence == Presence::Close && rising) || (s.presence == Presence::Far && falling) {
        // expected drift: adapt, no event
        s.sandwich(reading);
    } else if reading >= s.upper {
        if s.presence == Presence::Far {
            s.presence = Presence::Close;
            event = Some(Transition { to: Presence::Close, reading });
        }
        s.sandwich(reading);
    } else if reading <= s.lower {
        if s.presence == Presence::Close {
            s.presence = Presence::Far;
            event = Some(Transition { to: Presence::Far, reading });
        }
        s.sandwich(reading);
    }
    s.last_reading = reading;
    (s, event)
}

/// Margin adaptation parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BreathConfig {
    /// Margin as a multiple of the estimated noise std.
    pub margin_mult: f64,
    /// Absolute margin floor, sensor units.
    pub margin_min: f64,
    /// Trailing window for noise re-estimation, seconds.
    pub noise_window_s: f64,
    /// Sample period of the feed, seconds.
    pub sample_dt_s: f64,
}

impl Default for BreathConfig {
    fn default() -> Self {
        BreathConfig { margin_mult: 3.0, margin_min: 0.5, noise_window_s: 30.0, sample_dt_s: 0.1 }
    }
}

/// Robust noise estimate: 1.4826 * MAD of the first differences, over
/// sqrt(2). Robust to trend and to occasional large exhalation steps.
fn estimate_noise_std<T: Scalar>(readings: &VecDeque<T>) -> T {
    if readings.len() < 8 {
        return T::zero();
    }
    let mut diffs: Vec<T> = readings
        .iter()
        .zip(readings.iter().skip(1))
        .map(|(a, b)| *b - *a)
        .collect();
    let med = median_in_place(&mut diffs);
    let mut dev: Vec<T> = diffs.iter().map(|d| (*d - med).abs()).collect();
    let mad = median_in_place(&mut dev);
    mad * cast::<T>(1.4826) / cast::<T>(std::f64::consts::SQRT_2)
}

fn median_in_place<T: Scalar>(v: &mut [T]) -> T {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite readings"));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / cast::<T>(2.0)
    }
}

/// Sandwich machine plus trailing-window margin re-estimation. The caller
/// owns the detector value and feeds it one sample at a time.
#[derive(Debug, Clone)]
pub struct BreathDetector<T: Scalar> {
    pub state: SandwichState<T>,
    cfg: BreathConfig,
    window: VecDeque<T>,
    window_len: usize,
}

impl<T: Scalar> BreathDetector<T> {
    pub fn new(initial_reading: T, cfg: BreathConfig) -> Self {
        let window_len = (cfg.noise_window_s / cfg.sample_dt_s).round().max(8.0) as usize;
        let margin = cast::<T>(cfg.margin_min);
        BreathDetector {
            state: SandwichState::new(initial_reading, margin),
            cfg,
            window: VecDeque::with_capacity(window_len + 1),
            window_len,
        }
    }

    /// Re-estimate the margin, then advance the sandwich machine.
    pub fn step(&mut self, reading: T) -> Option<Transition<T>> {
        self.window.push_back(reading);
        if self.window.len() > self.window_len {
            self.window.pop_front();
        }
        let sigma = estimate_noise_std(&self.window);
        let margin = (sigma * cast::<T>(self.cfg.margin_mult)).max(cast::<T>(self.cfg.margin_min));
        self.state.margin = margin;
        let (next, event) = breath_step(self.state, reading);
        self.state = next;
        event
    }

    pub fn presence(&self) -> Presence {
        self.state.presence
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn invariant_holds(s: &SandwichState<f64>) -> bool {
        s.lower < s.last_reading && s.last_reading < s.upper
    }

    #[test]
    fn constant_signal_never_transitions() {
        let mut s = SandwichState::new(400.0, 3.0);
        for _ in 0..10_000 {
            let (next, event) = breath_step(s, 400.0);
            s = next;
            assert!(event.is_none());
            assert!(invariant_holds(&s));
        }
        assert_eq!(s.presence, Presence::Far);
    }

    #[test]
    fn jump_above_upper_flips_to_close() {
        let s = SandwichState::new(400.0, 3.0);
        let (s, event) = breath_step(s, 400.0 + 10.0 * 3.0);
        assert_eq!(event.map(|e| e.to), Some(Presence::Close));
        assert_eq!(s.presence, Presence::Close);
        assert!(invariant_holds(&s));
    }

    #[test]
    fn drop_below_lower_flips_back_to_far() {
        let s = SandwichState::new(400.0, 3.0);
        let (s, _) = breath_step(s, 430.0);
        let (s, event) = breath_step(s, 400.0);
        assert_eq!(event.map(|e| e.to), Some(Presence::Far));
        assert!(invariant_holds(&s));
    }

    #[test]
    fn expected_drift_adapts_without_event() {
        // Far and falling: thresholds follow the signal down
        let mut s = SandwichState::new(400.0, 3.0);
        for i in 1..=100 {
            let r = 400.0 - i as f64 * 0.5;
            let (next, event) = breath_step(s, r);
            s = next;
            assert!(event.is_none());
            assert!(invariant_holds(&s));
        }
        assert_eq!(s.presence, Presence::Far);
        assert!((s.upper - (350.0 + 3.0)).abs() < 1e-9);
    }

    #[test]
    fn transitions_strictly_alternate() {
        let mut s = SandwichState::new(0.0, 1.0);
        let mut last = None;
        let mut x = 88172645463325252u64;
        let mut level = 0.0;
        for _ in 0..50_000 {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            level += (x % 1000) as f64 / 50.0 - 10.0;
            let (next, event) = breath_step(s, level);
            s = next;
            assert!(invariant_holds(&s));
            if let Some(e) = event {
                if let Some(prev) = last {
                    assert_ne!(prev, e.to, "transitions must alternate");
                }
                last = Some(e.to);
            }
        }
    }

    #[test]
    fn scaling_readings_and_margin_by_powers_of_two_preserves_transitions() {
        let signal: Vec<f64> = (0..2000)
            .map(|i| {
                let t = i as f64 * 0.1;
                400.0 + 30.0 * (t / 7.0).sin() + 5.0 * (t * 3.1).cos()
            })
            .collect();
        let run = |k: f64| {
            let mut s = SandwichState::new(signal[0] * k, 2.0 * k);
            let mut transitions = Vec::new();
            for (i, r) in signal.iter().enumerate().skip(1) {
                let (next, event) = breath_step(s, r * k);
                s = next;
                if let Some(e) = event {
                    transitions.push((i, e.to));
                }
            }
            transitions
        };
        let base = run(1.0);
        assert!(!base.is_empty());
        for k in [0.25, 2.0, 1024.0] {
            assert_eq!(run(k), base, "scale {k}");
        }
    }

    #[test]
    fn adaptive_margin_tracks_noise_scale() {
        let mut det = BreathDetector::new(400.0, BreathConfig::default());
        let mut x = 7u64;
        for _ in 0..600 {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let noise = (x % 10_000) as f64 / 10_000.0 - 0.5;
            det.step(400.0 + noise * 2.0);
        }
        // uniform(-1, 1) has std ~0.577; the estimate should be in that region
        let m = det.state.margin;
        assert!(m > 0.5 && m < 4.0, "margin {m}");
    }

    #[test]
    fn works_in_f32() {
        let mut s = SandwichState::<f32>::new(400.0, 3.0);
        let (next, event) = breath_step(s, 440.0f32);
        s = next;
        assert_eq!(event.map(|e| e.to), Some(Presence::Close));
        assert!(s.lower < s.last_reading && s.last_reading < s.upper);
    }

    proptest! {
        #[test]
        fn sandwich_invariant_holds_on_random_walks(
            start in -1000.0f64..1000.0,
            steps in proptest::collection::vec(-5.0f64..5.0, 1..200),
            margin in 0.01f64..10.0,
        ) {
            let mut s = SandwichState::new(start, margin);
            let mut level = start;
            for d in steps {
                level += d;
                let (next, _event) = breath_step(s, level);
                s = next;
                prop_assert!(s.lower < s.last_reading && s.last_reading < s.upper);
            }
        }
    }
}
