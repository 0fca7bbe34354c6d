//! Trend filtering for gas signals: models a window as consecutive
//! exponential segments `y(t) = a*e^(b*t) + c` and reports change points at
//! the segment boundaries.
//!
//! Segmentation is greedy top-down: fit one exponential to the window; if the
//! RMSE exceeds the tolerance, split at the sample of maximum residual and
//! recurse. A split is kept only when it actually reduces the total squared
//! error by more than the split penalty, so adding a split never increases
//! the total residual.

use serde::{Deserialize, Serialize};

use crate::detect::DetectError;
use crate::scalar::{cast, Scalar};

/// One fitted segment over `[start_index, end_index)` of the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendSegment<T> {
    pub start_index: usize,
    pub end_index: usize,
    /// Parameters of `y(u) = a*e^(b*u) + c`, with `u` seconds from the
    /// segment start.
    pub a: T,
    pub b: T,
    pub c: T,
    /// RMSE of the fit in sensor units.
    pub residual: T,
}

impl<T: Scalar> TrendSegment<T> {
    /// Fitted slope at `u` seconds from the segment start.
    pub fn slope_at(&self, u: T) -> T {
        self.a * self.b * (self.b * u).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Rising,
    Falling,
}

/// Boundary between two exponential segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangePoint {
    /// Window index of the first sample of the right segment.
    pub index: usize,
    /// Sign of the incoming segment's slope at the boundary.
    pub direction: Direction,
}

/// Tuning for [`trend_filter`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrendConfig {
    /// RMSE above which a segment is considered for splitting.
    pub epsilon: f64,
    /// Minimum total squared error a split must remove to be kept.
    pub split_penalty: f64,
    /// Minimum samples per segment.
    pub min_segment_len: usize,
}

impl Default for TrendConfig {
    fn default() -> Self {
        TrendConfig { epsilon: 1.5, split_penalty: 0.0, min_segment_len: 4 }
    }
}

struct Fit<T> {
    a: T,
    b: T,
    c: T,
    sse: T,
    rmse: T,
}

/// Least-squares line through `(u, w)` points; returns (intercept, slope).
fn linear_fit<T: Scalar>(us: &[T], ws: &[T]) -> (T, T) {
    let n = cast::<T>(us.len() as f64);
    let su: T = us.iter().copied().sum();
    let sw: T = ws.iter().copied().sum();
    let suu: T = us.iter().map(|u| *u * *u).sum();
    let suw: T = us.iter().zip(ws).map(|(u, w)| *u * *w).sum();
    let denom = n * suu - su * su;
    if denom.abs() <= T::epsilon() * suu.abs().max(T::one()) {
        (sw / n, T::zero())
    } else {
        let slope = (n * suw - su * sw) / denom;
        let intercept = (sw - slope * su) / n;
        (intercept, slope)
    }
}

/// Fit `a*e^(b*u) + c` for a fixed offset `c` via log-domain least squares.
/// `sign` selects the orientation of `y - c`. Returns `None` when any
/// shifted value is non-positive.
fn fit_given_offset<T: Scalar>(us: &[T], ys: &[T], c: T, sign: T) -> Option<Fit<T>> {
    let mut ws = Vec::with_capacity(ys.len());
    for y in ys {
        let z = sign * (*y - c);
        if z <= T::zero() {
            return None;
        }
        ws.push(z.ln());
    }
    let (alpha, b) = linear_fit(us, &ws);
    let a = sign * alpha.exp();
    let mut sse = T::zero();
    for (u, y) in us.iter().zip(ys) {
        let pred = a * (b * *u).exp() + c;
        if !pred.is_finite() {
            return None;
        }
        let e = *y - pred;
        sse += e * e;
    }
    let rmse = (sse / cast::<T>(ys.len() as f64)).sqrt();
    Some(Fit { a, b, c, sse, rmse })
}

fn constant_fit<T: Scalar>(ys: &[T]) -> Fit<T> {
    let n = cast::<T>(ys.len() as f64);
    let mean = ys.iter().copied().sum::<T>() / n;
    let sse = ys.iter().map(|y| (*y - mean) * (*y - mean)).sum();
    Fit { a: T::zero(), b: T::zero(), c: mean, sse, rmse: (sse / n).sqrt() }
}

/// Best single-exponential fit to a window: offset candidates on both
/// orientations (growing/decaying with `a > 0`, saturating with `a < 0`),
/// each refined by golden-section search, with a constant fallback for
/// degenerate data.
fn fit_exponential<T: Scalar>(us: &[T], ys: &[T]) -> Fit<T> {
    let lo = ys.iter().copied().fold(T::infinity(), T::min);
    let hi = ys.iter().copied().fold(T::neg_infinity(), T::max);
    let range = hi - lo;
    let mut best = constant_fit(ys);
    if range <= T::zero() {
        return best;
    }
    let deltas = [1e-3, 1e-2, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0];
    // orientation: (offset below min, a > 0) and (offset above max, a < 0)
    for (sign, base) in [(T::one(), lo), (-T::one(), hi)] {
        let mut best_delta: Option<(T, T)> = None; // (delta, sse)
        for d in deltas {
            let delta = range * cast::<T>(d);
            let c = base - sign * delta;
            if let Some(fit) = fit_given_offset(us, ys, c, sign) {
                if best_delta.map_or(true, |(_, sse)| fit.sse < sse) {
                    best_delta = Some((delta, fit.sse));
                }
                if fit.sse < best.sse {
                    best = fit;
                }
            }
        }
        // golden-section refinement around the best coarse delta (log scale)
        if let Some((delta0, _)) = best_delta {
            let phi = cast::<T>(0.618_033_988_749_894_9);
            let mut a_log = (delta0 * cast::<T>(0.05)).ln();
            let mut b_log = (delta0 * cast::<T>(20.0)).ln();
            let eval = |dl: T| -> T {
                let c = base - sign * dl.exp();
                fit_given_offset(us, ys, c, sign).map(|f| f.sse).unwrap_or_else(T::infinity)
            };
            let mut x1 = b_log - phi * (b_log - a_log);
            let mut x2 = a_log + phi * (b_log - a_log);
            let mut f1 = eval(x1);
            let mut f2 = eval(x2);
            for _ in 0..80 {
                if f1 < f2 {
                    b_log = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b_log - phi * (b_log - a_log);
                    f1 = eval(x1);
                } else {
                    a_log = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a_log + phi * (b_log - a_log);
                    f2 = eval(x2);
                }
            }
            let dl = if f1 < f2 { x1 } else { x2 };
            if let Some(fit) = fit_given_offset(us, ys, base - sign * dl.exp(), sign) {
                if fit.sse < best.sse {
                    best = fit;
                }
            }
        }
    }
    best
}

fn segment_fit<T: Scalar>(ts: &[T], ys: &[T], start: usize, end: usize) -> (TrendSegment<T>, T) {
    let t0 = ts[start];
    let us: Vec<T> = ts[start..end].iter().map(|t| *t - t0).collect();
    let fit = fit_exponential(&us, &ys[start..end]);
    (
        TrendSegment {
            start_index: start,
            end_index: end,
            a: fit.a,
            b: fit.b,
            c: fit.c,
            residual: fit.rmse,
        },
        fit.sse,
    )
}

fn max_residual_index<T: Scalar>(ts: &[T], ys: &[T], seg: &TrendSegment<T>) -> usize {
    let t0 = ts[seg.start_index];
    let mut best_idx = seg.start_index;
    let mut best_err = T::neg_infinity();
    for i in seg.start_index..seg.end_index {
        let u = ts[i] - t0;
        let pred = seg.a * (seg.b * u).exp() + seg.c;
        let err = (ys[i] - pred).abs();
        if err > best_err {
            best_err = err;
            best_idx = i;
        }
    }
    best_idx
}

/// Segment a window into exponential pieces and report the change points
/// between them.
///
/// `samples` are `(t_seconds, reading)` pairs; the window must hold at least
/// 8 samples. Change-point direction is the sign of the incoming (right)
/// segment's slope at the boundary.
pub fn trend_filter<T: Scalar>(
    samples: &[(T, T)],
    cfg: &TrendConfig,
) -> Result<(Vec<TrendSegment<T>>, Vec<ChangePoint>), DetectError> {
    if samples.len() < 8 {
        return Err(DetectError::WindowTooShort { got: samples.len(), min: 8 });
    }
    let ts: Vec<T> = samples.iter().map(|s| s.0).collect();
    let ys: Vec<T> = samples.iter().map(|s| s.1).collect();
    let epsilon = cast::<T>(cfg.epsilon);
    let penalty = cast::<T>(cfg.split_penalty);
    let min_len = cfg.min_segment_len.max(2);

    let mut segments = Vec::new();
    let mut stack = vec![segment_fit(&ts, &ys, 0, ys.len())];
    while let Some((seg, sse)) = stack.pop() {
        let len = seg.end_index - seg.start_index;
        let splittable = len >= 2 * min_len && seg.residual > epsilon;
        let mut split_done = false;
        if splittable {
            let raw = max_residual_index(&ts, &ys, &seg);
            let split = raw.clamp(seg.start_index + min_len, seg.end_index - min_len);
            let (left, left_sse) = segment_fit(&ts, &ys, seg.start_index, split);
            let (right, right_sse) = segment_fit(&ts, &ys, split, seg.end_index);
            // keep the split only when it pays for itself
            if left_sse + right_sse + penalty < sse {
                stack.push((right, right_sse));
                stack.push((left, left_sse));
                split_done = true;
            }
        }
        if !split_done {
            segments.push(seg);
        }
    }
    segments.sort_by_key(|s| s.start_index);

    let mut change_points = Vec::new();
    for pair in segments.windows(2) {
        let right = &pair[1];
        let slope = right.slope_at(T::zero());
        change_points.push(ChangePoint {
            index: right.start_index,
            direction: if slope >= T::zero() { Direction::Rising } else { Direction::Falling },
        });
    }
    Ok((segments, change_points))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_signal(f: impl Fn(f64) -> f64, n: usize, dt: f64) -> Vec<(f64, f64)> {
        (0..n).map(|i| (i as f64 * dt, f(i as f64 * dt))).collect()
    }

    fn cfg() -> TrendConfig {
        TrendConfig { epsilon: 0.05, split_penalty: 0.0, min_segment_len: 4 }
    }

    #[test]
    fn pure_exponential_decay_is_one_segment() {
        let samples = sample_signal(|t| 5.0 * (-t / 3.0).exp() + 2.0, 100, 0.1);
        let (segments, cps) = trend_filter(&samples, &cfg()).unwrap();
        assert_eq!(segments.len(), 1, "residual {}", segments[0].residual);
        assert!(cps.is_empty());
        assert!(segments[0].residual < 1e-6, "rmse {}", segments[0].residual);
        assert!((segments[0].c - 2.0).abs() < 1e-3);
        assert!((segments[0].b + 1.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn constant_signal_is_one_flat_segment() {
        let samples = sample_signal(|_| 7.5, 50, 0.1);
        let (segments, cps) = trend_filter(&samples, &cfg()).unwrap();
        assert_eq!(segments.len(), 1);
        assert!(cps.is_empty());
        assert!(segments[0].b.abs() < 1e-9);
        assert!((segments[0].c + segments[0].a - 7.5).abs() < 1e-9);
    }

    #[test]
    fn rise_then_decay_junction_is_recovered() {
        // rise with tau = 2 s for 10 s, then decay with tau = 60 s
        let peak = 100.0 * (1.0 - (-10.0f64 / 2.0).exp());
        let f = |t: f64| {
            if t < 10.0 {
                100.0 * (1.0 - (-t / 2.0).exp())
            } else {
                peak * (-(t - 10.0) / 60.0).exp()
            }
        };
        let samples = sample_signal(f, 400, 0.1);
        let (segments, cps) = trend_filter(&samples, &cfg()).unwrap();
        assert!(!cps.is_empty(), "segments: {segments:?}");
        let true_junction = 100; // t = 10 s at dt = 0.1
        let nearest = cps.iter().map(|c| c.index as i64).min_by_key(|i| (i - true_junction).abs()).unwrap();
        assert!(
            (nearest - true_junction).abs() <= 2,
            "junction found at {nearest}, expected near {true_junction}"
        );
        let junction_cp = cps.iter().find(|c| (c.index as i64 - true_junction).abs() <= 2).unwrap();
        assert_eq!(junction_cp.direction, Direction::Falling);
    }

    #[test]
    fn brute_force_best_split_agrees_with_construction() {
        // oracle: evaluate every split position, the best two-segment SSE
        // must sit at the constructed junction
        let f = |t: f64| {
            if t < 6.0 {
                50.0 * (1.0 - (-t / 2.0).exp())
            } else {
                47.5 * (-(t - 6.0) / 20.0).exp()
            }
        };
        let samples = sample_signal(f, 160, 0.1);
        let ts: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let mut best = (usize::MAX, f64::INFINITY);
        for split in 4..(samples.len() - 4) {
            let (_, sse_l) = segment_fit(&ts, &ys, 0, split);
            let (_, sse_r) = segment_fit(&ts, &ys, split, samples.len());
            if sse_l + sse_r < best.1 {
                best = (split, sse_l + sse_r);
            }
        }
        assert!((best.0 as i64 - 60).abs() <= 2, "best split {}", best.0);
    }

    #[test]
    fn segments_partition_the_window() {
        let f = |t: f64| {
            if t < 5.0 {
                30.0 * (1.0 - (-t / 1.5).exp())
            } else if t < 12.0 {
                28.0 * (-(t - 5.0) / 10.0).exp()
            } else {
                14.0 + 10.0 * (1.0 - (-(t - 12.0) / 2.0).exp())
            }
        };
        let samples = sample_signal(f, 250, 0.1);
        let (segments, _) = trend_filter(&samples, &cfg()).unwrap();
        assert_eq!(segments[0].start_index, 0);
        assert_eq!(segments.last().unwrap().end_index, 250);
        for pair in segments.windows(2) {
            assert_eq!(pair[0].end_index, pair[1].start_index);
        }
    }

    #[test]
    fn split_never_increases_total_squared_error() {
        let f = |t: f64| {
            if t < 8.0 {
                20.0 * (1.0 - (-t / 2.0).exp())
            } else {
                19.6 * (-(t - 8.0) / 30.0).exp()
            }
        };
        let samples = sample_signal(f, 200, 0.1);
        let ts: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let (_, parent_sse) = segment_fit(&ts, &ys, 0, 200);
        let (segments, _) = trend_filter(&samples, &cfg()).unwrap();
        let total: f64 = segments
            .iter()
            .map(|s| s.residual * s.residual * (s.end_index - s.start_index) as f64)
            .sum();
        assert!(total <= parent_sse + 1e-9, "total {total} parent {parent_sse}");
    }

    #[test]
    fn short_window_is_rejected() {
        let samples = sample_signal(|t| t, 5, 0.1);
        assert!(matches!(
            trend_filter(&samples, &cfg()),
            Err(DetectError::WindowTooShort { got: 5, min: 8 })
        ));
    }

    #[test]
    fn works_in_f32() {
        let samples: Vec<(f32, f32)> = (0..80)
            .map(|i| {
                let t = i as f32 * 0.1;
                (t, 5.0 * (-t / 3.0).exp() + 2.0)
            })
            .collect();
        let cfg = TrendConfig { epsilon: 0.05, split_penalty: 0.0, min_segment_len: 4 };
        let (segments, cps) = trend_filter(&samples, &cfg).unwrap();
        assert_eq!(segments.len(), 1);
        assert!(cps.is_empty());
    }
}
