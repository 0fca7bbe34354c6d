//! Playful reaching trajectories: a straight seed blended toward a half-sine
//! offset curve by metric-preconditioned gradient descent.
//!
//! The objective is quadratic,
//! `U = sum ||x_{i+1} - x_i||^2 + lambda * sum ||x_i - c_i||^2`,
//! minimized over the interior waypoints with both endpoints pinned. Descent
//! preconditions the gradient with the smoothness metric (the interior
//! second-difference operator) and backtracks the step size whenever the
//! objective would increase, so accepted iterates never go uphill.

use crate::motion::MotionError;
use crate::scalar::{cast, to_f64, Scalar};

/// Fixed-endpoint waypoint sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T, const D: usize> {
    pub waypoints: Vec<[T; D]>,
    /// Seconds between consecutive waypoints.
    pub dt_waypoint: T,
}

impl<T: Scalar, const D: usize> Trajectory<T, D> {
    pub fn start(&self) -> [T; D] {
        self.waypoints[0]
    }

    pub fn goal(&self) -> [T; D] {
        *self.waypoints.last().expect("trajectory has waypoints")
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    /// CSV export, one waypoint per line: `t,x,y[,z]`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(match D {
            2 => "t,x,y\n",
            _ => "t,x,y,z\n",
        });
        for (i, wp) in self.waypoints.iter().enumerate() {
            let t = to_f64(self.dt_waypoint) * i as f64;
            out.push_str(&format!("{t}"));
            for coord in wp.iter() {
                out.push_str(&format!(",{}", to_f64(*coord)));
            }
            out.push('\n');
        }
        out
    }
}

/// Optimizer parameters and safety bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayfulParams<T, const D: usize> {
    /// Peak perpendicular offset of the play targets, meters.
    pub amplitude: T,
    /// Weight of the play term.
    pub lambda: T,
    /// Initial step size.
    pub step_size: T,
    pub max_iters: usize,
    /// Stop when an accepted step improves the objective by less than this.
    pub ftol: T,
    /// Workspace box: waypoints clamp into it after every step.
    pub bounds: ([T; D], [T; D]),
    /// Maximum waypoint speed, m/s.
    pub velocity_limit: T,
}

impl<T: Scalar, const D: usize> Default for PlayfulParams<T, D> {
    fn default() -> Self {
        PlayfulParams {
            amplitude: cast(0.2),
            lambda: T::one(),
            step_size: cast(0.5),
            max_iters: 2000,
            ftol: cast(1e-9),
            bounds: ([cast::<T>(-10.0); D], [cast::<T>(10.0); D]),
            velocity_limit: cast(2.0),
        }
    }
}

/// Iteration report: objective history and convergence flag.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeReport {
    pub iterations: usize,
    pub objective: Vec<f64>,
    pub converged: bool,
}

/// Waypoints at equal spacing on the segment start -> goal.
pub fn seed_straight<T: Scalar, const D: usize>(
    start: [T; D],
    goal: [T; D],
    n: usize,
    dt_waypoint: T,
) -> Trajectory<T, D> {
    assert!(n >= 3, "a trajectory needs at least 3 waypoints");
    let waypoints = (0..n)
        .map(|i| {
            let s = cast::<T>(i as f64 / (n - 1) as f64);
            std::array::from_fn(|d| start[d] + (goal[d] - start[d]) * s)
        })
        .collect();
    Trajectory { waypoints, dt_waypoint }
}

/// In-plane unit normal to the start -> goal direction. For 2D this is the
/// counter-clockwise perpendicular; for 3D the perpendicular within the
/// horizontal plane. `None` when the direction is degenerate.
fn offset_normal<T: Scalar, const D: usize>(start: [T; D], goal: [T; D]) -> Option<[T; D]> {
    let dx = goal[0] - start[0];
    let dy = goal[1] - start[1];
    let planar = (dx * dx + dy * dy).sqrt();
    let total: T = (0..D).map(|d| (goal[d] - start[d]) * (goal[d] - start[d])).sum::<T>().sqrt();
    if total <= cast(1e-12) {
        return None;
    }
    let mut n = [T::zero(); D];
    if planar <= cast(1e-12) {
        // vertical 3D segment: any horizontal direction works; pick +x
        n[0] = T::one();
    } else {
        n[0] = -dy / planar;
        n[1] = dx / planar;
    }
    Some(n)
}

/// Half-sine play targets `c_i`: the straight-line points offset
/// perpendicular by `A * sin(pi * i / (N-1))`. Endpoints are unchanged.
/// The flag is true when start == goal leaves the normal undefined and the
/// targets fall back to the straight points.
pub fn playful_offsets<T: Scalar, const D: usize>(
    traj: &Trajectory<T, D>,
    amplitude: T,
) -> (Vec<[T; D]>, bool) {
    let n = traj.len();
    let start = traj.start();
    let goal = traj.goal();
    let straight = seed_straight(start, goal, n, traj.dt_waypoint);
    match offset_normal(start, goal) {
        None => (straight.waypoints, true),
        Some(normal) => {
            let targets = straight
                .waypoints
                .iter()
                .enumerate()
                .map(|(i, wp)| {
                    let phase = cast::<T>(std::f64::consts::PI * i as f64 / (n - 1) as f64);
                    let offset = amplitude * phase.sin();
                    std::array::from_fn(|d| wp[d] + normal[d] * offset)
                })
                .collect();
            (targets, false)
        }
    }
}

/// Objective `U = F_smooth + lambda * F_play`.
pub fn objective<T: Scalar, const D: usize>(
    waypoints: &[[T; D]],
    targets: &[[T; D]],
    lambda: T,
) -> T {
    let mut smooth = T::zero();
    for w in waypoints.windows(2) {
        for d in 0..D {
            let diff = w[1][d] - w[0][d];
            smooth += diff * diff;
        }
    }
    let mut play = T::zero();
    for (wp, c) in waypoints.iter().zip(targets) {
        for d in 0..D {
            let diff = wp[d] - c[d];
            play += diff * diff;
        }
    }
    smooth + lambda * play
}

/// Analytic gradient of [`objective`] with respect to the interior
/// waypoints; row i corresponds to waypoint i+1.
pub fn gradient<T: Scalar, const D: usize>(
    waypoints: &[[T; D]],
    targets: &[[T; D]],
    lambda: T,
) -> Vec<[T; D]> {
    let n = waypoints.len();
    let two = cast::<T>(2.0);
    (1..n - 1)
        .map(|i| {
            std::array::from_fn(|d| {
                two * (two * waypoints[i][d] - waypoints[i - 1][d] - waypoints[i + 1][d])
                    + two * lambda * (waypoints[i][d] - targets[i][d])
            })
        })
        .collect()
}

/// Solve `M z = rhs` where M is the interior second-difference matrix
/// tridiag(-1, 2, -1), via the Thomas algorithm.
fn smoothness_solve<T: Scalar, const D: usize>(rhs: &[[T; D]]) -> Vec<[T; D]> {
    let m = rhs.len();
    let mut z = vec![[T::zero(); D]; m];
    if m == 0 {
        return z;
    }
    let two = cast::<T>(2.0);
    let minus_one = -T::one();
    let mut c_prime = vec![T::zero(); m];
    let mut d_prime = vec![[T::zero(); D]; m];
    c_prime[0] = minus_one / two;
    for d in 0..D {
        d_prime[0][d] = rhs[0][d] / two;
    }
    for i in 1..m {
        let denom = two - minus_one * c_prime[i - 1];
        if i < m - 1 {
            c_prime[i] = minus_one / denom;
        }
        for d in 0..D {
            d_prime[i][d] = (rhs[i][d] - minus_one * d_prime[i - 1][d]) / denom;
        }
    }
    z[m - 1] = d_prime[m - 1];
    for i in (0..m - 1).rev() {
        for d in 0..D {
            z[i][d] = d_prime[i][d] - c_prime[i] * z[i + 1][d];
        }
    }
    z
}

fn clamp_interior<T: Scalar, const D: usize>(
    waypoints: &mut [[T; D]],
    bounds: &([T; D], [T; D]),
) {
    let n = waypoints.len();
    for wp in waypoints.iter_mut().take(n - 1).skip(1) {
        for d in 0..D {
            wp[d] = wp[d].max(bounds.0[d]).min(bounds.1[d]);
        }
    }
}

/// Optimize toward explicit play targets. Endpoints never move; accepted
/// iterates never increase the objective; waypoints stay inside the
/// workspace bounds.
pub fn optimize_toward<T: Scalar, const D: usize>(
    traj: &Trajectory<T, D>,
    targets: &[[T; D]],
    params: &PlayfulParams<T, D>,
) -> Result<(Trajectory<T, D>, OptimizeReport), MotionError> {
    assert_eq!(traj.len(), targets.len(), "one target per waypoint");
    assert!(traj.len() >= 3);
    let mut current = traj.clone();
    clamp_interior(&mut current.waypoints, &params.bounds);
    let mut u = objective(&current.waypoints, targets, params.lambda);
    if !u.is_finite() {
        return Err(MotionError::NonFiniteObjective { iteration: 0 });
    }
    let mut history = vec![to_f64(u)];
    let mut eta = params.step_size;
    let ftol = params.ftol;
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..params.max_iters {
        iterations = iter + 1;
        let grad = gradient(&current.waypoints, targets, params.lambda);
        let step = smoothness_solve(&grad);
        let mut accepted = false;
        for _ in 0..60 {
            let mut candidate = current.clone();
            for (i, delta) in step.iter().enumerate() {
                for d in 0..D {
                    candidate.waypoints[i + 1][d] = candidate.waypoints[i + 1][d] - eta * delta[d];
                }
            }
            clamp_interior(&mut candidate.waypoints, &params.bounds);
            let u_new = objective(&candidate.waypoints, targets, params.lambda);
            if !u_new.is_finite() {
                return Err(MotionError::NonFiniteObjective { iteration: iter });
            }
            if u_new <= u {
                let improvement = u - u_new;
                current = candidate;
                u = u_new;
                history.push(to_f64(u));
                accepted = true;
                if improvement < ftol {
                    converged = true;
                }
                break;
            }
            eta = eta / cast::<T>(2.0);
        }
        if !accepted {
            converged = true;
            break;
        }
        if converged {
            break;
        }
        eta = (eta * cast::<T>(2.0)).min(params.step_size);
    }
    Ok((current, OptimizeReport { iterations, objective: history, converged }))
}

/// Optimize a trajectory toward the half-sine play targets implied by its
/// endpoints and `params.amplitude`.
pub fn optimize<T: Scalar, const D: usize>(
    traj: &Trajectory<T, D>,
    params: &PlayfulParams<T, D>,
) -> Result<(Trajectory<T, D>, OptimizeReport), MotionError> {
    let (targets, _) = playful_offsets(traj, params.amplitude);
    optimize_toward(traj, &targets, params)
}

/// Advisory guideline check: helpful/clear means the endpoint sits on the
/// goal; safe means every waypoint is inside the bounds and the waypoint
/// speed stays under the limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuidelineReport {
    pub helpful: bool,
    pub safe: bool,
    pub clear: bool,
}

pub fn check_guidelines<T: Scalar, const D: usize>(
    traj: &Trajectory<T, D>,
    params: &PlayfulParams<T, D>,
    goal: [T; D],
) -> GuidelineReport {
    let end = traj.goal();
    let end_err: T = (0..D)
        .map(|d| (end[d] - goal[d]) * (end[d] - goal[d]))
        .sum::<T>()
        .sqrt();
    let on_goal = end_err < cast(1e-6);
    let in_bounds = traj.waypoints.iter().all(|wp| {
        (0..D).all(|d| wp[d] >= params.bounds.0[d] && wp[d] <= params.bounds.1[d])
    });
    let mut max_step = T::zero();
    for w in traj.waypoints.windows(2) {
        let step: T = (0..D)
            .map(|d| (w[1][d] - w[0][d]) * (w[1][d] - w[0][d]))
            .sum::<T>()
            .sqrt();
        max_step = max_step.max(step);
    }
    let speed_ok = max_step / traj.dt_waypoint <= params.velocity_limit;
    GuidelineReport { helpful: on_goal, safe: in_bounds && speed_ok, clear: on_goal }
}

/// Peak perpendicular deviation of the trajectory from its chord.
pub fn peak_deviation<T: Scalar, const D: usize>(traj: &Trajectory<T, D>) -> T {
    let start = traj.start();
    let goal = traj.goal();
    let chord: Vec<T> = (0..D).map(|d| goal[d] - start[d]).collect();
    let len: T = chord.iter().map(|c| *c * *c).sum::<T>().sqrt();
    let mut peak = T::zero();
    for wp in &traj.waypoints {
        let rel: Vec<T> = (0..D).map(|d| wp[d] - start[d]).collect();
        if len <= cast(1e-12) {
            let dist: T = rel.iter().map(|r| *r * *r).sum::<T>().sqrt();
            peak = peak.max(dist);
            continue;
        }
        let along: T = rel.iter().zip(&chord).map(|(r, c)| *r * *c).sum::<T>() / len;
        let sq: T = rel.iter().map(|r| *r * *r).sum::<T>() - along * along;
        peak = peak.max(sq.max(T::zero()).sqrt());
    }
    peak
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params2() -> PlayfulParams<f64, 2> {
        PlayfulParams::default()
    }

    #[test]
    fn straight_seed_spacing() {
        let t = seed_straight([0.0, 0.0], [1.0, 0.0], 5, 0.1);
        let xs: Vec<f64> = t.waypoints.iter().map(|w| w[0]).collect();
        for (x, want) in xs.iter().zip([0.0, 0.25, 0.5, 0.75, 1.0]) {
            assert!((x - want).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_seed_all_identical() {
        let t = seed_straight([0.3, 0.4], [0.3, 0.4], 7, 0.1);
        for wp in &t.waypoints {
            assert_eq!(*wp, [0.3, 0.4]);
        }
        let (targets, degenerate) = playful_offsets(&t, 0.2);
        assert!(degenerate);
        assert_eq!(targets, t.waypoints);
    }

    #[test]
    fn straight_seed_minimizes_smoothness() {
        // discrete linear interpolation minimizes the sum of squared
        // differences; any perturbation of an interior waypoint increases it
        let t = seed_straight([0.0, 0.0], [1.0, 0.5], 9, 0.1);
        let targets = t.waypoints.clone();
        let base = objective(&t.waypoints, &targets, 0.0);
        let mut x = 42u64;
        for _ in 0..50 {
            let mut perturbed = t.waypoints.clone();
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let i = 1 + (x as usize % (perturbed.len() - 2));
            let d = (x >> 32) as usize % 2;
            perturbed[i][d] += ((x % 1000) as f64 / 1000.0 - 0.5) * 0.2;
            assert!(objective(&perturbed, &targets, 0.0) >= base - 1e-12);
        }
    }

    #[test]
    fn offsets_zero_amplitude_equal_straight() {
        let t = seed_straight([0.0f64, 0.0], [1.0, 0.0], 11, 0.1);
        let (targets, degenerate) = playful_offsets(&t, 0.0);
        assert!(!degenerate);
        for (c, w) in targets.iter().zip(&t.waypoints) {
            assert!((c[0] - w[0]).abs() < 1e-12 && (c[1] - w[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn offsets_midpoint_and_endpoints() {
        let t = seed_straight([0.0f64, 0.0], [1.0, 0.0], 11, 0.1);
        let (targets, _) = playful_offsets(&t, 0.2);
        // midpoint exactly 0.2 m perpendicular (normal is +y for +x chord)
        assert!((targets[5][1] - 0.2).abs() < 1e-12, "mid {:?}", targets[5]);
        assert!((targets[0][1]).abs() < 1e-12);
        assert!((targets[10][1]).abs() < 1e-12);
    }

    #[test]
    fn lambda_zero_recovers_straight_line() {
        let seed = seed_straight([0.0, 0.0], [1.0, 0.3], 15, 0.1);
        let mut bent = seed.clone();
        for (i, wp) in bent.waypoints.iter_mut().enumerate() {
            if i > 0 && i < 14 {
                wp[1] += 0.3 * (i as f64 * 0.7).sin();
            }
        }
        let params = PlayfulParams { lambda: 0.0, ..params2() };
        let (out, report) = optimize(&bent, &params).unwrap();
        assert!(report.converged);
        for (got, want) in out.waypoints.iter().zip(&seed.waypoints) {
            assert!((got[0] - want[0]).abs() < 1e-6 && (got[1] - want[1]).abs() < 1e-6);
        }
    }

    #[test]
    fn huge_lambda_reaches_targets() {
        let seed = seed_straight([0.0, 0.0], [1.0, 0.0], 9, 0.1);
        let params = PlayfulParams { lambda: 1e6, amplitude: 0.2, max_iters: 20_000, ..params2() };
        let (targets, _) = playful_offsets(&seed, 0.2);
        let (out, _) = optimize(&seed, &params).unwrap();
        for (wp, c) in out.waypoints.iter().zip(&targets).skip(1).take(7) {
            let err = ((wp[0] - c[0]).powi(2) + (wp[1] - c[1]).powi(2)).sqrt();
            assert!(err < 1e-3, "err {err}");
        }
    }

    #[test]
    fn endpoints_pinned_to_1e9() {
        let seed = seed_straight([0.1, 0.2], [0.9, 0.7], 21, 0.1);
        let (out, _) = optimize(&seed, &params2()).unwrap();
        assert!((out.waypoints[0][0] - 0.1).abs() < 1e-9);
        assert!((out.waypoints[0][1] - 0.2).abs() < 1e-9);
        assert!((out.waypoints[20][0] - 0.9).abs() < 1e-9);
        assert!((out.waypoints[20][1] - 0.7).abs() < 1e-9);
    }

    #[test]
    fn objective_never_increases_between_accepted_iterates() {
        let seed = seed_straight([0.0, 0.0], [1.0, 0.0], 21, 0.1);
        let (_, report) = optimize(&seed, &params2()).unwrap();
        for w in report.objective.windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "objective rose: {} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn converged_peak_deviation_is_between_zero_and_amplitude() {
        let seed = seed_straight([0.0, 0.0], [1.0, 0.0], 21, 0.1);
        let params = PlayfulParams { lambda: 1.0, amplitude: 0.2, ..params2() };
        let (out, _) = optimize(&seed, &params).unwrap();
        let peak = peak_deviation(&out);
        assert!(peak > 0.0 && peak < 0.2, "peak {peak}");
    }

    #[test]
    fn gradient_matches_central_finite_differences() {
        let seed = seed_straight([0.0, 0.0], [1.0, 0.4], 9, 0.1);
        let mut traj = seed.clone();
        let mut x = 7u64;
        for wp in traj.waypoints.iter_mut().skip(1).take(7) {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            wp[1] += (x % 1000) as f64 / 5000.0;
        }
        let (targets, _) = playful_offsets(&seed, 0.15);
        let lambda = 1.3;
        let grad = gradient(&traj.waypoints, &targets, lambda);
        let h = 1e-6;
        for i in 1..8 {
            for d in 0..2 {
                let mut plus = traj.waypoints.clone();
                let mut minus = traj.waypoints.clone();
                plus[i][d] += h;
                minus[i][d] -= h;
                let fd = (objective(&plus, &targets, lambda) - objective(&minus, &targets, lambda))
                    / (2.0 * h);
                let a = grad[i - 1][d];
                let rel = (a - fd).abs() / fd.abs().max(1e-9);
                assert!(rel < 1e-5, "grad[{i}][{d}] analytic {a} vs fd {fd}");
            }
        }
    }

    #[test]
    fn amplitude_monotonicity_of_peak_deviation() {
        let seed = seed_straight([0.0, 0.0], [1.0, 0.0], 21, 0.1);
        let mut prev = -1.0;
        for k in 0..6 {
            let amplitude = 0.05 * k as f64;
            let params = PlayfulParams { lambda: 1.5, amplitude, ..params2() };
            let (out, _) = optimize(&seed, &params).unwrap();
            let peak = peak_deviation(&out);
            assert!(peak >= prev - 1e-9, "A {amplitude}: peak {peak} < prev {prev}");
            prev = peak;
        }
    }

    #[test]
    fn mirrored_targets_give_mirrored_trajectory() {
        let seed = seed_straight([0.0, 0.0], [1.0, 0.6], 15, 0.1);
        let (targets, _) = playful_offsets(&seed, 0.2);
        let (out, _) = optimize_toward(&seed, &targets, &params2()).unwrap();

        let mirror = |p: [f64; 2]| [p[0], -p[1]];
        let seed_m = Trajectory {
            waypoints: seed.waypoints.iter().map(|w| mirror(*w)).collect(),
            dt_waypoint: seed.dt_waypoint,
        };
        let targets_m: Vec<[f64; 2]> = targets.iter().map(|c| mirror(*c)).collect();
        let (out_m, _) = optimize_toward(&seed_m, &targets_m, &params2()).unwrap();
        for (a, b) in out.waypoints.iter().zip(&out_m.waypoints) {
            assert!((a[0] - b[0]).abs() < 1e-12);
            assert!((a[1] + b[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn guidelines_pass_on_default_pipeline() {
        let seed = seed_straight([0.0, 0.0], [1.0, 0.0], 21, 0.1);
        let params = params2();
        let (out, _) = optimize(&seed, &params).unwrap();
        let report = check_guidelines(&out, &params, [1.0, 0.0]);
        assert!(report.helpful && report.safe && report.clear);
    }

    #[test]
    fn out_of_bounds_waypoint_fails_safe() {
        let mut t = seed_straight([0.0, 0.0], [1.0, 0.0], 5, 0.1);
        t.waypoints[2] = [50.0, 0.0];
        let report = check_guidelines(&t, &params2(), [1.0, 0.0]);
        assert!(!report.safe);
    }

    #[test]
    fn displaced_endpoint_fails_helpful() {
        let t = seed_straight([0.0, 0.0], [1.0, 0.0], 5, 0.1);
        let report = check_guidelines(&t, &params2(), [1.1, 0.0]);
        assert!(!report.helpful && !report.clear);
    }

    #[test]
    fn bounds_clamp_is_respected() {
        let seed = seed_straight([0.0, 0.0], [1.0, 0.0], 15, 0.1);
        let params = PlayfulParams {
            amplitude: 0.5,
            lambda: 100.0,
            bounds: ([-10.0, -0.1], [10.0, 0.1]),
            ..params2()
        };
        let (out, _) = optimize(&seed, &params).unwrap();
        for wp in &out.waypoints {
            assert!(wp[1] <= 0.1 + 1e-12 && wp[1] >= -0.1 - 1e-12);
        }
    }

    #[test]
    fn csv_has_time_column_and_rows() {
        let t = seed_straight([0.0, 0.0], [1.0, 0.0], 3, 0.5);
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,x,y");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("0.5,"));
    }

    #[test]
    fn three_d_offsets_and_optimize() {
        let seed = seed_straight([0.0, 0.0, 0.2], [1.0, 0.0, 0.6], 9, 0.1);
        let params: PlayfulParams<f64, 3> = PlayfulParams {
            amplitude: 0.2,
            ..PlayfulParams::default()
        };
        let (out, report) = optimize(&seed, &params).unwrap();
        assert!(report.converged);
        // bulge happens in the horizontal plane
        assert!(out.waypoints[4][1].abs() > 0.01);
        let csv = out.to_csv();
        assert!(csv.starts_with("t,x,y,z\n"));
    }

    #[test]
    fn f32_optimizer_smoke() {
        let seed = seed_straight([0.0f32, 0.0], [1.0, 0.0], 9, 0.1);
        let params: PlayfulParams<f32, 2> = PlayfulParams {
            amplitude: 0.2,
            ..PlayfulParams::default()
        };
        let (out, report) = optimize(&seed, &params).unwrap();
        assert!(report.iterations > 0);
        assert_eq!(out.waypoints.len(), 9);
    }
}
