//! Closed-form check of the trajectory optimizer: the quadratic objective
//! has a unique minimizer given by a linear system, solved here with plain
//! dense Gaussian elimination, independent of the optimizer's
//! preconditioned-descent path.

use homesim_core::motion::{objective, optimize_toward, playful_offsets, seed_straight, PlayfulParams};

/// Solve the interior stationarity system per dimension:
/// (2 + lambda) x_i - x_{i-1} - x_{i+1} = lambda * c_i, endpoints fixed.
fn closed_form_minimizer(
    start: [f64; 2],
    goal: [f64; 2],
    targets: &[[f64; 2]],
    lambda: f64,
) -> Vec<[f64; 2]> {
    let n = targets.len();
    let m = n - 2;
    let mut out = vec![[0.0; 2]; n];
    out[0] = start;
    out[n - 1] = goal;
    for dim in 0..2 {
        // dense system A x = b
        let mut a = vec![vec![0.0; m]; m];
        let mut b = vec![0.0; m];
        for i in 0..m {
            a[i][i] = 2.0 + lambda;
            if i > 0 {
                a[i][i - 1] = -1.0;
            }
            if i + 1 < m {
                a[i][i + 1] = -1.0;
            }
            b[i] = lambda * targets[i + 1][dim];
        }
        b[0] += start[dim];
        b[m - 1] += goal[dim];
        // forward elimination, no pivoting (diagonally dominant)
        for col in 0..m {
            for row in (col + 1)..m {
                if a[row][col] != 0.0 {
                    let factor = a[row][col] / a[col][col];
                    for k in col..m {
                        a[row][k] -= factor * a[col][k];
                    }
                    b[row] -= factor * b[col];
                }
            }
        }
        // back substitution
        for row in (0..m).rev() {
            let mut acc = b[row];
            for k in (row + 1)..m {
                acc -= a[row][k] * out[k + 1][dim];
            }
            out[row + 1][dim] = acc / a[row][row];
        }
    }
    out
}

#[test]
fn optimizer_matches_closed_form_solution() {
    let seed = seed_straight([0.0, 0.0], [1.0, 0.0], 21, 0.1);
    let (targets, _) = playful_offsets(&seed, 0.2);
    let params: PlayfulParams<f64, 2> = PlayfulParams {
        lambda: 1.0,
        amplitude: 0.2,
        max_iters: 20_000,
        ftol: 1e-13,
        ..PlayfulParams::default()
    };
    let (out, report) = optimize_toward(&seed, &targets, &params).unwrap();
    assert!(report.converged);

    let exact = closed_form_minimizer([0.0, 0.0], [1.0, 0.0], &targets, 1.0);
    for (got, want) in out.waypoints.iter().zip(&exact) {
        for d in 0..2 {
            assert!(
                (got[d] - want[d]).abs() < 1e-6,
                "waypoint mismatch: {got:?} vs {want:?}"
            );
        }
    }
    // the oracle really is the minimizer
    let u_opt = objective(&out.waypoints, &targets, 1.0);
    let u_exact = objective(&exact, &targets, 1.0);
    assert!(u_exact <= u_opt + 1e-12);
}

#[test]
fn closed_form_peak_sits_strictly_inside_amplitude() {
    let seed = seed_straight([0.0, 0.0], [1.0, 0.0], 21, 0.1);
    let (targets, _) = playful_offsets(&seed, 0.2);
    let exact = closed_form_minimizer([0.0, 0.0], [1.0, 0.0], &targets, 1.0);
    let peak = exact.iter().map(|wp| wp[1]).fold(0.0f64, f64::max);
    assert!(peak > 0.0 && peak < 0.2, "peak {peak}");
}

#[test]
fn oracle_matches_across_lambdas() {
    for lambda in [0.1, 1.0, 10.0, 100.0] {
        let seed = seed_straight([0.2, -0.1], [0.8, 0.5], 15, 0.1);
        let (targets, _) = playful_offsets(&seed, 0.15);
        let params: PlayfulParams<f64, 2> = PlayfulParams {
            lambda,
            amplitude: 0.15,
            max_iters: 60_000,
            ftol: 1e-13,
            ..PlayfulParams::default()
        };
        let (out, _) = optimize_toward(&seed, &targets, &params).unwrap();
        let exact = closed_form_minimizer([0.2, -0.1], [0.8, 0.5], &targets, lambda);
        for (got, want) in out.waypoints.iter().zip(&exact) {
            for d in 0..2 {
                assert!(
                    (got[d] - want[d]).abs() < 5e-6,
                    "lambda {lambda}: {got:?} vs {want:?}"
                );
            }
        }
    }
}
