//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use coarse_lab::metric::{validate_metric, FiniteMetricSpace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer-valued metric on `n` points with distances in `1..=max_d`:
/// the shortest-path closure of random edge weights on the complete graph.
pub fn random_integer_metric(rng: &mut ChaCha8Rng, n: usize, max_d: u32) -> FiniteMetricSpace {
    let mut d = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = rng.gen_range(1..=max_d) as f64;
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    validate_metric(&d).expect("shortest-path closure is a metric")
}

/// A random positive distance of the space, so at least one pair is far.
pub fn random_scale(rng: &mut ChaCha8Rng, space: &FiniteMetricSpace) -> f64 {
    let mut values: Vec<f64> = Vec::new();
    for i in 0..space.len() {
        for j in (i + 1)..space.len() {
            values.push(space.d(i, j));
        }
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    *values.choose(rng).expect("at least two points")
}

pub fn cycle_metric(n: usize) -> FiniteMetricSpace {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let k = i.abs_diff(j);
                    k.min(n - k) as f64
                })
                .collect()
        })
        .collect();
    validate_metric(&rows).unwrap()
}

pub fn line_metric(n: usize) -> FiniteMetricSpace {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| i.abs_diff(j) as f64).collect())
        .collect();
    validate_metric(&rows).unwrap()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Cyclic pair projections towards `lower ≤ |x_i − x_j| ≤ upper`.
/// Returns the worst violation seen in the last sweep.
fn project_configuration(
    x: &mut [Vec<f64>],
    bounds: &[(usize, usize, f64, f64)],
    sweeps: usize,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let dim = x[0].len();
    let mut worst = f64::INFINITY;
    for _ in 0..sweeps {
        worst = 0.0;
        for &(i, j, lo, hi) in bounds {
            let e = dist(&x[i], &x[j]);
            let target = if e > hi {
                hi
            } else if e < lo {
                lo
            } else {
                continue;
            };
            worst = f64::max(worst, (e - target).abs());
            let dir: Vec<f64> = if e < 1e-12 {
                let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let norm = v.iter().map(|t| t * t).sum::<f64>().sqrt().max(1e-300);
                v.into_iter().map(|t| t / norm).collect()
            } else {
                x[i].iter().zip(&x[j]).map(|(a, b)| (a - b) / e).collect()
            };
            let shift = (target - e) / 2.0;
            for k in 0..dim {
                x[i][k] += shift * dir[k];
                x[j][k] -= shift * dir[k];
            }
        }
        if worst < 1e-12 {
            break;
        }
    }
    worst
}

/// Separation achieved by the configuration `x` after shrinking it just
/// enough to respect every distance: `min_far |x_i − x_j| / max |x_i − x_j| / d_ij`.
fn scaled_separation(space: &FiniteMetricSpace, far: &[(usize, usize)], x: &[Vec<f64>]) -> f64 {
    let n = space.len();
    let mut stretch: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            stretch = stretch.max(dist(&x[i], &x[j]) / space.d(i, j));
        }
    }
    if stretch == 0.0 {
        return 0.0;
    }
    let sep = far
        .iter()
        .map(|&(i, j)| dist(&x[i], &x[j]))
        .fold(f64::INFINITY, f64::min);
    sep / stretch
}

/// Largest separation of the far pairs (`d ≥ r`) over configurations in
/// `ℝ^{n−1}` that do not expand any distance, by multi-start hill climbing
/// on [`scaled_separation`]. Every candidate is feasible, so the result is
/// a lower bound that approaches the optimum from below.
pub fn brute_force_separation(space: &FiniteMetricSpace, r: f64, seed: u64) -> f64 {
    let n = space.len();
    let dim = n - 1;
    let mut rng = rng(seed);
    let far = space.far_pairs(r);
    assert!(!far.is_empty());
    let hi = far
        .iter()
        .map(|&(i, j)| space.d(i, j))
        .fold(f64::INFINITY, f64::min);
    let mut best_overall: f64 = 0.0;
    for _ in 0..8 {
        let mut x: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut value = scaled_separation(space, &far, &x);
        let mut step = 0.5;
        for _ in 0..12_000 {
            if step < 1e-9 {
                break;
            }
            let mut y = x.clone();
            if rng.gen_bool(0.5) {
                let p = rng.gen_range(0..n);
                for v in y[p].iter_mut() {
                    *v += step * rng.gen_range(-1.0..1.0);
                }
            } else {
                for row in y.iter_mut() {
                    for v in row.iter_mut() {
                        *v += step * rng.gen_range(-1.0..1.0);
                    }
                }
            }
            let candidate = scaled_separation(space, &far, &y);
            if candidate > value {
                x = y;
                value = candidate;
                step *= 1.5;
            } else {
                step *= 0.98;
            }
        }
        // push the climbed configuration towards larger targets by pair
        // projections; every iterate is scored after rescaling, so the
        // result stays a lower bound
        let bounds_at = |target: f64| -> Vec<(usize, usize, f64, f64)> {
            (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .map(|(i, j)| {
                    let lower = if far.contains(&(i, j)) { target } else { 0.0 };
                    (i, j, lower, space.d(i, j))
                })
                .collect()
        };
        for k in 0..16 {
            let target = value + (hi - value) / f64::powi(2.0, k);
            let bounds = bounds_at(target);
            let mut y = x.clone();
            for _ in 0..40 {
                let worst = project_configuration(&mut y, &bounds, 50, &mut rng);
                let score = scaled_separation(space, &far, &y);
                if score > value {
                    value = score;
                    x = y.clone();
                }
                if worst < 1e-12 {
                    break;
                }
            }
        }
        best_overall = best_overall.max(value);
    }
    best_overall
}
