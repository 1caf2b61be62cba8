use crate::linalg::{symmetric_eigen, Matrix};
use crate::metric::FiniteMetricSpace;
use crate::sdp::{solve, LmiProblem, LmiSolution, SolveStatus};

use super::{gram_sq_distance, CertificateMeasure, EmbedError, EmbedResult};

/// Largest window handed to the dense SDP solver.
pub const MAX_SDP_POINTS: usize = 64;

/// Variable layout for a Gram matrix with point 0 pinned at the origin:
/// the reduced matrix `K'` indexes points `1..n`, stored upper-triangular.
struct GramVars {
    m: usize,
}

impl GramVars {
    fn new(n: usize) -> Self {
        Self { m: n - 1 }
    }

    fn count(&self) -> usize {
        self.m * (self.m + 1) / 2
    }

    fn var(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        // row-wise upper triangle
        a * self.m - a * (a + 1) / 2 + b
    }

    /// Coefficients of `Q(i,j)` in the variables, for original points `i < j`.
    fn q_row(&self, i: usize, j: usize) -> Vec<(usize, f64)> {
        if i == 0 {
            vec![(self.var(j - 1, j - 1), 1.0)]
        } else {
            let (a, b) = (i - 1, j - 1);
            vec![
                (self.var(a, a), 1.0),
                (self.var(b, b), 1.0),
                (self.var(a, b), -2.0),
            ]
        }
    }

    /// `S = Σ y E_ab = K'` through `C = 0` and `A = −E_ab`.
    fn psd_block(&self) -> (Matrix, Vec<Vec<(usize, usize, f64)>>) {
        let mut mats = vec![Vec::new(); self.count()];
        for a in 0..self.m {
            for b in a..self.m {
                mats[self.var(a, b)] = vec![(a, b, -1.0)];
            }
        }
        (Matrix::zeros(self.m, self.m), mats)
    }

    fn reduced(&self, y: &[f64]) -> Matrix {
        Matrix::from_fn(self.m, self.m, |a, b| y[self.var(a, b)])
    }
}

fn check_size(space: &FiniteMetricSpace) -> Result<(), EmbedError> {
    let n = space.len();
    if n < 2 {
        return Err(EmbedError::TooSmall(n));
    }
    if n > MAX_SDP_POINTS {
        return Err(EmbedError::TooLarge {
            n,
            limit: MAX_SDP_POINTS,
        });
    }
    Ok(())
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect()
}

/// Clips negative eigenvalues of `K'` and shrinks it until `Q ≤ d²` holds
/// exactly, then re-embeds it as an `n × n` Gram matrix with point 0 at the
/// origin. `dist2` holds the scaled squared distances per pair.
fn feasible_gram(vars: &GramVars, y: &[f64], pairs: &[(usize, usize)], dist2: &[f64]) -> Matrix {
    let eig = symmetric_eigen(&vars.reduced(y));
    let m = vars.m;
    let mut kp = Matrix::zeros(m, m);
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        for a in 0..m {
            for b in 0..m {
                kp[(a, b)] += lam * eig.vectors[(a, k)] * eig.vectors[(b, k)];
            }
        }
    }
    let full = Matrix::from_fn(m + 1, m + 1, |i, j| {
        if i == 0 || j == 0 {
            0.0
        } else {
            kp[(i - 1, j - 1)]
        }
    });
    let mut alpha: f64 = 1.0;
    for (&(i, j), &d2) in pairs.iter().zip(dist2) {
        let q = gram_sq_distance(&full, i, j);
        if q > d2 {
            alpha = alpha.min(d2 / q);
        }
    }
    full.scale(alpha)
}

/// Double centering `J K J` with `J = I − 11ᵀ/n`; pairwise distances are
/// unchanged.
fn center(k: &Matrix) -> Matrix {
    let n = k.rows();
    let nf = n as f64;
    let row_mean: Vec<f64> = (0..n).map(|i| k.row(i).iter().sum::<f64>() / nf).collect();
    let total = row_mean.iter().sum::<f64>() / nf;
    Matrix::from_fn(n, n, |i, j| k[(i, j)] - row_mean[i] - row_mean[j] + total)
}

fn solve_separation(space: &FiniteMetricSpace, r: f64) -> Result<SeparationSolve, EmbedError> {
    check_size(space)?;
    let n = space.len();
    let far = space.far_pairs(r);
    if far.is_empty() {
        return Err(EmbedError::NoFarPairs(r));
    }
    let scale = space.diameter();
    let vars = GramVars::new(n);
    let t_var = vars.count();
    let pairs = all_pairs(n);
    let dist2: Vec<f64> = pairs
        .iter()
        .map(|&(i, j)| (space.d(i, j) / scale).powi(2))
        .collect();
    let (psd_c, psd_a) = vars.psd_block();
    let mut lp_c = dist2.clone();
    let mut lp_a: Vec<Vec<(usize, f64)>> = pairs.iter().map(|&(i, j)| vars.q_row(i, j)).collect();
    for &(i, j) in &far {
        let mut row: Vec<(usize, f64)> = vars.q_row(i, j).into_iter().map(|(v, c)| (v, -c)).collect();
        row.push((t_var, 1.0));
        lp_a.push(row);
        lp_c.push(0.0);
    }
    let mut psd_a = psd_a;
    psd_a.push(Vec::new());
    let mut b = vec![0.0; t_var + 1];
    b[t_var] = 1.0;
    let problem = LmiProblem {
        b,
        psd_c,
        psd_a,
        lp_c,
        lp_a,
    };
    let sol = solve(&problem);
    let gram = feasible_gram(&vars, &sol.y, &pairs, &dist2);
    Ok(SeparationSolve {
        far,
        scale,
        gram,
        num_pairs: pairs.len(),
        sol,
    })
}

struct SeparationSolve {
    far: Vec<(usize, usize)>,
    scale: f64,
    gram: Matrix,
    num_pairs: usize,
    sol: LmiSolution,
}

/// Optimal Hilbert separation of the far pairs of `space` at scale `r`.
///
/// Distances are normalized by the diameter for the solve and scaled back
/// afterwards. The returned Gram matrix is PSD, satisfies `Q ≤ d²`
/// exactly up to rounding, and is centered; `s_star` is the separation it
/// actually achieves. The certificate carries the normalized far-row
/// multipliers and `c = s_star²`.
pub fn max_separation_sdp(space: &FiniteMetricSpace, r: f64) -> Result<EmbedResult, EmbedError> {
    let SeparationSolve {
        far,
        scale,
        gram,
        num_pairs,
        sol,
    } = solve_separation(space, r)?;
    let t = far
        .iter()
        .map(|&(i, j)| gram_sq_distance(&gram, i, j))
        .fold(f64::INFINITY, f64::min)
        .max(0.0);
    let s_star = t.sqrt() * scale;
    let weights: Vec<((usize, usize), f64)> = far
        .iter()
        .enumerate()
        .map(|(k, &e)| (e, sol.x_lp[num_pairs + k].max(0.0)))
        .collect();
    let certificate = CertificateMeasure::from_unordered(&weights, s_star * s_star, r, 2);
    Ok(EmbedResult {
        s_star,
        gram: Some(center(&gram).scale(scale * scale)),
        cuts: None,
        certificate,
        status: sol.status,
        relative_gap: sol.relative_gap,
    })
}

/// `sup Σ μ(x,y)‖f(x) − f(y)‖²` over 1-Lipschitz `f: C → H`, for the
/// measure of a certificate on this window.
pub fn poincare_value(space: &FiniteMetricSpace, mu: &CertificateMeasure) -> Result<f64, EmbedError> {
    poincare_value_weights(space, &mu.pairs).map(|(v, _)| v)
}

/// Same supremum for arbitrary non-negative weights on ordered pairs (not
/// necessarily normalized). Returns the value and the solver status.
pub fn poincare_value_weights(
    space: &FiniteMetricSpace,
    weights: &[(usize, usize, f64)],
) -> Result<(f64, SolveStatus), EmbedError> {
    let n = space.len();
    for &(i, j, w) in weights {
        if i >= n || j >= n || i == j {
            return Err(EmbedError::UnsupportedPair(i, j));
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(EmbedError::BadWeight(i, j));
        }
    }
    check_size(space)?;
    let pairs = all_pairs(n);
    let mut unordered = vec![0.0; pairs.len()];
    for &(i, j, w) in weights {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        // index of (a, b) in row-major upper-triangle order
        let k = a * n - a * (a + 1) / 2 + (b - a - 1);
        unordered[k] += w;
    }
    let total: f64 = unordered.iter().sum();
    if total == 0.0 {
        return Ok((0.0, SolveStatus::Optimal));
    }
    let scale = space.diameter();
    let vars = GramVars::new(n);
    let dist2: Vec<f64> = pairs
        .iter()
        .map(|&(i, j)| (space.d(i, j) / scale).powi(2))
        .collect();
    let mut b = vec![0.0; vars.count()];
    for (&(i, j), &w) in pairs.iter().zip(&unordered) {
        for (v, c) in vars.q_row(i, j) {
            b[v] += c * w / total;
        }
    }
    let (psd_c, psd_a) = vars.psd_block();
    let problem = LmiProblem {
        b,
        psd_c,
        psd_a,
        lp_c: dist2.clone(),
        lp_a: pairs.iter().map(|&(i, j)| vars.q_row(i, j)).collect(),
    };
    let sol = solve(&problem);
    let gram = feasible_gram(&vars, &sol.y, &pairs, &dist2);
    let value: f64 = pairs
        .iter()
        .zip(&unordered)
        .map(|(&(i, j), &w)| w * gram_sq_distance(&gram, i, j))
        .sum();
    Ok((value * scale * scale, sol.status))
}
