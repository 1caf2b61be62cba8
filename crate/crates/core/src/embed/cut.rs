use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::lp::maximize;
use crate::metric::FiniteMetricSpace;
use crate::sdp::SolveStatus;

use super::{CertificateMeasure, EmbedError, EmbedResult};

/// Cut enumeration visits `2^(n−1) − 1` cuts, so windows are capped here.
pub const MAX_CUT_POINTS: usize = 10;

/// One cut semimetric `δ_S` with its coefficient in an ℓ¹ decomposition.
/// `side` never contains point 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub side: Vec<usize>,
    pub weight: f64,
}

fn separates(mask: u32, i: usize, j: usize) -> bool {
    ((mask >> i) & 1) != ((mask >> j) & 1)
}

fn cut_masks(n: usize) -> Result<Vec<u32>, EmbedError> {
    if n < 2 {
        return Err(EmbedError::TooSmall(n));
    }
    if n > MAX_CUT_POINTS {
        return Err(EmbedError::CutLimitExceeded(n));
    }
    // point 0 stays on the complement side; bit i stands for point i
    Ok((1..(1u32 << (n - 1))).map(|m| m << 1).collect())
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect()
}

/// Optimal ℓ¹ separation of far pairs by exact LP over the cut cone.
///
/// Maximizes `s` over `σ = Σ λ_S δ_S` with `σ ≤ d` on all pairs and
/// `σ ≥ s` on pairs at distance `≥ r`. The certificate has `p = 1` and
/// `c = s*`.
pub fn cut_cone_lp(space: &FiniteMetricSpace, r: f64) -> Result<EmbedResult, EmbedError> {
    let n = space.len();
    let masks = cut_masks(n)?;
    let far = space.far_pairs(r);
    if far.is_empty() {
        return Err(EmbedError::NoFarPairs(r));
    }
    let all = pairs(n);
    let cols = masks.len() + 1;
    let s_col = masks.len();
    let rows = all.len() + far.len();
    let mut a = Matrix::zeros(rows, cols);
    let mut b = vec![0.0; rows];
    for (row, &(i, j)) in all.iter().enumerate() {
        for (col, &m) in masks.iter().enumerate() {
            if separates(m, i, j) {
                a[(row, col)] = 1.0;
            }
        }
        b[row] = space.d(i, j);
    }
    for (k, &(i, j)) in far.iter().enumerate() {
        let row = all.len() + k;
        for (col, &m) in masks.iter().enumerate() {
            if separates(m, i, j) {
                a[(row, col)] = -1.0;
            }
        }
        a[(row, s_col)] = 1.0;
    }
    let mut c = vec![0.0; cols];
    c[s_col] = 1.0;
    let sol = maximize(&c, &a, &b)?;
    let s_star = sol.x[s_col];
    let cuts = masks
        .iter()
        .zip(&sol.x)
        .filter(|&(_, &w)| w > 1e-12)
        .map(|(&m, &w)| Cut {
            side: (0..n).filter(|&i| (m >> i) & 1 == 1).collect(),
            weight: w,
        })
        .collect();
    let weights: Vec<((usize, usize), f64)> = far
        .iter()
        .enumerate()
        .map(|(k, &e)| (e, sol.duals[all.len() + k].max(0.0)))
        .collect();
    Ok(EmbedResult {
        s_star,
        gram: None,
        cuts: Some(cuts),
        certificate: CertificateMeasure::from_unordered(&weights, s_star, r, 1),
        status: SolveStatus::Optimal,
        relative_gap: 0.0,
    })
}

/// `sup Σ μ(x,y)‖f(x) − f(y)‖₁` over 1-Lipschitz `f` into ℓ¹, i.e. the
/// maximum of `Σ μ σ` over cut-cone semimetrics `σ ≤ d`.
pub fn l1_poincare_value(
    space: &FiniteMetricSpace,
    weights: &[(usize, usize, f64)],
) -> Result<f64, EmbedError> {
    let n = space.len();
    for &(i, j, w) in weights {
        if i >= n || j >= n || i == j {
            return Err(EmbedError::UnsupportedPair(i, j));
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(EmbedError::BadWeight(i, j));
        }
    }
    let masks = cut_masks(n)?;
    let all = pairs(n);
    let mut a = Matrix::zeros(all.len(), masks.len());
    for (row, &(i, j)) in all.iter().enumerate() {
        for (col, &m) in masks.iter().enumerate() {
            if separates(m, i, j) {
                a[(row, col)] = 1.0;
            }
        }
    }
    let b: Vec<f64> = all.iter().map(|&(i, j)| space.d(i, j)).collect();
    let c: Vec<f64> = masks
        .iter()
        .map(|&m| {
            weights
                .iter()
                .filter(|&&(i, j, _)| separates(m, i, j))
                .map(|&(_, _, w)| w)
                .sum()
        })
        .collect();
    Ok(maximize(&c, &a, &b)?.objective)
}
