//! Dense tableau simplex for `max cᵀx s.t. Ax ≤ b, x ≥ 0` with `b ≥ 0`.
//!
//! The slack basis is feasible from the start, so a single phase suffices.
//! Bland's rule picks entering and leaving columns, which rules out cycling
//! on the highly degenerate cut-cone programs.

use thiserror::Error;

use crate::linalg::Matrix;

const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("right-hand side must be non-negative (row {0})")]
    NegativeRhs(usize),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex exceeded {0} pivots")]
    PivotLimit(usize),
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Optimal dual multipliers, one per row of `A`.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

pub fn maximize(c: &[f64], a: &Matrix, b: &[f64]) -> Result<LpSolution, LpError> {
    let rows = a.rows();
    let cols = a.cols();
    assert_eq!(c.len(), cols);
    assert_eq!(b.len(), rows);
    if let Some(i) = b.iter().position(|&v| v < 0.0) {
        return Err(LpError::NegativeRhs(i));
    }
    let width = cols + rows + 1;
    // tableau rows 0..rows are constraints, row `rows` is the objective
    let mut t = Matrix::zeros(rows + 1, width);
    for i in 0..rows {
        for j in 0..cols {
            t[(i, j)] = a[(i, j)];
        }
        t[(i, cols + i)] = 1.0;
        t[(i, width - 1)] = b[i];
    }
    for j in 0..cols {
        t[(rows, j)] = -c[j];
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    let limit = 50 * (rows + cols).max(100);
    let mut pivots = 0;
    loop {
        let Some(enter) = (0..width - 1).find(|&j| t[(rows, j)] < -PIVOT_TOL) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..rows {
            let coef = t[(i, enter)];
            if coef > PIVOT_TOL {
                let ratio = t[(i, width - 1)] / coef;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best - 1e-15 || (ratio <= best + 1e-15 && basis[i] < basis[l])
                    }
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(pr) = leave else {
            return Err(LpError::Unbounded);
        };
        pivots += 1;
        if pivots > limit {
            return Err(LpError::PivotLimit(limit));
        }
        let p = t[(pr, enter)];
        for j in 0..width {
            t[(pr, j)] /= p;
        }
        for i in 0..=rows {
            if i == pr {
                continue;
            }
            let f = t[(i, enter)];
            if f != 0.0 {
                for j in 0..width {
                    t[(i, j)] -= f * t[(pr, j)];
                }
            }
        }
        basis[pr] = enter;
    }
    let mut x = vec![0.0; cols];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < cols {
            x[bv] = t[(i, width - 1)];
        }
    }
    let duals = (0..rows).map(|i| t[(rows, cols + i)]).collect();
    Ok(LpSolution {
        x,
        objective: t[(rows, width - 1)],
        duals,
        pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_lp() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]]);
        let sol = maximize(&[3.0, 5.0], &a, &[4.0, 12.0, 18.0]).unwrap();
        assert!((sol.objective - 36.0).abs() < 1e-12);
        assert!((sol.x[0] - 2.0).abs() < 1e-12 && (sol.x[1] - 6.0).abs() < 1e-12);
        // strong duality: bᵀy = cᵀx
        let by: f64 = [4.0, 12.0, 18.0].iter().zip(&sol.duals).map(|(b, y)| b * y).sum();
        assert!((by - 36.0).abs() < 1e-12);
        assert_eq!(sol.duals[0], 0.0);
    }

    #[test]
    fn unbounded_and_bad_rhs() {
        let a = Matrix::from_rows(&[vec![-1.0, 1.0]]);
        assert_eq!(maximize(&[1.0, 0.0], &a, &[1.0]).unwrap_err(), LpError::Unbounded);
        assert_eq!(
            maximize(&[1.0, 0.0], &a, &[-1.0]).unwrap_err(),
            LpError::NegativeRhs(0)
        );
    }
}
