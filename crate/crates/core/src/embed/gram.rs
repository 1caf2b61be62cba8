use crate::linalg::Matrix;

use super::EmbedError;

/// Coordinates `F` (one row per point) with `F Fᵀ = K`, by Cholesky with
/// diagonal pivoting. The rank is the number of pivots above
/// `1e-10 · max(1, trace K)`.
///
/// Returns [`EmbedError::NotPsd`] if a remaining diagonal entry is
/// significantly negative or the factor fails to reproduce `K` to `1e-7`.
pub fn gram_factor(k: &Matrix) -> Result<Matrix, EmbedError> {
    let n = k.rows();
    if !k.is_square() {
        return Err(EmbedError::DimensionMismatch(format!(
            "Gram matrix is {}x{}",
            k.rows(),
            k.cols()
        )));
    }
    let tol = 1e-10 * k.trace().abs().max(1.0);
    let mut residual = k.clone();
    residual.symmetrize();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut used = vec![false; n];
    loop {
        let pivot = (0..n)
            .filter(|&i| !used[i])
            .max_by(|&a, &b| residual[(a, a)].total_cmp(&residual[(b, b)]).then(b.cmp(&a)));
        let Some(p) = pivot else { break };
        let d = residual[(p, p)];
        if d <= tol {
            break;
        }
        used[p] = true;
        let root = d.sqrt();
        let col: Vec<f64> = (0..n).map(|i| residual[(i, p)] / root).collect();
        for i in 0..n {
            for j in 0..n {
                residual[(i, j)] -= col[i] * col[j];
            }
        }
        columns.push(col);
    }
    let defect = residual.max_abs();
    let worst_diag = (0..n).map(|i| residual[(i, i)]).fold(0.0, f64::min);
    if worst_diag < -1e-7 * k.max_abs().max(1.0) || defect > 1e-7 * k.max_abs().max(1.0) {
        return Err(EmbedError::NotPsd(defect.max(-worst_diag)));
    }
    let rank = columns.len();
    Ok(Matrix::from_fn(n, rank, |i, r| columns[r][i]))
}
