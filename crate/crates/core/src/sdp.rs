//! Primal-dual interior-point solver for small semidefinite programs with a
//! single PSD block and a block of linear inequalities.
//!
//! The problem is stated in inequality (LMI) form
//!
//! ```text
//!   maximize   bᵀy
//!   subject to S = C − Σᵢ yᵢ Aᵢ ⪰ 0          (PSD block)
//!              s = c − A_lp y ≥ 0            (linear block)
//! ```
//!
//! whose conic dual is `min ⟨C,X⟩ + cᵀx` s.t. `⟨Aᵢ,X⟩ + (A_lpᵀx)ᵢ = bᵢ`,
//! `X ⪰ 0`, `x ≥ 0`. Iterates follow the HKM search direction with a
//! Mehrotra predictor-corrector step from an infeasible start. All
//! factorizations are dense with a fixed pivot order, so solves are
//! deterministic.

use serde::{Deserialize, Serialize};

use crate::linalg::{cholesky, cholesky_solve, dot, lower_inverse, norm2, symmetric_eigen, Matrix};

/// Iteration cap.
pub const MAX_ITERATIONS: usize = 200;
/// Relative duality gap and infeasibility at which a solve is `Optimal`.
pub const GAP_TOL: f64 = 1e-8;
/// Tighter target the iteration keeps pushing towards while progress lasts.
const TARGET_TOL: f64 = 1e-11;

/// Sparse symmetric matrix: entries `(row, col, value)` with `row ≤ col`;
/// each off-diagonal entry stands for both `(row,col)` and `(col,row)`.
pub type SymSparse = Vec<(usize, usize, f64)>;

#[derive(Debug, Clone)]
pub struct LmiProblem {
    pub b: Vec<f64>,
    pub psd_c: Matrix,
    /// One sparse symmetric matrix per variable.
    pub psd_a: Vec<SymSparse>,
    pub lp_c: Vec<f64>,
    /// One sparse row per linear inequality: `(variable, coefficient)`.
    pub lp_a: Vec<Vec<(usize, f64)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    /// Iteration cap or stall before reaching the gap tolerance; the
    /// returned iterate is the best one seen.
    NumericallyMarginal,
}

#[derive(Debug, Clone)]
pub struct LmiSolution {
    pub y: Vec<f64>,
    /// PSD slack `C − Σ yᵢAᵢ`.
    pub s_psd: Matrix,
    pub s_lp: Vec<f64>,
    /// Dual PSD variable.
    pub x_psd: Matrix,
    /// Dual multipliers of the linear inequalities.
    pub x_lp: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub relative_gap: f64,
    pub infeasibility: f64,
    pub iterations: usize,
    pub status: SolveStatus,
}

struct Residuals {
    rp: Vec<f64>,
    rd: Matrix,
    rd_lp: Vec<f64>,
    pobj: f64,
    dobj: f64,
    rel_gap: f64,
    pinf: f64,
    dinf: f64,
}

impl LmiProblem {
    pub fn num_vars(&self) -> usize {
        self.b.len()
    }

    fn dim(&self) -> usize {
        self.psd_c.rows()
    }

    /// `Σ yᵢ Aᵢ` on the PSD block.
    fn psd_combination(&self, y: &[f64]) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (a, &yi) in self.psd_a.iter().zip(y) {
            if yi == 0.0 {
                continue;
            }
            for &(r, c, v) in a {
                out[(r, c)] += yi * v;
                if r != c {
                    out[(c, r)] += yi * v;
                }
            }
        }
        out
    }

    fn lp_combination(&self, y: &[f64]) -> Vec<f64> {
        self.lp_a
            .iter()
            .map(|row| row.iter().map(|&(i, a)| a * y[i]).sum())
            .collect()
    }

    /// `𝒜(X, x)ᵢ = ⟨Aᵢ, X⟩ + Σ_j a_ji x_j` (X need not be symmetric).
    fn adjoint(&self, x_psd: &Matrix, x_lp: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .psd_a
            .iter()
            .map(|a| {
                a.iter()
                    .map(|&(r, c, v)| {
                        if r == c {
                            v * x_psd[(r, r)]
                        } else {
                            v * (x_psd[(r, c)] + x_psd[(c, r)])
                        }
                    })
                    .sum()
            })
            .collect();
        for (row, &xj) in self.lp_a.iter().zip(x_lp) {
            for &(i, a) in row {
                out[i] += a * xj;
            }
        }
        out
    }

    fn residuals(&self, y: &[f64], s: &Matrix, s_lp: &[f64], x: &Matrix, x_lp: &[f64]) -> Residuals {
        let ax = self.adjoint(x, x_lp);
        let rp: Vec<f64> = self.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let mut rd = self.psd_c.clone();
        rd.add_scaled(&self.psd_combination(y), -1.0);
        rd.add_scaled(s, -1.0);
        let aly = self.lp_combination(y);
        let rd_lp: Vec<f64> = (0..self.lp_c.len())
            .map(|j| self.lp_c[j] - aly[j] - s_lp[j])
            .collect();
        let pobj = dot(&self.b, y);
        let dobj = self.psd_c.frobenius_dot(x) + dot(&self.lp_c, x_lp);
        let rel_gap = (dobj - pobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let pinf = norm2(&rp) / (1.0 + norm2(&self.b));
        let dinf = (rd.frobenius_norm() + norm2(&rd_lp))
            / (1.0 + self.psd_c.frobenius_norm() + norm2(&self.lp_c));
        Residuals {
            rp,
            rd,
            rd_lp,
            pobj,
            dobj,
            rel_gap,
            pinf,
            dinf,
        }
    }

    /// Schur complement `M_ij = tr(Aᵢ X Aⱼ W) + Σ_k a_ki (x_k/s_k) a_kj`.
    fn schur(&self, x: &Matrix, w: &Matrix, ratio: &[f64]) -> Matrix {
        let m = self.num_vars();
        let full: Vec<Vec<(usize, usize, f64)>> = self
            .psd_a
            .iter()
            .map(|a| {
                a.iter()
                    .flat_map(|&(r, c, v)| {
                        if r == c {
                            vec![(r, c, v)]
                        } else {
                            vec![(r, c, v), (c, r, v)]
                        }
                    })
                    .collect()
            })
            .collect();
        let mut out = Matrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let mut acc = 0.0;
                for &(p, q, v) in &full[i] {
                    for &(r, s, u) in &full[j] {
                        acc += v * u * x[(q, r)] * w[(s, p)];
                    }
                }
                out[(i, j)] = acc;
            }
        }
        for (row, &rt) in self.lp_a.iter().zip(ratio) {
            for &(i, a) in row {
                for &(j, b) in row {
                    if j >= i {
                        out[(i, j)] += a * rt * b;
                    }
                }
            }
        }
        for i in 0..m {
            for j in 0..i {
                out[(i, j)] = out[(j, i)];
            }
        }
        out
    }
}

/// Largest step `α` keeping `P + α dP ⪰ 0`, given the Cholesky
/// factor of `P`.
fn max_step_psd(p_chol: &Matrix, dp: &Matrix) -> f64 {
    if dp.rows() == 0 {
        return f64::INFINITY;
    }
    let li = lower_inverse(p_chol);
    let mut t = li.matmul(dp).matmul(&li.transpose());
    t.symmetrize();
    let lmin = symmetric_eigen(&t).values[0];
    if lmin < 0.0 {
        -1.0 / lmin
    } else {
        f64::INFINITY
    }
}

fn max_step_lp(v: &[f64], dv: &[f64]) -> f64 {
    v.iter()
        .zip(dv)
        .filter(|(_, &d)| d < 0.0)
        .map(|(&x, &d)| -x / d)
        .fold(f64::INFINITY, f64::min)
}

struct Direction {
    dy: Vec<f64>,
    dx: Matrix,
    dx_lp: Vec<f64>,
    ds: Matrix,
    ds_lp: Vec<f64>,
}

/// Solves the LMI problem.
pub fn solve(problem: &LmiProblem) -> LmiSolution {
    let m = problem.num_vars();
    let n = problem.dim();
    let nl = problem.lp_c.len();
    let nu = (n + nl).max(1) as f64;

    let a_norms: Vec<f64> = (0..m)
        .map(|i| {
            let psd: f64 = problem.psd_a[i]
                .iter()
                .map(|&(r, c, v)| if r == c { v * v } else { 2.0 * v * v })
                .sum();
            let lp: f64 = problem
                .lp_a
                .iter()
                .flat_map(|row| row.iter().filter(|(j, _)| *j == i).map(|(_, a)| a * a))
                .sum();
            (psd + lp).sqrt()
        })
        .collect();
    let c_norm = (problem.psd_c.frobenius_norm().powi(2) + dot(&problem.lp_c, &problem.lp_c)).sqrt();
    let xi = (0..m)
        .map(|i| nu * (1.0 + problem.b[i].abs()) / (1.0 + a_norms[i]))
        .fold(nu.sqrt().max(10.0), f64::max);
    let eta = a_norms
        .iter()
        .copied()
        .fold(c_norm.max(nu.sqrt()).max(10.0), f64::max);

    let mut y = vec![0.0; m];
    let mut x = Matrix::identity(n).scale(xi);
    let mut x_lp = vec![xi; nl];
    let mut s = Matrix::identity(n).scale(eta);
    let mut s_lp = vec![eta; nl];

    let mut best: Option<(f64, LmiSolution)> = None;
    let mut iterations = 0;
    let mut stall = 0;

    loop {
        let res = problem.residuals(&y, &s, &s_lp, &x, &x_lp);
        let err = res.rel_gap.max(res.pinf).max(res.dinf);
        let snapshot = |status| LmiSolution {
            y: y.clone(),
            s_psd: s.clone(),
            s_lp: s_lp.clone(),
            x_psd: x.clone(),
            x_lp: x_lp.clone(),
            primal_objective: res.pobj,
            dual_objective: res.dobj,
            relative_gap: res.rel_gap,
            infeasibility: res.pinf.max(res.dinf),
            iterations,
            status,
        };
        match &best {
            Some((e, _)) if *e <= err => stall += 1,
            _ => {
                stall = 0;
                best = Some((err, snapshot(SolveStatus::NumericallyMarginal)));
            }
        }
        if err <= TARGET_TOL || iterations >= MAX_ITERATIONS || stall >= 8 {
            break;
        }
        iterations += 1;

        let mu = (x.frobenius_dot(&s) + dot(&x_lp, &s_lp)) / nu;
        let Some(s_chol) = cholesky(&s) else { break };
        let Some(x_chol) = cholesky(&x) else { break };
        let s_inv_l = lower_inverse(&s_chol);
        let w = s_inv_l.transpose().matmul(&s_inv_l);
        let ratio: Vec<f64> = x_lp.iter().zip(&s_lp).map(|(a, b)| a / b).collect();
        let mut schur = problem.schur(&x, &w, &ratio);
        let schur_chol = match cholesky(&schur) {
            Some(l) => l,
            None => {
                let bump = 1e-14 * (1.0 + schur.max_abs());
                for i in 0..m {
                    schur[(i, i)] += bump;
                }
                match cholesky(&schur) {
                    Some(l) => l,
                    None => break,
                }
            }
        };

        let direction = |sigma_mu: f64, corr: Option<(&Matrix, &[f64])>| -> Direction {
            // H = σμW − X − X Rd W − corr
            let mut h = w.scale(sigma_mu);
            h.add_scaled(&x, -1.0);
            h.add_scaled(&x.matmul(&res.rd).matmul(&w), -1.0);
            let mut h_lp: Vec<f64> = (0..nl)
                .map(|j| sigma_mu / s_lp[j] - x_lp[j] - x_lp[j] * res.rd_lp[j] / s_lp[j])
                .collect();
            if let Some((c, c_lp)) = corr {
                h.add_scaled(c, -1.0);
                for j in 0..nl {
                    h_lp[j] -= c_lp[j];
                }
            }
            let ah = problem.adjoint(&h, &h_lp);
            let rhs: Vec<f64> = res.rp.iter().zip(&ah).map(|(r, a)| r - a).collect();
            let dy = cholesky_solve(&schur_chol, &rhs);
            let aty = problem.psd_combination(&dy);
            let mut ds = res.rd.clone();
            ds.add_scaled(&aty, -1.0);
            ds.symmetrize();
            let mut dx = h;
            dx.add_scaled(&x.matmul(&aty).matmul(&w), 1.0);
            dx.symmetrize();
            let aly = problem.lp_combination(&dy);
            let ds_lp: Vec<f64> = (0..nl).map(|j| res.rd_lp[j] - aly[j]).collect();
            let dx_lp: Vec<f64> = (0..nl)
                .map(|j| h_lp[j] + x_lp[j] * aly[j] / s_lp[j])
                .collect();
            Direction {
                dy,
                dx,
                dx_lp,
                ds,
                ds_lp,
            }
        };

        let steps = |d: &Direction| -> (f64, f64) {
            let ap = max_step_psd(&x_chol, &d.dx).min(max_step_lp(&x_lp, &d.dx_lp));
            let ad = max_step_psd(&s_chol, &d.ds).min(max_step_lp(&s_lp, &d.ds_lp));
            (ap, ad)
        };

        let pred = direction(0.0, None);
        let (ap, ad) = steps(&pred);
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let mut xa = x.clone();
        xa.add_scaled(&pred.dx, ap);
        let mut sa = s.clone();
        sa.add_scaled(&pred.ds, ad);
        let xa_lp: Vec<f64> = (0..nl).map(|j| x_lp[j] + ap * pred.dx_lp[j]).collect();
        let sa_lp: Vec<f64> = (0..nl).map(|j| s_lp[j] + ad * pred.ds_lp[j]).collect();
        let mu_aff = (xa.frobenius_dot(&sa) + dot(&xa_lp, &sa_lp)) / nu;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        let corr = pred.dx.matmul(&pred.ds).matmul(&w);
        let corr_lp: Vec<f64> = (0..nl)
            .map(|j| pred.dx_lp[j] * pred.ds_lp[j] / s_lp[j])
            .collect();
        let d = direction(sigma * mu, Some((&corr, &corr_lp)));
        let (ap, ad) = steps(&d);
        let gamma = 0.9 + 0.09 * ap.min(ad).min(1.0);
        let (ap, ad) = ((gamma * ap).min(1.0), (gamma * ad).min(1.0));

        x.add_scaled(&d.dx, ap);
        for j in 0..nl {
            x_lp[j] += ap * d.dx_lp[j];
        }
        for i in 0..m {
            y[i] += ad * d.dy[i];
        }
        s.add_scaled(&d.ds, ad);
        for j in 0..nl {
            s_lp[j] += ad * d.ds_lp[j];
        }
        x.symmetrize();
        s.symmetrize();
    }

    let (err, mut sol) = best.expect("at least one iterate");
    sol.status = if err <= GAP_TOL {
        SolveStatus::Optimal
    } else {
        SolveStatus::NumericallyMarginal
    };
    sol
}
