//! Optimal-distortion embeddings of finite windows and the dual measures
//! that certify their optimality.
//!
//! For a window `C` and scale `R`, the Hilbert problem asks for the largest
//! `s` such that some 1-Lipschitz map `f: C → H` separates every pair at
//! distance `≥ R` by at least `s`. Writing `K` for the Gram matrix of `f`
//! and `Q(x,y) = K_xx + K_yy − 2K_xy`, this is the semidefinite program
//! `max t` s.t. `Q ≤ d²` on all pairs, `Q ≥ t` on far pairs, `K ⪰ 0`, with
//! `s* = √t*`. Its dual multipliers on the far-pair rows form a probability
//! measure `μ` for which every 1-Lipschitz map satisfies
//! `Σ μ(x,y)‖f(x) − f(y)‖² ≤ s*²`.

mod cut;
mod extension;
mod gram;
mod hilbert;
mod spectral_cert;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::GroupError;
use crate::linalg::Matrix;
use crate::lp::LpError;
use crate::metric::{is_far, FiniteMetricSpace};
use crate::sdp::SolveStatus;
use crate::spectral::SpectralError;

pub use cut::{cut_cone_lp, l1_poincare_value, Cut, MAX_CUT_POINTS};
pub use extension::{extension_compose, ComposedFamily, Extension, KernelFamily};
pub use gram::gram_factor;
pub use hilbert::{max_separation_sdp, poincare_value, poincare_value_weights, MAX_SDP_POINTS};
pub use spectral_cert::{certificate_from_spectral_gap, SpectralCertificate};

/// Multipliers below this are treated as zero before renormalizing.
pub const MULTIPLIER_FLOOR: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbedError {
    #[error("no pair is at distance >= {0}")]
    NoFarPairs(f64),
    #[error("window has {0} points, need at least 2")]
    TooSmall(usize),
    #[error("window has {n} points, limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("cut enumeration over {0} points exceeds the limit")]
    CutLimitExceeded(usize),
    #[error("weight on pair ({0}, {1}) is not supported by the window")]
    UnsupportedPair(usize, usize),
    #[error("weight on pair ({0}, {1}) is negative or not finite")]
    BadWeight(usize, usize),
    #[error("matrix is not positive semidefinite (defect {0:.3e})")]
    NotPsd(f64),
    #[error("graph has minimum degree 0")]
    IsolatedVertex,
    #[error("section is invalid: {0}")]
    SectionInvalid(String),
    #[error("element {0} is not in the kernel")]
    NotInKernel(usize),
    #[error("support radius exceeded: {0}")]
    SupportRadiusExceeded(String),
    #[error("family vector {index} has norm {norm}, expected 1")]
    NotUnit { index: usize, norm: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertificateError {
    #[error("pair ({0}, {1}) is out of range")]
    OutOfRange(usize, usize),
    #[error("weight on ({0}, {1}) is negative or not finite")]
    BadWeight(usize, usize),
    #[error("total mass is {0}, expected 1")]
    NotNormalized(f64),
    #[error("weights on ({0}, {1}) and ({1}, {0}) differ")]
    Asymmetric(usize, usize),
    #[error("pair ({0}, {1}) carries mass but is closer than R")]
    NearPair(usize, usize),
    #[error("exponent must be 1 or 2, got {0}")]
    BadExponent(u32),
}

fn default_exponent() -> u32 {
    2
}

/// A symmetric probability measure on ordered pairs of a window, together
/// with the Poincaré constant `c` it certifies at scale `R`:
/// `Σ μ(x,y)‖f(x) − f(y)‖ᵖ ≤ c` for every 1-Lipschitz `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateMeasure {
    pub pairs: Vec<(usize, usize, f64)>,
    pub c: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(default = "default_exponent")]
    pub p: u32,
}

impl CertificateMeasure {
    /// Builds a symmetric measure from unordered-pair weights by splitting
    /// each weight evenly over both orders, dropping entries below
    /// [`MULTIPLIER_FLOOR`] and renormalizing.
    pub fn from_unordered(weights: &[((usize, usize), f64)], c: f64, r: f64, p: u32) -> Self {
        let kept: Vec<((usize, usize), f64)> = weights
            .iter()
            .copied()
            .filter(|&(_, w)| w >= MULTIPLIER_FLOOR)
            .collect();
        let total: f64 = kept.iter().map(|&(_, w)| w).sum();
        let mut pairs = Vec::with_capacity(2 * kept.len());
        for ((i, j), w) in kept {
            let half = w / total / 2.0;
            pairs.push((i, j, half));
            pairs.push((j, i, half));
        }
        pairs.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        Self { pairs, c, r, p }
    }

    pub fn total_mass(&self) -> f64 {
        self.pairs.iter().map(|&(_, _, w)| w).sum()
    }

    /// Weight of the unordered pair `{i, j}` (both orders summed).
    pub fn unordered_weight(&self, i: usize, j: usize) -> f64 {
        self.pairs
            .iter()
            .filter(|&&(a, b, _)| (a, b) == (i, j) || (a, b) == (j, i))
            .map(|&(_, _, w)| w)
            .sum()
    }

    pub fn validate(&self, space: &FiniteMetricSpace) -> Result<(), CertificateError> {
        if self.p != 1 && self.p != 2 {
            return Err(CertificateError::BadExponent(self.p));
        }
        let n = space.len();
        let mut table = std::collections::BTreeMap::new();
        for &(i, j, w) in &self.pairs {
            if i >= n || j >= n {
                return Err(CertificateError::OutOfRange(i, j));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(CertificateError::BadWeight(i, j));
            }
            if w > 0.0 && (i == j || !is_far(space.d(i, j), self.r)) {
                return Err(CertificateError::NearPair(i, j));
            }
            *table.entry((i, j)).or_insert(0.0) += w;
        }
        let mass = self.total_mass();
        if (mass - 1.0).abs() > 1e-9 {
            return Err(CertificateError::NotNormalized(mass));
        }
        for (&(i, j), &w) in &table {
            let back = table.get(&(j, i)).copied().unwrap_or(0.0);
            if (w - back).abs() > 1e-12 {
                return Err(CertificateError::Asymmetric(i, j));
            }
        }
        Ok(())
    }

    /// `Σ μ(x,y)‖f(x) − f(y)‖ᵖ` for a map given by its coordinate rows,
    /// with the Euclidean norm squared (`p = 2`) or the ℓ¹ norm (`p = 1`).
    pub fn evaluate(&self, coords: &[Vec<f64>]) -> f64 {
        self.pairs
            .iter()
            .map(|&(i, j, w)| {
                let diff = coords[i].iter().zip(&coords[j]).map(|(a, b)| a - b);
                let v: f64 = if self.p == 1 {
                    diff.map(f64::abs).sum()
                } else {
                    diff.map(|t| t * t).sum()
                };
                w * v
            })
            .sum()
    }

    /// Same pairing for a map given by its Gram matrix (`p = 2` only).
    pub fn evaluate_gram(&self, gram: &Matrix) -> f64 {
        self.pairs
            .iter()
            .map(|&(i, j, w)| w * (gram[(i, i)] + gram[(j, j)] - 2.0 * gram[(i, j)]))
            .sum()
    }
}

/// Outcome of an optimal-separation solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbedResult {
    pub s_star: f64,
    /// Centered Gram matrix of an optimal Hilbert embedding.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Matrix>,
    /// Cut decomposition of an optimal ℓ¹ embedding.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cuts: Option<Vec<Cut>>,
    pub certificate: CertificateMeasure,
    pub status: SolveStatus,
    /// Relative primal-dual gap reported by the solver.
    pub relative_gap: f64,
}

/// `Q(x,y) = K_xx + K_yy − 2K_xy`.
pub fn gram_sq_distance(gram: &Matrix, i: usize, j: usize) -> f64 {
    gram[(i, i)] + gram[(j, j)] - 2.0 * gram[(i, j)]
}
