use serde::{Deserialize, Serialize};

use crate::metric::is_far;
use crate::spectral::{lambda1, FiniteGraph, SpectralError};

use super::{CertificateMeasure, EmbedError};

/// A Poincaré certificate read off the spectral gap of a graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralCertificate {
    pub measure: CertificateMeasure,
    pub lambda1: f64,
    pub k0: usize,
    /// `2·k0 / λ1`, the certified constant (also stored as `measure.c`).
    pub bound: f64,
    /// Fraction of `C × C` (including the diagonal) carried by the support
    /// before renormalizing.
    pub far_mass: f64,
    /// Set when the separation scale `log_{k0}(|C|/2)` is below 1, or
    /// `k0 = 1`, so every distinct pair is in the support.
    pub all_pairs: bool,
}

/// Uniform measure on pairs at distance `≥ R = log_{k0}(|C|/2)` in the graph
/// metric, with constant `2·k0/λ1`.
///
/// When `k0 ≥ 2`, at least half of `C × C` lies at distance `≥ R`, because
/// a ball of radius `r` has at most `1 + k0 + … + k0^r` points. With
/// `k0 = 1` the only connected graph is a single edge; the measure then
/// sits on that edge with `R = 1` and `all_pairs` set.
pub fn certificate_from_spectral_gap(g: &FiniteGraph) -> Result<SpectralCertificate, EmbedError> {
    let n = g.n();
    if n < 2 {
        return Err(SpectralError::TooSmall.into());
    }
    let k0 = g.k0();
    if k0 == 0 {
        return Err(EmbedError::IsolatedVertex);
    }
    let lam = lambda1(g)?;
    let metric = g.metric()?;
    let (r, all_pairs) = if k0 >= 2 {
        let r = (n as f64 / 2.0).ln() / (k0 as f64).ln();
        (r, r < 1.0)
    } else {
        (1.0, true)
    };
    let mut support = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && is_far(metric.d(i, j), r) {
                support.push((i, j));
            }
        }
    }
    let bound = 2.0 * k0 as f64 / lam;
    let w = 1.0 / support.len() as f64;
    let measure = CertificateMeasure {
        pairs: support.iter().map(|&(i, j)| (i, j, w)).collect(),
        c: bound,
        r,
        p: 2,
    };
    Ok(SpectralCertificate {
        far_mass: support.len() as f64 / (n * n) as f64,
        measure,
        lambda1: lam,
        k0,
        bound,
        all_pairs,
    })
}
