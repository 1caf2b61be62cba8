//! Finite nets of warped cones.
//!
//! A net of the open cone over a compact space `Y` is a finite set of base
//! points times a list of heights, with the intrinsic cone distance
//! `|t₁ − t₂| + min(t₁,t₂)·d_Y(y₁,y₂)/diam(Y)`. Warping by a group action
//! adds a unit-length jump from `(y,t)` to `(s·y,t)` for each generator `s`;
//! the warped distance is the shortest-path closure of both kinds of edge.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::metric::{FiniteMetricSpace, MetricError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WarpError {
    #[error("base diameter must be positive")]
    ZeroDiameter,
    #[error("levels must be positive, finite and distinct")]
    BadLevels,
    #[error("generator {index} has {found} images, base has {expected} points")]
    GeneratorSize {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("rotation by {alpha} is not a shift of the {size}-point net (max snap error {error})")]
    NonExactRotation {
        alpha: String,
        size: usize,
        error: f64,
    },
    #[error("net size must be positive")]
    EmptyNet,
    #[error("cannot parse rotation {0:?} as p/q")]
    BadRotation(String),
    #[error("unsupported base {0:?} (only \"circle\")")]
    UnsupportedBase(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A self-map of the base net approximating a group element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorMap {
    pub images: Vec<usize>,
    /// Largest base-metric distance between a point's true image and the
    /// net point it was snapped to.
    pub snap_error: f64,
}

impl GeneratorMap {
    pub fn is_exact(&self) -> bool {
        self.snap_error == 0.0
    }
}

/// Points of a warped-cone net, ordered level-major: point `k` is base point
/// `k % |base|` at level `k / |base|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeNet {
    pub base: FiniteMetricSpace,
    pub base_diam: f64,
    pub levels: Vec<f64>,
    pub generators: Vec<GeneratorMap>,
}

impl ConeNet {
    pub fn len(&self) -> usize {
        self.base.len() * self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(base point, level index)` of net point `k`.
    pub fn point(&self, k: usize) -> (usize, usize) {
        (k % self.base.len(), k / self.base.len())
    }

    pub fn index(&self, base_point: usize, level: usize) -> usize {
        level * self.base.len() + base_point
    }

    pub fn intrinsic(&self, a: usize, b: usize) -> f64 {
        let (y1, l1) = self.point(a);
        let (y2, l2) = self.point(b);
        let (t1, t2) = (self.levels[l1], self.levels[l2]);
        (t1 - t2).abs() + t1.min(t2) * self.base.d(y1, y2) / self.base_diam
    }

    pub fn with_generators(mut self, generators: Vec<GeneratorMap>) -> Result<Self, WarpError> {
        let n = self.base.len();
        for (index, g) in generators.iter().enumerate() {
            if g.images.len() != n || g.images.iter().any(|&i| i >= n) {
                return Err(WarpError::GeneratorSize {
                    index,
                    expected: n,
                    found: g.images.len(),
                });
            }
        }
        self.generators = generators;
        Ok(self)
    }

    fn labels(&self) -> Vec<String> {
        (0..self.len())
            .map(|k| {
                let (y, l) = self.point(k);
                format!("({},{})", self.base.labels()[y], self.levels[l])
            })
            .collect()
    }

    /// The intrinsic cone metric on the net, validated.
    pub fn intrinsic_metric(&self) -> Result<FiniteMetricSpace, WarpError> {
        let n = self.len();
        let m = Matrix::from_fn(n, n, |a, b| self.intrinsic(a, b));
        Ok(FiniteMetricSpace::from_matrix(m)?.with_labels(self.labels())?)
    }

    /// Edge weights of the augmented graph: intrinsic distance on every
    /// pair, lowered to 1 along each generator jump.
    pub fn augmented_weights(&self) -> Matrix {
        let n = self.len();
        let mut w = Matrix::from_fn(n, n, |a, b| self.intrinsic(a, b));
        for g in &self.generators {
            for level in 0..self.levels.len() {
                for (y, &sy) in g.images.iter().enumerate() {
                    let (a, b) = (self.index(y, level), self.index(sy, level));
                    if a != b && w[(a, b)] > 1.0 {
                        w[(a, b)] = 1.0;
                        w[(b, a)] = 1.0;
                    }
                }
            }
        }
        w
    }
}

/// Builds the net `base × levels`. `diam` is the diameter of the compact
/// space the base approximates, which may exceed the net's own diameter.
pub fn cone_net(base: FiniteMetricSpace, diam: f64, levels: Vec<f64>) -> Result<ConeNet, WarpError> {
    if !(diam > 0.0 && diam.is_finite()) {
        return Err(WarpError::ZeroDiameter);
    }
    if base.is_empty() {
        return Err(WarpError::EmptyNet);
    }
    let mut sorted = levels.clone();
    sorted.sort_by(f64::total_cmp);
    if levels.is_empty()
        || levels.iter().any(|&t| !(t > 0.0 && t.is_finite()))
        || sorted.windows(2).any(|w| w[0] == w[1])
    {
        return Err(WarpError::BadLevels);
    }
    let net = ConeNet {
        base,
        base_diam: diam,
        levels,
        generators: Vec::new(),
    };
    net.intrinsic_metric()?;
    Ok(net)
}

/// All-pairs shortest paths on a dense weight matrix.
///
/// The `k` loop is sequential; rows are relaxed in parallel for each `k`,
/// which gives the same result as the serial order.
pub fn floyd_warshall(weights: &Matrix) -> Matrix {
    let n = weights.rows();
    let mut rows = weights.to_rows();
    for k in 0..n {
        let via = rows[k].clone();
        rows.par_iter_mut().for_each(|row| {
            let dik = row[k];
            for (dij, &dkj) in row.iter_mut().zip(&via) {
                let cand = dik + dkj;
                if cand < *dij {
                    *dij = cand;
                }
            }
        });
    }
    Matrix::from_rows(&rows)
}

/// The warped metric on the net: shortest paths over intrinsic edges and
/// generator jumps across all listed levels.
pub fn warp_metric(net: &ConeNet) -> Result<FiniteMetricSpace, WarpError> {
    let d = floyd_warshall(&net.augmented_weights());
    let sym = Matrix::from_fn(d.rows(), d.cols(), |a, b| d[(a, b)].min(d[(b, a)]));
    Ok(FiniteMetricSpace::from_matrix(sym)?.with_labels(net.labels())?)
}

/// Circle of circumference 1 sampled at `k/size`, with the arc metric.
pub fn circle_net(size: usize) -> Result<FiniteMetricSpace, WarpError> {
    if size == 0 {
        return Err(WarpError::EmptyNet);
    }
    let arc = |a: usize, b: usize| {
        let k = a.abs_diff(b);
        k.min(size - k) as f64 / size as f64
    };
    let m = Matrix::from_fn(size, size, arc);
    let labels = (0..size)
        .map(|k| Ratio::new(k as i64, size as i64).to_string())
        .collect();
    Ok(FiniteMetricSpace::from_matrix(m)?.with_labels(labels)?)
}

/// Parses `p/q` (or an integer) as a rational rotation.
pub fn parse_rotation(text: &str) -> Result<Ratio<i64>, WarpError> {
    let bad = || WarpError::BadRotation(text.to_string());
    let t = text.trim();
    let r = match t.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ratio::new(p, q)
        }
        None => Ratio::from_integer(t.parse().map_err(|_| bad())?),
    };
    Ok(r)
}

/// Rotation of the `size`-point circle net by `alpha` turns, snapped to the
/// nearest net point (ties round up). The snap error is exact zero when
/// `alpha·size` is an integer.
pub fn rotation_action(alpha: Ratio<i64>, size: usize) -> Result<GeneratorMap, WarpError> {
    if size == 0 {
        return Err(WarpError::EmptyNet);
    }
    let n = size as i64;
    let shift = alpha * n;
    // round half up in exact arithmetic
    let rounded = (shift + Ratio::new(1, 2)).floor();
    let diff = shift - rounded;
    let err = if diff < Ratio::from_integer(0) { -diff } else { diff } / n;
    let step = rounded.to_integer().rem_euclid(n) as usize;
    Ok(GeneratorMap {
        images: (0..size).map(|k| (k + step) % size).collect(),
        snap_error: *err.numer() as f64 / *err.denom() as f64,
    })
}

/// Like [`rotation_action`] but refuses rotations that are not net shifts.
pub fn rotation_action_exact(alpha: Ratio<i64>, size: usize) -> Result<GeneratorMap, WarpError> {
    let g = rotation_action(alpha, size)?;
    if g.is_exact() {
        Ok(g)
    } else {
        Err(WarpError::NonExactRotation {
            alpha: alpha.to_string(),
            size,
            error: g.snap_error,
        })
    }
}

/// JSON description `{base:"circle", size, alpha:"p/q", levels}`; `alpha`
/// may also be a list, or absent for no generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetSpec {
    pub base: String,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Alphas>,
    pub levels: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Alphas {
    One(String),
    Many(Vec<String>),
}

impl NetSpec {
    pub fn alphas(&self) -> Vec<&str> {
        match &self.alpha {
            None => Vec::new(),
            Some(Alphas::One(a)) => vec![a.as_str()],
            Some(Alphas::Many(v)) => v.iter().map(String::as_str).collect(),
        }
    }

    /// Builds the net with one snapped rotation per entry of `alpha`.
    pub fn build(&self) -> Result<ConeNet, WarpError> {
        if self.base != "circle" {
            return Err(WarpError::UnsupportedBase(self.base.clone()));
        }
        let net = cone_net(circle_net(self.size)?, 0.5, self.levels.clone())?;
        let gens = self
            .alphas()
            .into_iter()
            .map(|a| rotation_action(parse_rotation(a)?, self.size))
            .collect::<Result<Vec<_>, _>>()?;
        net.with_generators(gens)
    }
}
