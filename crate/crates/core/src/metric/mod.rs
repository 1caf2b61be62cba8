//! Validated finite metric spaces, coarse disjoint unions and windows.

mod control;
mod union;
mod window;

pub use control::{ControlError, ControlFunction, ControlPair};
pub use union::{coarse_disjoint_union, BlockMeta, BlockSpace, UNION_RULE};
pub use window::{enumerate_windows, Window};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Matrix;

/// Additive slack allowed in the metric axioms.
pub const METRIC_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("distance matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("non-finite distance at ({0},{1})")]
    NonFinite(usize, usize),
    #[error("negative distance at ({0},{1})")]
    NegativeEntry(usize, usize),
    #[error("non-zero diagonal entry at {0}")]
    NonZeroDiagonal(usize),
    #[error("distance between distinct points {0} and {1} is zero")]
    ZeroDistance(usize, usize),
    #[error("asymmetric distance: d({0},{1}) != d({1},{0})")]
    Asymmetric(usize, usize),
    #[error("triangle inequality fails on ({0},{1},{2}): d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(usize, usize, usize),
    #[error("{labels} labels for {points} points")]
    LabelCount { labels: usize, points: usize },
    #[error("empty input")]
    EmptyInput,
}

/// A labeled finite point set with a validated distance matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Matrix,
}

#[derive(Serialize, Deserialize)]
struct RawSpace {
    #[serde(default)]
    labels: Option<Vec<String>>,
    dist: Vec<Vec<f64>>,
}

impl TryFrom<RawSpace> for FiniteMetricSpace {
    type Error = MetricError;

    fn try_from(raw: RawSpace) -> Result<Self, MetricError> {
        let space = validate_metric(&raw.dist)?;
        match raw.labels {
            Some(labels) => space.with_labels(labels),
            None => Ok(space),
        }
    }
}

impl From<FiniteMetricSpace> for RawSpace {
    fn from(s: FiniteMetricSpace) -> Self {
        RawSpace {
            labels: Some(s.labels),
            dist: s.dist.to_rows(),
        }
    }
}

impl std::fmt::Debug for FiniteMetricSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteMetricSpace")
            .field("labels", &self.labels)
            .field("dist", &self.dist.to_rows())
            .finish()
    }
}

/// Checks the metric axioms on a square matrix and wraps it as a space with
/// labels `"0".."n-1"`.
pub fn validate_metric(rows: &[Vec<f64>]) -> Result<FiniteMetricSpace, MetricError> {
    let n = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(MetricError::NotSquare {
                rows: n,
                row: i,
                len: row.len(),
            });
        }
    }
    let dist = Matrix::from_rows(rows);
    check_axioms(&dist)?;
    Ok(FiniteMetricSpace {
        labels: (0..n).map(|i| i.to_string()).collect(),
        dist,
    })
}

fn check_axioms(d: &Matrix) -> Result<(), MetricError> {
    let n = d.rows();
    for i in 0..n {
        for j in 0..n {
            let v = d[(i, j)];
            if !v.is_finite() {
                return Err(MetricError::NonFinite(i, j));
            }
            if v < 0.0 {
                return Err(MetricError::NegativeEntry(i, j));
            }
        }
    }
    for i in 0..n {
        if d[(i, i)] != 0.0 {
            return Err(MetricError::NonZeroDiagonal(i));
        }
        for j in (i + 1)..n {
            if d[(i, j)] != d[(j, i)] {
                return Err(MetricError::Asymmetric(i, j));
            }
            if d[(i, j)] <= 0.0 {
                return Err(MetricError::ZeroDistance(i, j));
            }
        }
    }
    for i in 0..n {
        for k in (i + 1)..n {
            for j in 0..n {
                if j != i && j != k && d[(i, k)] > d[(i, j)] + d[(j, k)] + METRIC_TOL {
                    return Err(MetricError::TriangleViolation(i, j, k));
                }
            }
        }
    }
    Ok(())
}

impl FiniteMetricSpace {
    /// Validates and builds a space from a [`Matrix`].
    pub fn from_matrix(dist: Matrix) -> Result<Self, MetricError> {
        if !dist.is_square() {
            return Err(MetricError::NotSquare {
                rows: dist.rows(),
                row: 0,
                len: dist.cols(),
            });
        }
        check_axioms(&dist)?;
        let n = dist.rows();
        Ok(Self {
            labels: (0..n).map(|i| i.to_string()).collect(),
            dist,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, MetricError> {
        if labels.len() != self.len() {
            return Err(MetricError::LabelCount {
                labels: labels.len(),
                points: self.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &Matrix {
        &self.dist
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[(i, j)]
    }

    pub fn diameter(&self) -> f64 {
        self.dist.max_abs()
    }

    /// Unordered pairs `i < j` with `d(i,j) ≥ r` (up to 1e-12 rounding).
    pub fn far_pairs(&self, r: f64) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if is_far(self.d(i, j), r) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Restriction to the given points, in the given order.
    pub fn subspace(&self, points: &[usize]) -> FiniteMetricSpace {
        let dist = Matrix::from_fn(points.len(), points.len(), |a, b| {
            self.dist[(points[a], points[b])]
        });
        FiniteMetricSpace {
            labels: points.iter().map(|&p| self.labels[p].clone()).collect(),
            dist,
        }
    }

    /// Multiplies every distance by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> FiniteMetricSpace {
        assert!(factor > 0.0 && factor.is_finite());
        FiniteMetricSpace {
            labels: self.labels.clone(),
            dist: self.dist.scale(factor),
        }
    }
}

/// Far-pair predicate shared by the solvers and certificates: a pair at
/// distance `d` counts as separated at scale `r` when `d > r - 1e-12`.
pub fn is_far(d: f64, r: f64) -> bool {
    d > r - 1e-12
}

/// Shortest-path metric of an unweighted graph given by adjacency lists.
/// Returns `None` for disconnected graphs.
pub fn graph_distances(adjacency: &[Vec<usize>]) -> Option<Vec<Vec<f64>>> {
    let n = adjacency.len();
    let mut out = vec![vec![0.0; n]; n];
    let mut dist = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for src in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for (t, &d) in dist.iter().enumerate() {
            if d == usize::MAX {
                return None;
            }
            out[src][t] = d as f64;
        }
    }
    Some(out)
}
