use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{BlockSpace, FiniteMetricSpace, METRIC_TOL};

/// A bounded subset of one block, lying outside the excluded prefix.
///
/// `excluded` is the number of leading blocks that make up the excluded
/// bounded set; the window's block index is always `>= excluded`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub block: usize,
    /// Ball center (block-local), or `None` for a whole-block window.
    pub center: Option<usize>,
    /// Sorted block-local point indices.
    pub points: Vec<usize>,
    pub radius_bound: f64,
    pub excluded: usize,
    /// Diameter computed from the block's distance matrix.
    pub diameter: f64,
}

impl Window {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The window as a standalone metric space.
    pub fn metric(&self, space: &BlockSpace) -> FiniteMetricSpace {
        space.block(self.block).subspace(&self.points)
    }

    pub fn global_points(&self, space: &BlockSpace) -> Vec<usize> {
        self.points
            .iter()
            .map(|&p| space.global_index(self.block, p))
            .collect()
    }

    /// Checks `diam ≤ R` against the matrix and that the block is not excluded.
    pub fn is_valid_in(&self, space: &BlockSpace) -> bool {
        let block = space.block(self.block);
        let mut diam: f64 = 0.0;
        for &a in &self.points {
            for &b in &self.points {
                diam = diam.max(block.d(a, b));
            }
        }
        self.block >= self.excluded && diam <= self.radius_bound + METRIC_TOL
    }
}

fn ball(block: &FiniteMetricSpace, center: usize, radius: f64) -> Vec<usize> {
    (0..block.len())
        .filter(|&p| block.d(center, p) <= radius + METRIC_TOL)
        .collect()
}

fn diameter_of(block: &FiniteMetricSpace, pts: &[usize]) -> f64 {
    let mut diam: f64 = 0.0;
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            diam = diam.max(block.d(a, b));
        }
    }
    diam
}

/// Window catalogue at scale `r`: metric balls in every block with index
/// `>= excluded`, plus each whole block whose diameter is at most `r`.
///
/// Each center contributes the ball of radius `⌈r/2⌉` when that ball has
/// diameter `≤ r`, and otherwise the ball of radius `r/2`. Windows are
/// deduplicated by point set, keeping the first in (block, center) order.
pub fn enumerate_windows(space: &BlockSpace, r: f64, excluded: usize) -> Vec<Window> {
    assert!(r > 0.0, "window scale must be positive");
    let mut out = Vec::new();
    let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
    for k in excluded..space.num_blocks() {
        let block = space.block(k);
        for c in 0..block.len() {
            let mut pts = ball(block, c, (r / 2.0).ceil());
            let mut diam = diameter_of(block, &pts);
            if diam > r + METRIC_TOL {
                pts = ball(block, c, r / 2.0);
                diam = diameter_of(block, &pts);
            }
            if seen.insert((k, pts.clone())) {
                out.push(Window {
                    block: k,
                    center: Some(c),
                    points: pts,
                    radius_bound: r,
                    excluded,
                    diameter: diam,
                });
            }
        }
        let diam = block.diameter();
        if diam <= r + METRIC_TOL {
            let pts: Vec<usize> = (0..block.len()).collect();
            if seen.insert((k, pts.clone())) {
                out.push(Window {
                    block: k,
                    center: None,
                    points: pts,
                    radius_bound: r,
                    excluded,
                    diameter: diam,
                });
            }
        }
    }
    out
}
