use serde::{Deserialize, Serialize};

use super::{FiniteMetricSpace, MetricError};
use crate::linalg::Matrix;
use crate::spectral::FiniteGraph;

/// Name of the cross-block distance rule, recorded in serialized unions.
pub const UNION_RULE: &str = "offset-sum:R_k=k+sum_diam";

/// Optional per-block provenance used by the scans.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BlockMeta {
    /// Injectivity radius of the quotient map, for group-sourced blocks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub injectivity_radius: Option<f64>,
    /// Graph whose shortest-path metric is the block metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<FiniteGraph>,
}

/// Coarse disjoint union of finite blocks.
///
/// Block `k` (0-based) gets separation radius
/// `R_k = (k + 1) + Σ_{j ≤ k} diam(block_j)` and points in distinct blocks
/// `n ≠ m` sit at distance `R_n + R_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBlockSpace", into = "RawBlockSpace")]
pub struct BlockSpace {
    blocks: Vec<FiniteMetricSpace>,
    offsets: Vec<f64>,
    meta: Vec<BlockMeta>,
    starts: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawBlockSpace {
    union_rule: String,
    blocks: Vec<FiniteMetricSpace>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    meta: Vec<BlockMeta>,
}

impl TryFrom<RawBlockSpace> for BlockSpace {
    type Error = String;

    fn try_from(raw: RawBlockSpace) -> Result<Self, String> {
        if raw.union_rule != UNION_RULE {
            return Err(format!(
                "unsupported union_rule {:?} (expected {UNION_RULE:?})",
                raw.union_rule
            ));
        }
        let mut space = coarse_disjoint_union(raw.blocks).map_err(|e| e.to_string())?;
        if !raw.meta.is_empty() {
            space = space.with_meta(raw.meta).map_err(|e| e.to_string())?;
        }
        Ok(space)
    }
}

impl From<BlockSpace> for RawBlockSpace {
    fn from(s: BlockSpace) -> Self {
        let meta = if s.meta.iter().all(|m| *m == BlockMeta::default()) {
            Vec::new()
        } else {
            s.meta
        };
        RawBlockSpace {
            union_rule: UNION_RULE.to_string(),
            blocks: s.blocks,
            meta,
        }
    }
}

/// Builds the coarse disjoint union of `blocks`, in order.
pub fn coarse_disjoint_union(blocks: Vec<FiniteMetricSpace>) -> Result<BlockSpace, MetricError> {
    if blocks.is_empty() || blocks.iter().any(FiniteMetricSpace::is_empty) {
        return Err(MetricError::EmptyInput);
    }
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut diam_sum = 0.0;
    for (k, b) in blocks.iter().enumerate() {
        diam_sum += b.diameter();
        offsets.push((k + 1) as f64 + diam_sum);
    }
    let mut starts = Vec::with_capacity(blocks.len() + 1);
    let mut acc = 0;
    for b in &blocks {
        starts.push(acc);
        acc += b.len();
    }
    starts.push(acc);
    let meta = vec![BlockMeta::default(); blocks.len()];
    Ok(BlockSpace {
        blocks,
        offsets,
        meta,
        starts,
    })
}

impl BlockSpace {
    pub fn with_meta(mut self, meta: Vec<BlockMeta>) -> Result<Self, MetricError> {
        if meta.len() != self.blocks.len() {
            return Err(MetricError::LabelCount {
                labels: meta.len(),
                points: self.blocks.len(),
            });
        }
        self.meta = meta;
        Ok(self)
    }

    pub fn blocks(&self) -> &[FiniteMetricSpace] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &FiniteMetricSpace {
        &self.blocks[k]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Separation radii `R_k`.
    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn meta(&self) -> &[BlockMeta] {
        &self.meta
    }

    pub fn num_points(&self) -> usize {
        *self.starts.last().unwrap_or(&0)
    }

    /// Global index of point `local` in block `block`.
    pub fn global_index(&self, block: usize, local: usize) -> usize {
        self.starts[block] + local
    }

    /// Inverse of [`global_index`](Self::global_index).
    pub fn locate(&self, global: usize) -> (usize, usize) {
        let block = self.starts.partition_point(|&s| s <= global) - 1;
        (block, global - self.starts[block])
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let (ba, la) = self.locate(a);
        let (bb, lb) = self.locate(b);
        if ba == bb {
            self.blocks[ba].d(la, lb)
        } else {
            self.offsets[ba] + self.offsets[bb]
        }
    }

    /// Materializes the full distance matrix as a validated space. Labels are
    /// `"<block>:<label>"`.
    pub fn materialize(&self) -> Result<FiniteMetricSpace, MetricError> {
        let n = self.num_points();
        let dist = Matrix::from_fn(n, n, |i, j| self.distance(i, j));
        let labels = (0..n)
            .map(|g| {
                let (b, l) = self.locate(g);
                format!("{b}:{}", self.blocks[b].labels()[l])
            })
            .collect();
        FiniteMetricSpace::from_matrix(dist)?.with_labels(labels)
    }
}
