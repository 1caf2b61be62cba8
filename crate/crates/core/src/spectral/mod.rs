//! Graph Laplacians, spectral gaps and the expander-at-infinity scan.

mod graph;
mod regular;

pub use graph::FiniteGraph;
pub use regular::cubic_graph;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{symmetric_eigen, Matrix};
use crate::metric::{enumerate_windows, BlockSpace, Window};

/// Largest graph handed to the dense eigensolver.
pub const MAX_DENSE_VERTICES: usize = 512;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("graph is disconnected (lambda1 would be 0)")]
    Disconnected,
    #[error("graph needs at least two vertices for a spectral gap")]
    TooSmall,
    #[error("graph has {0} vertices; the dense eigensolver is capped at {MAX_DENSE_VERTICES}")]
    TooLarge(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge list line {line}: cannot parse {content:?}")]
    Parse { line: usize, content: String },
    #[error("block {0} has no graph attached")]
    MissingGraph(usize),
    #[error("block {0}: graph metric differs from block metric")]
    GraphMetricMismatch(usize),
}

/// Spectral summary of one connected graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub lambda1: f64,
    pub k0: usize,
    pub n: usize,
    pub diam: usize,
}

/// Combinatorial Laplacian `D - A`.
pub fn laplacian(g: &FiniteGraph) -> Matrix {
    let n = g.n();
    let mut l = Matrix::zeros(n, n);
    for &(u, v) in g.edges() {
        l[(u, v)] -= 1.0;
        l[(v, u)] -= 1.0;
        l[(u, u)] += 1.0;
        l[(v, v)] += 1.0;
    }
    l
}

/// First non-zero Laplacian eigenvalue of a connected graph.
pub fn lambda1(g: &FiniteGraph) -> Result<f64, SpectralError> {
    Ok(spectrum(g)?[1])
}

/// Full Laplacian spectrum (ascending) of a connected graph with ≥ 2 vertices.
pub fn spectrum(g: &FiniteGraph) -> Result<Vec<f64>, SpectralError> {
    if g.n() < 2 {
        return Err(SpectralError::TooSmall);
    }
    if g.n() > MAX_DENSE_VERTICES {
        return Err(SpectralError::TooLarge(g.n()));
    }
    if !g.is_connected() {
        return Err(SpectralError::Disconnected);
    }
    Ok(symmetric_eigen(&laplacian(g)).values)
}

pub fn spectral_report(g: &FiniteGraph) -> Result<SpectralReport, SpectralError> {
    let lambda1 = lambda1(g)?;
    Ok(SpectralReport {
        lambda1,
        k0: g.k0(),
        n: g.n(),
        diam: g.diameter().ok_or(SpectralError::Disconnected)?,
    })
}

/// One candidate subgraph examined by [`expander_window_scan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpanderCandidate {
    /// Position in the schedule.
    pub step: usize,
    /// Position in the window catalogue of that step.
    pub window_id: usize,
    pub window: Window,
    /// `None` when the induced subgraph is disconnected or a single vertex.
    pub report: Option<SpectralReport>,
    pub hit: bool,
}

/// Checks that every block carries a graph whose metric is the block metric.
pub fn check_block_graphs(space: &BlockSpace) -> Result<(), SpectralError> {
    for (k, meta) in space.meta().iter().enumerate() {
        let g = meta.graph.as_ref().ok_or(SpectralError::MissingGraph(k))?;
        let m = g.metric().map_err(|_| SpectralError::GraphMetricMismatch(k))?;
        if m.matrix() != space.block(k).matrix() {
            return Err(SpectralError::GraphMetricMismatch(k));
        }
    }
    Ok(())
}

/// Searches, for each `(N, r)` in `schedule`, the balls and whole blocks of
/// index `≥ N` with diameter `≤ r` for connected induced subgraphs with
/// `λ1 ≥ c`.
///
/// Every examined candidate is returned with its `hit` flag, ordered by
/// (step, window id); a miss means "not found in the catalogue".
pub fn expander_window_scan(
    space: &BlockSpace,
    c: f64,
    schedule: &[(usize, f64)],
) -> Result<Vec<ExpanderCandidate>, SpectralError> {
    check_block_graphs(space)?;
    let mut jobs = Vec::new();
    for (step, &(first_block, r)) in schedule.iter().enumerate() {
        for (window_id, w) in enumerate_windows(space, r, first_block).into_iter().enumerate() {
            jobs.push((step, window_id, w));
        }
    }
    let out = jobs
        .into_par_iter()
        .map(|(step, window_id, window)| {
            let g = space.meta()[window.block]
                .graph
                .as_ref()
                .expect("checked above")
                .induced(&window.points);
            let report = spectral_report(&g).ok();
            let hit = report.is_some_and(|r| r.lambda1 >= c);
            ExpanderCandidate {
                step,
                window_id,
                window,
                report,
                hit,
            }
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{coarse_disjoint_union, BlockMeta};
    use std::f64::consts::PI;

    fn graph_union(graphs: Vec<FiniteGraph>) -> BlockSpace {
        let blocks = graphs.iter().map(|g| g.metric().unwrap()).collect();
        let meta = graphs
            .into_iter()
            .map(|g| BlockMeta {
                graph: Some(g),
                ..Default::default()
            })
            .collect();
        coarse_disjoint_union(blocks).unwrap().with_meta(meta).unwrap()
    }

    #[test]
    fn laplacian_examples() {
        let edge = FiniteGraph::path(2);
        assert_eq!(laplacian(&edge).to_rows(), vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
        let c4 = laplacian(&FiniteGraph::cycle(4));
        assert_eq!(
            c4.to_rows(),
            vec![
                vec![2.0, -1.0, 0.0, -1.0],
                vec![-1.0, 2.0, -1.0, 0.0],
                vec![0.0, -1.0, 2.0, -1.0],
                vec![-1.0, 0.0, -1.0, 2.0],
            ]
        );
        let k4 = laplacian(&FiniteGraph::complete(4));
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(k4[(i, j)], if i == j { 3.0 } else { -1.0 });
            }
        }
    }

    #[test]
    fn lambda1_closed_forms() {
        assert!((lambda1(&FiniteGraph::path(2)).unwrap() - 2.0).abs() < 1e-12);
        assert!((lambda1(&FiniteGraph::cycle(4)).unwrap() - 2.0).abs() < 1e-12);
        let c7 = 2.0 - 2.0 * (2.0 * PI / 7.0).cos();
        assert!((lambda1(&FiniteGraph::cycle(7)).unwrap() - c7).abs() < 1e-12);
        assert!((lambda1(&FiniteGraph::complete(4)).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn lambda1_errors() {
        let g = FiniteGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(lambda1(&g).unwrap_err(), SpectralError::Disconnected);
        assert_eq!(
            lambda1(&FiniteGraph::new(1, []).unwrap()).unwrap_err(),
            SpectralError::TooSmall
        );
    }

    #[test]
    fn complete_graphs_are_hits() {
        let space = graph_union(vec![
            FiniteGraph::complete(2),
            FiniteGraph::complete(4),
            FiniteGraph::complete(8),
        ]);
        let found = expander_window_scan(&space, 1.0, &[(0, 1.0)]).unwrap();
        // every ball of radius 1 in K_n is the whole block, so one window per block
        assert_eq!(found.len(), 3);
        for (cand, n) in found.iter().zip([2, 4, 8]) {
            assert!(cand.hit);
            let r = cand.report.unwrap();
            assert_eq!(r.n, n);
            assert!((r.lambda1 - n as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn growing_cycles_stop_hitting() {
        let cycles: Vec<FiniteGraph> = [4, 8, 16, 32].into_iter().map(FiniteGraph::cycle).collect();
        let space = graph_union(cycles);
        let found = expander_window_scan(&space, 1.0, &[(0, 64.0)]).unwrap();
        let hits: Vec<usize> = found
            .iter()
            .filter(|c| c.hit)
            .map(|c| c.report.unwrap().n)
            .collect();
        // 2 - 2cos(2π/n) ≥ 1 only for n ≤ 6; arcs are paths with gap 2 - 2cos(π/n)
        assert!(hits.iter().all(|&n| n <= 6), "{hits:?}");
        assert!(found.iter().any(|c| c.report.map_or(false, |r| r.n == 32) && !c.hit));
    }

    #[test]
    fn empty_schedule() {
        let space = graph_union(vec![FiniteGraph::complete(3)]);
        assert!(expander_window_scan(&space, 1.0, &[]).unwrap().is_empty());
    }

    #[test]
    fn scan_requires_graphs() {
        let space = coarse_disjoint_union(vec![FiniteGraph::complete(3).metric().unwrap()]).unwrap();
        assert_eq!(
            expander_window_scan(&space, 1.0, &[(0, 1.0)]).unwrap_err(),
            SpectralError::MissingGraph(0)
        );
    }
}
