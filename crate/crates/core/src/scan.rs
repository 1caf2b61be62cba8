//! Scans over coarse disjoint unions: separation profiles at infinity,
//! searches for uniform Poincaré certificates, and the multi-scale
//! combiner.
//!
//! Every quantity here is computed over the window catalogue of
//! [`enumerate_windows`], not over all bounded subsets, and reports carry
//! the [`CATALOGUE_LABEL`] to say so.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{max_separation_sdp, poincare_value, CertificateMeasure, EmbedError};
use crate::metric::{enumerate_windows, BlockSpace, ControlPair, FiniteMetricSpace, Window};
use crate::sdp::SolveStatus;

pub const CATALOGUE_LABEL: &str = "catalogue-certified";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScanError {
    #[error("scale list is empty")]
    NoScales,
    #[error("scales must be positive and strictly increasing")]
    UnsortedScales,
    #[error("block {0} has no injectivity radius; use a fixed or table exclusion rule")]
    MissingInjectivityRadius(usize),
    #[error("combine_scales needs at least one map")]
    NoMaps,
    #[error("map {index} has {found} points, expected {expected}")]
    PointCount {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("map {index} violates its hypothesis on pair ({x}, {y}): {reason}")]
    Hypothesis {
        index: usize,
        x: usize,
        y: usize,
        reason: String,
    },
    #[error("cannot parse exclusion rule {0:?}")]
    BadRule(String),
}

/// How the excluded prefix `K_R` depends on the scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExclusionRule {
    /// Exclude the leading blocks whose injectivity radius is `≤ 2R`.
    InjectivityRadius,
    /// Always exclude this many leading blocks.
    Fixed { blocks: usize },
    /// Step function: the entry with the largest scale `≤ R` applies, and
    /// nothing is excluded below the first entry.
    Table { steps: Vec<(f64, usize)> },
}

impl ExclusionRule {
    /// Parses `inj`, `fixed:N`, or `table:R1=N1,R2=N2,…`.
    pub fn parse(text: &str) -> Result<Self, ScanError> {
        let bad = || ScanError::BadRule(text.to_string());
        let text = text.trim();
        if text == "inj" || text == "injectivity-radius" {
            return Ok(Self::InjectivityRadius);
        }
        if let Some(n) = text.strip_prefix("fixed:") {
            return Ok(Self::Fixed {
                blocks: n.trim().parse().map_err(|_| bad())?,
            });
        }
        if let Some(rest) = text.strip_prefix("table:") {
            let mut steps = Vec::new();
            for entry in rest.split(',') {
                let (r, k) = entry.split_once('=').ok_or_else(bad)?;
                steps.push((
                    r.trim().parse().map_err(|_| bad())?,
                    k.trim().parse().map_err(|_| bad())?,
                ));
            }
            if steps.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                return Err(bad());
            }
            return Ok(Self::Table { steps });
        }
        Err(bad())
    }

    /// Number of leading blocks excluded at scale `r`.
    pub fn excluded(&self, space: &BlockSpace, r: f64) -> Result<usize, ScanError> {
        match self {
            Self::Fixed { blocks } => Ok((*blocks).min(space.num_blocks())),
            Self::Table { steps } => Ok(steps
                .iter()
                .take_while(|&&(s, _)| s <= r)
                .last()
                .map_or(0, |&(_, k)| k.min(space.num_blocks()))),
            Self::InjectivityRadius => {
                let mut prefix = 0;
                for (k, meta) in space.meta().iter().enumerate() {
                    let inj = meta
                        .injectivity_radius
                        .ok_or(ScanError::MissingInjectivityRadius(k))?;
                    if inj <= 2.0 * r && prefix == k {
                        prefix = k + 1;
                    }
                }
                Ok(prefix)
            }
        }
    }
}

/// One window's outcome in a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowResult {
    pub window_id: usize,
    pub window: Window,
    /// `None` when the window has no pair at distance `≥ R`.
    pub s_star: Option<f64>,
    pub status: Option<SolveStatus>,
    /// Reason a window with far pairs was not solved.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleEntry {
    #[serde(rename = "R")]
    pub r: f64,
    pub excluded: usize,
    pub windows: Vec<WindowResult>,
    /// Minimum `s_star` over the solved windows; absent when none were.
    pub rho_minus: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanProfile {
    pub label: String,
    pub exclusion_rule: ExclusionRule,
    pub per_scale: Vec<ScaleEntry>,
}

impl ScanProfile {
    pub fn scales(&self) -> Vec<f64> {
        self.per_scale.iter().map(|e| e.r).collect()
    }

    pub fn rho_minus(&self, r: f64) -> Option<f64> {
        self.per_scale
            .iter()
            .find(|e| e.r == r)
            .and_then(|e| e.rho_minus)
    }

    pub fn any_marginal(&self) -> bool {
        self.per_scale.iter().flat_map(|e| &e.windows).any(|w| {
            w.status == Some(SolveStatus::NumericallyMarginal)
        })
    }

    /// Rows `R,block,window,n,s_star`; unsolved windows leave `s_star` empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("R,block,window,n,s_star\n");
        for e in &self.per_scale {
            for w in &e.windows {
                let s = w.s_star.map(|s| format!("{s:.12}")).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    e.r,
                    w.window.block,
                    w.window_id,
                    w.window.len(),
                    s
                ));
            }
        }
        out
    }

    /// `{R: rho_minus}` with absent scales mapped to `null`.
    pub fn summary(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .per_scale
            .iter()
            .map(|e| (e.r.to_string(), serde_json::json!(e.rho_minus)))
            .collect();
        serde_json::Value::Object(map)
    }
}

fn check_scales(scales: &[f64]) -> Result<(), ScanError> {
    if scales.is_empty() {
        return Err(ScanError::NoScales);
    }
    if scales[0] <= 0.0 || scales.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(ScanError::UnsortedScales);
    }
    Ok(())
}

fn solve_window(space: &BlockSpace, window: &Window, r: f64) -> (Option<f64>, Option<SolveStatus>, Option<String>) {
    let metric = window.metric(space);
    match max_separation_sdp(&metric, r) {
        Ok(res) => (Some(res.s_star), Some(res.status), None),
        Err(EmbedError::NoFarPairs(_)) | Err(EmbedError::TooSmall(_)) => (None, None, None),
        Err(e) => (None, None, Some(e.to_string())),
    }
}

/// Optimal separation of every catalogue window at each scale, beyond the
/// excluded prefix chosen by `rule`.
///
/// Windows are solved in parallel; output order is (scale, block, window
/// id) regardless of the thread count.
pub fn ce_at_infinity_profile(
    space: &BlockSpace,
    scales: &[f64],
    rule: &ExclusionRule,
) -> Result<ScanProfile, ScanError> {
    check_scales(scales)?;
    let mut per_scale = Vec::with_capacity(scales.len());
    for &r in scales {
        let excluded = rule.excluded(space, r)?;
        let windows = enumerate_windows(space, r, excluded);
        let results: Vec<WindowResult> = windows
            .into_par_iter()
            .enumerate()
            .map(|(window_id, window)| {
                let (s_star, status, skipped) = solve_window(space, &window, r);
                WindowResult {
                    window_id,
                    window,
                    s_star,
                    status,
                    skipped,
                }
            })
            .collect();
        let rho_minus = results
            .iter()
            .filter_map(|w| w.s_star)
            .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.min(s))));
        per_scale.push(ScaleEntry {
            r,
            excluded,
            windows: results,
            rho_minus,
        });
    }
    Ok(ScanProfile {
        label: CATALOGUE_LABEL.to_string(),
        exclusion_rule: rule.clone(),
        per_scale,
    })
}

/// A certified window for one `(m, K)` slot of a search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoundCertificate {
    pub window: Window,
    pub certificate: CertificateMeasure,
    /// `poincare_value` of the certificate, recomputed independently.
    pub recheck: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSlot {
    pub step: usize,
    pub r_small: f64,
    #[serde(rename = "R")]
    pub r_big: f64,
    pub excluded: usize,
    /// `None` means not found in the catalogue for this slot.
    pub found: Option<FoundCertificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpanderSearch {
    pub label: String,
    pub c_max: f64,
    pub slots: Vec<SearchSlot>,
    /// Largest certified constant across the found slots.
    pub c_star: Option<f64>,
    /// True when every slot was filled.
    pub complete: bool,
}

impl ExpanderSearch {
    /// The filled slots at exclusion depth `excluded`, in schedule order.
    pub fn at_depth(&self, excluded: usize) -> Vec<&SearchSlot> {
        self.slots.iter().filter(|s| s.excluded == excluded).collect()
    }
}

/// For each schedule step `(r_m, R_m)` and each exclusion depth `K` (every
/// proper block prefix), looks for a catalogue window of diameter `≤ r_m`
/// beyond `K` whose optimal certificate at scale `R_m` has constant
/// `≤ c_max`. Each certificate is re-checked with [`poincare_value`]; the
/// larger of the two values is the constant used.
pub fn generalized_expander_search(
    space: &BlockSpace,
    schedule: &[(f64, f64)],
    c_max: f64,
) -> Result<ExpanderSearch, ScanError> {
    check_scales(&schedule.iter().map(|s| s.0).collect::<Vec<_>>())?;
    check_scales(&schedule.iter().map(|s| s.1).collect::<Vec<_>>())?;
    let mut jobs = Vec::new();
    for (step, &(r_small, r_big)) in schedule.iter().enumerate() {
        for excluded in 0..space.num_blocks() {
            jobs.push((step, r_small, r_big, excluded));
        }
    }
    // windows shared between slots are solved once per (scale, window)
    let mut cache: HashMap<(usize, Vec<usize>, u64), Option<FoundCertificate>> = HashMap::new();
    let mut slots = Vec::with_capacity(jobs.len());
    for (step, r_small, r_big, excluded) in jobs {
        let mut found = None;
        for window in enumerate_windows(space, r_small, excluded) {
            let key = (window.block, window.points.clone(), r_big.to_bits());
            let entry = cache
                .entry(key)
                .or_insert_with(|| certify_window(space, &window, r_big));
            if let Some(f) = entry {
                if f.certificate.c <= c_max {
                    found = Some(f.clone());
                    break;
                }
            }
        }
        slots.push(SearchSlot {
            step,
            r_small,
            r_big,
            excluded,
            found,
        });
    }
    let c_star = slots
        .iter()
        .filter_map(|s| s.found.as_ref().map(|f| f.certificate.c))
        .fold(None, |acc: Option<f64>, c| Some(acc.map_or(c, |a| a.max(c))));
    Ok(ExpanderSearch {
        label: CATALOGUE_LABEL.to_string(),
        c_max,
        complete: slots.iter().all(|s| s.found.is_some()),
        slots,
        c_star,
    })
}

fn certify_window(space: &BlockSpace, window: &Window, r: f64) -> Option<FoundCertificate> {
    let metric = window.metric(space);
    let res = max_separation_sdp(&metric, r).ok()?;
    let mut certificate = res.certificate;
    certificate.validate(&metric).ok()?;
    let recheck = poincare_value(&metric, &certificate).ok()?;
    certificate.c = certificate.c.max(recheck);
    Some(FoundCertificate {
        window: window.clone(),
        certificate,
        recheck,
    })
}

/// A found slot that contradicts a claimed coarse embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contradiction {
    pub step: usize,
    pub excluded: usize,
    #[serde(rename = "R")]
    pub r: f64,
    /// `ρ−(R)² / L²`, the lower bound the claim forces on `Σ μ‖f(x)−f(y)‖²`.
    pub forced: f64,
    pub c: f64,
}

/// Checks a claimed control pair against a search result.
///
/// On a window, any map with `‖f(x) − f(y)‖ ≤ ρ+(d(x,y))` is
/// `L`-Lipschitz for `L = max ρ+(d)/d` over the window's distances, and
/// separates far pairs by at least `ρ−(R)`. The certificate then forces
/// `ρ−(R)² ≤ c·L²`; every slot where this fails is returned.
pub fn obstruction_check(
    space: &BlockSpace,
    search: &ExpanderSearch,
    claim: &ControlPair,
) -> Vec<Contradiction> {
    let mut out = Vec::new();
    for slot in &search.slots {
        let Some(found) = &slot.found else { continue };
        let metric = found.window.metric(space);
        let n = metric.len();
        let mut lip: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = metric.d(i, j);
                lip = lip.max(claim.rho_plus.eval(d) / d);
            }
        }
        let lower = claim.rho_minus.eval(slot.r_big);
        let forced = if lip > 0.0 { (lower / lip).powi(2) } else { f64::INFINITY };
        if forced > found.certificate.c * (1.0 + 1e-9) {
            out.push(Contradiction {
                step: slot.step,
                excluded: slot.excluded,
                r: slot.r_big,
                forced,
                c: found.certificate.c,
            });
        }
    }
    out
}

/// A coordinate map at one scale: one row per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleMap {
    #[serde(rename = "R")]
    pub r: f64,
    pub coords: Vec<Vec<f64>>,
}

/// Output of [`combine_scales`]: the block direct sum `⊕ (1/n) f_n` over
/// the maps with `R_n ≤ r`, numbered from 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedMap {
    pub coords: Vec<Vec<f64>>,
    /// Scales `R_n` of the summands that were used.
    pub used: Vec<f64>,
    /// `√(Σ 1/n²)` over the used summands.
    pub upper_factor: f64,
}

impl CombinedMap {
    /// Certified lower control `√#{n : R_n ≤ t}`.
    pub fn rho_minus(&self, t: f64) -> f64 {
        (self.used.iter().filter(|&&r| r <= t).count() as f64).sqrt()
    }

    /// Certified upper control `√(Σ 1/n²)·ρ(t)`.
    pub fn rho_plus(&self, rho_t: f64) -> f64 {
        self.upper_factor * rho_t
    }

    pub fn distance(&self, x: usize, y: usize) -> f64 {
        crate::linalg::norm2(
            &self.coords[x]
                .iter()
                .zip(&self.coords[y])
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        )
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Combines per-scale maps `f_n` on a window into `⊕_{R_n ≤ r} (1/n) f_n`.
///
/// Each map must satisfy `‖f_n(x) − f_n(y)‖ ≤ ρ(d(x,y))` on all pairs and
/// `‖f_n(x) − f_n(y)‖ ≥ n` whenever `d(x,y) ≥ R_n`, checked to `1e-9`.
pub fn combine_scales(
    space: &FiniteMetricSpace,
    maps: &[ScaleMap],
    rho: &dyn Fn(f64) -> f64,
    r: f64,
) -> Result<CombinedMap, ScanError> {
    if maps.is_empty() {
        return Err(ScanError::NoMaps);
    }
    let n = space.len();
    for (index, m) in maps.iter().enumerate() {
        if m.coords.len() != n {
            return Err(ScanError::PointCount {
                index,
                expected: n,
                found: m.coords.len(),
            });
        }
        let k = (index + 1) as f64;
        for x in 0..n {
            for y in (x + 1)..n {
                let d = space.d(x, y);
                let e = euclid(&m.coords[x], &m.coords[y]);
                if e > rho(d) + 1e-9 {
                    return Err(ScanError::Hypothesis {
                        index,
                        x,
                        y,
                        reason: format!("distance {e} exceeds rho({d}) = {}", rho(d)),
                    });
                }
                if d >= m.r && e < k - 1e-9 {
                    return Err(ScanError::Hypothesis {
                        index,
                        x,
                        y,
                        reason: format!("separation {e} below {k}"),
                    });
                }
            }
        }
    }
    let mut coords = vec![Vec::new(); n];
    let mut used = Vec::new();
    let mut sum_sq = 0.0;
    for (index, m) in maps.iter().enumerate() {
        if m.r > r {
            continue;
        }
        let w = 1.0 / (index + 1) as f64;
        for (row, src) in coords.iter_mut().zip(&m.coords) {
            row.extend(src.iter().map(|v| w * v));
        }
        used.push(m.r);
        sum_sq += w * w;
    }
    Ok(CombinedMap {
        coords,
        used,
        upper_factor: sum_sq.sqrt(),
    })
}

/// Pairs of a window where a combined map breaks either certified bound.
pub fn combine_violations(
    space: &FiniteMetricSpace,
    combined: &CombinedMap,
    rho: &dyn Fn(f64) -> f64,
) -> Vec<(usize, usize)> {
    let n = space.len();
    let mut bad = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            let d = space.d(x, y);
            let e = combined.distance(x, y);
            if e < combined.rho_minus(d) - 1e-9 || e > combined.rho_plus(rho(d)) + 1e-9 {
                bad.push((x, y));
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{box_space_build, FiltrationSpec, ParentGroup, Permutation, QuotientGroupSpec};
    use crate::metric::{coarse_disjoint_union, ControlFunction};
    use crate::spectral::FiniteGraph;

    fn z_box(levels: &[usize]) -> BlockSpace {
        let spec = FiltrationSpec {
            parent: ParentGroup::FreeAbelian { rank: 1 },
            stages: levels
                .iter()
                .map(|&n| QuotientGroupSpec::new(n, vec![Permutation::shift(n, 1)]).unwrap())
                .collect(),
        };
        box_space_build(&spec, 1024).unwrap().0
    }

    #[test]
    fn line_box_space_profile() {
        let space = z_box(&[4, 16, 64]);
        let p = ce_at_infinity_profile(&space, &[2.0, 4.0], &ExclusionRule::InjectivityRadius).unwrap();
        assert_eq!(p.per_scale[0].excluded, 1);
        assert_eq!(p.per_scale[1].excluded, 1);
        for e in &p.per_scale {
            assert!((e.rho_minus.unwrap() - e.r).abs() < 1e-6);
            assert!(e.windows.iter().all(|w| w.window.block >= e.excluded));
        }
        assert_eq!(p.label, CATALOGUE_LABEL);
        assert!(p.to_csv().starts_with("R,block,window,n,s_star\n"));
    }

    #[test]
    fn fully_excluded_scale_is_absent() {
        let space = coarse_disjoint_union(vec![FiniteGraph::cycle(4).metric().unwrap()]).unwrap();
        let p = ce_at_infinity_profile(&space, &[2.0], &ExclusionRule::Fixed { blocks: 1 }).unwrap();
        assert!(p.per_scale[0].windows.is_empty());
        assert_eq!(p.per_scale[0].rho_minus, None);
        assert_eq!(p.summary()["2"], serde_json::Value::Null);
    }

    #[test]
    fn complete_graphs_embed_isometrically() {
        let blocks = [4, 8, 16].iter().map(|&n| FiniteGraph::complete(n).metric().unwrap()).collect();
        let space = coarse_disjoint_union(blocks).unwrap();
        let p = ce_at_infinity_profile(&space, &[1.0], &ExclusionRule::Fixed { blocks: 0 }).unwrap();
        assert!((p.per_scale[0].rho_minus.unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn exclusion_rules() {
        let space = z_box(&[4, 16, 64]);
        let inj = ExclusionRule::InjectivityRadius;
        assert_eq!(inj.excluded(&space, 1.0).unwrap(), 0);
        assert_eq!(inj.excluded(&space, 2.0).unwrap(), 1);
        assert_eq!(inj.excluded(&space, 8.0).unwrap(), 2);
        assert_eq!(inj.excluded(&space, 32.0).unwrap(), 3);
        let table = ExclusionRule::parse("table:2=1,8=2").unwrap();
        assert_eq!(table.excluded(&space, 1.0).unwrap(), 0);
        assert_eq!(table.excluded(&space, 4.0).unwrap(), 1);
        assert_eq!(ExclusionRule::parse("fixed:2").unwrap(), ExclusionRule::Fixed { blocks: 2 });
        assert!(ExclusionRule::parse("sometimes").is_err());
        let plain = coarse_disjoint_union(vec![FiniteGraph::cycle(4).metric().unwrap()]).unwrap();
        assert_eq!(inj.excluded(&plain, 1.0), Err(ScanError::MissingInjectivityRadius(0)));
    }

    #[test]
    fn line_box_space_has_no_uniform_constant() {
        let space = z_box(&[4, 16, 64]);
        let search = generalized_expander_search(&space, &[(2.0, 2.0), (4.0, 4.0), (8.0, 8.0)], 5.0).unwrap();
        assert!(!search.complete);
        // s* = R on arcs, so c = R² ≤ 5 only at the first step
        for slot in &search.slots {
            assert_eq!(slot.found.is_some(), slot.step == 0, "{slot:?}");
        }
    }

    #[test]
    fn obstruction_fires_on_overclaim() {
        // C8 at R = 4 has c = 1/sin²(π/8) < 16, so an isometric claim fails
        let space = coarse_disjoint_union(vec![FiniteGraph::cycle(8).metric().unwrap()]).unwrap();
        let search = generalized_expander_search(&space, &[(4.0, 4.0)], 10.0).unwrap();
        assert!(search.complete);
        let iso = ControlPair::new(ControlFunction::linear(1.0), ControlFunction::linear(1.0)).unwrap();
        let hits = obstruction_check(&space, &search, &iso);
        assert_eq!(hits.len(), 1);
        assert!((hits[0].forced - 16.0).abs() < 1e-12);
        let modest = ControlPair::new(ControlFunction::linear(0.5), ControlFunction::linear(1.0)).unwrap();
        assert!(obstruction_check(&space, &search, &modest).is_empty());
        // on the line box space no claim bounded by ρ+ can be contradicted
        let line = z_box(&[4, 16, 64]);
        let s2 = generalized_expander_search(&line, &[(2.0, 2.0)], 5.0).unwrap();
        assert!(obstruction_check(&line, &s2, &iso).is_empty());
    }

    #[test]
    fn combiner_two_scales() {
        let line = crate::metric::validate_metric(&[
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ])
        .unwrap();
        let f1 = ScaleMap { r: 1.0, coords: vec![vec![0.0], vec![1.0], vec![2.0]] };
        let f2 = ScaleMap { r: 2.0, coords: vec![vec![0.0], vec![2.0], vec![4.0]] };
        let rho = |t: f64| 2.0 * t;
        let c = combine_scales(&line, &[f1, f2], &rho, 2.0).unwrap();
        assert!(c.distance(0, 2) >= 2f64.sqrt() - 1e-12);
        assert!(combine_violations(&line, &c, &rho).is_empty());
        assert!((c.upper_factor - 1.25f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn combiner_rejects_bad_hypothesis() {
        let two = crate::metric::validate_metric(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let weak = ScaleMap { r: 1.0, coords: vec![vec![0.0], vec![0.5]] };
        let err = combine_scales(&two, &[weak], &|t| t, 1.0).unwrap_err();
        assert!(matches!(err, ScanError::Hypothesis { index: 0, .. }));
    }
}
