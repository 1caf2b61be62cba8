use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error("control function needs at least one breakpoint")]
    Empty,
    #[error("breakpoints must have strictly increasing, non-negative abscissae")]
    Unsorted,
    #[error("control function must be non-negative and non-decreasing")]
    NotMonotone,
    #[error("rho_minus exceeds rho_plus at t = {0}")]
    Crossing(f64),
}

/// Non-decreasing piecewise-linear function `ℝ₊ → ℝ₊`.
///
/// Constant before the first breakpoint, linear between breakpoints, and
/// extended with the last segment's slope beyond the last one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct ControlFunction {
    points: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for ControlFunction {
    type Error = ControlError;

    fn try_from(points: Vec<(f64, f64)>) -> Result<Self, ControlError> {
        Self::new(points)
    }
}

impl From<ControlFunction> for Vec<(f64, f64)> {
    fn from(f: ControlFunction) -> Self {
        f.points
    }
}

impl ControlFunction {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, ControlError> {
        if points.is_empty() {
            return Err(ControlError::Empty);
        }
        if points[0].0 < 0.0 || points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(ControlError::Unsorted);
        }
        if points[0].1 < 0.0 || points.windows(2).any(|w| w[1].1 < w[0].1) {
            return Err(ControlError::NotMonotone);
        }
        Ok(Self { points })
    }

    /// `t ↦ slope · t`.
    pub fn linear(slope: f64) -> Self {
        Self::new(vec![(0.0, 0.0), (1.0, slope)]).expect("non-negative slope")
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, t: f64) -> f64 {
        let pts = &self.points;
        if t <= pts[0].0 {
            return pts[0].1;
        }
        let idx = pts.partition_point(|p| p.0 <= t);
        let (a, b) = if idx >= pts.len() {
            if pts.len() < 2 {
                return pts[0].1;
            }
            (pts[pts.len() - 2], pts[pts.len() - 1])
        } else {
            (pts[idx - 1], pts[idx])
        };
        a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0)
    }

    /// Slope of the final segment (zero for a single breakpoint).
    pub fn final_slope(&self) -> f64 {
        match self.points.as_slice() {
            [.., a, b] => (b.1 - a.1) / (b.0 - a.0),
            _ => 0.0,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        self.final_slope() > 0.0
    }
}

/// Lower and upper control functions of a coarse embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlPair {
    pub rho_minus: ControlFunction,
    pub rho_plus: ControlFunction,
}

impl ControlPair {
    /// Checks `rho_minus ≤ rho_plus` on every breakpoint of either function
    /// and on a uniform grid out to twice the last breakpoint.
    pub fn new(rho_minus: ControlFunction, rho_plus: ControlFunction) -> Result<Self, ControlError> {
        let last = rho_minus
            .points
            .last()
            .unwrap()
            .0
            .max(rho_plus.points.last().unwrap().0)
            .max(1.0);
        let grid = (0..=256).map(|i| 2.0 * last * i as f64 / 256.0);
        let knots = rho_minus
            .points
            .iter()
            .chain(&rho_plus.points)
            .map(|p| p.0);
        for t in grid.chain(knots) {
            if rho_minus.eval(t) > rho_plus.eval(t) + 1e-12 {
                return Err(ControlError::Crossing(t));
            }
        }
        Ok(Self {
            rho_minus,
            rho_plus,
        })
    }
}
