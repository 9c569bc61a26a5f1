use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fuchsian::{AxisChart, GroupSpec};
use crate::greens::FIXED_POINT_EXCLUSION;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GridKind {
    /// `t_j = exp(i(2πj/M + offset))`, equal weights `1/M`.
    Uniform { offset: f64 },
    /// On both circle components of an [`AxisChart`], `u = ln|x| =
    /// scale·sinh(s)` with `s` equispaced and `|u| < span`: nodes cluster
    /// geometrically at the two fixed points while staying dense in between.
    Graded { span: f64, scale: f64 },
}

/// Quadrature nodes on the unit circle with weights for the normalized
/// Lebesgue measure.
#[derive(Debug, Clone)]
pub struct BoundaryGrid {
    kind: GridKind,
    size: usize,
    points: Vec<Complex64>,
    weights: Vec<f64>,
    chart: Option<AxisChart>,
    exclusion: f64,
}

/// `u`-scale of the sinh stretching of graded grids.
const GRADED_SCALE: f64 = 2.0;

fn check_size(m: usize) -> Result<()> {
    if m < 4 || !m.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "grid size {m} must be a power of two >= 4"
        )));
    }
    Ok(())
}

impl BoundaryGrid {
    /// Equispaced grid rotated by half a step, so symmetric configurations
    /// never place a node at a root of unity.
    pub fn uniform(m: usize) -> Result<Self> {
        Self::uniform_with_offset(m, PI / m as f64)
    }

    pub fn uniform_with_offset(m: usize, offset: f64) -> Result<Self> {
        check_size(m)?;
        let step = 2.0 * PI / m as f64;
        let points = (0..m)
            .map(|j| Complex64::from_polar(1.0, step * j as f64 + offset))
            .collect();
        Ok(BoundaryGrid {
            kind: GridKind::Uniform { offset },
            size: m,
            points,
            weights: vec![1.0 / m as f64; m],
            chart: None,
            exclusion: 0.0,
        })
    }

    /// Grid graded toward the fixed points of `chart`, `m/2` nodes per circle
    /// component, none closer than `exclusion` to a fixed point.
    pub fn graded(chart: &AxisChart, m: usize, exclusion: f64) -> Result<Self> {
        check_size(m)?;
        if !(exclusion > 0.0 && exclusion < 0.1) {
            return Err(Error::InvalidParameter(format!(
                "exclusion radius {exclusion} out of range"
            )));
        }
        let separation = (chart.attracting() - chart.repelling()).norm();
        let span = (separation / (2.0 * exclusion)).ln();
        let scale = GRADED_SCALE;
        let s_max = (span / scale).asinh();
        let half = m / 2;
        let h = 2.0 * s_max / half as f64;
        let mut points = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for sign in [1.0, -1.0] {
            for j in 0..half {
                let s = -s_max + (j as f64 + 0.5) * h;
                let (t, jac) = chart.from_line(sign, scale * s.sinh());
                points.push(t);
                weights.push(h * scale * s.cosh() * jac / (2.0 * PI));
            }
        }
        let grid = BoundaryGrid {
            kind: GridKind::Graded { span, scale },
            size: m,
            points,
            weights,
            chart: Some(*chart),
            exclusion,
        };
        grid.check_avoids(&[chart.attracting(), chart.repelling()], exclusion)?;
        Ok(grid)
    }

    /// Graded grid for cyclic groups, uniform otherwise.
    pub fn for_group(spec: &GroupSpec, m: usize) -> Result<Self> {
        match spec.axis_chart() {
            Some(chart) => Self::graded(&chart, m, FIXED_POINT_EXCLUSION),
            None => Self::uniform(m),
        }
    }

    /// The same construction with twice the nodes.
    pub fn doubled(&self) -> Result<Self> {
        match (self.kind, &self.chart) {
            (GridKind::Uniform { .. }, _) => Self::uniform(2 * self.size),
            (GridKind::Graded { .. }, Some(chart)) => Self::graded(chart, 2 * self.size, self.exclusion),
            (GridKind::Graded { .. }, None) => unreachable!("graded grid without chart"),
        }
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Requested size `M`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn chart(&self) -> Option<&AxisChart> {
        self.chart.as_ref()
    }

    /// Fails if a node lies within `radius` of one of `singular`.
    pub fn check_avoids(&self, singular: &[Complex64], radius: f64) -> Result<()> {
        for &t in &self.points {
            for &p in singular {
                let distance = (t - p).norm();
                if distance < radius {
                    return Err(Error::KernelSingularity { point: t, distance });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::MoebiusMap;

    #[test]
    fn uniform_grid_is_equispaced_and_offset() {
        let g = BoundaryGrid::uniform(16).unwrap();
        assert_eq!(g.len(), 16);
        let step = g.points()[1] / g.points()[0];
        for w in g.points().windows(2) {
            assert!((w[1] / w[0] - step).norm() < 1e-14);
        }
        assert!(g.check_avoids(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)], 0.1).is_ok());
        assert!(BoundaryGrid::uniform(12).is_err());
    }

    #[test]
    fn graded_grid_respects_exclusion_and_mass() {
        let g = MoebiusMap::real_axis_translation(41.5).unwrap();
        let chart = AxisChart::for_map(&g).unwrap();
        let grid = BoundaryGrid::graded(&chart, 1024, 1e-13).unwrap();
        assert_eq!(grid.len(), 1024);
        let total: f64 = grid.weights().iter().sum();
        // Only the arcs within ~1e-13 of the fixed points are missing.
        assert!((total - 1.0).abs() < 1e-12, "mass {total}");
        assert!(grid.points().iter().all(|t| (t.norm() - 1.0).abs() < 1e-15));
    }
}
