use num_complex::Complex64;

use super::grid::BoundaryGrid;
use super::quadrature::{poisson_kernel, CompensatedSum};
use crate::error::{Error, Result};

/// Mean-value deviation `| log|u(base)| - ∫ log|u(t)| P(base, t) dL(t) |`.
///
/// For an outer function the deviation vanishes; an inner factor `I`
/// contributes `-log|I(base)| > 0`. This is numerical evidence only.
pub fn check_outer<F>(u: F, grid: &BoundaryGrid, base: Complex64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let at_base = u(base)?;
    if !(at_base.norm() > 0.0) {
        return Err(Error::BasePoint { base });
    }
    let mut acc = CompensatedSum::default();
    for (i, (&t, &w)) in grid.points().iter().zip(grid.weights()).enumerate() {
        let v = u(t)?.norm().ln();
        if !v.is_finite() {
            return Err(Error::Integration { index: i });
        }
        acc.add(w * poisson_kernel(base, t) * v);
    }
    Ok((at_base.norm().ln() - acc.value()).abs())
}
