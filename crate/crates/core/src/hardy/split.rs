use num_complex::Complex64;

use super::grid::BoundaryGrid;
use super::quadrature::{integrate_real, outer_from_modulus, poisson_extension};
use crate::error::{Error, Result};
use crate::fuchsian::{measure_character, GroupSpec, MeasuredCharacter};
use crate::greens::GreenEvaluator;

/// Log-moduli below this underflow `exp`.
const LOG_UNDERFLOW: f64 = -700.0;

/// `g'_ζ = Δ_ζ · O` with `O` outer (built from the boundary modulus of
/// `g'_ζ`) and `Δ_ζ = g'_ζ / O` inner; the bounded outer factor of the
/// factorization `g' = Δ/ψ` is `ψ = 1/O`.
#[derive(Debug, Clone)]
pub struct InnerOuterSplit {
    green: GreenEvaluator,
    grid: BoundaryGrid,
    log_modulus: Vec<f64>,
    mean_log_modulus: f64,
}

/// `log |g'(t)|` on the circle, read off the orbit-sum formula since `|g| = 1` there.
pub fn boundary_log_modulus(ge: &GreenEvaluator, t: Complex64) -> Result<f64> {
    Ok(ge.boundary_log_derivative(t)?.value.norm().ln())
}

pub fn inner_outer_split(ge: &GreenEvaluator, grid: &BoundaryGrid) -> Result<InnerOuterSplit> {
    let mut log_modulus = Vec::with_capacity(grid.len());
    for (index, &t) in grid.points().iter().enumerate() {
        let value = boundary_log_modulus(ge, t)?;
        if !(value >= LOG_UNDERFLOW) {
            return Err(Error::DegenerateModulus { index, value });
        }
        log_modulus.push(value);
    }
    let mean_log_modulus = integrate_real(&log_modulus, grid)?;
    Ok(InnerOuterSplit {
        green: ge.clone(),
        grid: grid.clone(),
        log_modulus,
        mean_log_modulus,
    })
}

impl InnerOuterSplit {
    pub fn green(&self) -> &GreenEvaluator {
        &self.green
    }

    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    pub fn log_modulus(&self) -> &[f64] {
        &self.log_modulus
    }

    pub fn mean_log_modulus(&self) -> f64 {
        self.mean_log_modulus
    }

    pub fn outer(&self, z: Complex64) -> Result<Complex64> {
        outer_from_modulus(&self.log_modulus, &self.grid, z)
    }

    pub fn psi(&self, z: Complex64) -> Result<Complex64> {
        Ok(1.0 / self.outer(z)?)
    }

    /// `Δ_ζ(z)`; interior evaluation uses `g'` directly.
    pub fn inner(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.green.eval_prime(z) / self.outer(z)?)
    }

    /// `|log |O(0)| - mean log|g'||`, zero by construction up to rounding.
    pub fn origin_defect(&self) -> Result<f64> {
        Ok((self.outer(Complex64::new(0.0, 0.0))?.norm().ln() - self.mean_log_modulus).abs())
    }

    /// `|Δ_ζ(z)|` for `z` close to the circle, from
    /// `log|Δ| = log|g'(z)| - P[log|g'|](z)` with the harmonic-measure rule
    /// on `m` points. Only the modulus is available this way.
    pub fn inner_modulus_near_boundary(&self, z: Complex64, m: usize) -> Result<f64> {
        let p = poisson_extension(|t| boundary_log_modulus(&self.green, t), z, m)?;
        Ok((self.green.eval_prime(z).norm().ln() - p).exp())
    }

    /// Largest `|ψ|` over the given interior points.
    pub fn psi_max(&self, points: &[Complex64]) -> Result<f64> {
        points
            .iter()
            .map(|&z| self.psi(z).map(|v| v.norm()))
            .try_fold(0.0, |acc, v| v.map(|v| f64::max(acc, v)))
    }
}

/// The character `δ_ζ` of the inner factor, measured at `probes`.
pub fn character_delta(
    split: &InnerOuterSplit,
    spec: &GroupSpec,
    probes: &[Complex64],
) -> Result<MeasuredCharacter> {
    measure_character(|z| split.inner(z), spec, probes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::enumerate_orbit;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn trivial_split(zeta: Complex64) -> InnerOuterSplit {
        let spec = GroupSpec::trivial();
        let ge = GreenEvaluator::new(&spec, enumerate_orbit(&spec, zeta, 1e-12, 10).unwrap()).unwrap();
        inner_outer_split(&ge, &BoundaryGrid::uniform(1024).unwrap()).unwrap()
    }

    #[test]
    fn identity_green_function_has_trivial_factors() {
        let split = trivial_split(c(0.0, 0.0));
        for &z in &[c(0.0, 0.0), c(0.3, -0.4), c(-0.7, 0.1)] {
            assert!((split.inner(z).unwrap() - 1.0).norm() < 1e-12);
            assert!((split.psi(z).unwrap() - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn single_blaschke_factor_derivative_is_outer() {
        // g' = -(1 - |ζ|²)(|ζ|/ζ)/(1 - conj(ζ) z)², an outer function times a
        // unimodular constant, so |Δ| must be 1 throughout the disk.
        let zeta = c(0.5, 0.0);
        let split = trivial_split(zeta);
        let reference = split.inner(c(0.0, 0.0)).unwrap();
        assert!((reference.norm() - 1.0).abs() < 1e-8);
        for k in 0..50 {
            let z = Complex64::from_polar(0.9 * (k as f64 / 50.0), 2.4 * k as f64);
            let d = split.inner(z).unwrap();
            assert!((d - reference).norm() < 1e-8, "Δ({z}) = {d}");
        }
        assert!(split.origin_defect().unwrap() < 1e-12);
    }

    #[test]
    fn near_boundary_modulus_for_disk_case() {
        let split = trivial_split(c(0.2, 0.4));
        let z = Complex64::from_polar(1.0 - 1e-4, 2.2);
        let m = split.inner_modulus_near_boundary(z, 4096).unwrap();
        assert!((m - 1.0).abs() < 1e-10);
    }
}
