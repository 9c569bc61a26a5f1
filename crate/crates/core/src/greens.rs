//! The group Green's function `g_ζ`: the Blaschke product over a truncated
//! orbit of `ζ`.
//!
//! Factors are normalized as `b_w(z) = (|w|/w)(w - z)/(1 - conj(w) z)` and
//! `b_0(z) = z`, so `g_ζ(0) > 0` whenever `0` is not an orbit point. Every
//! identity verified downstream is covariant under this choice.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fuchsian::{measure_character, GroupSpec, MeasuredCharacter, Orbit};
use crate::hardy::poisson_kernel;

/// Default distance from the group's fixed points below which boundary
/// kernels are refused.
pub const FIXED_POINT_EXCLUSION: f64 = 1e-13;

#[derive(Debug, Clone, Copy)]
struct Zero {
    w: Complex64,
    /// `|w| / w`, or 1 for `w = 0`.
    phase: Complex64,
    /// `1 - |w|^2`, carried from the orbit's accurate deficiency.
    one_minus_sq: f64,
    at_origin: bool,
}

impl Zero {
    fn factor(&self, z: Complex64) -> Complex64 {
        if self.at_origin {
            z
        } else {
            self.phase * (self.w - z) / (1.0 - self.w.conj() * z)
        }
    }

    fn factor_derivative(&self, z: Complex64) -> Complex64 {
        if self.at_origin {
            Complex64::new(1.0, 0.0)
        } else {
            let den = 1.0 - self.w.conj() * z;
            -self.phase * self.one_minus_sq / (den * den)
        }
    }

    fn log_derivative(&self, z: Complex64) -> Complex64 {
        if self.at_origin {
            1.0 / z
        } else {
            -self.one_minus_sq / ((self.w - z) * (1.0 - self.w.conj() * z))
        }
    }
}

/// Boundary value of `g'/g` from the orbit-sum formula.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryLogDerivative {
    pub value: Complex64,
    /// `|Im(t v)| / |t v|`; zero in exact arithmetic since `t g'/g > 0` on the circle.
    pub positivity_residual: f64,
}

#[derive(Debug, Clone)]
pub struct GreenEvaluator {
    orbit: Orbit,
    zeros: Vec<Zero>,
    singular_points: Vec<Complex64>,
    exclusion: f64,
}

impl GreenEvaluator {
    pub fn new(spec: &GroupSpec, orbit: Orbit) -> Result<Self> {
        let zeros = orbit
            .entries()
            .iter()
            .map(|e| {
                let r = e.point.norm();
                let at_origin = r == 0.0;
                Zero {
                    w: e.point,
                    phase: if at_origin {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(r, 0.0) / e.point
                    },
                    one_minus_sq: e.deficiency * (1.0 + r),
                    at_origin,
                }
            })
            .collect();
        let ge = GreenEvaluator {
            orbit,
            zeros,
            singular_points: spec.fixed_points(),
            exclusion: FIXED_POINT_EXCLUSION,
        };
        let slope = ge.eval_prime(ge.base()).norm();
        if !(slope > 1e-6) {
            return Err(Error::InvalidParameter(format!(
                "zero of g at the base point is not simple (|g'| = {slope:e})"
            )));
        }
        Ok(ge)
    }

    /// Overrides the fixed-point exclusion radius used by the boundary kernel.
    pub fn with_exclusion(mut self, radius: f64) -> Self {
        self.exclusion = radius;
        self
    }

    pub fn exclusion(&self) -> f64 {
        self.exclusion
    }

    pub fn orbit(&self) -> &Orbit {
        &self.orbit
    }

    pub fn base(&self) -> Complex64 {
        self.orbit.base()
    }

    pub fn tail_bound(&self) -> f64 {
        self.orbit.tail_bound()
    }

    pub fn singular_points(&self) -> &[Complex64] {
        &self.singular_points
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, w| acc * w.factor(z))
    }

    pub fn eval_prime(&self, z: Complex64) -> Complex64 {
        let (nearest, smallest) = self
            .zeros
            .iter()
            .enumerate()
            .map(|(i, w)| (i, w.factor(z).norm()))
            .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        if smallest > 1e-8 {
            return self.eval(z) * self.log_derivative_direct(z);
        }
        // Product rule around the (nearly) vanishing factor.
        let mut rest = Complex64::new(1.0, 0.0);
        let mut rest_log = Complex64::new(0.0, 0.0);
        for (i, w) in self.zeros.iter().enumerate() {
            if i != nearest {
                rest *= w.factor(z);
                rest_log += w.log_derivative(z);
            }
        }
        let w = &self.zeros[nearest];
        rest * (w.factor_derivative(z) + w.factor(z) * rest_log)
    }

    /// `Σ b_w'/b_w`, the logarithmic derivative of the truncated product.
    pub fn log_derivative_direct(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().map(|w| w.log_derivative(z)).sum()
    }

    fn check_boundary_point(&self, t: Complex64) -> Result<()> {
        for &p in &self.singular_points {
            let distance = (t - p).norm();
            if distance < self.exclusion {
                return Err(Error::KernelSingularity { point: t, distance });
            }
        }
        Ok(())
    }

    /// `Σ_γ (1 - |ζ|²)/|γ(t) - ζ|² · γ'(t)/γ(t)` over the words of the orbit.
    pub fn boundary_log_derivative(&self, t: Complex64) -> Result<BoundaryLogDerivative> {
        self.check_boundary_point(t)?;
        let zeta = self.base();
        let mut value = Complex64::new(0.0, 0.0);
        for e in self.orbit.entries() {
            let s = e.map.apply(t)?;
            value += poisson_kernel(zeta, s) * e.map.derivative(t)? / s;
        }
        let tv = t * value;
        Ok(BoundaryLogDerivative {
            value,
            positivity_residual: tv.im.abs() / tv.norm(),
        })
    }

    /// The character `μ_ζ` measured from `g(γ z)/g(z)`.
    pub fn character_mu(&self, spec: &GroupSpec, probes: &[Complex64]) -> Result<MeasuredCharacter> {
        measure_character(|z| Ok(self.eval(z)), spec, probes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::enumerate_orbit;
    use crate::moebius::MoebiusMap;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn trivial(zeta: Complex64) -> GreenEvaluator {
        let spec = GroupSpec::trivial();
        GreenEvaluator::new(&spec, enumerate_orbit(&spec, zeta, 1e-12, 10).unwrap()).unwrap()
    }

    fn cyclic(multiplier: f64, zeta: Complex64) -> (GroupSpec, GreenEvaluator) {
        let spec = GroupSpec::cyclic(MoebiusMap::real_axis_translation(multiplier).unwrap()).unwrap();
        let orbit = enumerate_orbit(&spec, zeta, 1e-12, 1000).unwrap();
        let ge = GreenEvaluator::new(&spec, orbit).unwrap();
        (spec, ge)
    }

    #[test]
    fn trivial_group_values() {
        let ge = trivial(c(0.5, 0.0));
        assert!((ge.eval(c(0.0, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
        assert!(ge.eval(c(0.5, 0.0)).norm() < 1e-15);
        assert!((ge.eval_prime(c(0.5, 0.0)) - c(-4.0 / 3.0, 0.0)).norm() < 1e-14);
        let h = 1e-6;
        let z = c(0.5, 0.0);
        let fd = (ge.eval(z + h) - ge.eval(z - h)) / (2.0 * h);
        assert!((fd - ge.eval_prime(z)).norm() < 1e-7);

        let ge0 = trivial(c(0.0, 0.0));
        assert!((ge0.eval_prime(c(0.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
        let t = Complex64::from_polar(1.0, 0.4);
        let v = ge0.boundary_log_derivative(t).unwrap().value;
        assert!((v - 1.0 / t).norm() < 1e-14);
    }

    #[test]
    fn trivial_group_boundary_kernel() {
        let ge = trivial(c(0.5, 0.0));
        let v = ge.boundary_log_derivative(c(1.0, 0.0)).unwrap().value;
        assert!((v - c(3.0, 0.0)).norm() < 1e-14);
        // b'/b(t) = (1 - |ζ|²)/(t |t - ζ|²) evaluated independently
        let t = c(1.0, 0.0);
        let closed = 0.75 / (t * (t - 0.5).norm_sqr());
        assert!((ge.log_derivative_direct(t) - closed).norm() < 1e-14);
    }

    #[test]
    fn cyclic_green_is_unimodular_on_the_circle() {
        let (_, ge) = cyclic(727.133268311797, c(0.3, 0.0));
        for j in 0..100 {
            let t = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / 100.0);
            assert!((ge.eval(t).norm() - 1.0).abs() < 1e-10);
        }
        assert!(ge.eval(c(0.1, 0.2)).norm() < 1.0);
    }

    #[test]
    fn derivative_agrees_with_finite_differences() {
        let (_, ge) = cyclic(41.5, c(-0.25, 0.35));
        let h = 1e-6;
        for k in 0..20 {
            let z = Complex64::from_polar(0.1 + 0.04 * k as f64, 0.9 * k as f64);
            let fd = (ge.eval(z + h) - ge.eval(z - h)) / (2.0 * h);
            let exact = ge.eval_prime(z);
            assert!((fd - exact).norm() < 1e-7 * exact.norm().max(1.0), "at {z}");
        }
    }

    #[test]
    fn kernel_refuses_fixed_points() {
        let (_, ge) = cyclic(41.5, c(0.3, 0.0));
        assert!(matches!(
            ge.boundary_log_derivative(c(1.0, 0.0)),
            Err(Error::KernelSingularity { .. })
        ));
    }

    #[test]
    fn green_is_character_automorphic() {
        let (spec, ge) = cyclic(41.5, c(0.3, 0.0));
        let probes = [c(0.1, 0.2), c(-0.3, -0.1), c(0.4, -0.35)];
        let mu = ge.character_mu(&spec, &probes).unwrap();
        assert!(mu.spread < 1e-8);
        let g = spec.generators()[0];
        for &z in &probes {
            let lhs = ge.eval(g.apply(z).unwrap());
            assert!((lhs - mu.character.values()[0] * ge.eval(z)).norm() < 1e-8);
        }
    }
}
