use std::f64::consts::PI;

use num_complex::Complex64;

use super::grid::BoundaryGrid;
use crate::error::{Error, Result};

/// `(1 - |z|²)/|t - z|²`.
pub fn poisson_kernel(z: Complex64, t: Complex64) -> f64 {
    (1.0 - z.norm_sqr()) / (t - z).norm_sqr()
}

/// Herglotz kernel `(t + z)/(t - z)`; its real part is the Poisson kernel.
pub fn herglotz_kernel(z: Complex64, t: Complex64) -> Complex64 {
    (t + z) / (t - z)
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `∫ f dL` over the circle: the weighted sum of the samples in index
/// order (the arithmetic mean on a uniform grid).
pub fn integrate_boundary(samples: &[Complex64], grid: &BoundaryGrid) -> Result<Complex64> {
    if samples.len() != grid.len() {
        return Err(Error::InvalidParameter(format!(
            "{} samples for a grid of {} points",
            samples.len(),
            grid.len()
        )));
    }
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for (i, (s, w)) in samples.iter().zip(grid.weights()).enumerate() {
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::Integration { index: i });
        }
        re.add(w * s.re);
        im.add(w * s.im);
    }
    Ok(Complex64::new(re.value(), im.value()))
}

pub fn integrate_real(samples: &[f64], grid: &BoundaryGrid) -> Result<f64> {
    if samples.len() != grid.len() {
        return Err(Error::InvalidParameter(format!(
            "{} samples for a grid of {} points",
            samples.len(),
            grid.len()
        )));
    }
    let mut acc = CompensatedSum::default();
    for (i, (s, w)) in samples.iter().zip(grid.weights()).enumerate() {
        if !s.is_finite() {
            return Err(Error::Integration { index: i });
        }
        acc.add(w * s);
    }
    Ok(acc.value())
}

/// Samples `f` at the grid nodes and integrates.
pub fn integrate_fn<F>(f: F, grid: &BoundaryGrid) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let samples: Vec<Complex64> = grid.points().iter().map(|&t| f(t)).collect::<Result<_>>()?;
    integrate_boundary(&samples, grid)
}

/// Closest approach to the circle allowed for interior Herglotz evaluation.
pub const BOUNDARY_MARGIN: f64 = 1e-6;

/// The outer function with boundary log-modulus `logmod`:
/// `exp(∫ (t + z)/(t - z) logmod(t) dL(t))`, positive at `z = 0`.
pub fn outer_from_modulus(logmod: &[f64], grid: &BoundaryGrid, z: Complex64) -> Result<Complex64> {
    if z.norm() > 1.0 - BOUNDARY_MARGIN {
        return Err(Error::BoundaryProximity { point: z });
    }
    if logmod.len() != grid.len() {
        return Err(Error::InvalidParameter(format!(
            "{} samples for a grid of {} points",
            logmod.len(),
            grid.len()
        )));
    }
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for (i, ((&t, &w), &phi)) in grid
        .points()
        .iter()
        .zip(grid.weights())
        .zip(logmod)
        .enumerate()
    {
        if !phi.is_finite() {
            return Err(Error::Integration { index: i });
        }
        let k = herglotz_kernel(z, t) * (w * phi);
        re.add(k.re);
        im.add(k.im);
    }
    Ok(Complex64::new(re.value(), im.value()).exp())
}

/// Poisson integral `∫ φ(t) P(z, t) dL(t)` evaluated on points pushed
/// forward by `s -> (s + z)/(1 + conj(z) s)`, which carries the uniform
/// measure to the harmonic measure at `z`.
///
/// The pulled-back integrand varies on the scale `1 - |z|` near `-z/|z|`,
/// so at least `24/(1 - |z|)` points (rounded up to a power of two) are
/// used whatever `m` is.
pub fn poisson_extension<F>(phi: F, z: Complex64, m: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    if !(z.norm() < 1.0 - 1e-12) {
        return Err(Error::BoundaryProximity { point: z });
    }
    let resolved = ((24.0 / (1.0 - z.norm())).ceil() as usize).next_power_of_two();
    let m = m.max(resolved);
    let mut acc = CompensatedSum::default();
    let step = 2.0 * PI / m as f64;
    for j in 0..m {
        let s = Complex64::from_polar(1.0, step * (j as f64 + 0.5));
        let t = (s + z) / (1.0 + z.conj() * s);
        let v = phi(t / t.norm())?;
        if !v.is_finite() {
            return Err(Error::Integration { index: j });
        }
        acc.add(v);
    }
    Ok(acc.value() / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn poisson_kernel_values() {
        assert!((poisson_kernel(c(0.0, 0.0), c(0.6, 0.8)) - 1.0).abs() < 1e-15);
        assert!((poisson_kernel(c(0.5, 0.0), c(1.0, 0.0)) - 3.0).abs() < 1e-15);
        let grid = BoundaryGrid::uniform(1024).unwrap();
        let z = c(0.3, 0.2);
        let mean = integrate_fn(|t| Ok(c(poisson_kernel(z, t), 0.0)), &grid).unwrap();
        assert!((mean - 1.0).norm() < 1e-12);
    }

    #[test]
    fn constant_and_coordinate_integrals() {
        let grid = BoundaryGrid::uniform(256).unwrap();
        let k = c(2.5, -1.0);
        assert!((integrate_fn(|_| Ok(k), &grid).unwrap() - k).norm() < 1e-14);
        assert!(integrate_fn(Ok, &grid).unwrap().norm() < 1e-15);
    }

    #[test]
    fn poisson_integral_reproduces_harmonic_extension() {
        // The harmonic extension of t^2 is z^2; the brute-force oracle is a
        // much finer grid.
        let coarse = BoundaryGrid::uniform(512).unwrap();
        let fine = BoundaryGrid::uniform(1 << 16).unwrap();
        let z = c(0.4, 0.0);
        let f = |t: Complex64| Ok(poisson_kernel(z, t) * t * t);
        let v = integrate_fn(f, &coarse).unwrap();
        let oracle = integrate_fn(f, &fine).unwrap();
        assert!((v - c(0.16, 0.0)).norm() < 1e-13);
        assert!((v - oracle).norm() < 1e-13);
        let z = c(0.2, 0.3);
        let v = integrate_fn(|t| Ok(poisson_kernel(z, t) * t * t), &coarse).unwrap();
        assert!((v - z * z).norm() < 1e-13);
        let v = integrate_fn(|t| Ok(poisson_kernel(z, t) * (t * t).conj()), &coarse).unwrap();
        assert!((v - (z * z).conj()).norm() < 1e-13);
    }

    #[test]
    fn non_finite_sample_is_reported_with_index() {
        let grid = BoundaryGrid::uniform(8).unwrap();
        let mut s = vec![c(1.0, 0.0); 8];
        s[5] = c(f64::NAN, 0.0);
        assert_eq!(integrate_boundary(&s, &grid), Err(Error::Integration { index: 5 }));
    }

    #[test]
    fn outer_function_examples() {
        let grid = BoundaryGrid::uniform(1024).unwrap();
        let two: Vec<f64> = vec![2f64.ln(); grid.len()];
        let o = outer_from_modulus(&two, &grid, c(0.3, -0.2)).unwrap();
        assert!((o - 2.0).norm() < 1e-12);

        let logmod: Vec<f64> = grid.points().iter().map(|t| (1.0 - t / 2.0).norm().ln()).collect();
        let o = outer_from_modulus(&logmod, &grid, c(0.3, 0.0)).unwrap();
        assert!((o.norm() - 0.85).abs() < 1e-10);
        // 1 - z/2 is itself the normalized outer function here.
        let z = c(-0.2, 0.5);
        let o = outer_from_modulus(&logmod, &grid, z).unwrap();
        assert!((o - (1.0 - z / 2.0)).norm() < 1e-10);

        let o0 = outer_from_modulus(&logmod, &grid, c(0.0, 0.0)).unwrap();
        let mean = integrate_real(&logmod, &grid).unwrap();
        assert!(o0.im.abs() < 1e-15 && (o0.re - mean.exp()).abs() < 1e-15);

        assert!(matches!(
            outer_from_modulus(&logmod, &grid, c(1.0 - 1e-7, 0.0)),
            Err(Error::BoundaryProximity { .. })
        ));
    }

    #[test]
    fn pushed_forward_rule_is_accurate_near_the_circle() {
        let z = Complex64::from_polar(1.0 - 1e-4, 0.8);
        let phi = |t: Complex64| Ok((1.0 - t / 2.0).norm().ln());
        let v = poisson_extension(phi, z, 64).unwrap();
        assert!((v - (1.0 - z / 2.0).norm().ln()).abs() < 1e-12);
    }
}
