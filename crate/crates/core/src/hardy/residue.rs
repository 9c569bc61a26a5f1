//! The derivative operator `(1/k!) ((1/g') d/dt)^k h̃ |_{t=ζ}` computed as the
//! residue `Res_ζ h̃ g'/g^{k+1}` by trapezoid quadrature on a small circle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::greens::GreenEvaluator;

pub const MIN_RADIUS: f64 = 1e-8;
pub const MAX_RADIUS: f64 = 0.1;

#[derive(Debug, Clone, Copy)]
pub struct ResidueOptions {
    pub initial_points: usize,
    pub max_points: usize,
    /// Successive doublings must agree to `tolerance * max(1, |value|)`.
    pub tolerance: f64,
}

impl Default for ResidueOptions {
    fn default() -> Self {
        ResidueOptions {
            initial_points: 32,
            max_points: 1 << 14,
            tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResidueValue {
    pub value: Complex64,
    pub radius: f64,
    /// Contour points used by the accepted estimate.
    pub points: usize,
    /// Successive estimates, one per doubling.
    pub history: Vec<Complex64>,
}

fn circle_point(center: Complex64, radius: f64, j: usize, n: usize) -> Complex64 {
    center + Complex64::from_polar(radius, 2.0 * PI * j as f64 / n as f64)
}

/// Winding number of `f` around 0 along `|t - center| = radius`.
pub fn winding_number<F>(f: F, center: Complex64, radius: f64) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut n = 128;
    'refine: loop {
        let values: Vec<Complex64> = (0..n)
            .map(|j| f(circle_point(center, radius, j, n)))
            .collect::<Result<_>>()?;
        let mut turn = 0.0;
        for j in 0..n {
            let step = (values[(j + 1) % n] / values[j]).arg();
            if step.abs() > PI / 3.0 {
                if n >= 1 << 14 {
                    return Err(Error::RadiusTooLarge {
                        radius,
                        change: step.abs(),
                    });
                }
                n *= 2;
                continue 'refine;
            }
            turn += step;
        }
        return Ok((turn / (2.0 * PI)).round() as i64);
    }
}

/// Radius for the residue contour: half the distance from `ζ` to the
/// nearest other orbit point (capped at 0.1 and inside the disk), halved
/// until `g` and every function in `simple_zero_at_base` wind once and `g'`
/// does not wind at all.
pub fn residue_radius(
    ge: &GreenEvaluator,
    simple_zero_at_base: &[&dyn Fn(Complex64) -> Result<Complex64>],
) -> Result<f64> {
    let zeta = ge.base();
    let nearest = ge
        .orbit()
        .entries()
        .iter()
        .map(|e| (e.point - zeta).norm())
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min);
    let mut r = MAX_RADIUS.min(0.5 * nearest).min(0.5 * (1.0 - zeta.norm()));
    while r >= MIN_RADIUS {
        let g_ok = winding_number(|t| Ok(ge.eval(t)), zeta, r)? == 1;
        let gp_ok = g_ok && winding_number(|t| Ok(ge.eval_prime(t)), zeta, r)? == 0;
        let mut extra_ok = gp_ok;
        for f in simple_zero_at_base {
            if !extra_ok {
                break;
            }
            extra_ok = winding_number(f, zeta, r)? == 1;
        }
        if extra_ok {
            return Ok(r);
        }
        r *= 0.5;
    }
    Err(Error::RadiusTooSmall { radius: r })
}

/// `(1/2πi) ∮ h̃(t) g'(t)/g(t)^{k+1} dt` over `|t - ζ| = radius`, i.e. the
/// `k`-th operator value divided by `k!`. The contour size is doubled until
/// two successive estimates agree.
pub fn residue_derivative<F>(
    k: u32,
    htilde: F,
    ge: &GreenEvaluator,
    zeta: Complex64,
    radius: f64,
    options: ResidueOptions,
) -> Result<ResidueValue>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if radius < MIN_RADIUS {
        return Err(Error::RadiusTooSmall { radius });
    }
    if (zeta - ge.base()).norm() > 1e-14 {
        return Err(Error::InvalidParameter(format!(
            "contour center {zeta} is not the base point {} of the Green function",
            ge.base()
        )));
    }
    if zeta.norm() + radius >= 1.0 {
        return Err(Error::RadiusTooLarge {
            radius,
            change: f64::INFINITY,
        });
    }
    let estimate = |n: usize| -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let t = circle_point(zeta, radius, j, n);
            let g = ge.eval(t);
            sum += htilde(t)? * ge.eval_prime(t) / g.powu(k + 1) * (t - zeta);
        }
        Ok(sum / n as f64)
    };
    let mut n = options.initial_points.max(4);
    let mut history = vec![estimate(n)?];
    let mut change = f64::INFINITY;
    while 2 * n <= options.max_points {
        n *= 2;
        let v = estimate(n)?;
        let prev = *history.last().expect("history is non-empty");
        history.push(v);
        change = (v - prev).norm();
        if change <= options.tolerance * v.norm().max(1.0) {
            return Ok(ResidueValue {
                value: v,
                radius,
                points: n,
                history,
            });
        }
    }
    Err(Error::RadiusTooLarge { radius, change })
}
