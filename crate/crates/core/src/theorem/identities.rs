use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::verify::rhs_operator;
use super::{build_f, AutomorphicF, ResiduePolicy, Setting};
use crate::annulus::LaurentPoly;
use crate::error::{Error, Result};
use crate::hardy::{integrate_fn, poisson_kernel, residue_derivative, residue_radius, CompensatedSum};

/// Relative error against `b`, absolute when `b` is exactly zero.
fn rel(a: Complex64, b: Complex64) -> f64 {
    let scale = b.norm();
    (a - b).norm() / if scale > 0.0 { scale } else { 1.0 }
}

/// Largest `|A(γz)/A(z) - 1|` for `A = Λ' g_ζ/g'_ζ` over generators and 20
/// interior probes. Zero for the trivial group.
pub fn verify_automorphy(setting: &Setting) -> Result<f64> {
    let u = setting.uniformizer();
    let ge = setting.green();
    let a = |z: Complex64| -> Result<Complex64> { Ok(u.derivative(z)? * ge.eval(z) / ge.eval_prime(z)) };
    let mut worst: f64 = 0.0;
    for g in setting.group().generators() {
        for z in setting.probes(20) {
            let ratio = a(g.apply(z)?)? / a(z)?;
            worst = worst.max((ratio - 1.0).norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnfoldingReport {
    /// `∫_𝕋 G P(ζ, ·) dL` on the setting's grid.
    pub unfolded: Complex64,
    /// `Σ_{|n| <= N} ∫_E G (P(ζ, ·)∘γⁿ) |(γⁿ)'| dL` over a fundamental set `E`.
    pub folded: Complex64,
    /// The folded sum with `2N` terms on each side.
    pub folded_doubled: Complex64,
    pub terms: i64,
    pub residual: f64,
}

fn folded_integral<G>(setting: &Setting, g: &G, terms: i64, nodes: usize) -> Result<Complex64>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    let spec = setting.group();
    let chart = spec
        .axis_chart()
        .ok_or_else(|| Error::InvalidGroup("unfolding needs a cyclic group".into()))?;
    let (anchor, _) = chart.from_line(1.0, 0.0);
    let arcs = crate::fuchsian::fundamental_arcs(spec, anchor)?;
    let period = chart.period();
    let zeta = setting.zeta();
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for arc in &arcs {
        let h = (arc.end_u - arc.start_u) / nodes as f64;
        for j in 0..nodes {
            let u = arc.start_u + (j as f64 + 0.5) * h;
            let (t, _) = chart.from_line(arc.component, u);
            // γⁿ is the shift u -> u + n·period in the chart, so the n-th term
            // P(ζ, γⁿt)|(γⁿ)'(t)| |dt/du| is the Poisson density at u + n·period.
            let mut density = 0.0;
            for n in -terms..=terms {
                let shifted = u + n as f64 * period;
                if shifted.abs() > 700.0 {
                    continue;
                }
                let (s, jac) = chart.from_line(arc.component, shifted);
                density += poisson_kernel(zeta, s) * jac;
            }
            let v = g(t)? * (density * h / (2.0 * PI));
            re.add(v.re);
            im.add(v.im);
        }
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// Compares the Poisson integral of an automorphic `G` over the circle with
/// its folded form over one fundamental set (cyclic groups only). `terms`
/// defaults to the largest power present in the orbit.
pub fn verify_unfolding<G>(setting: &Setting, g: G, terms: Option<i64>) -> Result<UnfoldingReport>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    let zeta = setting.zeta();
    let unfolded = integrate_fn(|t| Ok(g(t)? * poisson_kernel(zeta, t)), setting.grid())?;
    let n = terms.unwrap_or_else(|| {
        setting
            .green()
            .orbit()
            .entries()
            .iter()
            .map(|e| e.word.exponent_sum(0).abs())
            .max()
            .unwrap_or(0)
    });
    let nodes = setting.grid().size() / 2;
    let folded = folded_integral(setting, &g, n, nodes)?;
    let folded_doubled = folded_integral(setting, &g, 2 * n.max(1), nodes)?;
    Ok(UnfoldingReport {
        unfolded,
        folded,
        folded_doubled,
        terms: n,
        residual: rel(folded, unfolded),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L1Report {
    /// `∫_𝕋 |f| P(ζ, ·) dL`.
    pub disk_side: f64,
    /// `(1/2π) ∮_{∂D} |h(s)|/|s - Λ(ζ)|^{k+1} |ds|`.
    pub domain_side: f64,
    /// The same with exponent 1 on `|s - Λ(ζ)|`.
    pub domain_side_exponent_one: f64,
    pub rel_diff: f64,
    pub rel_diff_exponent_one: f64,
}

fn domain_integral(setting: &Setting, h: &LaurentPoly, exponent: i32) -> Result<f64> {
    let lz = setting.lambda_zeta();
    let circle = |radius: f64, n: usize| -> Result<f64> {
        let mut acc = CompensatedSum::default();
        for j in 0..n {
            let s = Complex64::from_polar(radius, 2.0 * PI * (j as f64 + 0.5) / n as f64);
            acc.add(h.eval(s)?.norm() / (s - lz).norm().powi(exponent));
        }
        Ok(radius * acc.value() / n as f64)
    };
    let total = |n: usize| -> Result<f64> {
        let mut sum = 0.0;
        for (radius, _) in setting.domain().boundary_circles() {
            sum += circle(radius, n)?;
        }
        Ok(sum)
    };
    let mut n = 64;
    let mut prev = total(n)?;
    while n < 1 << 20 {
        n *= 2;
        let v = total(n)?;
        if (v - prev).abs() <= 1e-13 * v.abs() {
            return Ok(v);
        }
        prev = v;
    }
    Ok(prev)
}

/// Both sides of the `L¹` identity for `f` built from `h`.
pub fn verify_l1_identity(setting: &Setting, h: &LaurentPoly, k: u32) -> Result<L1Report> {
    let f = build_f(h, setting, k);
    let zeta = setting.zeta();
    let disk_side = integrate_fn(
        |t| Ok(Complex64::new(f.boundary_reduced(t)?.norm() * poisson_kernel(zeta, t), 0.0)),
        setting.grid(),
    )?
    .re;
    let domain_side = domain_integral(setting, h, k as i32 + 1)?;
    let domain_side_exponent_one = domain_integral(setting, h, 1)?;
    Ok(L1Report {
        disk_side,
        domain_side,
        domain_side_exponent_one,
        rel_diff: (disk_side - domain_side).abs() / domain_side,
        rel_diff_exponent_one: (disk_side - domain_side_exponent_one).abs() / domain_side_exponent_one,
    })
}

/// Largest relative deviation between `h(Λ(z))` and its value recovered
/// from `f(z)`, `Δ_ζ(z)` and `g_ζ(z)` at the probes.
pub fn recover_h_roundtrip(f: &AutomorphicF, probes: &[Complex64]) -> Result<f64> {
    let setting = f.setting();
    let u = setting.uniformizer();
    let ge = setting.green();
    let k = f.order();
    let mut worst: f64 = 0.0;
    for &z in probes {
        let lam = u.eval(z)?;
        let g = ge.eval(z);
        let recovered = f.eval(z)? * (lam - setting.lambda_zeta()).powu(k + 1) * ge.eval_prime(z)
            / (u.derivative(z)? * g.powu(k + 1) * setting.split().inner(z)?);
        worst = worst.max(rel(recovered, f.h().eval(lam)?));
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    /// Operator applied to `H(g_ζ(t))`, whose exact value is the
    /// coefficient `H_k`.
    pub composite: Complex64,
    pub composite_exact: Complex64,
    pub composite_rel_err: f64,
    /// Operator applied to `f/Δ_ζ`, whose exact value is `h^{(k)}(Λ(ζ))/k!`.
    pub theorem: Complex64,
    pub theorem_exact: Complex64,
    pub theorem_rel_err: f64,
    pub radius: f64,
}

/// Checks the residue form of the derivative operator on two functions with
/// known Taylor data in powers of `g_ζ`.
pub fn verify_lemma(
    setting: &Setting,
    h: &LaurentPoly,
    composite: &LaurentPoly,
    k: u32,
    policy: &ResiduePolicy,
) -> Result<LemmaReport> {
    if composite.terms().iter().any(|t| t.power < 0) {
        return Err(Error::InvalidParameter(
            "composite test function must be a polynomial".into(),
        ));
    }
    let ge = setting.green();
    let radius = match policy.radius {
        Some(r) => r,
        None => residue_radius(ge, &[])?,
    };
    let comp = residue_derivative(
        k,
        |t| composite.eval(ge.eval(t)),
        ge,
        setting.zeta(),
        radius,
        policy.options(),
    )?;
    let composite_exact = composite.coefficient(k as i32);
    let f = build_f(h, setting, k);
    let th = rhs_operator(&f, policy)?;
    let factorial: f64 = (1..=k).map(|j| j as f64).product();
    let theorem_exact = h.derivative(k).eval(setting.lambda_zeta())? / factorial;
    Ok(LemmaReport {
        composite: comp.value,
        composite_exact,
        composite_rel_err: rel(comp.value, composite_exact),
        theorem: th.value,
        theorem_exact,
        theorem_rel_err: rel(th.value, theorem_exact),
        radius,
    })
}
