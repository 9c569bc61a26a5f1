use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::identities::verify_automorphy;
use super::{build_f, AutomorphicF, ResiduePolicy, Setting, TheoremConfig};
use crate::annulus::{annulus_cauchy_oracle, LaurentPoly};
use crate::error::{Error, Result};
use crate::fuchsian::measure_character;
use crate::hardy::{
    character_delta, integrate_boundary, residue_derivative, residue_radius, BoundaryGrid, GridKind,
    ResidueValue,
};

/// Radius of the interior circle on which the boundary simplification is
/// cross-checked.
pub const CONSISTENCY_RADIUS: f64 = 1.0 - 1e-4;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-30)
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridStep {
    pub size: usize,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LhsValue {
    pub value: Complex64,
    /// Estimates at `M/2` and `M`.
    pub history: Vec<GridStep>,
    /// Largest relative mismatch between `f/(Δ gᵏ)` evaluated inside on the
    /// `1 - 1e-4` circle and its boundary simplification.
    pub boundary_consistency: f64,
}

fn integrate_on(f: &AutomorphicF, grid: &BoundaryGrid) -> Result<Complex64> {
    let samples: Vec<Complex64> = grid
        .points()
        .par_iter()
        .map(|&t| f.lhs_integrand(t))
        .collect::<Result<_>>()?;
    integrate_boundary(&samples, grid)
}

/// `∫_𝕋 f/(Δ_ζ gᵏ) P(ζ, t) L(dt)` on the setting's grid.
pub fn lhs_integral(f: &AutomorphicF) -> Result<LhsValue> {
    let setting = f.setting();
    let grid = setting.grid();
    let coarse = BoundaryGrid::for_group(setting.group(), grid.size() / 2)?;
    let history = vec![
        GridStep {
            size: coarse.size(),
            value: integrate_on(f, &coarse)?,
        },
        GridStep {
            size: grid.size(),
            value: integrate_on(f, grid)?,
        },
    ];
    let fixed = setting.group().fixed_points();
    let mut boundary_consistency: f64 = 0.0;
    for j in 0..32 {
        let t = Complex64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.25) / 32.0);
        if fixed.iter().any(|p| (t - p).norm() < 0.05) {
            continue;
        }
        let inside = f.interior_reduced(t * CONSISTENCY_RADIUS)?;
        let on = f.boundary_reduced(t)?;
        boundary_consistency = boundary_consistency.max(rel(inside, on));
    }
    Ok(LhsValue {
        value: history[1].value,
        history,
        boundary_consistency,
    })
}

/// `(1/k!) ((1/g'_ζ) d/dt)ᵏ (f/Δ_ζ) |_{t=ζ}` by residue quadrature.
pub fn rhs_operator(f: &AutomorphicF, policy: &ResiduePolicy) -> Result<ResidueValue> {
    let setting = f.setting();
    let ge = setting.green();
    let radius = match policy.radius {
        Some(r) => r,
        None => {
            let u = setting.uniformizer();
            let lz = setting.lambda_zeta();
            let shifted = |t: Complex64| Ok(u.eval(t)? - lz);
            residue_radius(ge, &[&shifted])?
        }
    };
    residue_derivative(f.order(), |t| f.over_inner(t), ge, setting.zeta(), radius, policy.options())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueSummary {
    pub radius: f64,
    pub points: usize,
    pub doublings: usize,
}

/// Result of one verification case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub q: Option<f64>,
    pub zeta: Complex64,
    pub k: u32,
    pub h: LaurentPoly,
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// `h^{(k)}(Λ(ζ))/k!` from the exact derivative of `h`.
    pub oracle: Complex64,
    /// Differentiated Cauchy integral over the boundary of the annulus.
    pub contour_oracle: Option<Complex64>,
    /// `|lhs - rhs|`.
    pub abs_err: f64,
    /// `|lhs - rhs| / |rhs|`.
    pub rel_err: f64,
    /// `|lhs - oracle| / |oracle|`, or the absolute error when the oracle is 0.
    pub lhs_oracle_rel_err: f64,
    pub rhs_oracle_rel_err: f64,
    /// Largest pairwise difference of lhs, rhs and oracle on the scale of
    /// the oracle; `pass` compares this with `tolerance`.
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Characters of `g`, `Δ` and `f`; absent when the case is too coarse
    /// for them to be measured, with the reason in `character_error`.
    #[serde(default)]
    pub characters: Option<CharacterSummary>,
    #[serde(default)]
    pub character_error: Option<String>,
    pub automorphy_residual: f64,
    pub boundary_consistency: f64,
    pub orbit_size: usize,
    pub orbit_levels: usize,
    /// `Σ (1 - |γ(ζ)|)` over the enumerated orbit.
    pub widom_sum: f64,
    pub tail_tol: f64,
    pub tail_bound: f64,
    pub grid_kind: GridKind,
    pub grid_size: usize,
    pub grid_history: Vec<GridStep>,
    pub residue: ResidueSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterSummary {
    pub mu: Vec<Complex64>,
    pub delta: Vec<Complex64>,
    pub f_character: Vec<Complex64>,
    /// Generator-wise distance between the character of `f` and `μᵏδ`.
    pub residual: f64,
}

fn measure_characters(setting: &Setting, f: &AutomorphicF<'_>, k: u32) -> Result<CharacterSummary> {
    let spec = setting.group();
    let probes = setting.character_probes(8);
    let mu = setting.green().character_mu(spec, &probes)?;
    let delta = character_delta(setting.split(), spec, &probes)?;
    let fc = measure_character(|z| f.eval(z), spec, &probes)?;
    let expected = mu.character.pow(k as i32).mul(&delta.character);
    Ok(CharacterSummary {
        mu: mu.character.values().to_vec(),
        delta: delta.character.values().to_vec(),
        f_character: fc.character.values().to_vec(),
        residual: fc.character.distance(&expected),
    })
}

/// Runs one case: the boundary integral, the derivative operator and the
/// exact value, together with the character bookkeeping of `f`.
pub fn verify_theorem(config: &TheoremConfig) -> Result<VerificationReport> {
    let setting = Setting::from_config(config)?;
    verify_in(&setting, config)
}

pub(crate) fn verify_in(setting: &Setting, config: &TheoremConfig) -> Result<VerificationReport> {
    let k = config.k;
    let f = build_f(&config.h, setting, k);
    let lhs = lhs_integral(&f)?;
    let rhs = rhs_operator(&f, &config.residue)?;
    let lz = setting.lambda_zeta();
    let oracle = config.h.derivative(k).eval(lz)? / factorial(k);
    let contour_oracle = match config.q {
        Some(q) => Some(annulus_cauchy_oracle(&config.h, q, lz, k)?.value),
        None => None,
    };

    let (characters, character_error) = match measure_characters(setting, &f, k) {
        Ok(c) => (Some(c), None),
        Err(e @ (Error::NotAutomorphic { .. } | Error::NotUnimodular { .. })) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let automorphy_residual = verify_automorphy(setting)?;

    // Errors against the oracle are measured on the scale of the oracle,
    // absolutely when it vanishes.
    let scale = if oracle.norm() > 0.0 { oracle.norm() } else { 1.0 };
    let lhs_oracle_rel_err = (lhs.value - oracle).norm() / scale;
    let rhs_oracle_rel_err = (rhs.value - oracle).norm() / scale;
    let rel_err = rel(lhs.value, rhs.value);
    let max_rel_err = ((lhs.value - rhs.value).norm() / scale)
        .max(lhs_oracle_rel_err)
        .max(rhs_oracle_rel_err);
    let orbit = setting.green().orbit();
    Ok(VerificationReport {
        q: config.q,
        zeta: config.zeta,
        k,
        h: config.h.clone(),
        lhs: lhs.value,
        rhs: rhs.value,
        oracle,
        contour_oracle,
        abs_err: (lhs.value - rhs.value).norm(),
        rel_err,
        lhs_oracle_rel_err,
        rhs_oracle_rel_err,
        max_rel_err,
        tolerance: config.tolerance,
        pass: max_rel_err <= config.tolerance,
        characters,
        character_error,
        automorphy_residual,
        boundary_consistency: lhs.boundary_consistency,
        orbit_size: orbit.len(),
        orbit_levels: orbit.levels(),
        widom_sum: orbit.widom_sum(),
        tail_tol: config.tail_tol,
        tail_bound: orbit.tail_bound(),
        grid_kind: setting.grid().kind(),
        grid_size: setting.grid().size(),
        grid_history: lhs.history,
        residue: ResidueSummary {
            radius: rhs.radius,
            points: rhs.points,
            doublings: rhs.history.len() - 1,
        },
    })
}
