use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{CaseSpec, Command, RunConfig, Tolerances};
use crate::annulus::LaurentPoly;
use crate::error::Result;
use crate::fuchsian::measure_character;
use crate::hardy::{character_delta, check_outer, inner_outer_split};
use crate::theorem::{
    build_f, interior_probes, verify_l1_identity, verify_lemma, verify_theorem,
    verify_unfolding, Domain, L1Report, LemmaReport, Setting, UnfoldingReport, VerificationReport,
};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-30)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSumReport {
    pub points: usize,
    pub max_rel_err: f64,
    pub worst_point: Complex64,
    pub orbit_sum: Complex64,
    pub direct: Complex64,
    pub max_positivity_residual: f64,
    pub tail_bound: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerOuterReport {
    pub samples: usize,
    pub max_inner_modulus: f64,
    /// `|Δ·O - g'|/|g'|` with `O` rebuilt on a grid twice as fine.
    pub reconstruction_error: f64,
    /// `max |Δ(z) - Δ(0)|`, reported for the disk only.
    pub constant_deviation: Option<f64>,
    /// `max | |Δ| - 1 |` at 32 points of the `1 - 1e-4` circle away from the
    /// fixed points.
    pub near_boundary_deviation: f64,
    pub psi_max: f64,
    pub mu: Vec<Complex64>,
    pub delta: Vec<Complex64>,
    pub mu_modulus_deviation: f64,
    pub delta_modulus_deviation: f64,
    /// Distance between the measured character of `g·Δ` and `μ·δ`.
    pub multiplicativity_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub base: Complex64,
    /// Mean-value deviation of `Λ'`.
    pub derivative: f64,
    /// Mean-value deviation of `(Λ - Λ(ζ))/g_ζ`.
    pub quotient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CaseDetail {
    Theorem(Box<VerificationReport>),
    Lemma(LemmaReport),
    OrbitSum(OrbitSumReport),
    InnerOuter(InnerOuterReport),
    Assumption(AssumptionReport),
    L1(L1Report),
    Unfolding(UnfoldingReport),
}

/// One row of a report. `lhs`, `rhs`, `oracle` and `rel_err` hold the
/// command's headline comparison (see the README table).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub q: Option<f64>,
    pub zeta: Complex64,
    pub k: Option<u32>,
    pub h: Option<LaurentPoly>,
    pub grid_size: usize,
    pub tail_tol: f64,
    pub lhs: Option<Complex64>,
    pub rhs: Option<Complex64>,
    pub oracle: Option<Complex64>,
    pub rel_err: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
    pub detail: Option<CaseDetail>,
}

impl CaseRecord {
    fn new(case: &CaseSpec, grid_size: usize, tail_tol: f64) -> Self {
        CaseRecord {
            q: case.q,
            zeta: case.zeta,
            k: case.k,
            h: case.h.clone(),
            grid_size,
            tail_tol,
            lhs: None,
            rhs: None,
            oracle: None,
            rel_err: None,
            pass: false,
            error: None,
            detail: None,
        }
    }

    fn fill(mut self, r: Result<(Complex64, Complex64, Complex64, f64, bool, CaseDetail)>) -> Self {
        match r {
            Ok((lhs, rhs, oracle, rel_err, pass, detail)) => {
                self.lhs = Some(lhs);
                self.rhs = Some(rhs);
                self.oracle = Some(oracle);
                self.rel_err = Some(rel_err);
                self.pass = pass;
                self.detail = Some(detail);
            }
            Err(e) => self.error = Some(e.to_string()),
        }
        self
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

type Row = (Complex64, Complex64, Complex64, f64, bool, CaseDetail);

fn theorem_row(r: VerificationReport) -> Row {
    (r.lhs, r.rhs, r.oracle, r.max_rel_err, r.pass, CaseDetail::Theorem(Box::new(r)))
}

fn setting_for(config: &RunConfig, case: &CaseSpec, grid_size: usize, tail_tol: f64) -> Result<Setting> {
    Setting::new(Domain::from_q(case.q)?, case.zeta, grid_size, tail_tol, config.max_orbit)
}

fn h_of(case: &CaseSpec) -> &LaurentPoly {
    case.h.as_ref().expect("function cases carry h")
}

fn k_of(case: &CaseSpec) -> u32 {
    case.k.expect("function cases carry k")
}

fn lemma_row(config: &RunConfig, case: &CaseSpec) -> Result<Row> {
    let s = setting_for(config, case, config.grid_size, config.tail_tol)?;
    let r = verify_lemma(&s, h_of(case), &config.composite, k_of(case), &config.residue)?;
    let err = r.composite_rel_err.max(r.theorem_rel_err);
    Ok((r.composite, r.theorem, r.theorem_exact, err, err <= config.tolerances.lemma, CaseDetail::Lemma(r)))
}

fn orbit_sum_row(config: &RunConfig, case: &CaseSpec) -> Result<Row> {
    let s = setting_for(config, case, config.grid_size, config.tail_tol)?;
    let ge = s.green();
    // Equispaced angles: graded-grid nodes within ~1e-13 of a fixed point
    // cannot resolve `t - p` to better than a few parts in 1e4.
    let n = 100;
    let mut worst = (0.0, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut positivity: f64 = 0.0;
    for j in 0..n {
        let t = Complex64::from_polar(1.0, std::f64::consts::PI * (2 * j + 1) as f64 / n as f64);
        let bld = ge.boundary_log_derivative(t)?;
        let direct = ge.log_derivative_direct(t);
        let e = rel(bld.value, direct);
        positivity = positivity.max(bld.positivity_residual);
        if e >= worst.0 {
            worst = (e, t, bld.value, direct);
        }
    }
    let threshold = config.tolerances.orbit_sum_floor.max(10.0 * ge.tail_bound());
    let r = OrbitSumReport {
        points: n,
        max_rel_err: worst.0,
        worst_point: worst.1,
        orbit_sum: worst.2,
        direct: worst.3,
        max_positivity_residual: positivity,
        tail_bound: ge.tail_bound(),
        threshold,
    };
    Ok((worst.2, worst.3, worst.3, worst.0, worst.0 <= threshold, CaseDetail::OrbitSum(r)))
}

fn inner_outer_row(config: &RunConfig, case: &CaseSpec) -> Result<Row> {
    let t = &config.tolerances;
    let s = setting_for(config, case, config.grid_size, config.tail_tol)?;
    let ge = s.green();
    let split = s.split();
    let spec = s.group();
    let samples = interior_probes(200, 0.95, ge.orbit().entries().iter().map(|e| e.point));
    let fine = inner_outer_split(ge, &s.grid().doubled()?)?;
    let mut max_inner: f64 = 0.0;
    let mut reconstruction: f64 = 0.0;
    for &z in &samples {
        let d = split.inner(z)?;
        max_inner = max_inner.max(d.norm());
        reconstruction = reconstruction.max(rel(d * fine.outer(z)?, ge.eval_prime(z)));
    }
    let constant_deviation = if spec.is_trivial() {
        let d0 = split.inner(Complex64::new(0.0, 0.0))?;
        let mut dev: f64 = 0.0;
        for &z in &samples {
            dev = dev.max((split.inner(z)? - d0).norm());
        }
        Some(dev)
    } else {
        None
    };
    let fixed = spec.fixed_points();
    let mut near: f64 = 0.0;
    for j in 0..32 {
        let w = Complex64::from_polar(1.0, std::f64::consts::PI * (2 * j + 1) as f64 / 32.0);
        if fixed.iter().any(|p| (w - p).norm() < 0.05) {
            continue;
        }
        let m = split.inner_modulus_near_boundary(w * (1.0 - 1e-4), s.grid().size())?;
        near = near.max((m - 1.0).abs());
    }
    let probes = s.character_probes(8);
    let psi_max = split.psi_max(&samples)?;
    let mu = ge.character_mu(spec, &probes)?;
    let delta = character_delta(split, spec, &probes)?;
    let product = measure_character(|z| Ok(ge.eval(z) * split.inner(z)?), spec, &probes)?;
    let multiplicativity = product.character.distance(&mu.character.mul(&delta.character));
    let r = InnerOuterReport {
        samples: samples.len(),
        max_inner_modulus: max_inner,
        reconstruction_error: reconstruction,
        constant_deviation,
        near_boundary_deviation: near,
        psi_max,
        mu: mu.character.values().to_vec(),
        delta: delta.character.values().to_vec(),
        mu_modulus_deviation: mu.modulus_deviation,
        delta_modulus_deviation: delta.modulus_deviation,
        multiplicativity_residual: multiplicativity,
    };
    let pass = max_inner <= 1.0 + t.inner_bound
        && reconstruction <= t.inner_reconstruction
        && constant_deviation.map_or(true, |d| d <= t.inner_constant)
        && near <= t.inner_near_boundary
        && mu.modulus_deviation <= t.character
        && delta.modulus_deviation <= t.character
        && multiplicativity <= t.character;
    Ok((re(max_inner), re(1.0), re(1.0), reconstruction, pass, CaseDetail::InnerOuter(r)))
}

fn assumption_row(config: &RunConfig, case: &CaseSpec) -> Result<Row> {
    let t = &config.tolerances;
    let s = setting_for(config, case, config.grid_size, config.tail_tol)?;
    let u = s.uniformizer();
    let ge = s.green();
    let lz = s.lambda_zeta();
    let base = if case.zeta.norm() > 0.1 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, 0.5)
    };
    let derivative = check_outer(|z| u.derivative(z), s.grid(), base)?;
    // On the circle |g| = 1, so only the numerator contributes there.
    let quotient = check_outer(
        |z| {
            if (z.norm() - 1.0).abs() < 1e-12 {
                Ok(u.eval(z)? - lz)
            } else {
                Ok((u.eval(z)? - lz) / ge.eval(z))
            }
        },
        s.grid(),
        base,
    )?;
    let pass = derivative <= t.assumption_derivative && quotient <= t.assumption_quotient;
    let r = AssumptionReport {
        base,
        derivative,
        quotient,
    };
    Ok((re(derivative), re(quotient), re(0.0), derivative.max(quotient), pass, CaseDetail::Assumption(r)))
}

fn l1_row(config: &RunConfig, case: &CaseSpec) -> Result<Row> {
    let s = setting_for(config, case, config.grid_size, config.tail_tol)?;
    let k = k_of(case);
    let r = verify_l1_identity(&s, h_of(case), k)?;
    let tol = config.tolerances.l1;
    let pass = r.rel_diff <= tol && (k > 0 || r.rel_diff_exponent_one <= tol);
    Ok((
        re(r.disk_side),
        re(r.domain_side),
        re(r.domain_side_exponent_one),
        r.rel_diff,
        pass,
        CaseDetail::L1(r),
    ))
}

fn unfolding_row(config: &RunConfig, case: &CaseSpec) -> Result<Row> {
    let s = setting_for(config, case, config.grid_size, config.tail_tol)?;
    let h = h_of(case);
    let f = build_f(h, &s, k_of(case));
    let r = verify_unfolding(&s, |t| f.boundary_reduced(t), None)?;
    Ok((
        r.unfolded,
        r.folded,
        r.folded_doubled,
        r.residual,
        r.residual <= config.tolerances.unfolding,
        CaseDetail::Unfolding(r),
    ))
}

/// Runs one case of `command` (not `sweep`).
pub fn run_case(config: &RunConfig, command: Command, case: &CaseSpec) -> CaseRecord {
    let record = CaseRecord::new(case, config.grid_size, config.tail_tol);
    let row = match command {
        Command::VerifyTheorem | Command::Sweep => {
            verify_theorem(&config.theorem_config(case)).map(theorem_row)
        }
        Command::VerifyLemma => lemma_row(config, case),
        Command::VerifyOrbitSum => orbit_sum_row(config, case),
        Command::VerifyInnerOuter => inner_outer_row(config, case),
        Command::VerifyAssumption => assumption_row(config, case),
        Command::VerifyL1 => l1_row(config, case),
        Command::VerifyUnfolding => unfolding_row(config, case),
    };
    record.fill(row)
}

/// A theorem case at explicit numerics, used by the sweep.
pub fn run_theorem_at(config: &RunConfig, case: &CaseSpec, grid_size: usize, tail_tol: f64) -> CaseRecord {
    let mut cfg = config.theorem_config(case);
    cfg.grid_size = grid_size;
    cfg.tail_tol = tail_tol;
    CaseRecord::new(case, grid_size, tail_tol).fill(verify_theorem(&cfg).map(theorem_row))
}

/// Sweep points for one base case: grid sizes at the tightest tail
/// tolerance, then tail tolerances at the largest grid.
pub fn sweep_points(config: &RunConfig) -> Vec<(usize, f64)> {
    let tight = *config.sweep.tail_tols.last().expect("validated non-empty");
    let largest = *config.sweep.grid_sizes.last().expect("validated non-empty");
    let mut pts: Vec<(usize, f64)> = config.sweep.grid_sizes.iter().map(|&m| (m, tight)).collect();
    pts.extend(config.sweep.tail_tols.iter().map(|&t| (largest, t)));
    pts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCheck {
    pub q: Option<f64>,
    pub zeta: Complex64,
    pub k: Option<u32>,
    pub h: Option<LaurentPoly>,
    pub axis: String,
    pub rel_errs: Vec<Option<f64>>,
    pub non_increasing: bool,
}

/// Monotonicity of `rel_err` along each axis of each base case.
pub fn sweep_checks(config: &RunConfig, records: &[CaseRecord], tol: &Tolerances) -> Vec<MonotonicityCheck> {
    let n_m = config.sweep.grid_sizes.len();
    let per_case = sweep_points(config).len();
    let mut out = Vec::new();
    for chunk in records.chunks(per_case) {
        for (axis, rows) in [("grid_size", &chunk[..n_m]), ("tail_tol", &chunk[n_m..])] {
            let errs: Vec<Option<f64>> = rows.iter().map(|r| r.rel_err).collect();
            let ok = errs.iter().all(|e| e.is_some())
                && errs
                    .windows(2)
                    .all(|w| w[1].unwrap_or(f64::INFINITY) <= w[0].unwrap_or(0.0) + tol.sweep_noise);
            out.push(MonotonicityCheck {
                q: chunk[0].q,
                zeta: chunk[0].zeta,
                k: chunk[0].k,
                h: chunk[0].h.clone(),
                axis: axis.into(),
                rel_errs: errs,
                non_increasing: ok,
            });
        }
    }
    out
}
