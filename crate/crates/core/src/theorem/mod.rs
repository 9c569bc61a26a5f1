//! The weighted Cauchy formula on the disk for automorphic functions built
//! from a function `h` on the quotient domain, and the identities used in
//! its derivation.

mod identities;
mod verify;

pub use identities::{
    recover_h_roundtrip, verify_automorphy, verify_l1_identity, verify_lemma, verify_unfolding,
    L1Report, LemmaReport, UnfoldingReport,
};
pub use verify::{
    lhs_integral, rhs_operator, verify_theorem, CharacterSummary, GridStep, LhsValue, ResidueSummary,
    VerificationReport,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::annulus::{AnnulusSpec, DiskIdentity, LaurentPoly, Uniformizer};
use crate::error::{Error, Result};
use crate::fuchsian::{enumerate_orbit, GroupSpec};
use crate::greens::GreenEvaluator;
use crate::hardy::{inner_outer_split, poisson_kernel, BoundaryGrid, InnerOuterSplit, ResidueOptions};

/// Distance to the orbit of `ζ` below which `f` is not evaluated.
pub const REMOVABLE_SINGULARITY_RADIUS: f64 = 1e-8;

/// Largest derivative order accepted.
pub const MAX_ORDER: u32 = 6;

/// The quotient domain and its uniformizer.
#[derive(Debug, Clone)]
pub enum Domain {
    Disk(DiskIdentity),
    Annulus(AnnulusSpec),
}

impl Domain {
    pub fn disk() -> Self {
        Domain::Disk(DiskIdentity::new())
    }

    pub fn annulus(q: f64) -> Result<Self> {
        Ok(Domain::Annulus(AnnulusSpec::new(q)?))
    }

    /// `None` for the disk.
    pub fn from_q(q: Option<f64>) -> Result<Self> {
        match q {
            None => Ok(Self::disk()),
            Some(q) => Self::annulus(q),
        }
    }

    pub fn q(&self) -> Option<f64> {
        match self {
            Domain::Disk(_) => None,
            Domain::Annulus(a) => Some(a.q()),
        }
    }

    pub fn uniformizer(&self) -> &dyn Uniformizer {
        match self {
            Domain::Disk(d) => d,
            Domain::Annulus(a) => a,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        self.uniformizer().group()
    }

    /// Boundary circles `(radius, orientation)` of the domain, positively
    /// oriented with respect to the domain.
    pub fn boundary_circles(&self) -> Vec<(f64, f64)> {
        match self {
            Domain::Disk(_) => vec![(1.0, 1.0)],
            Domain::Annulus(a) => vec![(1.0, 1.0), (a.q(), -1.0)],
        }
    }
}

fn default_grid_size() -> usize {
    4096
}

fn default_tail_tol() -> f64 {
    1e-12
}

fn default_max_orbit() -> usize {
    100_000
}

fn default_tolerance() -> f64 {
    1e-6
}

/// Residue contour settings; `radius = None` selects the automatic policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResiduePolicy {
    pub radius: Option<f64>,
    pub initial_points: usize,
    pub max_points: usize,
    pub tolerance: f64,
}

impl Default for ResiduePolicy {
    fn default() -> Self {
        let o = ResidueOptions::default();
        ResiduePolicy {
            radius: None,
            initial_points: o.initial_points,
            max_points: o.max_points,
            tolerance: o.tolerance,
        }
    }
}

impl ResiduePolicy {
    pub fn options(&self) -> ResidueOptions {
        ResidueOptions {
            initial_points: self.initial_points,
            max_points: self.max_points,
            tolerance: self.tolerance,
        }
    }
}

/// One verification case. `q = None` is the disk itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremConfig {
    #[serde(default)]
    pub q: Option<f64>,
    pub zeta: Complex64,
    pub k: u32,
    pub h: LaurentPoly,
    #[serde(default = "default_grid_size")]
    pub grid_size: usize,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    #[serde(default = "default_max_orbit")]
    pub max_orbit: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub residue: ResiduePolicy,
}

impl TheoremConfig {
    pub fn new(q: Option<f64>, zeta: Complex64, k: u32, h: LaurentPoly) -> Self {
        TheoremConfig {
            q,
            zeta,
            k,
            h,
            grid_size: default_grid_size(),
            tail_tol: default_tail_tol(),
            max_orbit: default_max_orbit(),
            tolerance: default_tolerance(),
            residue: ResiduePolicy::default(),
        }
    }

    /// Every violated parameter bound, empty when the configuration is valid.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if let Some(q) = self.q {
            if !(q > 0.0 && q < 1.0) {
                v.push(format!("q = {q} violates 0 < q < 1"));
            }
        }
        let r = self.zeta.norm();
        if !(r <= 0.9) {
            v.push(format!("|zeta| = {r} violates |zeta| <= 0.9"));
        }
        if self.q.is_some() {
            let d = (self.zeta - 1.0).norm().min((self.zeta + 1.0).norm());
            if !(d >= 0.05) {
                v.push(format!(
                    "zeta = {} lies {d} from a deck fixed point, violating distance >= 0.05",
                    self.zeta
                ));
            }
        }
        if self.k > MAX_ORDER {
            v.push(format!("k = {} violates k <= {MAX_ORDER}", self.k));
        }
        if self.h.terms().is_empty() {
            v.push("h has no non-zero terms".into());
        }
        if self.q.is_none() && self.h.terms().iter().any(|t| t.power < 0) {
            v.push("h has negative powers, which are not analytic on the disk".into());
        }
        if !(self.grid_size >= 16 && self.grid_size <= 1 << 20 && self.grid_size.is_power_of_two()) {
            v.push(format!(
                "grid_size = {} violates power of two in [16, 2^20]",
                self.grid_size
            ));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol <= 1e-2) {
            v.push(format!("tail_tol = {} violates 0 < tail_tol <= 1e-2", self.tail_tol));
        }
        if self.max_orbit == 0 {
            v.push("max_orbit must be positive".into());
        }
        if !(self.tolerance > 0.0) {
            v.push(format!("tolerance = {} violates tolerance > 0", self.tolerance));
        }
        let p = &self.residue;
        if let Some(rad) = p.radius {
            if !(rad > 0.0 && rad < 1.0 - r) {
                v.push(format!("residue radius {rad} violates 0 < radius < 1 - |zeta|"));
            }
        }
        if !(p.initial_points >= 4 && p.initial_points <= p.max_points) {
            v.push(format!(
                "residue points {}..{} violate 4 <= initial_points <= max_points",
                p.initial_points, p.max_points
            ));
        }
        if !(p.tolerance > 0.0) {
            v.push(format!("residue tolerance {} violates tolerance > 0", p.tolerance));
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(v.join("; ")))
        }
    }
}

/// The objects attached to a base point: Green function, boundary grid and
/// inner-outer split of `g'_ζ`.
#[derive(Debug, Clone)]
pub struct Setting {
    domain: Domain,
    zeta: Complex64,
    lambda_zeta: Complex64,
    green: GreenEvaluator,
    grid: BoundaryGrid,
    split: InnerOuterSplit,
}

impl Setting {
    pub fn new(domain: Domain, zeta: Complex64, grid_size: usize, tail_tol: f64, max_orbit: usize) -> Result<Self> {
        let spec = domain.group().clone();
        let orbit = enumerate_orbit(&spec, zeta, tail_tol, max_orbit)?;
        let green = GreenEvaluator::new(&spec, orbit)?;
        let grid = BoundaryGrid::for_group(&spec, grid_size)?;
        let split = inner_outer_split(&green, &grid)?;
        let lambda_zeta = domain.uniformizer().eval(zeta)?;
        Ok(Setting {
            domain,
            zeta,
            lambda_zeta,
            green,
            grid,
            split,
        })
    }

    pub fn from_config(config: &TheoremConfig) -> Result<Self> {
        config.validate()?;
        Self::new(
            Domain::from_q(config.q)?,
            config.zeta,
            config.grid_size,
            config.tail_tol,
            config.max_orbit,
        )
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn group(&self) -> &GroupSpec {
        self.domain.group()
    }

    pub fn uniformizer(&self) -> &dyn Uniformizer {
        self.domain.uniformizer()
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    /// `Λ(ζ)`.
    pub fn lambda_zeta(&self) -> Complex64 {
        self.lambda_zeta
    }

    pub fn green(&self) -> &GreenEvaluator {
        &self.green
    }

    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    pub fn split(&self) -> &InnerOuterSplit {
        &self.split
    }

    /// The same setting on another grid.
    pub fn with_grid(&self, grid: BoundaryGrid) -> Result<Self> {
        let split = inner_outer_split(&self.green, &grid)?;
        Ok(Setting {
            grid,
            split,
            ..self.clone()
        })
    }

    /// Interior probe points away from the orbit of `ζ`.
    pub fn probes(&self, n: usize) -> Vec<Complex64> {
        interior_probes(n, 0.5, self.green.orbit().entries().iter().map(|e| e.point))
    }

    /// Probe points for measuring characters. For a cyclic group they sit
    /// at `|x| = exp(-L/2)` in the axis chart, so `z` and `γz` lie
    /// symmetrically about the axis and both stay away from the fixed
    /// points; otherwise the same as [`Setting::probes`].
    pub fn character_probes(&self, n: usize) -> Vec<Complex64> {
        let Some(chart) = self.group().axis_chart() else {
            return self.probes(n);
        };
        let orbit: Vec<Complex64> = self.green.orbit().entries().iter().map(|e| e.point).collect();
        let radius = (-0.5 * chart.period()).exp();
        let mut out = Vec::with_capacity(n);
        let mut j = 0usize;
        while out.len() < n {
            // Angles in [π/4, 3π/4], refined in later passes if orbit points interfere.
            let pass = j / n;
            let phi = PI * (0.25 + 0.5 * ((j % n) as f64 + 0.5 + 0.37 * pass as f64) / n as f64);
            let z = chart.from_half_plane(Complex64::from_polar(radius, phi));
            if orbit.iter().all(|p| (p - z).norm() > 0.05) || pass > 8 {
                out.push(z);
            }
            j += 1;
        }
        out
    }
}

/// Deterministic well-spread points of the disk `|z| <= radius` (golden-angle
/// spiral), skipping any within 0.05 of `avoid`.
pub fn interior_probes(n: usize, radius: f64, avoid: impl Iterator<Item = Complex64> + Clone) -> Vec<Complex64> {
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut out = Vec::with_capacity(n);
    let mut j = 0usize;
    while out.len() < n {
        let r = radius * ((j as f64 + 0.5) / (n as f64 + 0.5)).sqrt().min(1.0);
        let z = Complex64::from_polar(r, 0.3 + golden * j as f64);
        if avoid.clone().all(|p| (p - z).norm() > 0.05) {
            out.push(z);
        }
        j += 1;
    }
    out
}

/// `f(t) = h(Λ(t)) Λ'(t)/(Λ(t) - Λ(ζ))^{k+1} · g_ζ(t)/g'_ζ(t) · g_ζ(t)ᵏ Δ_ζ(t)`.
#[derive(Clone, Copy)]
pub struct AutomorphicF<'a> {
    h: &'a LaurentPoly,
    setting: &'a Setting,
    k: u32,
}

pub fn build_f<'a>(h: &'a LaurentPoly, setting: &'a Setting, k: u32) -> AutomorphicF<'a> {
    AutomorphicF { h, setting, k }
}

impl<'a> AutomorphicF<'a> {
    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn h(&self) -> &LaurentPoly {
        self.h
    }

    pub fn setting(&self) -> &Setting {
        self.setting
    }

    fn check_regular(&self, z: Complex64) -> Result<()> {
        for e in self.setting.green.orbit().entries() {
            let distance = (z - e.point).norm();
            if distance < REMOVABLE_SINGULARITY_RADIUS {
                return Err(Error::SingularityProximity { point: z, distance });
            }
        }
        Ok(())
    }

    /// `h(Λ) Λ'/(Λ - Λ(ζ))^{k+1}`, the part built from the domain.
    pub fn cauchy_kernel(&self, z: Complex64) -> Result<Complex64> {
        let u = self.setting.uniformizer();
        let lam = u.eval(z)?;
        Ok(self.h.eval(lam)? * u.derivative(z)? / (lam - self.setting.lambda_zeta).powu(self.k + 1))
    }

    /// `f/Δ_ζ` at an interior point; this is the function `h̃` the theorem's
    /// derivative operator acts on.
    pub fn over_inner(&self, z: Complex64) -> Result<Complex64> {
        self.check_regular(z)?;
        let ge = &self.setting.green;
        let g = ge.eval(z);
        Ok(self.cauchy_kernel(z)? * g.powu(self.k + 1) / ge.eval_prime(z))
    }

    /// `f(z)` at an interior point.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_regular(z)?;
        let ge = &self.setting.green;
        let g = ge.eval(z);
        let outer = self.setting.split.outer(z)?;
        Ok(self.cauchy_kernel(z)? * g.powu(self.k + 1) / outer)
    }

    /// `f/(Δ_ζ gᵏ)` on the circle, where `|Δ| = |g| = 1`:
    /// `h(Λ)Λ'/(Λ - Λ(ζ))^{k+1} · (g'/g)^{-1}` with `g'/g` from the orbit sum.
    pub fn boundary_reduced(&self, t: Complex64) -> Result<Complex64> {
        let bld = self.setting.green.boundary_log_derivative(t)?;
        Ok(self.cauchy_kernel(t)? / bld.value)
    }

    /// The theorem's boundary integrand, `f/(Δ gᵏ)` times the Poisson kernel.
    pub fn lhs_integrand(&self, t: Complex64) -> Result<Complex64> {
        Ok(self.boundary_reduced(t)? * poisson_kernel(self.setting.zeta, t))
    }

    /// Interior counterpart of [`Self::boundary_reduced`] through `f`, `Δ`
    /// and `g` evaluated separately.
    pub fn interior_reduced(&self, z: Complex64) -> Result<Complex64> {
        let delta = self.setting.split.inner(z)?;
        Ok(self.eval(z)? / (delta * self.setting.green.eval(z).powu(self.k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn validation_lists_every_violation() {
        let h = LaurentPoly::real(&[(-1, 1.0)]).unwrap();
        let mut cfg = TheoremConfig::new(None, c(0.95, 0.0), 7, h);
        cfg.grid_size = 1000;
        let v = cfg.violations();
        assert_eq!(v.len(), 4, "{v:?}");
        cfg.q = Some(1.5);
        assert!(cfg.violations().iter().any(|m| m.contains("0 < q < 1")));
        let ok = TheoremConfig::new(Some(0.05), c(0.3, 0.0), 2, LaurentPoly::real(&[(2, 1.0)]).unwrap());
        assert!(ok.violations().is_empty());
    }

    #[test]
    fn config_defaults_from_json() {
        let cfg: TheoremConfig = serde_json::from_str(
            r#"{"q": 0.05, "zeta": [0.3, 0.0], "k": 1, "h": [{"power": 1, "coeff": [1.0, 0.0]}]}"#,
        )
        .unwrap();
        assert_eq!(cfg.grid_size, 4096);
        assert_eq!(cfg.tail_tol, 1e-12);
        assert_eq!(cfg.residue, ResiduePolicy::default());
    }

    #[test]
    fn disk_f_modulus_matches_blaschke_quotient() {
        let zeta = c(0.3, 0.2);
        let setting = Setting::new(Domain::disk(), zeta, 1024, 1e-12, 10).unwrap();
        let one = LaurentPoly::real(&[(0, 1.0)]).unwrap();
        let f = build_f(&one, &setting, 0);
        for j in 0..16 {
            let t = Complex64::from_polar(1.0, 0.4 * j as f64 + 0.1);
            let b = (t - zeta) / (1.0 - zeta.conj() * t);
            let bp = (1.0 - zeta.norm_sqr()) / (1.0 - zeta.conj() * t).powu(2);
            let reduced = f.boundary_reduced(t).unwrap();
            // Δ and g are unimodular on the circle, so |f| = |b/b'|/|t - ζ|.
            assert!((reduced.norm() - (b / bp).norm() / (t - zeta).norm()).abs() < 1e-12);
        }
        assert!(matches!(f.eval(zeta), Err(Error::SingularityProximity { .. })));
    }

    #[test]
    fn probes_avoid_orbit() {
        let setting = Setting::new(Domain::annulus(0.05).unwrap(), c(0.3, 0.0), 256, 1e-12, 1000).unwrap();
        let p = setting.probes(20);
        assert_eq!(p.len(), 20);
        for z in p {
            assert!(z.norm() <= 0.5);
            assert!((z - 0.3).norm() > 0.05);
        }
    }
}
