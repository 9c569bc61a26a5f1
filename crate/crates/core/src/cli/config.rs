use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::annulus::LaurentPoly;
use crate::theorem::{ResiduePolicy, TheoremConfig};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyTheorem,
    VerifyLemma,
    VerifyOrbitSum,
    VerifyInnerOuter,
    VerifyAssumption,
    VerifyL1,
    VerifyUnfolding,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyTheorem => "verify-theorem",
            Command::VerifyLemma => "verify-lemma",
            Command::VerifyOrbitSum => "verify-orbit-sum",
            Command::VerifyInnerOuter => "verify-inner-outer",
            Command::VerifyAssumption => "verify-assumption",
            Command::VerifyL1 => "verify-l1",
            Command::VerifyUnfolding => "verify-unfolding",
            Command::Sweep => "sweep",
        }
    }

    /// Whether cases range over `h` and `k` as well as `(q, ζ)`.
    pub fn uses_functions(self) -> bool {
        !matches!(
            self,
            Command::VerifyOrbitSum | Command::VerifyInnerOuter | Command::VerifyAssumption
        )
    }
}

/// Tolerances, each defaulting to the documented acceptance level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub theorem: f64,
    pub lemma: f64,
    /// The orbit-sum threshold is `max(orbit_sum_floor, 10 · tail_bound)`.
    pub orbit_sum_floor: f64,
    pub inner_bound: f64,
    pub inner_reconstruction: f64,
    pub inner_constant: f64,
    pub inner_near_boundary: f64,
    pub character: f64,
    pub assumption_derivative: f64,
    pub assumption_quotient: f64,
    pub l1: f64,
    pub unfolding: f64,
    pub sweep_noise: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            theorem: 1e-6,
            lemma: 1e-8,
            orbit_sum_floor: 1e-8,
            inner_bound: 1e-6,
            inner_reconstruction: 1e-7,
            inner_constant: 1e-8,
            inner_near_boundary: 5e-3,
            character: 1e-8,
            assumption_derivative: 1e-6,
            assumption_quotient: 1e-5,
            l1: 1e-6,
            unfolding: 1e-5,
            sweep_noise: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxes {
    pub grid_sizes: Vec<usize>,
    pub tail_tols: Vec<f64>,
}

impl Default for SweepAxes {
    fn default() -> Self {
        SweepAxes {
            grid_sizes: vec![512, 1024, 2048, 4096],
            tail_tols: vec![1e-6, 1e-8, 1e-10, 1e-12],
        }
    }
}

fn default_composite() -> LaurentPoly {
    LaurentPoly::real(&[(0, 1.0), (1, -2.0), (2, 0.5), (3, 3.0), (4, -1.0)]).expect("valid polynomial")
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

/// A run configuration. Cases are the product `q × zeta × h × k` in this
/// order (only `q × zeta` for commands that take no function); `null` in
/// `q` selects the disk itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: String,
    #[serde(default)]
    pub command: Option<Command>,
    pub q: Vec<Option<f64>>,
    pub zeta: Vec<Complex64>,
    #[serde(default)]
    pub k: Vec<u32>,
    #[serde(default)]
    pub h: Vec<LaurentPoly>,
    #[serde(default = "default_grid_size")]
    pub grid_size: usize,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    #[serde(default = "default_max_orbit")]
    pub max_orbit: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub residue: ResiduePolicy,
    /// Polynomial `H` for the composite lemma check, exact value `H_k`.
    #[serde(default = "default_composite")]
    pub composite: LaurentPoly,
    #[serde(default)]
    pub sweep: SweepAxes,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub threads: Option<usize>,
}

/// One case of a run, in expansion order.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseSpec {
    pub q: Option<f64>,
    pub zeta: Complex64,
    pub k: Option<u32>,
    pub h: Option<LaurentPoly>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("config does not parse: {e}"))
    }

    pub fn case_specs(&self, command: Command) -> Vec<CaseSpec> {
        let mut out = Vec::new();
        for &q in &self.q {
            for &zeta in &self.zeta {
                if command.uses_functions() {
                    for h in &self.h {
                        for &k in &self.k {
                            out.push(CaseSpec {
                                q,
                                zeta,
                                k: Some(k),
                                h: Some(h.clone()),
                            });
                        }
                    }
                } else {
                    out.push(CaseSpec {
                        q,
                        zeta,
                        k: None,
                        h: None,
                    });
                }
            }
        }
        out
    }

    /// Theorem configuration for a case, with the run-wide numerics.
    pub fn theorem_config(&self, case: &CaseSpec) -> TheoremConfig {
        let h = case
            .h
            .clone()
            .unwrap_or_else(|| LaurentPoly::real(&[(1, 1.0)]).expect("valid polynomial"));
        let mut cfg = TheoremConfig::new(case.q, case.zeta, case.k.unwrap_or(0), h);
        cfg.grid_size = self.grid_size;
        cfg.tail_tol = self.tail_tol;
        cfg.max_orbit = self.max_orbit;
        cfg.tolerance = self.tolerances.theorem;
        cfg.residue = self.residue;
        cfg
    }

    /// Every violated bound, for `command` as it will be run.
    pub fn violations(&self, command: Command) -> Vec<String> {
        let mut v = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            v.push(format!(
                "schema_version \"{}\" is not supported (expected \"{SCHEMA_VERSION}\")",
                self.schema_version
            ));
        }
        if let Some(c) = self.command {
            if c != command {
                v.push(format!(
                    "config names command {} but {} was requested",
                    c.name(),
                    command.name()
                ));
            }
        }
        if self.q.is_empty() {
            v.push("q list is empty".into());
        }
        if self.zeta.is_empty() {
            v.push("zeta list is empty".into());
        }
        if command.uses_functions() {
            if self.h.is_empty() {
                v.push("h list is empty".into());
            }
            if self.k.is_empty() {
                v.push("k list is empty".into());
            }
        }
        if matches!(command, Command::VerifyUnfolding) && self.q.iter().any(|q| q.is_none()) {
            v.push("verify-unfolding needs an annulus (q must not be null)".into());
        }
        if self.composite.terms().iter().any(|t| t.power < 0) {
            v.push("composite must be a polynomial (no negative powers)".into());
        }
        if let Some(0) = self.threads {
            v.push("threads must be a positive integer".into());
        }
        let t = &self.tolerances;
        for (name, value) in [
            ("theorem", t.theorem),
            ("lemma", t.lemma),
            ("orbit_sum_floor", t.orbit_sum_floor),
            ("inner_bound", t.inner_bound),
            ("inner_reconstruction", t.inner_reconstruction),
            ("inner_constant", t.inner_constant),
            ("inner_near_boundary", t.inner_near_boundary),
            ("character", t.character),
            ("assumption_derivative", t.assumption_derivative),
            ("assumption_quotient", t.assumption_quotient),
            ("l1", t.l1),
            ("unfolding", t.unfolding),
            ("sweep_noise", t.sweep_noise),
        ] {
            if !(value > 0.0) {
                v.push(format!("tolerance {name} = {value} violates tolerance > 0"));
            }
        }
        if matches!(command, Command::Sweep) {
            if self.sweep.grid_sizes.is_empty() || self.sweep.tail_tols.is_empty() {
                v.push("sweep axes must be non-empty".into());
            }
            if !self.sweep.grid_sizes.windows(2).all(|w| w[0] < w[1]) {
                v.push("sweep grid_sizes must be increasing".into());
            }
            if !self.sweep.tail_tols.windows(2).all(|w| w[0] > w[1]) {
                v.push("sweep tail_tols must be decreasing".into());
            }
        }
        // The per-case bounds; distinct messages only, in first-seen order.
        let mut probe = self.clone();
        let sizes: Vec<usize> = if matches!(command, Command::Sweep) {
            self.sweep.grid_sizes.clone()
        } else {
            vec![self.grid_size]
        };
        let tails: Vec<f64> = if matches!(command, Command::Sweep) {
            self.sweep.tail_tols.clone()
        } else {
            vec![self.tail_tol]
        };
        for &m in &sizes {
            for &tail in &tails {
                probe.grid_size = m;
                probe.tail_tol = tail;
                for case in self.case_specs(command) {
                    for msg in probe.theorem_config(&case).violations() {
                        if !v.contains(&msg) {
                            v.push(msg);
                        }
                    }
                }
            }
        }
        v
    }
}
