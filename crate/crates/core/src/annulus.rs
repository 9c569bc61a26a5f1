//! The annulus `{q < |s| < 1}` as a quotient of the disk by a cyclic group,
//! Laurent polynomials on it and a contour-integral Cauchy oracle.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::GroupSpec;
use crate::moebius::MoebiusMap;

/// Distance from `±1` below which the uniformizer refuses to evaluate.
pub const SINGULAR_RADIUS: f64 = 1e-15;

/// Annulus boundary distance below which the Cauchy oracle is refused.
pub const CONTOUR_MARGIN: f64 = 1e-6;

/// A covering map of the disk onto a domain together with its deck group.
pub trait Uniformizer: Sync {
    fn eval(&self, z: Complex64) -> Result<Complex64>;
    fn derivative(&self, z: Complex64) -> Result<Complex64>;
    fn group(&self) -> &GroupSpec;
}

/// `Λ = id`, the trivial group.
#[derive(Debug, Clone)]
pub struct DiskIdentity {
    group: GroupSpec,
}

impl DiskIdentity {
    pub fn new() -> Self {
        DiskIdentity {
            group: GroupSpec::trivial(),
        }
    }
}

impl Default for DiskIdentity {
    fn default() -> Self {
        Self::new()
    }
}

impl Uniformizer for DiskIdentity {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(z)
    }

    fn derivative(&self, _z: Complex64) -> Result<Complex64> {
        Ok(Complex64::new(1.0, 0.0))
    }

    fn group(&self) -> &GroupSpec {
        &self.group
    }
}

#[derive(Debug, Clone)]
pub struct AnnulusSpec {
    q: f64,
    multiplier: f64,
    log_multiplier: f64,
    deck: MoebiusMap,
    group: GroupSpec,
}

fn cayley() -> Result<MoebiusMap> {
    let i = Complex64::i();
    MoebiusMap::from_matrix(i, i, Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0))
}

impl AnnulusSpec {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "annulus inner radius q = {q} violates 0 < q < 1"
            )));
        }
        let log_multiplier = 2.0 * PI * PI / (1.0 / q).ln();
        let multiplier = log_multiplier.exp();
        if !multiplier.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "annulus inner radius q = {q} gives an overflowing multiplier"
            )));
        }
        let c = cayley()?;
        let root = multiplier.sqrt();
        let dilation = MoebiusMap::from_matrix(
            Complex64::new(root, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0 / root, 0.0),
        )?;
        let deck = c.inverse().compose(&dilation).compose(&c);
        let group = GroupSpec::cyclic(deck)?;
        Ok(AnnulusSpec {
            q,
            multiplier,
            log_multiplier,
            deck,
            group,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }

    pub fn deck_generator(&self) -> MoebiusMap {
        self.deck
    }

    /// `C(z) = i(1 + z)/(1 - z)`, with the argument of the result clamped to
    /// `[0, π]` so that boundary points never fall on the wrong branch.
    fn cayley_log(&self, z: Complex64) -> Result<Complex64> {
        for p in [1.0, -1.0] {
            let distance = (z - p).norm();
            if distance < SINGULAR_RADIUS {
                return Err(Error::SingularPoint { point: z });
            }
        }
        let w = Complex64::i() * (1.0 + z) / (1.0 - z);
        let mut arg = w.arg();
        if arg < 0.0 {
            arg = if w.re < 0.0 { PI } else { 0.0 };
        }
        Ok(Complex64::new(w.norm().ln(), arg))
    }
}

impl Uniformizer for AnnulusSpec {
    /// `Λ(z) = exp((2πi/ln λ) Log C(z))`.
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        let l = self.cayley_log(z)?;
        Ok((Complex64::new(0.0, 2.0 * PI / self.log_multiplier) * l).exp())
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let lam = self.eval(z)?;
        Ok(lam * Complex64::new(0.0, 2.0 * PI / self.log_multiplier) * 2.0 / (1.0 - z * z))
    }

    fn group(&self) -> &GroupSpec {
        &self.group
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaurentTerm {
    pub power: i32,
    pub coeff: Complex64,
}

/// `Σ c_n sⁿ` over a finite range of integer powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<LaurentTerm>", into = "Vec<LaurentTerm>")]
pub struct LaurentPoly {
    min_power: i32,
    coeffs: Vec<Complex64>,
}

impl TryFrom<Vec<LaurentTerm>> for LaurentPoly {
    type Error = Error;

    fn try_from(terms: Vec<LaurentTerm>) -> Result<Self> {
        Self::from_terms(&terms)
    }
}

impl From<LaurentPoly> for Vec<LaurentTerm> {
    fn from(p: LaurentPoly) -> Self {
        p.terms()
    }
}

impl LaurentPoly {
    /// Repeated powers are summed.
    pub fn from_terms(terms: &[LaurentTerm]) -> Result<Self> {
        if terms.is_empty() {
            return Ok(LaurentPoly {
                min_power: 0,
                coeffs: vec![],
            });
        }
        for t in terms {
            if !(t.coeff.re.is_finite() && t.coeff.im.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "non-finite coefficient for power {}",
                    t.power
                )));
            }
            if t.power.abs() > 64 {
                return Err(Error::InvalidParameter(format!("power {} out of range", t.power)));
            }
        }
        let lo = terms.iter().map(|t| t.power).min().unwrap_or(0);
        let hi = terms.iter().map(|t| t.power).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for t in terms {
            coeffs[(t.power - lo) as usize] += t.coeff;
        }
        Ok(LaurentPoly {
            min_power: lo,
            coeffs,
        })
    }

    /// Convenience constructor from real coefficients.
    pub fn real(terms: &[(i32, f64)]) -> Result<Self> {
        let terms: Vec<LaurentTerm> = terms
            .iter()
            .map(|&(power, c)| LaurentTerm {
                power,
                coeff: Complex64::new(c, 0.0),
            })
            .collect();
        Self::from_terms(&terms)
    }

    /// Non-zero terms in increasing power.
    pub fn terms(&self) -> Vec<LaurentTerm> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(i, &coeff)| LaurentTerm {
                power: self.min_power + i as i32,
                coeff,
            })
            .collect()
    }

    pub fn coefficient(&self, power: i32) -> Complex64 {
        let i = power - self.min_power;
        if i < 0 || i as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[i as usize]
        }
    }

    fn has_negative_powers(&self) -> bool {
        self.terms().iter().any(|t| t.power < 0)
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        if s == Complex64::new(0.0, 0.0) && self.has_negative_powers() {
            return Err(Error::Pole { denominator: 0.0 });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        Ok(acc * s.powi(self.min_power))
    }

    /// The `k`-fold derivative, coefficient by coefficient.
    pub fn derivative(&self, k: u32) -> LaurentPoly {
        let terms: Vec<LaurentTerm> = self
            .terms()
            .into_iter()
            .filter_map(|t| {
                let factor: f64 = (0..k as i32).map(|j| (t.power - j) as f64).product();
                (factor != 0.0).then(|| LaurentTerm {
                    power: t.power - k as i32,
                    coeff: t.coeff * factor,
                })
            })
            .collect();
        Self::from_terms(&terms).expect("derivative of a valid Laurent polynomial")
    }
}

#[derive(Debug, Clone)]
pub struct OracleValue {
    pub value: Complex64,
    pub points: usize,
}

/// `(1/2πi) ∮_{∂D} h(s)/(s - λ₀)^{k+1} ds` with the outer circle
/// counterclockwise and `|s| = q` clockwise, doubled until two
/// estimates agree to `1e-12` relative.
pub fn annulus_cauchy_oracle(h: &LaurentPoly, q: f64, lambda0: Complex64, k: u32) -> Result<OracleValue> {
    let r = lambda0.norm();
    let distance = (r - q).min(1.0 - r);
    if !(distance >= CONTOUR_MARGIN) {
        return Err(Error::IllConditionedContour {
            point: lambda0,
            distance,
        });
    }
    let circle = |radius: f64, n: usize| -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let s = Complex64::from_polar(radius, 2.0 * PI * (j as f64 + 0.5) / n as f64);
            sum += h.eval(s)? * s / (s - lambda0).powu(k + 1);
        }
        Ok(sum / n as f64)
    };
    let estimate = |n: usize| -> Result<Complex64> { Ok(circle(1.0, n)? - circle(q, n)?) };
    let mut n = 64;
    let mut prev = estimate(n)?;
    while n < 1 << 22 {
        n *= 2;
        let v = estimate(n)?;
        if (v - prev).norm() <= 1e-12 * v.norm().max(1.0) {
            return Ok(OracleValue { value: v, points: n });
        }
        prev = v;
    }
    Err(Error::IllConditionedContour {
        point: lambda0,
        distance,
    })
}
