//! Moebius transformations of the unit disk, stored as normalized 2x2
//! complex matrices with determinant one.
//!
//! The sign of a normalized matrix is not determined by the map (`M` and
//! `-M` act identically), so equality of maps is always decided by their
//! action on sample points; see [`MoebiusMap::same_action`].

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Denominators below this magnitude are treated as a pole.
pub const POLE_THRESHOLD: f64 = 1e-300;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `z -> (a z + b) / (c z + d)` with `ad - bc = 1`.
#[derive(Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MoebiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

/// Conjugacy type of a Moebius map, decided by its trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    Identity,
    Elliptic,
    Parabolic {
        fixed_point: Complex64,
    },
    Hyperbolic {
        /// Derivative of the inverse at the attracting fixed point; always > 1.
        multiplier: f64,
        attracting: Complex64,
        repelling: Complex64,
    },
}

impl Classification {
    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, Classification::Hyperbolic { .. })
    }
}

impl fmt::Debug for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MoebiusMap[[{}, {}], [{}, {}]]",
            self.a, self.b, self.c, self.d
        )
    }
}

impl MoebiusMap {
    pub const IDENTITY: MoebiusMap = MoebiusMap {
        a: ONE,
        b: ZERO,
        c: ZERO,
        d: ONE,
    };

    pub fn identity() -> Self {
        Self::IDENTITY
    }

    /// Builds the map from an arbitrary invertible matrix, rescaling it to
    /// unit determinant.
    pub fn from_matrix(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if !(det.norm() > 1e-300 && det.norm() > 1e-28 * scale * scale) {
            return Err(Error::InvalidParameter(format!(
                "singular Moebius matrix (det = {det})"
            )));
        }
        let s = det.sqrt();
        Ok(MoebiusMap {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    /// The disk automorphism `z -> phase * (z - center) / (1 - conj(center) z)`.
    pub fn disk_automorphism(center: Complex64, phase: Complex64) -> Result<Self> {
        if !(center.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "automorphism center {center} is not inside the unit disk"
            )));
        }
        if !((phase.norm() - 1.0).abs() <= 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "phase {phase} is not unimodular"
            )));
        }
        Self::from_matrix(phase, -phase * center, -center.conj(), ONE)
    }

    /// Rotation `z -> phase * z`.
    pub fn rotation(phase: Complex64) -> Result<Self> {
        Self::disk_automorphism(ZERO, phase)
    }

    /// Hyperbolic translation along the real diameter with attracting fixed
    /// point `1`, repelling fixed point `-1` and the given multiplier. This is
    /// the half-plane dilation `w -> multiplier * w` seen through the Cayley
    /// map `w = i(1 + z)/(1 - z)`.
    pub fn real_axis_translation(multiplier: f64) -> Result<Self> {
        if !(multiplier > 1.0 && multiplier.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "multiplier {multiplier} must be finite and > 1"
            )));
        }
        let half = 0.5 * multiplier.ln();
        let (ch, sh) = (half.cosh(), half.sinh());
        Self::from_matrix(
            Complex64::new(ch, 0.0),
            Complex64::new(sh, 0.0),
            Complex64::new(sh, 0.0),
            Complex64::new(ch, 0.0),
        )
    }

    /// Hyperbolic translation whose attracting fixed point is the unit
    /// complex number `attracting` and whose repelling fixed point is
    /// `-attracting`.
    pub fn translation_along(attracting: Complex64, multiplier: f64) -> Result<Self> {
        let rot = Self::rotation(attracting / attracting.norm())?;
        Ok(rot
            .compose(&Self::real_axis_translation(multiplier)?)
            .compose(&rot.inverse()))
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    fn denominator(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        if den.norm() < POLE_THRESHOLD {
            return Err(Error::Pole {
                denominator: den.norm(),
            });
        }
        Ok(den)
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let den = self.denominator(z)?;
        Ok((self.a * z + self.b) / den)
    }

    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let den = self.denominator(z)?;
        Ok(1.0 / (den * den))
    }

    /// The map `self ∘ other`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let a = self.a * other.a + self.b * other.c;
        let b = self.a * other.b + self.b * other.d;
        let c = self.c * other.a + self.d * other.c;
        let d = self.c * other.b + self.d * other.d;
        MoebiusMap { a, b, c, d }.renormalized()
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
        .renormalized()
    }

    /// `self^n` for any integer `n` by repeated squaring.
    pub fn powi(&self, n: i64) -> MoebiusMap {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = MoebiusMap::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    fn renormalized(self) -> MoebiusMap {
        let det = self.determinant();
        if (det - ONE).norm() == 0.0 {
            return self;
        }
        let s = det.sqrt();
        MoebiusMap {
            a: self.a / s,
            b: self.b / s,
            c: self.c / s,
            d: self.d / s,
        }
    }

    /// Compares the action of two maps at three interior points.
    pub fn same_action(&self, other: &MoebiusMap, tol: f64) -> bool {
        const PROBES: [Complex64; 3] = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.3, 0.0),
            Complex64::new(0.0, 0.3),
        ];
        PROBES.iter().all(|&z| match (self.apply(z), other.apply(z)) {
            (Ok(u), Ok(v)) => (u - v).norm() <= tol * (1.0 + u.norm()),
            _ => false,
        })
    }

    fn is_identity(&self, tol: f64) -> bool {
        let scale = self.a.norm().max(self.d.norm());
        self.b.norm() <= tol * scale
            && self.c.norm() <= tol * scale
            && (self.a - self.d).norm() <= tol * scale
    }

    /// Fixed points of the map as the roots of `c z^2 + (d - a) z - b = 0`.
    /// Returns `None` when `c = 0` (one fixed point is infinity).
    pub fn fixed_points(&self) -> Option<(Complex64, Complex64)> {
        if self.c.norm() <= 1e-300 {
            return None;
        }
        let beta = self.d - self.a;
        let mut disc = (beta * beta + 4.0 * self.b * self.c).sqrt();
        // Stable root selection: avoid cancellation in -beta -/+ disc.
        if (beta.conj() * disc).re < 0.0 {
            disc = -disc;
        }
        let q = -0.5 * (beta + disc);
        let r1 = q / self.c;
        let r2 = if q.norm() > 0.0 {
            -self.b / q
        } else {
            r1
        };
        Some((r1, r2))
    }

    /// Classifies by `|trace|^2` against 4.
    pub fn classify(&self) -> Classification {
        if self.is_identity(1e-12) {
            return Classification::Identity;
        }
        let tr = self.trace();
        let tr2 = tr.norm_sqr();
        const TOL: f64 = 1e-10;
        if tr2 < 4.0 - TOL {
            return Classification::Elliptic;
        }
        let (p1, p2) = match self.fixed_points() {
            Some(p) => p,
            // c = 0 and not elliptic: a translation-like map fixing infinity.
            None => {
                let fp = if (self.a - self.d).norm() > 0.0 {
                    self.b / (self.d - self.a)
                } else {
                    Complex64::new(f64::INFINITY, 0.0)
                };
                return Classification::Parabolic { fixed_point: fp };
            }
        };
        if (tr2 - 4.0).abs() <= TOL {
            return Classification::Parabolic {
                fixed_point: 0.5 * (p1 + p2),
            };
        }
        let half = 0.5 * tr2.sqrt();
        let multiplier = (half + (half * half - 1.0).sqrt()).powi(2);
        let d1 = (self.c * p1 + self.d).norm_sqr();
        // |derivative| = 1/|cp + d|^2 < 1 at the attracting point.
        let (attracting, repelling) = if d1 > 1.0 { (p1, p2) } else { (p2, p1) };
        Classification::Hyperbolic {
            multiplier,
            attracting,
            repelling,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn automorphism_examples() {
        let id = MoebiusMap::disk_automorphism(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(id.same_action(&MoebiusMap::identity(), 1e-15));
        assert_eq!(id.classify(), Classification::Identity);

        let neg = MoebiusMap::disk_automorphism(c(0.0, 0.0), c(-1.0, 0.0)).unwrap();
        assert!((neg.apply(c(0.0, 1.0)).unwrap() - c(0.0, -1.0)).norm() < 1e-15);

        let m = MoebiusMap::disk_automorphism(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        assert!((m.apply(c(0.0, 0.0)).unwrap() - c(-0.5, 0.0)).norm() < 1e-15);
        assert!(m.apply(c(0.5, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            MoebiusMap::disk_automorphism(c(1.0, 0.0), c(1.0, 0.0)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            MoebiusMap::disk_automorphism(c(0.2, 0.0), c(1.1, 0.0)),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn derivative_matches_closed_form_and_difference() {
        let m = MoebiusMap::disk_automorphism(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let d = m.derivative(c(0.0, 0.0)).unwrap();
        assert!((d - c(0.75, 0.0)).norm() < 1e-15);
        let h = 1e-6;
        let fd = (m.apply(c(h, 0.0)).unwrap() - m.apply(c(-h, 0.0)).unwrap()) / (2.0 * h);
        assert!((fd - d).norm() < 1e-8);
    }

    #[test]
    fn pole_is_reported() {
        let m = MoebiusMap::from_matrix(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0))
            .unwrap();
        assert!(matches!(m.apply(c(0.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(m.derivative(c(0.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn rotation_by_i_is_elliptic() {
        let m = MoebiusMap::rotation(c(0.0, 1.0)).unwrap();
        assert_eq!(m.classify(), Classification::Elliptic);
    }

    #[test]
    fn conjugated_dilation_is_hyperbolic_with_its_multiplier() {
        let m = MoebiusMap::real_axis_translation(4.0).unwrap();
        match m.classify() {
            Classification::Hyperbolic {
                multiplier,
                attracting,
                repelling,
            } => {
                assert!((multiplier - 4.0).abs() < 1e-12);
                assert!((attracting - c(1.0, 0.0)).norm() < 1e-12);
                assert!((repelling - c(-1.0, 0.0)).norm() < 1e-12);
                assert!((m.apply(attracting).unwrap() - attracting).norm() < 1e-12);
                assert!((m.apply(repelling).unwrap() - repelling).norm() < 1e-12);
                let ratio = 1.0 / m.derivative(attracting).unwrap().norm();
                assert!((ratio - 4.0).abs() < 1e-12);
            }
            other => panic!("expected hyperbolic, got {other:?}"),
        }
    }

    #[test]
    fn composition_with_inverse_is_identity_up_to_sign() {
        let m = MoebiusMap::disk_automorphism(c(0.3, -0.4), c(0.6, 0.8)).unwrap();
        let p = m.compose(&m.inverse()).matrix();
        let sign = if p[0][0].re > 0.0 { 1.0 } else { -1.0 };
        assert!((p[0][0] * sign - 1.0).norm() < 1e-12);
        assert!((p[1][1] * sign - 1.0).norm() < 1e-12);
        assert!(p[0][1].norm() < 1e-12 && p[1][0].norm() < 1e-12);
        assert!(MoebiusMap::identity().compose(&m).same_action(&m, 1e-15));
    }

    #[test]
    fn powers_agree_with_repeated_composition() {
        let g = MoebiusMap::translation_along(c(0.6, 0.8), 7.5).unwrap();
        let mut acc = MoebiusMap::identity();
        for n in 0..6 {
            assert!(g.powi(n).same_action(&acc, 1e-12));
            acc = acc.compose(&g);
        }
        assert!(g.powi(-3).compose(&g.powi(3)).same_action(&MoebiusMap::identity(), 1e-12));
    }
}
