//! Finitely generated groups of disk automorphisms: truncated orbits,
//! characters, and fundamental arcs of cyclic groups on the circle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::moebius::{Classification, MoebiusMap};

/// Orbit points closer than this are treated as a collision (non-discrete input).
pub const DEDUP_THRESHOLD: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupStructure {
    Cyclic,
    Free,
}

/// A cyclic or free group given by hyperbolic generators.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    generators: Vec<MoebiusMap>,
    structure: GroupStructure,
}

impl GroupSpec {
    /// The trivial group, encoded as the free group on zero generators.
    pub fn trivial() -> Self {
        GroupSpec {
            generators: Vec::new(),
            structure: GroupStructure::Free,
        }
    }

    pub fn cyclic(generator: MoebiusMap) -> Result<Self> {
        Self::new(vec![generator], GroupStructure::Cyclic)
    }

    pub fn free(generators: Vec<MoebiusMap>) -> Result<Self> {
        Self::new(generators, GroupStructure::Free)
    }

    pub fn new(generators: Vec<MoebiusMap>, structure: GroupStructure) -> Result<Self> {
        if structure == GroupStructure::Cyclic && generators.len() != 1 {
            return Err(Error::InvalidGroup(format!(
                "cyclic group needs exactly one generator, got {}",
                generators.len()
            )));
        }
        for (i, g) in generators.iter().enumerate() {
            if !g.classify().is_hyperbolic() {
                return Err(Error::InvalidGroup(format!(
                    "generator {i} is not hyperbolic ({:?})",
                    g.classify()
                )));
            }
            for k in 0..3 {
                let t = Complex64::from_polar(1.0, 0.7 + 2.1 * k as f64);
                let image = g.apply(t)?;
                if (image.norm() - 1.0).abs() > 1e-10 {
                    return Err(Error::InvalidGroup(format!(
                        "generator {i} does not preserve the unit circle"
                    )));
                }
            }
            if g.apply(Complex64::new(0.0, 0.0))?.norm() >= 1.0 {
                return Err(Error::InvalidGroup(format!(
                    "generator {i} does not map the disk to itself"
                )));
            }
        }
        Ok(GroupSpec {
            generators,
            structure,
        })
    }

    pub fn generators(&self) -> &[MoebiusMap] {
        &self.generators
    }

    pub fn structure(&self) -> GroupStructure {
        self.structure
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Fixed points of every generator: the circle points where the boundary
    /// kernels degenerate.
    pub fn fixed_points(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        for g in &self.generators {
            if let Classification::Hyperbolic {
                attracting,
                repelling,
                ..
            } = g.classify()
            {
                out.push(attracting);
                out.push(repelling);
            }
        }
        out
    }

    /// The boundary chart adapted to the generator of a cyclic group.
    pub fn axis_chart(&self) -> Option<AxisChart> {
        if self.structure != GroupStructure::Cyclic {
            return None;
        }
        AxisChart::for_map(&self.generators[0])
    }

    /// The map of a word: letters are composed left to right.
    pub fn word_map(&self, word: &Word) -> MoebiusMap {
        word.letters()
            .iter()
            .fold(MoebiusMap::identity(), |acc, l| acc.compose(&self.letter_map(*l)))
    }

    fn letter_map(&self, letter: Letter) -> MoebiusMap {
        let g = self.generators[letter.generator];
        if letter.inverse {
            g.inverse()
        } else {
            g
        }
    }

    fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(2 * self.generators.len());
        for i in 0..self.generators.len() {
            out.push(Letter::new(i, false));
            out.push(Letter::new(i, true));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverse_letter(self) -> Self {
        Letter {
            inverse: !self.inverse,
            ..self
        }
    }
}

/// A reduced word in the generators; the empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Builds a word and rejects adjacent cancelling pairs.
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.windows(2).any(|w| w[1] == w[0].inverse_letter()) {
            return Err(Error::InvalidParameter("word is not reduced".into()));
        }
        Ok(Word(letters))
    }

    /// `g_generator^n`.
    pub fn power(generator: usize, n: i64) -> Self {
        Word(vec![Letter::new(generator, n < 0); n.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        !self.0.windows(2).any(|w| w[1] == w[0].inverse_letter())
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse_letter()).collect())
    }

    /// Signed exponent sum for one generator.
    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.0
            .iter()
            .filter(|l| l.generator == generator)
            .map(|l| if l.inverse { -1 } else { 1 })
            .sum()
    }

    fn extended(&self, letter: Letter) -> Self {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }
}

#[derive(Debug, Clone)]
pub struct OrbitEntry {
    pub word: Word,
    pub map: MoebiusMap,
    pub point: Complex64,
    /// `1 - |point|`, computed from `|γ'(ζ)|(1 - |ζ|²)` to keep relative accuracy near the circle.
    pub deficiency: f64,
}

/// A truncated orbit `{γ(ζ)}` sorted by deficiency, largest first.
#[derive(Debug, Clone)]
pub struct Orbit {
    base: Complex64,
    entries: Vec<OrbitEntry>,
    tail_bound: f64,
    levels: usize,
    frontier_ratio: f64,
}

impl Orbit {
    pub fn base(&self) -> Complex64 {
        self.base
    }

    pub fn entries(&self) -> &[OrbitEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Heuristic bound on the deficiency sum of all omitted elements.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Longest word length included.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn frontier_ratio(&self) -> f64 {
        self.frontier_ratio
    }

    /// Sum of `1 - |γ(ζ)|` over the included entries, in the stored order.
    /// This is a diagnostic for the Widom condition, not a certificate.
    pub fn widom_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.deficiency).sum()
    }

    pub fn min_pairwise_distance(&self) -> f64 {
        min_pairwise_distance(&self.entries.iter().map(|e| e.point).collect::<Vec<_>>())
    }
}

fn deficiency_of(map: &MoebiusMap, base: Complex64) -> Result<(Complex64, f64)> {
    let w = map.apply(base)?;
    let one_minus_sq = map.derivative(base)?.norm() * (1.0 - base.norm_sqr());
    Ok((w, one_minus_sq / (1.0 + w.norm())))
}

/// Breadth-first enumeration over reduced words, stopped as soon as the
/// geometric frontier estimate bounds the omitted deficiency sum by
/// `tail_tol`.
pub fn enumerate_orbit(
    spec: &GroupSpec,
    base: Complex64,
    tail_tol: f64,
    max_elements: usize,
) -> Result<Orbit> {
    if !(base.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "orbit base {base} not inside the disk"
        )));
    }
    if !(tail_tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tail tolerance {tail_tol} must be positive"
        )));
    }
    let letters = spec.letters();
    let (p0, d0) = deficiency_of(&MoebiusMap::identity(), base)?;
    let mut all = vec![OrbitEntry {
        word: Word::identity(),
        map: MoebiusMap::identity(),
        point: p0,
        deficiency: d0,
    }];
    let mut frontier: Vec<usize> = vec![0];
    let mut levels = 0;
    let (tail_bound, frontier_ratio) = loop {
        let mut children: Vec<OrbitEntry> = Vec::new();
        let mut ratio: f64 = 0.0;
        for &pi in &frontier {
            let parent = &all[pi];
            let last = parent.word.letters().last().copied();
            let mut child_sum = 0.0;
            for &l in &letters {
                if Some(l.inverse_letter()) == last {
                    continue;
                }
                let map = parent.map.compose(&spec.letter_map(l));
                let (point, deficiency) = deficiency_of(&map, base)?;
                child_sum += deficiency;
                children.push(OrbitEntry {
                    word: parent.word.extended(l),
                    map,
                    point,
                    deficiency,
                });
            }
            ratio = ratio.max(child_sum / parent.deficiency);
        }
        let frontier_sum: f64 = frontier.iter().map(|&i| all[i].deficiency).sum();
        let bound = if children.is_empty() {
            0.0
        } else if ratio < 1.0 {
            frontier_sum * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        if bound <= tail_tol {
            break (bound, ratio);
        }
        if all.len() + children.len() > max_elements {
            return Err(Error::TruncationFailure {
                elements: all.len(),
                achieved: bound,
                requested: tail_tol,
            });
        }
        let start = all.len();
        all.extend(children);
        frontier = (start..all.len()).collect();
        levels += 1;
    };

    // Stable sort keeps breadth-first order among equal deficiencies.
    all.sort_by(|x, y| y.deficiency.total_cmp(&x.deficiency));
    let orbit = Orbit {
        base,
        entries: all,
        tail_bound,
        levels,
        frontier_ratio,
    };
    let sep = orbit.min_pairwise_distance();
    if sep <= DEDUP_THRESHOLD {
        return Err(Error::InvalidGroup(format!(
            "orbit points collide (min separation {sep:e}); group is not discrete"
        )));
    }
    if let Some(e) = orbit.entries.iter().find(|e| !(e.deficiency > 0.0)) {
        return Err(Error::TruncationFailure {
            elements: orbit.len(),
            achieved: e.deficiency,
            requested: tail_tol,
        });
    }
    Ok(orbit)
}

fn min_pairwise_distance(points: &[Complex64]) -> f64 {
    let mut sorted: Vec<Complex64> = points.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut best = f64::INFINITY;
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if sorted[j].re - sorted[i].re >= best {
                break;
            }
            best = best.min((sorted[j] - sorted[i]).norm());
        }
    }
    best
}

/// A homomorphism from the group to the unit circle, given on generators.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Character {
    values: Vec<Complex64>,
}

impl Character {
    pub fn trivial(generators: usize) -> Self {
        Character {
            values: vec![Complex64::new(1.0, 0.0); generators],
        }
    }

    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if (v.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::NotUnimodular {
                    generator: i,
                    modulus: v.norm(),
                });
            }
        }
        Ok(Character { values })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn evaluate(&self, word: &Word) -> Complex64 {
        word.letters()
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, l| {
                let v = self.values[l.generator];
                acc * if l.inverse { v.conj() } else { v }
            })
    }

    pub fn pow(&self, k: i32) -> Self {
        Character {
            values: self.values.iter().map(|v| v.powi(k)).collect(),
        }
    }

    pub fn mul(&self, other: &Character) -> Self {
        Character {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    /// Generator-wise maximum distance between two characters.
    pub fn distance(&self, other: &Character) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Result of measuring `u∘g / u` at probe points.
#[derive(Debug, Clone)]
pub struct MeasuredCharacter {
    pub character: Character,
    /// Largest disagreement between probes, over generators.
    pub spread: f64,
    /// Largest `| |ratio| - 1 |` before projection to the circle.
    pub modulus_deviation: f64,
}

pub const CHARACTER_CONSISTENCY_ERROR: f64 = 1e-6;

/// Measures the character of an automorphic function from ratios
/// `u(g z) / u(z)` at the probe points.
pub fn measure_character<F>(u: F, spec: &GroupSpec, probes: &[Complex64]) -> Result<MeasuredCharacter>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if probes.is_empty() {
        return Err(Error::InvalidParameter("no probe points".into()));
    }
    let values_at: Vec<Complex64> = probes.iter().map(|&z| u(z)).collect::<Result<_>>()?;
    if let Some(i) = values_at.iter().position(|v| v.norm() == 0.0) {
        return Err(Error::InvalidParameter(format!(
            "automorphic function vanishes at probe {}",
            probes[i]
        )));
    }
    let mut values = Vec::with_capacity(spec.generators().len());
    let mut spread: f64 = 0.0;
    let mut modulus_deviation: f64 = 0.0;
    for (gi, g) in spec.generators().iter().enumerate() {
        let ratios: Vec<Complex64> = probes
            .iter()
            .zip(&values_at)
            .map(|(&z, &uz)| Ok(u(g.apply(z)?)? / uz))
            .collect::<Result<_>>()?;
        let s = ratios
            .iter()
            .map(|r| (r - ratios[0]).norm())
            .fold(0.0, f64::max);
        if s > CHARACTER_CONSISTENCY_ERROR {
            return Err(Error::NotAutomorphic {
                generator: gi,
                spread: s,
            });
        }
        let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
        let dev = (mean.norm() - 1.0).abs();
        if dev > CHARACTER_CONSISTENCY_ERROR {
            return Err(Error::NotUnimodular {
                generator: gi,
                modulus: mean.norm(),
            });
        }
        if dev > 1e-10 {
            log::debug!("character value for generator {gi} projected (modulus deviation {dev:e})");
        }
        spread = spread.max(s);
        modulus_deviation = modulus_deviation.max(dev);
        values.push(mean / mean.norm());
    }
    Ok(MeasuredCharacter {
        character: Character { values },
        spread,
        modulus_deviation,
    })
}

/// Coordinates on the circle adapted to a hyperbolic map: the Moebius map
/// `x = κ (z - repelling)/(z - attracting)` sends the disk to the upper
/// half-plane, the repelling point to 0 and the attracting point to ∞, so
/// that the map acts as the dilation `x -> multiplier * x`.
///
/// A circle point is described by the component sign of `x` and
/// `u = ln |x|`; the map acts by `u -> u + ln(multiplier)`.
#[derive(Debug, Clone, Copy)]
pub struct AxisChart {
    attracting: Complex64,
    repelling: Complex64,
    kappa: Complex64,
    multiplier: f64,
}

impl AxisChart {
    pub fn for_map(m: &MoebiusMap) -> Option<Self> {
        match m.classify() {
            Classification::Hyperbolic {
                multiplier,
                attracting,
                repelling,
            } => Some(Self::new(attracting, repelling, multiplier)),
            _ => None,
        }
    }

    pub fn new(attracting: Complex64, repelling: Complex64, multiplier: f64) -> Self {
        let mid = attracting + repelling;
        let probe = if mid.norm() > 1e-8 {
            -mid / mid.norm()
        } else {
            Complex64::new(0.0, 1.0) * attracting
        };
        let w = (probe - repelling) / (probe - attracting);
        let mut kappa = w.conj() / w.norm();
        let at_zero = kappa * repelling / attracting;
        if at_zero.im < 0.0 {
            kappa = -kappa;
        }
        AxisChart {
            attracting,
            repelling,
            kappa,
            multiplier,
        }
    }

    pub fn attracting(&self) -> Complex64 {
        self.attracting
    }

    pub fn repelling(&self) -> Complex64 {
        self.repelling
    }

    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }

    /// Translation length `ln(multiplier)` of the map in the `u` coordinate.
    pub fn period(&self) -> f64 {
        self.multiplier.ln()
    }

    /// Half-plane coordinate of a disk point.
    pub fn to_half_plane(&self, z: Complex64) -> Complex64 {
        self.kappa * (z - self.repelling) / (z - self.attracting)
    }

    pub fn from_half_plane(&self, x: Complex64) -> Complex64 {
        (x * self.attracting - self.kappa * self.repelling) / (x - self.kappa)
    }

    /// `(sign, u)` for a circle point.
    pub fn to_line(&self, t: Complex64) -> (f64, f64) {
        let x = self.to_half_plane(t).re;
        (x.signum(), x.abs().ln())
    }

    /// Circle point on component `sign` with coordinate `u`, together with
    /// the arc-length density `|dt/du|`.
    pub fn from_line(&self, sign: f64, u: f64) -> (Complex64, f64) {
        let x = Complex64::new(sign * u.exp(), 0.0);
        let t = self.from_half_plane(x);
        let jac = (self.repelling - self.attracting).norm() * u.exp() / (x - self.kappa).norm_sqr();
        (t / t.norm(), jac)
    }
}

/// One arc `[start, γ(start))` of a fundamental set on the circle.
#[derive(Debug, Clone, Copy)]
pub struct Arc {
    /// Sign of the half-plane coordinate on this circle component.
    pub component: f64,
    pub start_u: f64,
    pub end_u: f64,
    pub start: Complex64,
    pub end: Complex64,
}

impl Arc {
    /// Arc-length measure normalized so that the whole circle has measure 1.
    pub fn measure(&self, chart: &AxisChart) -> f64 {
        const PIECES: usize = 64;
        let step = (self.end_u - self.start_u) / PIECES as f64;
        let mut prev = self.start;
        let mut total = 0.0;
        for i in 1..=PIECES {
            let (t, _) = chart.from_line(self.component, self.start_u + step * i as f64);
            total += 2.0 * (0.5 * (t - prev).norm()).min(1.0).asin();
            prev = t;
        }
        total / (2.0 * PI)
    }

    /// The arc translated by `g^n`.
    pub fn translated(&self, chart: &AxisChart, n: i64) -> Arc {
        let shift = n as f64 * chart.period();
        let (start, _) = chart.from_line(self.component, self.start_u + shift);
        let (end, _) = chart.from_line(self.component, self.end_u + shift);
        Arc {
            start_u: self.start_u + shift,
            end_u: self.end_u + shift,
            start,
            end,
            ..*self
        }
    }
}

/// Fundamental arcs of a cyclic group: one per component of the circle
/// minus the two fixed points, starting at `anchor` and at its mirror
/// point on the other component.
pub fn fundamental_arcs(spec: &GroupSpec, anchor: Complex64) -> Result<[Arc; 2]> {
    let chart = spec.axis_chart().ok_or_else(|| {
        Error::InvalidGroup("fundamental arcs require a cyclic hyperbolic group".into())
    })?;
    let anchor = anchor / anchor.norm();
    let distance = (anchor - chart.attracting())
        .norm()
        .min((anchor - chart.repelling()).norm());
    if distance < 1e-9 {
        return Err(Error::DegenerateAnchor { anchor, distance });
    }
    let g = spec.generators()[0];
    let (sign, u0) = chart.to_line(anchor);
    let mk = |component: f64| -> Result<Arc> {
        let (start, _) = chart.from_line(component, u0);
        let end = g.apply(start)?;
        Ok(Arc {
            component,
            start_u: u0,
            end_u: u0 + chart.period(),
            start,
            end,
        })
    };
    Ok([mk(sign)?, mk(-sign)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn annulus_like(multiplier: f64) -> GroupSpec {
        GroupSpec::cyclic(MoebiusMap::real_axis_translation(multiplier).unwrap()).unwrap()
    }

    #[test]
    fn rejects_non_hyperbolic_and_bad_cyclic_specs() {
        assert!(matches!(
            GroupSpec::cyclic(MoebiusMap::identity()),
            Err(Error::InvalidGroup(_))
        ));
        assert!(matches!(
            GroupSpec::cyclic(MoebiusMap::rotation(c(0.0, 1.0)).unwrap()),
            Err(Error::InvalidGroup(_))
        ));
        let g = MoebiusMap::real_axis_translation(10.0).unwrap();
        assert!(GroupSpec::new(vec![g, g], GroupStructure::Cyclic).is_err());
    }

    #[test]
    fn cyclic_orbit_deficiencies_decay_like_inverse_multiplier() {
        let lambda = 727.133268311797;
        let spec = annulus_like(lambda);
        let orbit = enumerate_orbit(&spec, c(0.3, 0.0), 1e-14, 1000).unwrap();
        assert!(orbit.len() <= 11, "orbit has {} elements", orbit.len());
        assert!(orbit.tail_bound() <= 1e-14);
        // Oracle: deficiencies of g^n(ζ) computed from explicit matrix powers.
        let g = spec.generators()[0];
        for n in 2..=4i64 {
            for sign in [1i64, -1] {
                let d_prev = 1.0 - g.powi(sign * (n - 1)).apply(c(0.3, 0.0)).unwrap().norm();
                let d = 1.0 - g.powi(sign * n).apply(c(0.3, 0.0)).unwrap().norm();
                let ratio = d / d_prev;
                assert!((ratio * lambda - 1.0).abs() < 0.05, "ratio {ratio}");
            }
        }
        let d1 = orbit
            .entries()
            .iter()
            .find(|e| e.word == Word::power(0, 1))
            .unwrap()
            .deficiency;
        assert!(d1 > 1e-4 && d1 < 1e-2);
    }

    #[test]
    fn orbit_of_zero_is_real_and_symmetric() {
        let spec = annulus_like(50.0);
        let orbit = enumerate_orbit(&spec, c(0.0, 0.0), 1e-12, 1000).unwrap();
        for e in orbit.entries() {
            assert!(e.point.im.abs() < 1e-15);
            let n = e.word.exponent_sum(0);
            let mirror = orbit
                .entries()
                .iter()
                .find(|f| f.word.exponent_sum(0) == -n)
                .unwrap();
            assert!((mirror.point + e.point).norm() < 1e-12);
        }
    }

    #[test]
    fn orbit_matches_matrix_powers() {
        let spec = annulus_like(30.0);
        let base = c(0.2, -0.3);
        let orbit = enumerate_orbit(&spec, base, 1e-12, 1000).unwrap();
        let g = spec.generators()[0];
        for e in orbit.entries() {
            let n = e.word.exponent_sum(0);
            let direct = g.powi(n).apply(base).unwrap();
            assert!((direct - e.point).norm() < 1e-12);
        }
    }

    #[test]
    fn entries_are_sorted_and_positive() {
        let spec = annulus_like(30.0);
        let orbit = enumerate_orbit(&spec, c(0.1, 0.5), 1e-12, 1000).unwrap();
        assert!(orbit.entries()[0].word.is_empty());
        for w in orbit.entries().windows(2) {
            assert!(w[0].deficiency >= w[1].deficiency);
        }
        assert!(orbit.entries().iter().all(|e| e.deficiency > 0.0));
        assert!(orbit.min_pairwise_distance() > DEDUP_THRESHOLD);
    }

    #[test]
    fn refining_tail_tolerance_extends_the_orbit() {
        let spec = annulus_like(20.0);
        let coarse = enumerate_orbit(&spec, c(0.3, 0.1), 1e-4, 1000).unwrap();
        let fine = enumerate_orbit(&spec, c(0.3, 0.1), 1e-10, 1000).unwrap();
        assert!(fine.len() > coarse.len());
        for (a, b) in coarse.entries().iter().zip(fine.entries()) {
            assert_eq!(a.word, b.word);
        }
        assert!(fine.widom_sum() >= coarse.widom_sum());
    }

    #[test]
    fn widom_sum_of_trivial_group() {
        let orbit = enumerate_orbit(&GroupSpec::trivial(), c(0.5, 0.0), 1e-12, 10).unwrap();
        assert_eq!(orbit.len(), 1);
        assert!((orbit.widom_sum() - 0.5).abs() < 1e-15);
        assert_eq!(orbit.tail_bound(), 0.0);
    }

    #[test]
    fn truncation_failure_reports_the_bound() {
        let spec = annulus_like(3.0);
        match enumerate_orbit(&spec, c(0.3, 0.0), 1e-14, 5) {
            Err(Error::TruncationFailure { achieved, .. }) => assert!(achieved > 1e-14),
            other => panic!("expected truncation failure, got {other:?}"),
        }
    }

    #[test]
    fn free_group_orbit_is_closed_under_inverse_words() {
        let a = MoebiusMap::translation_along(c(1.0, 0.0), 60.0).unwrap();
        let b = MoebiusMap::translation_along(c(0.0, 1.0), 60.0).unwrap();
        let spec = GroupSpec::free(vec![a, b]).unwrap();
        let orbit = enumerate_orbit(&spec, c(0.05, 0.02), 1e-8, 100_000).unwrap();
        // Level sizes of a free group on two generators: 1, 4, 12, 36, ...
        let mut count = vec![0usize; orbit.levels() + 1];
        for e in orbit.entries() {
            assert!(e.word.is_reduced());
            count[e.word.len()] += 1;
        }
        for (l, &n) in count.iter().enumerate() {
            let expected = if l == 0 { 1 } else { 4 * 3usize.pow(l as u32 - 1) };
            assert_eq!(n, expected);
        }
    }

    #[test]
    fn character_evaluation() {
        let chi = Character::new(vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(chi.evaluate(&Word::identity()), c(1.0, 0.0));
        assert!((chi.evaluate(&Word::power(0, 2)) - c(-1.0, 0.0)).norm() < 1e-15);
        let theta: f64 = 0.7;
        let chi = Character::new(vec![Complex64::from_polar(1.0, theta)]).unwrap();
        assert!((chi.evaluate(&Word::power(0, -1)) - Complex64::from_polar(1.0, -theta)).norm() < 1e-15);
        assert!(Character::new(vec![c(2.0, 0.0)]).is_err());
    }

    #[test]
    fn constant_function_has_trivial_character() {
        let spec = annulus_like(30.0);
        let m = measure_character(|_| Ok(c(1.0, 0.0)), &spec, &[c(0.1, 0.1), c(-0.2, 0.3)]).unwrap();
        assert_eq!(m.character, Character::trivial(1));
    }

    #[test]
    fn non_automorphic_function_is_rejected() {
        let spec = annulus_like(30.0);
        let r = measure_character(|z| Ok(z + 2.0), &spec, &[c(0.1, 0.1), c(-0.2, 0.3)]);
        assert!(matches!(r, Err(Error::NotAutomorphic { .. })));
    }

    #[test]
    fn chart_conjugates_generator_to_dilation() {
        let g = MoebiusMap::translation_along(c(0.6, 0.8), 12.0).unwrap();
        let chart = AxisChart::for_map(&g).unwrap();
        for &z in &[c(0.1, 0.2), c(-0.4, 0.3), c(0.0, -0.5)] {
            let x = chart.to_half_plane(z);
            assert!(x.im > 0.0);
            let gx = chart.to_half_plane(g.apply(z).unwrap());
            assert!((gx - 12.0 * x).norm() < 1e-10 * x.norm().max(1.0));
            assert!((chart.from_half_plane(x) - z).norm() < 1e-13);
        }
        let (t, jac) = chart.from_line(1.0, 0.3);
        assert!((t.norm() - 1.0).abs() < 1e-15);
        let h = 1e-6;
        let (tp, _) = chart.from_line(1.0, 0.3 + h);
        let (tm, _) = chart.from_line(1.0, 0.3 - h);
        assert!(((tp - tm).norm() / (2.0 * h) - jac).abs() < 1e-7);
    }

    #[test]
    fn fundamental_arcs_tile_the_circle() {
        let spec = annulus_like(40.0);
        let chart = spec.axis_chart().unwrap();
        let arcs = fundamental_arcs(&spec, Complex64::from_polar(1.0, 2.0)).unwrap();
        let g = spec.generators()[0];
        for arc in &arcs {
            assert!((g.apply(arc.start).unwrap() - arc.end).norm() < 1e-12);
            let next = arc.translated(&chart, 1);
            assert!((next.start - arc.end).norm() < 1e-12);
        }
        assert!(arcs[0].component != arcs[1].component);
        // Oracle: the arcs' translates for |n| <= N miss only the arcs
        // around the fixed points beyond the N-th translate.
        let n_max = 6i64;
        let mut covered = 0.0;
        for arc in &arcs {
            for n in -n_max..=n_max {
                covered += arc.translated(&chart, n).measure(&chart);
            }
        }
        let mut missing = 0.0;
        for arc in &arcs {
            let hi = arc.translated(&chart, n_max + 1);
            let lo = arc.translated(&chart, -n_max);
            let (near_a, _) = chart.from_line(arc.component, 60.0);
            let (near_b, _) = chart.from_line(arc.component, -60.0);
            let chord = |p: Complex64, q: Complex64| 2.0 * (0.5 * (p - q).norm()).asin() / (2.0 * PI);
            missing += chord(hi.start, near_a) + chord(lo.start, near_b);
        }
        assert!((covered + missing - 1.0).abs() < 1e-12, "{covered} + {missing}");
        assert!(covered > 1.0 - 1e-6);
    }

    #[test]
    fn degenerate_anchor() {
        let spec = annulus_like(40.0);
        assert!(matches!(
            fundamental_arcs(&spec, c(1.0, 0.0)),
            Err(Error::DegenerateAnchor { .. })
        ));
    }
}
