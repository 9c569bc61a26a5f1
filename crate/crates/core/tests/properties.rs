use num_complex::Complex64;
use proptest::prelude::*;

use widom_cauchy::annulus::{AnnulusSpec, LaurentPoly, Uniformizer};
use widom_cauchy::fuchsian::{Character, GroupSpec, Letter, Word};
use widom_cauchy::moebius::MoebiusMap;

fn disk_point(max_radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max_radius, 0.0..std::f64::consts::TAU).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

fn phase() -> impl Strategy<Value = Complex64> {
    (0.0..std::f64::consts::TAU).prop_map(|a| Complex64::from_polar(1.0, a))
}

fn automorphism() -> impl Strategy<Value = MoebiusMap> {
    (disk_point(0.9), phase()).prop_map(|(c, p)| MoebiusMap::disk_automorphism(c, p).unwrap())
}

fn letters(n: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..2usize, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv)), 0..n)
}

fn reduce(letters: Vec<Letter>) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inverse_letter()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word::new(out).unwrap()
}

proptest! {
    #[test]
    fn composition_acts_as_composition(a in automorphism(), b in automorphism(), z in disk_point(0.95)) {
        let lhs = a.compose(&b).apply(z).unwrap();
        let rhs = a.apply(b.apply(z).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
        prop_assert!((a.determinant() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn inverse_undoes_the_map(a in automorphism(), z in disk_point(0.95)) {
        let back = a.inverse().apply(a.apply(z).unwrap()).unwrap();
        prop_assert!((back - z).norm() < 1e-9);
    }

    #[test]
    fn automorphisms_preserve_the_circle_and_the_disk(a in automorphism(), t in phase(), z in disk_point(0.99)) {
        prop_assert!((a.apply(t).unwrap().norm() - 1.0).abs() < 1e-10);
        prop_assert!(a.apply(z).unwrap().norm() < 1.0);
    }

    #[test]
    fn powers_add(m in -4i64..=4, n in -4i64..=4, z in disk_point(0.5)) {
        let g = MoebiusMap::translation_along(Complex64::from_polar(1.0, 0.7), 3.0).unwrap();
        let lhs = g.powi(m + n).apply(z).unwrap();
        let rhs = g.powi(m).apply(g.powi(n).apply(z).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-8);
    }

    #[test]
    fn characters_are_multiplicative(a in phase(), b in phase(), u in letters(8), v in letters(8)) {
        let chi = Character::new(vec![a, b]).unwrap();
        let (wu, wv) = (reduce(u.clone()), reduce(v.clone()));
        let joined = reduce(u.into_iter().chain(v).collect());
        let product = chi.evaluate(&wu) * chi.evaluate(&wv);
        prop_assert!((chi.evaluate(&joined) - product).norm() < 1e-12);
        prop_assert!((chi.evaluate(&wu.inverse()) - chi.evaluate(&wu).conj()).norm() < 1e-12);
        prop_assert!((chi.evaluate(&joined).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn word_maps_are_a_homomorphism(u in letters(5), v in letters(5)) {
        let spec = GroupSpec::free(vec![
            MoebiusMap::translation_along(Complex64::new(1.0, 0.0), 30.0).unwrap(),
            MoebiusMap::translation_along(Complex64::new(0.0, 1.0), 30.0).unwrap(),
        ]).unwrap();
        let (wu, wv) = (reduce(u.clone()), reduce(v.clone()));
        let joined = spec.word_map(&reduce(u.into_iter().chain(v).collect()));
        let split = spec.word_map(&wu).compose(&spec.word_map(&wv));
        prop_assert!(joined.same_action(&split, 1e-6));
    }

    #[test]
    fn uniformizer_is_deck_invariant(q in 0.005f64..0.2, z in disk_point(0.6)) {
        let a = AnnulusSpec::new(q).unwrap();
        let g = a.deck_generator();
        let w = a.eval(z).unwrap();
        for n in [-1i64, 1] {
            let moved = a.eval(g.powi(n).apply(z).unwrap()).unwrap();
            prop_assert!((moved - w).norm() < 1e-8 * w.norm());
        }
        prop_assert!(w.norm() > q - 1e-12 && w.norm() < 1.0 + 1e-12);
    }

    #[test]
    fn laurent_derivative_is_linear(c1 in -3.0f64..3.0, c2 in -3.0f64..3.0, z in disk_point(0.9)) {
        prop_assume!(z.norm() > 0.1);
        let p = LaurentPoly::real(&[(-2, c1), (3, c2)]).unwrap();
        let expected = -2.0 * c1 * z.powi(-3) + 3.0 * c2 * z.powi(2);
        let got = p.derivative(1).eval(z).unwrap();
        prop_assert!((got - expected).norm() < 1e-10 * (1.0 + expected.norm()));
    }
}
