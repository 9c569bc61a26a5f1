//! The derivative operator as a residue contour integral: for `h = H(g)` it
//! returns the Taylor coefficient `H_k`.

use num_complex::Complex64;
use widom_cauchy::annulus::LaurentPoly;
use widom_cauchy::theorem::{verify_lemma, Domain, ResiduePolicy, Setting};

fn main() -> widom_cauchy::Result<()> {
    let composite = LaurentPoly::real(&[(0, 1.0), (1, -2.0), (2, 0.5), (3, 3.0)])?;
    let h = LaurentPoly::real(&[(2, 2.0), (-1, 1.0)])?;
    for domain in [Domain::disk(), Domain::annulus(0.05)?] {
        let s = Setting::new(domain, Complex64::new(0.3, 0.0), 2048, 1e-12, 100_000)?;
        for k in 0..=3 {
            let r = verify_lemma(&s, &h, &composite, k, &ResiduePolicy::default())?;
            println!(
                "q = {:?} k = {k}: H_k {:.12} (exact {}), theorem operator {:.12} (exact {:.12}), radius {:.1e}",
                s.domain().q(),
                r.composite,
                r.composite_exact,
                r.theorem,
                r.theorem_exact,
                r.radius
            );
        }
    }
    Ok(())
}
