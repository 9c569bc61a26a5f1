//! An integral over the whole circle against the sum over translates of a
//! fundamental arc pair.

use num_complex::Complex64;
use widom_cauchy::annulus::LaurentPoly;
use widom_cauchy::theorem::{build_f, verify_unfolding, Domain, Setting};

fn main() -> widom_cauchy::Result<()> {
    let h = LaurentPoly::real(&[(1, 1.0), (-2, 3.0)])?;
    for q in [0.005, 0.05, 0.2] {
        let s = Setting::new(Domain::annulus(q)?, Complex64::new(0.3, 0.0), 4096, 1e-12, 100_000)?;
        let f = build_f(&h, &s, 1);
        let r = verify_unfolding(&s, |t| f.boundary_reduced(t), None)?;
        println!(
            "q = {q:<5} whole circle {:.12}  folded ({} terms) {:.12}  residual {:.1e}",
            r.unfolded, r.terms, r.folded, r.residual
        );
    }
    Ok(())
}
