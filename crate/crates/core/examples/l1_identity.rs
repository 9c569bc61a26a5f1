//! The L1 norm of f on the circle against the corresponding integral over the
//! boundary of the annulus.

use num_complex::Complex64;
use widom_cauchy::annulus::LaurentPoly;
use widom_cauchy::theorem::{verify_l1_identity, Domain, Setting};

fn main() -> widom_cauchy::Result<()> {
    let h = LaurentPoly::real(&[(2, 2.0), (-1, 1.0)])?;
    let s = Setting::new(Domain::annulus(0.05)?, Complex64::new(0.3, 0.0), 4096, 1e-12, 100_000)?;
    for k in 0..=2 {
        let r = verify_l1_identity(&s, &h, k)?;
        println!(
            "k = {k}: circle {:.12}  domain {:.12}  rel diff {:.1e}  (exponent 1: {:.12})",
            r.disk_side, r.domain_side, r.rel_diff, r.domain_side_exponent_one
        );
    }
    Ok(())
}
