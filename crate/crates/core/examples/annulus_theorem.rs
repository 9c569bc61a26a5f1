//! The weighted Cauchy formula on an annulus: the Poisson-weighted boundary
//! integral of f against the residue operator and the exact derivative of h.

use num_complex::Complex64;
use widom_cauchy::annulus::LaurentPoly;
use widom_cauchy::theorem::{verify_theorem, TheoremConfig};

fn main() -> widom_cauchy::Result<()> {
    let h = LaurentPoly::real(&[(1, 1.0), (-2, 3.0)])?;
    for q in [0.005, 0.05, 0.2] {
        for k in 0..=3 {
            let cfg = TheoremConfig::new(Some(q), Complex64::new(-0.25, 0.35), k, h.clone());
            let r = verify_theorem(&cfg)?;
            println!(
                "q = {q:<5} k = {k}  lhs {:.12}  rhs {:.12}  exact {:.12}  err {:.1e}  orbit {}",
                r.lhs, r.rhs, r.oracle, r.max_rel_err, r.orbit_size
            );
        }
    }
    Ok(())
}
