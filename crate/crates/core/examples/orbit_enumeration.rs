//! Enumerate the orbit of a point under the annulus deck group and watch the
//! omitted deficiency sum shrink as the tail tolerance tightens.

use num_complex::Complex64;
use widom_cauchy::annulus::AnnulusSpec;
use widom_cauchy::fuchsian::{enumerate_orbit, GroupSpec};

fn main() -> widom_cauchy::Result<()> {
    let annulus = AnnulusSpec::new(0.005)?;
    let spec = GroupSpec::cyclic(annulus.deck_generator())?;
    let zeta = Complex64::new(0.3, 0.0);
    println!("{:>8} {:>8} {:>7} {:>12} {:>16}", "tail_tol", "points", "levels", "tail_bound", "widom sum");
    for tail in [1e-4, 1e-8, 1e-12] {
        let orbit = enumerate_orbit(&spec, zeta, tail, 100_000)?;
        println!(
            "{tail:8.0e} {:8} {:7} {:12.3e} {:16.12}",
            orbit.len(),
            orbit.levels(),
            orbit.tail_bound(),
            orbit.widom_sum()
        );
    }
    Ok(())
}
