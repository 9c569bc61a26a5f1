//! The Green function of the annulus group as a Blaschke product over the
//! orbit: its boundary logarithmic derivative from the Poisson orbit sum
//! against the direct sum over the zeros.

use num_complex::Complex64;
use widom_cauchy::annulus::AnnulusSpec;
use widom_cauchy::fuchsian::{enumerate_orbit, GroupSpec};
use widom_cauchy::greens::GreenEvaluator;

fn main() -> widom_cauchy::Result<()> {
    let spec = GroupSpec::cyclic(AnnulusSpec::new(0.05)?.deck_generator())?;
    let orbit = enumerate_orbit(&spec, Complex64::new(-0.25, 0.35), 1e-12, 100_000)?;
    let g = GreenEvaluator::new(&spec, orbit)?;
    println!("orbit of {} points, tail bound {:.2e}", g.orbit().len(), g.tail_bound());
    println!("g(0.1) = {:.12}, |g| on the circle:", g.eval(Complex64::new(0.1, 0.0)));
    for angle in [0.4, 1.3, 2.2, 4.0] {
        let t = Complex64::from_polar(1.0, angle);
        let orbit_sum = g.boundary_log_derivative(t)?.value;
        let direct = g.log_derivative_direct(t);
        println!(
            "  t = e^{angle}i  |g| = {:.15}  g'/g: {:.10} vs {:.10}",
            g.eval(t).norm(),
            orbit_sum,
            direct
        );
    }
    Ok(())
}
