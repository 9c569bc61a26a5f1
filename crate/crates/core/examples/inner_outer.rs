//! Split g' into inner and outer factors on the circle grid and check the
//! reconstruction and the characters of g and of the inner factor.

use num_complex::Complex64;
use widom_cauchy::hardy::character_delta;
use widom_cauchy::theorem::{Domain, Setting};

fn main() -> widom_cauchy::Result<()> {
    let s = Setting::new(Domain::annulus(0.2)?, Complex64::new(0.3, 0.0), 4096, 1e-12, 100_000)?;
    let split = s.split();
    for z in [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.4), Complex64::new(-0.1, -0.8)] {
        let delta = split.inner(z)?;
        let rebuilt = delta * split.outer(z)?;
        let exact = s.green().eval_prime(z);
        println!(
            "z = {z:.2}: |Δ| = {:.12}, |Δ·O - g'|/|g'| = {:.2e}",
            delta.norm(),
            (rebuilt - exact).norm() / exact.norm()
        );
    }
    let probes = s.character_probes(8);
    let mu = s.green().character_mu(s.group(), &probes)?;
    let delta = character_delta(split, s.group(), &probes)?;
    println!("μ = {:.12?}", mu.character.values());
    println!("δ = {:.12?} (modulus deviation {:.1e})", delta.character.values(), delta.modulus_deviation);
    Ok(())
}
