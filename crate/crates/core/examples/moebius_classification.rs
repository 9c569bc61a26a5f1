//! Classify a few disk automorphisms by trace and show the fixed points of
//! the annulus deck generator.

use num_complex::Complex64;
use widom_cauchy::annulus::AnnulusSpec;
use widom_cauchy::moebius::MoebiusMap;

fn main() -> widom_cauchy::Result<()> {
    let maps = [
        ("rotation by 1 rad", MoebiusMap::rotation(Complex64::from_polar(1.0, 1.0))?),
        ("translation, multiplier 4", MoebiusMap::real_axis_translation(4.0)?),
        ("automorphism centered at 0.5i", MoebiusMap::disk_automorphism(Complex64::new(0.0, 0.5), Complex64::new(1.0, 0.0))?),
    ];
    for (name, m) in &maps {
        println!("{name:32} trace {:.6}  {:?}", m.trace(), m.classify());
    }

    let annulus = AnnulusSpec::new(0.05)?;
    println!(
        "deck generator for q = 0.05: multiplier {:.6}, {:?}",
        annulus.multiplier(),
        annulus.deck_generator().classify()
    );
    Ok(())
}
