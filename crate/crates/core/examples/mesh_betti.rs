//! Betti numbers of closed and bounded meshes, read off the infinite classes.

use dms::engine::{compute, RunConfig};
use dms::synth;
use dms::Complex;

fn main() -> Result<(), dms::Error> {
    let meshes: Vec<(&str, Complex)> = vec![
        ("sphere", synth::sphere(2)),
        ("torus", synth::torus(8, 6)?),
        ("ball (5-tet grid)", synth::ball(5)?),
        ("3-sphere", synth::three_sphere()),
    ];
    for (name, complex) in meshes {
        let values = synth::random_values(complex.vertex_count(), 11);
        let out = compute(&complex, &values, &RunConfig::default())?;
        println!(
            "{name:<18} {} vertices, chi = {:>2}, betti {:?}",
            complex.vertex_count(),
            complex.euler_characteristic(),
            out.diagram.betti(complex.dim())
        );
    }
    Ok(())
}
