//! Representative cycles: the distance to a circle has one persistent loop.

use dms::engine::{compute, RunConfig};
use dms::synth::Field;
use dms::Complex;

fn main() -> Result<(), dms::Error> {
    let shape = [24, 24, 24];
    let complex = Complex::from_grid(shape, 3)?;
    let values = Field::Circle.sample(shape);
    let config = RunConfig {
        retain_generators: true,
        ..Default::default()
    };
    let out = compute(&complex, &values, &config)?;
    let range = out.diagram.max_value - values.iter().copied().fold(f64::INFINITY, f64::min);

    for g in out.generators()? {
        if g.persistence() > 0.5 * range {
            println!(
                "pair {}: ({:.3}, {:.3}), {} edges, simple loop: {}",
                g.pair_id,
                g.birth,
                g.death,
                g.edges.len(),
                g.is_simple_loop()
            );
            let coords: Vec<_> = g.edges.iter().take(4).map(|e| complex.coordinates(e[0])).collect();
            println!("    first vertices: {coords:?}");
        }
    }
    println!("{} generators in total", out.generators()?.len());
    Ok(())
}
