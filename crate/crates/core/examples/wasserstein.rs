//! Comparing diagrams: the fast path against the reference pairing, and a
//! field against a perturbed copy.

use dms::engine::{compute, Algorithm, RunConfig};
use dms::metrics::{wasserstein2, wasserstein2_points};
use dms::synth::{self, Field};
use dms::Complex;

fn main() -> Result<(), dms::Error> {
    println!("W2({{(0,2)}}, {{}}) = {}", wasserstein2_points(&[(0.0, 2.0)], &[]));
    println!("W2({{(0,2)}}, {{(0,2.1)}}) = {}", wasserstein2_points(&[(0.0, 2.0)], &[(0.0, 2.1)]));

    let shape = [12, 12, 12];
    let complex = Complex::from_grid(shape, 3)?;
    let values = Field::Random { seed: 3 }.sample(shape);
    let fast = compute(&complex, &values, &RunConfig::default())?;
    let reference = compute(
        &complex,
        &values,
        &RunConfig {
            algorithm: Algorithm::PairSimplices,
            ..Default::default()
        },
    )?;
    // small noise that leaves the global minimum in place, so the infinite
    // classes keep their births
    let noise = synth::random_values(values.len(), 4);
    let lowest = values.iter().copied().fold(f64::INFINITY, f64::min);
    let perturbed: Vec<f64> = values
        .iter()
        .zip(&noise)
        .map(|(&v, n)| if v == lowest { v } else { v + 0.01 * n })
        .collect();
    let other = compute(&complex, &perturbed, &RunConfig::default())?;

    for dim in 0..=3 {
        println!(
            "D{dim}: dms vs reference {:.3e}, field vs perturbed {:.4}",
            wasserstein2(&fast.diagram, &reference.diagram, dim),
            wasserstein2(&fast.diagram, &other.diagram, dim)
        );
    }
    Ok(())
}
