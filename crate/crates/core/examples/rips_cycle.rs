//! A noisy circle sampled as a point cloud: the Rips complex carries one
//! loop that is never filled.

use dms::engine::{compute, RunConfig};
use dms::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), dms::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let points: Vec<Vec<f64>> = (0..60)
        .map(|i| {
            let t = i as f64 / 60.0 * std::f64::consts::TAU;
            let r = 1.0 + rng.gen_range(-0.01..0.01);
            vec![r * t.cos(), r * t.sin()]
        })
        .collect();
    let (complex, field) = Complex::rips(&points, 0.25, 2)?;
    println!(
        "Rips complex: {} vertices, {} edges, {} triangles",
        complex.vertex_count(),
        complex.simplex_count(1),
        complex.simplex_count(2)
    );
    let out = compute(&complex, &field, &RunConfig::default())?;
    println!("betti numbers {:?}", out.diagram.betti(2));
    for p in out.diagram.slice(1) {
        let death = if p.finite { format!("{:.4}", p.death) } else { "inf".into() };
        println!("D1 point ({:.4}, {death})", p.birth);
    }
    Ok(())
}
