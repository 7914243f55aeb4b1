//! Persistence diagram of a smooth field on a 3D grid.
//!
//! `cargo run --release --example grid_persistence -- 32`

use dms::engine::{compute, RunConfig};
use dms::synth::Field;
use dms::Complex;

fn main() -> Result<(), dms::Error> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(24);
    let shape = [n, n, n];
    let complex = Complex::from_grid(shape, 3)?;
    let values = Field::Smooth.sample(shape);

    let out = compute(&complex, &values, &RunConfig::default())?;
    println!(
        "{n}^3 grid: {} simplices, critical simplices per dimension {:?}",
        complex.total_simplex_count(),
        out.critical_counts
    );
    for dim in 0..=3 {
        let mut pts: Vec<_> = out.diagram.slice(dim).collect();
        pts.sort_by(|a, b| b.persistence().total_cmp(&a.persistence()));
        let infinite = pts.iter().filter(|p| !p.finite).count();
        println!("D{dim}: {} points ({infinite} infinite)", pts.len());
        for p in pts.iter().take(3) {
            println!("    ({:.3}, {:.3}){}", p.birth, p.death, if p.finite { "" } else { " inf" });
        }
    }
    println!("betti numbers {:?}", out.diagram.betti(3));
    Ok(())
}
