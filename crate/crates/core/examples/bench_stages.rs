//! Per-stage timings on fields of increasing topological complexity.
//!
//! `cargo run --release --example bench_stages -- 64`

use dms::engine::{compute, RunConfig};
use dms::synth::Field;
use dms::Complex;

fn main() -> Result<(), dms::Error> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(32);
    let shape = [n, n, n];
    let complex = Complex::from_grid(shape, 3)?;
    println!("{:<10} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>7}", "field", "init", "gradient", "sort", "d0_dtop", "d1", "total", "points");
    for field in [Field::Elevation, Field::Smooth, Field::Random { seed: 1 }] {
        let values = field.sample(shape);
        let out = compute(&complex, &values, &RunConfig::default())?;
        let t = out.timings;
        println!(
            "{:<10} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>7}",
            field.name(),
            t.init,
            t.gradient,
            t.sort,
            t.d0_dtop,
            t.d1,
            t.total,
            out.diagram.len()
        );
    }
    Ok(())
}
