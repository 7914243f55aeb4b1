//! Effect of the boundary mode on the top-dimensional diagram of a rotating
//! bump cropped to a square.

use dms::engine::{compute, BoundaryMode, RunConfig};
use dms::metrics::wasserstein2;
use dms::synth::rotated_bump;

fn main() -> Result<(), dms::Error> {
    let n = 41;
    for mode in [BoundaryMode::Ignore, BoundaryMode::VirtualMax] {
        let config = RunConfig {
            boundary_mode: mode,
            ..Default::default()
        };
        let (complex, v0) = rotated_bump(n, 0.0)?;
        let base = compute(&complex, &v0, &config)?.diagram;
        print!("{:<12}", mode.name());
        for k in 0..8 {
            let theta = k as f64 * std::f64::consts::PI / 8.0;
            let (complex, v) = rotated_bump(n, theta)?;
            let d = compute(&complex, &v, &config)?.diagram;
            print!(" {:.4}", wasserstein2(&d, &base, 1));
        }
        println!();
    }
    Ok(())
}
