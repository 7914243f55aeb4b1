//! Writing and reading meshes and diagrams.

use dms::engine::{compute, RunConfig};
use dms::{io, synth};

fn main() -> Result<(), dms::Error> {
    let dir = std::env::temp_dir().join("dms-file-formats");
    std::fs::create_dir_all(&dir).map_err(|source| dms::Error::Io { path: dir.clone(), source })?;

    let complex = synth::torus(6, 5)?;
    let values = synth::height_values(&complex);
    let mesh_path = dir.join("torus.tsc");
    io::write_text(&mesh_path, &io::format_tsc(&complex, &values))?;

    let (loaded, loaded_values) = io::read_tsc(&mesh_path)?;
    let out = compute(&loaded, &loaded_values, &RunConfig::default())?;
    let diagram_path = dir.join("torus.tsv");
    io::write_diagram(&diagram_path, &out.diagram)?;
    print!("{}", io::format_diagram(&out.diagram));

    let back = io::read_diagram(&diagram_path)?;
    println!("round trip exact: {}", back == out.diagram);
    Ok(())
}
