use std::path::Path;
use std::process::{Command, Output};

use dms::diagram::{PersistenceDiagram, PersistencePair};
use dms::io::{format_diagram, parse_diagram};
use proptest::prelude::*;

fn dms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dms")).args(args).output().expect("binary runs")
}

fn path(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

#[test]
fn elevation_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(&dir, "d.tsv");
    let r = dms(&["compute", "--synth", "elevation", "--dims", "12,10,8", "-o", &out]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let d = dms::io::read_diagram(Path::new(&out)).unwrap();
    assert_eq!(d.len(), 1);
    assert_eq!((d.pairs()[0].dim, d.pairs()[0].finite), (0, false));
}

#[test]
fn runs_are_reproducible_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "2", "4", "8"] {
        let (d, g) = (path(&dir, &format!("d{threads}.tsv")), path(&dir, &format!("g{threads}.tsv")));
        let r = dms(&[
            "compute", "--synth", "random", "--seed", "7", "--dims", "10x9x8", "--threads", threads, "-o", &d,
            "--generators", &g,
        ]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
        files.push((std::fs::read(&d).unwrap(), std::fs::read(&g).unwrap()));
    }
    assert!(files.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn distance_to_itself_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(&dir, "a.tsv"), path(&dir, "b.tsv"));
    assert!(dms(&["compute", "--synth", "smooth", "--dims", "12,12,12", "-o", &a]).status.success());
    assert!(dms(&["compute", "--synth", "smooth", "--dims", "12,12,12", "--algorithm", "pairsimplices", "-o", &b])
        .status
        .success());
    let r = dms(&["distance", &a, &b]);
    assert!(r.status.success());
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(!text.is_empty());
    for line in text.lines() {
        let value: f64 = line.split('\t').nth(1).unwrap().parse().unwrap();
        assert_eq!(value, 0.0, "{line}");
    }
}

#[test]
fn raw_grid_input_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let raw = path(&dir, "f.raw");
    let values: Vec<u8> = (0..64u32).map(|i| ((i * 37) % 64) as u8).collect();
    std::fs::write(&raw, &values).unwrap();
    let r = dms(&["compute", &raw, "--dims", "4,4,4", "--dtype", "u8"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(String::from_utf8(r.stdout).unwrap().contains("dim\tbirth"));

    let r = dms(&["compute", &raw, "--dims", "5,4,4", "--dtype", "u8"]);
    assert_eq!(r.status.code(), Some(1));
    let r = dms(&["compute", &path(&dir, "missing.raw"), "--dims", "4,4,4"]);
    assert_eq!(r.status.code(), Some(1));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(&dir, "b.csv");
    let r = dms(&[
        "bench", "--synth", "elevation,random", "--dims", "8,8,8", "--algorithm", "dms,pairsimplices", "-o", &csv,
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!(header.contains(&"simplices") && header.contains(&"output_size"));
    assert_eq!(lines.filter(|l| l.split(',').count() == header.len()).count(), 4);
}

#[test]
fn mesh_and_point_cloud_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let tsc = path(&dir, "s.tsc");
    let c = dms::synth::sphere(1);
    let v = dms::synth::height_values(&c);
    std::fs::write(&tsc, dms::io::format_tsc(&c, &v)).unwrap();
    let r = dms(&["compute", &tsc]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let d = parse_diagram(&String::from_utf8(r.stdout).unwrap(), Path::new("stdout")).unwrap();
    assert_eq!(d.betti(2), vec![1, 0, 1]);

    let csv = path(&dir, "p.csv");
    let pts: String = (0..24)
        .map(|i| {
            let t = i as f64 * std::f64::consts::TAU / 24.0;
            format!("{},{}\n", t.cos(), t.sin())
        })
        .collect();
    std::fs::write(&csv, format!("x,y\n{pts}")).unwrap();
    let r = dms(&["compute", &csv, "--rips-epsilon", "0.3"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let d = parse_diagram(&String::from_utf8(r.stdout).unwrap(), Path::new("stdout")).unwrap();
    assert_eq!(d.betti(1), vec![1, 1]);
}

fn arb_pair() -> impl Strategy<Value = PersistencePair> {
    (0usize..4, -1e6f64..1e6, 0f64..1e3, any::<bool>(), prop::collection::vec(0u32..1000, 1..5)).prop_map(
        |(dim, birth, len, finite, verts)| PersistencePair {
            dim,
            birth,
            death: birth + len,
            finite,
            birth_vertices: verts.iter().copied().collect(),
            death_vertices: if finite { verts.iter().map(|v| v + 1).collect() } else { Default::default() },
        },
    )
}

proptest! {
    #[test]
    fn diagram_round_trip(pairs in prop::collection::vec(arb_pair(), 0..20), max in -1e6f64..1e7) {
        let d = PersistenceDiagram::new(pairs, max).with_provenance("field", "test");
        let back = parse_diagram(&format_diagram(&d), Path::new("mem")).unwrap();
        prop_assert_eq!(back.pairs(), d.pairs());
        prop_assert_eq!(back.max_value, d.max_value);
        prop_assert_eq!(back.provenance("field"), Some("test"));
    }
}
