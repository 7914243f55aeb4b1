//! Command-line front end: argument definitions and subcommand drivers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use crate::complex::Complex;
use crate::engine::{self, Algorithm, BoundaryMode, RunConfig, RunOutput};
use crate::error::{Error, Result};
use crate::filtration::FiltrationOrder;
use crate::io::{self, Dtype};
use crate::metrics::wasserstein2;
use crate::synth::{self, Field};

/// Environment variable holding the default per-run bench timeout in seconds.
pub const BENCH_TIMEOUT_ENV: &str = "DMS_BENCH_TIMEOUT";

#[derive(Parser, Debug)]
#[command(name = "dms", version, about = "Persistence diagrams of piecewise-linear scalar fields")]
pub struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the persistence diagram of one dataset.
    Compute(ComputeArgs),
    /// Time the pipeline stages over datasets, algorithms and thread counts.
    Bench(BenchArgs),
    /// L2-Wasserstein distance between two diagram files, per dimension.
    Distance(DistanceArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Raw grid, `.tsc` mesh or point-cloud `.csv`.
    pub input: Option<PathBuf>,
    /// Grid extents, e.g. `64,64,64`.
    #[arg(long)]
    pub dims: Option<String>,
    /// Sample type of a raw grid: u8, u16, f32 or f64.
    #[arg(long, default_value = "f32")]
    pub dtype: String,
    /// Synthetic field on a `--dims` grid: elevation, random, smooth or circle.
    #[arg(long)]
    pub synth: Option<Field>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rips scale for point-cloud input.
    #[arg(long)]
    pub rips_epsilon: Option<f64>,
    /// Use the explicit five-tetrahedra subdivision for 3D grids.
    #[arg(long)]
    pub five_tet: bool,
    /// Replace values by their ranks in the vertex order.
    #[arg(long)]
    pub order_field: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "dms")]
    pub algorithm: Algorithm,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Boundary handling of the dual sweep: ignore or virtual-max.
    #[arg(long, default_value = "ignore")]
    pub boundary: BoundaryMode,
    /// Write `stage,seconds` timings here.
    #[arg(long)]
    pub bench: Option<PathBuf>,
    /// Write 1-cycle generators here.
    #[arg(long)]
    pub generators: Option<PathBuf>,
    /// Diagram output; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Abort after this many seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    /// Dataset files (raw grids need `--dims`).
    pub inputs: Vec<PathBuf>,
    /// Synthetic fields to run on a `--dims` grid.
    #[arg(long, value_delimiter = ',')]
    pub synth: Vec<Field>,
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long, default_value = "f32")]
    pub dtype: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub rips_epsilon: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "dms")]
    pub algorithm: Vec<Algorithm>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub threads: Vec<usize>,
    #[arg(long, default_value = "ignore")]
    pub boundary: BoundaryMode,
    /// Runs per configuration; the row reports the median total.
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    /// Per-run time budget in seconds (default from DMS_BENCH_TIMEOUT).
    #[arg(long)]
    pub timeout: Option<f64>,
    /// CSV output; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct DistanceArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    /// Only this dimension.
    #[arg(long)]
    pub dim: Option<usize>,
}

/// A loaded complex with its field.
pub struct Dataset {
    pub name: String,
    pub complex: Complex,
    pub values: Vec<f64>,
}

/// Process exit status for an error: 2 for internal failures, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_internal() {
        2
    } else {
        1
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compute(a) => {
            let text = cmd_compute(&a)?;
            if let Some(text) = text {
                print!("{text}");
            }
            Ok(())
        }
        Command::Bench(a) => {
            let csv = cmd_bench(&a)?;
            match &a.output {
                Some(p) => io::write_text(p, &csv),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
        Command::Distance(a) => {
            print!("{}", cmd_distance(&a)?);
            Ok(())
        }
    }
}

fn grid_complex(shape: [usize; 3], five_tet: bool) -> Result<Complex> {
    let d = synth::grid_dim(shape);
    if five_tet {
        if d != 3 {
            return Err(Error::InvalidInput("--five-tet needs a 3D grid".into()));
        }
        Complex::five_tet_grid(shape)
    } else {
        Complex::from_grid(shape, d)
    }
}

fn required_dims(dims: &Option<String>, what: &str) -> Result<[usize; 3]> {
    let s = dims
        .as_deref()
        .ok_or_else(|| Error::InvalidInput(format!("{what} needs --dims")))?;
    io::parse_dims(s)
}

fn extension(p: &Path) -> String {
    p.extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase()
}

/// Loads the dataset described by `args`.
pub fn load(args: &InputArgs) -> Result<Dataset> {
    let mut ds = match (&args.synth, &args.input) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidInput("give either an input file or --synth, not both".into()))
        }
        (None, None) => return Err(Error::InvalidInput("no input: give a file or --synth".into())),
        (Some(field), None) => {
            let shape = required_dims(&args.dims, "--synth")?;
            let field = match field {
                Field::Random { .. } => Field::Random { seed: args.seed },
                f => *f,
            };
            Dataset {
                name: format!("{}-{}x{}x{}", field.name(), shape[0], shape[1], shape[2]),
                complex: grid_complex(shape, args.five_tet)?,
                values: field.sample(shape),
            }
        }
        (None, Some(path)) => load_file(path, &args.dims, &args.dtype, args.rips_epsilon, args.five_tet)?,
    };
    if args.order_field {
        let order = FiltrationOrder::new(&ds.values)?;
        ds.values = (0..ds.values.len() as u32).map(|v| order.rank(v) as f64).collect();
    }
    Ok(ds)
}

fn load_file(
    path: &Path,
    dims: &Option<String>,
    dtype: &str,
    rips_epsilon: Option<f64>,
    five_tet: bool,
) -> Result<Dataset> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let (complex, values) = match extension(path).as_str() {
        "tsc" => io::read_tsc(path)?,
        "csv" => {
            let eps = rips_epsilon
                .ok_or_else(|| Error::InvalidInput("point-cloud input needs --rips-epsilon".into()))?;
            let points = io::read_point_cloud(path)?;
            let (complex, field, kept) = Complex::rips_largest_component(&points, eps, 2)?;
            if kept.len() < points.len() {
                warn!(
                    "Rips complex is disconnected; keeping the largest component ({} of {} points)",
                    kept.len(),
                    points.len()
                );
            }
            (complex, field)
        }
        _ => {
            let shape = required_dims(dims, "raw grid input")?;
            let dtype: Dtype = dtype.parse()?;
            (grid_complex(shape, five_tet)?, io::read_raw_grid(path, shape, dtype)?)
        }
    };
    Ok(Dataset {
        name,
        complex,
        values,
    })
}

fn seconds(s: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(s).map_err(|e| Error::InvalidInput(format!("bad timeout {s}: {e}")))
}

/// Runs `compute`; returns the diagram text when it goes to stdout.
pub fn cmd_compute(args: &ComputeArgs) -> Result<Option<String>> {
    let ds = load(&args.input)?;
    info!(
        "{}: {} vertices, {} simplices",
        ds.name,
        ds.complex.vertex_count(),
        ds.complex.total_simplex_count()
    );
    let config = RunConfig {
        algorithm: args.algorithm,
        threads: args.threads,
        boundary_mode: args.boundary,
        retain_generators: args.generators.is_some(),
        bench: args.bench.is_some(),
        timeout: args.timeout.map(seconds).transpose()?,
    };
    let out = engine::compute(&ds.complex, &ds.values, &config)?;
    let diagram = out.diagram.clone().with_provenance("field", &ds.name);
    if let Some(p) = &args.bench {
        io::write_text(p, &out.timings.to_csv())?;
    }
    if let Some(p) = &args.generators {
        io::write_text(p, &io::format_generators(out.generators()?, Some(&ds.complex)))?;
    }
    let text = io::format_diagram(&diagram);
    match &args.output {
        Some(p) => {
            io::write_text(p, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

pub const BENCH_COLUMNS: &str = "dataset,algorithm,threads,init,gradient,sort,d0_dtop,d1,total,\
simplices,output_size,output_d0,output_d1,output_d2,output_d3,speedup,status";

/// One bench configuration's result.
struct BenchRow {
    dataset: String,
    algorithm: Algorithm,
    threads: usize,
    simplices: usize,
    result: Option<RunOutput>,
}

fn bench_timeout(args: &BenchArgs) -> Result<Option<Duration>> {
    let secs = match args.timeout {
        Some(s) => Some(s),
        None => match std::env::var(BENCH_TIMEOUT_ENV) {
            Ok(v) => Some(
                v.parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("{BENCH_TIMEOUT_ENV}={v:?} is not a number")))?,
            ),
            Err(_) => None,
        },
    };
    secs.map(seconds).transpose()
}

/// Runs the bench matrix and returns CSV text.
pub fn cmd_bench(args: &BenchArgs) -> Result<String> {
    let timeout = bench_timeout(args)?;
    let mut datasets = Vec::new();
    for field in &args.synth {
        datasets.push(load(&InputArgs {
            input: None,
            dims: args.dims.clone(),
            dtype: args.dtype.clone(),
            synth: Some(*field),
            seed: args.seed,
            rips_epsilon: None,
            five_tet: false,
            order_field: false,
        })?);
    }
    for p in &args.inputs {
        datasets.push(load_file(p, &args.dims, &args.dtype, args.rips_epsilon, false)?);
    }
    if datasets.is_empty() {
        return Err(Error::InvalidInput("bench needs --synth or input files".into()));
    }
    if args.repeat == 0 {
        return Err(Error::InvalidInput("--repeat must be at least 1".into()));
    }

    let mut rows = Vec::new();
    for ds in &datasets {
        for &algorithm in &args.algorithm {
            for &threads in &args.threads {
                let config = RunConfig {
                    algorithm,
                    threads,
                    boundary_mode: args.boundary,
                    retain_generators: false,
                    bench: true,
                    timeout,
                };
                let mut runs = Vec::new();
                for _ in 0..args.repeat {
                    match engine::compute(&ds.complex, &ds.values, &config) {
                        Ok(out) => runs.push(out),
                        Err(Error::Timeout) => {
                            warn!("{} / {} / {threads} threads: timed out", ds.name, algorithm.name());
                            runs.clear();
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                runs.sort_by(|a, b| a.timings.total.total_cmp(&b.timings.total));
                let median = (!runs.is_empty()).then(|| runs.swap_remove(runs.len() / 2));
                rows.push(BenchRow {
                    dataset: ds.name.clone(),
                    algorithm,
                    threads,
                    simplices: ds.complex.total_simplex_count(),
                    result: median,
                });
            }
        }
    }
    Ok(format_bench(&rows))
}

fn format_bench(rows: &[BenchRow]) -> String {
    let mut out = format!("{BENCH_COLUMNS}\n");
    for r in rows {
        // speedup against the fewest-threads run of the same dataset and algorithm
        let base = rows
            .iter()
            .filter(|o| o.dataset == r.dataset && o.algorithm == r.algorithm)
            .min_by_key(|o| o.threads)
            .and_then(|o| o.result.as_ref())
            .map(|o| o.timings.total);
        write!(out, "{},{},{},", r.dataset, r.algorithm.name(), r.threads).unwrap();
        match &r.result {
            Some(res) => {
                for (_, t) in res.timings.rows() {
                    write!(out, "{t},").unwrap();
                }
                let per_dim: Vec<usize> = (0..4).map(|p| res.diagram.slice(p).count()).collect();
                let speedup = base.map(|b| b / res.timings.total).unwrap_or(f64::NAN);
                writeln!(
                    out,
                    "{},{},{},{},{},{},{speedup},ok",
                    r.simplices,
                    res.diagram.len(),
                    per_dim[0],
                    per_dim[1],
                    per_dim[2],
                    per_dim[3]
                )
                .unwrap();
            }
            None => writeln!(out, ",,,,,,{},,,,,,,timeout", r.simplices).unwrap(),
        }
    }
    out
}

/// Distances per dimension as `dim<TAB>value` lines.
pub fn cmd_distance(args: &DistanceArgs) -> Result<String> {
    let a = io::read_diagram(&args.a)?;
    let b = io::read_diagram(&args.b)?;
    let dims: Vec<usize> = match args.dim {
        Some(d) => vec![d],
        None => {
            let top = a.max_dim().into_iter().chain(b.max_dim()).max().unwrap_or(0);
            (0..=top).collect()
        }
    };
    let mut out = String::new();
    for d in dims {
        writeln!(out, "{d}\t{}", wasserstein2(&a, &b, d)).unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arguments_parse() {
        let cli = Cli::try_parse_from([
            "dms", "compute", "--synth", "random", "--dims", "8,8", "--seed", "3", "--boundary", "virtual-max",
        ])
        .unwrap();
        match cli.command {
            Command::Compute(a) => {
                assert_eq!(a.boundary, BoundaryMode::VirtualMax);
                assert_eq!(a.input.seed, 3);
            }
            _ => panic!(),
        }
        let cli = Cli::try_parse_from(["dms", "bench", "--synth", "elevation,smooth", "--threads", "1,2"]).unwrap();
        match cli.command {
            Command::Bench(a) => {
                assert_eq!(a.synth, vec![Field::Elevation, Field::Smooth]);
                assert_eq!(a.threads, vec![1, 2]);
            }
            _ => panic!(),
        }
        assert!(Cli::try_parse_from(["dms", "compute", "--algorithm", "nope"]).is_err());
    }

    #[test]
    fn bench_rows_and_stage_sums() {
        let args = BenchArgs {
            inputs: vec![],
            synth: vec![Field::Elevation, Field::Random { seed: 0 }],
            dims: Some("8,8,8".into()),
            dtype: "f32".into(),
            seed: 1,
            rips_epsilon: None,
            algorithm: vec![Algorithm::Dms],
            threads: vec![1],
            boundary: BoundaryMode::Ignore,
            repeat: 1,
            timeout: None,
            output: None,
        };
        let csv = cmd_bench(&args).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], BENCH_COLUMNS);
        assert_eq!(lines.len(), 3);
        for l in &lines[1..] {
            let c: Vec<&str> = l.split(',').collect();
            let stages: f64 = c[3..8].iter().map(|x| x.parse::<f64>().unwrap()).sum();
            let total: f64 = c[8].parse().unwrap();
            assert!(stages <= total + 1e-9);
            assert_eq!(c[16], "ok");
        }
        let size = |l: &str| l.split(',').nth(10).unwrap().parse::<usize>().unwrap();
        assert_eq!(size(lines[1]), 1);
        assert!(size(lines[2]) > 1);
    }
}
