//! File formats: diagram and generator TSV, `.tsc` meshes, raw grids and
//! point-cloud CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::complex::{Complex, VertexList};
use crate::diagram::{PersistenceDiagram, PersistencePair};
use crate::error::{Error, Result};
use crate::generators::Generator;

const DIAGRAM_COLUMNS: &str = "dim\tbirth\tdeath\tfinite\tbirth_vertices\tdeath_vertices";
const GENERATOR_COLUMNS: &str = "pair_id\tdim\tbirth\tdeath\tv_a\tv_b";

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `contents` to `path`.
pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn vertex_field(v: &VertexList) -> String {
    if v.is_empty() {
        "-".into()
    } else {
        v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

/// Diagram as TSV. Floats use the shortest representation that parses back
/// to the same value, so [`parse_diagram`] inverts this exactly.
pub fn format_diagram(d: &PersistenceDiagram) -> String {
    let mut out = String::new();
    writeln!(out, "# max_value\t{}", d.max_value).unwrap();
    for (k, v) in &d.provenance {
        writeln!(out, "# {k}\t{v}").unwrap();
    }
    writeln!(out, "{DIAGRAM_COLUMNS}").unwrap();
    for p in d.pairs() {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            p.dim,
            p.birth,
            p.death,
            p.finite as u8,
            vertex_field(&p.birth_vertices),
            vertex_field(&p.death_vertices)
        )
        .unwrap();
    }
    out
}

pub fn parse_diagram(text: &str, path: &Path) -> Result<PersistenceDiagram> {
    let mut max_value = None;
    let mut provenance = Vec::new();
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix("# ") {
            let (k, v) = rest
                .split_once('\t')
                .ok_or_else(|| parse_err(path, lineno, "header line needs a tab-separated key and value"))?;
            if k == "max_value" {
                max_value = Some(
                    v.parse::<f64>()
                        .map_err(|e| parse_err(path, lineno, format!("max_value: {e}")))?,
                );
            } else {
                provenance.push((k.to_string(), v.to_string()));
            }
            continue;
        }
        if line.is_empty() || line == DIAGRAM_COLUMNS {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 6 {
            return Err(parse_err(path, lineno, format!("expected 6 columns, found {}", cols.len())));
        }
        let num = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| parse_err(path, lineno, format!("{what}: {e}")))
        };
        let vertices = |s: &str| -> Result<VertexList> {
            let mut out = VertexList::new();
            if s == "-" {
                return Ok(out);
            }
            for tok in s.split(',') {
                let v = tok
                    .parse::<u32>()
                    .map_err(|e| parse_err(path, lineno, format!("vertex list: {e}")))?;
                out.try_push(v)
                    .map_err(|_| parse_err(path, lineno, "more than 4 vertices"))?;
            }
            Ok(out)
        };
        let finite = match cols[3] {
            "1" => true,
            "0" => false,
            other => return Err(parse_err(path, lineno, format!("finite flag must be 0 or 1, got {other:?}"))),
        };
        let pair = PersistencePair {
            dim: cols[0]
                .parse()
                .map_err(|e| parse_err(path, lineno, format!("dim: {e}")))?,
            birth: num(cols[1], "birth")?,
            death: num(cols[2], "death")?,
            finite,
            birth_vertices: vertices(cols[4])?,
            death_vertices: vertices(cols[5])?,
        };
        if pair.finite && pair.death < pair.birth {
            return Err(parse_err(path, lineno, "death precedes birth"));
        }
        pairs.push(pair);
    }
    let max_value = max_value.ok_or_else(|| parse_err(path, 1, "missing max_value header"))?;
    let mut d = PersistenceDiagram::new(pairs, max_value);
    d.provenance = provenance;
    Ok(d)
}

pub fn read_diagram(path: &Path) -> Result<PersistenceDiagram> {
    parse_diagram(&read_text(path)?, path)
}

pub fn write_diagram(path: &Path, d: &PersistenceDiagram) -> Result<()> {
    write_text(path, &format_diagram(d))
}

/// One row per generator edge. When `complex` has vertex coordinates, each
/// row also carries `xa ya za xb yb zb`.
pub fn format_generators(generators: &[Generator], complex: Option<&Complex>) -> String {
    let with_coords = complex.filter(|c| c.coordinates(0).is_some());
    let mut out = String::from(GENERATOR_COLUMNS);
    if with_coords.is_some() {
        out.push_str("\txa\tya\tza\txb\tyb\tzb");
    }
    out.push('\n');
    for g in generators {
        for e in &g.edges {
            write!(out, "{}\t{}\t{}\t{}\t{}\t{}", g.pair_id, g.dim, g.birth, g.death, e[0], e[1]).unwrap();
            if let Some(c) = with_coords {
                for v in e {
                    let [x, y, z] = c.coordinates(*v).unwrap_or([f64::NAN; 3]);
                    write!(out, "\t{x}\t{y}\t{z}").unwrap();
                }
            }
            out.push('\n');
        }
    }
    out
}

/// Parses a `.tsc` mesh: `tsc <d> <nv> <ntop>`, then `x y z f` per vertex,
/// then `d + 1` vertex ids per top simplex. Blank lines and `#` comments are
/// skipped.
pub fn parse_tsc(text: &str, path: &Path) -> Result<(Complex, Vec<f64>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "tsc" {
        return Err(parse_err(path, hl, "expected header `tsc <d> <nv> <ntop>`"));
    }
    let int = |s: &str| s.parse::<usize>().map_err(|e| parse_err(path, hl, e.to_string()));
    let (d, nv, ntop) = (int(h[1])?, int(h[2])?, int(h[3])?);
    if !(1..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut coords = Vec::with_capacity(nv);
    let mut values = Vec::with_capacity(nv);
    for k in 0..nv {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(path, 0, format!("expected {nv} vertex lines, found {k}")))?;
        let nums: Vec<f64> = l
            .split_whitespace()
            .map(f64::from_str)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(path, ln, e.to_string()))?;
        if nums.len() != 4 {
            return Err(parse_err(path, ln, "vertex line needs `x y z f`"));
        }
        coords.push([nums[0], nums[1], nums[2]]);
        values.push(nums[3]);
    }
    let mut tops = Vec::with_capacity(ntop);
    for k in 0..ntop {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(path, 0, format!("expected {ntop} simplex lines, found {k}")))?;
        let ids: Vec<u32> = l
            .split_whitespace()
            .map(u32::from_str)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(path, ln, e.to_string()))?;
        if ids.len() != d + 1 {
            return Err(parse_err(path, ln, format!("simplex line needs {} vertex ids", d + 1)));
        }
        tops.push(ids);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(path, ln, "trailing content after the last simplex"));
    }
    let complex = Complex::from_explicit(nv, &tops)?.with_coordinates(coords)?;
    Ok((complex, values))
}

pub fn read_tsc(path: &Path) -> Result<(Complex, Vec<f64>)> {
    parse_tsc(&read_text(path)?, path)
}

/// `.tsc` text for a complex and its field. Vertices without coordinates
/// are written at the origin.
pub fn format_tsc(complex: &Complex, values: &[f64]) -> String {
    let d = complex.dim();
    let mut out = format!("tsc {d} {} {}\n", complex.vertex_count(), complex.simplex_count(d));
    for v in 0..complex.vertex_count() as u32 {
        let [x, y, z] = complex.coordinates(v).unwrap_or([0.0; 3]);
        writeln!(out, "{x} {y} {z} {}", values[v as usize]).unwrap();
    }
    for s in complex.simplices(d) {
        let ids: Vec<String> = complex.vertices_of(s).iter().map(u32::to_string).collect();
        writeln!(out, "{}", ids.join(" ")).unwrap();
    }
    out
}

/// Sample type of a raw grid file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dtype {
    U8,
    U16,
    F32,
    F64,
}

impl Dtype {
    pub fn size(self) -> usize {
        match self {
            Dtype::U8 => 1,
            Dtype::U16 => 2,
            Dtype::F32 => 4,
            Dtype::F64 => 8,
        }
    }
}

impl FromStr for Dtype {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u8" => Ok(Dtype::U8),
            "u16" => Ok(Dtype::U16),
            "f32" => Ok(Dtype::F32),
            "f64" => Ok(Dtype::F64),
            _ => Err(Error::InvalidInput(format!("unknown dtype {s:?} (expected u8, u16, f32 or f64)"))),
        }
    }
}

/// Decodes little-endian samples in x-fastest order.
pub fn decode_raw(bytes: &[u8], shape: [usize; 3], dtype: Dtype) -> Result<Vec<f64>> {
    let n: usize = shape.iter().product();
    if bytes.len() != n * dtype.size() {
        return Err(Error::InvalidInput(format!(
            "raw grid {}x{}x{} of {dtype:?} needs {} bytes, file has {}",
            shape[0],
            shape[1],
            shape[2],
            n * dtype.size(),
            bytes.len()
        )));
    }
    let chunks = bytes.chunks_exact(dtype.size());
    Ok(match dtype {
        Dtype::U8 => bytes.iter().map(|&b| b as f64).collect(),
        Dtype::U16 => chunks.map(|c| u16::from_le_bytes([c[0], c[1]]) as f64).collect(),
        Dtype::F32 => chunks
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
            .collect(),
        Dtype::F64 => chunks.map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect(),
    })
}

pub fn read_raw_grid(path: &Path, shape: [usize; 3], dtype: Dtype) -> Result<Vec<f64>> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_raw(&bytes, shape, dtype)
}

/// Point cloud as comma-separated coordinates, one point per line. A first
/// line that does not parse as numbers is taken as a header.
pub fn parse_point_cloud(text: &str, path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = line.split(',').map(|s| s.trim().parse::<f64>()).collect();
        match parsed {
            Ok(p) => {
                if let Some(first) = points.first() {
                    if first.len() != p.len() {
                        return Err(parse_err(path, i + 1, format!("expected {} coordinates, found {}", first.len(), p.len())));
                    }
                }
                points.push(p);
            }
            Err(_) if i == 0 => continue,
            Err(e) => return Err(parse_err(path, i + 1, e.to_string())),
        }
    }
    if points.is_empty() {
        return Err(parse_err(path, 0, "no points"));
    }
    Ok(points)
}

pub fn read_point_cloud(path: &Path) -> Result<Vec<Vec<f64>>> {
    parse_point_cloud(&read_text(path)?, path)
}

/// Parses `16,16,16` (missing trailing extents default to 1).
pub fn parse_dims(s: &str) -> Result<[usize; 3]> {
    let parts: Vec<&str> = s.split([',', 'x']).collect();
    if parts.is_empty() || parts.len() > 3 {
        return Err(Error::InvalidInput(format!("bad dims {s:?}")));
    }
    let mut shape = [1usize; 3];
    for (slot, p) in shape.iter_mut().zip(&parts) {
        *slot = p
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad dims {s:?}")))?;
    }
    Ok(shape)
}
