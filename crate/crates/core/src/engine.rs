//! Pipeline orchestration: order, gradient, sandwich stages, infinite classes.

use std::time::{Duration, Instant};

use log::warn;
use rustc_hash::FxHashSet;

use crate::complex::{Complex, SimplexRef};
use crate::diagram::{PersistenceDiagram, PersistencePair};
use crate::error::{Deadline, Error, Result};
use crate::filtration::{FiltrationOrder, SimplexKey};
use crate::generators::{extract_generators, Generator};
use crate::gradient::Gradient;
use crate::paircore::{pair_critical_simplices, pair_simplices_oracle, PropagationOptions};
use crate::sandwich::{build_d0_graph, build_dual_graph, compute_d0, compute_dtop};

pub use crate::sandwich::BoundaryMode;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Gradient-based stratified computation.
    #[default]
    Dms,
    /// Chain-based pairing of every simplex.
    PairSimplices,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dms => "dms",
            Algorithm::PairSimplices => "pairsimplices",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dms" => Ok(Algorithm::Dms),
            "pairsimplices" | "pair-simplices" | "oracle" => Ok(Algorithm::PairSimplices),
            other => Err(format!("unknown algorithm '{other}'")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub threads: usize,
    pub boundary_mode: BoundaryMode,
    pub retain_generators: bool,
    /// Record per-stage timings (always measured; this flag only marks intent).
    pub bench: bool,
    pub timeout: Option<Duration>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Dms,
            threads: 1,
            boundary_mode: BoundaryMode::default(),
            retain_generators: false,
            bench: false,
            timeout: None,
        }
    }
}

/// Wall-clock seconds per pipeline stage.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageTimings {
    pub init: f64,
    pub gradient: f64,
    pub sort: f64,
    pub d0_dtop: f64,
    pub d1: f64,
    pub total: f64,
}

impl StageTimings {
    pub fn rows(&self) -> [(&'static str, f64); 6] {
        [
            ("init", self.init),
            ("gradient", self.gradient),
            ("sort", self.sort),
            ("d0_dtop", self.d0_dtop),
            ("d1", self.d1),
            ("total", self.total),
        ]
    }

    /// `stage,seconds` CSV.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("stage,seconds\n");
        for (name, t) in self.rows() {
            s.push_str(&format!("{name},{t}\n"));
        }
        s
    }
}

/// A creator/destroyer pair of simplices; `death` is `None` for infinite classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexPair {
    pub dim: usize,
    pub birth: SimplexRef,
    pub death: Option<SimplexRef>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    /// Diagram without pairs whose simplices share their highest vertex.
    pub diagram: PersistenceDiagram,
    /// Every pair produced, including zero-persistence ones.
    pub pairs: Vec<SimplexPair>,
    pub generators: Option<Vec<Generator>>,
    pub timings: StageTimings,
    /// Number of critical simplices per dimension (empty for the oracle).
    pub critical_counts: Vec<usize>,
}

impl RunOutput {
    pub fn generators(&self) -> Result<&[Generator]> {
        self.generators.as_deref().ok_or(Error::GeneratorsNotRetained)
    }
}

/// Computes the persistence diagram of the lower-star filtration of `values`.
pub fn compute(complex: &Complex, values: &[f64], config: &RunConfig) -> Result<RunOutput> {
    if config.threads == 0 {
        return Err(Error::InvalidInput("thread count must be at least 1".into()));
    }
    if complex.dim() > 3 || complex.dim() == 0 {
        return Err(Error::UnsupportedDimension(complex.dim()));
    }
    if values.len() != complex.vertex_count() {
        return Err(Error::FieldSize {
            expected: complex.vertex_count(),
            got: values.len(),
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let deadline = config.timeout.map(Deadline::after).unwrap_or_default();
    pool.install(|| match config.algorithm {
        Algorithm::Dms => run_dms(complex, values, config, deadline),
        Algorithm::PairSimplices => run_oracle(complex, values, config, deadline),
    })
}

fn boundary_mode_applies(complex: &Complex, mode: BoundaryMode, dual: bool) -> bool {
    if !dual {
        return false;
    }
    let has = complex.has_boundary();
    if !has && mode == BoundaryMode::VirtualMax {
        warn!("virtual maximum requested on a closed complex; boundary mode has no effect");
    }
    has
}

fn run_dms(complex: &Complex, values: &[f64], config: &RunConfig, deadline: Deadline) -> Result<RunOutput> {
    let t_start = Instant::now();
    let d = complex.dim();
    let order = FiltrationOrder::new(values)?;
    let dual = complex.supports_dual();
    boundary_mode_applies(complex, config.boundary_mode, dual);
    let mut timings = StageTimings {
        init: t_start.elapsed().as_secs_f64(),
        ..Default::default()
    };

    let t = Instant::now();
    let gradient = Gradient::compute_with_deadline(complex, &order, deadline)?;
    timings.gradient = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let crit: Vec<Vec<(SimplexKey, SimplexRef)>> = (0..=d)
        .map(|p| gradient.critical_simplices(complex, &order, p))
        .collect();
    timings.sort = t.elapsed().as_secs_f64();
    deadline.check()?;

    let t = Instant::now();
    let (d0, dtop) = if dual {
        let (a, b) = rayon::join(
            || build_d0_graph(complex, &gradient, &crit[0], &crit[1], deadline).map(|g| compute_d0(&g)),
            || {
                build_dual_graph(complex, &gradient, &crit[d], &crit[d - 1], deadline)
                    .map(|g| compute_dtop(&g, config.boundary_mode))
            },
        );
        (a?, Some(b?))
    } else {
        (
            compute_d0(&build_d0_graph(complex, &gradient, &crit[0], &crit[1], deadline)?),
            None,
        )
    };
    timings.d0_dtop = t.elapsed().as_secs_f64();
    deadline.check()?;

    let mut pairs: Vec<SimplexPair> = Vec::new();
    // simplices consumed by some pair (or by the boundary), per dimension
    let mut used: Vec<FxHashSet<u32>> = vec![FxHashSet::default(); d + 1];
    let record = |pairs: &mut Vec<SimplexPair>, used: &mut Vec<FxHashSet<u32>>, b: SimplexRef, s: SimplexRef| {
        used[b.dim as usize].insert(b.id);
        used[s.dim as usize].insert(s.id);
        pairs.push(SimplexPair {
            dim: b.dim as usize,
            birth: b,
            death: Some(s),
        });
    };
    for &(v, e) in &d0.pairs {
        record(&mut pairs, &mut used, v, e);
    }
    let d0_edges: FxHashSet<u32> = d0.pairs.iter().map(|&(_, e)| e.id).collect();
    if let Some(dt) = &dtop {
        for &(s, m) in &dt.pairs {
            if d == 2 && d0_edges.contains(&s.id) {
                return Err(Error::invariant(s, "edge paired in both D0 and D1"));
            }
            record(&mut pairs, &mut used, s, m);
        }
        // ignore mode: the global maximum is accounted for by the infinite
        // minimum, its boundary saddle by nothing
        if let Some((s, m)) = dt.boundary_pair {
            used[d - 1].insert(s.id);
            used[d].insert(m.id);
        }
    }

    let t = Instant::now();
    let mut cycles: Vec<((SimplexRef, SimplexRef), Vec<u32>)> = Vec::new();
    let options = PropagationOptions {
        retain_cycles: config.retain_generators,
        deadline,
        ..Default::default()
    };
    if dual {
        if d == 3 {
            let sources: Vec<_> = crit[2]
                .iter()
                .copied()
                .filter(|(_, s)| !used[2].contains(&s.id))
                .collect();
            let blocked = |id: u32| d0_edges.contains(&id);
            let res = pair_critical_simplices(complex, &order, &gradient, &sources, &blocked, &options)?;
            for (i, &(e, t)) in res.pairs.iter().enumerate() {
                record(&mut pairs, &mut used, e, t);
                if config.retain_generators {
                    cycles.push(((e, t), res.cycles[i].clone()));
                }
            }
        } else if d == 2 && config.retain_generators {
            // cycles only; the pairs themselves come from the dual sweep
            let blocked = |id: u32| d0_edges.contains(&id);
            let res = pair_critical_simplices(complex, &order, &gradient, &crit[2], &blocked, &options)?;
            cycles.extend(res.pairs.into_iter().zip(res.cycles));
        }
    } else {
        // stage p pairs critical p-simplices with critical (p+1)-simplices
        let mut destroyers: FxHashSet<u32> = d0_edges.clone();
        for p in 1..d {
            let sources: Vec<_> = crit[p + 1].clone();
            let blocked = |id: u32| destroyers.contains(&id);
            let res = pair_critical_simplices(complex, &order, &gradient, &sources, &blocked, &options)?;
            for (i, &(a, b)) in res.pairs.iter().enumerate() {
                record(&mut pairs, &mut used, a, b);
                if config.retain_generators && p == 1 {
                    cycles.push(((a, b), res.cycles[i].clone()));
                }
            }
            destroyers = res.pairs.iter().map(|&(_, b)| b.id).collect();
        }
    }
    timings.d1 = t.elapsed().as_secs_f64();

    for (p, c) in crit.iter().enumerate() {
        for &(_, s) in c {
            if !used[p].contains(&s.id) {
                pairs.push(SimplexPair {
                    dim: p,
                    birth: s,
                    death: None,
                });
            }
        }
    }
    let critical_counts = crit.iter().map(Vec::len).collect();
    finish(complex, &order, pairs, cycles, config, timings, t_start, critical_counts)
}

fn run_oracle(complex: &Complex, values: &[f64], config: &RunConfig, deadline: Deadline) -> Result<RunOutput> {
    let t_start = Instant::now();
    let d = complex.dim();
    let order = FiltrationOrder::new(values)?;
    let dual = complex.supports_dual();
    let drop_global = boundary_mode_applies(complex, config.boundary_mode, dual)
        && config.boundary_mode == BoundaryMode::Ignore;
    let mut timings = StageTimings {
        init: t_start.elapsed().as_secs_f64(),
        ..Default::default()
    };
    let out = pair_simplices_oracle(complex, &order, config.retain_generators, deadline)?;
    let mut pairs: Vec<SimplexPair> = out
        .pairs
        .iter()
        .map(|&(b, s)| SimplexPair {
            dim: b.dim as usize,
            birth: b,
            death: Some(s),
        })
        .chain(out.unpaired.iter().map(|&s| SimplexPair {
            dim: s.dim as usize,
            birth: s,
            death: None,
        }))
        .collect();
    if drop_global {
        // the highest top simplex that is a death of a non-zero pair or an
        // infinite creator; if it is a death, that pair goes
        let zero = |p: &SimplexPair| p.death.is_some_and(|s| order.max_vertex(complex, p.birth) == order.max_vertex(complex, s));
        let top = pairs
            .iter()
            .enumerate()
            .filter(|(_, p)| (p.dim == d - 1 && p.death.is_some() && !zero(p)) || (p.dim == d && p.death.is_none()))
            .max_by_key(|(_, p)| order.key(complex, p.death.unwrap_or(p.birth)))
            .map(|(i, p)| (i, p.death.is_some()));
        if let Some((i, true)) = top {
            pairs.remove(i);
        }
    }
    timings.d1 = 0.0;
    finish(complex, &order, pairs, out.cycles, config, timings, t_start, Vec::new())
}

#[allow(clippy::too_many_arguments)]
fn finish(
    complex: &Complex,
    order: &FiltrationOrder,
    mut pairs: Vec<SimplexPair>,
    cycles: Vec<((SimplexRef, SimplexRef), Vec<u32>)>,
    config: &RunConfig,
    mut timings: StageTimings,
    t_start: Instant,
    critical_counts: Vec<usize>,
) -> Result<RunOutput> {
    pairs.sort_unstable();
    let max_value = order.max_value();
    let rows: Vec<PersistencePair> = pairs
        .iter()
        .filter(|p| match p.death {
            Some(s) => order.max_vertex(complex, p.birth) != order.max_vertex(complex, s),
            None => true,
        })
        .map(|p| PersistencePair {
            dim: p.dim,
            birth: order.simplex_value(complex, p.birth),
            death: p.death.map_or(max_value, |s| order.simplex_value(complex, s)),
            finite: p.death.is_some(),
            birth_vertices: complex.vertices_of(p.birth),
            death_vertices: p.death.map(|s| complex.vertices_of(s)).unwrap_or_default(),
        })
        .collect();
    let diagram = PersistenceDiagram::new(rows, max_value)
        .with_provenance("algorithm", config.algorithm.name())
        .with_provenance("boundary", config.boundary_mode.name());
    let generators = config
        .retain_generators
        .then(|| extract_generators(complex, order, &diagram, &cycles));
    timings.total = t_start.elapsed().as_secs_f64();
    Ok(RunOutput {
        diagram,
        pairs,
        generators,
        timings,
        critical_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_diagram() {
        let c = Complex::from_grid([4, 1, 1], 1).unwrap();
        let out = compute(&c, &[0.0, 2.0, 1.0, 3.0], &RunConfig::default()).unwrap();
        let d0: Vec<_> = out.diagram.slice(0).collect();
        assert_eq!(d0.len(), 2);
        assert_eq!((d0[0].birth, d0[0].death, d0[0].finite), (0.0, 3.0, false));
        assert_eq!((d0[1].birth, d0[1].death, d0[1].finite), (1.0, 2.0, true));
    }

    #[test]
    fn rejects_bad_config() {
        let c = Complex::from_grid([4, 1, 1], 1).unwrap();
        let cfg = RunConfig {
            threads: 0,
            ..Default::default()
        };
        assert!(compute(&c, &[0.0; 4], &cfg).is_err());
        assert!(matches!(
            compute(&c, &[0.0; 3], &RunConfig::default()),
            Err(Error::FieldSize { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn generators_need_retention() {
        let c = Complex::from_grid([4, 1, 1], 1).unwrap();
        let out = compute(&c, &[0.0, 2.0, 1.0, 3.0], &RunConfig::default()).unwrap();
        assert!(matches!(out.generators(), Err(Error::GeneratorsNotRetained)));
    }
}
