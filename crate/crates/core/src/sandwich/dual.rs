use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{elder_sweep, ArcOutcome, BoundaryMode, GraphNode, SaddleGraph};
use crate::complex::{Complex, SimplexRef};
use crate::error::{Deadline, Error, Result};
use crate::filtration::SimplexKey;
use crate::gradient::{Gradient, Pairing};

/// Links every critical `(d-1)`-simplex to the critical `d`-simplices reached
/// through its cofacets by following `(d-1, d)` gradient pairs backwards.
/// A path leaving through a simplex with a single cofacet reaches the boundary.
///
/// Requires every `(d-1)`-simplex to have at most two cofacets. Saddles with no
/// cofacet get no arc.
pub fn build_dual_graph(
    complex: &Complex,
    gradient: &Gradient,
    maxima: &[(SimplexKey, SimplexRef)],
    saddles: &[(SimplexKey, SimplexRef)],
    deadline: Deadline,
) -> Result<SaddleGraph> {
    let d = complex.dim();
    let index: FxHashMap<u32, u32> = maxima
        .iter()
        .enumerate()
        .map(|(i, &(_, s))| (s.id, i as u32))
        .collect();
    let limit = complex.simplex_count(d);

    let trace = |mut from: SimplexRef, mut t: SimplexRef, buf: &mut Vec<SimplexRef>| -> Result<GraphNode> {
        for _ in 0..=limit {
            match gradient.pairing(t) {
                Pairing::Critical => {
                    return index
                        .get(&t.id)
                        .map(|&i| GraphNode::Extremum(i))
                        .ok_or_else(|| Error::invariant(t, "critical simplex missing from maxima"));
                }
                Pairing::Down(s) => {
                    buf.clear();
                    complex.cofacets_into(s, buf);
                    if buf.len() > 2 {
                        return Err(Error::invariant(s, "more than two cofacets on a dual path"));
                    }
                    match buf.iter().find(|&&c| c != t) {
                        Some(&next) => {
                            from = s;
                            t = next;
                        }
                        None => return Ok(GraphNode::Boundary),
                    }
                }
                Pairing::Up(_) => unreachable!("top simplices have no cofacets"),
            }
        }
        Err(Error::invariant(from, "cycle in dual gradient path"))
    };

    deadline.check()?;
    let mut arcs = saddles
        .par_iter()
        .map_init(Vec::new, |buf, &(_, s)| {
            let cofacets = complex.cofacets(s);
            match cofacets.as_slice() {
                [] => Ok(None),
                [t] => Ok(Some((s, trace(s, *t, buf)?, GraphNode::Boundary))),
                [a, b] => Ok(Some((s, trace(s, *a, buf)?, trace(s, *b, buf)?))),
                _ => Err(Error::invariant(s, "more than two cofacets")),
            }
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    // swept in decreasing filtration order
    arcs.reverse();
    deadline.check()?;
    Ok(SaddleGraph {
        nodes: maxima.iter().map(|&(_, s)| s).collect(),
        arcs,
    })
}

#[derive(Clone, Debug, Default)]
pub struct DtopResult {
    /// `(saddle, maximum)` pairs.
    pub pairs: Vec<(SimplexRef, SimplexRef)>,
    /// Saddle at which the boundary node died and the maximum it merged
    /// into (ignore mode only).
    pub boundary_pair: Option<(SimplexRef, SimplexRef)>,
    /// Saddles whose two ends were already connected.
    pub cycle_saddles: Vec<SimplexRef>,
    /// Maxima that never died.
    pub survivors: Vec<SimplexRef>,
    /// Whether any arc reached the boundary.
    pub touches_boundary: bool,
}

/// Elder-rule sweep of a dual graph in decreasing saddle order, where a higher
/// maximum is older.
pub fn compute_dtop(graph: &SaddleGraph, mode: BoundaryMode) -> DtopResult {
    let n = graph.nodes.len() as u32;
    let boundary = n;
    // real node i has age 2i+1; the boundary sits just below the highest
    // maximum in ignore mode and above everything otherwise
    let boundary_age = match mode {
        BoundaryMode::VirtualMax => u64::MAX,
        BoundaryMode::Ignore => 2 * (n as u64).saturating_sub(1),
    };
    let age = |x: u32| if x == boundary { boundary_age } else { 2 * x as u64 + 1 };
    let node = |g: GraphNode| match g {
        GraphNode::Extremum(i) => i,
        GraphNode::Boundary => boundary,
    };
    let ends: Vec<(u32, u32)> = graph.arcs.iter().map(|&(_, a, b)| (node(a), node(b))).collect();
    let outcomes = elder_sweep(n as usize + 1, &ends, |a, b| age(a) > age(b));

    let mut out = DtopResult {
        touches_boundary: ends.iter().any(|&(a, b)| a == boundary || b == boundary),
        ..Default::default()
    };
    let mut died = vec![false; n as usize + 1];
    for (&(s, _, _), outcome) in graph.arcs.iter().zip(outcomes) {
        match outcome {
            ArcOutcome::Merge { died: m, survivor } => {
                died[m as usize] = true;
                if m == boundary {
                    out.boundary_pair = Some((s, graph.nodes[survivor as usize]));
                } else {
                    out.pairs.push((s, graph.nodes[m as usize]));
                }
            }
            ArcOutcome::Cycle => out.cycle_saddles.push(s),
        }
    }
    out.survivors = graph
        .nodes
        .iter()
        .zip(&died)
        .filter(|(_, &d)| !d)
        .map(|(&s, _)| s)
        .collect();
    out
}
