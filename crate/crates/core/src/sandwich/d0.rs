use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{elder_sweep, ArcOutcome, GraphNode, SaddleGraph};
use crate::complex::{Complex, SimplexRef};
use crate::error::{Deadline, Error, Result};
use crate::filtration::SimplexKey;
use crate::gradient::{Gradient, Pairing};

/// Links every critical edge to the critical vertices reached by descending
/// from its two endpoints along vertex-edge pairs.
pub fn build_d0_graph(
    complex: &Complex,
    gradient: &Gradient,
    minima: &[(SimplexKey, SimplexRef)],
    saddles: &[(SimplexKey, SimplexRef)],
    deadline: Deadline,
) -> Result<SaddleGraph> {
    let index: FxHashMap<u32, u32> = minima
        .iter()
        .enumerate()
        .map(|(i, &(_, s))| (s.id, i as u32))
        .collect();
    let limit = complex.vertex_count();
    let trace = |mut v: u32| -> Result<GraphNode> {
        for _ in 0..=limit {
            match gradient.pairing(SimplexRef::vertex(v)) {
                Pairing::Critical => {
                    return index
                        .get(&v)
                        .map(|&i| GraphNode::Extremum(i))
                        .ok_or_else(|| Error::invariant(SimplexRef::vertex(v), "critical vertex missing from minima"));
                }
                Pairing::Up(e) => {
                    let vs = complex.vertices_of(e);
                    v = if vs[0] == v { vs[1] } else { vs[0] };
                }
                Pairing::Down(_) => unreachable!("vertices have no facets"),
            }
        }
        Err(Error::invariant(SimplexRef::vertex(v), "cycle in vertex-edge path"))
    };
    deadline.check()?;
    let arcs = saddles
        .par_iter()
        .map(|&(_, e)| {
            let vs = complex.vertices_of(e);
            Ok((e, trace(vs[0])?, trace(vs[1])?))
        })
        .collect::<Result<Vec<_>>>()?;
    deadline.check()?;
    Ok(SaddleGraph {
        nodes: minima.iter().map(|&(_, s)| s).collect(),
        arcs,
    })
}

#[derive(Clone, Debug, Default)]
pub struct D0Result {
    /// `(minimum, edge)` pairs.
    pub pairs: Vec<(SimplexRef, SimplexRef)>,
    /// Critical edges whose ends were already connected.
    pub cycle_edges: Vec<SimplexRef>,
    /// Minima that never died.
    pub survivors: Vec<SimplexRef>,
}

/// Elder-rule sweep of a `D0` graph in increasing saddle order.
pub fn compute_d0(graph: &SaddleGraph) -> D0Result {
    let ends: Vec<(u32, u32)> = graph
        .arcs
        .iter()
        .map(|&(_, a, b)| match (a, b) {
            (GraphNode::Extremum(a), GraphNode::Extremum(b)) => (a, b),
            _ => unreachable!("D0 graphs have no boundary node"),
        })
        .collect();
    // minima are sorted by filtration order, so a lower index is older
    let outcomes = elder_sweep(graph.nodes.len(), &ends, |a, b| a < b);
    let mut out = D0Result::default();
    let mut died = vec![false; graph.nodes.len()];
    for (&(e, _, _), outcome) in graph.arcs.iter().zip(outcomes) {
        match outcome {
            ArcOutcome::Merge { died: m, .. } => {
                died[m as usize] = true;
                out.pairs.push((graph.nodes[m as usize], e));
            }
            ArcOutcome::Cycle => out.cycle_edges.push(e),
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
