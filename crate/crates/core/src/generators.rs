//! Representative 1-cycles of the 1-dimensional pairs.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use crate::complex::{Complex, SimplexRef, VertexList};
use crate::diagram::PersistenceDiagram;
use crate::filtration::FiltrationOrder;

/// A mod-2 edge cycle attached to one row of a diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    /// Index of the pair in [`PersistenceDiagram::pairs`].
    pub pair_id: usize,
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
    pub finite: bool,
    /// Edges as sorted vertex pairs, in increasing order.
    pub edges: Vec<[u32; 2]>,
}

impl Generator {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    /// Every vertex touches an even number of edges.
    pub fn is_mod2_cycle(&self) -> bool {
        let mut degree: FxHashMap<u32, u32> = FxHashMap::default();
        for e in &self.edges {
            for &v in e {
                *degree.entry(v).or_default() += 1;
            }
        }
        degree.values().all(|d| d % 2 == 0)
    }

    /// The edges form one connected piece.
    pub fn is_connected(&self) -> bool {
        let Some(first) = self.edges.first() else {
            return false;
        };
        let mut adj: FxHashMap<u32, Vec<u32>> = FxHashMap::default();
        for &[a, b] in &self.edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![first[0]];
        seen.insert(first[0]);
        while let Some(v) = stack.pop() {
            for &w in &adj[&v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == adj.len()
    }

    /// Connected and every vertex has degree exactly two.
    pub fn is_simple_loop(&self) -> bool {
        let mut degree: FxHashMap<u32, u32> = FxHashMap::default();
        for e in &self.edges {
            for &v in e {
                *degree.entry(v).or_default() += 1;
            }
        }
        degree.values().all(|&d| d == 2) && self.is_connected()
    }
}

/// Builds one generator per 1-dimensional row of `diagram`.
///
/// Finite rows take the cycle recorded for their `(edge, triangle)` pair in
/// `cycles`. Infinite rows get the birth edge closed by a shortest path through
/// strictly earlier edges.
pub fn extract_generators(
    complex: &Complex,
    order: &FiltrationOrder,
    diagram: &PersistenceDiagram,
    cycles: &[((SimplexRef, SimplexRef), Vec<u32>)],
) -> Vec<Generator> {
    let mut by_pair: FxHashMap<(VertexList, VertexList), &[u32]> = FxHashMap::default();
    for ((b, d), edges) in cycles {
        by_pair.insert((complex.vertices_of(*b), complex.vertices_of(*d)), edges);
    }
    let mut out = Vec::new();
    for (pair_id, p) in diagram.pairs().iter().enumerate() {
        if p.dim != 1 {
            continue;
        }
        let edges: Vec<[u32; 2]> = if p.finite {
            match by_pair.get(&(p.birth_vertices.clone(), p.death_vertices.clone())) {
                Some(ids) => ids
                    .iter()
                    .map(|&id| {
                        let vs = complex.vertices_of(SimplexRef::new(1, id));
                        [vs[0], vs[1]]
                    })
                    .collect(),
                None => continue,
            }
        } else {
            match complex.find_simplex(&p.birth_vertices) {
                Some(e) => closing_path(complex, order, e),
                None => continue,
            }
        };
        let mut edges = edges;
        edges.sort_unstable();
        out.push(Generator {
            pair_id,
            dim: 1,
            birth: p.birth,
            death: p.death,
            finite: p.finite,
            edges,
        });
    }
    out
}

/// `e` plus a shortest path between its endpoints using only edges that
/// precede `e` in the filtration.
fn closing_path(complex: &Complex, order: &FiltrationOrder, e: SimplexRef) -> Vec<[u32; 2]> {
    let key = order.key(complex, e);
    let vs = complex.vertices_of(e);
    let (src, dst) = (vs[0], vs[1]);
    let mut parent: FxHashMap<u32, u32> = FxHashMap::default();
    parent.insert(src, src);
    let mut queue = VecDeque::from([src]);
    let mut star = Vec::new();
    'bfs: while let Some(v) = queue.pop_front() {
        star.clear();
        complex.star_into(v, &mut star);
        for &s in star.iter().filter(|s| s.dim == 1) {
            if order.key(complex, s) >= key {
                continue;
            }
            let ws = complex.vertices_of(s);
            let w = if ws[0] == v { ws[1] } else { ws[0] };
            if parent.contains_key(&w) {
                continue;
            }
            parent.insert(w, v);
            if w == dst {
                break 'bfs;
            }
            queue.push_back(w);
        }
    }
    let mut edges = vec![[src.min(dst), src.max(dst)]];
    if !parent.contains_key(&dst) {
        return edges;
    }
    let mut v = dst;
    while v != src {
        let u = parent[&v];
        edges.push([u.min(v), u.max(v)]);
        v = u;
    }
    edges
}
