mod common;

use std::collections::BTreeSet;

use common::{betti_mod2, run};
use dms::complex::{Complex, SimplexRef};
use dms::engine::{Algorithm, BoundaryMode};
use dms::error::Deadline;
use dms::filtration::FiltrationOrder;
use dms::gradient::{Gradient, Pairing};
use dms::sandwich::{build_d0_graph, GraphNode};
use dms::synth;
use proptest::prelude::*;

type Row = (usize, Vec<u32>, Vec<u32>);

/// Plain union-find kept separate from the library's.
struct Dsu(Vec<u32>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n as u32).collect())
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            x = self.0[x as usize];
        }
        x
    }
}

fn finite_rows(out: &dms::engine::RunOutput, dim: usize) -> BTreeSet<Row> {
    out.diagram
        .slice(dim)
        .filter(|p| p.finite)
        .map(|p| (p.dim, p.birth_vertices.to_vec(), p.death_vertices.to_vec()))
        .collect()
}

/// Arcs of the `D0` graph as `(edge, {minimum, minimum})`.
fn d0_arcs(c: &Complex, f: &FiltrationOrder, g: &Gradient) -> BTreeSet<(u32, [u32; 2])> {
    let minima = g.critical_simplices(c, f, 0);
    let saddles = g.critical_simplices(c, f, 1);
    let graph = build_d0_graph(c, g, &minima, &saddles, Deadline::none()).unwrap();
    let node = |n: GraphNode| match n {
        GraphNode::Extremum(i) => graph.nodes[i as usize].id,
        GraphNode::Boundary => panic!("boundary node in D0 graph"),
    };
    graph
        .arcs
        .iter()
        .map(|&(e, a, b)| {
            let (a, b) = (node(a), node(b));
            (e.id, [a.min(b), a.max(b)])
        })
        .collect()
}

/// Same arcs from a rank-order sweep: a regular vertex inherits the minimum of
/// the lower endpoint of its paired edge.
fn naive_d0_arcs(c: &Complex, f: &FiltrationOrder, g: &Gradient) -> BTreeSet<(u32, [u32; 2])> {
    let n = c.vertex_count();
    let mut term = vec![u32::MAX; n];
    for r in 0..n as u32 {
        let v = f.vertex_at(r);
        term[v as usize] = match g.pairing(SimplexRef::vertex(v)) {
            Pairing::Critical => v,
            Pairing::Up(e) => {
                let u = c.vertices_of(e).iter().copied().find(|&u| u != v).unwrap();
                assert!(f.rank(u) < r);
                term[u as usize]
            }
            Pairing::Down(_) => unreachable!(),
        };
    }
    c.simplices(1)
        .filter(|&e| g.is_critical(e))
        .map(|e| {
            let vs = c.vertices_of(e);
            let (a, b) = (term[vs[0] as usize], term[vs[1] as usize]);
            (e.id, [a.min(b), a.max(b)])
        })
        .collect()
}

/// Elder-rule sweep over every edge of the 1-skeleton.
fn kruskal_d0(c: &Complex, f: &FiltrationOrder) -> BTreeSet<Row> {
    let mut edges: Vec<_> = c.simplices(1).map(|e| (f.key(c, e), e)).collect();
    edges.sort_unstable();
    let mut uf = Dsu::new(c.vertex_count());
    // oldest vertex of each component, stored at the root
    let mut oldest: Vec<u32> = (0..c.vertex_count() as u32).collect();
    let mut out = BTreeSet::new();
    for (_, e) in edges {
        let vs = c.vertices_of(e);
        let (ra, rb) = (uf.find(vs[0]), uf.find(vs[1]));
        if ra == rb {
            continue;
        }
        let (oa, ob) = (oldest[ra as usize], oldest[rb as usize]);
        let (elder, younger) = if f.rank(oa) < f.rank(ob) { (oa, ob) } else { (ob, oa) };
        uf.0[rb as usize] = ra;
        oldest[ra as usize] = elder;
        if f.max_vertex(c, e) != younger {
            out.insert((0, vec![younger], c.vertices_of(e).to_vec()));
        }
    }
    out
}

/// Elder-rule sweep over the dual graph of a 2D complex in decreasing order,
/// with the boundary as an infinitely old node. Gives the exact `D1` pairs.
fn dual_sweep_d1(c: &Complex, f: &FiltrationOrder) -> BTreeSet<Row> {
    let nt = c.simplex_count(2);
    let boundary = nt as u32;
    let mut edges: Vec<_> = c.simplices(1).map(|e| (f.key(c, e), e)).collect();
    edges.sort_unstable_by(|a, b| b.cmp(a));
    let mut uf = Dsu::new(nt + 1);
    let mut oldest: Vec<u32> = (0..=nt as u32).collect();
    let age = |t: u32| {
        if t == boundary {
            u128::MAX
        } else {
            f.key(c, SimplexRef::new(2, t))
        }
    };
    let mut out = BTreeSet::new();
    for (_, e) in edges {
        let cof = c.cofacets(e);
        let a = cof[0].id;
        let b = cof.get(1).map_or(boundary, |t| t.id);
        let (ra, rb) = (uf.find(a), uf.find(b));
        if ra == rb {
            continue;
        }
        let (oa, ob) = (oldest[ra as usize], oldest[rb as usize]);
        let (elder, younger) = if age(oa) > age(ob) { (oa, ob) } else { (ob, oa) };
        uf.0[rb as usize] = ra;
        oldest[ra as usize] = elder;
        let t = SimplexRef::new(2, younger);
        if f.max_vertex(c, e) != f.max_vertex(c, t) {
            out.insert((1, c.vertices_of(e).to_vec(), c.vertices_of(t).to_vec()));
        }
    }
    out
}

#[test]
fn path_graph_arc() {
    let c = Complex::from_grid([3, 1, 1], 1).unwrap();
    let f = FiltrationOrder::new(&[0.0, 2.0, 1.0]).unwrap();
    let g = Gradient::compute(&c, &f).unwrap();
    let e12 = c.find_simplex(&[1, 2]).unwrap();
    assert_eq!(d0_arcs(&c, &f, &g), BTreeSet::from([(e12.id, [0, 2])]));
}

#[test]
fn elevation_graph_is_empty() {
    let shape = [7, 6, 5];
    let c = Complex::from_grid(shape, 3).unwrap();
    let f = FiltrationOrder::new(&synth::Field::Elevation.sample(shape)).unwrap();
    let g = Gradient::compute(&c, &f).unwrap();
    assert!(d0_arcs(&c, &f, &g).is_empty());
    let out = run(&c, f.values(), Algorithm::Dms, BoundaryMode::VirtualMax);
    assert_eq!(out.diagram.len(), 1);
    assert_eq!(out.diagram.betti(3), vec![1, 0, 0, 0]);
}

#[test]
fn d0_graph_matches_naive_tracer() {
    let mut cases: Vec<(Complex, u64)> = Vec::new();
    for seed in 0..8 {
        cases.push((Complex::from_grid([12, 11, 1], 2).unwrap(), seed));
        cases.push((Complex::from_grid([6, 5, 7], 3).unwrap(), seed));
    }
    cases.push((synth::torus(8, 6).unwrap(), 3));
    cases.push((synth::sphere(2), 4));
    for (c, seed) in cases {
        let f = FiltrationOrder::new(&synth::random_values(c.vertex_count(), seed)).unwrap();
        let g = Gradient::compute(&c, &f).unwrap();
        assert_eq!(d0_arcs(&c, &f, &g), naive_d0_arcs(&c, &f, &g));
    }
}

#[test]
fn d0_matches_full_edge_sweep() {
    for seed in 0..10 {
        for shape in [[40, 1, 1], [9, 8, 1], [5, 6, 4]] {
            let c = Complex::from_grid(shape, synth::grid_dim(shape)).unwrap();
            let v = synth::Field::Random { seed }.sample(shape);
            let f = FiltrationOrder::new(&v).unwrap();
            let out = run(&c, &v, Algorithm::Dms, BoundaryMode::Ignore);
            assert_eq!(finite_rows(&out, 0), kruskal_d0(&c, &f));
        }
    }
}

#[test]
fn virtual_max_matches_dual_sweep_and_ignore_drops_one_pair() {
    for seed in 0..20 {
        let shape = [11, 9, 1];
        let c = Complex::from_grid(shape, 2).unwrap();
        let v = synth::Field::Random { seed }.sample(shape);
        let f = FiltrationOrder::new(&v).unwrap();
        let exact = run(&c, &v, Algorithm::Dms, BoundaryMode::VirtualMax);
        let expect = dual_sweep_d1(&c, &f);
        assert_eq!(finite_rows(&exact, 1), expect);

        let ignore = run(&c, &v, Algorithm::Dms, BoundaryMode::Ignore);
        let mut trimmed = expect.clone();
        let last = trimmed
            .iter()
            .max_by_key(|r| f.key_of_vertices(&r.2))
            .cloned()
            .unwrap();
        trimmed.remove(&last);
        assert_eq!(finite_rows(&ignore, 1), trimmed);
        assert_eq!(finite_rows(&ignore, 0), finite_rows(&exact, 0));
        assert!(ignore.diagram.slice(2).next().is_none());
    }
}

#[test]
fn closed_surfaces_ignore_boundary_mode() {
    for c in [synth::sphere(2), synth::torus(7, 6).unwrap()] {
        let v = synth::random_values(c.vertex_count(), 11);
        let a = run(&c, &v, Algorithm::Dms, BoundaryMode::VirtualMax);
        let b = run(&c, &v, Algorithm::Dms, BoundaryMode::Ignore);
        assert_eq!(a.diagram.pairs(), b.diagram.pairs());
    }
}

#[test]
fn betti_numbers_of_meshes() {
    let square = [vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
    let cases = [
        (synth::sphere(2), vec![1, 0, 1]),
        (synth::torus(8, 5).unwrap(), vec![1, 2, 1]),
        (synth::ball(4).unwrap(), vec![1, 0, 0, 0]),
        (synth::three_sphere(), vec![1, 0, 0, 1]),
        (Complex::rips(&square, 1.2, 2).unwrap().0, vec![1, 1]),
        (synth::tetrahedron_boundary(), vec![1, 0, 1]),
    ];
    for (c, expect) in cases {
        assert_eq!(betti_mod2(&c), expect);
        for seed in 0..3 {
            let v = synth::random_values(c.vertex_count(), seed);
            for alg in [Algorithm::Dms, Algorithm::PairSimplices] {
                let out = run(&c, &v, alg, BoundaryMode::Ignore);
                assert_eq!(out.diagram.betti(c.dim()), expect, "{alg:?}");
            }
        }
    }
}

#[test]
fn tetrahedron_infinite_classes() {
    let c = synth::tetrahedron_boundary();
    let out = run(&c, &[0.0, 1.0, 2.0, 3.0], Algorithm::Dms, BoundaryMode::Ignore);
    let dims: BTreeSet<usize> = out.diagram.pairs().iter().filter(|p| !p.finite).map(|p| p.dim).collect();
    assert_eq!(dims, BTreeSet::from([0, 2]));
    assert_eq!(out.diagram.infinite_births(2), vec![3.0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Death is never before birth and finite pairs are non-trivial.
    #[test]
    fn pairs_are_ordered(seed in any::<u64>(), dims in (2usize..9, 2usize..9, 1usize..5)) {
        let shape = [dims.0, dims.1, dims.2];
        let c = Complex::from_grid(shape, synth::grid_dim(shape)).unwrap();
        let v: Vec<f64> = synth::random_values(c.vertex_count(), seed).iter().map(|x| (x * 6.0).round()).collect();
        let f = FiltrationOrder::new(&v).unwrap();
        let out = run(&c, &v, Algorithm::Dms, BoundaryMode::VirtualMax);
        for p in &out.pairs {
            if let Some(d) = p.death {
                prop_assert!(f.key(&c, p.birth) < f.key(&c, d));
                prop_assert_eq!(d.dim, p.birth.dim + 1);
            }
        }
        for row in out.diagram.pairs() {
            prop_assert!(row.death >= row.birth);
        }
        prop_assert_eq!(out.diagram.betti(c.dim()), betti_mod2(&c));
    }
}
