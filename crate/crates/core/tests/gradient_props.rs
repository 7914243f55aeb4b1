use dms::complex::{Complex, SimplexRef};
use dms::filtration::FiltrationOrder;
use dms::gradient::Gradient;
use dms::synth;
use proptest::prelude::*;

mod common;
use common::check_gradient;

fn criticals(c: &Complex, f: &FiltrationOrder, g: &Gradient) -> Vec<Vec<Vec<u32>>> {
    (0..=c.dim())
        .map(|p| {
            g.critical_simplices(c, f, p)
                .into_iter()
                .map(|(_, s)| {
                    let mut v = c.vertices_of(s).to_vec();
                    v.sort_unstable();
                    v
                })
                .collect()
        })
        .collect()
}

#[test]
fn path_examples() {
    let c = Complex::from_grid([5, 1, 1], 1).unwrap();
    let f = FiltrationOrder::new(&[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
    let g = Gradient::compute(&c, &f).unwrap();
    assert_eq!(g.critical_counts(), vec![1, 0]);

    let c = Complex::from_grid([4, 1, 1], 1).unwrap();
    let f = FiltrationOrder::new(&[0.0, 2.0, 1.0, 3.0]).unwrap();
    let g = Gradient::compute(&c, &f).unwrap();
    assert_eq!(criticals(&c, &f, &g), vec![vec![vec![0], vec![2]], vec![vec![1, 2]]]);
}

#[test]
fn tetrahedron_boundary_criticals() {
    let c = synth::tetrahedron_boundary();
    let f = FiltrationOrder::new(&[0.0, 1.0, 2.0, 3.0]).unwrap();
    let g = Gradient::compute(&c, &f).unwrap();
    assert_eq!(criticals(&c, &f, &g), vec![vec![vec![0]], vec![], vec![vec![1, 2, 3]]]);
}

#[test]
fn elevation_leaves_one_critical_vertex() {
    for (shape, d) in [([9, 1, 1], 1), ([9, 7, 1], 2), ([8, 6, 5], 3)] {
        let c = Complex::from_grid(shape, d).unwrap();
        let f = FiltrationOrder::new(&synth::Field::Elevation.sample(shape)).unwrap();
        let g = Gradient::compute(&c, &f).unwrap();
        let mut expect = vec![0; d + 1];
        expect[0] = 1;
        assert_eq!(g.critical_counts(), expect);
    }
}

#[test]
fn invariants_on_fifty_random_fields() {
    for seed in 0..50u64 {
        let shape = [6, 6, 6];
        let c = Complex::from_grid(shape, 3).unwrap();
        let f = FiltrationOrder::new(&synth::Field::Random { seed }.sample(shape)).unwrap();
        let g = Gradient::compute(&c, &f).unwrap();
        check_gradient(&c, &f, &g).unwrap();
    }
}

#[test]
fn extrema_match_pl_critical_points_in_2d() {
    let shape = [20, 17, 1];
    let c = Complex::from_grid(shape, 2).unwrap();
    for seed in 0..10 {
        let f = FiltrationOrder::new(&synth::Field::Random { seed }.sample(shape)).unwrap();
        let g = Gradient::compute(&c, &f).unwrap();
        let mut minima = 0;
        let mut maxima = 0;
        for v in 0..c.vertex_count() as u32 {
            let link: Vec<u32> = c
                .cofacets(SimplexRef::vertex(v))
                .iter()
                .flat_map(|&e| c.vertices_of(e))
                .filter(|&u| u != v)
                .collect();
            let r = f.rank(v);
            minima += link.iter().all(|&u| f.rank(u) > r) as usize;
            // a boundary vertex has a contractible link, so its full star collapses
            let interior = link.len() == 6;
            maxima += (interior && link.iter().all(|&u| f.rank(u) < r)) as usize;
        }
        let counts = g.critical_counts();
        assert_eq!(counts[0], minima);
        assert_eq!(counts[2], maxima);
    }
}

#[test]
fn smooth_field_has_few_critical_simplices() {
    let shape = [32, 32, 32];
    let c = Complex::from_grid(shape, 3).unwrap();
    let f = FiltrationOrder::new(&synth::Field::Smooth.sample(shape)).unwrap();
    let g = Gradient::compute(&c, &f).unwrap();
    let crit: usize = g.critical_counts().iter().sum();
    let ratio = crit as f64 / c.total_simplex_count() as f64;
    assert!(ratio < 0.05, "{ratio}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn grid_gradients_are_valid(
        dims in (2usize..7, 2usize..7, 1usize..5),
        seed in any::<u64>(),
        levels in 2u32..50,
    ) {
        let shape = [dims.0, dims.1, dims.2];
        let c = Complex::from_grid(shape, synth::grid_dim(shape)).unwrap();
        // quantised values exercise the tie-break
        let vals: Vec<f64> = synth::random_values(c.vertex_count(), seed)
            .iter()
            .map(|x| (x * levels as f64).floor())
            .collect();
        let f = FiltrationOrder::new(&vals).unwrap();
        let g = Gradient::compute(&c, &f).unwrap();
        prop_assert_eq!(check_gradient(&c, &f, &g), Ok(()));
    }

    #[test]
    fn mesh_gradients_are_valid(which in 0usize..5, seed in any::<u64>()) {
        let c = match which {
            0 => synth::sphere(2),
            1 => synth::torus(7, 5).unwrap(),
            2 => synth::ball(4).unwrap(),
            3 => synth::three_sphere(),
            _ => Complex::rips(
                &(0..40).map(|i| {
                    let t = i as f64 * 0.157;
                    vec![t.cos(), t.sin(), 0.1 * (3.0 * t).sin()]
                }).collect::<Vec<_>>(),
                0.45,
                2,
            ).unwrap().0,
        };
        let f = FiltrationOrder::new(&synth::random_values(c.vertex_count(), seed)).unwrap();
        let g = Gradient::compute(&c, &f).unwrap();
        prop_assert_eq!(check_gradient(&c, &f, &g), Ok(()));
    }
}
