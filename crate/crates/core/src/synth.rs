//! Synthetic scalar fields and small reference meshes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::Complex;
use crate::error::{Error, Result};

/// Named grid field recipes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Field {
    /// The x coordinate.
    Elevation,
    /// Seeded uniform noise in `[0, 1)`.
    Random { seed: u64 },
    /// Sum of three sinusoids, one per axis.
    Smooth,
    /// Distance to a horizontal circle centred in the grid.
    Circle,
}

impl std::str::FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "elevation" => Ok(Field::Elevation),
            "random" => Ok(Field::Random { seed: 0 }),
            "smooth" => Ok(Field::Smooth),
            "circle" => Ok(Field::Circle),
            other => Err(format!("unknown synthetic field '{other}'")),
        }
    }
}

impl Field {
    pub fn name(&self) -> &'static str {
        match self {
            Field::Elevation => "elevation",
            Field::Random { .. } => "random",
            Field::Smooth => "smooth",
            Field::Circle => "circle",
        }
    }

    /// Samples the field on every vertex of a `shape` grid (x fastest).
    pub fn sample(&self, shape: [usize; 3]) -> Vec<f64> {
        let n = shape.iter().product::<usize>();
        match *self {
            Field::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n).map(|_| rng.gen::<f64>()).collect()
            }
            _ => grid_points(shape).map(|p| self.at(p, shape)).collect(),
        }
    }

    fn at(&self, [x, y, z]: [f64; 3], shape: [usize; 3]) -> f64 {
        let l = shape.map(|s| s as f64);
        match self {
            Field::Elevation => x,
            Field::Smooth => {
                let tau = std::f64::consts::TAU;
                (tau * 1.5 * x / l[0]).sin()
                    + (tau * 1.25 * y / l[1] + 0.7).sin()
                    + (tau * 1.75 * z / l[2] + 1.9).sin()
            }
            Field::Circle => {
                let c = l.map(|v| (v - 1.0) / 2.0);
                let radius = 0.375 * l[0].min(l[1]);
                let rho = ((x - c[0]).powi(2) + (y - c[1]).powi(2)).sqrt();
                ((rho - radius).powi(2) + (z - c[2]).powi(2)).sqrt()
            }
            Field::Random { .. } => unreachable!(),
        }
    }
}

fn grid_points(shape: [usize; 3]) -> impl Iterator<Item = [f64; 3]> {
    let [lx, ly, lz] = shape;
    (0..lz).flat_map(move |z| (0..ly).flat_map(move |y| (0..lx).map(move |x| [x as f64, y as f64, z as f64])))
}

/// Dimension of a grid shape: the number of axes with extent above 1.
pub fn grid_dim(shape: [usize; 3]) -> usize {
    shape.iter().rposition(|&s| s > 1).map_or(0, |i| i + 1)
}

/// An isotropic Gaussian bump on an `n x n` grid spanning `[-1, 1]^2`,
/// centred at `(0.35, 0.15)` rotated by `theta` about the origin. Only the
/// part of the terrain cut by the square changes with `theta`.
pub fn rotated_bump(n: usize, theta: f64) -> Result<(Complex, Vec<f64>)> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidInput("bump grid size must be odd and at least 3".into()));
    }
    let complex = Complex::from_grid([n, n, 1], 2)?;
    let (s, c) = theta.sin_cos();
    let (cx, cy) = (c * 0.35 - s * 0.15, s * 0.35 + c * 0.15);
    let h = 2.0 / (n - 1) as f64;
    let values = grid_points([n, n, 1])
        .map(|[i, j, _]| {
            let (x, y) = (-1.0 + i * h - cx, -1.0 + j * h - cy);
            (-(x * x + y * y) / 0.25).exp()
        })
        .collect();
    Ok((complex, values))
}

/// Boundary of a tetrahedron: the smallest triangulated 2-sphere.
pub fn tetrahedron_boundary() -> Complex {
    let tops = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
    let coords = vec![[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
    Complex::from_explicit(4, &tops)
        .and_then(|c| c.with_coordinates(coords))
        .expect("valid mesh")
}

/// Boundary of a 4-simplex: a closed 3-manifold.
pub fn three_sphere() -> Complex {
    let tops: Vec<Vec<u32>> = (0..5u32)
        .map(|skip| (0..5).filter(|&v| v != skip).collect())
        .collect();
    Complex::from_explicit(5, &tops).expect("valid mesh")
}

/// Octahedron with each triangle split `level` times into four, projected to
/// the unit sphere.
pub fn sphere(level: usize) -> Complex {
    let mut coords: Vec<[f64; 3]> = vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let mut tris: Vec<[u32; 3]> = vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [2, 0, 5],
        [1, 2, 5],
        [3, 1, 5],
        [0, 3, 5],
    ];
    for _ in 0..level {
        let mut mid = std::collections::HashMap::new();
        let mut midpoint = |a: u32, b: u32, coords: &mut Vec<[f64; 3]>| -> u32 {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (p, q) = (coords[a as usize], coords[b as usize]);
                let m = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0, (p[2] + q[2]) / 2.0];
                let r = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
                coords.push([m[0] / r, m[1] / r, m[2] / r]);
                coords.len() as u32 - 1
            })
        };
        let mut next = Vec::with_capacity(tris.len() * 4);
        for [a, b, c] in tris {
            let ab = midpoint(a, b, &mut coords);
            let bc = midpoint(b, c, &mut coords);
            let ca = midpoint(c, a, &mut coords);
            next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        tris = next;
    }
    let tops: Vec<Vec<u32>> = tris.iter().map(|t| t.to_vec()).collect();
    Complex::from_explicit(coords.len(), &tops)
        .and_then(|c| c.with_coordinates(coords))
        .expect("valid mesh")
}

/// Triangulated torus from an `n x m` periodic grid (`n, m >= 3`), embedded
/// with radii 2 and 1.
pub fn torus(n: usize, m: usize) -> Result<Complex> {
    if n < 3 || m < 3 {
        return Err(Error::InvalidInput("torus needs at least 3 x 3 vertices".into()));
    }
    let id = |i: usize, j: usize| ((i % n) + n * (j % m)) as u32;
    let mut tops = Vec::with_capacity(2 * n * m);
    for j in 0..m {
        for i in 0..n {
            tops.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            tops.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    let tau = std::f64::consts::TAU;
    let coords = (0..m)
        .flat_map(|j| {
            (0..n).map(move |i| {
                let (u, v) = (tau * i as f64 / n as f64, tau * j as f64 / m as f64);
                [(2.0 + v.cos()) * u.cos(), (2.0 + v.cos()) * u.sin(), v.sin()]
            })
        })
        .collect();
    Complex::from_explicit(n * m, &tops)?.with_coordinates(coords)
}

/// Explicit ball: a `n^3` grid cut into five tetrahedra per cube.
pub fn ball(n: usize) -> Result<Complex> {
    Complex::five_tet_grid([n, n, n])
}

/// Seeded uniform values, one per vertex.
pub fn random_values(n: usize, seed: u64) -> Vec<f64> {
    Field::Random { seed }.sample([n, 1, 1])
}

/// Height (z, then y, then x) of each vertex of a complex with coordinates.
pub fn height_values(complex: &Complex) -> Vec<f64> {
    (0..complex.vertex_count() as u32)
        .map(|v| {
            let p = complex.coordinates(v).unwrap_or([0.0; 3]);
            p[2] + 1e-3 * p[1] + 1e-6 * p[0]
        })
        .collect()
}
