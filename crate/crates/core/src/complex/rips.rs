//! Vietoris-Rips complexes of small point clouds, with the per-vertex diameter
//! field used to drive the filtration.

use super::mesh::MeshComplex;
use super::{Complex, ComplexKind};
use crate::error::{Error, Result};

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Edges and triangles of the Rips complex at scale `epsilon` together with
/// the vertex field. Disconnected results are not rejected here.
fn build(points: &[Vec<f64>], epsilon: f64, max_dim: usize) -> Result<(Vec<Vec<u32>>, Vec<f64>)> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "Rips complex needs at least 3 points, got {}",
            points.len()
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(1..=2).contains(&max_dim) {
        return Err(Error::UnsupportedDimension(max_dim));
    }
    let ambient = points[0].len();
    if points.iter().any(|p| p.len() != ambient) {
        return Err(Error::InvalidInput("points have mixed dimensions".into()));
    }
    let n = points.len();
    let mut adj = vec![Vec::new(); n];
    let mut simplices = Vec::new();
    let mut edge_len_sum = vec![0.0; n];
    let mut degree = vec![0usize; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = dist(&points[i], &points[j]);
            if d < epsilon {
                adj[i].push((j, d));
                simplices.push(vec![i as u32, j as u32]);
                edge_len_sum[i] += d;
                edge_len_sum[j] += d;
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    let mut tri_sum = vec![0.0; n];
    let mut tri_count = vec![0usize; n];
    if max_dim >= 2 {
        for i in 0..n {
            for (a, &(j, dij)) in adj[i].iter().enumerate() {
                for &(k, dik) in &adj[i][a + 1..] {
                    if let Some(&(_, djk)) = adj[j].iter().find(|&&(x, _)| x == k) {
                        let diameter = dij.max(dik).max(djk);
                        simplices.push(vec![i as u32, j as u32, k as u32]);
                        for v in [i, j, k] {
                            tri_sum[v] += diameter;
                            tri_count[v] += 1;
                        }
                    }
                }
            }
        }
    }
    // Vertices without triangles fall back to their mean incident edge length.
    let field = (0..n)
        .map(|v| {
            if tri_count[v] > 0 {
                tri_sum[v] / tri_count[v] as f64
            } else if degree[v] > 0 {
                edge_len_sum[v] / degree[v] as f64
            } else {
                0.0
            }
        })
        .collect();
    Ok((simplices, field))
}

impl Complex {
    /// Rips complex of `points` at scale `epsilon` (edges and, for
    /// `max_dim = 2`, triangles of diameter below `epsilon`), returned with
    /// the per-vertex average adjacent-triangle diameter.
    pub fn rips(points: &[Vec<f64>], epsilon: f64, max_dim: usize) -> Result<(Complex, Vec<f64>)> {
        let (simplices, field) = build(points, epsilon, max_dim)?;
        let mesh = MeshComplex::from_simplices(points.len(), &simplices)?;
        let mesh = mesh.with_coordinates(points.iter().map(|p| first3(p)).collect());
        let complex = Complex::from_mesh(mesh, ComplexKind::Rips)?;
        Ok((complex, field))
    }

    /// Like [`Complex::rips`], but restricted to the largest connected
    /// component. Also returns the original indices of the kept points.
    pub fn rips_largest_component(
        points: &[Vec<f64>],
        epsilon: f64,
        max_dim: usize,
    ) -> Result<(Complex, Vec<f64>, Vec<usize>)> {
        let (simplices, _) = build(points, epsilon, max_dim)?;
        let n = points.len();
        let mut label: Vec<usize> = (0..n).collect();
        fn root(label: &mut [usize], mut x: usize) -> usize {
            while label[x] != x {
                label[x] = label[label[x]];
                x = label[x];
            }
            x
        }
        for s in simplices.iter().filter(|s| s.len() == 2) {
            let (a, b) = (root(&mut label, s[0] as usize), root(&mut label, s[1] as usize));
            label[a.max(b)] = a.min(b);
        }
        let mut sizes = vec![0usize; n];
        for v in 0..n {
            sizes[root(&mut label, v)] += 1;
        }
        let best = (0..n).max_by_key(|&r| (sizes[r], std::cmp::Reverse(r))).unwrap();
        let kept: Vec<usize> = (0..n).filter(|&v| root(&mut label, v) == best).collect();
        let subset: Vec<Vec<f64>> = kept.iter().map(|&i| points[i].clone()).collect();
        let (complex, field) = Complex::rips(&subset, epsilon, max_dim)?;
        Ok((complex, field, kept))
    }
}

fn first3(p: &[f64]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (o, x) in out.iter_mut().zip(p) {
        *o = *x;
    }
    out
}
