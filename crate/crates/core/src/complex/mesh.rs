//! Explicit simplicial complexes with materialized facet/cofacet tables.

use std::collections::HashMap;

use super::{FacetList, SimplexRef, VertexList};
use crate::error::{Error, Result};

type Tuple = [u32; 4];

#[derive(Clone, Debug, Default)]
struct Level {
    /// Sorted vertex tuples, padded with `u32::MAX`.
    verts: Vec<Tuple>,
    facets: Vec<[u32; 4]>,
    cofacet_start: Vec<u32>,
    cofacets: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct MeshComplex {
    dim: usize,
    vertex_count: usize,
    levels: Vec<Level>,
    lookup: HashMap<Tuple, SimplexRef>,
    /// Per-vertex edge cofacets are `levels[0]` cofacets; stars are walked upward.
    coords: Option<Vec<[f64; 3]>>,
}

fn pad(vs: &[u32]) -> Tuple {
    let mut t = [u32::MAX; 4];
    t[..vs.len()].copy_from_slice(vs);
    t
}

impl MeshComplex {
    /// Builds the closure of `simplices` (any mix of dimensions ≤ 3).
    pub(crate) fn from_simplices(vertex_count: usize, simplices: &[Vec<u32>]) -> Result<Self> {
        let mut sets: Vec<Vec<Tuple>> = vec![Vec::new(); 4];
        sets[0] = (0..vertex_count as u32).map(|v| pad(&[v])).collect();
        let mut dim = 0;
        for s in simplices {
            if s.is_empty() || s.len() > 4 {
                return Err(Error::UnsupportedDimension(s.len().saturating_sub(1)));
            }
            let mut sorted = s.clone();
            sorted.sort_unstable();
            for &v in &sorted {
                if v as usize >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        id: v,
                        count: vertex_count,
                    });
                }
            }
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex(s.clone()));
            }
            dim = dim.max(sorted.len() - 1);
            let k = sorted.len();
            for subset in 1u32..(1 << k) {
                let face: Vec<u32> = (0..k)
                    .filter(|i| subset & (1 << i) != 0)
                    .map(|i| sorted[i])
                    .collect();
                if face.len() > 1 {
                    sets[face.len() - 1].push(pad(&face));
                }
            }
        }
        for set in sets.iter_mut() {
            set.sort_unstable();
            set.dedup();
        }
        sets.truncate(dim + 1);

        let mut lookup = HashMap::new();
        for (p, set) in sets.iter().enumerate() {
            for (id, t) in set.iter().enumerate() {
                lookup.insert(*t, SimplexRef::new(p, id as u32));
            }
        }

        let mut levels: Vec<Level> = sets
            .into_iter()
            .map(|verts| Level {
                verts,
                ..Default::default()
            })
            .collect();
        for p in 1..=dim {
            let facets: Vec<[u32; 4]> = levels[p]
                .verts
                .iter()
                .map(|t| {
                    let mut f = [u32::MAX; 4];
                    for skip in 0..=p {
                        let face: Vec<u32> = (0..=p).filter(|&i| i != skip).map(|i| t[i]).collect();
                        f[skip] = lookup[&pad(&face)].id;
                    }
                    f
                })
                .collect();
            let lower = levels[p - 1].verts.len();
            let mut degree = vec![0u32; lower + 1];
            for f in &facets {
                for &x in &f[..=p] {
                    degree[x as usize + 1] += 1;
                }
            }
            for i in 0..lower {
                degree[i + 1] += degree[i];
            }
            let mut fill = degree.clone();
            let mut cof = vec![0u32; degree[lower] as usize];
            for (id, f) in facets.iter().enumerate() {
                for &x in &f[..=p] {
                    cof[fill[x as usize] as usize] = id as u32;
                    fill[x as usize] += 1;
                }
            }
            levels[p].facets = facets;
            levels[p - 1].cofacet_start = degree;
            levels[p - 1].cofacets = cof;
        }
        let top = levels.len() - 1;
        levels[top].cofacet_start = vec![0; levels[top].verts.len() + 1];

        Ok(Self {
            dim,
            vertex_count,
            levels,
            lookup,
            coords: None,
        })
    }

    /// Builds a pure complex from its top simplices.
    pub fn from_top_simplices(vertex_count: usize, tops: &[Vec<u32>]) -> Result<Self> {
        let Some(first) = tops.first() else {
            return Err(Error::InvalidInput("no top simplices".into()));
        };
        let mut seen = std::collections::HashSet::new();
        for t in tops {
            if t.len() != first.len() {
                return Err(Error::MixedDimension(first.len() - 1, t.len().saturating_sub(1)));
            }
            let mut key = t.clone();
            key.sort_unstable();
            if !seen.insert(key) {
                return Err(Error::DuplicateSimplex(t.clone()));
            }
        }
        Self::from_simplices(vertex_count, tops)
    }

    pub fn with_coordinates(mut self, coords: Vec<[f64; 3]>) -> Self {
        assert_eq!(coords.len(), self.vertex_count);
        self.coords = Some(coords);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn simplex_count(&self, p: usize) -> usize {
        self.levels.get(p).map_or(0, |l| l.verts.len())
    }

    pub fn coordinates(&self, v: u32) -> Option<[f64; 3]> {
        self.coords.as_ref().map(|c| c[v as usize])
    }

    pub fn vertices_of(&self, s: SimplexRef) -> VertexList {
        let t = &self.levels[s.dim as usize].verts[s.id as usize];
        t[..=s.dim as usize].iter().copied().collect()
    }

    pub fn facets(&self, s: SimplexRef) -> FacetList {
        let p = s.dim as usize;
        if p == 0 {
            return FacetList::new();
        }
        self.levels[p].facets[s.id as usize][..=p]
            .iter()
            .map(|&id| SimplexRef::new(p - 1, id))
            .collect()
    }

    pub fn cofacets_into(&self, s: SimplexRef, out: &mut Vec<SimplexRef>) {
        let level = &self.levels[s.dim as usize];
        let (a, b) = (
            level.cofacet_start[s.id as usize] as usize,
            level.cofacet_start[s.id as usize + 1] as usize,
        );
        out.extend(
            level.cofacets[a..b]
                .iter()
                .map(|&id| SimplexRef::new(s.dim as usize + 1, id)),
        );
    }

    pub fn star_into(&self, v: u32, out: &mut Vec<SimplexRef>) {
        let start = out.len();
        self.cofacets_into(SimplexRef::vertex(v), out);
        let mut lo = start;
        for _ in 2..=self.dim {
            let hi = out.len();
            let mut next = Vec::new();
            for i in lo..hi {
                self.cofacets_into(out[i], &mut next);
            }
            next.sort_unstable();
            next.dedup();
            out.extend(next);
            lo = hi;
        }
    }

    pub fn find_simplex(&self, vertices: &[u32]) -> Option<SimplexRef> {
        if vertices.is_empty() || vertices.len() > 4 {
            return None;
        }
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        self.lookup.get(&pad(&sorted)).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_materializes_every_face_once() {
        let m = MeshComplex::from_top_simplices(4, &[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(
            (0..=3).map(|p| m.simplex_count(p)).collect::<Vec<_>>(),
            vec![4, 6, 4, 1]
        );
    }

    #[test]
    fn faces_are_sorted_lexicographically() {
        let m = MeshComplex::from_top_simplices(3, &[vec![2, 0, 1]]).unwrap();
        let edges: Vec<_> = (0..3)
            .map(|id| m.vertices_of(SimplexRef::new(1, id)).to_vec())
            .collect();
        assert_eq!(edges, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn rejects_bad_tops() {
        assert!(matches!(
            MeshComplex::from_top_simplices(3, &[vec![0, 1, 2], vec![2, 1, 0]]),
            Err(Error::DuplicateSimplex(_))
        ));
        assert!(matches!(
            MeshComplex::from_top_simplices(3, &[vec![0, 1, 5]]),
            Err(Error::VertexOutOfRange { id: 5, .. })
        ));
        assert!(matches!(
            MeshComplex::from_top_simplices(3, &[vec![0, 1, 1]]),
            Err(Error::RepeatedVertex(_))
        ));
        assert!(matches!(
            MeshComplex::from_top_simplices(4, &[vec![0, 1, 2], vec![2, 3]]),
            Err(Error::MixedDimension(2, 1))
        ));
    }
}
