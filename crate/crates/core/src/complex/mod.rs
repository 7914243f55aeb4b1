//! Simplicial complexes behind one traversal interface.
//!
//! Regular grids are triangulated implicitly (Freudenthal, 6 tetrahedra per
//! cube) and answer traversal queries arithmetically; explicit meshes and Rips
//! complexes materialize their facet/cofacet tables once at construction.

mod grid;
mod mesh;
mod rips;

use arrayvec::ArrayVec;

pub use grid::{GridComplex, StarCell, StarTemplate};
pub use mesh::MeshComplex;

use crate::error::{Error, Result};
use crate::filtration::FiltrationOrder;

/// A dimension-tagged handle to one simplex; `id` is unique within `dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexRef {
    pub dim: u8,
    pub id: u32,
}

impl SimplexRef {
    #[inline]
    pub fn new(dim: usize, id: u32) -> Self {
        Self { dim: dim as u8, id }
    }

    #[inline]
    pub fn vertex(id: u32) -> Self {
        Self { dim: 0, id }
    }
}

pub type VertexList = ArrayVec<u32, 4>;
pub type FacetList = ArrayVec<SimplexRef, 4>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexKind {
    ImplicitGrid,
    Explicit,
    Rips,
}

#[derive(Clone, Debug)]
enum Repr {
    Grid(GridComplex),
    Mesh(MeshComplex),
}

#[derive(Clone, Debug)]
pub struct Complex {
    repr: Repr,
    kind: ComplexKind,
}

macro_rules! dispatch {
    ($self:expr, $c:ident => $body:expr) => {
        match &$self.repr {
            Repr::Grid($c) => $body,
            Repr::Mesh($c) => $body,
        }
    };
}

impl Complex {
    /// Implicit Freudenthal triangulation of a `shape` grid of dimension `dim`.
    /// Axes beyond `dim` must have extent 1.
    pub fn from_grid(shape: [usize; 3], dim: usize) -> Result<Self> {
        Ok(Self {
            repr: Repr::Grid(GridComplex::new(shape, dim)?),
            kind: ComplexKind::ImplicitGrid,
        })
    }

    /// Explicit complex from homogeneous top simplices. Rejects disconnected input.
    pub fn from_explicit(vertex_count: usize, tops: &[Vec<u32>]) -> Result<Self> {
        Self::from_mesh(
            MeshComplex::from_top_simplices(vertex_count, tops)?,
            ComplexKind::Explicit,
        )
    }

    pub(crate) fn from_mesh(mesh: MeshComplex, kind: ComplexKind) -> Result<Self> {
        let c = Self {
            repr: Repr::Mesh(mesh),
            kind,
        };
        match c.component_count() {
            1 => Ok(c),
            n => Err(Error::Disconnected(n)),
        }
    }

    /// Attaches vertex coordinates (explicit meshes only; grids derive theirs).
    pub fn with_coordinates(self, coords: Vec<[f64; 3]>) -> Result<Self> {
        match self.repr {
            Repr::Mesh(m) => {
                if coords.len() != m.vertex_count() {
                    return Err(Error::FieldSize {
                        expected: m.vertex_count(),
                        got: coords.len(),
                    });
                }
                Ok(Self {
                    repr: Repr::Mesh(m.with_coordinates(coords)),
                    kind: self.kind,
                })
            }
            Repr::Grid(_) => Ok(self),
        }
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        dispatch!(self, c => c.dim())
    }

    pub fn vertex_count(&self) -> usize {
        dispatch!(self, c => c.vertex_count())
    }

    pub fn simplex_count(&self, p: usize) -> usize {
        dispatch!(self, c => c.simplex_count(p))
    }

    pub fn total_simplex_count(&self) -> usize {
        (0..=self.dim()).map(|p| self.simplex_count(p)).sum()
    }

    pub fn grid_shape(&self) -> Option<[usize; 3]> {
        match &self.repr {
            Repr::Grid(g) => Some(g.shape()),
            Repr::Mesh(_) => None,
        }
    }

    pub fn as_grid(&self) -> Option<&GridComplex> {
        match &self.repr {
            Repr::Grid(g) => Some(g),
            Repr::Mesh(_) => None,
        }
    }

    pub fn coordinates(&self, v: u32) -> Option<[f64; 3]> {
        match &self.repr {
            Repr::Grid(g) => {
                let c = g.vertex_coords(v);
                Some([c[0] as f64, c[1] as f64, c[2] as f64])
            }
            Repr::Mesh(m) => m.coordinates(v),
        }
    }

    pub fn simplices(&self, p: usize) -> impl Iterator<Item = SimplexRef> {
        (0..self.simplex_count(p) as u32).map(move |id| SimplexRef::new(p, id))
    }

    /// Vertex ids of `s` in increasing order.
    #[inline]
    pub fn vertices_of(&self, s: SimplexRef) -> VertexList {
        dispatch!(self, c => c.vertices_of(s))
    }

    #[inline]
    pub fn facets(&self, s: SimplexRef) -> FacetList {
        dispatch!(self, c => c.facets(s))
    }

    /// Appends the cofacets of `s` to `out`.
    #[inline]
    pub fn cofacets_into(&self, s: SimplexRef, out: &mut Vec<SimplexRef>) {
        dispatch!(self, c => c.cofacets_into(s, out))
    }

    pub fn cofacets(&self, s: SimplexRef) -> Vec<SimplexRef> {
        let mut out = Vec::new();
        self.cofacets_into(s, &mut out);
        out
    }

    /// Appends every simplex of dimension ≥ 1 containing vertex `v`.
    #[inline]
    pub fn star_into(&self, v: u32, out: &mut Vec<SimplexRef>) {
        dispatch!(self, c => c.star_into(v, out))
    }

    /// The vertex `v` and every simplex whose highest-ranked vertex is `v`.
    pub fn lower_star(&self, v: u32, order: &FiltrationOrder) -> Vec<SimplexRef> {
        let rank = order.rank(v);
        let mut star = Vec::new();
        self.star_into(v, &mut star);
        let mut out = vec![SimplexRef::vertex(v)];
        out.extend(star.into_iter().filter(|&s| {
            self.vertices_of(s).iter().all(|&u| order.rank(u) <= rank)
        }));
        out
    }

    pub fn find_simplex(&self, vertices: &[u32]) -> Option<SimplexRef> {
        dispatch!(self, c => c.find_simplex(vertices))
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim())
            .map(|p| {
                let n = self.simplex_count(p) as i64;
                if p % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// Number of connected components of the 1-skeleton.
    pub fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn root(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        let mut components = n;
        for e in self.simplices(1) {
            let vs = self.vertices_of(e);
            let (a, b) = (root(&mut parent, vs[0]), root(&mut parent, vs[1]));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
                components -= 1;
            }
        }
        components
    }

    /// True when every `(d-1)`-simplex has at most two cofacets, so that the
    /// top-dimensional pairs can be read off the dual graph.
    pub fn supports_dual(&self) -> bool {
        let d = self.dim();
        if d < 2 {
            return false;
        }
        if self.kind == ComplexKind::ImplicitGrid {
            return true;
        }
        let mut buf = Vec::new();
        self.simplices(d - 1).all(|s| {
            buf.clear();
            self.cofacets_into(s, &mut buf);
            buf.len() <= 2
        })
    }

    /// True when some `(d-1)`-simplex has exactly one cofacet.
    pub fn has_boundary(&self) -> bool {
        match &self.repr {
            Repr::Grid(_) => self.dim() >= 1,
            Repr::Mesh(_) => !self.boundary_facets().is_empty(),
        }
    }

    /// Ids of the `(d-1)`-simplices with exactly one cofacet.
    pub fn boundary_facets(&self) -> Vec<u32> {
        let d = self.dim();
        if d == 0 {
            return Vec::new();
        }
        let mut buf = Vec::new();
        self.simplices(d - 1)
            .filter(|&s| {
                buf.clear();
                self.cofacets_into(s, &mut buf);
                buf.len() == 1
            })
            .map(|s| s.id)
            .collect()
    }

    /// Explicit mesh of a 3D grid with the alternating five-tetrahedra
    /// subdivision of every cube.
    pub fn five_tet_grid(shape: [usize; 3]) -> Result<Self> {
        for (axis, &extent) in shape.iter().enumerate() {
            if extent < 2 {
                return Err(Error::DegenerateExtent { axis, extent });
            }
        }
        let [lx, ly, lz] = shape;
        let idx = |x: usize, y: usize, z: usize| (x + lx * (y + ly * z)) as u32;
        let mut tops = Vec::new();
        for z in 0..lz - 1 {
            for y in 0..ly - 1 {
                for x in 0..lx - 1 {
                    let c = |m: u8| {
                        idx(
                            x + (m & 1) as usize,
                            y + ((m >> 1) & 1) as usize,
                            z + ((m >> 2) & 1) as usize,
                        )
                    };
                    // corner masks; the central tetrahedron uses one parity class
                    let (center, others): ([u8; 4], [u8; 4]) = if (x + y + z) % 2 == 0 {
                        ([0b000, 0b011, 0b101, 0b110], [0b001, 0b010, 0b100, 0b111])
                    } else {
                        ([0b001, 0b010, 0b100, 0b111], [0b000, 0b011, 0b101, 0b110])
                    };
                    tops.push(center.iter().map(|&m| c(m)).collect::<Vec<_>>());
                    for &corner in &others {
                        // the three center corners adjacent to `corner` (differ by one bit)
                        let mut t = vec![c(corner)];
                        t.extend(
                            center
                                .iter()
                                .filter(|&&m| (m ^ corner).count_ones() == 1)
                                .map(|&m| c(m)),
                        );
                        tops.push(t);
                    }
                }
            }
        }
        let coords = (0..lz)
            .flat_map(|z| (0..ly).flat_map(move |y| (0..lx).map(move |x| [x as f64, y as f64, z as f64])))
            .collect();
        let c = Self::from_explicit(lx * ly * lz, &tops)?;
        c.with_coordinates(coords)
    }
}
