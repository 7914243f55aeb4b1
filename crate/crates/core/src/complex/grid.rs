//! Implicit Freudenthal triangulation of a regular grid.
//!
//! Every simplex is a chain `0 = m0 ⊂ m1 ⊂ … ⊂ mp` of axis bitmasks anchored
//! at a base vertex, so a simplex is identified by its chain type and base
//! coordinates. Ids are `type_offset[type] + row_major(base)` over the box of
//! valid bases of that type, which keeps them contiguous per dimension.
//! Facets, cofacets and stars are answered from per-type tables; no
//! connectivity is stored.

use std::collections::HashMap;

use arrayvec::ArrayVec;

use super::{FacetList, SimplexRef, VertexList};
use crate::error::{Error, Result};

type Chain = ArrayVec<u8, 4>;

#[derive(Clone, Debug)]
struct CellType {
    masks: Chain,
    extent: [usize; 3],
    /// (facet type, mask added to the base)
    facets: ArrayVec<(u16, u8), 4>,
    /// (cofacet type, mask subtracted from the base)
    cofacets: Vec<(u16, u8)>,
}

/// One simplex of the star of a vertex, relative to that vertex.
#[derive(Clone, Debug)]
pub struct StarCell {
    pub dim: u8,
    ty: u16,
    vmask: u8,
    /// Bit `k` set when template neighbor `k` is a vertex of the cell.
    pub nbrs: u16,
    /// Template indices of the facets that contain the center vertex.
    pub facets: ArrayVec<u8, 4>,
    /// Template indices of the cofacets.
    pub cofacets: ArrayVec<u8, 8>,
    vertices: Vec<[i8; 3]>,
}

/// Star of a grid vertex with neighbors given as coordinate offsets.
#[derive(Clone, Debug)]
pub struct StarTemplate {
    pub offsets: Vec<[i8; 3]>,
    /// Vertex index difference of each neighbor.
    pub deltas: Vec<i64>,
    /// Cells ordered by dimension.
    pub cells: Vec<StarCell>,
}

#[derive(Clone, Debug)]
pub struct GridComplex {
    shape: [usize; 3],
    dim: usize,
    types: [Vec<CellType>; 4],
    type_offset: [Vec<u32>; 4],
    /// Per dimension: (type, mask of the star vertex within the chain).
    star: [Vec<(u16, u8)>; 4],
}

fn chains(full: u8, len: usize) -> Vec<Chain> {
    fn extend(cur: &mut Chain, full: u8, len: usize, out: &mut Vec<Chain>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let last = *cur.last().unwrap();
        for next in 1..=full {
            if next & !full != 0 || next & last != last || next == last {
                continue;
            }
            cur.push(next);
            extend(cur, full, len, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = Chain::new();
    cur.push(0);
    extend(&mut cur, full, len, &mut out);
    out
}

impl GridComplex {
    pub fn new(shape: [usize; 3], dim: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut shape = shape;
        for (axis, extent) in shape.iter_mut().enumerate() {
            if axis < dim {
                if *extent < 2 {
                    return Err(Error::DegenerateExtent {
                        axis,
                        extent: *extent,
                    });
                }
            } else {
                if *extent > 1 {
                    return Err(Error::InvalidInput(format!(
                        "grid extent {extent} along axis {axis} exceeds dimension {dim}"
                    )));
                }
                *extent = 1;
            }
        }
        let total: usize = shape.iter().product();
        if total >= (1usize << 30) {
            return Err(Error::InvalidInput(format!("grid of {total} vertices is too large")));
        }

        let full: u8 = (1u8 << dim) - 1;
        let mut types: [Vec<CellType>; 4] = Default::default();
        let mut lookup: [HashMap<Chain, u16>; 4] = Default::default();
        for p in 0..=dim {
            for masks in chains(full, p + 1) {
                let top = *masks.last().unwrap();
                let mut extent = [1usize; 3];
                for (axis, e) in extent.iter_mut().enumerate() {
                    *e = shape[axis] - ((top >> axis) & 1) as usize;
                }
                lookup[p].insert(masks.clone(), types[p].len() as u16);
                types[p].push(CellType {
                    masks,
                    extent,
                    facets: ArrayVec::new(),
                    cofacets: Vec::new(),
                });
            }
        }

        for p in 1..=dim {
            for t in 0..types[p].len() {
                let masks = types[p][t].masks.clone();
                let mut facets = ArrayVec::new();
                for skip in 0..masks.len() {
                    let (shift, sub): (u8, Chain) = if skip == 0 {
                        let m1 = masks[1];
                        (m1, masks[1..].iter().map(|m| m ^ m1).collect())
                    } else {
                        (
                            0,
                            masks
                                .iter()
                                .enumerate()
                                .filter(|&(i, _)| i != skip)
                                .map(|(_, m)| *m)
                                .collect(),
                        )
                    };
                    facets.push((lookup[p - 1][&sub], shift));
                }
                types[p][t].facets = facets;
            }
        }
        for p in 0..dim {
            for t in 0..types[p].len() {
                let masks = types[p][t].masks.clone();
                let top = *masks.last().unwrap();
                let mut cofacets = Vec::new();
                // new vertex in front: base moves down by c
                for c in 1..=full {
                    if c & top != 0 {
                        continue;
                    }
                    let mut sup = Chain::new();
                    sup.push(0);
                    sup.extend(masks.iter().map(|m| m | c));
                    cofacets.push((lookup[p + 1][&sup], c));
                }
                // new vertex between two chain entries, or after the last one
                for i in 0..masks.len() {
                    let lo = masks[i];
                    let hi = masks.get(i + 1).copied().unwrap_or(full);
                    for x in 1..=full {
                        let strictly_inside = x & lo == lo && x != lo && x & hi == x;
                        let below_hi = if i + 1 < masks.len() { x != hi } else { true };
                        if !strictly_inside || !below_hi {
                            continue;
                        }
                        let mut sup = masks.clone();
                        sup.insert(i + 1, x);
                        cofacets.push((lookup[p + 1][&sup], 0));
                    }
                }
                types[p][t].cofacets = cofacets;
            }
        }

        let mut star: [Vec<(u16, u8)>; 4] = Default::default();
        for p in 1..=dim {
            for (t, ty) in types[p].iter().enumerate() {
                for &m in &ty.masks {
                    star[p].push((t as u16, m));
                }
            }
        }

        let mut type_offset: [Vec<u32>; 4] = Default::default();
        for p in 0..=dim {
            let mut acc = 0u64;
            type_offset[p].push(0);
            for ty in &types[p] {
                acc += ty.extent.iter().product::<usize>() as u64;
                type_offset[p].push(acc as u32);
            }
        }

        Ok(Self {
            shape,
            dim,
            types,
            type_offset,
            star,
        })
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn simplex_count(&self, p: usize) -> usize {
        if p > self.dim {
            return 0;
        }
        *self.type_offset[p].last().unwrap() as usize
    }

    /// Number of distinct chain types per dimension (edges: 7 in 3D, ...).
    pub fn type_count(&self, p: usize) -> usize {
        if p > self.dim {
            0
        } else {
            self.types[p].len()
        }
    }

    #[inline]
    pub fn vertex_coords(&self, v: u32) -> [usize; 3] {
        let v = v as usize;
        let [lx, ly, _] = self.shape;
        [v % lx, (v / lx) % ly, v / (lx * ly)]
    }

    #[inline]
    pub fn vertex_index(&self, c: [usize; 3]) -> u32 {
        let [lx, ly, _] = self.shape;
        (c[0] + lx * (c[1] + ly * c[2])) as u32
    }

    #[inline]
    fn decode(&self, s: SimplexRef) -> (usize, [usize; 3]) {
        let p = s.dim as usize;
        let offsets = &self.type_offset[p];
        // offsets has at most 13 entries
        let mut t = 0;
        while offsets[t + 1] <= s.id {
            t += 1;
        }
        let local = (s.id - offsets[t]) as usize;
        let [ex, ey, _] = self.types[p][t].extent;
        (t, [local % ex, (local / ex) % ey, local / (ex * ey)])
    }

    #[inline]
    fn encode(&self, p: usize, t: usize, base: [usize; 3]) -> SimplexRef {
        let [ex, ey, _] = self.types[p][t].extent;
        let local = base[0] + ex * (base[1] + ey * base[2]);
        SimplexRef::new(p, self.type_offset[p][t] + local as u32)
    }

    #[inline]
    fn apply(base: [usize; 3], mask: u8) -> [usize; 3] {
        [
            base[0] + (mask & 1) as usize,
            base[1] + ((mask >> 1) & 1) as usize,
            base[2] + ((mask >> 2) & 1) as usize,
        ]
    }

    /// `base - mask` if it stays inside the box `extent`.
    #[inline]
    fn retreat(base: [usize; 3], mask: u8, extent: [usize; 3]) -> Option<[usize; 3]> {
        let mut out = [0usize; 3];
        for axis in 0..3 {
            let d = ((mask >> axis) & 1) as usize;
            if base[axis] < d {
                return None;
            }
            out[axis] = base[axis] - d;
            if out[axis] >= extent[axis] {
                return None;
            }
        }
        Some(out)
    }

    pub fn vertices_of(&self, s: SimplexRef) -> VertexList {
        let (t, base) = self.decode(s);
        self.types[s.dim as usize][t]
            .masks
            .iter()
            .map(|&m| self.vertex_index(Self::apply(base, m)))
            .collect()
    }

    pub fn facets(&self, s: SimplexRef) -> FacetList {
        let p = s.dim as usize;
        if p == 0 {
            return FacetList::new();
        }
        let (t, base) = self.decode(s);
        self.types[p][t]
            .facets
            .iter()
            .map(|&(ft, shift)| self.encode(p - 1, ft as usize, Self::apply(base, shift)))
            .collect()
    }

    pub fn cofacets_into(&self, s: SimplexRef, out: &mut Vec<SimplexRef>) {
        let p = s.dim as usize;
        if p >= self.dim {
            return;
        }
        let (t, base) = self.decode(s);
        for &(ct, shift) in &self.types[p][t].cofacets {
            let extent = self.types[p + 1][ct as usize].extent;
            if let Some(b) = Self::retreat(base, shift, extent) {
                out.push(self.encode(p + 1, ct as usize, b));
            }
        }
    }

    /// Every simplex of dimension ≥ 1 that contains `v`.
    pub fn star_into(&self, v: u32, out: &mut Vec<SimplexRef>) {
        let c = self.vertex_coords(v);
        for p in 1..=self.dim {
            for &(t, m) in &self.star[p] {
                let extent = self.types[p][t as usize].extent;
                if let Some(b) = Self::retreat(c, m, extent) {
                    out.push(self.encode(p, t as usize, b));
                }
            }
        }
    }

    /// Star of an interior vertex as a reusable template.
    pub fn star_template(&self) -> StarTemplate {
        let mut offsets: Vec<[i8; 3]> = Vec::new();
        let mut cells: Vec<StarCell> = Vec::new();
        let mut by_vertices: HashMap<Vec<[i8; 3]>, u8> = HashMap::new();
        for p in 1..=self.dim {
            for &(t, m) in &self.star[p] {
                let mut verts: Vec<[i8; 3]> = self.types[p][t as usize]
                    .masks
                    .iter()
                    .map(|&x| {
                        let mut o = [0i8; 3];
                        for (axis, slot) in o.iter_mut().enumerate() {
                            *slot = ((x >> axis) & 1) as i8 - ((m >> axis) & 1) as i8;
                        }
                        o
                    })
                    .collect();
                verts.sort_unstable();
                let mut nbrs = 0u16;
                for o in verts.iter().filter(|o| **o != [0, 0, 0]) {
                    let k = match offsets.iter().position(|x| x == o) {
                        Some(k) => k,
                        None => {
                            offsets.push(*o);
                            offsets.len() - 1
                        }
                    };
                    nbrs |= 1 << k;
                }
                by_vertices.insert(verts.clone(), cells.len() as u8);
                cells.push(StarCell {
                    dim: p as u8,
                    ty: t,
                    vmask: m,
                    nbrs,
                    facets: ArrayVec::new(),
                    cofacets: ArrayVec::new(),
                    vertices: verts,
                });
            }
        }
        for i in 0..cells.len() {
            if cells[i].dim < 2 {
                continue;
            }
            let verts = cells[i].vertices.clone();
            for skip in verts.iter().filter(|o| **o != [0, 0, 0]) {
                let sub: Vec<[i8; 3]> = verts.iter().filter(|o| *o != skip).copied().collect();
                let j = by_vertices[&sub];
                cells[i].facets.push(j);
                cells[j as usize].cofacets.push(i as u8);
            }
        }
        let [lx, ly, _] = self.shape;
        let deltas = offsets
            .iter()
            .map(|o| o[0] as i64 + lx as i64 * (o[1] as i64 + ly as i64 * o[2] as i64))
            .collect();
        StarTemplate {
            offsets,
            deltas,
            cells,
        }
    }

    /// Global handle of a template cell placed at vertex coordinates `c`.
    #[inline]
    pub fn star_cell_ref(&self, c: [usize; 3], cell: &StarCell) -> SimplexRef {
        let m = cell.vmask;
        let base = [
            c[0] - (m & 1) as usize,
            c[1] - ((m >> 1) & 1) as usize,
            c[2] - ((m >> 2) & 1) as usize,
        ];
        self.encode(cell.dim as usize, cell.ty as usize, base)
    }

    pub fn find_simplex(&self, vertices: &[u32]) -> Option<SimplexRef> {
        if vertices.is_empty() || vertices.len() > self.dim + 1 {
            return None;
        }
        let n = self.vertex_count() as u32;
        if vertices.iter().any(|&v| v >= n) {
            return None;
        }
        let mut sorted: VertexList = vertices.iter().copied().collect();
        sorted.sort_unstable();
        let base = self.vertex_coords(sorted[0]);
        let mut masks = Chain::new();
        for &v in &sorted {
            let c = self.vertex_coords(v);
            let mut m = 0u8;
            for axis in 0..3 {
                match c[axis].checked_sub(base[axis]) {
                    Some(0) => {}
                    Some(1) => m |= 1 << axis,
                    _ => return None,
                }
            }
            masks.push(m);
        }
        let p = sorted.len() - 1;
        let t = self.types[p].iter().position(|ty| ty.masks == masks)?;
        Some(self.encode(p, t, base))
    }
}
