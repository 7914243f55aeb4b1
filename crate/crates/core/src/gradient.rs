//! Discrete gradient built one lower star at a time.
//!
//! Every simplex belongs to the lower star of exactly one vertex (its
//! highest-ranked one), so stars are processed independently and in parallel.
//! Each gradient pair has both members in the same star, hence zero persistence.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicBool, AtomicU32, Ordering};

use arrayvec::ArrayVec;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::complex::{Complex, GridComplex, SimplexRef, StarTemplate};
use crate::error::{Deadline, Error, Result};
use crate::filtration::{pack, FiltrationOrder, SimplexKey};

const CRITICAL: u32 = u32::MAX;
const UP: u32 = 1 << 31;

/// Gradient status of one simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pairing {
    Critical,
    /// Paired with a cofacet (the simplex is the tail of an arrow).
    Up(SimplexRef),
    /// Paired with a facet (the simplex is the head of an arrow).
    Down(SimplexRef),
}

#[derive(Clone, Debug)]
pub struct Gradient {
    pairs: Vec<Vec<u32>>,
}

impl Gradient {
    pub fn compute(complex: &Complex, order: &FiltrationOrder) -> Result<Self> {
        Self::compute_with_deadline(complex, order, Deadline::none())
    }

    pub fn compute_with_deadline(
        complex: &Complex,
        order: &FiltrationOrder,
        deadline: Deadline,
    ) -> Result<Self> {
        if order.len() != complex.vertex_count() {
            return Err(Error::FieldSize {
                expected: complex.vertex_count(),
                got: order.len(),
            });
        }
        let d = complex.dim();
        for p in 0..=d {
            if complex.simplex_count(p) >= UP as usize {
                return Err(Error::InvalidInput(format!("too many {p}-simplices")));
            }
        }
        let slots: Vec<Vec<AtomicU32>> = (0..=d)
            .map(|p| (0..complex.simplex_count(p)).map(|_| AtomicU32::new(CRITICAL)).collect())
            .collect();
        let timed_out = AtomicBool::new(false);
        let template = complex.as_grid().map(|g| (g, g.star_template()));

        (0..complex.vertex_count() as u32)
            .into_par_iter()
            .with_min_len(256)
            .for_each_init(StarScratch::default, |scratch, v| {
                if v % 1024 == 0 && deadline.expired() {
                    timed_out.store(true, Ordering::Relaxed);
                }
                if timed_out.load(Ordering::Relaxed) {
                    return;
                }
                match &template {
                    Some((grid, t)) => scratch.process_grid(grid, t, order, v, &slots),
                    None => scratch.process(complex, order, v, &slots),
                }
            });
        if timed_out.into_inner() {
            return Err(Error::Timeout);
        }
        Ok(Self {
            pairs: slots
                .into_iter()
                .map(|s| s.into_iter().map(AtomicU32::into_inner).collect())
                .collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.pairs.len() - 1
    }

    #[inline]
    pub fn pairing(&self, s: SimplexRef) -> Pairing {
        let raw = self.pairs[s.dim as usize][s.id as usize];
        if raw == CRITICAL {
            Pairing::Critical
        } else if raw & UP != 0 {
            Pairing::Up(SimplexRef::new(s.dim as usize + 1, raw & !UP))
        } else {
            Pairing::Down(SimplexRef::new(s.dim as usize - 1, raw))
        }
    }

    #[inline]
    pub fn is_critical(&self, s: SimplexRef) -> bool {
        self.pairs[s.dim as usize][s.id as usize] == CRITICAL
    }

    /// Critical `p`-simplices with their keys, in increasing key order.
    pub fn critical_simplices(
        &self,
        complex: &Complex,
        order: &FiltrationOrder,
        p: usize,
    ) -> Vec<(SimplexKey, SimplexRef)> {
        let mut out: Vec<(SimplexKey, SimplexRef)> = self.pairs[p]
            .par_iter()
            .enumerate()
            .filter(|(_, &raw)| raw == CRITICAL)
            .map(|(id, _)| {
                let s = SimplexRef::new(p, id as u32);
                (order.key(complex, s), s)
            })
            .collect();
        out.par_sort_unstable();
        out
    }

    pub fn critical_counts(&self) -> Vec<usize> {
        self.pairs
            .iter()
            .map(|v| v.iter().filter(|&&raw| raw == CRITICAL).count())
            .collect()
    }
}

/// Marks the center vertex in a local pair list.
const CENTER: u32 = u32::MAX;
/// Memo entries kept per thread before the memo is reset.
const MEMO_CAP: usize = 1 << 15;

/// Reusable buffers for one lower star.
#[derive(Default)]
struct StarScratch {
    star: Vec<SimplexRef>,
    local: Vec<(SimplexRef, SimplexKey)>,
    keys: Vec<SimplexKey>,
    dims: Vec<u8>,
    /// Template index of each local cell (grid path only).
    cells: Vec<u8>,
    facets: Vec<ArrayVec<u32, 4>>,
    cofacet_start: Vec<u32>,
    cofacets: Vec<u32>,
    assigned: Vec<bool>,
    pq_zero: BinaryHeap<Reverse<(SimplexKey, u32)>>,
    pq_one: BinaryHeap<Reverse<(SimplexKey, u32)>>,
    /// Output of `expand`: (facet, cofacet) in local indices.
    out: Vec<(u32, u32)>,
    /// Grid path: gradient pairs (in template indices) keyed by the rank
    /// pattern of the lower neighbors. The pairing only depends on that pattern.
    memo: FxHashMap<u64, Box<[(u8, u8)]>>,
}

impl StarScratch {
    fn process(
        &mut self,
        complex: &Complex,
        order: &FiltrationOrder,
        v: u32,
        slots: &[Vec<AtomicU32>],
    ) {
        let rank = order.rank(v);
        self.star.clear();
        complex.star_into(v, &mut self.star);
        self.local.clear();
        for &s in &self.star {
            let vs = complex.vertices_of(s);
            if vs.iter().all(|&u| order.rank(u) <= rank) {
                self.local.push((s, order.key_of_vertices(&vs)));
            }
        }
        if self.local.is_empty() {
            return; // v is a local minimum, left critical
        }
        // sort by (dim, id) for lookup
        self.local.sort_unstable_by_key(|&(s, _)| s);
        let n = self.local.len();
        self.keys.clear();
        self.dims.clear();
        self.facets.clear();
        for i in 0..n {
            let (s, key) = self.local[i];
            self.keys.push(key);
            self.dims.push(s.dim);
            let mut f = ArrayVec::new();
            if s.dim >= 2 {
                for face in complex.facets(s) {
                    if let Ok(j) = self.local.binary_search_by_key(&face, |&(t, _)| t) {
                        f.push(j as u32);
                    }
                }
            }
            self.facets.push(f);
        }
        self.expand();
        for &(a, b) in &self.out {
            let fa = if a == CENTER { SimplexRef::vertex(v) } else { self.local[a as usize].0 };
            write(slots, fa, self.local[b as usize].0);
        }
    }

    /// Same as `process`, with the star read off the grid template.
    fn process_grid(
        &mut self,
        grid: &GridComplex,
        template: &StarTemplate,
        order: &FiltrationOrder,
        v: u32,
        slots: &[Vec<AtomicU32>],
    ) {
        let rank = order.rank(v);
        let c = grid.vertex_coords(v);
        let shape = grid.shape();
        let mut nbr_rank = [0u32; 16];
        let mut lower: ArrayVec<(u32, u8), 16> = ArrayVec::new();
        let mut lower_mask = 0u16;
        for (k, (o, &d)) in template.offsets.iter().zip(&template.deltas).enumerate() {
            let inside = (0..3).all(|a| {
                let x = c[a] as i64 + o[a] as i64;
                x >= 0 && (x as usize) < shape[a]
            });
            if inside {
                let r = order.rank((v as i64 + d) as u32);
                if r < rank {
                    nbr_rank[k] = r + 1;
                    lower_mask |= 1 << k;
                    lower.push((r, k as u8));
                }
            }
        }
        if lower.is_empty() {
            return; // local minimum
        }
        lower.sort_unstable();
        let pattern = lower.iter().fold(0u64, |acc, &(_, k)| (acc << 4) | (k as u64 + 1));

        let apply = |pairs: &[(u8, u8)]| {
            for &(a, b) in pairs {
                let fa = if a == u8::MAX {
                    SimplexRef::vertex(v)
                } else {
                    grid.star_cell_ref(c, &template.cells[a as usize])
                };
                write(slots, fa, grid.star_cell_ref(c, &template.cells[b as usize]));
            }
        };
        if let Some(pairs) = self.memo.get(&pattern) {
            apply(pairs);
            return;
        }

        // template index -> local index
        let mut map = [u32::MAX; 128];
        self.keys.clear();
        self.dims.clear();
        self.cells.clear();
        self.facets.clear();
        for (i, cell) in template.cells.iter().enumerate() {
            if cell.nbrs & !lower_mask != 0 {
                continue;
            }
            let mut r = [rank + 1, 0, 0, 0];
            let mut n = 1;
            let mut bits = cell.nbrs;
            while bits != 0 {
                r[n] = nbr_rank[bits.trailing_zeros() as usize];
                bits &= bits - 1;
                n += 1;
            }
            r[1..n].sort_unstable_by(|a, b| b.cmp(a));
            map[i] = self.keys.len() as u32;
            self.keys.push(pack(r));
            self.dims.push(cell.dim);
            self.cells.push(i as u8);
            self.facets.push(cell.facets.iter().map(|&j| map[j as usize]).collect());
        }
        self.expand();
        let pairs: Box<[(u8, u8)]> = self
            .out
            .iter()
            .map(|&(a, b)| {
                let ta = if a == CENTER { u8::MAX } else { self.cells[a as usize] };
                (ta, self.cells[b as usize])
            })
            .collect();
        apply(&pairs);
        if self.memo.len() >= MEMO_CAP {
            self.memo.clear();
        }
        self.memo.insert(pattern, pairs);
    }

    /// Pairs the lower star described by `keys`, `dims` and `facets`.
    fn expand(&mut self) {
        let n = self.keys.len();
        self.out.clear();
        self.cofacet_start.clear();
        self.cofacet_start.resize(n + 1, 0);
        for f in &self.facets {
            for &j in f {
                self.cofacet_start[j as usize + 1] += 1;
            }
        }
        for i in 0..n {
            self.cofacet_start[i + 1] += self.cofacet_start[i];
        }
        self.cofacets.clear();
        self.cofacets.resize(self.cofacet_start[n] as usize, 0);
        let mut fill: ArrayVec<u32, 128> = ArrayVec::new();
        let mut fill_heap: Vec<u32> = Vec::new();
        let fill: &mut [u32] = if n <= 128 {
            fill.extend(self.cofacet_start[..n].iter().copied());
            &mut fill
        } else {
            fill_heap.extend_from_slice(&self.cofacet_start[..n]);
            &mut fill_heap
        };
        for i in 0..n {
            for &j in &self.facets[i] {
                self.cofacets[fill[j as usize] as usize] = i as u32;
                fill[j as usize] += 1;
            }
        }
        self.assigned.clear();
        self.assigned.resize(n, false);
        self.pq_zero.clear();
        self.pq_one.clear();

        // steepest lower edge
        let delta = match (0..n).filter(|&i| self.dims[i] == 1).min_by_key(|&i| self.keys[i]) {
            Some(i) => i,
            None => return,
        };
        self.out.push((CENTER, delta as u32));
        self.assigned[delta] = true;
        for i in 0..n {
            if self.dims[i] == 1 && i != delta {
                self.pq_zero.push(Reverse((self.keys[i], i as u32)));
            }
        }
        self.push_cofacets_with_one_unpaired(delta);

        loop {
            while let Some(Reverse((_, a))) = self.pq_one.pop() {
                let a = a as usize;
                if self.assigned[a] {
                    continue;
                }
                match self.unpaired_face(a) {
                    None => self.pq_zero.push(Reverse((self.keys[a], a as u32))),
                    Some(face) => {
                        self.out.push((face as u32, a as u32));
                        self.assigned[face] = true;
                        self.assigned[a] = true;
                        self.push_cofacets_with_one_unpaired(a);
                        self.push_cofacets_with_one_unpaired(face);
                    }
                }
            }
            let mut next = None;
            while let Some(Reverse((_, g))) = self.pq_zero.pop() {
                if !self.assigned[g as usize] {
                    next = Some(g as usize);
                    break;
                }
            }
            match next {
                Some(g) => {
                    self.assigned[g] = true; // critical
                    self.push_cofacets_with_one_unpaired(g);
                }
                None => break,
            }
        }
    }

    fn unpaired_count(&self, i: usize) -> usize {
        self.facets[i].iter().filter(|&&j| !self.assigned[j as usize]).count()
    }

    /// The unique unassigned facet of `i`, if it has exactly one.
    fn unpaired_face(&self, i: usize) -> Option<usize> {
        let mut it = self.facets[i].iter().filter(|&&j| !self.assigned[j as usize]);
        match (it.next(), it.next()) {
            (Some(&j), None) => Some(j as usize),
            _ => None,
        }
    }

    fn push_cofacets_with_one_unpaired(&mut self, i: usize) {
        let (lo, hi) = (self.cofacet_start[i] as usize, self.cofacet_start[i + 1] as usize);
        for k in lo..hi {
            let c = self.cofacets[k] as usize;
            if !self.assigned[c] && self.unpaired_count(c) == 1 {
                self.pq_one.push(Reverse((self.keys[c], c as u32)));
            }
        }
    }
}

/// Records `a` as a facet of `b` in the gradient.
#[inline]
fn write(slots: &[Vec<AtomicU32>], a: SimplexRef, b: SimplexRef) {
    slots[a.dim as usize][a.id as usize].store(b.id | UP, Ordering::Relaxed);
    slots[b.dim as usize][b.id as usize].store(a.id, Ordering::Relaxed);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_consistency(c: &Complex, f: &FiltrationOrder, g: &Gradient) {
        for p in 0..=c.dim() {
            for s in c.simplices(p) {
                match g.pairing(s) {
                    Pairing::Critical => {}
                    Pairing::Up(t) => {
                        assert!(c.facets(t).contains(&s));
                        assert_eq!(g.pairing(t), Pairing::Down(s));
                        assert_eq!(f.max_vertex(c, s), f.max_vertex(c, t));
                    }
                    Pairing::Down(t) => assert_eq!(g.pairing(t), Pairing::Up(s)),
                }
            }
        }
        let chi: i64 = g
            .critical_counts()
            .iter()
            .enumerate()
            .map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum();
        assert_eq!(chi, c.euler_characteristic());
    }

    #[test]
    fn monotone_path_has_one_critical_vertex() {
        let c = Complex::from_grid([5, 1, 1], 1).unwrap();
        let f = FiltrationOrder::new(&[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        let g = Gradient::compute(&c, &f).unwrap();
        assert_eq!(g.critical_counts(), vec![1, 0]);
        check_consistency(&c, &f, &g);
    }

    #[test]
    fn path_with_two_minima() {
        let c = Complex::from_grid([4, 1, 1], 1).unwrap();
        let f = FiltrationOrder::new(&[0.0, 2.0, 1.0, 3.0]).unwrap();
        let g = Gradient::compute(&c, &f).unwrap();
        assert_eq!(g.critical_counts(), vec![2, 1]);
        let crit = g.critical_simplices(&c, &f, 1);
        assert_eq!(c.vertices_of(crit[0].1).as_slice(), &[1, 2]);
    }

    #[test]
    fn elevation_on_cube_grid_is_collapsible() {
        let c = Complex::from_grid([4, 3, 5], 3).unwrap();
        let vals: Vec<f64> = (0..c.vertex_count() as u32)
            .map(|v| c.coordinates(v).unwrap()[0])
            .collect();
        let f = FiltrationOrder::new(&vals).unwrap();
        let g = Gradient::compute(&c, &f).unwrap();
        assert_eq!(g.critical_counts(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn random_fields_are_consistent() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for shape in [[6, 5, 1], [4, 4, 4]] {
            let dim = if shape[2] == 1 { 2 } else { 3 };
            let c = Complex::from_grid(shape, dim).unwrap();
            let vals: Vec<f64> = (0..c.vertex_count()).map(|_| rng.gen()).collect();
            let f = FiltrationOrder::new(&vals).unwrap();
            let g = Gradient::compute(&c, &f).unwrap();
            check_consistency(&c, &f, &g);
        }
    }

    /// Pairing as sorted vertex lists, independent of simplex ids.
    fn pairing_by_vertices(c: &Complex, g: &Gradient) -> Vec<(Vec<u32>, Option<Vec<u32>>)> {
        let sorted = |s: SimplexRef| {
            let mut v = c.vertices_of(s).to_vec();
            v.sort_unstable();
            v
        };
        let mut out: Vec<_> = (0..=c.dim())
            .flat_map(|p| c.simplices(p))
            .filter_map(|s| match g.pairing(s) {
                Pairing::Critical => Some((sorted(s), None)),
                Pairing::Up(t) => Some((sorted(s), Some(sorted(t)))),
                Pairing::Down(_) => None,
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn grid_template_path_matches_generic_path() {
        for (shape, dim) in [([9, 1, 1], 1), ([6, 5, 1], 2), ([4, 5, 3], 3)] {
            let grid = Complex::from_grid(shape, dim).unwrap();
            let tops: Vec<Vec<u32>> = grid.simplices(dim).map(|s| grid.vertices_of(s).to_vec()).collect();
            let mesh = Complex::from_explicit(grid.vertex_count(), &tops).unwrap();
            for seed in 0..6u64 {
                // coarse values force many ties and repeated patterns
                let vals: Vec<f64> = (0..grid.vertex_count())
                    .map(|i| ((i as u64 * 2654435761 + seed * 97) % 7) as f64)
                    .collect();
                let f = FiltrationOrder::new(&vals).unwrap();
                let a = Gradient::compute(&grid, &f).unwrap();
                let b = Gradient::compute(&mesh, &f).unwrap();
                assert_eq!(pairing_by_vertices(&grid, &a), pairing_by_vertices(&mesh, &b));
            }
        }
    }

    #[test]
    fn expired_deadline_times_out() {
        let c = Complex::from_grid([8, 8, 8], 3).unwrap();
        let f = FiltrationOrder::new(&vec![0.0; 512]).unwrap();
        let past = Deadline::at(std::time::Instant::now());
        assert!(matches!(Gradient::compute_with_deadline(&c, &f, past), Err(Error::Timeout)));
    }
}
