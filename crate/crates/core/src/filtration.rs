//! Vertex ranks and the lexicographic simplex order induced by them.

use rayon::prelude::*;

use crate::complex::{Complex, SimplexRef};
use crate::error::{Error, Result};

/// Total order key of a simplex: the ranks of its vertices in decreasing order,
/// each stored as `rank + 1` in a 32-bit slot, most significant slot first.
/// Unused slots are zero, so a face always sorts before its cofaces.
pub type SimplexKey = u128;

/// Injective vertex order: vertices sorted by `(value, id)`.
#[derive(Clone, Debug)]
pub struct FiltrationOrder {
    values: Vec<f64>,
    rank: Vec<u32>,
    by_rank: Vec<u32>,
}

/// Maps `x` to an integer with the same order as `f64::total_cmp`.
fn ordered_bits(x: f64) -> u64 {
    let b = x.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | 1 << 63
    }
}

impl FiltrationOrder {
    pub fn new(values: &[f64]) -> Result<Self> {
        Self::with_tiebreak(values, None)
    }

    /// Like [`new`](Self::new), but ties in `values` are broken by `order`
    /// (then by vertex id).
    pub fn with_tiebreak(values: &[f64], order: Option<&[f64]>) -> Result<Self> {
        if let Some(i) = values.iter().position(|x| x.is_nan()) {
            return Err(Error::NanValue(i));
        }
        if let Some(o) = order {
            if o.len() != values.len() {
                return Err(Error::FieldSize {
                    expected: values.len(),
                    got: o.len(),
                });
            }
            if let Some(i) = o.iter().position(|x| x.is_nan()) {
                return Err(Error::NanValue(i));
            }
        }
        if values.len() >= u32::MAX as usize {
            return Err(Error::InvalidInput("too many vertices".into()));
        }
        let by_rank: Vec<u32> = match order {
            None => {
                let mut keys: Vec<(u64, u32)> = (0..values.len()).map(|v| (ordered_bits(values[v]), v as u32)).collect();
                keys.par_sort_unstable();
                keys.into_iter().map(|(_, v)| v).collect()
            }
            Some(o) => {
                let mut keys: Vec<(u64, u64, u32)> = (0..values.len())
                    .map(|v| (ordered_bits(values[v]), ordered_bits(o[v]), v as u32))
                    .collect();
                keys.par_sort_unstable();
                keys.into_iter().map(|(_, _, v)| v).collect()
            }
        };
        let mut rank = vec![0u32; values.len()];
        for (r, &v) in by_rank.iter().enumerate() {
            rank[v as usize] = r as u32;
        }
        Ok(Self {
            values: values.to_vec(),
            rank,
            by_rank,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn rank(&self, v: u32) -> u32 {
        self.rank[v as usize]
    }

    #[inline]
    pub fn vertex_at(&self, rank: u32) -> u32 {
        self.by_rank[rank as usize]
    }

    #[inline]
    pub fn value(&self, v: u32) -> f64 {
        self.values[v as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_value(&self) -> f64 {
        self.by_rank
            .last()
            .map(|&v| self.values[v as usize])
            .unwrap_or(f64::NAN)
    }

    /// Key of the simplex spanned by `vertices`.
    #[inline]
    pub fn key_of_vertices(&self, vertices: &[u32]) -> SimplexKey {
        let mut r = [0u32; 4];
        for (slot, &v) in r.iter_mut().zip(vertices) {
            *slot = self.rank[v as usize] + 1;
        }
        r[..vertices.len()].sort_unstable_by(|a, b| b.cmp(a));
        pack(r)
    }

    #[inline]
    pub fn key(&self, complex: &Complex, s: SimplexRef) -> SimplexKey {
        self.key_of_vertices(&complex.vertices_of(s))
    }

    /// Vertex of `s` with the highest rank.
    #[inline]
    pub fn max_vertex(&self, complex: &Complex, s: SimplexRef) -> u32 {
        complex
            .vertices_of(s)
            .iter()
            .copied()
            .max_by_key(|&v| self.rank[v as usize])
            .expect("simplex has vertices")
    }

    /// Field value of `s`: the value at its highest-ranked vertex.
    #[inline]
    pub fn simplex_value(&self, complex: &Complex, s: SimplexRef) -> f64 {
        self.values[self.max_vertex(complex, s) as usize]
    }
}

#[inline]
pub(crate) fn pack(r: [u32; 4]) -> SimplexKey {
    ((r[0] as u128) << 96) | ((r[1] as u128) << 64) | ((r[2] as u128) << 32) | r[3] as u128
}

/// Rank of the highest vertex encoded in `key`.
#[inline]
pub fn key_max_rank(key: SimplexKey) -> u32 {
    ((key >> 96) as u32).wrapping_sub(1)
}
