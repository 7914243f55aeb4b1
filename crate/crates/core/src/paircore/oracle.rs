use rayon::prelude::*;

use super::BoundarySet;
use crate::complex::{Complex, SimplexRef};
use crate::error::{Deadline, Error, Result};
use crate::filtration::{FiltrationOrder, SimplexKey};

const NONE: u32 = u32::MAX;
const UP: u32 = 1 << 31;

/// Result of the chain-based reference pairing.
#[derive(Clone, Debug, Default)]
pub struct OracleOutput {
    /// `(creator, destroyer)` for every finite pair, zero persistence included.
    pub pairs: Vec<(SimplexRef, SimplexRef)>,
    /// Creators that are never destroyed, in filtration order.
    pub unpaired: Vec<SimplexRef>,
    /// For each 1-dimensional pair, the edge ids of the boundary of the
    /// destroying chain (only filled when requested).
    pub cycles: Vec<((SimplexRef, SimplexRef), Vec<u32>)>,
}

/// Pairs every simplex of the lexicographic filtration by growing an explicit
/// chain per simplex until its boundary vanishes or its maximum is unpaired.
pub fn pair_simplices_oracle(
    complex: &Complex,
    order: &FiltrationOrder,
    retain_cycles: bool,
    deadline: Deadline,
) -> Result<OracleOutput> {
    let d = complex.dim();
    let mut all: Vec<(SimplexKey, SimplexRef)> = (0..=d)
        .flat_map(|p| {
            (0..complex.simplex_count(p) as u32)
                .into_par_iter()
                .map(move |id| SimplexRef::new(p, id))
                .map(|s| (order.key(complex, s), s))
                .collect::<Vec<_>>()
        })
        .collect();
    all.par_sort_unstable();

    // partner of each simplex; UP marks a partner of higher dimension
    let mut partner: Vec<Vec<u32>> = (0..=d).map(|p| vec![NONE; complex.simplex_count(p)]).collect();
    // chain arena slot of each destroyer
    let mut chain_slot: Vec<Vec<u32>> = (0..=d).map(|p| vec![NONE; complex.simplex_count(p)]).collect();
    let mut arena: Vec<Vec<u32>> = Vec::new();
    let mut out = OracleOutput::default();

    for (n, &(_, s)) in all.iter().enumerate() {
        if n % 4096 == 0 {
            deadline.check()?;
        }
        let p = s.dim as usize;
        if p == 0 {
            continue;
        }
        let mut chain = vec![s.id];
        let mut boundary = chain_boundary(complex, order, p, &chain);
        while let Some((_, tid)) = boundary.max() {
            let tau = SimplexRef::new(p - 1, tid);
            let raw = partner[p - 1][tid as usize];
            if raw == NONE {
                break;
            }
            if raw & UP == 0 {
                return Err(Error::invariant(tau, "boundary maximum is a destroyer"));
            }
            let other = &arena[chain_slot[p][(raw & !UP) as usize] as usize];
            chain = symmetric_difference(&chain, other);
            boundary.add(&chain_boundary(complex, order, p, other));
        }
        if let Some((_, tid)) = boundary.max() {
            let tau = SimplexRef::new(p - 1, tid);
            partner[p - 1][tid as usize] = s.id | UP;
            partner[p][s.id as usize] = tid;
            chain_slot[p][s.id as usize] = arena.len() as u32;
            arena.push(chain);
            out.pairs.push((tau, s));
            if retain_cycles && p == 2 {
                out.cycles.push(((tau, s), boundary.ids().collect()));
            }
        }
    }
    out.unpaired = all
        .iter()
        .filter(|(_, s)| partner[s.dim as usize][s.id as usize] == NONE)
        .map(|&(_, s)| s)
        .collect();
    Ok(out)
}

/// Boundary of a chain of `p`-simplices given by ids.
fn chain_boundary(complex: &Complex, order: &FiltrationOrder, p: usize, chain: &[u32]) -> BoundarySet {
    let mut faces = Vec::with_capacity(chain.len() * (p + 1));
    for &id in chain {
        for f in complex.facets(SimplexRef::new(p, id)) {
            faces.push((order.key(complex, f), f.id));
        }
    }
    BoundarySet::from_unsorted(faces)
}

/// Mod-2 sum of two chains given as sorted id lists.
fn symmetric_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
