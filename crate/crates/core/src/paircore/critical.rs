use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::BoundarySet;
use crate::complex::{Complex, SimplexRef};
use crate::error::{Deadline, Error, Result};
use crate::filtration::{FiltrationOrder, SimplexKey};
use crate::gradient::{Gradient, Pairing};

#[derive(Clone, Copy, Debug)]
pub struct PropagationOptions {
    /// Keep the terminal boundary of every propagation that creates a pair.
    pub retain_cycles: bool,
    /// Number of propagations started concurrently before their results are
    /// reconciled in filtration order.
    pub batch_size: usize,
    pub deadline: Deadline,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        Self {
            retain_cycles: false,
            batch_size: 256,
            deadline: Deadline::none(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CriticalPairing {
    /// `(creator, destroyer)` in the order of the destroyers.
    pub pairs: Vec<(SimplexRef, SimplexRef)>,
    /// Sources whose propagated boundary vanished.
    pub positive: Vec<SimplexRef>,
    /// Terminal boundary (creator-dimension ids) of each pair, parallel to
    /// `pairs`; empty unless cycles were retained.
    pub cycles: Vec<Vec<u32>>,
}

/// Pairs critical `(p+1)`-simplices (`sources`, ascending) with critical
/// `p`-simplices by homologous propagation of their boundaries.
///
/// A propagation expands through gradient pairs and through the cached
/// terminal boundaries of earlier sources. `blocked` marks critical
/// `p`-simplices already consumed by another stage; meeting one is an
/// internal error.
///
/// Sources are processed in batches: every member of a batch first propagates
/// concurrently against the state left by previous batches, then the batch is
/// reconciled sequentially in filtration order. The result is independent of
/// the number of threads.
pub fn pair_critical_simplices(
    complex: &Complex,
    order: &FiltrationOrder,
    gradient: &Gradient,
    sources: &[(SimplexKey, SimplexRef)],
    blocked: &(dyn Fn(u32) -> bool + Sync),
    options: &PropagationOptions,
) -> Result<CriticalPairing> {
    let Some(&(_, first)) = sources.first() else {
        return Ok(CriticalPairing::default());
    };
    if first.dim == 0 {
        return Err(Error::InvalidInput("sources must have dimension at least 1".into()));
    }
    let p = first.dim as usize - 1;
    let walker = Walker {
        complex,
        order,
        gradient,
        blocked,
        p,
        deadline: options.deadline,
    };

    let mut claimed: FxHashMap<u32, u32> = FxHashMap::default();
    let mut caches: Vec<Option<BoundarySet>> = vec![None; sources.len()];
    let mut owner: Vec<Option<u32>> = vec![None; sources.len()];
    let batch = options.batch_size.max(1);

    for (start, chunk) in (0..sources.len()).step_by(batch).zip(sources.chunks(batch)) {
        options.deadline.check()?;
        let tentative: Vec<Result<BoundarySet>> = chunk
            .par_iter()
            .map(|&(_, s)| {
                if s.dim as usize != p + 1 {
                    return Err(Error::InvalidInput("sources of mixed dimensions".into()));
                }
                let mut b = super::boundary_of(complex, order, s);
                walker.advance(&mut b, |tid| claimed.get(&tid).map(|&j| caches[j as usize].as_ref().expect("cached")))?;
                Ok(b)
            })
            .collect();
        for (k, b) in tentative.into_iter().enumerate() {
            let j = start + k;
            let mut b = b?;
            walker.advance(&mut b, |tid| claimed.get(&tid).map(|&i| caches[i as usize].as_ref().expect("cached")))?;
            if let Some((_, tid)) = b.max() {
                claimed.insert(tid, j as u32);
                owner[j] = Some(tid);
                caches[j] = Some(b);
            }
        }
    }

    let mut out = CriticalPairing::default();
    for (j, &(_, s)) in sources.iter().enumerate() {
        match owner[j] {
            Some(tid) => {
                out.pairs.push((SimplexRef::new(p, tid), s));
                if options.retain_cycles {
                    out.cycles.push(caches[j].take().expect("cached").ids().collect());
                }
            }
            None => out.positive.push(s),
        }
    }
    Ok(out)
}

struct Walker<'a> {
    complex: &'a Complex,
    order: &'a FiltrationOrder,
    gradient: &'a Gradient,
    blocked: &'a (dyn Fn(u32) -> bool + Sync),
    p: usize,
    deadline: Deadline,
}

impl Walker<'_> {
    /// Expands `b` until it is empty or its maximum is a critical simplex with
    /// no cached boundary under `lookup`.
    fn advance<'c>(
        &self,
        b: &mut BoundarySet,
        lookup: impl Fn(u32) -> Option<&'c BoundarySet>,
    ) -> Result<()> {
        let mut steps = 0u32;
        while let Some((_, tid)) = b.max() {
            steps = steps.wrapping_add(1);
            if steps.is_multiple_of(4096) {
                self.deadline.check()?;
            }
            let tau = SimplexRef::new(self.p, tid);
            match self.gradient.pairing(tau) {
                Pairing::Up(t) => {
                    for f in self.complex.facets(t) {
                        b.toggle(self.order.key(self.complex, f), f.id);
                    }
                }
                Pairing::Down(_) => {
                    return Err(Error::invariant(tau, "propagation reached the head of a gradient pair"));
                }
                Pairing::Critical => {
                    if (self.blocked)(tid) {
                        return Err(Error::invariant(tau, "propagation reached a simplex paired in another stage"));
                    }
                    match lookup(tid) {
                        Some(cache) => b.add(cache),
                        None => return Ok(()),
                    }
                }
            }
        }
        Ok(())
    }
}
