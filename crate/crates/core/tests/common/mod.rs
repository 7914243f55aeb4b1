#![allow(dead_code)]

use std::collections::BTreeSet;

use dms::complex::{Complex, SimplexRef};
use dms::engine::{compute, Algorithm, BoundaryMode, RunConfig, RunOutput, SimplexPair};
use dms::filtration::FiltrationOrder;
use dms::gradient::{Gradient, Pairing};

pub fn run(complex: &Complex, values: &[f64], algorithm: Algorithm, mode: BoundaryMode) -> RunOutput {
    let cfg = RunConfig {
        algorithm,
        boundary_mode: mode,
        ..Default::default()
    };
    compute(complex, values, &cfg).expect("computation succeeds")
}

/// Checks that the fast pairs agree with the reference ones: every fast pair is
/// a reference pair, every reference pair between simplices with different
/// highest vertices is a fast pair, and the infinite classes coincide.
pub fn pair_sets_agree(complex: &Complex, values: &[f64], fast: &RunOutput, reference: &RunOutput) -> Result<(), String> {
    let order = FiltrationOrder::new(values).unwrap();
    let finite = |o: &RunOutput| -> BTreeSet<(SimplexRef, SimplexRef)> {
        o.pairs.iter().filter_map(|p| p.death.map(|d| (p.birth, d))).collect()
    };
    let infinite = |o: &RunOutput| -> BTreeSet<SimplexRef> {
        o.pairs.iter().filter(|p| p.death.is_none()).map(|p| p.birth).collect()
    };
    let (ff, rf) = (finite(fast), finite(reference));
    if let Some(p) = ff.difference(&rf).next() {
        return Err(format!("fast pair {p:?} missing from reference"));
    }
    for p in rf.difference(&ff) {
        if order.max_vertex(complex, p.0) != order.max_vertex(complex, p.1) {
            return Err(format!("reference pair {p:?} missing from fast output"));
        }
    }
    if infinite(fast) != infinite(reference) {
        return Err(format!(
            "infinite classes differ: {:?} vs {:?}",
            infinite(fast),
            infinite(reference)
        ));
    }
    Ok(())
}

pub fn infinite_counts(pairs: &[SimplexPair], dim: usize) -> Vec<usize> {
    (0..=dim)
        .map(|p| pairs.iter().filter(|x| x.dim == p && x.death.is_none()).count())
        .collect()
}

/// Betti numbers over GF(2) from the ranks of the boundary matrices.
pub fn betti_mod2(complex: &Complex) -> Vec<usize> {
    let d = complex.dim();
    let mut ranks = vec![0usize; d + 2];
    for p in 1..=d {
        let rows = complex.simplex_count(p - 1);
        let words = rows.div_ceil(64);
        let mut pivots: std::collections::HashMap<usize, Vec<u64>> = Default::default();
        let mut rank = 0;
        for s in complex.simplices(p) {
            let mut col = vec![0u64; words];
            for f in complex.facets(s) {
                col[f.id as usize / 64] ^= 1 << (f.id % 64);
            }
            loop {
                let Some(low) = (0..words).rev().find(|&w| col[w] != 0).map(|w| w * 64 + 63 - col[w].leading_zeros() as usize) else {
                    break;
                };
                match pivots.get(&low) {
                    Some(other) => {
                        for (a, b) in col.iter_mut().zip(other) {
                            *a ^= b;
                        }
                    }
                    None => {
                        pivots.insert(low, col);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        ranks[p] = rank;
    }
    (0..=d)
        .map(|p| complex.simplex_count(p) - ranks[p] - ranks[p + 1])
        .collect()
}

/// Checks the gradient invariants; returns the first violation.
pub fn check_gradient(c: &Complex, f: &FiltrationOrder, g: &Gradient) -> Result<(), String> {
    for p in 0..=c.dim() {
        for s in c.simplices(p) {
            match g.pairing(s) {
                Pairing::Critical => {}
                Pairing::Up(t) => {
                    if !c.facets(t).contains(&s) {
                        return Err(format!("{t:?} is not a coface of {s:?}"));
                    }
                    if g.pairing(t) != Pairing::Down(s) {
                        return Err(format!("pairing of {s:?} is not an involution"));
                    }
                    if f.max_vertex(c, s) != f.max_vertex(c, t) {
                        return Err(format!("{s:?} and {t:?} lie in different lower stars"));
                    }
                }
                Pairing::Down(t) => {
                    if g.pairing(t) != Pairing::Up(s) {
                        return Err(format!("pairing of {s:?} is not an involution"));
                    }
                }
            }
        }
    }
    // acyclicity: no V-path s0 -> t0 > s1 -> t1 > ... revisits a simplex
    for p in 0..c.dim() {
        let n = c.simplex_count(p);
        let mut state = vec![0u8; n]; // 0 new, 1 on stack, 2 done
        for root in 0..n as u32 {
            if state[root as usize] != 0 {
                continue;
            }
            let mut stack: Vec<(u32, Vec<u32>)> = vec![(root, next_on_path(c, g, SimplexRef::new(p, root)))];
            state[root as usize] = 1;
            while let Some((_, succ)) = stack.last_mut() {
                match succ.pop() {
                    Some(nx) => match state[nx as usize] {
                        0 => {
                            state[nx as usize] = 1;
                            let more = next_on_path(c, g, SimplexRef::new(p, nx));
                            stack.push((nx, more));
                        }
                        1 => return Err(format!("closed V-path through {p}-simplex {nx}")),
                        _ => {}
                    },
                    None => {
                        let (done, _) = stack.pop().unwrap();
                        state[done as usize] = 2;
                    }
                }
            }
        }
    }
    let chi: i64 = g
        .critical_counts()
        .iter()
        .enumerate()
        .map(|(p, &k)| if p % 2 == 0 { k as i64 } else { -(k as i64) })
        .sum();
    if chi != c.euler_characteristic() {
        return Err(format!("alternating critical count {chi} != chi {}", c.euler_characteristic()));
    }
    Ok(())
}

fn next_on_path(c: &Complex, g: &Gradient, s: SimplexRef) -> Vec<u32> {
    match g.pairing(s) {
        Pairing::Up(t) => c
            .facets(t)
            .into_iter()
            .filter(|&x| x != s && matches!(g.pairing(x), Pairing::Up(_)))
            .map(|x| x.id)
            .collect(),
        _ => Vec::new(),
    }
}

