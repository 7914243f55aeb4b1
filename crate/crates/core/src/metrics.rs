//! L2-Wasserstein distance between persistence diagrams.

use log::warn;

use crate::diagram::PersistenceDiagram;

/// Above this many finite points (both sides together) the inputs are
/// thinned to their most persistent points before matching.
pub const MAX_MATCHED_POINTS: usize = 4000;

/// W2 between the `dim` slices of two diagrams.
///
/// Infinite points must agree as multisets of births, otherwise the distance
/// is infinite. Finite points are matched exactly, with the diagonal as a sink.
pub fn wasserstein2(a: &PersistenceDiagram, b: &PersistenceDiagram, dim: usize) -> f64 {
    let mut ia = a.infinite_births(dim);
    let mut ib = b.infinite_births(dim);
    ia.sort_by(f64::total_cmp);
    ib.sort_by(f64::total_cmp);
    if ia != ib {
        warn!(
            "dimension {dim}: infinite classes differ ({} vs {} points), distance is infinite",
            ia.len(),
            ib.len()
        );
        return f64::INFINITY;
    }
    wasserstein2_points(&a.finite_points(dim), &b.finite_points(dim))
}

/// W2 between two multisets of finite `(birth, death)` points.
pub fn wasserstein2_points(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut a = canonical(a);
    let mut b = canonical(b);
    if a == b {
        return 0.0;
    }
    // fixed argument order keeps the result bitwise symmetric
    if cmp_points(&a, &b).is_gt() {
        std::mem::swap(&mut a, &mut b);
    }
    if a.len() + b.len() > MAX_MATCHED_POINTS {
        let threshold = thinning_threshold(&a, &b, MAX_MATCHED_POINTS);
        warn!(
            "{} diagram points exceed {MAX_MATCHED_POINTS}; matching only points with persistence > {threshold}",
            a.len() + b.len()
        );
        a.retain(|p| p.1 - p.0 > threshold);
        b.retain(|p| p.1 - p.0 > threshold);
    }

    let (n, m) = (a.len(), b.len());
    let size = n + m;
    // rows: a then diagonal slots for b; columns: b then diagonal slots for a
    let cost = |i: usize, j: usize| -> f64 {
        match (i < n, j < m) {
            (true, true) => sq(a[i].0 - b[j].0) + sq(a[i].1 - b[j].1),
            (true, false) => to_diagonal(a[i]),
            (false, true) => to_diagonal(b[j]),
            (false, false) => 0.0,
        }
    };
    let assignment = hungarian(size, cost);
    let mut terms: Vec<f64> = assignment.iter().enumerate().map(|(i, &j)| cost(i, j)).collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum::<f64>().sqrt()
}

fn sq(x: f64) -> f64 {
    x * x
}

/// Squared distance from `(b, d)` to its projection on the diagonal.
fn to_diagonal(p: (f64, f64)) -> f64 {
    sq(p.1 - p.0) / 2.0
}

fn canonical(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.1 != p.0).collect();
    v.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    v
}

fn cmp_points(a: &[(f64, f64)], b: &[(f64, f64)]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    })
}

fn thinning_threshold(a: &[(f64, f64)], b: &[(f64, f64)], keep: usize) -> f64 {
    let mut pers: Vec<f64> = a.iter().chain(b).map(|p| p.1 - p.0).collect();
    pers.sort_by(|x, y| y.total_cmp(x));
    pers[keep.min(pers.len() - 1)]
}

/// Minimum-cost perfect assignment on a dense `n x n` matrix, via shortest
/// augmenting paths with potentials. Returns the column of each row.
fn hungarian(n: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    // 1-based internally, column 0 is a virtual start
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut min_to = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        min_to.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < min_to[j] {
                    min_to[j] = cur;
                    way[j] = j0;
                }
                if min_to[j] < delta {
                    delta = min_to[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of = vec![0usize; n];
    for j in 1..=n {
        if row_of[j] > 0 {
            col_of[row_of[j] - 1] = j - 1;
        }
    }
    col_of
}
