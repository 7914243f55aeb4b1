//! Simplex pairing by homologous propagation.
//!
//! [`pair_simplices_oracle`] is the classic chain-based pairing over every
//! simplex of the filtration. [`pair_critical_simplices`] only visits critical
//! simplices of one dimension and caches the expanded boundary of each
//! propagation instead of its chain.

mod boundary;
mod critical;
mod oracle;

pub use boundary::BoundarySet;
pub use critical::{pair_critical_simplices, CriticalPairing, PropagationOptions};
pub use oracle::{pair_simplices_oracle, OracleOutput};

use crate::complex::{Complex, SimplexRef};
use crate::filtration::FiltrationOrder;

/// Mod-2 boundary of `s` as a [`BoundarySet`].
pub fn boundary_of(complex: &Complex, order: &FiltrationOrder, s: SimplexRef) -> BoundarySet {
    let mut b = BoundarySet::new();
    for f in complex.facets(s) {
        b.toggle(order.key(complex, f), f.id);
    }
    b
}
