//! Minimum-saddle and saddle-maximum diagrams from compressed integral-line
//! graphs.
//!
//! For `D0`, each critical edge is linked to the two minima its descending
//! vertex-edge paths reach. For `D(d-1)`, each critical `(d-1)`-simplex is
//! linked to the two critical `d`-simplices (or the domain boundary) reached by
//! following the reversed `(d-1, d)` gradient pairs. An elder-rule union-find
//! sweep over each graph yields the pairs.

mod d0;
mod dual;
mod union_find;

pub use d0::{build_d0_graph, compute_d0, D0Result};
pub use dual::{build_dual_graph, compute_dtop, DtopResult};
pub use union_find::{elder_sweep, ArcOutcome, UnionFind};

use crate::complex::SimplexRef;

/// How the domain boundary takes part in the saddle-maximum diagram.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BoundaryMode {
    /// The boundary acts as an infinitely old maximum. Gives the exact diagram.
    VirtualMax,
    /// The boundary acts as a maximum just younger than the global one, so the
    /// global maximum is never paired with a boundary saddle.
    #[default]
    Ignore,
}

impl BoundaryMode {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryMode::VirtualMax => "virtual-max",
            BoundaryMode::Ignore => "ignore",
        }
    }
}

impl std::str::FromStr for BoundaryMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "virtual-max" | "virtual_max" => Ok(BoundaryMode::VirtualMax),
            "ignore" => Ok(BoundaryMode::Ignore),
            other => Err(format!("unknown boundary mode '{other}'")),
        }
    }
}

/// Node of a saddle graph: a critical extremum or the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphNode {
    Extremum(u32),
    Boundary,
}

/// Compressed graph whose arcs are critical saddles and whose nodes are the
/// extrema their integral lines reach.
#[derive(Clone, Debug, Default)]
pub struct SaddleGraph {
    /// Extrema sorted by filtration order.
    pub nodes: Vec<SimplexRef>,
    /// `(saddle, end, end)` in the order the sweep processes them.
    pub arcs: Vec<(SimplexRef, GraphNode, GraphNode)>,
}
