//! Persistence diagrams of piecewise-linear scalar fields on 1D, 2D and 3D
//! simplicial complexes.
//!
//! The fast path stratifies the work by dimension: a discrete gradient computed
//! per lower star discards every zero-persistence pair up front, the
//! minimum-saddle and saddle-maximum diagrams are read off compressed
//! integral-line graphs with a union-find, and only the remaining
//! saddle-saddle pairs of 3D data go through a boundary-cached homologous
//! propagation. A chain-based reference pairing ([`paircore::pair_simplices_oracle`])
//! is kept alongside as an independent check.
//!
//! ```
//! use dms::complex::Complex;
//! use dms::engine::{compute, RunConfig};
//!
//! let complex = Complex::from_grid([4, 1, 1], 1).unwrap();
//! let out = compute(&complex, &[0.0, 2.0, 1.0, 3.0], &RunConfig::default()).unwrap();
//! let d0: Vec<_> = out.diagram.slice(0).collect();
//! assert_eq!(d0.len(), 2);
//! ```

pub mod cli;
pub mod complex;
pub mod diagram;
pub mod engine;
pub mod error;
pub mod filtration;
pub mod generators;
pub mod gradient;
pub mod io;
pub mod metrics;
pub mod paircore;
pub mod sandwich;
pub mod synth;

pub use complex::{Complex, SimplexRef};
pub use diagram::{PersistenceDiagram, PersistencePair};
pub use error::{Error, Result};
pub use filtration::FiltrationOrder;
