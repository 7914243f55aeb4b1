use std::path::PathBuf;

use crate::complex::SimplexRef;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("grid extent along axis {axis} is {extent}, need at least 2")]
    DegenerateExtent { axis: usize, extent: usize },

    #[error("unsupported dimension {0} (expected 1, 2 or 3)")]
    UnsupportedDimension(usize),

    #[error("vertex id {id} out of range (vertex count {count})")]
    VertexOutOfRange { id: u32, count: usize },

    #[error("simplex {0:?} repeats a vertex")]
    RepeatedVertex(Vec<u32>),

    #[error("duplicate top simplex {0:?}")]
    DuplicateSimplex(Vec<u32>),

    #[error("top simplices mix dimensions {0} and {1}")]
    MixedDimension(usize, usize),

    #[error("complex has {0} connected components; process each one separately")]
    Disconnected(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("scalar field has {got} values but the complex has {expected} vertices")]
    FieldSize { expected: usize, got: usize },

    #[error("scalar field contains NaN at vertex {0}")]
    NanValue(usize),

    #[error("generator retention was disabled for this run")]
    GeneratorsNotRetained,

    #[error("internal invariant violated at {simplex:?}: {reason}")]
    Invariant { simplex: SimplexRef, reason: String },

    #[error("computation exceeded its time budget")]
    Timeout,

    #[error("cannot access {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
}

impl Error {
    pub(crate) fn invariant(simplex: SimplexRef, reason: impl Into<String>) -> Self {
        Error::Invariant {
            simplex,
            reason: reason.into(),
        }
    }

    /// True for errors that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant { .. })
    }
}

/// Cooperative time budget checked by the long-running stages.
#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline(Option<std::time::Instant>);

impl Deadline {
    pub fn none() -> Self {
        Self(None)
    }

    pub fn at(instant: std::time::Instant) -> Self {
        Self(Some(instant))
    }

    pub fn after(budget: std::time::Duration) -> Self {
        Self(Some(std::time::Instant::now() + budget))
    }

    #[inline]
    pub fn expired(&self) -> bool {
        self.0.is_some_and(|t| std::time::Instant::now() >= t)
    }

    #[inline]
    pub fn check(&self) -> Result<()> {
        if self.expired() {
            Err(Error::Timeout)
        } else {
            Ok(())
        }
    }
}
