use thiserror::Error;

/// Errors produced by mesh construction, Lie-kernel series and the harness.
#[derive(Debug, Error)]
pub enum Error {
    /// The principal logarithm is undefined: `tr U` is too close to -2,
    /// i.e. the link is antipodal to the identity. Signals a link too far
    /// from the identity (mesh too coarse for the given field).
    #[error("principal logarithm ambiguous: tr U = -2 within tolerance")]
    BranchAmbiguity,

    /// Series truncation order must be >= 1.
    #[error("invalid truncation order {0}, must be >= 1")]
    InvalidOrder(usize),

    /// Mesh resolution below the periodic minimum.
    #[error("invalid mesh size {0}, need at least 2 cells per direction")]
    InvalidSize(usize),

    /// An entity reference does not address a valid mesh entity.
    #[error("invalid entity reference")]
    InvalidRef,

    /// The two vertices are not joined by a mesh edge.
    #[error("vertices are not adjacent in the mesh")]
    NotAdjacent,

    /// Test-field case id outside 1..=4.
    #[error("unknown test-field case {0}")]
    UnknownCase(u32),

    /// A power-law fit needs at least three data points.
    #[error("fit requires at least 3 records, got {0}")]
    FitTooFewPoints(usize),

    /// CSV / report emission failure.
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}
