use thiserror::Error;

/// Failures raised while building or validating geometric inputs.
///
/// Certification outcomes (an inequality that fails to hold, an identity whose
/// two sides disagree) are not errors: they are recorded in the returned
/// reports so that sweeps can continue and print diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample count {0} must be even and at least 8")]
    BadSampleCount(usize),
    #[error("non-finite value at sample {0}")]
    NonFinite(usize),
    #[error("derivative order {0} unsupported (expected 1, 2 or 3)")]
    BadDerivativeOrder(usize),
    #[error("band limit {band} exceeds n/2 - 1 for n = {n}")]
    BandTooWide { band: usize, n: usize },
    #[error("sample counts differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("sphere grid needs n_theta >= 4 and even n_phi >= 8, got {n_theta}x{n_phi}")]
    BadGrid { n_theta: usize, n_phi: usize },
    #[error("fields live on different sphere grids")]
    GridMismatch,
    #[error("spherical harmonic degree {degree}, order {order} unsupported")]
    BadHarmonic { degree: usize, order: i64 },
    #[error(
        "{what} violates {condition} at {count} node(s), first at index {first} (value {value:e})"
    )]
    Invalid {
        what: &'static str,
        condition: &'static str,
        count: usize,
        first: usize,
        value: f64,
    },
    #[error("surface not strictly convex at {} node(s): {nodes:?}", nodes.len())]
    NotConvexSurface { nodes: Vec<usize> },
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
