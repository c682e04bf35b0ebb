use thiserror::Error;

/// Failures of the exact integer routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix has no rows")]
    Empty,
    #[error("row {row} has {len} entries, expected {dim}")]
    NotSquare { row: usize, len: usize, dim: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("integer overflow during {step}")]
    Overflow { step: &'static str },
    #[error("minor order {order} out of range for a {dim}x{dim} matrix")]
    InvalidOrder { order: usize, dim: usize },
    #[error("invalid Smith decomposition: {0}")]
    InvalidDecomposition(&'static str),
    #[error("matrix is singular")]
    Singular,
    #[error("vector is not in the lattice")]
    NotInLattice,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("degenerate lattice: sublattice matrix is singular")]
    DegenerateLattice,
    #[error("degenerate triangle: ps - qr = 0")]
    DegenerateTriangle,
    #[error("element or multiset does not belong to the group {0}")]
    GroupMismatch(String),
    #[error("invalid modulus {0}")]
    InvalidModulus(i64),
    #[error("difference multiset is not closed under negation")]
    NonSymmetricMultiset,
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
