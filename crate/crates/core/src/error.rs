use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("canonical associate of zero is undefined")]
    ZeroHasNoAssociate,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("gram matrix is degenerate")]
    DegenerateGram,
    #[error("gram matrix is not conjugate-symmetric")]
    NotHermitian,
    #[error("enumeration requires definite lattice")]
    EnumerationRequiresDefinite,
    #[error("operation requires a positive definite lattice")]
    IndefiniteLattice,
    #[error("lattice has no ambient embedding")]
    NoAmbient,
    #[error("subspace not isotropic")]
    SubspaceNotIsotropic,
    #[error("reflection vector must have norm 2, got {0}")]
    ReflectionNorm(String),
    #[error("triflection precondition violated: {0}")]
    TriflectionPrecondition(String),
    #[error("group not finite within cap {0}")]
    CapExceeded(usize),
    #[error("space order {0} too large for brute-force enumeration")]
    SpaceTooLarge(u64),
    #[error("isotropic-subspace enumeration needs all invariant factors associate to theta")]
    MixedInvariantFactors,
    #[error("incompatible invariant factors: {0}")]
    IncompatibleFactors(String),
    #[error("vector has wrong norm: expected {expected}, got {got}")]
    WrongNorm { expected: String, got: String },
    #[error("imaginary part must be positive")]
    NotInUpperHalfPlane,
    #[error("fundamental-domain reduction did not converge")]
    ReductionDiverged,
    #[error("near-boundary, increase precision")]
    NearBoundary,
    #[error("singular Hesse cubic")]
    SingularHesseCubic,
    #[error("ambiguous, refine")]
    AmbiguousClassification,
    #[error("unknown check id {id}; valid ids: {valid}")]
    UnknownCheck { id: String, valid: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
