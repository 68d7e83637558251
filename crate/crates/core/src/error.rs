use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = 2 is not allowed, an odd prime is required")]
    EvenPrime,
    #[error("prime {0} exceeds the supported range")]
    PrimeOutOfRange(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("empty input")]
    EmptyInput,
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("dimension {dim} out of range (complex has dimension {max})")]
    DimensionOutOfRange { dim: usize, max: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("simplex {0:?} is not in the complex")]
    UnknownSimplex(Vec<usize>),

    #[error("no dual cycle pairs nonzero with the cocycle mod p")]
    NoDualCycle,
    #[error("no persistence pairs in dimension {0}")]
    EmptyDiagram(usize),
    #[error("class index {index} out of range ({len} pairs)")]
    ClassIndexOutOfRange { index: usize, len: usize },

    #[error("input is not closed over F_p (relation at simplex {0:?} sums to {1})")]
    NotClosed(Vec<usize>, u64),
    #[error("no lifting route succeeded")]
    Unliftable,
    #[error("complex too large for Smith normal form ({size} simplices, cap {cap})")]
    ComplexTooLargeForSnf { size: usize, cap: usize },
    #[error("p-torsion obstructs the integer system (p = {0})")]
    TorsionObstruction(u64),

    #[error("integer cochain is not a cocycle")]
    NotACocycle,
    #[error("Kronecker pairing is zero")]
    ZeroPairing,
    #[error("class does not vanish mod {0}")]
    NotDivisible(u64),
    #[error("division by {0} could not be validated")]
    ValidationFailed(u64),

    #[error("linear solver did not converge (residual {0:e})")]
    SolverDiverged(f64),
    #[error("cocycle inconsistent on edge {0:?} (defect {1:e})")]
    InconsistentCocycle(Vec<usize>, f64),
    #[error("vertex sets differ")]
    VertexSetMismatch,
    #[error("degenerate data")]
    DegenerateData,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name, used in JSON diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::EvenPrime => "EvenPrime",
            Error::PrimeOutOfRange(_) => "PrimeOutOfRange",
            Error::ZeroInverse => "ZeroInverse",
            Error::EmptyInput => "EmptyInput",
            Error::InvalidComplex(_) => "InvalidComplex",
            Error::DimensionOutOfRange { .. } => "DimensionOutOfRange",
            Error::DimensionMismatch(..) => "DimensionMismatch",
            Error::UnknownSimplex(_) => "UnknownSimplex",
            Error::NoDualCycle => "NoDualCycle",
            Error::EmptyDiagram(_) => "EmptyDiagram",
            Error::ClassIndexOutOfRange { .. } => "ClassIndexOutOfRange",
            Error::NotClosed(..) => "NotClosed",
            Error::Unliftable => "Unliftable",
            Error::ComplexTooLargeForSnf { .. } => "ComplexTooLargeForSnf",
            Error::TorsionObstruction(_) => "TorsionObstruction",
            Error::NotACocycle => "NotACocycle",
            Error::ZeroPairing => "ZeroPairing",
            Error::NotDivisible(_) => "NotDivisible",
            Error::ValidationFailed(_) => "ValidationFailed",
            Error::SolverDiverged(_) => "SolverDiverged",
            Error::InconsistentCocycle(..) => "InconsistentCocycle",
            Error::VertexSetMismatch => "VertexSetMismatch",
            Error::DegenerateData => "DegenerateData",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Format(_) => "Format",
            Error::Io(_) => "Io",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
