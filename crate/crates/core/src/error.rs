use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unbounded")]
    Unbounded,

    #[error("empty")]
    Empty,

    #[error("degenerate")]
    Degenerate,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("n must be even (got n = {0})")]
    OddPolygon(usize),

    #[error("invalid polygon description: {0}")]
    InvalidPolygon(String),

    #[error("no parameters found for n = {n}, r = {r} after {rounds} rounds")]
    NoParameters { n: usize, r: usize, rounds: usize },

    #[error("inequality rows carry no (block, index) labels")]
    MissingLabels,

    #[error("face is not in the face lattice")]
    FaceNotInLattice,

    #[error("apex of cone: f0 + f3 = 10")]
    ApexOfCone,

    #[error("certificate check failed for deleted block t = {t}: {reason}")]
    Certificate { t: usize, reason: String },

    #[error("counting identity violated: {0}")]
    Counting(String),

    #[error("expected a {expected}-dimensional polytope, got dimension {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
