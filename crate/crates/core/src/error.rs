use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// The variants split into three families that the CLI maps onto exit codes:
/// structural/parse problems, invalid vertex conditions, and numerical domain
/// events (poles, scars, degeneracies).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown vertex `{vertex}` referenced by edge `{edge}`")]
    UnknownVertex { edge: String, vertex: String },

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),

    #[error("edge `{edge}` has invalid length {length}")]
    InvalidLength { edge: String, length: f64 },

    #[error("edge `{edge}`: {reason}")]
    InvalidEndpoints { edge: String, reason: String },

    #[error("coordinate {x} outside [0, {max}] on edge `{edge}`")]
    CoordinateOutOfRange { edge: String, x: f64, max: f64 },

    #[error("vertex `{vertex}`: {reason}")]
    InvalidCondition { vertex: String, reason: String },

    #[error("condition has dimension {found}, vertex `{vertex}` has degree {expected}")]
    DimensionMismatch {
        vertex: String,
        expected: usize,
        found: usize,
    },

    #[error("wavenumber k = 0 is excluded")]
    ZeroWavenumber,

    #[error("matrix (A + ikB) is singular at k = {k}")]
    SingularCondition { k: String },

    #[error("{0} requires a compact graph (no leads)")]
    RequiresCompact(&'static str),

    #[error("{0} requires an open graph (at least one lead)")]
    RequiresOpen(&'static str),

    #[error("edge `{0}` is a lead; a bond is required")]
    NotABond(String),

    #[error("perfect scar at k = {k} (|lambda - 1| = {distance:e}); use the regularized evaluation")]
    ScarPresent { k: f64, distance: f64 },

    #[error("degenerate scar subspace of dimension {dimension} at k = {k}")]
    DegenerateScar { k: f64, dimension: usize },

    #[error("degenerate eigenvalue of multiplicity {multiplicity} at k = {k}")]
    DegenerateRoot { k: f64, multiplicity: usize },

    #[error("k = {k} is not a root of the secular equation (residual {residual:e})")]
    NotARoot { k: f64, residual: f64 },

    #[error("energy lies on the discrete spectrum; nearest eigen-wavenumber {nearest_k}")]
    Pole { nearest_k: f64 },

    #[error("root count changed under scan refinement ({coarse} vs {fine}) in [{k_min}, {k_max}]")]
    ScanTooCoarse {
        k_min: f64,
        k_max: f64,
        coarse: usize,
        fine: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("linear system is singular: {0}")]
    Singular(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag used in CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownVertex { .. }
            | Error::UnknownEdge(_)
            | Error::DuplicateId(_)
            | Error::InvalidLength { .. }
            | Error::InvalidEndpoints { .. }
            | Error::Parse(_) => "parse",
            Error::InvalidCondition { .. } | Error::DimensionMismatch { .. } => "condition",
            Error::CoordinateOutOfRange { .. } | Error::InvalidArgument(_) => "argument",
            Error::ScarPresent { .. } => "scar",
            Error::DegenerateScar { .. } | Error::DegenerateRoot { .. } => "degeneracy",
            Error::Pole { .. } => "pole",
            _ => "domain",
        }
    }
}
