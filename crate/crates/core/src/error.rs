use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("matrix entries do not match the declared shape {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("incompatible dimensions: {0}")]
    DimensionMismatch(String),
    #[error("row and column selections have different lengths ({rows} vs {cols})")]
    NonSquareSelection { rows: usize, cols: usize },
    #[error("index {index} out of range for size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("base change matrix is not invertible")]
    SingularBaseChange,
    #[error("system is not completely controllable (rank {rank} < n = {n})")]
    NotControllable { rank: usize, n: usize },
    #[error("subspace enumeration needs {needed} candidates, bound is {bound}")]
    OracleTooLarge { needed: u128, bound: u128 },
    #[error("stability weight does not vanish on the dimension vector (theta.alpha = {0})")]
    NonzeroThetaAlpha(i64),
    #[error("invalid multi-index: {0}")]
    InvalidMultiIndex(String),
    #[error("matrix rank {rank} is below the required {required}")]
    RankDeficient { rank: usize, required: usize },
    #[error("point is not in the completely controllable locus")]
    NotInLocus,
    #[error("census needs {needed} states, bound is {bound}")]
    CensusTooLarge { needed: u128, bound: u128 },
    #[error("not enough Markov parameters: need {needed}, have {available}")]
    InsufficientData { needed: usize, available: usize },
    #[error("Hankel ranks do not stabilize within the supplied data")]
    NotStabilized,
    #[error("Markov data admits no realization: {0}")]
    InconsistentData(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::FieldMismatch => "field_mismatch",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NonSquareSelection { .. } => "non_square_selection",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::SingularBaseChange => "singular_base_change",
            Error::NotControllable { .. } => "not_controllable",
            Error::OracleTooLarge { .. } => "oracle_too_large",
            Error::NonzeroThetaAlpha(_) => "nonzero_theta_alpha",
            Error::InvalidMultiIndex(_) => "invalid_multi_index",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::NotInLocus => "not_in_locus",
            Error::CensusTooLarge { .. } => "census_too_large",
            Error::InsufficientData { .. } => "insufficient_data",
            Error::NotStabilized => "not_stabilized",
            Error::InconsistentData(_) => "inconsistent_data",
            Error::Parse(_) => "parse",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }

    /// `true` for malformed input, `false` for well-formed input on which a computation failed.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::ShapeMismatch { .. }
                | Error::FieldMismatch
                | Error::DimensionMismatch(_)
                | Error::NonSquareSelection { .. }
                | Error::IndexOutOfRange { .. }
                | Error::InvalidMultiIndex(_)
                | Error::NonzeroThetaAlpha(_)
                | Error::Parse(_)
                | Error::Json(_)
                | Error::Io(_)
        )
    }
}
