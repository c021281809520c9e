use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not skew with respect to the Minkowski product (asymmetry {residual:.3e})")]
    NotSkew { residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {re}+{im}i lies outside the analyticity domain of {model}")]
    OutsideDomain { model: String, re: f64, im: f64 },

    #[error("analytic continuation unavailable for {0}")]
    ContinuationUnavailable(String),

    #[error("Yang-Baxter residual {residual:.3e} exceeds tolerance {tolerance:.1e}; D_n is not a representation")]
    NotRepresentation { residual: f64, tolerance: f64 },

    #[error("particle number {n} exceeds the supported cap {cap}")]
    SectorTooLarge { n: usize, cap: usize },

    #[error("boost by {0} is not compatible with the rapidity grid")]
    GridIncompatibleBoost(f64),

    #[error("coinciding grid nodes {0} and {1}")]
    CoincidingNodes(usize, usize),

    #[error("expansion cutoff {cutoff} exceeds truncation N_max = {n_max}")]
    CutoffTooLarge { cutoff: usize, n_max: usize },

    #[error("representation has no invariant vector")]
    NoInvariantVector,

    #[error("intertwining precondition fails (residual {0:.3e})")]
    NotIntertwiner(f64),

    #[error("orderings of the warped operator disagree (residual {residual:.3e}); Q is not skew")]
    OrderingMismatch { residual: f64 },

    #[error("{0}")]
    Rejected(String),
}

pub type Result<T> = std::result::Result<T, Error>;
