use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} is beyond the table (max index {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("coefficient table holds indices up to {available}, but {needed} is required")]
    TableTooShort { needed: usize, available: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument lies on the branch cut (-inf, -1]")]
    BranchCut,

    #[error("partition sum for j = {j} exceeds the cost ceiling j <= {limit}")]
    CostLimit { j: usize, limit: usize },

    #[error("precision of {given} bits is below the {required} bits this evaluation needs")]
    PrecisionInsufficient { required: u32, given: u32 },

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("trapezoid sums did not settle below the tolerance by {nodes} nodes (last deltas {last_deltas:?})")]
    NonConvergence { nodes: usize, last_deltas: [f64; 2] },

    #[error("malformed table data: {0}")]
    Format(String),

    #[error("|a_{index}| exceeds 1; the tail model for the e estimate does not hold")]
    PrefixBound { index: usize },
}
