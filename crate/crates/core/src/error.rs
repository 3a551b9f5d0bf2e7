use thiserror::Error;

pub type Result<T, E = ArcError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArcError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("weights live in different boxes: ({0},{1}) vs ({2},{3})")]
    BoxMismatch(usize, usize, usize, usize),

    #[error("partition {0} does not fit in the {1}x{2} box")]
    PartitionOutsideBox(String, usize, usize),

    #[error("invalid position {pos} for a weight of length {len}: {reason}")]
    BadPosition {
        pos: usize,
        len: usize,
        reason: &'static str,
    },

    #[error("diagram is not oriented: {0}")]
    NotOriented(String),

    #[error("enumeration bound exceeded: {what} has {size} elements, cap is {cap}")]
    BoundExceeded {
        what: String,
        size: usize,
        cap: usize,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{0} is not a simple label of this algebra")]
    UnknownLabel(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("module is not Delta-filtered: {0}")]
    NotDeltaFiltered(String),

    #[error("surgery produced an unreadable picture: {0}")]
    Surgery(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}
