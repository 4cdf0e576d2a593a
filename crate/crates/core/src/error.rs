use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    Shape { op: &'static str, left_rows: usize, left_cols: usize, right_rows: usize, right_cols: usize },

    #[error("{0}: not a weighing-type matrix (Gram is not a rational multiple of the identity)")]
    NotWeighing(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown {kind} '{name}'")]
    UnknownName { kind: &'static str, name: String },

    #[error("pairing error: {0}")]
    Pairing(String),

    #[error("value not representable in Z[i, sqrt2, 1/2]: {0}")]
    NotRepresentable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed document: {0}")]
    Malformed(#[from] serde_json::Error),

    #[error("symbol tuple count {count} exceeds limit {limit}")]
    TupleOverflow { count: u128, limit: u128 },

    #[error("internal consistency error: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn shape(op: &'static str, l: (usize, usize), r: (usize, usize)) -> Self {
        Error::Shape { op, left_rows: l.0, left_cols: l.1, right_rows: r.0, right_cols: r.1 }
    }
}
