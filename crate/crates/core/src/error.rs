use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("order cap exceeded: order {order} > cap {cap}")]
    OrderCap { order: usize, cap: usize },

    #[error("malformed group spec: {0}")]
    SpecParse(String),

    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("malformed input file: {0}")]
    Malformed(String),

    #[error("subgroup is not normal in its parent")]
    NotNormal,

    #[error("semidirect action is invalid: {0}")]
    BadAction(String),

    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GroupError>;
