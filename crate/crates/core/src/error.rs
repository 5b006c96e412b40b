use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no sign change in bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("iteration did not converge after {iterations} steps: {context}")]
    NonConvergence { iterations: usize, context: String },

    #[error("root not bracketed: {0}")]
    RootNotBracketed(String),

    #[error("interval operation invalid: {0}")]
    IntervalUndefined(String),

    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),

    #[error("quadrature did not converge (last node count {nodes})")]
    QuadratureNonConvergence { nodes: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
