use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {context}: {left} vs {right}")]
    Shape {
        context: String,
        left: String,
        right: String,
    },
    #[error("invalid morphism: {0}")]
    Invalid(String),
    #[error("{what} is not unitary (residual {residual:e})")]
    Unitarity { what: String, residual: f64 },
    #[error("not simple: {reason}")]
    NotSimple { reason: String, center_dim: usize },
    #[error("decomposition failed after retries (residual {residual:e})")]
    DecompositionFailed { residual: f64 },
    #[error("projector spectrum not binary: eigenvalue {eigenvalue}")]
    SpectrumNotBinary { eigenvalue: f64 },
    #[error("adjacency matrix not symmetric at ({i}, {j})")]
    NonSymmetric { i: usize, j: usize },
    #[error("adjacency entry ({i}, {j}) = {value} is not 0 or 1")]
    NonBoolean { i: usize, j: usize, value: i64 },
    #[error("{what} is not an orthogonal projection (residual {residual:e})")]
    NotProjection { what: String, residual: f64 },
    #[error("relation {relation} violated (residual {residual:e})")]
    RelationViolation { relation: String, residual: f64 },
    #[error("axiom {what} fails (residual {residual:e})")]
    AxiomFailure { what: String, residual: f64 },
    #[error("{0}")]
    Mismatch(String),
    #[error("syntax error at {line}:{col}: expected one of [{}], found {found}", expected.join(", "))]
    Syntax {
        line: usize,
        col: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unbound name `{0}`")]
    Name(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_err(context: &str, left: impl ToString, right: impl ToString) -> Error {
    Error::Shape {
        context: context.to_string(),
        left: left.to_string(),
        right: right.to_string(),
    }
}
