use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("{{{0}, {1}}} is not an edge of the tree")]
    NotAnEdge(usize, usize),
    #[error("invalid Prüfer sequence: {0}")]
    InvalidPrufer(String),
    #[error("{op}: size {got} exceeds the supported range {range}")]
    Guard {
        op: &'static str,
        got: usize,
        range: &'static str,
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("missing variable {0}")]
    MissingVariable(String),
    #[error("weight constraint violated: {0}")]
    Constraint(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("invalid arrowflow: {0}")]
    InvalidArrowflow(String),
    #[error("arrowflow is not unital ({0})")]
    NotUnital(String),
    #[error("invalid catalyst: {0}")]
    InvalidCatalyst(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("path family is not full: {0}")]
    NotFull(String),
    #[error("invalid network input: {0}")]
    Network(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
