use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent edge-list input.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A value outside its documented domain (alpha, grid size, ...).
    #[error("{0}")]
    Parameter(String),

    /// Operands built for different graph sizes.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// Power iteration ran out of iterations.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    Convergence { iterations: usize, residual: f64 },

    /// Eigensolver or other numeric routine failed to reach tolerance.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Power-law fit had too little usable data.
    #[error("power-law fit: {0}")]
    Fit(String),

    /// A sweep cell failed; carries the grid coordinates.
    #[error("sweep cell (theta1={theta1}, theta2={theta2}): {source}")]
    Cell {
        theta1: f64,
        theta2: f64,
        #[source]
        source: Box<Error>,
    },

    /// Sweep file did not match the expected schema.
    #[error("schema: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
