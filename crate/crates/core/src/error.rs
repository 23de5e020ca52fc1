use crate::lad::LadSolution;

/// Errors surfaced by generation, decoding, certification and reporting.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDimension(String),

    #[error("invalid sparsity: k = {k} exceeds vector length n = {n}")]
    InvalidSparsity { k: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is rank deficient (no invertible row basis found)")]
    RankDeficient,

    /// Pivot cap exceeded; carries the best iterate reached so far.
    #[error("solver did not converge within {iterations} pivots")]
    NonConvergence {
        iterations: usize,
        best: Box<LadSolution>,
    },

    #[error("enumeration budget exceeded: {required} LPs needed, cap is {cap}")]
    EnumerationLimit { required: u128, cap: u128 },

    #[error("degenerate support: every row of H on the support is zero")]
    DegenerateSupport,

    #[error("invalid witness: balancedness margin is positive ({margin})")]
    InvalidWitness { margin: f64 },

    #[error("empty table: refusing to write {path}")]
    EmptyTable { path: String },

    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse failure in {path}: {detail}")]
    Parse { path: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
