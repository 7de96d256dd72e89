use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M^H| = {deviation:e} exceeds {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("{what} did not converge within {sweeps} sweeps")]
    NoConvergence { what: &'static str, sweeps: usize },
    #[error("not normalized: {what} = {value} (expected 1)")]
    NotNormalized { what: &'static str, value: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("invalid dimensions: {0}")]
    Dim(String),
    #[error("zero state: squared norm {norm_sq:e} is below threshold")]
    ZeroState { norm_sq: f64 },
    #[error("states are not one-sided orthogonal (trace overlaps {eq1:e}, {eq2:e})")]
    NotOneSided { eq1: f64, eq2: f64 },
    #[error("states are not orthogonal: |<psi|phi>| = {0:e}")]
    NotOrthogonal(f64),
    #[error("degenerate subspace: |<psi|phi>| = {0} is too close to 1")]
    DegenerateSubspace(f64),
    #[error("objective is not finite at x = {x}")]
    NonFiniteObjective { x: f64 },
    #[error("no sign change on [{a}, {b}]: g(a) = {ga}, g(b) = {gb}")]
    NoSignChange { a: f64, b: f64, ga: f64, gb: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index ({i}, {j}) out of range for {dim_a}x{dim_b} state")]
    Index { i: usize, j: usize, dim_a: usize, dim_b: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::NoConvergence { .. } | Error::NonFiniteObjective { .. })
    }
}
