use crate::triangle::Degeneracy;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by the whole crate. Domain violations are reported as
/// data (`validate`, feasibility certificates) wherever the contract says so;
/// everything that genuinely prevents an answer lands here.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    /// A boundary configuration where radii leave (0, ∞). Carried as a tagged
    /// value so solvers and line searches can branch on the kind.
    #[error("degenerate configuration: {0}")]
    Degenerate(Degeneracy),

    #[error("infeasible problem: {0}")]
    Infeasible(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}
