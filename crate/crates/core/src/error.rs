use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what}: size {actual} exceeds bound {limit}")]
    SizeBound {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("{what}: budget of {budget} exceeded")]
    BudgetExceeded { what: &'static str, budget: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph must be connected")]
    Disconnected,

    #[error("multi-digraph is not Eulerian")]
    NotEulerian,

    #[error("edge {{{0},{1}}} has odd or zero arc total {2}")]
    OddEdgeTotal(usize, usize, u64),

    #[error("arc multiplicities violate the core relations: {0}")]
    MultiplicityRelation(String),

    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),

    #[error("squared eigenvalue clusters {left} and {right} are only {gap:e} apart (tolerance {tol:e})")]
    ClusterAmbiguity {
        left: f64,
        right: f64,
        gap: f64,
        tol: f64,
    },

    #[error("exponent {index} has rounding residual {residual:e} at {precision} bits")]
    RoundingResidual {
        index: usize,
        residual: f64,
        precision: u32,
    },

    #[error("moment system is singular")]
    SingularSystem,

    #[error("moment consistency failed at order {order}: relative error {relative:e}")]
    MomentMismatch { order: usize, relative: f64 },

    #[error("product of signed characteristic polynomials is negative at {0}")]
    NegativeProduct(f64),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
