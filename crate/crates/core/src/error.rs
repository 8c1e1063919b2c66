use crate::triangle::RuleType;

/// Errors produced anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("root finder did not reach the requested precision after {iterations} iterations (max residual {residual:e})")]
    RootNotConverged { iterations: usize, residual: f64 },

    #[error("polynomial has degree {0}; at least degree 1 is required")]
    ConstantPolynomial(usize),

    #[error("no rules of degree {0}: the degree must be at least 1")]
    InvalidDegree(i64),

    #[error("orbit has complex parameters and cannot be expanded into points")]
    ComplexOrbit,

    #[error("degenerate orbit: {0}")]
    DegenerateOrbit(String),

    #[error("no closed form is available for degree {degree} type {rtype}; use the numeric solver")]
    UnsupportedAnalytic { degree: u32, rtype: RuleType },

    #[error("degenerate solution: {0}")]
    DegenerateSolution(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("underdetermined system: {0}")]
    Underdetermined(String),

    #[error("type {rtype} violates the consistency condition {condition} for degree {degree}")]
    InconsistentType {
        degree: u32,
        rtype: RuleType,
        condition: String,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    NotFound(String),

    #[error("degenerate triangle: vertices span zero area")]
    DegenerateTriangle,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
