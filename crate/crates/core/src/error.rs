use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty sample vector")]
    EmptySamples,
    #[error("system is numerically singular at column {column}")]
    Singular { column: usize },
    #[error("z = {re} + {im}i lies on the branch cut of z^nu")]
    BranchCut { re: f64, im: f64 },
    #[error("coefficient {name} is not positive (value {value} at x = {x})")]
    NonPositiveCoefficient { name: &'static str, x: f64, value: f64 },
    #[error("fractional order {0} outside (0, 2)")]
    InvalidOrder(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("parameter domain violation: {0}")]
    Domain(&'static str),
    #[error("initial data not resolved: relative tail {tail:e}")]
    UnresolvedInitialData { tail: f64 },
    #[error("time {t} outside the contour window [{t0}, {t1}]")]
    TimeOutsideWindow { t: f64, t0: f64, t1: f64 },
    #[error("forcing pole at {re} + {im}i lies on the contour")]
    PoleOnContour { re: f64, im: f64 },
    #[error("node {node} did not converge up to n = {n_max}")]
    NodeNotConverged { node: usize, n_max: usize },
    #[error("node {node} at |z| = {modulus} is not certified (eps = 0)")]
    NodeNotCertified { node: usize, modulus: f64 },
    #[error("a + z^nu b vanishes near z = {re} + {im}i")]
    DegenerateLeadingCoefficient { re: f64, im: f64 },
    #[error("quadrature did not reach target accuracy up to N = {n_max}")]
    QuadratureNotConverged { n_max: usize },
    #[error("optimizer failed: {0}")]
    Optimizer(&'static str),
}
