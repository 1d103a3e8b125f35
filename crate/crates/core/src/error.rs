use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("radius {r} outside [{rho}, 1]")]
    OutOfDomain { r: f64, rho: f64 },

    #[error("sample count mismatch: {left} vs {right}")]
    SampleMismatch { left: usize, right: usize },

    #[error("degree undefined: sample {index} has modulus {modulus:e}")]
    DegreeUndefined { index: usize, modulus: f64 },

    #[error("zero {index} would leave the annulus after projection (modulus {modulus})")]
    InfeasibleZero { index: usize, modulus: f64 },

    #[error("evaluation point within {distance:e} of a pole")]
    NearPole { distance: f64 },

    #[error("wrong geometry class: Hopf constant c = {c:e} ({expected})")]
    WrongHopfSign { c: f64, expected: &'static str },

    #[error("no bifurcation instant t_{k} for p = {p}: mu_1 > -p^2 for every finite t")]
    NoInstant { p: i32, k: i32 },

    #[error("eigenvalue bracket failed on a {n_grid}-node grid: {reason}")]
    Bracket { n_grid: usize, reason: String },

    #[error("immersion failure at node ({i}, {j})")]
    Immersion { i: usize, j: usize },

    #[error("immersion bound violated: sup|u| = {sup} >= 1")]
    ImmersionBound { sup: f64 },

    #[error("newton diverged after {iterations} iterations (residual {residual:e})")]
    Divergence { iterations: usize, residual: f64 },

    #[error("no convergence within {iterations} iterations (residual {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },

    #[error("singular linear system at pivot {0}")]
    Singular(usize),

    #[error("continuation step failed after {halvings} halvings at t = {t}")]
    StepFailure { halvings: usize, t: f64 },

    #[error("transversality check failed: derivative {0:e} is not negative")]
    Transversality(f64),

    #[error("i/o: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
