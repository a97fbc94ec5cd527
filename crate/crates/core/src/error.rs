use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("composition degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("root solver did not converge for degree {degree} after {iterations} iterations (residual {residual:e})")]
    RootSolver { degree: usize, iterations: usize, residual: f64 },

    #[error("invalid generator system: {0}")]
    InvalidSystem(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no repelling fixed point found for generator {generator} (max multiplier {multiplier})")]
    NoRepellingFixedPoint { generator: usize, multiplier: f64 },

    #[error("trap disk {disk} is not mapped into the trap by generator {generator} near {point}")]
    TrapNotInvariant { disk: usize, generator: usize, point: Complex64 },

    #[error("bracket [{lo}, {hi}] does not straddle the root (log rho = {f_lo}, {f_hi})")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("point cloud too sparse: median lookup distance {median:e} exceeds mesh {mesh:e}")]
    SparseCloud { median: f64, mesh: f64 },

    #[error("power iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("ambiguous piece classification: {mismatched} of {total} transfers cross pieces")]
    AmbiguousPieces { mismatched: usize, total: usize },

    #[error("nonpositive denominator {0}")]
    NonpositiveDenominator(f64),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("scene error: {0}")]
    Scene(String),

    #[error("scene parse error at line {line}, column {column}: {message}")]
    SceneParse { line: usize, column: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
