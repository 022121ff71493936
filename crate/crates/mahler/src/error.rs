use thiserror::Error;

/// Errors shared by the polynomial, quadrature, and measure engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarMismatch { left: usize, right: usize },

    #[error("evaluation point has a zero coordinate in variable {var} with a negative exponent present")]
    ZeroCoordinate { var: usize },

    #[error("polynomial is constant in variable {var}")]
    ConstantInVariable { var: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },

    #[error("quadrature dominated by singular nodes: {skipped} of {used} evaluations excluded")]
    SingularityDominated { skipped: u64, used: u64 },

    #[error("root solver did not converge after {sweeps} sweeps (max residual {max_residual:.3e})")]
    NumericalFailure {
        sweeps: usize,
        max_residual: f64,
        residuals: Vec<f64>,
    },

    #[error("polynomial vanishes on the contour: min |p| = {min_abs:.3e} against scale {scale:.3e}")]
    ZeroOnContour { min_abs: f64, scale: f64 },

    #[error("contour count is not near an integer: raw = {raw_re:.6} + {raw_im:.6}i, residual {residual:.3e}")]
    NonIntegral {
        raw_re: f64,
        raw_im: f64,
        residual: f64,
    },

    #[error("series outside its convergence region: |r| = {r_abs:.6} but the torus bound is {bound:.6}")]
    DivergentSeries { r_abs: f64, bound: f64 },

    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),

    #[error("slice roots straddle the test circle: {inside} inside, {outside} outside (margin {margin:.1e})")]
    MixedRoots {
        inside: usize,
        outside: usize,
        margin: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
