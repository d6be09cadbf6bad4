use thiserror::Error;

/// Errors produced by curve evaluation, surface construction and the
/// residual/ODE/quadrature machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("curve evaluation produced a non-finite value at s = {0}")]
    NonFiniteEval(f64),

    #[error("degenerate curve: |d1| = {speed:.3e} at s = {s}")]
    DegenerateCurve { s: f64, speed: f64 },

    #[error("parameter (s, t) = ({s}, {t}) outside the immersion domain")]
    OutOfDomain { s: f64, t: f64 },

    #[error("constraint residual {residual:.3e} exceeds tolerance {tol:.1e} ({what})")]
    ConstraintViolation {
        what: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("degenerate metric (E*G - F^2 = {det:.3e}) at (s, t) = ({s}, {t})")]
    DegenerateMetric { s: f64, t: f64, det: f64 },

    #[error("non-Lagrangian tangent plane: |det_C| = {modulus:.6} differs from 1 beyond 1e-6")]
    NonLagrangian { modulus: f64 },

    #[error("operation requires a cyclic (circle-foliated) surface, got {family}")]
    NotCyclic { family: &'static str },

    #[error("leaf circle degenerates (radius {radius:.3e}) at s = {s}")]
    DegenerateLeaf { s: f64, radius: f64 },

    #[error("grid too coarse: need at least {min}x{min}, got {n_s}x{n_t}")]
    GridTooCoarse { n_s: usize, n_t: usize, min: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("|C| = {0} is outside the admissible range (need |C| > {1})")]
    RegimeViolation(f64, f64),

    #[error("profile curve failed to close: gap {gap:.3e} exceeds {tol:.1e}")]
    ClosureFailure { gap: f64, tol: f64 },

    #[error("ODE integration truncated at s = {s}: {reason}")]
    OdeTruncated { s: f64, reason: String },

    #[error("ODE integrator exceeded {0} steps")]
    OdeStepLimit(usize),

    #[error("quadrature failed to converge on [{a}, {b}] (non-finite or too singular integrand)")]
    QuadratureFailure { a: f64, b: f64 },

    #[error("root bracketing failed: f({a}) and f({b}) have the same sign")]
    BracketFailure { a: f64, b: f64 },

    #[error("rational evaluation hit a pole: denominator = {0:.3e}")]
    PoleEncountered(f64),

    #[error("orthonormality violated: {0}")]
    NotOrthonormal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
