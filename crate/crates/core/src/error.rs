use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix must have dimension >= 1")]
    EmptyMatrix,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |M - M^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not a density matrix: {reason}")]
    NotDensity { reason: String },

    #[error("{algorithm} did not converge after {iterations} sweeps")]
    NoConvergence { algorithm: &'static str, iterations: usize },

    #[error("identity check `{check}` violated: residual {residual:e}")]
    IdentityViolated { check: &'static str, residual: f64 },

    #[error("imaginary part {imag:e} exceeds tolerance in {context}")]
    ImaginaryPart { context: &'static str, imag: f64 },

    #[error("integration blow-up at t = {t}: |entry| = {magnitude:e}")]
    BlowUp { t: f64, magnitude: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vectors are (nearly) orthogonal, <chi|phi> = {overlap:e}: transformation is singular")]
    SingularProjector { overlap: f64 },

    #[error("precondition `{check}` failed: {detail}")]
    Precondition { check: &'static str, detail: String },

    #[error("proof-chain step `{step}` failed: residual {residual:e} > {tolerance:e}")]
    ChainStep {
        step: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("no Lax propagator is available for this seed")]
    NoPropagator,

    #[error("negative discriminant {discriminant:e}: x^2 - a x = x0 has no real roots")]
    NegativeDiscriminant { discriminant: f64 },

    #[error("singular normalization: |F_a(t)| = {value:e}")]
    SingularNormalization { value: f64 },

    #[error("elliptic modulus k = {0} outside [0, 1]")]
    ModulusOutOfRange(f64),

    #[error("fit did not converge: {0}")]
    FitNonConvergence(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
