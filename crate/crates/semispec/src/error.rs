use crate::symbols::PhasePoint;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum SemiError {
    #[error("dimension mismatch: expected n = {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("derivative order {0} not supported (max 2)")]
    UnsupportedOrder(u8),

    #[error("ellipticity precondition violated at |X| = {radius:.4}: Re p0 = {value:.3e} at {witness}")]
    EllipticityViolated {
        witness: PhasePoint,
        radius: f64,
        value: f64,
    },

    #[error("trajectory diverged: |X({t})| = {norm:.3e} starting from {start}")]
    FlowDiverged { start: PhasePoint, t: f64, norm: f64 },

    #[error("symbol is not in Schrödinger form: {0}")]
    NotSchrodinger(String),

    #[error("origin is not a critical zero of p0: |p0(0)| = {value:.3e}, |dp0(0)| = {grad:.3e}")]
    OriginNotCritical { value: f64, grad: f64 },

    #[error("sector degenerate: Hamilton map eigenvalue {0} lies on the real axis")]
    SectorDegenerate(String),

    #[error("Galerkin basis too small: N = {n} < 4*count = {need}")]
    BasisTooSmall { n: usize, need: usize },

    #[error("insufficient decay at the truncation boundary: |u| = {0:.3e} > 1e-14")]
    InsufficientDecay(f64),

    #[error("empty sample plan: {0}")]
    EmptySamplePlan(String),

    #[error("spectral hit: λ = {re:.6e}{im:+.6e}i lies on the spectrum (σ_min = {sigma:.3e})")]
    SpectralHit { re: f64, im: f64, sigma: f64 },

    #[error("linear algebra failure: {0}")]
    Linalg(String),

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<ndarray_linalg::error::LinalgError> for SemiError {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        SemiError::Linalg(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, SemiError>;
