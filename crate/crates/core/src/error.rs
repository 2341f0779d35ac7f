use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("non-finite flux point (f_eps = {f_eps}, f_beta = {f_beta})")]
    NonFiniteFlux { f_eps: f64, f_beta: f64 },

    #[error("charge basis dimension {dim} exceeds the configured cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigensolver did not converge after {iterations} iterations (residual norms {residuals:?})")]
    NotConverged { iterations: usize, residuals: Vec<f64> },

    #[error("alpha_sb = {alpha} is in the localized regime; gap renormalization is undefined")]
    Localized { alpha: f64 },

    #[error("gap renormalization fixed point did not converge after {iterations} iterations")]
    RenormalizationNotConverged { iterations: usize },

    #[error("degenerate rates: {0}")]
    DegenerateRates(&'static str),

    #[error("empty flux window [{lo}, {hi}]")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("trace has {found} points inside the mask, at least {required} are needed")]
    InsufficientPoints { found: usize, required: usize },

    #[error("resonance at {delta_ghz} GHz lies outside the mask [{lo}, {hi}] GHz")]
    ResonanceOutsideMask { delta_ghz: f64, lo: f64, hi: f64 },

    #[error("trace shows no resonance (max |1 - t| = {depth:e})")]
    NoResonance { depth: f64 },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag, used in the CLI's JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::NonFiniteFlux { .. } => "non_finite_flux",
            Error::DimensionTooLarge { .. } => "dimension_too_large",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotConverged { .. } => "not_converged",
            Error::Localized { .. } => "localized",
            Error::RenormalizationNotConverged { .. } => "renormalization_not_converged",
            Error::DegenerateRates(_) => "degenerate_rates",
            Error::EmptyWindow { .. } => "empty_window",
            Error::InsufficientPoints { .. } => "insufficient_points",
            Error::ResonanceOutsideMask { .. } => "resonance_outside_mask",
            Error::NoResonance { .. } => "no_resonance",
            Error::UnknownPreset(_) => "unknown_preset",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
