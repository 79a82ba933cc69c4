//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors produced by model handling, sampling and the numerical kernels.
#[derive(Debug, Error)]
pub enum IsoError {
    /// Incompatible dimensions between matrices, vectors or frames.
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    Dimension {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A parallel-surface parameter hit a focal time of the family.
    #[error("parameter t = {t} is within guard distance of focal time theta_{j} = {theta}")]
    FocalTime { t: f64, j: usize, theta: f64 },

    /// Newton projection onto a model failed to converge.
    #[error("projection onto {model} did not converge: residual {residual:.3e} after {iters} iterations")]
    Projection {
        model: String,
        residual: f64,
        iters: usize,
    },

    /// A sampled point violated a model precondition (focal locus, degenerate gradient...).
    #[error("sampling {model} failed: {reason}")]
    Sampling { model: String, reason: String },

    /// Loaded or computed model data is inconsistent with its declared spec.
    #[error("model consistency check failed for {model}: {reason}")]
    ModelConsistency { model: String, reason: String },

    /// Registry lookup miss.
    #[error("unknown model '{name}'; available: {available}")]
    UnknownModel { name: String, available: String },

    /// Malformed model data file or value expression.
    #[error("parse error in {what}: {reason}")]
    Parse { what: String, reason: String },

    /// An operation was asked of a model kind that does not support it.
    #[error("operation '{op}' is not applicable to model '{model}' ({kind})")]
    NotApplicable {
        op: &'static str,
        model: String,
        kind: &'static str,
    },

    /// Invalid configuration passed to a kernel or the runner.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// I/O failure while reading model data or writing reports.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// JSON (de)serialization failure.
    #[error("json error in {what}: {source}")]
    Json {
        what: String,
        #[source]
        source: serde_json::Error,
    },
}
