use thiserror::Error;

use crate::graph::{EdgeId, Violation};
use crate::solver::Spectrum;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown edge {}", .0 .0)]
    UnknownEdge(EdgeId),
    #[error("invalid switch: {0}")]
    InvalidSwitch(String),
    #[error("transfer would shrink edge {} to zero length", .0 .0)]
    DegenerateEdge(EdgeId),
    #[error("transfer amount must be non-negative")]
    NegativeTransfer,
    #[error("unknown preset '{0}' (expected one of goe_a, goe_b, gue)")]
    UnknownPreset(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("wavenumber must be positive, got {0}")]
    NonPositiveWavenumber(f64),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("eigenphase decomposition did not converge at k = {0}")]
    Decomposition(f64),
    #[error("root refinement failed near k = {k}: residual {residual:e}")]
    Refinement { k: f64, residual: f64 },
    #[error("spectrum incomplete: {reason}")]
    Incomplete {
        reason: String,
        spectrum: Box<Spectrum>,
    },
    #[error("discretized eigenproblem failed: {0}")]
    Oracle(String),
}

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("spectrum is empty")]
    EmptySpectrum,
    #[error("spectra cover different windows")]
    MismatchedWindows,
    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },
    #[error("fit did not converge: {0}")]
    FitFailed(String),
}

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("length jitter infeasible: {0}")]
    JitterInfeasible(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: malformed CSV: {source}")]
    Csv { path: String, source: csv::Error },
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
