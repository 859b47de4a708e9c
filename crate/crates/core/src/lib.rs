//! Spectra of quantum (metric) graphs under the edge-switch transformation.
//!
//! The crate solves the Neumann spectrum of a closed metric graph with
//! optional magnetic phases, compares the spectra before and after a switch
//! of two edges at a vertex, and computes the statistics used to test
//! interlacing and random-matrix behaviour.

pub mod ensemble;
pub mod error;
pub mod graph;
pub mod io;
pub mod presets;
pub mod solver;
pub mod stats;
pub mod units;

pub use error::{EnsembleError, GraphError, IoError, SolveError, StatsError};
pub use graph::{Edge, EdgeId, Length, MetricGraph, SwitchDescriptor, VertexId, Violation};
pub use solver::{solve_spectrum, SolverConfig, Spectrum};
pub use units::KWindow;
