//! Spectral statistics: counting functions, spectral shift, interlacing,
//! spacing distributions and the GOE–GUE transition fit.

mod counting;
mod fit;
mod rmt;
mod spacing;

pub use counting::{
    detect_missing_resonances, fluctuating_count, interlacing_degree, interlacing_violations,
    max_abs_shift, shift_distribution, shift_segments, weyl_count, CountingFunction,
    MissingResonanceReport, ShiftDistribution, ShiftSegment, SpectrumSide, SuspectInterval,
};
pub use fit::{fit_xi, fit_xi_histogram, TransitionFitResult, COVERAGE_FACTOR, MIN_SPACINGS, XI_MAX};
pub use rmt::{ks_distance, transition_pdf, transition_scale, wigner_cdf, wigner_pdf, EnsembleClass};
pub use spacing::{unfold_spacings, Histogram, HistogramSpec, SpacingSample};
