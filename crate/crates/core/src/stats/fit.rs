//! Least-squares fit of the transition parameter `ξ` to a spacing histogram.

use serde::{Deserialize, Serialize};

use crate::error::StatsError;

use super::rmt::transition_pdf;
use super::spacing::{Histogram, HistogramSpec, SpacingSample};

/// Upper end of the searched range; beyond it the density is GUE to within
/// histogram resolution.
pub const XI_MAX: f64 = 50.0;

/// Minimum sample size accepted by [`fit_xi`].
pub const MIN_SPACINGS: usize = 200;

/// Coverage factor applied to the standard error in
/// [`TransitionFitResult::xi_uncertainty`] (two standard errors).
pub const COVERAGE_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionFitResult {
    pub xi: f64,
    /// `COVERAGE_FACTOR` standard errors.
    pub xi_uncertainty: f64,
    /// From the curvature `JᵀJ` of the objective and the multinomial
    /// variance of each bin under the fitted model.
    pub standard_error: f64,
    /// Residual sum of squares at the optimum.
    pub rss: f64,
    pub bins: usize,
    pub evaluations: usize,
}

/// Bin average of the transition density by Simpson's rule.
fn bin_model(lo: f64, hi: f64, xi: f64) -> f64 {
    (transition_pdf(lo, xi) + 4.0 * transition_pdf(0.5 * (lo + hi), xi) + transition_pdf(hi, xi)) / 6.0
}

struct Objective<'a> {
    hist: &'a Histogram,
    density: Vec<f64>,
    evaluations: usize,
    trace: Vec<(f64, f64)>,
}

impl Objective<'_> {
    fn model(&self, xi: f64) -> Vec<f64> {
        (0..self.density.len())
            .map(|i| {
                let (a, b) = self.hist.edges(i);
                bin_model(a, b, xi)
            })
            .collect()
    }

    fn eval(&mut self, xi: f64) -> f64 {
        self.evaluations += 1;
        let m = self.model(xi);
        let rss = self.density.iter().zip(&m).map(|(d, m)| (d - m).powi(2)).sum();
        if self.trace.len() < 64 {
            self.trace.push((xi, rss));
        }
        rss
    }
}

fn xi_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..=100).map(|i| i as f64 * 0.05).collect();
    let mut x = 5.0;
    while x < XI_MAX {
        x = (x * 1.1).min(XI_MAX);
        g.push(x);
    }
    g
}

/// Fits `ξ` to a histogram by minimizing the squared difference between bin
/// densities and bin-averaged model densities, all bins included.
pub fn fit_xi_histogram(hist: &Histogram) -> Result<TransitionFitResult, StatsError> {
    let mut obj = Objective {
        hist,
        density: hist.densities(),
        evaluations: 0,
        trace: Vec::new(),
    };
    let grid = xi_grid();
    let values: Vec<f64> = grid.iter().map(|&x| obj.eval(x)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::FitFailed(format!("non-finite objective: {:?}", obj.trace)));
    }
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);

    // golden-section search between the grid neighbours of the best point
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(grid.len() - 1)];
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (obj.eval(c), obj.eval(d));
    let mut iterations = 0;
    while b - a > 1e-9 * (1.0 + a.abs()) {
        iterations += 1;
        if iterations > 200 {
            return Err(StatsError::FitFailed(format!(
                "golden section did not converge: {:?}",
                obj.trace
            )));
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = obj.eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = obj.eval(d);
        }
    }
    let (mut xi, mut rss) = if fc < fd { (c, fc) } else { (d, fd) };
    if values[best] < rss {
        xi = grid[best];
        rss = values[best];
    }

    let h = 1e-4 * xi.max(1.0);
    let (lo, hi) = if xi - h < 0.0 { (xi, xi + h) } else { (xi - h, xi + h) };
    let (m_lo, m_hi) = (obj.model(lo), obj.model(hi));
    let jac: Vec<f64> = m_lo.iter().zip(&m_hi).map(|(a, b)| (b - a) / (hi - lo)).collect();
    let jtj: f64 = jac.iter().map(|j| j * j).sum();
    // sandwich variance with multinomial bin variances of the fitted model
    let n = hist.total as f64;
    let w = hist.spec.bin_width;
    let meat: f64 = jac
        .iter()
        .zip(obj.model(xi))
        .map(|(j, m)| j * j * (m * (1.0 - m * w)).max(0.0) / (n * w))
        .sum();
    let bins = obj.density.len();
    let standard_error = if jtj > 0.0 { meat.sqrt() / jtj } else { f64::INFINITY };

    Ok(TransitionFitResult {
        xi: xi.max(0.0),
        xi_uncertainty: COVERAGE_FACTOR * standard_error,
        standard_error,
        rss,
        bins,
        evaluations: obj.evaluations,
    })
}

/// Fits `ξ` to a spacing sample binned with `spec`.
pub fn fit_xi(sample: &SpacingSample, spec: HistogramSpec) -> Result<TransitionFitResult, StatsError> {
    if sample.len() < MIN_SPACINGS {
        return Err(StatsError::TooFewValues {
            needed: MIN_SPACINGS,
            got: sample.len(),
        });
    }
    fit_xi_histogram(&sample.histogram(spec))
}
