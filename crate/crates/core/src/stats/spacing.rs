//! Unfolded nearest-neighbour spacings and their histograms.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::StatsError;
use crate::solver::Spectrum;

use super::rmt::EnsembleClass;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpacingSample {
    pub spacings: Vec<f64>,
    pub class: Option<EnsembleClass>,
    pub configurations: usize,
}

/// Spacings unfolded with the Weyl density `L/π`; degenerate levels give
/// zero spacings, which are dropped.
pub fn unfold_spacings(spectrum: &Spectrum) -> Result<SpacingSample, StatsError> {
    let ks = spectrum.expanded();
    if ks.len() < 2 {
        return Err(StatsError::TooFewValues {
            needed: 2,
            got: ks.len(),
        });
    }
    let density = spectrum.total_length / PI;
    let spacings = ks
        .windows(2)
        .map(|w| (w[1] - w[0]) * density)
        .filter(|&s| s > 0.0)
        .collect();
    Ok(SpacingSample {
        spacings,
        class: None,
        configurations: 1,
    })
}

impl SpacingSample {
    pub fn new(spacings: Vec<f64>) -> SpacingSample {
        SpacingSample {
            spacings,
            class: None,
            configurations: 1,
        }
    }

    /// Concatenation of several samples, sorted so the result does not
    /// depend on input order.
    pub fn pool<'a>(samples: impl IntoIterator<Item = &'a SpacingSample>) -> SpacingSample {
        let mut out = SpacingSample::default();
        for s in samples {
            out.spacings.extend_from_slice(&s.spacings);
            out.configurations += s.configurations;
            out.class = out.class.or(s.class);
        }
        out.spacings.sort_by(f64::total_cmp);
        out
    }

    pub fn len(&self) -> usize {
        self.spacings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spacings.is_empty()
    }

    pub fn mean(&self) -> f64 {
        let mut xs = self.spacings.clone();
        xs.sort_by(f64::total_cmp);
        xs.iter().sum::<f64>() / xs.len() as f64
    }

    pub fn histogram(&self, spec: HistogramSpec) -> Histogram {
        Histogram::build(&self.spacings, spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub bin_width: f64,
    pub upper: f64,
}

impl Default for HistogramSpec {
    fn default() -> Self {
        HistogramSpec {
            bin_width: 0.1,
            upper: 4.0,
        }
    }
}

impl HistogramSpec {
    pub fn bins(&self) -> usize {
        (self.upper / self.bin_width).round().max(1.0) as usize
    }
}

/// Density histogram on `[0, upper)`; values beyond `upper` count toward
/// the normalization but fall in no bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub spec: HistogramSpec,
    pub counts: Vec<usize>,
    pub total: usize,
}

impl Histogram {
    pub fn build(values: &[f64], spec: HistogramSpec) -> Histogram {
        let bins = spec.bins();
        let mut counts = vec![0; bins];
        for &v in values {
            if v >= 0.0 {
                let i = (v / spec.bin_width).floor() as usize;
                if i < bins {
                    counts[i] += 1;
                }
            }
        }
        Histogram {
            spec,
            counts,
            total: values.len(),
        }
    }

    pub fn edges(&self, i: usize) -> (f64, f64) {
        let w = self.spec.bin_width;
        (i as f64 * w, (i + 1) as f64 * w)
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.counts.len())
            .map(|i| {
                let (a, b) = self.edges(i);
                0.5 * (a + b)
            })
            .collect()
    }

    pub fn densities(&self) -> Vec<f64> {
        let norm = self.total.max(1) as f64 * self.spec.bin_width;
        self.counts.iter().map(|&c| c as f64 / norm).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::KWindow;

    #[test]
    fn single_gap() {
        let l = 2.0;
        let s = Spectrum::from_wavenumbers(KWindow::new(0.0, 10.0), l, &[1.0, 1.0 + PI / l]);
        let sample = unfold_spacings(&s).unwrap();
        assert_eq!(sample.spacings.len(), 1);
        assert!((sample.spacings[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn too_few_levels() {
        let s = Spectrum::from_wavenumbers(KWindow::new(0.0, 10.0), 1.0, &[1.0]);
        assert!(matches!(unfold_spacings(&s), Err(StatsError::TooFewValues { .. })));
    }

    #[test]
    fn histogram_integrates_to_covered_fraction() {
        let values = [0.05, 0.15, 0.15, 3.95, 5.0];
        let h = Histogram::build(&values, HistogramSpec::default());
        assert_eq!(h.counts.len(), 40);
        assert_eq!(h.counts[1], 2);
        let area: f64 = h.densities().iter().map(|d| d * 0.1).sum();
        assert!((area - 0.8).abs() < 1e-12);
    }

    #[test]
    fn pooling_is_order_independent() {
        let a = SpacingSample::new(vec![0.3, 1.2]);
        let b = SpacingSample::new(vec![0.9]);
        assert_eq!(SpacingSample::pool([&a, &b]), SpacingSample::pool([&b, &a]));
    }
}
