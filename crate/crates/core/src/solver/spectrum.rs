use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::units::KWindow;

/// Default bound on `|N_fl|` used by the completeness check.
pub const DEFAULT_WEYL_BOUND: f64 = 3.0;

/// One eigenvalue of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    /// Wavenumber, rad/m.
    pub k: f64,
    pub multiplicity: usize,
    /// Smallest singular value of `I - U(k)` at the refined root.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Largest `|N(k_i) - L k_i / π|` over the eigenvalues in the window.
    pub max_abs_fluctuation: f64,
    pub weyl_bound: f64,
    /// Exact number of levels in the window from the eigenphase winding,
    /// when the spectrum came from the solver.
    pub certified_count: Option<usize>,
    pub complete: bool,
}

/// Sorted eigenvalues of a graph inside a wavenumber window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub window: KWindow,
    /// Total length `L` of the graph the spectrum belongs to.
    pub total_length: f64,
    /// Number of eigenvalues (with multiplicity) in `(0, k_min]`; anchors the
    /// counting function at the bottom of the window.
    pub levels_below: usize,
    pub levels: Vec<Level>,
    pub diagnostics: Diagnostics,
}

impl Spectrum {
    /// Builds a spectrum from a list of levels and evaluates its diagnostics.
    /// Levels outside the window are discarded; `levels` must be sorted.
    pub fn new(
        window: KWindow,
        total_length: f64,
        levels_below: usize,
        levels: Vec<Level>,
        certified_count: Option<usize>,
        weyl_bound: f64,
    ) -> Spectrum {
        let levels: Vec<Level> = levels.into_iter().filter(|l| window.contains(l.k)).collect();
        debug_assert!(levels.windows(2).all(|w| w[0].k < w[1].k));
        let mut s = Spectrum {
            window,
            total_length,
            levels_below,
            levels,
            diagnostics: Diagnostics {
                max_abs_fluctuation: 0.0,
                weyl_bound,
                certified_count,
                complete: true,
            },
        };
        s.reassess();
        s
    }

    /// Spectrum of simple levels at the given wavenumbers, with zero residuals
    /// and no certified count. Used for synthetic and file-loaded spectra.
    pub fn from_wavenumbers(window: KWindow, total_length: f64, ks: &[f64]) -> Spectrum {
        let mut ks = ks.to_vec();
        ks.sort_by(f64::total_cmp);
        let mut levels: Vec<Level> = Vec::with_capacity(ks.len());
        for k in ks {
            match levels.last_mut() {
                Some(last) if last.k == k => last.multiplicity += 1,
                _ => levels.push(Level {
                    k,
                    multiplicity: 1,
                    residual: 0.0,
                }),
            }
        }
        Spectrum::new(window, total_length, 0, levels, None, DEFAULT_WEYL_BOUND)
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.k).collect()
    }

    /// Wavenumbers with each level repeated `multiplicity` times.
    pub fn expanded(&self) -> Vec<f64> {
        self.levels
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.k, l.multiplicity))
            .collect()
    }

    /// Number of levels in the window, counted with multiplicity.
    pub fn count(&self) -> usize {
        self.levels.iter().map(|l| l.multiplicity).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.diagnostics.complete
    }

    /// Removes the level at `index` (0-based within the window). Used for
    /// fault injection; diagnostics are re-evaluated afterwards, the certified
    /// count is kept.
    pub fn drop_level(&self, index: usize) -> Spectrum {
        let mut s = self.clone();
        if index < s.levels.len() {
            if s.levels[index].multiplicity > 1 {
                s.levels[index].multiplicity -= 1;
            } else {
                s.levels.remove(index);
            }
        }
        s.reassess();
        s
    }

    /// Extremes of `N_fl(k_i) = N(k_i) - L k_i / π` over the eigenvalues in
    /// the window, where `N` counts from `k = 0`. An empty spectrum gives the
    /// value at `k_min`.
    pub fn fluctuation_range(&self) -> (f64, f64) {
        let rho = self.total_length / PI;
        let mut n = self.levels_below as f64;
        if self.levels.is_empty() {
            let v = n - rho * self.window.k_min;
            return (v, v);
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for l in &self.levels {
            n += l.multiplicity as f64;
            let v = n - rho * l.k;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    /// Recomputes the completeness diagnostics from the current levels.
    pub fn reassess(&mut self) {
        let (lo, hi) = self.fluctuation_range();
        let max_abs = lo.abs().max(hi.abs());
        self.diagnostics.max_abs_fluctuation = max_abs;
        let weyl_ok = max_abs <= self.diagnostics.weyl_bound;
        let count_ok = self
            .diagnostics
            .certified_count
            .is_none_or(|c| c == self.count());
        self.diagnostics.complete = weyl_ok && count_ok;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_regular_spectrum_has_no_fluctuation_at_levels() {
        let l = 2.0;
        let ks: Vec<f64> = (1..=50).map(|i| i as f64 * PI / l).collect();
        let s = Spectrum::from_wavenumbers(KWindow::new(1e-3, 50.5 * PI / l), l, &ks);
        let (lo, hi) = s.fluctuation_range();
        assert!(lo.abs() < 1e-9 && hi.abs() < 1e-9, "{lo} {hi}");
        assert!(s.is_complete());
    }

    #[test]
    fn dropping_a_certified_level_marks_incomplete() {
        let l = 1.0;
        let ks: Vec<f64> = (1..=5).map(|i| i as f64 * PI).collect();
        let mut s = Spectrum::from_wavenumbers(KWindow::new(0.1, 16.0), l, &ks);
        s.diagnostics.certified_count = Some(5);
        s.reassess();
        assert!(s.is_complete());
        let d = s.drop_level(2);
        assert_eq!(d.count(), 4);
        assert!(!d.is_complete());
    }

    #[test]
    fn duplicate_wavenumbers_merge_into_multiplicity() {
        let s = Spectrum::from_wavenumbers(KWindow::new(0.0, 10.0), 1.0, &[2.0, 1.0, 2.0]);
        assert_eq!(s.levels.len(), 2);
        assert_eq!(s.levels[1].multiplicity, 2);
        assert_eq!(s.expanded(), vec![1.0, 2.0, 2.0]);
    }
}
