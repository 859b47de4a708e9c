//! Scan-and-refine solver for the secular equation `det(I - U(k)) = 0`.
//!
//! The window is scanned on a grid of step `π / (8 L)` by default. On every
//! grid interval the exact number of eigenvalues is read off the eigenphase
//! winding of `U(k)`. Intervals holding several levels are rescanned at a
//! sixteenth of the step until each piece holds one level or has shrunk to a
//! degenerate cluster. Single levels are narrowed by bisection on the count,
//! then refined by golden-section minimisation of the smallest singular value
//! of `I - U(k)`, and finally certified by a count over `(k - δ, k + δ]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bond::BondSystem;
use super::spectrum::{Level, Spectrum, DEFAULT_WEYL_BOUND};
use crate::error::SolveError;
use crate::graph::MetricGraph;
use crate::units::KWindow;

/// Lowest wavenumber considered when counting the levels below a window;
/// excludes the constant mode at `k = 0`.
const K_FLOOR: f64 = 1e-6;

/// Levels closer than this many root tolerances are reported as one level
/// with multiplicity.
const CLUSTER_WIDTH_FACTOR: f64 = 1e3;

const RESCAN_DIVISIONS: usize = 16;

/// Bisection steps on the count before golden-section refinement.
const NARROWING_STEPS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub k_min: f64,
    pub k_max: f64,
    /// Grid step in rad/m; `None` selects `π / (8 L)`.
    pub scan_step: Option<f64>,
    pub root_tolerance: f64,
    pub residual_threshold: f64,
    pub max_refinement_iterations: usize,
    /// Bound on `|N_fl|` for the completeness flag.
    pub weyl_bound: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            k_min: 0.1,
            k_max: 10.0,
            scan_step: None,
            root_tolerance: 1e-10,
            residual_threshold: 1e-6,
            max_refinement_iterations: 200,
            weyl_bound: DEFAULT_WEYL_BOUND,
        }
    }
}

impl SolverConfig {
    pub fn for_window(window: KWindow) -> SolverConfig {
        SolverConfig {
            k_min: window.k_min,
            k_max: window.k_max,
            ..SolverConfig::default()
        }
    }

    pub fn window(&self) -> KWindow {
        KWindow::new(self.k_min, self.k_max)
    }

    pub fn check(&self) -> Result<(), SolveError> {
        let bad = |msg: &str| Err(SolveError::InvalidConfig(msg.to_string()));
        if !self.window().is_valid() {
            return bad("window must satisfy 0 <= k_min < k_max");
        }
        if let Some(step) = self.scan_step {
            if !(step > 0.0 && step.is_finite()) {
                return bad("scan_step must be positive");
            }
        }
        if !(self.root_tolerance > 0.0) {
            return bad("root_tolerance must be positive");
        }
        if !(self.residual_threshold > 0.0) {
            return bad("residual_threshold must be positive");
        }
        if self.max_refinement_iterations == 0 {
            return bad("max_refinement_iterations must be at least 1");
        }
        Ok(())
    }

    /// Scan step actually used for a graph of total length `total_length`.
    pub fn effective_scan_step(&self, total_length: f64) -> f64 {
        self.scan_step.unwrap_or(PI / (8.0 * total_length))
    }
}

struct Refiner<'a> {
    sys: &'a BondSystem,
    cfg: &'a SolverConfig,
}

impl Refiner<'_> {
    fn count(&self, a: f64, sa: f64, b: f64, sb: f64) -> Result<usize, SolveError> {
        let c = self.sys.count_from_sums(a, sa, b, sb)?;
        if c < 0 {
            return Err(SolveError::Decomposition(b));
        }
        Ok(c as usize)
    }

    fn isolate(
        &self,
        (a, sa): (f64, f64),
        (b, sb): (f64, f64),
        count: usize,
        out: &mut Vec<Level>,
    ) -> Result<(), SolveError> {
        match count {
            0 => Ok(()),
            1 => {
                out.push(self.refine_single((a, sa), b)?);
                Ok(())
            }
            _ if b - a <= CLUSTER_WIDTH_FACTOR * self.cfg.root_tolerance => {
                out.push(self.refine_cluster(a, b, count)?);
                Ok(())
            }
            _ => {
                let mut prev = (a, sa);
                let mut found = 0;
                for i in 1..=RESCAN_DIVISIONS {
                    let k = if i == RESCAN_DIVISIONS {
                        b
                    } else {
                        a + (b - a) * i as f64 / RESCAN_DIVISIONS as f64
                    };
                    let s = if i == RESCAN_DIVISIONS { sb } else { self.sys.eigenphase_sum(k)? };
                    let c = self.count(prev.0, prev.1, k, s)?;
                    found += c;
                    self.isolate(prev, (k, s), c, out)?;
                    prev = (k, s);
                }
                if found != count {
                    return Err(SolveError::Decomposition(b));
                }
                Ok(())
            }
        }
    }

    fn golden_min(&self, mut a: f64, mut b: f64) -> f64 {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let mut fc = self.sys.residual(c);
        let mut fd = self.sys.residual(d);
        for _ in 0..self.cfg.max_refinement_iterations {
            if b - a <= self.cfg.root_tolerance {
                break;
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = self.sys.residual(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = self.sys.residual(d);
            }
        }
        0.5 * (a + b)
    }

    /// One level in `(a, b]`.
    fn refine_single(&self, (mut a, mut sa): (f64, f64), mut b: f64) -> Result<Level, SolveError> {
        for _ in 0..NARROWING_STEPS {
            let m = 0.5 * (a + b);
            let sm = self.sys.eigenphase_sum(m)?;
            if self.count(a, sa, m, sm)? == 1 {
                b = m;
            } else {
                a = m;
                sa = sm;
            }
        }
        let k = self.golden_min(a, b);
        let residual = self.sys.residual(k);
        if residual <= self.cfg.residual_threshold && self.certify(k)? {
            return Ok(Level {
                k,
                multiplicity: 1,
                residual,
            });
        }

        // the residual has another local minimum in the bracket: bisect on the count alone
        let mut iterations = 0;
        while b - a > self.cfg.root_tolerance && iterations < self.cfg.max_refinement_iterations {
            let m = 0.5 * (a + b);
            let sm = self.sys.eigenphase_sum(m)?;
            if self.count(a, sa, m, sm)? == 1 {
                b = m;
            } else {
                a = m;
                sa = sm;
            }
            iterations += 1;
        }
        let k = 0.5 * (a + b);
        let residual = self.sys.residual(k);
        if residual > self.cfg.residual_threshold {
            return Err(SolveError::Refinement { k, residual });
        }
        Ok(Level {
            k,
            multiplicity: 1,
            residual,
        })
    }

    /// `count` levels inside an interval narrower than the cluster width.
    fn refine_cluster(&self, a: f64, b: f64, count: usize) -> Result<Level, SolveError> {
        let k = self.golden_min(a, b);
        let residual = self.sys.residual(k);
        if residual > self.cfg.residual_threshold {
            return Err(SolveError::Refinement { k, residual });
        }
        Ok(Level {
            k,
            multiplicity: count,
            residual,
        })
    }

    /// True iff exactly one level lies within a tolerance of `k`.
    fn certify(&self, k: f64) -> Result<bool, SolveError> {
        let delta = self.cfg.root_tolerance.max(1e-13 * k);
        Ok(self.sys.count_between(k - delta, k + delta)? == 1)
    }
}

fn merge_close(levels: &mut Vec<Level>, tolerance: f64) {
    levels.sort_by(|x, y| x.k.total_cmp(&y.k));
    let mut merged: Vec<Level> = Vec::with_capacity(levels.len());
    for l in levels.drain(..) {
        match merged.last_mut() {
            Some(last) if l.k - last.k < 2.0 * tolerance => {
                last.multiplicity += l.multiplicity;
                last.residual = last.residual.max(l.residual);
            }
            _ => merged.push(l),
        }
    }
    *levels = merged;
}

/// All eigenvalues of `graph` in `(k_min, k_max]`.
///
/// Returns [`SolveError::Incomplete`] (carrying the spectrum) when the
/// completeness check fails.
pub fn solve_spectrum(graph: &MetricGraph, config: &SolverConfig) -> Result<Spectrum, SolveError> {
    config.check()?;
    let sys = BondSystem::new(graph)?;
    solve_with_system(&sys, config)
}

pub(crate) fn solve_with_system(sys: &BondSystem, config: &SolverConfig) -> Result<Spectrum, SolveError> {
    let window = config.window();
    let total_length = sys.total_length();
    let step = config.effective_scan_step(total_length);
    let intervals = ((window.width() / step).ceil() as usize).max(1);

    let levels_below = if window.k_min > K_FLOOR {
        sys.count_between(K_FLOOR, window.k_min)?.max(0) as usize
    } else {
        0
    };

    let refiner = Refiner { sys, cfg: config };
    let mut levels = Vec::new();
    let mut certified = 0usize;
    let k0 = window.k_min.max(K_FLOOR);
    let mut prev = (k0, sys.eigenphase_sum(k0)?);
    for j in 1..=intervals {
        let k = if j == intervals {
            window.k_max
        } else {
            window.k_min + window.width() * (j as f64 / intervals as f64)
        };
        let s = sys.eigenphase_sum(k)?;
        let c = refiner.count(prev.0, prev.1, k, s)?;
        certified += c;
        refiner.isolate(prev, (k, s), c, &mut levels)?;
        prev = (k, s);
    }
    merge_close(&mut levels, config.root_tolerance);

    let spectrum = Spectrum::new(
        window,
        total_length,
        levels_below,
        levels,
        Some(certified),
        config.weyl_bound,
    );
    if spectrum.is_complete() {
        Ok(spectrum)
    } else {
        let d = &spectrum.diagnostics;
        Err(SolveError::Incomplete {
            reason: format!(
                "found {} levels, certified {}, max |N_fl| = {:.3} (bound {})",
                spectrum.count(),
                certified,
                d.max_abs_fluctuation,
                d.weyl_bound
            ),
            spectrum: Box::new(spectrum),
        })
    }
}

/// Spectra of `graph` with its magnetic phases as given and reversed.
pub fn spectrum_under_phase_reversal(
    graph: &MetricGraph,
    config: &SolverConfig,
) -> Result<(Spectrum, Spectrum), SolveError> {
    let forward = solve_spectrum(graph, config)?;
    let reversed = solve_spectrum(&graph.scale_phases(-1.0), config)?;
    Ok((forward, reversed))
}
