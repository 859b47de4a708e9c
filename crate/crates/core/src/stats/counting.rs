//! Counting functions, the Weyl law, spectral shift `ΔN = N - Ñ`, the
//! interlacing degree of a before/after pair, and the missing-level
//! diagnostic built on them.
//!
//! Counting functions are anchored at `k = 0`: `N(k)` is the number of
//! eigenvalues in `(0, k]`, using [`Spectrum::levels_below`] for the part
//! below the window.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::StatsError;
use crate::solver::Spectrum;
use crate::units::KWindow;

/// Mean number of eigenvalues in `(0, k]` for total length `L`: `L k / π`.
pub fn weyl_count(total_length: f64, k: f64) -> f64 {
    total_length * k / PI
}

/// `(k_i, N(k_i) - L k_i / π)` at every eigenvalue.
pub fn fluctuating_count(spectrum: &Spectrum) -> Result<Vec<(f64, f64)>, StatsError> {
    if spectrum.levels.is_empty() {
        return Err(StatsError::EmptySpectrum);
    }
    let mut n = spectrum.levels_below;
    Ok(spectrum
        .levels
        .iter()
        .map(|l| {
            n += l.multiplicity;
            (l.k, n as f64 - weyl_count(spectrum.total_length, l.k))
        })
        .collect())
}

/// Right-continuous step function `N(k)` of a spectrum.
#[derive(Debug, Clone, Copy)]
pub struct CountingFunction<'a> {
    spectrum: &'a Spectrum,
}

impl<'a> CountingFunction<'a> {
    pub fn new(spectrum: &'a Spectrum) -> Self {
        CountingFunction { spectrum }
    }

    pub fn window(&self) -> KWindow {
        self.spectrum.window
    }

    pub fn eval(&self, k: f64) -> usize {
        let idx = self.spectrum.levels.partition_point(|l| l.k <= k);
        self.spectrum.levels_below
            + self.spectrum.levels[..idx]
                .iter()
                .map(|l| l.multiplicity)
                .sum::<usize>()
    }

    /// `(k, N(k))` just after each jump.
    pub fn steps(&self) -> Vec<(f64, usize)> {
        let mut n = self.spectrum.levels_below;
        self.spectrum
            .levels
            .iter()
            .map(|l| {
                n += l.multiplicity;
                (l.k, n)
            })
            .collect()
    }
}

/// A piece `[start, end)` of the window on which `ΔN` is constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftSegment {
    pub start: f64,
    pub end: f64,
    pub delta_n: i64,
}

/// Piecewise-constant `ΔN(k) = N(k) - Ñ(k)` over the common window.
pub fn shift_segments(before: &Spectrum, after: &Spectrum) -> Result<Vec<ShiftSegment>, StatsError> {
    if before.window != after.window {
        return Err(StatsError::MismatchedWindows);
    }
    let window = before.window;
    let mut events: Vec<(f64, i64)> = before
        .levels
        .iter()
        .map(|l| (l.k, l.multiplicity as i64))
        .chain(after.levels.iter().map(|l| (l.k, -(l.multiplicity as i64))))
        .collect();
    events.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut delta = before.levels_below as i64 - after.levels_below as i64;
    let mut start = window.k_min;
    let mut out = Vec::with_capacity(events.len() + 1);
    let mut i = 0;
    while i < events.len() {
        let k = events[i].0;
        let mut jump = 0;
        while i < events.len() && events[i].0 == k {
            jump += events[i].1;
            i += 1;
        }
        if k > start {
            out.push(ShiftSegment { start, end: k, delta_n: delta });
        }
        start = k;
        delta += jump;
    }
    if window.k_max > start {
        out.push(ShiftSegment {
            start,
            end: window.k_max,
            delta_n: delta,
        });
    }
    Ok(out)
}

/// Probability of each integer spectral shift, weighted by wavenumber
/// (equivalently frequency) measure over the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftDistribution {
    pub masses: BTreeMap<i64, f64>,
    pub window: KWindow,
    pub pairs: usize,
}

impl ShiftDistribution {
    pub fn probability(&self, delta_n: i64) -> f64 {
        self.masses.get(&delta_n).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> Vec<i64> {
        self.masses
            .iter()
            .filter(|(_, &p)| p > 0.0)
            .map(|(&m, _)| m)
            .collect()
    }

    pub fn total(&self) -> f64 {
        self.masses.values().sum()
    }

    /// Shift value with the largest probability (smallest value on ties).
    pub fn mode(&self) -> Option<i64> {
        self.masses
            .iter()
            .fold(None, |best: Option<(i64, f64)>, (&m, &p)| match best {
                Some((_, bp)) if bp >= p => best,
                _ => Some((m, p)),
            })
            .map(|(m, _)| m)
    }
}

/// Exact measure of every value of `ΔN` over the common window, normalized.
pub fn shift_distribution(before: &Spectrum, after: &Spectrum) -> Result<ShiftDistribution, StatsError> {
    let segments = shift_segments(before, after)?;
    let mut masses = BTreeMap::new();
    let mut total = 0.0;
    for s in &segments {
        let w = s.end - s.start;
        *masses.entry(s.delta_n).or_insert(0.0) += w;
        total += w;
    }
    for v in masses.values_mut() {
        *v /= total;
    }
    Ok(ShiftDistribution {
        masses,
        window: before.window,
        pairs: 1,
    })
}

/// Largest `|ΔN|` over the window.
pub fn max_abs_shift(before: &Spectrum, after: &Spectrum) -> Result<u64, StatsError> {
    Ok(shift_segments(before, after)?
        .iter()
        .map(|s| s.delta_n.unsigned_abs())
        .max()
        .unwrap_or(0))
}

/// Sequence with absolute indices: entry `i` has index `offset + i + 1`.
struct Indexed {
    offset: usize,
    values: Vec<f64>,
}

impl Indexed {
    fn of(s: &Spectrum) -> Indexed {
        Indexed {
            offset: s.levels_below,
            values: s.expanded(),
        }
    }

    fn top(&self) -> usize {
        self.offset + self.values.len()
    }
}

/// Failed inequalities `x_{n-r} <= y_n <= x_{n+r}` over the indices of `y`.
/// Indices whose partner lies above the window are skipped; partners below
/// the window are known to lie below every in-window value.
fn violations(x: &Indexed, y: &Indexed, r: usize) -> usize {
    let mut bad = 0;
    for (i, &yv) in y.values.iter().enumerate() {
        let n = y.offset + i + 1;
        if n > r {
            let m = n - r;
            if m > x.offset && m <= x.top() && x.values[m - x.offset - 1] > yv {
                bad += 1;
            }
        }
        let m = n + r;
        if m <= x.offset || (m <= x.top() && yv > x.values[m - x.offset - 1]) {
            bad += 1;
        }
    }
    bad
}

/// Number of failed level-`r` interlacing inequalities, in both directions.
pub fn interlacing_violations(before: &Spectrum, after: &Spectrum, r: usize) -> usize {
    let (a, b) = (Indexed::of(before), Indexed::of(after));
    violations(&a, &b, r) + violations(&b, &a, r)
}

/// Smallest `r` for which the two spectra are level-`r` interlaced.
pub fn interlacing_degree(before: &Spectrum, after: &Spectrum) -> Result<usize, StatsError> {
    if before.levels.is_empty() || after.levels.is_empty() {
        return Err(StatsError::EmptySpectrum);
    }
    let (a, b) = (Indexed::of(before), Indexed::of(after));
    let limit = a.top().max(b.top());
    let mut r = 0;
    while r <= limit && (violations(&a, &b, r) > 0 || violations(&b, &a, r) > 0) {
        r += 1;
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumSide {
    Before,
    After,
}

/// A stretch of the window where `|ΔN| >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuspectInterval {
    /// Where `|ΔN|` first reaches 2 and where it last leaves it.
    pub k_start: f64,
    pub k_end: f64,
    /// Signed extreme of `ΔN` inside the interval.
    pub peak_delta_n: i64,
    /// Spectrum whose counting function lags, i.e. the one likely missing a level.
    pub suspect: SpectrumSide,
    /// The missing level must lie in `(bracket.0, bracket.1]`.
    pub bracket: (f64, f64),
    /// Midpoint of the bracket.
    pub estimated_k: f64,
    /// Mean `N_fl` of each spectrum from `k_start` on, minus its mean below.
    pub drift_before: f64,
    pub drift_after: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MissingResonanceReport {
    pub intervals: Vec<SuspectInterval>,
}

impl MissingResonanceReport {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Mean of `N_fl` over levels in `[lo, hi)`.
fn mean_fluctuation(points: &[(f64, f64)], lo: f64, hi: f64) -> Option<f64> {
    let sel: Vec<f64> = points
        .iter()
        .filter(|(k, _)| *k >= lo && *k < hi)
        .map(|&(_, v)| v)
        .collect();
    (!sel.is_empty()).then(|| sel.iter().sum::<f64>() / sel.len() as f64)
}

/// Locates stretches where the pair violates level-1 interlacing and names
/// the spectrum that most likely lost a level there.
///
/// A level missing from one spectrum shifts `ΔN` by one unit from that point
/// on. The loss therefore lies after the last point where `ΔN` took the
/// opposite extreme (`∓1`) and before `|ΔN|` first reaches 2.
pub fn detect_missing_resonances(
    before: &Spectrum,
    after: &Spectrum,
) -> Result<MissingResonanceReport, StatsError> {
    let segments = shift_segments(before, after)?;
    let window = before.window;
    let nfl_before = fluctuating_count(before).unwrap_or_default();
    let nfl_after = fluctuating_count(after).unwrap_or_default();

    let mut intervals = Vec::new();
    for sign in [1i64, -1] {
        let mut reset = window.k_min;
        let mut open: Option<(f64, f64, i64, f64)> = None; // start, end, peak, bracket_lo
        let mut runs = Vec::new();
        for s in &segments {
            let v = sign * s.delta_n;
            if v <= -1 {
                reset = s.end;
                if let Some(run) = open.take() {
                    runs.push(run);
                }
            } else if v >= 2 {
                match open.as_mut() {
                    Some(run) => {
                        run.1 = s.end;
                        run.2 = run.2.max(v);
                    }
                    None => open = Some((s.start, s.end, v, reset)),
                }
            }
        }
        runs.extend(open);

        for (start, end, peak, bracket_lo) in runs {
            let suspect = if sign > 0 { SpectrumSide::After } else { SpectrumSide::Before };
            let drift = |pts: &[(f64, f64)]| {
                match (
                    mean_fluctuation(pts, window.k_min, start),
                    mean_fluctuation(pts, start, f64::INFINITY),
                ) {
                    (Some(a), Some(b)) => b - a,
                    _ => 0.0,
                }
            };
            intervals.push(SuspectInterval {
                k_start: start,
                k_end: end,
                peak_delta_n: sign * peak,
                suspect,
                bracket: (bracket_lo, start),
                estimated_k: 0.5 * (bracket_lo + start),
                drift_before: drift(&nfl_before),
                drift_after: drift(&nfl_after),
            });
        }
    }
    intervals.sort_by(|a, b| a.k_start.total_cmp(&b.k_start));
    Ok(MissingResonanceReport { intervals })
}
