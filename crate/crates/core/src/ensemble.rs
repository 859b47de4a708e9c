//! Configuration ensembles and parallel campaigns.
//!
//! A sweep moves length from one edge to another in fixed steps and pairs
//! every configuration with its edge-switch image. A randomized ensemble
//! replaces the sweep by jittered copies of the base graph. Pairs are solved
//! on a worker pool and reduced in configuration order, so the result does
//! not depend on the number of workers.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{EnsembleError, SolveError};
use crate::graph::{EdgeId, Length, MetricGraph, SwitchDescriptor};
use crate::solver::{solve_spectrum, SolverConfig, Spectrum};
use crate::stats::{
    interlacing_degree, interlacing_violations, shift_distribution, unfold_spacings, ShiftDistribution,
    SpacingSample,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Randomization {
    pub count: usize,
    /// Relative half-width of the uniform length perturbation.
    pub jitter: f64,
    pub seed: u64,
    /// Edge absorbing the length change so the total stays fixed.
    pub compensate_edge: EdgeId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub label: String,
    pub base: MetricGraph,
    pub grow_edge: EdgeId,
    pub shrink_edge: EdgeId,
    pub step_delta: Length,
    pub step_count: usize,
    pub switch: SwitchDescriptor,
    pub solver: SolverConfig,
    pub randomization: Option<Randomization>,
}

impl SweepSpec {
    pub fn check(&self) -> Result<(), EnsembleError> {
        let invalid = |m: String| Err(EnsembleError::InvalidSweep(m));
        let violations = self.base.validate();
        if !violations.is_empty() {
            return Err(crate::error::GraphError::Invalid(violations).into());
        }
        if let Err(e) = self.solver.check() {
            return invalid(e.to_string());
        }
        if let Err(e) = self.base.edge_switch(&self.switch) {
            return invalid(e.to_string());
        }
        if self.randomization.is_some() {
            return Ok(());
        }
        if self.step_count == 0 {
            return invalid("step_count must be at least 1".into());
        }
        if self.step_delta.picometres() <= 0 {
            return invalid("step_delta must be positive".into());
        }
        if self.grow_edge == self.shrink_edge {
            return invalid("grow and shrink edges must differ".into());
        }
        if self.base.edge(self.grow_edge).is_none() {
            return invalid(format!("unknown grow edge {}", self.grow_edge));
        }
        let Some(shrink) = self.base.edge(self.shrink_edge) else {
            return invalid(format!("unknown shrink edge {}", self.shrink_edge));
        };
        let moved = self.step_delta.picometres().checked_mul(self.step_count as i64);
        if moved.is_none_or(|m| m >= shrink.length.picometres()) {
            return invalid(format!(
                "total transfer {} m is not below shrink edge length {} m",
                self.step_delta.metres() * self.step_count as f64,
                shrink.length_m()
            ));
        }
        Ok(())
    }

    /// Number of before/after pairs the spec produces.
    pub fn pair_count(&self) -> usize {
        match &self.randomization {
            Some(r) => r.count,
            None => self.step_count + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigurationPair {
    pub label: String,
    /// Position within its spec (sweep step or ensemble member).
    pub index: usize,
    pub before: MetricGraph,
    pub after: MetricGraph,
}

/// Before/after pairs of a spec: sweep step `i` transfers `i · step_delta`
/// from the shrink edge to the grow edge.
pub fn generate_configurations(spec: &SweepSpec) -> Result<Vec<ConfigurationPair>, EnsembleError> {
    spec.check()?;
    let befores = match &spec.randomization {
        Some(r) => randomized_ensemble(&spec.base, r.count, r.jitter, r.seed, r.compensate_edge)?,
        None => (0..=spec.step_count)
            .map(|i| {
                let delta = Length::from_picometres(spec.step_delta.picometres() * i as i64);
                spec.base.transfer_length(spec.shrink_edge, spec.grow_edge, delta)
            })
            .collect::<Result<_, _>>()?,
    };
    befores
        .into_iter()
        .enumerate()
        .map(|(index, before)| {
            let after = before.edge_switch(&spec.switch)?;
            Ok(ConfigurationPair {
                label: spec.label.clone(),
                index,
                before,
                after,
            })
        })
        .collect()
}

/// `count` copies of `base` with every edge but `compensate_edge` scaled by
/// an independent uniform factor in `[1 - jitter, 1 + jitter]`; the
/// compensating edge restores the exact total length.
pub fn randomized_ensemble(
    base: &MetricGraph,
    count: usize,
    jitter: f64,
    seed: u64,
    compensate_edge: EdgeId,
) -> Result<Vec<MetricGraph>, EnsembleError> {
    let infeasible = |m: String| Err(EnsembleError::JitterInfeasible(m));
    if !(0.0..1.0).contains(&jitter) {
        return infeasible(format!("jitter {jitter} outside [0, 1)"));
    }
    if count > 1 && jitter == 0.0 {
        return infeasible("zero jitter cannot give distinct configurations".into());
    }
    let Some(comp) = base.edges().iter().position(|e| e.id == compensate_edge) else {
        return Err(crate::error::GraphError::UnknownEdge(compensate_edge).into());
    };
    let others: f64 = base
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != comp)
        .map(|(_, e)| e.length_m())
        .sum();
    if base.edges()[comp].length_m() <= jitter * others {
        return infeasible(format!(
            "compensating edge {} ({} m) cannot absorb ±{} m",
            compensate_edge,
            base.edges()[comp].length_m(),
            jitter * others
        ));
    }

    let total = base.total_length();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut lengths: Vec<Length> = base
            .edges()
            .iter()
            .map(|e| {
                let u: f64 = if jitter > 0.0 { rng.gen_range(-1.0..=1.0) } else { 0.0 };
                Length::from_metres(e.length_m() * (1.0 + jitter * u))
            })
            .collect();
        let rest: Length = lengths
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != comp)
            .map(|(_, &l)| l)
            .sum();
        lengths[comp] = total - rest;
        if lengths.iter().any(|l| l.picometres() <= 0) {
            return infeasible("a jittered length is not positive".into());
        }
        let key: Vec<i64> = lengths.iter().map(|l| l.picometres()).collect();
        if !seen.insert(key) {
            return infeasible("repeated configuration".into());
        }
        out.push(base.with_lengths(&lengths));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairResult {
    pub label: String,
    pub index: usize,
    pub before_graph: MetricGraph,
    pub after_graph: MetricGraph,
    pub before: Option<Spectrum>,
    pub after: Option<Spectrum>,
    pub errors: Vec<String>,
    pub interlacing_degree: Option<usize>,
    /// Failed level-1 interlacing inequalities.
    pub violations: usize,
    pub shift: Option<ShiftDistribution>,
}

impl PairResult {
    pub fn is_degraded(&self) -> bool {
        !self.errors.is_empty() || self.before.is_none() || self.after.is_none()
    }

    /// `label#index`.
    pub fn id(&self) -> String {
        format!("{}#{}", self.label, self.index)
    }
}

/// Pooled `P(ΔN)` with the across-pair standard error of each value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PooledShift {
    pub distribution: ShiftDistribution,
    pub std_error: BTreeMap<i64, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub label: String,
    pub pairs: usize,
    pub seed: Option<u64>,
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub pairs: Vec<PairResult>,
    pub pooled_shift: Option<PooledShift>,
    /// Spacings of the before and after spectra of all intact pairs.
    pub spacings: SpacingSample,
    pub levels_before: usize,
    pub levels_after: usize,
    pub degraded_pairs: Vec<String>,
    pub provenance: Vec<Provenance>,
}

impl CampaignResult {
    pub fn is_degraded(&self) -> bool {
        !self.degraded_pairs.is_empty()
    }

    pub fn levels_total(&self) -> usize {
        self.levels_before + self.levels_after
    }

    pub fn interlacing_degrees(&self) -> Vec<Option<usize>> {
        self.pairs.iter().map(|p| p.interlacing_degree).collect()
    }
}

fn solve_side(graph: &MetricGraph, cfg: &SolverConfig, side: &str, errors: &mut Vec<String>) -> Option<Spectrum> {
    match solve_spectrum(graph, cfg) {
        Ok(s) => Some(s),
        Err(SolveError::Incomplete { reason, spectrum }) => {
            errors.push(format!("{side}: {reason}"));
            Some(*spectrum)
        }
        Err(e) => {
            errors.push(format!("{side}: {e}"));
            None
        }
    }
}

fn solve_pair(pair: ConfigurationPair, cfg: &SolverConfig) -> PairResult {
    let mut errors = Vec::new();
    let before = solve_side(&pair.before, cfg, "before", &mut errors);
    let after = solve_side(&pair.after, cfg, "after", &mut errors);
    let (mut degree, mut violations, mut shift) = (None, 0, None);
    if let (Some(b), Some(a)) = (&before, &after) {
        degree = interlacing_degree(b, a).ok();
        violations = interlacing_violations(b, a, 1);
        shift = shift_distribution(b, a).ok();
    }
    PairResult {
        label: pair.label,
        index: pair.index,
        before_graph: pair.before,
        after_graph: pair.after,
        before,
        after,
        errors,
        interlacing_degree: degree,
        violations,
        shift,
    }
}

/// Measure-weighted average of per-pair shift distributions, with the
/// standard deviation across pairs over `sqrt(n)` as error.
pub fn pool_shift_distributions(dists: &[&ShiftDistribution]) -> Option<PooledShift> {
    let first = dists.first()?;
    let support: BTreeSet<i64> = dists.iter().flat_map(|d| d.masses.keys().copied()).collect();
    let weights: Vec<f64> = dists.iter().map(|d| d.window.width()).collect();
    let wsum: f64 = weights.iter().sum();
    let n = dists.len() as f64;
    let mut masses = BTreeMap::new();
    let mut std_error = BTreeMap::new();
    for m in support {
        let ps: Vec<f64> = dists.iter().map(|d| d.probability(m)).collect();
        let pooled = ps.iter().zip(&weights).map(|(p, w)| p * w).sum::<f64>() / wsum;
        let mean = ps.iter().sum::<f64>() / n;
        let var = if dists.len() > 1 {
            ps.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        masses.insert(m, pooled);
        std_error.insert(m, (var / n).sqrt());
    }
    Some(PooledShift {
        distribution: ShiftDistribution {
            masses,
            window: first.window,
            pairs: dists.iter().map(|d| d.pairs).sum(),
        },
        std_error,
    })
}

/// Solves every pair of every spec on `workers` threads and aggregates.
pub fn run_campaign(specs: &[SweepSpec], workers: usize) -> Result<CampaignResult, EnsembleError> {
    let mut jobs = Vec::new();
    let mut provenance = Vec::new();
    for spec in specs {
        let pairs = generate_configurations(spec)?;
        provenance.push(Provenance {
            label: spec.label.clone(),
            pairs: pairs.len(),
            seed: spec.randomization.map(|r| r.seed),
            solver: spec.solver.clone(),
        });
        jobs.extend(pairs.into_iter().map(|p| (p, &spec.solver)));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| EnsembleError::Pool(e.to_string()))?;
    let pairs: Vec<PairResult> = pool.install(|| {
        jobs.into_par_iter()
            .map(|(pair, cfg)| solve_pair(pair, cfg))
            .collect()
    });

    let intact: Vec<&PairResult> = pairs.iter().filter(|p| !p.is_degraded()).collect();
    let dists: Vec<&ShiftDistribution> = intact.iter().filter_map(|p| p.shift.as_ref()).collect();
    let pooled_shift = pool_shift_distributions(&dists);

    let mut samples = Vec::new();
    let (mut levels_before, mut levels_after) = (0, 0);
    for p in &intact {
        for (s, total) in [(&p.before, &mut levels_before), (&p.after, &mut levels_after)] {
            if let Some(s) = s {
                *total += s.count();
                if let Ok(sample) = unfold_spacings(s) {
                    samples.push(sample);
                }
            }
        }
    }
    let spacings = SpacingSample::pool(&samples);
    let degraded_pairs = pairs.iter().filter(|p| p.is_degraded()).map(|p| p.id()).collect();

    Ok(CampaignResult {
        pairs,
        pooled_shift,
        spacings,
        levels_before,
        levels_after,
        degraded_pairs,
        provenance,
    })
}
