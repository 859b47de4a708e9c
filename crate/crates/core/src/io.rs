//! Graph files, CSV tables and campaign manifests.
//!
//! Graph files are JSON:
//!
//! ```json
//! {
//!   "version": 1,
//!   "vertices": [0, 1],
//!   "edges": [{"id": 1, "u": 0, "v": 1, "length_m": 1.0, "phase_per_m": 0.0}],
//!   "metadata": {}
//! }
//! ```
//!
//! Vertex ids must be `0..n`. Floats in written graph files carry 17
//! significant digits; CSV floats use the shortest representation that
//! parses back to the same value.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::ensemble::{CampaignResult, PooledShift, Randomization, SweepSpec};
use crate::error::IoError;
use crate::graph::{Edge, EdgeId, Length, MetricGraph, SwitchDescriptor};
use crate::presets::{preset, GUE_NUMERICS_SEED};
use crate::solver::{SolverConfig, Spectrum};
use crate::stats::{
    fit_xi, ks_distance, shift_segments, transition_pdf, wigner_pdf, CountingFunction, EnsembleClass, Histogram,
    HistogramSpec, SpacingSample,
};
use crate::units::{ghz_from_k, KWindow};

pub const GRAPH_FORMAT_VERSION: u32 = 1;
pub const MANIFEST_VERSION: u32 = 1;

fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| IoError::Write {
            path: parent.display().to_string(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn full_precision(x: f64) -> Value {
    if x == 0.0 {
        return Value::from(0.0);
    }
    serde_json::from_str(&format!("{x:.16e}")).unwrap_or(Value::Null)
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRecord {
    id: usize,
    u: usize,
    v: usize,
    length_m: f64,
    #[serde(default)]
    phase_per_m: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphRecord {
    version: u32,
    vertices: Vec<usize>,
    edges: Vec<EdgeRecord>,
    #[serde(default)]
    metadata: Value,
}

/// A graph as stored on disk, with its free-form metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFile {
    pub graph: MetricGraph,
    pub metadata: Value,
}

/// Parses a graph document without validating the graph itself.
pub fn graph_from_json(text: &str, origin: &str) -> Result<GraphFile, IoError> {
    let rec: GraphRecord = serde_json::from_str(text).map_err(|source| IoError::Json {
        path: origin.to_string(),
        source,
    })?;
    if rec.version != GRAPH_FORMAT_VERSION {
        return Err(IoError::Schema(format!(
            "{origin}: unsupported graph format version {}",
            rec.version
        )));
    }
    let mut ids = rec.vertices.clone();
    ids.sort_unstable();
    if ids.iter().enumerate().any(|(i, &v)| i != v) {
        return Err(IoError::Schema(format!(
            "{origin}: vertex ids must be 0..{} without gaps or repeats",
            rec.vertices.len()
        )));
    }
    let edges = rec
        .edges
        .iter()
        .map(|e| Edge::new(e.id, e.u, e.v, e.length_m, e.phase_per_m))
        .collect();
    Ok(GraphFile {
        graph: MetricGraph::new(rec.vertices.len(), edges),
        metadata: rec.metadata,
    })
}

pub fn graph_to_json(graph: &MetricGraph, metadata: &Value) -> String {
    let edges: Vec<Value> = graph
        .edges()
        .iter()
        .map(|e| {
            serde_json::json!({
                "id": e.id.0,
                "u": e.endpoints.0 .0,
                "v": e.endpoints.1 .0,
                "length_m": full_precision(e.length_m()),
                "phase_per_m": full_precision(e.phase_per_metre),
            })
        })
        .collect();
    let doc = serde_json::json!({
        "version": GRAPH_FORMAT_VERSION,
        "vertices": (0..graph.vertex_count()).collect::<Vec<_>>(),
        "edges": edges,
        "metadata": if metadata.is_null() { serde_json::json!({}) } else { metadata.clone() },
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("graph document serializes");
    s.push('\n');
    s
}

/// Metadata written with dumped presets.
pub fn preset_metadata(name: &str) -> Value {
    let vertices: Vec<&str> = crate::presets::VERTEX_NAMES.to_vec();
    serde_json::json!({ "preset": name, "vertex_names": vertices })
}

pub fn load_graph(path: &Path) -> Result<GraphFile, IoError> {
    graph_from_json(&read_text(path)?, &path.display().to_string())
}

pub fn save_graph(path: &Path, graph: &MetricGraph, metadata: &Value) -> Result<(), IoError> {
    write_text(path, &graph_to_json(graph, metadata))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, IoError> {
    write_text(path, "")?;
    csv::Writer::from_path(path).map_err(|source| IoError::Csv {
        path: path.display().to_string(),
        source,
    })
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), IoError> {
    let csv_err = |source| IoError::Csv {
        path: path.display().to_string(),
        source,
    };
    let mut w = csv_writer(path)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, IoError> {
    let csv_err = |source| IoError::Csv {
        path: path.display().to_string(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().collect::<Result<Vec<T>, _>>().map_err(csv_err)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub index: usize,
    pub k_rad_per_m: f64,
    #[serde(rename = "freq_GHz")]
    pub freq_ghz: f64,
    pub multiplicity: usize,
    pub residual: f64,
}

/// One row per distinct level; `index` is the absolute index of its first
/// copy, counting from `k = 0`.
pub fn spectrum_rows(spectrum: &Spectrum) -> Vec<SpectrumRow> {
    let mut n = spectrum.levels_below;
    spectrum
        .levels
        .iter()
        .map(|l| {
            n += l.multiplicity;
            SpectrumRow {
                index: n - l.multiplicity + 1,
                k_rad_per_m: l.k,
                freq_ghz: ghz_from_k(l.k),
                multiplicity: l.multiplicity,
                residual: l.residual,
            }
        })
        .collect()
}

pub fn write_spectrum_csv(path: &Path, spectrum: &Spectrum) -> Result<(), IoError> {
    write_rows(path, &spectrum_rows(spectrum))
}

pub fn read_spectrum_csv(path: &Path) -> Result<Vec<SpectrumRow>, IoError> {
    read_rows(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftRow {
    pub delta_n: i64,
    pub probability: f64,
    pub std_error: f64,
}

pub fn shift_rows(pooled: &PooledShift) -> Vec<ShiftRow> {
    pooled
        .distribution
        .masses
        .iter()
        .map(|(&m, &p)| ShiftRow {
            delta_n: m,
            probability: p,
            std_error: pooled.std_error.get(&m).copied().unwrap_or(0.0),
        })
        .collect()
}

pub fn write_shift_csv(path: &Path, pooled: &PooledShift) -> Result<(), IoError> {
    write_rows(path, &shift_rows(pooled))
}

pub fn read_shift_csv(path: &Path) -> Result<Vec<ShiftRow>, IoError> {
    read_rows(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub s_bin_center: f64,
    pub density_empirical: f64,
    pub density_goe: f64,
    pub density_gue: f64,
    pub density_transition: f64,
}

/// Empirical bin densities with the reference densities at the bin centres;
/// the transition column uses `xi`.
pub fn histogram_rows(hist: &Histogram, xi: f64) -> Vec<HistogramRow> {
    hist.centers()
        .into_iter()
        .zip(hist.densities())
        .map(|(s, d)| HistogramRow {
            s_bin_center: s,
            density_empirical: d,
            density_goe: wigner_pdf(s, EnsembleClass::Goe),
            density_gue: wigner_pdf(s, EnsembleClass::Gue),
            density_transition: transition_pdf(s, xi),
        })
        .collect()
}

pub fn write_histogram_csv(path: &Path, hist: &Histogram, xi: f64) -> Result<(), IoError> {
    write_rows(path, &histogram_rows(hist, xi))
}

pub fn read_histogram_csv(path: &Path) -> Result<Vec<HistogramRow>, IoError> {
    read_rows(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterlacingRow {
    pub pair_id: String,
    /// Empty when the pair could not be solved.
    pub degree: Option<usize>,
    pub violations: usize,
}

pub fn interlacing_rows(result: &CampaignResult) -> Vec<InterlacingRow> {
    result
        .pairs
        .iter()
        .map(|p| InterlacingRow {
            pair_id: p.id(),
            degree: p.interlacing_degree,
            violations: p.violations,
        })
        .collect()
}

pub fn write_interlacing_csv(path: &Path, rows: &[InterlacingRow]) -> Result<(), IoError> {
    write_rows(path, rows)
}

pub fn read_interlacing_csv(path: &Path) -> Result<Vec<InterlacingRow>, IoError> {
    read_rows(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingRow {
    pub index: usize,
    pub s: f64,
}

pub fn write_spacings_csv(path: &Path, sample: &SpacingSample) -> Result<(), IoError> {
    let rows: Vec<SpacingRow> = sample
        .spacings
        .iter()
        .enumerate()
        .map(|(index, &s)| SpacingRow { index, s })
        .collect();
    write_rows(path, &rows)
}

/// Reads a spacing table; non-positive or non-finite spacings are rejected.
pub fn read_spacings_csv(path: &Path) -> Result<SpacingSample, IoError> {
    let rows: Vec<SpacingRow> = read_rows(path)?;
    if let Some(bad) = rows.iter().find(|r| !(r.s.is_finite() && r.s > 0.0)) {
        return Err(IoError::Schema(format!(
            "{}: spacing {} at index {} is not positive",
            path.display(),
            bad.s,
            bad.index
        )));
    }
    Ok(SpacingSample::new(rows.into_iter().map(|r| r.s).collect()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingRow {
    pub k_rad_per_m: f64,
    #[serde(rename = "freq_GHz")]
    pub freq_ghz: f64,
    pub n_before: usize,
    pub n_after: usize,
    pub delta_n: i64,
}

/// Both counting functions and `ΔN` at the window start and just after every
/// jump of either.
pub fn counting_rows(before: &Spectrum, after: &Spectrum) -> Result<Vec<CountingRow>, IoError> {
    let segments = shift_segments(before, after).map_err(|e| IoError::Schema(e.to_string()))?;
    let (nb, na) = (CountingFunction::new(before), CountingFunction::new(after));
    Ok(segments
        .iter()
        .map(|s| CountingRow {
            k_rad_per_m: s.start,
            freq_ghz: ghz_from_k(s.start),
            n_before: nb.eval(s.start),
            n_after: na.eval(s.start),
            delta_n: s.delta_n,
        })
        .collect())
}

pub fn write_counting_csv(path: &Path, before: &Spectrum, after: &Spectrum) -> Result<(), IoError> {
    write_rows(path, &counting_rows(before, after)?)
}

pub fn read_counting_csv(path: &Path) -> Result<Vec<CountingRow>, IoError> {
    read_rows(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchParams {
    pub pivot: usize,
    pub edge_a: usize,
    pub edge_b: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    pub grow_edge: usize,
    pub shrink_edge: usize,
    pub step_delta_m: f64,
    pub step_count: usize,
    pub switch: SwitchParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomizeParams {
    pub count: usize,
    pub jitter: f64,
    pub compensate_edge: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// One campaign entry: a preset, or a graph file with its sweep.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub preset: Option<String>,
    /// Path relative to the manifest file.
    #[serde(default)]
    pub graph: Option<String>,
    #[serde(default)]
    pub sweep: Option<SweepParams>,
    #[serde(default)]
    pub randomize: Option<RandomizeParams>,
    #[serde(default)]
    pub window_ghz: Option<[f64; 2]>,
    /// Window from near zero holding this many Weyl levels.
    #[serde(default)]
    pub window_levels: Option<f64>,
    #[serde(default)]
    pub solver: Option<SolverConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignManifest {
    pub version: u32,
    #[serde(default)]
    pub name: Option<String>,
    pub entries: Vec<ManifestEntry>,
    /// Default window for entries that set none.
    #[serde(default)]
    pub window_ghz: Option<[f64; 2]>,
    /// Default seed for randomized entries that set none.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output_dir: Option<String>,
    #[serde(default)]
    pub histogram_bin_width: Option<f64>,
}

/// A parsed manifest with the digest of its source bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedManifest {
    pub manifest: CampaignManifest,
    pub sha256: String,
    pub base_dir: PathBuf,
}

pub fn parse_manifest(text: &str, origin: &str) -> Result<CampaignManifest, IoError> {
    let m: CampaignManifest = serde_json::from_str(text).map_err(|source| IoError::Json {
        path: origin.to_string(),
        source,
    })?;
    if m.version != MANIFEST_VERSION {
        return Err(IoError::Schema(format!(
            "{origin}: unsupported manifest version {}",
            m.version
        )));
    }
    if m.entries.is_empty() {
        return Err(IoError::Schema(format!("{origin}: manifest has no entries")));
    }
    Ok(m)
}

pub fn load_manifest(path: &Path) -> Result<LoadedManifest, IoError> {
    let bytes = fs::read(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let text = String::from_utf8_lossy(&bytes);
    let manifest = parse_manifest(&text, &path.display().to_string())?;
    Ok(LoadedManifest {
        manifest,
        sha256: hex::encode(Sha256::digest(&bytes)),
        base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
    })
}

fn entry_spec(
    entry: &ManifestEntry,
    position: usize,
    manifest: &CampaignManifest,
    base_dir: &Path,
    seed_override: Option<u64>,
) -> Result<SweepSpec, IoError> {
    let schema = |m: String| IoError::Schema(format!("entry {position}: {m}"));
    let mut spec = match (&entry.preset, &entry.graph) {
        (Some(name), None) => preset(name)?.1,
        (None, Some(file)) => {
            let path = base_dir.join(file);
            let graph = load_graph(&path)?.graph;
            let violations = graph.validate();
            if !violations.is_empty() {
                return Err(crate::error::GraphError::Invalid(violations).into());
            }
            let sweep = entry
                .sweep
                .ok_or_else(|| schema("a graph entry needs a sweep".into()))?;
            let window = entry
                .window_ghz
                .or(manifest.window_ghz)
                .ok_or_else(|| schema("a graph entry needs a window".into()))?;
            SweepSpec {
                label: format!("entry{position}"),
                base: graph,
                grow_edge: EdgeId(sweep.grow_edge),
                shrink_edge: EdgeId(sweep.shrink_edge),
                step_delta: Length::from_metres(sweep.step_delta_m),
                step_count: sweep.step_count,
                switch: SwitchDescriptor::new(sweep.switch.pivot, sweep.switch.edge_a, sweep.switch.edge_b),
                solver: SolverConfig::for_window(KWindow::from_ghz(window[0], window[1])),
                randomization: None,
            }
        }
        _ => return Err(schema("exactly one of preset and graph is required".into())),
    };
    if let Some(sweep) = entry.sweep.filter(|_| entry.preset.is_some()) {
        spec.grow_edge = EdgeId(sweep.grow_edge);
        spec.shrink_edge = EdgeId(sweep.shrink_edge);
        spec.step_delta = Length::from_metres(sweep.step_delta_m);
        spec.step_count = sweep.step_count;
        spec.switch = SwitchDescriptor::new(sweep.switch.pivot, sweep.switch.edge_a, sweep.switch.edge_b);
    }
    if let Some(solver) = &entry.solver {
        spec.solver = solver.clone();
    }
    if let Some(levels) = entry.window_levels {
        let w = KWindow::with_weyl_levels(1e-3, spec.base.total_length_m(), levels);
        spec.solver.k_min = w.k_min;
        spec.solver.k_max = w.k_max;
    } else if let Some(w) = entry.window_ghz.or(manifest.window_ghz) {
        let w = KWindow::from_ghz(w[0], w[1]);
        spec.solver.k_min = w.k_min;
        spec.solver.k_max = w.k_max;
    }
    if let Some(r) = entry.randomize {
        spec.randomization = Some(Randomization {
            count: r.count,
            jitter: r.jitter,
            seed: seed_override.or(r.seed).or(manifest.seed).unwrap_or(GUE_NUMERICS_SEED),
            compensate_edge: EdgeId(r.compensate_edge),
        });
    }
    if let Some(label) = &entry.label {
        spec.label = label.clone();
    } else if entry.randomize.is_some() {
        spec.label = format!("{}_random", spec.label);
    }
    Ok(spec)
}

/// Sweep specs of every manifest entry. `seed_override` replaces all
/// randomization seeds.
pub fn manifest_specs(loaded: &LoadedManifest, seed_override: Option<u64>) -> Result<Vec<SweepSpec>, IoError> {
    let specs = loaded
        .manifest
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| entry_spec(e, i, &loaded.manifest, &loaded.base_dir, seed_override))
        .collect::<Result<Vec<_>, _>>()?;
    let mut labels: Vec<&str> = specs.iter().map(|s| s.label.as_str()).collect();
    labels.sort_unstable();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(IoError::Schema("entry labels must be unique".into()));
    }
    Ok(specs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub pairs: usize,
    pub degraded_pairs: Vec<String>,
    pub levels_before: usize,
    pub levels_after: usize,
    pub levels_total: usize,
    pub max_interlacing_degree: Option<usize>,
    pub spacings: usize,
    pub mean_spacing: Option<f64>,
    pub ks_goe: Option<f64>,
    pub ks_gue: Option<f64>,
    pub xi: Option<f64>,
    pub xi_uncertainty: Option<f64>,
}

pub fn summarize(result: &CampaignResult, spec: HistogramSpec) -> CampaignSummary {
    let sp = &result.spacings;
    let fit = fit_xi(sp, spec).ok();
    CampaignSummary {
        pairs: result.pairs.len(),
        degraded_pairs: result.degraded_pairs.clone(),
        levels_before: result.levels_before,
        levels_after: result.levels_after,
        levels_total: result.levels_total(),
        max_interlacing_degree: result.pairs.iter().filter_map(|p| p.interlacing_degree).max(),
        spacings: sp.len(),
        mean_spacing: (!sp.is_empty()).then(|| sp.mean()),
        ks_goe: (!sp.is_empty()).then(|| ks_distance(&sp.spacings, EnsembleClass::Goe)),
        ks_gue: (!sp.is_empty()).then(|| ks_distance(&sp.spacings, EnsembleClass::Gue)),
        xi: fit.as_ref().map(|f| f.xi),
        xi_uncertainty: fit.as_ref().map(|f| f.xi_uncertainty),
    }
}

/// Writes spectra, aggregate tables, a summary and the manifest echo into
/// `dir`. Returns the written paths.
pub fn write_campaign(
    dir: &Path,
    result: &CampaignResult,
    loaded: Option<&LoadedManifest>,
    spec: HistogramSpec,
) -> Result<Vec<PathBuf>, IoError> {
    let mut files = Vec::new();
    for p in &result.pairs {
        for (side, s) in [("before", &p.before), ("after", &p.after)] {
            if let Some(s) = s {
                let path = dir.join("spectra").join(format!("{}_{:03}_{side}.csv", p.label, p.index));
                write_spectrum_csv(&path, s)?;
                files.push(path);
            }
        }
    }

    if let Some(pooled) = &result.pooled_shift {
        let path = dir.join("shift_distribution.csv");
        write_shift_csv(&path, pooled)?;
        files.push(path);
    }

    let path = dir.join("interlacing.csv");
    write_interlacing_csv(&path, &interlacing_rows(result))?;
    files.push(path);

    let path = dir.join("spacings.csv");
    write_spacings_csv(&path, &result.spacings)?;
    files.push(path);

    let summary = summarize(result, spec);
    let path = dir.join("spacing_histogram.csv");
    write_histogram_csv(&path, &result.spacings.histogram(spec), summary.xi.unwrap_or(1.0))?;
    files.push(path);

    let path = dir.join("summary.json");
    let doc = serde_json::json!({
        "summary": summary,
        "provenance": result.provenance,
    });
    write_text(&path, &(serde_json::to_string_pretty(&doc).expect("summary serializes") + "\n"))?;
    files.push(path);

    if let Some(m) = loaded {
        let path = dir.join("run_manifest.json");
        let doc = serde_json::json!({
            "manifest": m.manifest,
            "manifest_sha256": m.sha256,
            "tool_version": env!("CARGO_PKG_VERSION"),
        });
        write_text(&path, &(serde_json::to_string_pretty(&doc).expect("manifest serializes") + "\n"))?;
        files.push(path);
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::gue_graph;

    #[test]
    fn graph_round_trip_is_exact() {
        let g = gue_graph();
        let text = graph_to_json(&g, &Value::Null);
        let back = graph_from_json(&text, "mem").unwrap();
        assert_eq!(back.graph, g);
        assert!(text.contains("\"length_m\": 7.1230000000000004e-1"));
    }

    #[test]
    fn vertex_ids_must_be_dense() {
        let text = r#"{"version":1,"vertices":[0,2],"edges":[]}"#;
        assert!(matches!(graph_from_json(text, "mem"), Err(IoError::Schema(_))));
    }

    #[test]
    fn malformed_json_is_reported() {
        assert!(matches!(graph_from_json("{", "mem"), Err(IoError::Json { .. })));
    }

    #[test]
    fn empty_manifest_is_rejected() {
        let text = r#"{"version":1,"entries":[]}"#;
        assert!(parse_manifest(text, "mem").is_err());
    }

    #[test]
    fn preset_entry_with_overrides() {
        let text = r#"{"version":1,"seed":9,"entries":[{"preset":"gue","window_levels":20,
            "randomize":{"count":3,"jitter":0.01,"compensate_edge":1}}]}"#;
        let loaded = LoadedManifest {
            manifest: parse_manifest(text, "mem").unwrap(),
            sha256: String::new(),
            base_dir: PathBuf::new(),
        };
        let specs = manifest_specs(&loaded, None).unwrap();
        assert_eq!(specs[0].randomization.unwrap().seed, 9);
        assert_eq!(specs[0].pair_count(), 3);
        assert_eq!(manifest_specs(&loaded, Some(4)).unwrap()[0].randomization.unwrap().seed, 4);
    }
}
