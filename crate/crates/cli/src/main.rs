//! `qgraph`: spectra of metric graphs before and after an edge switch.
//!
//! Exit status: 0 on success, 1 when a result is degraded (incomplete
//! spectrum, missing-resonance report), 2 on usage or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qgraph_core::ensemble::run_campaign;
use qgraph_core::error::SolveError;
use qgraph_core::io::{self, LoadedManifest};
use qgraph_core::presets::{self, PRESET_NAMES};
use qgraph_core::solver::{solve_spectrum, SolverConfig, Spectrum};
use qgraph_core::stats::{
    detect_missing_resonances, fit_xi, interlacing_degree, shift_distribution, weyl_count, HistogramSpec,
};
use qgraph_core::units::KWindow;
use qgraph_core::{MetricGraph, SwitchDescriptor};

#[derive(Parser, Debug)]
#[command(name = "qgraph", version, about = "Metric-graph spectra under the edge-switch transformation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a graph file and list its violations
    Validate { graph: PathBuf },
    /// Solve the spectrum in a window and write it as CSV
    Solve {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        window: WindowArg,
        /// Spectrum CSV path
        #[arg(long)]
        out: Option<PathBuf>,
        /// Remove the level with this position in the window (fault injection)
        #[arg(long)]
        drop_level: Option<usize>,
    },
    /// Solve before and after a switch and compare the spectra
    Compare {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        window: WindowArg,
        /// Pivot vertex of the switch (defaults to the preset switch)
        #[arg(long, requires = "edges")]
        pivot: Option<usize>,
        /// The two switched edges, `a,b`
        #[arg(long, value_delimiter = ',', requires = "pivot")]
        edges: Option<Vec<usize>>,
        /// Output directory
        #[arg(long, default_value = "compare_out")]
        out: PathBuf,
        /// Remove this level from the after-switch spectrum (fault injection)
        #[arg(long)]
        drop_level: Option<usize>,
    },
    /// Run a campaign manifest
    Campaign {
        manifest: PathBuf,
        #[arg(long, env = "QGRAPH_WORKERS")]
        workers: Option<usize>,
        /// Seed for every randomized entry
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (overrides the manifest)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the GOE-GUE transition parameter to a spacing table
    FitXi {
        spacings: PathBuf,
        /// Histogram CSV with the fitted overlay
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        bin_width: f64,
    },
    /// Built-in graphs
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand, Debug)]
enum PresetAction {
    List,
    Dump {
        name: String,
        /// Graph file path; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// Graph file
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    graph: Option<PathBuf>,
    /// Built-in graph instead of a file
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Debug)]
struct WindowArg {
    /// Frequency window `lo:hi` in GHz
    #[arg(long, value_parser = parse_window)]
    window_ghz: Option<(f64, f64)>,
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    Ok((lo, hi))
}

struct Outcome {
    code: u8,
    summary: String,
    files: Vec<PathBuf>,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Outcome {
        Outcome {
            code: 2,
            summary: format!("error: {msg}"),
            files: Vec::new(),
        }
    }
}

type Cmd = Result<Outcome, Outcome>;

fn usage<E: std::fmt::Display>(e: E) -> Outcome {
    Outcome::usage(e)
}

struct Loaded {
    graph: MetricGraph,
    config: SolverConfig,
    switch: Option<SwitchDescriptor>,
}

fn load_source(source: &Source, window: &WindowArg) -> Result<Loaded, Outcome> {
    let (graph, config, switch) = match (&source.preset, &source.graph) {
        (Some(name), _) => {
            let (g, spec) = presets::preset(name).map_err(usage)?;
            (g, Some(spec.solver), Some(spec.switch))
        }
        (None, Some(path)) => (io::load_graph(path).map_err(usage)?.graph, None, None),
        (None, None) => return Err(Outcome::usage("a graph file or --preset is required")),
    };
    let violations = graph.validate();
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
        return Err(Outcome::usage(format!("invalid graph:\n{}", text.join("\n"))));
    }
    let config = match (window.window_ghz, config) {
        (Some((lo, hi)), base) => SolverConfig {
            k_min: KWindow::from_ghz(lo, hi).k_min,
            k_max: KWindow::from_ghz(lo, hi).k_max,
            ..base.unwrap_or_default()
        },
        (None, Some(c)) => c,
        (None, None) => return Err(Outcome::usage("--window-ghz is required for graph files")),
    };
    config.check().map_err(usage)?;
    Ok(Loaded { graph, config, switch })
}

/// Spectrum and the reason it is incomplete, if it is.
fn solve(graph: &MetricGraph, config: &SolverConfig) -> Result<(Spectrum, Option<String>), Outcome> {
    match solve_spectrum(graph, config) {
        Ok(s) => Ok((s, None)),
        Err(SolveError::Incomplete { reason, spectrum }) => Ok((*spectrum, Some(reason))),
        Err(e) => Err(Outcome {
            code: 1,
            summary: format!("solve failed: {e}"),
            files: Vec::new(),
        }),
    }
}

fn inject_drop(s: Spectrum, drop: Option<usize>) -> Result<Spectrum, Outcome> {
    match drop {
        None => Ok(s),
        Some(i) if i < s.levels.len() => Ok(s.drop_level(i)),
        Some(i) => Err(Outcome::usage(format!(
            "--drop-level {i} out of range ({} levels)",
            s.levels.len()
        ))),
    }
}

fn weyl_line(s: &Spectrum) -> String {
    let w = s.window;
    format!(
        "{} levels in {:.4}..{:.4} rad/m; Weyl estimate {:.2}; max |N_fl| {:.3} (bound {})",
        s.count(),
        w.k_min,
        w.k_max,
        weyl_count(s.total_length, w.k_max) - weyl_count(s.total_length, w.k_min),
        s.diagnostics.max_abs_fluctuation,
        s.diagnostics.weyl_bound
    )
}

fn cmd_validate(path: &Path) -> Cmd {
    let file = io::load_graph(path).map_err(usage)?;
    let violations = file.graph.validate();
    if violations.is_empty() {
        let g = &file.graph;
        Ok(Outcome {
            code: 0,
            summary: format!(
                "ok: {} vertices, {} edges, total length {} m",
                g.vertex_count(),
                g.edges().len(),
                g.total_length_m()
            ),
            files: Vec::new(),
        })
    } else {
        let text: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
        Err(Outcome::usage(format!("invalid graph:\n{}", text.join("\n"))))
    }
}

fn cmd_solve(source: &Source, window: &WindowArg, out: Option<&Path>, drop: Option<usize>) -> Cmd {
    let loaded = load_source(source, window)?;
    let (spectrum, mut problem) = solve(&loaded.graph, &loaded.config)?;
    let spectrum = inject_drop(spectrum, drop)?;
    if !spectrum.is_complete() && problem.is_none() {
        problem = Some(format!(
            "found {} levels, certified {}",
            spectrum.count(),
            spectrum.diagnostics.certified_count.unwrap_or(0)
        ));
    }
    let mut files = Vec::new();
    if let Some(path) = out {
        io::write_spectrum_csv(path, &spectrum).map_err(usage)?;
        files.push(path.to_path_buf());
    }
    let mut summary = weyl_line(&spectrum);
    let code = match problem {
        Some(reason) => {
            summary.push_str(&format!("\nincomplete: {reason}"));
            1
        }
        None => 0,
    };
    Ok(Outcome { code, summary, files })
}

fn cmd_compare(
    source: &Source,
    window: &WindowArg,
    pivot: Option<usize>,
    edges: Option<&[usize]>,
    out: &Path,
    drop: Option<usize>,
) -> Cmd {
    let loaded = load_source(source, window)?;
    let switch = match (pivot, edges) {
        (Some(p), Some([a, b])) => SwitchDescriptor::new(p, *a, *b),
        (Some(_), Some(e)) => return Err(Outcome::usage(format!("--edges takes two ids, got {}", e.len()))),
        _ => loaded
            .switch
            .ok_or_else(|| Outcome::usage("--pivot and --edges are required for graph files"))?,
    };
    let after_graph = loaded.graph.edge_switch(&switch).map_err(usage)?;
    let (before, p1) = solve(&loaded.graph, &loaded.config)?;
    let (after, p2) = solve(&after_graph, &loaded.config)?;
    let after = inject_drop(after, drop)?;

    let mut files = Vec::new();
    let mut emit = |name: &str, r: Result<(), qgraph_core::IoError>| -> Result<(), Outcome> {
        r.map_err(usage)?;
        files.push(out.join(name));
        Ok(())
    };
    emit("before.csv", io::write_spectrum_csv(&out.join("before.csv"), &before))?;
    emit("after.csv", io::write_spectrum_csv(&out.join("after.csv"), &after))?;
    emit("counting.csv", io::write_counting_csv(&out.join("counting.csv"), &before, &after))?;

    let shift = shift_distribution(&before, &after).map_err(usage)?;
    let pooled = qgraph_core::ensemble::pool_shift_distributions(&[&shift]).expect("one distribution");
    emit("shift_distribution.csv", io::write_shift_csv(&out.join("shift_distribution.csv"), &pooled))?;
    let degree = interlacing_degree(&before, &after).ok();
    let rows = vec![io::InterlacingRow {
        pair_id: "0".into(),
        degree,
        violations: qgraph_core::stats::interlacing_violations(&before, &after, 1),
    }];
    emit("interlacing.csv", io::write_interlacing_csv(&out.join("interlacing.csv"), &rows))?;

    let report = detect_missing_resonances(&before, &after).map_err(usage)?;
    let mut summary = format!(
        "before: {}\nafter:  {}\ninterlacing degree: {}\nP(dN): {}",
        weyl_line(&before),
        weyl_line(&after),
        degree.map_or("n/a".to_string(), |d| d.to_string()),
        shift
            .masses
            .iter()
            .map(|(m, p)| format!("{m:+}: {p:.4}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    let mut code = 0;
    for (side, p) in [("before", p1), ("after", p2)] {
        if let Some(reason) = p {
            summary.push_str(&format!("\n{side} incomplete: {reason}"));
            code = 1;
        }
    }
    if !after.is_complete() || !before.is_complete() {
        code = 1;
    }
    if !report.is_empty() {
        code = 1;
        summary.push_str("\nmissing-resonance report:");
        for s in &report.intervals {
            summary.push_str(&format!(
                "\n  dN = {:+} on {:.4}..{:.4} rad/m; suspect {:?} spectrum, level near k = {:.4} (bracket {:.4}..{:.4}); N_fl drift before {:+.2}, after {:+.2}",
                s.peak_delta_n, s.k_start, s.k_end, s.suspect, s.estimated_k, s.bracket.0, s.bracket.1, s.drift_before, s.drift_after
            ));
        }
    }
    Ok(Outcome { code, summary, files })
}

fn cmd_campaign(manifest: &Path, workers: Option<usize>, seed: Option<u64>, out: Option<&Path>) -> Cmd {
    let loaded: LoadedManifest = io::load_manifest(manifest).map_err(usage)?;
    let specs = io::manifest_specs(&loaded, seed).map_err(usage)?;
    let workers = workers
        .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
        .unwrap_or(1);
    if workers == 0 {
        return Err(Outcome::usage("--workers must be at least 1"));
    }
    let result = run_campaign(&specs, workers).map_err(usage)?;
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| loaded.manifest.output_dir.as_ref().map(|d| loaded.base_dir.join(d)))
        .unwrap_or_else(|| PathBuf::from("campaign_out"));
    let spec = HistogramSpec {
        bin_width: loaded.manifest.histogram_bin_width.unwrap_or(0.1),
        ..HistogramSpec::default()
    };
    let files = io::write_campaign(&dir, &result, Some(&loaded), spec).map_err(usage)?;
    let s = io::summarize(&result, spec);

    let mut summary = format!(
        "{} pairs; levels before {}, after {}, total {}",
        s.pairs, s.levels_before, s.levels_after, s.levels_total
    );
    if let Some(d) = s.max_interlacing_degree {
        summary.push_str(&format!("\nmax interlacing degree {d}"));
    }
    if let Some(p) = &result.pooled_shift {
        let bars: Vec<String> = p
            .distribution
            .masses
            .iter()
            .map(|(m, v)| format!("{m:+}: {v:.4} ± {:.4}", p.std_error[m]))
            .collect();
        summary.push_str(&format!("\nP(dN): {}", bars.join(", ")));
    }
    if let (Some(g), Some(u), Some(mean)) = (s.ks_goe, s.ks_gue, s.mean_spacing) {
        summary.push_str(&format!(
            "\n{} spacings, mean {mean:.4}; KS(GOE) {g:.4}, KS(GUE) {u:.4}",
            s.spacings
        ));
    }
    if let (Some(xi), Some(u)) = (s.xi, s.xi_uncertainty) {
        summary.push_str(&format!("\nxi = {xi:.3} ± {u:.3}"));
    }
    let code = if result.is_degraded() {
        summary.push_str(&format!("\ndegraded pairs: {}", result.degraded_pairs.join(", ")));
        1
    } else {
        0
    };
    Ok(Outcome { code, summary, files })
}

fn cmd_fit_xi(path: &Path, out: Option<&Path>, bin_width: f64) -> Cmd {
    if !(bin_width > 0.0 && bin_width <= 4.0) {
        return Err(Outcome::usage("--bin-width must be in (0, 4]"));
    }
    let sample = io::read_spacings_csv(path).map_err(usage)?;
    let spec = HistogramSpec {
        bin_width,
        ..HistogramSpec::default()
    };
    let fit = fit_xi(&sample, spec).map_err(usage)?;
    let mut files = Vec::new();
    if let Some(p) = out {
        io::write_histogram_csv(p, &sample.histogram(spec), fit.xi).map_err(usage)?;
        files.push(p.to_path_buf());
    }
    Ok(Outcome {
        code: 0,
        summary: format!(
            "xi = {:.4} ± {:.4} ({} spacings, rss {:.3e})",
            fit.xi,
            fit.xi_uncertainty,
            sample.len(),
            fit.rss
        ),
        files,
    })
}

fn cmd_preset(action: &PresetAction) -> Cmd {
    match action {
        PresetAction::List => {
            let lines: Vec<String> = PRESET_NAMES
                .iter()
                .map(|n| {
                    let (g, spec) = presets::preset(n).expect("builtin preset");
                    format!(
                        "{n}\t{} m\t{} pairs\tswitch at vertex {} of edges {} and {}",
                        g.total_length_m(),
                        spec.pair_count(),
                        spec.switch.pivot,
                        spec.switch.edge_a,
                        spec.switch.edge_b
                    )
                })
                .collect();
            Ok(Outcome {
                code: 0,
                summary: lines.join("\n"),
                files: Vec::new(),
            })
        }
        PresetAction::Dump { name, out } => {
            let (g, _) = presets::preset(name).map_err(usage)?;
            let meta = qgraph_core::io::preset_metadata(name);
            match out {
                Some(p) => {
                    io::save_graph(p, &g, &meta).map_err(usage)?;
                    Ok(Outcome {
                        code: 0,
                        summary: format!("preset {name}: {} m", g.total_length_m()),
                        files: vec![p.clone()],
                    })
                }
                None => Ok(Outcome {
                    code: 0,
                    summary: io::graph_to_json(&g, &meta).trim_end().to_string(),
                    files: Vec::new(),
                }),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { graph } => cmd_validate(graph),
        Command::Solve {
            source,
            window,
            out,
            drop_level,
        } => cmd_solve(source, window, out.as_deref(), *drop_level),
        Command::Compare {
            source,
            window,
            pivot,
            edges,
            out,
            drop_level,
        } => cmd_compare(source, window, *pivot, edges.as_deref(), out, *drop_level),
        Command::Campaign {
            manifest,
            workers,
            seed,
            out,
        } => cmd_campaign(manifest, *workers, *seed, out.as_deref()),
        Command::FitXi { spacings, out, bin_width } => cmd_fit_xi(spacings, out.as_deref(), *bin_width),
        Command::Preset { action } => cmd_preset(action),
    };
    let outcome = result.unwrap_or_else(|e| e);
    if outcome.code == 2 {
        eprintln!("{}", outcome.summary);
    } else {
        println!("{}", outcome.summary);
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    ExitCode::from(outcome.code)
}
