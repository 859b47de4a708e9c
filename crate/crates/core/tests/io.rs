use std::fs;

use qgraph_core::ensemble::run_campaign;
use qgraph_core::io::*;
use qgraph_core::presets::{self, PRESET_NAMES};
use qgraph_core::solver::solve_spectrum;
use qgraph_core::stats::{HistogramSpec, SpacingSample};
use qgraph_core::IoError;
use serde_json::Value;

#[test]
fn preset_graph_files_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for name in PRESET_NAMES {
        let (g, _) = presets::preset(name).unwrap();
        let path = dir.path().join(format!("{name}.json"));
        save_graph(&path, &g, &preset_metadata(name)).unwrap();
        let back = load_graph(&path).unwrap();
        assert_eq!(back.graph, g);
        assert_eq!(back.metadata["preset"], Value::from(name));
        // saving again gives the same bytes
        let again = dir.path().join("again.json");
        save_graph(&again, &back.graph, &back.metadata).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&again).unwrap());
    }
}

#[test]
fn graph_with_arbitrary_lengths_round_trips() {
    let text = r#"{"version":1,"vertices":[0,1,2],"edges":[
        {"id":1,"u":0,"v":1,"length_m":0.1234567890123,"phase_per_m":-2.5},
        {"id":2,"u":1,"v":2,"length_m":3.3}]}"#;
    let g = graph_from_json(text, "mem").unwrap().graph;
    let back = graph_from_json(&graph_to_json(&g, &Value::Null), "mem").unwrap().graph;
    assert_eq!(back, g);
    assert_eq!(g.edges()[1].phase_per_metre, 0.0);
}

#[test]
fn unsupported_version_and_missing_file_are_errors() {
    let text = r#"{"version":2,"vertices":[0],"edges":[]}"#;
    assert!(matches!(graph_from_json(text, "mem"), Err(IoError::Schema(_))));
    assert!(matches!(
        load_graph(std::path::Path::new("/nonexistent/graph.json")),
        Err(IoError::Read { .. })
    ));
}

#[test]
fn spectrum_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (g, spec) = presets::preset("gue").unwrap();
    let s = solve_spectrum(&g, &spec.solver).unwrap();
    let path = dir.path().join("s.csv");
    write_spectrum_csv(&path, &s).unwrap();
    let rows = read_spectrum_csv(&path).unwrap();
    assert_eq!(rows, spectrum_rows(&s));
    assert_eq!(rows.len(), s.levels.len());
    assert_eq!(rows[0].index, s.levels_below + 1);
    let header = fs::read_to_string(&path).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "index,k_rad_per_m,freq_GHz,multiplicity,residual");
}

#[test]
fn campaign_outputs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (_, spec) = presets::preset("gue").unwrap();
    let result = run_campaign(&[spec], 4).unwrap();
    let files = write_campaign(dir.path(), &result, None, HistogramSpec::default()).unwrap();
    assert!(files.iter().all(|f| f.exists()));
    assert_eq!(fs::read_dir(dir.path().join("spectra")).unwrap().count(), 16);

    let shift = read_shift_csv(&dir.path().join("shift_distribution.csv")).unwrap();
    assert_eq!(shift, shift_rows(result.pooled_shift.as_ref().unwrap()));

    let inter = read_interlacing_csv(&dir.path().join("interlacing.csv")).unwrap();
    assert_eq!(inter, interlacing_rows(&result));
    assert_eq!(inter[0].pair_id, "gue#0");

    let sp = read_spacings_csv(&dir.path().join("spacings.csv")).unwrap();
    assert_eq!(sp.spacings, result.spacings.spacings);

    let hist = read_histogram_csv(&dir.path().join("spacing_histogram.csv")).unwrap();
    assert_eq!(hist.len(), HistogramSpec::default().bins());

    let summary: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["summary"]["pairs"], Value::from(8));
}

#[test]
fn counting_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (g, spec) = presets::preset("goe_a").unwrap();
    let before = solve_spectrum(&g, &spec.solver).unwrap();
    let after = solve_spectrum(&g.edge_switch(&spec.switch).unwrap(), &spec.solver).unwrap();
    let path = dir.path().join("counting.csv");
    write_counting_csv(&path, &before, &after).unwrap();
    let rows = read_counting_csv(&path).unwrap();
    assert_eq!(rows, counting_rows(&before, &after).unwrap());
    assert!(rows.iter().all(|r| r.delta_n == r.n_before as i64 - r.n_after as i64));
    assert!(rows.iter().all(|r| r.delta_n.abs() <= 1));
}

#[test]
fn spacing_table_rejects_nonpositive_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    fs::write(&path, "index,s\n0,1.0\n1,-0.5\n").unwrap();
    assert!(read_spacings_csv(&path).is_err());
    write_spacings_csv(&path, &SpacingSample::new(vec![0.5, 1.25])).unwrap();
    assert_eq!(read_spacings_csv(&path).unwrap().spacings, vec![0.5, 1.25]);
}

#[test]
fn manifest_with_graph_file_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = presets::preset("goe_a").unwrap();
    save_graph(&dir.path().join("net.json"), &g, &Value::Null).unwrap();
    let manifest = r#"{
        "version": 1,
        "name": "custom",
        "window_ghz": [0.01, 1.0],
        "entries": [{
            "label": "net",
            "graph": "net.json",
            "sweep": {"grow_edge": 1, "shrink_edge": 2, "step_delta_m": 0.01, "step_count": 2,
                      "switch": {"pivot": 0, "edge_a": 3, "edge_b": 5}}
        }]
    }"#;
    let path = dir.path().join("m.json");
    fs::write(&path, manifest).unwrap();
    let loaded = load_manifest(&path).unwrap();
    assert_eq!(loaded.sha256.len(), 64);
    let specs = manifest_specs(&loaded, None).unwrap();
    assert_eq!(specs.len(), 1);
    assert_eq!(specs[0].pair_count(), 3);
    assert_eq!(specs[0].label, "net");

    let bad = r#"{"version":1,"entries":[{"preset":"gue","bogus":1}]}"#;
    assert!(parse_manifest(bad, "mem").is_err());
    let dup = r#"{"version":1,"entries":[{"preset":"gue"},{"preset":"gue"}]}"#;
    let loaded = LoadedManifest {
        manifest: parse_manifest(dup, "mem").unwrap(),
        sha256: String::new(),
        base_dir: dir.path().to_path_buf(),
    };
    assert!(manifest_specs(&loaded, None).is_err());
}
