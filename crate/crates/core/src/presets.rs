//! The four-vertex (tetrahedral) networks of the experiments.
//!
//! Vertices are `a = 0, b = 1, c = 2, d = 3`; edge ids are the cable numbers.
//! Only some cable lengths of the physical networks are known. The remaining
//! length (total minus the known cables) is split over the other edges with
//! fixed, mutually incommensurate defaults; these are choices of this crate,
//! overridable through a graph file.

use crate::ensemble::{Randomization, SweepSpec};
use crate::error::GraphError;
use crate::graph::{Edge, EdgeId, Length, MetricGraph, SwitchDescriptor};
use crate::solver::SolverConfig;
use crate::units::KWindow;

pub const PRESET_NAMES: [&str; 3] = ["goe_a", "goe_b", "gue"];

pub const VERTEX_NAMES: [&str; 4] = ["a", "b", "c", "d"];

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;

/// Length moved between the phase-shifter edges per 6° step.
pub const PHASE_SHIFTER_STEP_M: f64 = 0.005;

/// Magnetic flux `A_e L_e` (radians) on each edge of the `gue` preset, in
/// cable order 1..=6.
pub const GUE_EDGE_FLUX: [f64; 6] = [0.9, -1.3, 1.1, 0.7, -1.6, 1.2];

/// Mean number of levels per configuration in the extended GUE ensemble.
pub const GUE_NUMERICS_LEVELS: f64 = 149.0;

/// Configurations in the extended GUE ensemble.
pub const GUE_NUMERICS_CONFIGURATIONS: usize = 40;

/// Relative length jitter of the extended GUE ensemble.
pub const GUE_NUMERICS_JITTER: f64 = 0.02;

pub const GUE_NUMERICS_SEED: u64 = 0x5eed_2020;

fn edge(id: usize, u: usize, v: usize, length: f64) -> Edge {
    Edge::new(id, u, v, length, 0.0)
}

/// Tetrahedron of total length 2.248 m with phase shifters on cables 1 and 2;
/// the switch exchanges cables 3 (a–b) and 5 (a–c) at vertex a.
pub fn goe_a_graph() -> MetricGraph {
    MetricGraph::new(
        4,
        vec![
            edge(1, B, D, 0.697),
            edge(2, C, D, 0.612),
            edge(3, A, B, 0.170),
            edge(4, A, D, 0.2851),
            edge(5, A, C, 0.243),
            edge(6, B, C, 0.2409),
        ],
    )
}

/// Second arrangement of the 2.248 m network: phase shifter B moved to cable
/// 6; the switch exchanges cables 3 (b–a) and 2 (b–c) at vertex b.
pub fn goe_b_graph() -> MetricGraph {
    MetricGraph::new(
        4,
        vec![
            edge(1, C, D, 0.697),
            edge(2, B, C, 0.327),
            edge(3, B, A, 0.170),
            edge(4, A, D, 0.3209),
            edge(5, A, C, 0.2818),
            edge(6, B, D, 0.4513),
        ],
    )
}

/// Tetrahedron of total length 2.918 m with a vector potential on every
/// edge; the switch exchanges cables 3 (b–a) and 2 (b–c) at vertex b.
pub fn gue_graph() -> MetricGraph {
    let mut edges = vec![
        edge(1, A, C, 0.7123),
        edge(2, B, C, 0.327),
        edge(3, B, A, 0.170),
        edge(4, A, D, 0.5437),
        edge(5, B, D, 0.5069),
        edge(6, C, D, 0.6581),
    ];
    for (e, flux) in edges.iter_mut().zip(GUE_EDGE_FLUX) {
        e.phase_per_metre = flux / e.length_m();
    }
    MetricGraph::new(4, edges)
}

fn sweep(
    label: &str,
    base: MetricGraph,
    grow: usize,
    shrink: usize,
    steps: usize,
    switch: SwitchDescriptor,
    window: KWindow,
) -> SweepSpec {
    SweepSpec {
        label: label.to_string(),
        base,
        grow_edge: EdgeId(grow),
        shrink_edge: EdgeId(shrink),
        step_delta: Length::from_metres(PHASE_SHIFTER_STEP_M),
        step_count: steps,
        switch,
        solver: SolverConfig::for_window(window),
        randomization: None,
    }
}

/// A preset graph together with its sweep schedule.
pub fn preset(name: &str) -> Result<(MetricGraph, SweepSpec), GraphError> {
    let spec = match name {
        // 0°..60° in ten 6° steps
        "goe_a" => sweep(
            name,
            goe_a_graph(),
            1,
            2,
            10,
            SwitchDescriptor::new(A, 3, 5),
            KWindow::from_ghz(0.01, 2.5),
        ),
        "goe_b" => sweep(
            name,
            goe_b_graph(),
            1,
            6,
            10,
            SwitchDescriptor::new(B, 3, 2),
            KWindow::from_ghz(0.01, 2.5),
        ),
        // 0°..42° in seven 6° steps
        "gue" => sweep(
            name,
            gue_graph(),
            1,
            6,
            7,
            SwitchDescriptor::new(B, 2, 3),
            KWindow::from_ghz(0.8, 2.5),
        ),
        other => return Err(GraphError::UnknownPreset(other.to_string())),
    };
    Ok((spec.base.clone(), spec))
}

/// Window of the extended GUE numerics: from near zero up to the wavenumber
/// where the Weyl count reaches [`GUE_NUMERICS_LEVELS`].
pub fn gue_numerics_window(total_length: f64) -> KWindow {
    KWindow::with_weyl_levels(1e-3, total_length, GUE_NUMERICS_LEVELS)
}

/// The extended GUE ensemble: 40 jittered copies of the `gue` preset, each
/// paired with its switched image, over [`gue_numerics_window`].
pub fn gue_numerics_spec() -> SweepSpec {
    let (graph, mut spec) = preset("gue").expect("builtin preset");
    spec.label = "gue_numerics".to_string();
    spec.solver = SolverConfig::for_window(gue_numerics_window(graph.total_length_m()));
    spec.randomization = Some(Randomization {
        count: GUE_NUMERICS_CONFIGURATIONS,
        jitter: GUE_NUMERICS_JITTER,
        seed: GUE_NUMERICS_SEED,
        compensate_edge: EdgeId(1),
    });
    spec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexId;

    #[test]
    fn presets_are_valid_with_published_totals() {
        for (name, total) in [("goe_a", 2.248), ("goe_b", 2.248), ("gue", 2.918)] {
            let (g, spec) = preset(name).unwrap();
            assert!(g.validate().is_empty(), "{name}");
            assert_eq!(g.total_length(), Length::from_metres(total), "{name}");
            assert!(g.edge_switch(&spec.switch).is_ok());
            assert_eq!(g.degree_sequence(), vec![3, 3, 3, 3]);
        }
    }

    #[test]
    fn goe_a_known_cables() {
        let (g, spec) = preset("goe_a").unwrap();
        for (id, len) in [(1, 0.697), (2, 0.612), (3, 0.170), (5, 0.243)] {
            assert_eq!(g.edge(EdgeId(id)).unwrap().length_m(), len);
        }
        assert_eq!(spec.step_count + 1, 11);
        assert_eq!(spec.switch.pivot, VertexId(A));
    }

    #[test]
    fn gue_has_phases_everywhere() {
        let (g, spec) = preset("gue").unwrap();
        assert!(g.edges().iter().all(|e| e.phase_per_metre != 0.0));
        assert_eq!(g.edge(EdgeId(2)).unwrap().length_m(), 0.327);
        assert_eq!(g.edge(EdgeId(3)).unwrap().length_m(), 0.170);
        assert_eq!(spec.step_count + 1, 8);
        let max_flux = g
            .edges()
            .iter()
            .map(|e| (e.phase_per_metre * e.length_m()).abs())
            .fold(0.0, f64::max);
        assert!(max_flux > 0.5 && max_flux < 2.0);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(preset("gse"), Err(GraphError::UnknownPreset(_))));
    }
}
