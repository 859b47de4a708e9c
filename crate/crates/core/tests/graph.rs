mod common;

use proptest::prelude::*;
use qgraph_core::graph::PICOMETRES_PER_METRE;
use qgraph_core::presets::{self, PRESET_NAMES};
use qgraph_core::{Edge, EdgeId, Length, MetricGraph, SwitchDescriptor, VertexId, Violation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// All valid switches of a graph: pairs of non-loop edges sharing a vertex.
fn switches(g: &MetricGraph) -> Vec<SwitchDescriptor> {
    let mut out = Vec::new();
    for v in g.vertices() {
        let incident: Vec<&Edge> = g
            .edges()
            .iter()
            .filter(|e| e.is_incident_to(v) && !e.is_loop())
            .collect();
        for (i, a) in incident.iter().enumerate() {
            for b in &incident[i + 1..] {
                out.push(SwitchDescriptor::new(v.0, a.id.0, b.id.0));
            }
        }
    }
    out
}

fn graph_from_seed(seed: u64, magnetic: bool) -> MetricGraph {
    common::random_tetrahedron(&mut ChaCha8Rng::seed_from_u64(seed), magnetic)
}

#[test]
fn presets_are_valid() {
    for name in PRESET_NAMES {
        let (g, spec) = presets::preset(name).unwrap();
        assert!(g.validate().is_empty(), "{name}");
        assert!(g.edge_switch(&spec.switch).unwrap().validate().is_empty(), "{name}");
    }
}

#[test]
fn preset_lengths() {
    let (a, _) = presets::preset("goe_a").unwrap();
    assert_eq!(a.total_length(), Length::from_metres(2.248));
    for (id, len) in [(1, 0.697), (2, 0.612), (3, 0.170), (5, 0.243)] {
        assert_eq!(a.edge(EdgeId(id)).unwrap().length_m(), len);
    }
    let (g, _) = presets::preset("gue").unwrap();
    assert_eq!(g.total_length(), Length::from_metres(2.918));
    assert_eq!(g.edge(EdgeId(2)).unwrap().length_m(), 0.327);
    assert_eq!(g.edge(EdgeId(3)).unwrap().length_m(), 0.170);
    assert!(g.edges().iter().all(|e| e.phase_per_metre != 0.0));
    assert!(presets::preset("goe_c").is_err());
}

#[test]
fn goe_a_switch_moves_cable_five_to_b() {
    let (g, spec) = presets::preset("goe_a").unwrap();
    let s = g.edge_switch(&spec.switch).unwrap();
    let e3 = s.edge(EdgeId(3)).unwrap();
    let e5 = s.edge(EdgeId(5)).unwrap();
    assert_eq!(e3.length_m(), 0.170);
    assert_eq!(e5.length_m(), 0.243);
    assert_eq!(e5.far_end(VertexId(0)), Some(VertexId(1)));
    assert_eq!(e3.far_end(VertexId(0)), Some(VertexId(2)));
}

#[test]
fn zero_length_and_disconnected_graphs_are_reported() {
    let g = MetricGraph::new(2, vec![Edge::new(7, 0, 1, 0.0, 0.0)]);
    assert_eq!(g.validate(), vec![Violation::NonPositiveLength { edge: EdgeId(7) }]);
    let g = MetricGraph::new(
        4,
        vec![Edge::new(0, 0, 1, 1.0, 0.0), Edge::new(1, 2, 3, 1.0, 0.0)],
    );
    assert!(g
        .validate()
        .iter()
        .any(|v| matches!(v, Violation::Disconnected { components: 2 })));
}

#[test]
fn zero_transfer_is_identity() {
    let (g, _) = presets::preset("goe_a").unwrap();
    let t = g.transfer_length(EdgeId(2), EdgeId(1), Length::from_metres(0.0)).unwrap();
    assert_eq!(t, g);
    let whole = g.edge(EdgeId(2)).unwrap().length;
    assert!(g.transfer_length(EdgeId(2), EdgeId(1), whole).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn switch_is_an_involution(seed in any::<u64>(), magnetic in any::<bool>(), pick in any::<prop::sample::Index>()) {
        let g = graph_from_seed(seed, magnetic);
        let all = switches(&g);
        let d = all[pick.index(all.len())];
        let twice = g.edge_switch(&d).unwrap().edge_switch(&d).unwrap();
        prop_assert_eq!(twice.canonical_edges(), g.canonical_edges());
    }

    #[test]
    fn switch_preserves_total_length_and_degrees(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let g = graph_from_seed(seed, true);
        let all = switches(&g);
        let d = all[pick.index(all.len())];
        let s = g.edge_switch(&d).unwrap();
        prop_assert_eq!(s.total_length_m().to_bits(), g.total_length_m().to_bits());
        prop_assert_eq!(s.degree_sequence(), g.degree_sequence());
        prop_assert!(s.validate().is_empty());
    }

    #[test]
    fn transfer_preserves_total_length(seed in any::<u64>(), frac in 0.0f64..0.99, from in 1usize..=6, to in 1usize..=6) {
        prop_assume!(from != to);
        let g = graph_from_seed(seed, false);
        let from_len = g.edge(EdgeId(from)).unwrap().length_m();
        let delta = Length::from_metres(frac * from_len);
        let t = g.transfer_length(EdgeId(from), EdgeId(to), delta).unwrap();
        prop_assert_eq!(t.total_length(), g.total_length());
        prop_assert_eq!(t.total_length_m().to_bits(), g.total_length_m().to_bits());
        let grown = t.edge(EdgeId(to)).unwrap().length.picometres() - g.edge(EdgeId(to)).unwrap().length.picometres();
        prop_assert_eq!(grown, delta.picometres());
    }

    #[test]
    fn metres_roundtrip_through_the_length_lattice(pm in 1i64..10_000_000_000_000) {
        let m = pm as f64 / PICOMETRES_PER_METRE;
        prop_assert_eq!(Length::from_metres(m).picometres(), pm);
    }
}
