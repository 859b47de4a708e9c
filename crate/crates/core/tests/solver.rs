mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use qgraph_core::presets::{self, GUE_EDGE_FLUX};
use qgraph_core::solver::{
    bond_matrix, fd_error_estimate, fd_oracle_spectrum, secular_residual, solve_spectrum,
    spectrum_under_phase_reversal, BondSystem, SolverConfig,
};
use qgraph_core::{Edge, KWindow, MetricGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn config(k_min: f64, k_max: f64) -> SolverConfig {
    SolverConfig::for_window(KWindow::new(k_min, k_max))
}

fn interval(len: f64) -> MetricGraph {
    MetricGraph::new(2, vec![Edge::new(0, 0, 1, len, 0.0)])
}

fn ring(len: f64) -> MetricGraph {
    MetricGraph::new(1, vec![Edge::new(0, 0, 0, len, 0.0)])
}

fn star(arms: &[f64]) -> MetricGraph {
    let edges = arms
        .iter()
        .enumerate()
        .map(|(i, &l)| Edge::new(i, 0, i + 1, l, 0.0))
        .collect();
    MetricGraph::new(arms.len() + 1, edges)
}

/// Roots of the secular residual from a uniform scan: every grid minimum of
/// the smallest singular value below `floor`, refined by the vertex of the
/// parabola through `σ²` at the minimum and its neighbours.
fn dense_scan_roots(graph: &MetricGraph, k_min: f64, k_max: f64, step: f64, floor: f64) -> Vec<f64> {
    let sys = BondSystem::new(graph).unwrap();
    let n = ((k_max - k_min) / step).floor() as usize;
    let sigma: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|i| sys.residual(k_min + i as f64 * step))
        .collect();
    let mut roots = Vec::new();
    for i in 1..n {
        let (a, b, c) = (sigma[i - 1], sigma[i], sigma[i + 1]);
        if b <= a && b < c && b < floor {
            let (fa, fb, fc) = (a * a, b * b, c * c);
            let shift = 0.5 * (fa - fc) / (fa - 2.0 * fb + fc);
            roots.push(k_min + (i as f64 + shift) * step);
        }
    }
    roots
}

#[test]
fn residual_vanishes_on_interval_levels_only() {
    let g = interval(1.0);
    assert!(secular_residual(&g, PI).unwrap() < 1e-10);
    assert!(secular_residual(&g, PI / 2.0).unwrap() > 0.1);
}

#[test]
fn ring_residual_has_two_vanishing_singular_values() {
    let sys = BondSystem::new(&ring(1.0)).unwrap();
    let sv = sys.secular_singular_values(2.0 * PI);
    assert!(sv[0] < 1e-10 && sv[1] < 1e-10, "{sv:?}");
}

#[test]
fn nonpositive_wavenumber_is_rejected() {
    assert!(bond_matrix(&interval(1.0), 0.0).is_err());
    assert!(bond_matrix(&interval(1.0), -1.0).is_err());
}

#[test]
fn interval_spectrum_in_small_window() {
    let s = solve_spectrum(&interval(1.0), &config(0.1, 10.0)).unwrap();
    assert_eq!(s.count(), 3);
    for (n, l) in s.levels.iter().enumerate() {
        assert_eq!(l.multiplicity, 1);
        assert!((l.k - (n + 1) as f64 * PI).abs() < 1e-9, "{}", l.k);
    }
}

#[test]
fn unitarity_over_random_graphs_and_wavenumbers() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for draw in 0..1000 {
        let g = common::random_tetrahedron(&mut rng, draw % 2 == 1);
        let k = rng.gen_range(1e-3..200.0);
        let u = bond_matrix(&g, k).unwrap();
        for sv in u.singular_values().iter() {
            assert!((sv - 1.0).abs() < 1e-10, "draw {draw}: singular value {sv}");
        }
    }
}

#[test]
fn three_star_matches_dense_scan() {
    let g = star(&[1.0, 0.7, 0.5]);
    let s = solve_spectrum(&g, &config(0.1, 20.0)).unwrap();
    let oracle = dense_scan_roots(&g, 0.1, 20.0, 1e-5, 1e-3);
    let solved = s.wavenumbers();
    assert_eq!(solved.len(), oracle.len(), "{solved:?}\n{oracle:?}");
    for (a, b) in solved.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn three_star_generic_levels_solve_the_tangent_condition() {
    let arms = [1.0, 0.7, 0.5];
    let s = solve_spectrum(&star(&arms), &config(0.1, 20.0)).unwrap();
    for l in &s.levels {
        let cosines: Vec<f64> = arms.iter().map(|a| (l.k * a).cos()).collect();
        if cosines.iter().all(|c| c.abs() > 1e-3) {
            let t: f64 = arms.iter().map(|a| (l.k * a).tan()).sum();
            assert!(t.abs() < 1e-6, "k = {}: Σ tan = {t}", l.k);
        }
    }
}

#[test]
fn goe_a_count_in_paper_window() {
    let (g, spec) = presets::preset("goe_a").unwrap();
    let s = solve_spectrum(&g, &spec.solver).unwrap();
    assert!(s.is_complete());
    assert!((35..=38).contains(&s.count()), "{}", s.count());
}

#[test]
fn goe_a_lowest_levels_match_the_fd_oracle() {
    let g = presets::goe_a_graph();
    let s = solve_spectrum(&g, &config(0.05, 15.0)).unwrap();
    let solved: Vec<f64> = s.expanded().into_iter().take(10).collect();
    let oracle = fd_oracle_spectrum(&g, 2000, 10).unwrap();
    let h = g.edges().iter().map(|e| e.length_m()).fold(0.0, f64::max) / 2000.0;
    for (a, b) in solved.iter().zip(&oracle) {
        let tol = (1e-3 * a).max(fd_error_estimate(*a, h));
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }
}

#[test]
fn phase_reversal_leaves_gue_spectrum_unchanged() {
    let (g, spec) = presets::preset("gue").unwrap();
    let (fwd, rev) = spectrum_under_phase_reversal(&g, &spec.solver).unwrap();
    assert_eq!(fwd.count(), rev.count());
    for (a, b) in fwd.wavenumbers().iter().zip(rev.wavenumbers()) {
        assert!((a - b).abs() <= 2.0 * spec.solver.root_tolerance, "{a} vs {b}");
    }
}

#[test]
fn phase_reversal_without_phases_is_identity() {
    let (g, spec) = presets::preset("goe_b").unwrap();
    let (fwd, rev) = spectrum_under_phase_reversal(&g, &spec.solver).unwrap();
    assert_eq!(fwd, rev);
}

#[test]
fn doubling_the_flux_moves_levels() {
    let (g, spec) = presets::preset("gue").unwrap();
    assert!(GUE_EDGE_FLUX.iter().any(|f| *f != 0.0));
    let one = solve_spectrum(&g, &spec.solver).unwrap().wavenumbers();
    let two = solve_spectrum(&g.scale_phases(2.0), &spec.solver).unwrap().wavenumbers();
    let moved = one
        .iter()
        .zip(&two)
        .any(|(a, b)| (a - b).abs() > 10.0 * spec.solver.root_tolerance);
    assert!(moved || one.len() != two.len());
}

#[test]
fn repeated_solves_are_bit_identical() {
    let (g, spec) = presets::preset("gue").unwrap();
    let a = solve_spectrum(&g, &spec.solver).unwrap();
    let b = solve_spectrum(&g, &spec.solver).unwrap();
    assert_eq!(a, b);
    let bits = |s: &qgraph_core::Spectrum| s.wavenumbers().iter().map(|k| k.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn residuals_stay_below_threshold() {
    let (g, spec) = presets::preset("goe_b").unwrap();
    let s = solve_spectrum(&g, &spec.solver).unwrap();
    assert!(s.levels.iter().all(|l| l.residual <= spec.solver.residual_threshold));
    assert!(s.levels.windows(2).all(|w| w[0].k < w[1].k));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn interval_levels_are_multiples_of_pi_over_length(len in 0.3f64..3.0) {
        let k_max = 30.5 * PI / len;
        let s = solve_spectrum(&interval(len), &config(0.1, k_max)).unwrap();
        prop_assert_eq!(s.count(), 30);
        for (n, l) in s.levels.iter().enumerate() {
            let exact = (n + 1) as f64 * PI / len;
            prop_assert_eq!(l.multiplicity, 1);
            prop_assert!((l.k - exact).abs() <= 1e-9 * exact, "{} vs {}", l.k, exact);
        }
    }

    #[test]
    fn ring_levels_are_double(len in 0.3f64..3.0) {
        let k_max = 10.5 * 2.0 * PI / len;
        let s = solve_spectrum(&ring(len), &config(0.1, k_max)).unwrap();
        prop_assert_eq!(s.levels.len(), 10);
        for (n, l) in s.levels.iter().enumerate() {
            let exact = 2.0 * PI * (n + 1) as f64 / len;
            prop_assert_eq!(l.multiplicity, 2);
            prop_assert!((l.k - exact).abs() <= 1e-9 * exact, "{} vs {}", l.k, exact);
        }
    }
}
