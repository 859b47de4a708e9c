//! Bond-scattering representation of a Neumann metric graph.
//!
//! Each edge carries two directed bonds. The quantum evolution map is
//! `U(k) = D(k) S`, with `D` diagonal, `D_bb = exp(i (k + A_b) L_b)`, and `S`
//! the vertex scattering matrix, `S_{b'b} = 2/d_v - δ_{b', rev(b)}` whenever
//! bond `b` ends at vertex `v` and `b'` starts there. Eigenvalues `k > 0` are
//! the zeros of `det(I - U(k))`.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use crate::error::SolveError;
use crate::graph::{EdgeId, MetricGraph, VertexId};

/// One direction of travel along an edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectedBond {
    pub edge: EdgeId,
    /// `true` when travelling from the edge's first endpoint to its second.
    pub forward: bool,
    pub origin: VertexId,
    pub terminus: VertexId,
    pub length: f64,
    /// Vector potential along the direction of travel, rad/m.
    pub phase_per_metre: f64,
}

impl DirectedBond {
    /// Index of the reversed bond in [`BondSystem::bonds`].
    pub fn reverse_index(index: usize) -> usize {
        index ^ 1
    }
}

/// Precomputed bond structure of a graph; evaluates `U(k)` and its root
/// indicators.
#[derive(Debug, Clone)]
pub struct BondSystem {
    bonds: Vec<DirectedBond>,
    scattering: DMatrix<Complex64>,
    /// Sum of all edge lengths in metres.
    total_length: f64,
}

impl BondSystem {
    pub fn new(graph: &MetricGraph) -> Result<BondSystem, SolveError> {
        let violations = graph.validate();
        if !violations.is_empty() {
            return Err(crate::error::GraphError::Invalid(violations).into());
        }
        let mut bonds = Vec::with_capacity(2 * graph.edges().len());
        for e in graph.edges() {
            let (u, v) = e.endpoints;
            let length = e.length_m();
            bonds.push(DirectedBond {
                edge: e.id,
                forward: true,
                origin: u,
                terminus: v,
                length,
                phase_per_metre: e.phase_per_metre,
            });
            bonds.push(DirectedBond {
                edge: e.id,
                forward: false,
                origin: v,
                terminus: u,
                length,
                phase_per_metre: -e.phase_per_metre,
            });
        }

        let n = bonds.len();
        let degree: Vec<f64> = graph.vertices().map(|v| graph.degree(v) as f64).collect();
        let mut scattering = DMatrix::<Complex64>::zeros(n, n);
        for (b, incoming) in bonds.iter().enumerate() {
            let v = incoming.terminus;
            let amp = 2.0 / degree[v.0];
            for (b_out, outgoing) in bonds.iter().enumerate() {
                if outgoing.origin != v {
                    continue;
                }
                let back = if b_out == DirectedBond::reverse_index(b) { 1.0 } else { 0.0 };
                scattering[(b_out, b)] = Complex64::new(amp - back, 0.0);
            }
        }

        Ok(BondSystem {
            bonds,
            scattering,
            total_length: graph.total_length_m(),
        })
    }

    pub fn bonds(&self) -> &[DirectedBond] {
        &self.bonds
    }

    pub fn dimension(&self) -> usize {
        self.bonds.len()
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// The vertex scattering matrix `S` (k-independent for Neumann vertices).
    pub fn scattering(&self) -> &DMatrix<Complex64> {
        &self.scattering
    }

    /// `U(k) = D(k) S`.
    pub fn evolution(&self, k: f64) -> DMatrix<Complex64> {
        let mut u = self.scattering.clone();
        for (row, bond) in self.bonds.iter().enumerate() {
            let phase = (k + bond.phase_per_metre) * bond.length;
            let d = Complex64::from_polar(1.0, phase);
            u.row_mut(row).iter_mut().for_each(|x| *x *= d);
        }
        u
    }

    /// Singular values of `I - U(k)`, ascending.
    pub fn secular_singular_values(&self, k: f64) -> Vec<f64> {
        let mut m = -self.evolution(k);
        for i in 0..m.nrows() {
            m[(i, i)] += Complex64::new(1.0, 0.0);
        }
        let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
        sv.sort_by(f64::total_cmp);
        sv
    }

    /// Smallest singular value of `I - U(k)`; vanishes exactly at eigenvalues.
    pub fn residual(&self, k: f64) -> f64 {
        self.secular_singular_values(k)[0]
    }

    /// Sum of the principal eigenphases of `U(k)`, each taken in `[0, 2π)`.
    ///
    /// The unwrapped eigenphases all increase with `k` (`dU/dk = i L U` with
    /// `L` positive), and their sum advances exactly as `2 L k`. Every time an
    /// eigenphase passes through zero the principal sum drops by `2π`, which
    /// is what [`BondSystem::count_between`] exploits.
    pub fn eigenphase_sum(&self, k: f64) -> Result<f64, SolveError> {
        let u = self.evolution(k);
        let schur = Schur::try_new(u, 1e-15, 10_000).ok_or(SolveError::Decomposition(k))?;
        let eig: DVector<Complex64> = schur.eigenvalues().ok_or(SolveError::Decomposition(k))?;
        Ok(eig
            .iter()
            .map(|z| {
                let t = z.im.atan2(z.re);
                if t < 0.0 {
                    t + TAU
                } else {
                    t
                }
            })
            .sum())
    }

    /// Number of eigenvalues (with multiplicity) in `(k1, k2]`, given the
    /// principal eigenphase sums at both ends.
    pub fn count_from_sums(&self, k1: f64, sum1: f64, k2: f64, sum2: f64) -> Result<i64, SolveError> {
        let raw = (2.0 * self.total_length * (k2 - k1) - (sum2 - sum1)) / TAU;
        let n = raw.round();
        if (raw - n).abs() > 0.25 {
            return Err(SolveError::Decomposition(k2));
        }
        Ok(n as i64)
    }

    /// Number of eigenvalues (with multiplicity) in `(k1, k2]`, exact up to
    /// the accuracy of the eigen-decomposition. Requires `k2 >= k1`.
    pub fn count_between(&self, k1: f64, k2: f64) -> Result<i64, SolveError> {
        let s1 = self.eigenphase_sum(k1)?;
        let s2 = self.eigenphase_sum(k2)?;
        self.count_from_sums(k1, s1, k2, s2)
    }

    /// Mean level spacing in k, `π / L`.
    pub fn mean_spacing(&self) -> f64 {
        PI / self.total_length
    }
}

/// The bond-scattering matrix `U(k)` of `graph`.
pub fn bond_matrix(graph: &MetricGraph, k: f64) -> Result<DMatrix<Complex64>, SolveError> {
    if k.is_nan() || k <= 0.0 {
        return Err(SolveError::NonPositiveWavenumber(k));
    }
    Ok(BondSystem::new(graph)?.evolution(k))
}

/// Smallest singular value of `I - U(k)`.
pub fn secular_residual(graph: &MetricGraph, k: f64) -> Result<f64, SolveError> {
    if k.is_nan() || k <= 0.0 {
        return Err(SolveError::NonPositiveWavenumber(k));
    }
    Ok(BondSystem::new(graph)?.residual(k))
}
