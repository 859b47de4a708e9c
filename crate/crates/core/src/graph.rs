//! Metric graphs, their validation, and the two structural transformations
//! used by the experiments: the edge switch at a common vertex and the
//! constant-total-length transfer between two edges (paired phase shifters).
//!
//! Edge lengths are stored as an integer number of picometres. Every length
//! operation is then exact integer arithmetic, so the total length of a graph
//! is preserved bit-for-bit by switches, transfers and the compensated
//! jitter used in randomized ensembles.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Picometres per metre.
pub const PICOMETRES_PER_METRE: f64 = 1e12;

/// Dense vertex index, `0..vertex_count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

/// Edge identifier. Presets use the cable numbers of the physical networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A length on the picometre lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Length(i64);

impl Length {
    pub const ZERO: Length = Length(0);

    /// Rounds `metres` to the nearest picometre. Non-finite input maps to zero
    /// so that validation reports it as a degenerate edge.
    pub fn from_metres(metres: f64) -> Length {
        if !metres.is_finite() {
            return Length(0);
        }
        Length((metres * PICOMETRES_PER_METRE).round() as i64)
    }

    pub const fn from_picometres(pm: i64) -> Length {
        Length(pm)
    }

    pub fn picometres(self) -> i64 {
        self.0
    }

    pub fn metres(self) -> f64 {
        self.0 as f64 / PICOMETRES_PER_METRE
    }
}

impl std::ops::Add for Length {
    type Output = Length;
    fn add(self, rhs: Length) -> Length {
        Length(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Length {
    type Output = Length;
    fn sub(self, rhs: Length) -> Length {
        Length(self.0 - rhs.0)
    }
}

impl std::iter::Sum for Length {
    fn sum<I: Iterator<Item = Length>>(iter: I) -> Length {
        Length(iter.map(|l| l.0).sum())
    }
}

/// An undirected edge. The magnetic phase (vector potential) is read in the
/// direction `endpoints.0 -> endpoints.1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub endpoints: (VertexId, VertexId),
    pub length: Length,
    pub phase_per_metre: f64,
}

impl Edge {
    pub fn new(id: usize, u: usize, v: usize, length_m: f64, phase_per_metre: f64) -> Edge {
        Edge {
            id: EdgeId(id),
            endpoints: (VertexId(u), VertexId(v)),
            length: Length::from_metres(length_m),
            phase_per_metre,
        }
    }

    pub fn length_m(&self) -> f64 {
        self.length.metres()
    }

    pub fn is_loop(&self) -> bool {
        self.endpoints.0 == self.endpoints.1
    }

    pub fn is_incident_to(&self, v: VertexId) -> bool {
        self.endpoints.0 == v || self.endpoints.1 == v
    }

    /// The endpoint opposite `v`, if `v` is an endpoint.
    pub fn far_end(&self, v: VertexId) -> Option<VertexId> {
        if self.endpoints.0 == v {
            Some(self.endpoints.1)
        } else if self.endpoints.1 == v {
            Some(self.endpoints.0)
        } else {
            None
        }
    }

    /// Phase per metre read in the direction leaving `v`.
    pub fn phase_leaving(&self, v: VertexId) -> f64 {
        if self.endpoints.0 == v {
            self.phase_per_metre
        } else {
            -self.phase_per_metre
        }
    }
}

/// Vertex matching condition. Only the standard (Neumann–Kirchhoff) one is
/// supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    #[default]
    Neumann,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    pub boundary_condition: BoundaryCondition,
}

/// One failed graph invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    NoEdges,
    NonPositiveLength { edge: EdgeId },
    UnknownEndpoint { edge: EdgeId, vertex: VertexId },
    DuplicateEdgeId { edge: EdgeId },
    NonFinitePhase { edge: EdgeId },
    IsolatedVertex { vertex: VertexId },
    Disconnected { components: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::NoEdges => write!(f, "graph has no edges"),
            Violation::NonPositiveLength { edge } => {
                write!(f, "edge {} has non-positive length", edge.0)
            }
            Violation::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge {} references unknown vertex {}", edge.0, vertex.0)
            }
            Violation::DuplicateEdgeId { edge } => write!(f, "edge id {} used twice", edge.0),
            Violation::NonFinitePhase { edge } => {
                write!(f, "edge {} has a non-finite magnetic phase", edge.0)
            }
            Violation::IsolatedVertex { vertex } => {
                write!(f, "vertex {} has degree 0", vertex.0)
            }
            Violation::Disconnected { components } => {
                write!(f, "graph is not connected ({components} components)")
            }
        }
    }
}

/// The two edges exchanged by an edge switch and their common vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchDescriptor {
    pub pivot: VertexId,
    pub edge_a: EdgeId,
    pub edge_b: EdgeId,
}

impl SwitchDescriptor {
    pub fn new(pivot: usize, edge_a: usize, edge_b: usize) -> SwitchDescriptor {
        SwitchDescriptor {
            pivot: VertexId(pivot),
            edge_a: EdgeId(edge_a),
            edge_b: EdgeId(edge_b),
        }
    }
}

impl MetricGraph {
    /// Builds a graph without checking invariants; see [`MetricGraph::validate`].
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> MetricGraph {
        MetricGraph {
            vertex_count,
            edges,
            boundary_condition: BoundaryCondition::Neumann,
        }
    }

    /// Builds a graph and rejects it if any invariant fails.
    pub fn validated(vertex_count: usize, edges: Vec<Edge>) -> Result<MetricGraph, GraphError> {
        let g = MetricGraph::new(vertex_count, edges);
        let violations = g.validate();
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(GraphError::Invalid(violations))
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count).map(VertexId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    fn edge_index(&self, id: EdgeId) -> Result<usize, GraphError> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or(GraphError::UnknownEdge(id))
    }

    pub fn total_length(&self) -> Length {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Total optical length in metres, the symbol L of the Weyl law.
    pub fn total_length_m(&self) -> f64 {
        self.total_length().metres()
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| (e.endpoints.0 == v) as usize + (e.endpoints.1 == v) as usize)
            .sum()
    }

    pub fn has_magnetic_phases(&self) -> bool {
        self.edges.iter().any(|e| e.phase_per_metre != 0.0)
    }

    /// Returns every failed invariant; empty iff the graph is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.vertex_count == 0 {
            out.push(Violation::NoVertices);
        }
        if self.edges.is_empty() {
            out.push(Violation::NoEdges);
        }
        let mut seen = HashSet::new();
        for e in &self.edges {
            if !seen.insert(e.id) {
                out.push(Violation::DuplicateEdgeId { edge: e.id });
            }
            if e.length.picometres() <= 0 {
                out.push(Violation::NonPositiveLength { edge: e.id });
            }
            if !e.phase_per_metre.is_finite() {
                out.push(Violation::NonFinitePhase { edge: e.id });
            }
            for v in [e.endpoints.0, e.endpoints.1] {
                if v.0 >= self.vertex_count {
                    out.push(Violation::UnknownEndpoint { edge: e.id, vertex: v });
                }
            }
        }
        if out
            .iter()
            .any(|v| matches!(v, Violation::UnknownEndpoint { .. } | Violation::NoVertices))
        {
            return out;
        }
        for v in self.vertices() {
            if self.degree(v) == 0 {
                out.push(Violation::IsolatedVertex { vertex: v });
            }
        }
        let components = self.component_count();
        if components > 1 {
            out.push(Violation::Disconnected { components });
        }
        out
    }

    fn component_count(&self) -> usize {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e.endpoints.0 .0].push(e.endpoints.1 .0);
            adj[e.endpoints.1 .0].push(e.endpoints.0 .0);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut components = 0;
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        components
    }

    /// Exchanges the far endpoints of two edges that share `d.pivot`.
    ///
    /// Lengths travel with the edges. The switched edges are re-anchored as
    /// `(pivot, far)` with their phase read in that direction, so the vector
    /// potential keeps running away from the pivot.
    pub fn edge_switch(&self, d: &SwitchDescriptor) -> Result<MetricGraph, GraphError> {
        if d.edge_a == d.edge_b {
            return Err(GraphError::InvalidSwitch(format!(
                "edge {} cannot be switched with itself",
                d.edge_a.0
            )));
        }
        let ia = self.edge_index(d.edge_a)?;
        let ib = self.edge_index(d.edge_b)?;
        let (ea, eb) = (&self.edges[ia], &self.edges[ib]);
        for e in [ea, eb] {
            if !e.is_incident_to(d.pivot) {
                return Err(GraphError::InvalidSwitch(format!(
                    "edge {} is not incident to vertex {}",
                    e.id.0, d.pivot.0
                )));
            }
            if e.is_loop() {
                return Err(GraphError::InvalidSwitch(format!(
                    "edge {} is a loop at the pivot",
                    e.id.0
                )));
            }
        }
        let far_a = ea.far_end(d.pivot).expect("incident");
        let far_b = eb.far_end(d.pivot).expect("incident");
        let phase_a = ea.phase_leaving(d.pivot);
        let phase_b = eb.phase_leaving(d.pivot);

        let mut edges = self.edges.clone();
        edges[ia].endpoints = (d.pivot, far_b);
        edges[ia].phase_per_metre = phase_a;
        edges[ib].endpoints = (d.pivot, far_a);
        edges[ib].phase_per_metre = phase_b;
        Ok(MetricGraph {
            vertex_count: self.vertex_count,
            edges,
            boundary_condition: self.boundary_condition,
        })
    }

    /// Moves `delta` of length from `from` to `to`, keeping the total fixed.
    pub fn transfer_length(
        &self,
        from: EdgeId,
        to: EdgeId,
        delta: Length,
    ) -> Result<MetricGraph, GraphError> {
        let i_from = self.edge_index(from)?;
        let i_to = self.edge_index(to)?;
        if delta.picometres() < 0 {
            return Err(GraphError::NegativeTransfer);
        }
        if delta >= self.edges[i_from].length {
            return Err(GraphError::DegenerateEdge(from));
        }
        let mut edges = self.edges.clone();
        edges[i_from].length = edges[i_from].length - delta;
        edges[i_to].length = edges[i_to].length + delta;
        Ok(MetricGraph {
            vertex_count: self.vertex_count,
            edges,
            boundary_condition: self.boundary_condition,
        })
    }

    /// Returns a copy with every edge length replaced by `lengths[i]`.
    pub fn with_lengths(&self, lengths: &[Length]) -> MetricGraph {
        assert_eq!(lengths.len(), self.edges.len());
        let mut g = self.clone();
        for (e, &l) in g.edges.iter_mut().zip(lengths) {
            e.length = l;
        }
        g
    }

    /// Returns a copy with every magnetic phase multiplied by `factor`.
    pub fn scale_phases(&self, factor: f64) -> MetricGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.phase_per_metre *= factor;
        }
        g
    }

    /// Canonical edge tuples `(min, max, length, phase read min->max)`, sorted.
    /// Two graphs with equal canonical forms have identical edge multisets.
    pub fn canonical_edges(&self) -> Vec<(usize, usize, i64, u64)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                let (u, v) = e.endpoints;
                let (lo, hi, phase) = if u <= v {
                    (u, v, e.phase_per_metre)
                } else {
                    (v, u, -e.phase_per_metre)
                };
                // +0.0 and -0.0 compare equal
                let phase = if phase == 0.0 { 0.0 } else { phase };
                (lo.0, hi.0, e.length.picometres(), phase.to_bits())
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Sorted degree sequence.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<_> = self.vertices().map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// Vertices adjacent to `v` (with repetition for parallel edges).
    pub fn neighbours(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.edges.iter().filter_map(|e| e.far_end(v)).collect()
    }
}
