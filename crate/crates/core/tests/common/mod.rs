//! Test-side oracles: closed-form densities written out independently of the
//! library, an inverse-transform sampler, quadrature and random graphs.

#![allow(dead_code)]

use std::f64::consts::PI;

use qgraph_core::{Edge, MetricGraph};
use rand::Rng;

pub fn goe_density(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        0.5 * PI * s * (-0.25 * PI * s * s).exp()
    }
}

pub fn gue_density(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        32.0 * s * s * (-4.0 * s * s / PI).exp() / (PI * PI)
    }
}

/// GOE-GUE interpolating density, typed in from its closed form.
pub fn transition_density(s: f64, xi: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if xi == 0.0 {
        return goe_density(s);
    }
    let q = 2.0 + xi * xi;
    let bracket = (xi / 2f64.sqrt()).atan() - 2f64.sqrt() * xi / q;
    let c = (PI * q / 4.0).sqrt() * (1.0 - 2.0 / PI * bracket);
    (q / 2.0).sqrt() * s * c * c * libm::erf(s * c / xi) * (-0.5 * s * s * c * c).exp()
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Inverse-transform sampler for a density on `[0, upper]`, tabulated by
/// the trapezoid rule and inverted by linear interpolation.
pub struct Sampler {
    grid: Vec<f64>,
    cdf: Vec<f64>,
}

impl Sampler {
    pub fn new(density: impl Fn(f64) -> f64, upper: f64, points: usize) -> Sampler {
        let h = upper / (points - 1) as f64;
        let grid: Vec<f64> = (0..points).map(|i| i as f64 * h).collect();
        let mut cdf = vec![0.0; points];
        for i in 1..points {
            cdf[i] = cdf[i - 1] + 0.5 * h * (density(grid[i - 1]) + density(grid[i]));
        }
        let total = cdf[points - 1];
        for c in &mut cdf {
            *c /= total;
        }
        Sampler { grid, cdf }
    }

    pub fn draw(&self, u: f64) -> f64 {
        let i = self.cdf.partition_point(|&c| c < u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let t = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.grid[i - 1] + t * (self.grid[i] - self.grid[i - 1])
    }

    /// `n` positive draws.
    pub fn sample(&self, rng: &mut impl Rng, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let s = self.draw(rng.gen::<f64>());
            if s > 0.0 {
                out.push(s);
            }
        }
        out
    }
}

/// Random connected four-vertex graph: a tetrahedron with lengths in
/// `[0.2, 1.0)` m and optional magnetic phases.
pub fn random_tetrahedron(rng: &mut impl Rng, magnetic: bool) -> MetricGraph {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let edges = pairs
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| {
            let len = rng.gen_range(0.2..1.0);
            let phase = if magnetic { rng.gen_range(-1.5..1.5) / len } else { 0.0 };
            Edge::new(i + 1, u, v, len, phase)
        })
        .collect();
    MetricGraph::new(4, edges)
}

/// Spectrum-like sorted sequence of `n` uniform points in `(0, top)`.
pub fn uniform_levels(rng: &mut impl Rng, n: usize, top: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(1e-9..top)).collect();
    v.sort_by(f64::total_cmp);
    v
}
