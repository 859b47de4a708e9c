//! Random-matrix reference distributions for unfolded nearest-neighbour
//! spacings.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnsembleClass {
    Goe,
    Gue,
}

impl std::fmt::Display for EnsembleClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EnsembleClass::Goe => write!(f, "GOE"),
            EnsembleClass::Gue => write!(f, "GUE"),
        }
    }
}

/// Wigner surmise for the spacing density.
pub fn wigner_pdf(s: f64, class: EnsembleClass) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    match class {
        EnsembleClass::Goe => PI / 2.0 * s * (-PI * s * s / 4.0).exp(),
        EnsembleClass::Gue => 32.0 / (PI * PI) * s * s * (-4.0 * s * s / PI).exp(),
    }
}

/// Cumulative distribution of [`wigner_pdf`].
pub fn wigner_cdf(s: f64, class: EnsembleClass) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    match class {
        EnsembleClass::Goe => -(-PI * s * s / 4.0).exp_m1(),
        EnsembleClass::Gue => {
            let x = 2.0 * s / PI.sqrt();
            libm::erf(x) - 4.0 * s / PI * (-4.0 * s * s / PI).exp()
        }
    }
}

/// Scale `c(ξ)` of the GOE–GUE transition density.
pub fn transition_scale(xi: f64) -> f64 {
    let q = 2.0 + xi * xi;
    (PI * q / 4.0).sqrt() * (1.0 - 2.0 / PI * ((xi / SQRT_2).atan() - SQRT_2 * xi / q))
}

/// Spacing density interpolating between GOE (`ξ = 0`) and GUE (`ξ → ∞`).
pub fn transition_pdf(s: f64, xi: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if xi == 0.0 {
        return wigner_pdf(s, EnsembleClass::Goe);
    }
    let c = transition_scale(xi);
    ((2.0 + xi * xi) / 2.0).sqrt() * s * c * c * libm::erf(s * c / xi) * (-s * s * c * c / 2.0).exp()
}

/// Two-sided Kolmogorov–Smirnov distance between the empirical CDF of
/// `sample` and the Wigner CDF of `class`. Zero for an empty sample.
pub fn ks_distance(sample: &[f64], class: EnsembleClass) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = wigner_cdf(x, class);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    d.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn densities_vanish_at_zero() {
        for class in [EnsembleClass::Goe, EnsembleClass::Gue] {
            assert_eq!(wigner_pdf(0.0, class), 0.0);
            assert_eq!(wigner_cdf(0.0, class), 0.0);
        }
        assert_eq!(transition_pdf(0.0, 1.0), 0.0);
    }

    #[test]
    fn scale_at_goe_limit() {
        assert!((transition_scale(0.0) - (PI / 2.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cdf_matches_pdf_derivative() {
        for class in [EnsembleClass::Goe, EnsembleClass::Gue] {
            for s in [0.3, 1.0, 2.2] {
                let h = 1e-5;
                let d = (wigner_cdf(s + h, class) - wigner_cdf(s - h, class)) / (2.0 * h);
                assert!((d - wigner_pdf(s, class)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn ks_bounds() {
        let d = ks_distance(&[1.0, 1.0, 1.0], EnsembleClass::Goe);
        assert!((0.0..=1.0).contains(&d));
        assert!((d - (1.0 - wigner_cdf(1.0, EnsembleClass::Goe)).max(wigner_cdf(1.0, EnsembleClass::Goe))).abs() < 1e-15);
    }
}
