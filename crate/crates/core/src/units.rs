use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Wavenumber in rad/m for a frequency in GHz, `k = 2πν/c`.
pub fn k_from_ghz(ghz: f64) -> f64 {
    2.0 * PI * ghz * 1e9 / SPEED_OF_LIGHT
}

/// Frequency in GHz for a wavenumber in rad/m, `ν = ck/2π`.
pub fn ghz_from_k(k: f64) -> f64 {
    SPEED_OF_LIGHT * k / (2.0 * PI) / 1e9
}

/// Half-open wavenumber window `(k_min, k_max]` in rad/m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KWindow {
    pub k_min: f64,
    pub k_max: f64,
}

impl KWindow {
    pub fn new(k_min: f64, k_max: f64) -> KWindow {
        KWindow { k_min, k_max }
    }

    pub fn from_ghz(lo: f64, hi: f64) -> KWindow {
        KWindow::new(k_from_ghz(lo), k_from_ghz(hi))
    }

    /// Window starting at `k_min` whose Weyl count `L(k_max - k_min)/π`
    /// equals `levels`.
    pub fn with_weyl_levels(k_min: f64, total_length: f64, levels: f64) -> KWindow {
        KWindow::new(k_min, k_min + levels * PI / total_length)
    }

    pub fn width(&self) -> f64 {
        self.k_max - self.k_min
    }

    pub fn contains(&self, k: f64) -> bool {
        k > self.k_min && k <= self.k_max
    }

    pub fn is_valid(&self) -> bool {
        self.k_min.is_finite() && self.k_max.is_finite() && self.k_min >= 0.0 && self.k_min < self.k_max
    }
}
