//! Numerical tolerances shared by the estimators.
//!
//! Every classification in the crate is made at a finite resolution; these
//! knobs pin that resolution. They are plain data so the CLI can override them
//! per scenario and echo them into report metadata.

use crate::util::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Depth at which "O(ε^q) for all q" is truncated.
    pub q_max: f64,
    /// Slopes below `-n_max` are treated as non-moderate blow-up.
    pub n_max: f64,
    /// Maximum log-residual of a scaling fit before classification is refused.
    pub residual_gate: f64,
    /// Spread of per-order exponents still accepted as one uniform `N` (Regular).
    pub tau_regular: f64,
    /// Spread of the cone-decay exponents `N(l)` still accepted as `∃N ∀l`.
    pub tau_wavefront: f64,
    /// Exponent change tolerated when the coarsest ladder point is dropped.
    pub stability_tolerance: f64,
    /// Magnitudes at or below this are zero for the fits.
    pub machine_floor: f64,
    /// Spectral values below this fraction of the per-ε maximum are treated as zero.
    pub spectral_floor: f64,
    /// The localized transform must decay faster than `|ξ|^{-xi_slope_gate}` at the top of the band.
    pub xi_slope_gate: f64,
    /// Number of octaves below the top guard octave used for the ξ-slope gate.
    pub gate_octaves: usize,
    /// Weights `l` of the cone-decay test.
    pub l_grid: Vec<f64>,
    /// Orders `m` of the micro-support test.
    pub m_grid: Vec<f64>,
    /// Powers `p` of the slow-scale test.
    pub slow_scale_powers: Vec<f64>,
    /// Tail slope of `ω^p ε` may dip this far below zero.
    pub slow_scale_tail_tolerance: f64,
    /// Cap on `c_p^{1/p}` for a slow-scale pass.
    pub slow_scale_growth_cap: f64,
    /// ξ range reaches `xi_reach / ε` for closed-form spectra.
    pub xi_reach: f64,
    /// Radial samples per octave in frequency scans.
    pub samples_per_octave: usize,
    /// Angular samples across a 2-D cone.
    pub angular_samples: usize,
    /// Cap on samples per axis when refining localized densities.
    pub max_refined_points: usize,
    /// Largest top-octave amplitude, relative to the spectral maximum, of a
    /// sampling that counts as resolved.
    pub aliasing_guard: f64,
    /// Highest derivative order used by seminorms.
    pub max_order: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            q_max: 8.0,
            n_max: 40.0,
            residual_gate: 0.5,
            tau_regular: 0.75,
            tau_wavefront: 1.5,
            stability_tolerance: 0.25,
            machine_floor: 1e-280,
            spectral_floor: 1e-12,
            xi_slope_gate: 4.0,
            gate_octaves: 3,
            l_grid: vec![0.0, 2.0, 4.0, 8.0],
            m_grid: vec![0.0, -2.0, -4.0, -8.0],
            slow_scale_powers: vec![1.0, 2.0, 4.0, 8.0],
            slow_scale_tail_tolerance: 0.05,
            slow_scale_growth_cap: 1e3,
            xi_reach: 1024.0,
            samples_per_octave: 8,
            angular_samples: 7,
            max_refined_points: 1 << 16,
            aliasing_guard: 1e-9,
            max_order: 4,
        }
    }
}
