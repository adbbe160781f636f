use super::cone::{Cone, ConeClass};
use super::spectrum::{LocalizedSpectrum, SpectralTable};
use crate::asymptotics::{fit_ladder, ScalingFit};
use crate::util::least_squares;
use crate::util::prelude::*;
use crate::{Error, Result, Tolerances};

/// Evidence behind a cone-decay classification.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeDecayProfile {
    pub cone: Cone,
    pub l_grid: Vec<f64>,
    /// `M_ε(l) = sup ⟨ξ⟩^l |F|` over the cone and window, indexed `[l][k]`.
    pub magnitudes: Vec<Vec<f64>>,
    /// Fit of `M(l)` against ε; `None` when too few usable points.
    pub fits: Vec<Option<ScalingFit>>,
    /// ε-growth `N(l)`, clamped at zero.
    pub growth: Vec<f64>,
    /// Slope of the octave maxima of `|F|` at the top of the window, per ε;
    /// `None` when those octaves are all at the spectral floor.
    pub xi_slopes: Vec<Option<f64>>,
    pub rapid: Vec<bool>,
    pub spread: f64,
    pub class: ConeClass,
}

/// Largest `max |F|` per octave of the gate, lowest octave first.
fn gate_octaves(t: &SpectralTable, bins: &[usize], count: usize) -> Vec<(usize, f64)> {
    let last = t.octaves().saturating_sub(1);
    let start = last.saturating_sub(count);
    (start..last)
        .map(|o| (o, bins.iter().map(|b| t.plain(*b, o)).fold(0.0, f64::max)))
        .collect()
}

fn slope_gate(t: &SpectralTable, bins: &[usize], tol: &Tolerances) -> (Option<f64>, bool) {
    let g = gate_octaves(t, bins, tol.gate_octaves);
    match g.last() {
        None => return (None, true),
        Some((_, v)) if *v == 0.0 => {
            let any = g.iter().any(|(_, v)| *v > 0.0);
            return (if any { Some(f64::NEG_INFINITY) } else { None }, true);
        }
        _ => {}
    }
    let pts: Vec<(f64, f64)> =
        g.iter().filter(|(_, v)| *v > 0.0).map(|(o, v)| ((*o as f64 + 0.5) * core::f64::consts::LN_2, v.ln())).collect();
    if pts.len() < 2 {
        return (Some(0.0), false);
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    let (slope, _) = least_squares(&xs, &ys);
    (Some(slope), slope <= -tol.xi_slope_gate)
}

/// Classify the decay of a localized transform in a cone.
///
/// Every ε must show rapid decay at the top of its window (the ξ-slope gate).
/// Then `N(l)` is fitted from `sup ⟨ξ⟩^l |F|` for each `l`; a failed fit or
/// `N(l) > n_max` gives `Neither`, a spread of `N(l)` within
/// `tau_wavefront` gives `InGinf`, otherwise `InGOnly`.
pub fn cone_decay_classify(
    spec: &LocalizedSpectrum,
    cone: &Cone,
    tol: &Tolerances,
) -> Result<(ConeClass, ConeDecayProfile)> {
    let bins = cone.bins();
    if bins.is_empty() || cone.dim() != spec.dim() {
        return Err(Error::EmptyCone);
    }
    let l_grid = tol.l_grid.clone();
    let nl = l_grid.len();
    let tables = spec.tables();
    let mut magnitudes = vec![vec![0.0; tables.len()]; nl];
    let mut xi_slopes = Vec::with_capacity(tables.len());
    let mut rapid = Vec::with_capacity(tables.len());
    // A ladder point whose whole spectrum sits below the floor relative to the
    // largest one carries no information.
    let global = tables.iter().map(|t| t.abs_max()).fold(0.0, f64::max);
    for (k, t) in tables.iter().enumerate() {
        if global.is_finite() && t.abs_max() < tol.spectral_floor * global {
            xi_slopes.push(None);
            rapid.push(true);
            continue;
        }
        if t.l_grid() != l_grid.as_slice() {
            return Err(Error::InvalidArgument("spectrum was built with a different l grid".into()));
        }
        let window = t.octaves().saturating_sub(1);
        for (li, row) in magnitudes.iter_mut().enumerate() {
            row[k] = (0..window)
                .flat_map(|o| bins.iter().map(move |b| (o, *b)))
                .map(|(o, b)| t.weighted(b, o, li))
                .fold(0.0, f64::max);
        }
        let (s, ok) = if t.abs_max().is_finite() { slope_gate(t, &bins, tol) } else { (None, false) };
        xi_slopes.push(s);
        rapid.push(ok);
    }
    let mut fits = Vec::with_capacity(nl);
    let mut growth = Vec::with_capacity(nl);
    let mut fit_ok = true;
    for row in &magnitudes {
        match fit_ladder(spec.ladder(), row, tol) {
            Ok(f) => {
                let g = if f.floor_flag { 0.0 } else { f.growth().max(0.0) };
                if !f.floor_flag && (f.residual > tol.residual_gate || f.growth() > tol.n_max) {
                    fit_ok = false;
                }
                growth.push(g);
                fits.push(Some(f));
            }
            Err(_) => {
                fit_ok = false;
                growth.push(f64::NAN);
                fits.push(None);
            }
        }
    }
    let finite: Vec<f64> = growth.iter().copied().filter(|g| g.is_finite()).collect();
    let spread = if finite.is_empty() {
        f64::NAN
    } else {
        finite.iter().copied().fold(f64::NEG_INFINITY, f64::max) - finite.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let class = if !rapid.iter().all(|r| *r) || !fit_ok {
        ConeClass::Neither
    } else if spread <= tol.tau_wavefront {
        ConeClass::InGinf
    } else {
        ConeClass::InGOnly
    };
    let profile = ConeDecayProfile { cone: *cone, l_grid, magnitudes, fits, growth, xi_slopes, rapid, spread, class };
    Ok((class, profile))
}
