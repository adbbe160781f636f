//! ε-ladders, scaling-exponent fits, generalized numbers and the
//! moderate / negligible / regular / slow-scale classifications.
//!
//! Valuations are estimated by least squares on `(ln ε, ln magnitude)`. The
//! true valuation is a supremum over an O-bound on all of `(0, 1]`, which no
//! finite ladder can certify; every value here is an estimate at the ladder's
//! resolution.

use crate::config::Tolerances;
use crate::util::least_squares;
use crate::util::prelude::*;
use crate::{Error, Result};
use alloc::collections::BTreeMap;
use num_complex::Complex64;

/// Minimum number of non-zero ladder points a fit needs.
pub const MIN_FIT_POINTS: usize = 4;

/// Fitted growth within this of an integer rounds down to it.
pub const EXPONENT_SLACK: f64 = 0.1;

/// Geometric ladder `ε_k = ε_0 r^k`, strictly decreasing in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonLadder {
    values: Vec<f64>,
    ratio: f64,
    anchor: f64,
}

impl EpsilonLadder {
    pub fn geometric(anchor: f64, ratio: f64, count: usize) -> Result<Self> {
        if !(anchor > 0.0 && anchor <= 1.0) {
            return Err(Error::InvalidLadder(format!("anchor {anchor} outside (0, 1]")));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidLadder(format!("ratio {ratio} outside (0, 1)")));
        }
        if count < 8 {
            return Err(Error::InvalidLadder(format!("{count} points, at least 8 required")));
        }
        let values: Vec<f64> = (0..count).map(|k| anchor * ratio.powi(k as i32)).collect();
        let decades = values[0].log10() - values[count - 1].log10();
        if decades < 4.0 - 1e-12 {
            return Err(Error::InvalidLadder(format!(
                "ladder spans {decades:.2} decades, at least 4 required"
            )));
        }
        Ok(Self { values, ratio, anchor })
    }

    /// `ε_k = 2^{-k}` for `k = k_min..=k_max`.
    pub fn dyadic(k_min: u32, k_max: u32) -> Result<Self> {
        if k_max < k_min {
            return Err(Error::InvalidLadder("k_max < k_min".into()));
        }
        Self::geometric(0.5f64.powi(k_min as i32), 0.5, (k_max - k_min + 1) as usize)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn finest(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Index of the first ladder point `≤ eta`.
    pub fn prefix_start(&self, eta: f64) -> usize {
        self.values.iter().position(|&e| e <= eta).unwrap_or(self.values.len())
    }

    pub fn ensure_same(&self, other: &EpsilonLadder) -> Result<()> {
        if self.values == other.values {
            Ok(())
        } else {
            Err(Error::LadderMismatch)
        }
    }
}

impl Default for EpsilonLadder {
    /// `ε_k = 2^{-k}`, `k = 2..=18`: 17 points over about 4.8 decades.
    fn default() -> Self {
        Self::dyadic(2, 18).expect("default ladder is valid")
    }
}

/// Least-squares scaling exponent `b` in `magnitude ∼ ε^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// Fitted slope; `+∞` when the data sits at the machine floor.
    pub exponent: f64,
    pub intercept: f64,
    /// Max absolute deviation of `ln magnitude` from the fit line.
    pub residual: f64,
    pub floor_flag: bool,
    /// Exponent change when the coarsest usable point is dropped.
    pub stability: f64,
    pub stability_tolerance: f64,
    pub used_points: usize,
}

impl ScalingFit {
    pub fn is_stable(&self) -> bool {
        self.floor_flag || self.stability <= self.stability_tolerance
    }

    /// `-exponent`, the ε-growth order; `-∞` for floor fits.
    pub fn growth(&self) -> f64 {
        -self.exponent
    }

    fn floor(used_points: usize, tol: f64) -> Self {
        Self {
            exponent: f64::INFINITY,
            intercept: f64::NEG_INFINITY,
            residual: 0.0,
            floor_flag: true,
            stability: 0.0,
            stability_tolerance: tol,
            used_points,
        }
    }
}

/// Fits `(ε, magnitude)` samples with the default tolerances.
pub fn fit_valuation(samples: &[(f64, f64)]) -> Result<ScalingFit> {
    fit_valuation_with(samples, &Tolerances::default())
}

pub fn fit_valuation_with(samples: &[(f64, f64)], tol: &Tolerances) -> Result<ScalingFit> {
    for &(eps, m) in samples {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidArgument(format!("ε = {eps} outside (0, 1]")));
        }
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::InvalidArgument(format!("magnitude {m} not finite and ≥ 0")));
        }
    }
    let mut usable: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(_, m)| *m > tol.machine_floor)
        .map(|&(e, m)| (e.ln(), m.ln()))
        .collect();
    let zeros = samples.len() - usable.len();
    if usable.is_empty() || (!samples.is_empty() && 2 * zeros >= samples.len()) {
        if samples.len() < MIN_FIT_POINTS {
            return Err(Error::InsufficientLadder { usable: 0, required: MIN_FIT_POINTS });
        }
        return Ok(ScalingFit::floor(usable.len(), tol.stability_tolerance));
    }
    if usable.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientLadder { usable: usable.len(), required: MIN_FIT_POINTS });
    }
    // coarsest first
    usable.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(core::cmp::Ordering::Equal));
    let (xs, ys): (Vec<f64>, Vec<f64>) = usable.iter().copied().unzip();
    let (slope, intercept) = least_squares(&xs, &ys);
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).abs())
        .fold(0.0, f64::max);
    let stability = if xs.len() > MIN_FIT_POINTS {
        let (s2, _) = least_squares(&xs[1..], &ys[1..]);
        (s2 - slope).abs()
    } else {
        0.0
    };
    Ok(ScalingFit {
        exponent: slope,
        intercept,
        residual,
        floor_flag: false,
        stability,
        stability_tolerance: tol.stability_tolerance,
        used_points: xs.len(),
    })
}

/// Fits magnitudes aligned with a ladder.
pub fn fit_ladder(ladder: &EpsilonLadder, magnitudes: &[f64], tol: &Tolerances) -> Result<ScalingFit> {
    if magnitudes.len() != ladder.len() {
        return Err(Error::LadderMismatch);
    }
    let samples: Vec<(f64, f64)> =
        ladder.values().iter().copied().zip(magnitudes.iter().copied()).collect();
    fit_valuation_with(&samples, tol)
}

/// One complex value per ladder point: a representative of an element of C̃.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedNumber {
    values: Vec<Complex64>,
    ladder: EpsilonLadder,
}

impl GeneralizedNumber {
    pub fn new(ladder: EpsilonLadder, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != ladder.len() {
            return Err(Error::LadderMismatch);
        }
        Ok(Self { values, ladder })
    }

    pub fn from_fn(ladder: &EpsilonLadder, f: impl Fn(f64) -> Complex64) -> Self {
        let values = ladder.values().iter().map(|&e| f(e)).collect();
        Self { values, ladder: ladder.clone() }
    }

    pub fn constant(ladder: &EpsilonLadder, c: Complex64) -> Self {
        Self::from_fn(ladder, |_| c)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn ladder(&self) -> &EpsilonLadder {
        &self.ladder
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn fit(&self, tol: &Tolerances) -> Result<ScalingFit> {
        fit_ladder(&self.ladder, &self.magnitudes(), tol)
    }

    /// Estimated valuation; `+∞` for the zero net.
    pub fn valuation(&self) -> Result<f64> {
        Ok(self.fit(&Tolerances::default())?.exponent)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ladder.ensure_same(&other.ladder)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { values, ladder: self.ladder.clone() })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ladder.ensure_same(&other.ladder)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(Self { values, ladder: self.ladder.clone() })
    }

    pub fn neg(&self) -> Self {
        Self { values: self.values.iter().map(|v| -v).collect(), ladder: self.ladder.clone() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }
}

pub fn gn_add(x: &GeneralizedNumber, y: &GeneralizedNumber) -> Result<GeneralizedNumber> {
    x.add(y)
}

pub fn gn_mul(x: &GeneralizedNumber, y: &GeneralizedNumber) -> Result<GeneralizedNumber> {
    x.mul(y)
}

/// `e^{-valuation}`, zero for the zero net.
pub fn ultra_pseudo_norm(x: &GeneralizedNumber) -> Result<f64> {
    let v = x.valuation()?;
    Ok(if v == f64::INFINITY { 0.0 } else { (-v).exp() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModerationTag {
    Negligible,
    Moderate,
    Regular,
    NotModerate,
}

impl ModerationTag {
    pub fn is_moderate(self) -> bool {
        !matches!(self, ModerationTag::NotModerate)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModerationTag::Negligible => "Negligible",
            ModerationTag::Moderate => "Moderate",
            ModerationTag::Regular => "Regular",
            ModerationTag::NotModerate => "NotModerate",
        }
    }
}

/// Identifies one seminorm fit: the derivative order it controls plus a label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SeminormKey {
    pub order: usize,
    pub label: String,
}

impl SeminormKey {
    pub fn new(order: usize, label: impl Into<String>) -> Self {
        Self { order, label: label.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModerationClass {
    pub tag: ModerationTag,
    /// `N` with every seminorm `O(ε^{-N})`; absent for non-moderate nets.
    pub uniform_exponent: Option<i64>,
    /// Derivative order ↦ fitted growth `N` (`-∞` for floor fits).
    pub per_order_exponents: BTreeMap<usize, f64>,
    /// Some seminorms hit the floor while others did not.
    pub floor_conflict: bool,
}

impl ModerationClass {
    pub fn is_regular(&self) -> bool {
        matches!(self.tag, ModerationTag::Regular | ModerationTag::Negligible)
    }
}

pub fn classify_net(
    fits: &BTreeMap<SeminormKey, ScalingFit>,
    tol: &Tolerances,
) -> Result<ModerationClass> {
    if fits.is_empty() {
        return Err(Error::InvalidArgument("no seminorm fits to classify".into()));
    }
    for (key, fit) in fits {
        if !fit.floor_flag && (fit.residual > tol.residual_gate || !fit.is_stable()) {
            return Err(Error::FitRejected {
                seminorm: format!("{}[{}]", key.label, key.order),
                residual: fit.residual,
            });
        }
    }
    let mut per_order: BTreeMap<usize, f64> = BTreeMap::new();
    for (key, fit) in fits {
        let g = fit.growth();
        let slot = per_order.entry(key.order).or_insert(f64::NEG_INFINITY);
        *slot = slot.max(g);
    }
    let floors = fits.values().filter(|f| f.floor_flag).count();
    let floor_conflict = floors > 0 && floors < fits.len();
    let finite: Vec<f64> = fits.values().filter(|f| !f.floor_flag).map(|f| f.growth()).collect();

    let negligible = fits.values().all(|f| f.exponent >= tol.q_max - 1e-9);
    if finite.iter().any(|&n| n > tol.n_max) {
        return Ok(ModerationClass {
            tag: ModerationTag::NotModerate,
            uniform_exponent: None,
            per_order_exponents: per_order,
            floor_conflict,
        });
    }
    let worst = finite.iter().copied().fold(0.0, f64::max);
    let uniform = Some((worst - EXPONENT_SLACK).ceil().max(0.0) as i64);
    let tag = if negligible {
        ModerationTag::Negligible
    } else {
        let clamped: Vec<f64> = finite.iter().map(|n| n.max(0.0)).collect();
        let hi = clamped.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = clamped.iter().copied().fold(f64::INFINITY, f64::min);
        if hi - lo <= tol.tau_regular {
            ModerationTag::Regular
        } else {
            ModerationTag::Moderate
        }
    };
    Ok(ModerationClass { tag, uniform_exponent: uniform, per_order_exponents: per_order, floor_conflict })
}

/// Evidence that `ω` is a slow scale net on the ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct SlowScaleCertificate {
    pub powers: Vec<f64>,
    /// `c_p = max_k ω_k^p ε_k`.
    pub constants: Vec<f64>,
    /// Scaling exponent of `ω^p ε` over the finest part of the ladder.
    pub tail_slopes: Vec<f64>,
    pub pass: bool,
}

pub fn check_slow_scale(
    ladder: &EpsilonLadder,
    omega: &[f64],
    powers: &[f64],
    tol: &Tolerances,
) -> Result<SlowScaleCertificate> {
    if omega.len() != ladder.len() {
        return Err(Error::LadderMismatch);
    }
    let positive = omega.iter().all(|w| *w > 0.0 && w.is_finite());
    let n = ladder.len();
    let tail = (n / 3).max(MIN_FIT_POINTS).min(n);
    let eps = ladder.values();
    let mut constants = Vec::with_capacity(powers.len());
    let mut tail_slopes = Vec::with_capacity(powers.len());
    let mut pass = positive;
    for &p in powers {
        let scaled: Vec<f64> = omega.iter().zip(eps).map(|(w, e)| w.abs().powf(p) * e).collect();
        let c = scaled.iter().copied().fold(0.0, f64::max);
        let samples: Vec<(f64, f64)> =
            eps[n - tail..].iter().copied().zip(scaled[n - tail..].iter().copied()).collect();
        let slope = if positive && scaled.iter().all(|v| v.is_finite() && *v > 0.0) {
            fit_valuation_with(&samples, tol)?.exponent
        } else {
            f64::NEG_INFINITY
        };
        let growth_ok = p == 0.0 || c.powf(1.0 / p) <= tol.slow_scale_growth_cap;
        if !(c.is_finite() && slope >= -tol.slow_scale_tail_tolerance && growth_ok) {
            pass = false;
        }
        constants.push(c);
        tail_slopes.push(slope);
    }
    Ok(SlowScaleCertificate { powers: powers.to_vec(), constants, tail_slopes, pass })
}

#[cfg(test)]
mod tests;
