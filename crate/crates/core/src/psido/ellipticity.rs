//! Slow-scale micro-ellipticity and hypoellipticity certificates.

use super::symbol::{derivative_pairs, radial_samples, region_samples, SymbolNet};
use crate::asymptotics::{check_slow_scale, fit_ladder, EpsilonLadder, ScalingFit, SlowScaleCertificate};
use crate::expr::{Env, Var};
use crate::genfun::{MultiIndex, Region};
use crate::microlocal::Cone;
use crate::util::japanese;
use crate::util::prelude::*;
use crate::{Result, Tolerances};

/// Radii `2^j`, `j = 0..ANNULI`, bounding the scanned annuli.
pub const ANNULI: usize = 20;
/// Values of `|a|⟨ξ⟩^{-m}` at or below this count as zero.
pub const ZERO_SYMBOL: f64 = 1e-12;
/// Among admissible radii the smallest whose `s` is within this factor of the best.
pub const THRESHOLD_FACTOR: f64 = 2.0;

/// Point where a lower bound degenerates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub x: [f64; 2],
    pub xi: [f64; 2],
    pub eps: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MicroEllipticityReport {
    pub region: Region,
    pub cone: Cone,
    /// Threshold net `r_ε`.
    pub r: Vec<f64>,
    /// Lower-bound net `s_ε`: `|a_ε| ≥ s_ε^{-1} ⟨ξ⟩^m` for `|ξ| ≥ r_ε`.
    pub s: Vec<f64>,
    pub r_fit: Option<SlowScaleCertificate>,
    pub s_fit: Option<SlowScaleCertificate>,
    pub witness: Option<Witness>,
    pub pass: bool,
}

fn env(x: [f64; 2], xi: [f64; 2], eps: f64) -> Env {
    Env::new().with(Var::X, x[0]).with(Var::Y, x[1]).with(Var::Xi, xi[0]).with(Var::Xi2, xi[1]).with(Var::Eps, eps)
}

fn x_samples(dim: usize, region: &Region) -> Vec<[f64; 2]> {
    region_samples(dim, region, if dim == 1 { 33 } else { 9 })
}

/// Per ε, the infimum of `f(x, ξ)` over `x` in the region and ξ in each
/// annulus `[2^j, 2^{j+1})` of the cone, with its argmin.
fn annulus_infima(
    a: &SymbolNet,
    region: &Region,
    cone: &Cone,
    eps: f64,
    tol: &Tolerances,
    f: impl Fn([f64; 2], [f64; 2], f64) -> f64,
) -> Vec<(f64, [f64; 2], [f64; 2])> {
    let xs = x_samples(a.dim(), region);
    let xis = radial_samples(a.dim(), Some((cone, tol.angular_samples)), 1.0, 2f64.powi(ANNULI as i32), tol.samples_per_octave);
    let mut out = vec![(f64::INFINITY, [0.0; 2], [0.0; 2]); ANNULI];
    for xi in &xis {
        let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
        let j = (r.log2().floor() as usize).min(ANNULI - 1);
        for x in &xs {
            let v = f(*x, *xi, eps);
            let v = if v.is_finite() { v } else { 0.0 };
            if v < out[j].0 {
                out[j] = (v, *x, *xi);
            }
        }
    }
    out
}

/// Slow-scale threshold and lower bound from tail infima of `|a|⟨ξ⟩^{-m}`:
/// `s(r) = 1 / inf_{|ξ| ≥ r}`, `r_ε` the smallest annulus radius whose `s` is
/// finite and within [`THRESHOLD_FACTOR`] of the best one.
fn threshold(
    infima: &[(f64, [f64; 2], [f64; 2])],
    zero: f64,
) -> (Option<(f64, f64)>, (f64, [f64; 2], [f64; 2])) {
    let mut tail = vec![f64::INFINITY; infima.len() + 1];
    for j in (0..infima.len()).rev() {
        tail[j] = tail[j + 1].min(infima[j].0);
    }
    let worst = infima.iter().copied().fold((f64::INFINITY, [0.0; 2], [0.0; 2]), |acc, v| if v.0 < acc.0 { v } else { acc });
    let s: Vec<f64> = tail[..infima.len()].iter().map(|t| if *t > zero { 1.0 / t } else { f64::INFINITY }).collect();
    let best = s.iter().copied().fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return (None, worst);
    }
    let j = s.iter().position(|v| *v <= THRESHOLD_FACTOR * best).unwrap_or(0);
    (Some((2f64.powi(j as i32), s[j])), worst)
}

/// Scan `U × Γ` for `|a_ε(x, ξ)| ≥ s_ε^{-1} ⟨ξ⟩^m` on `|ξ| ≥ r_ε` and certify
/// that `r` and `s` are slow-scale nets.
pub fn check_micro_ellipticity(
    a: &SymbolNet,
    region: &Region,
    cone: &Cone,
    ladder: &EpsilonLadder,
    tol: &Tolerances,
) -> Result<MicroEllipticityReport> {
    let m = a.order();
    let dim = a.dim();
    let e = a.expr().clone();
    let mut r = Vec::with_capacity(ladder.len());
    let mut s = Vec::with_capacity(ladder.len());
    let mut witness = None;
    for &eps in ladder.values() {
        let inf = annulus_infima(a, region, cone, eps, tol, |x, xi, eps| {
            e.eval(&env(x, xi, eps)).norm() / japanese(&xi[..dim]).powf(m)
        });
        let (found, worst) = threshold(&inf, ZERO_SYMBOL);
        match found {
            Some((rr, ss)) => {
                r.push(rr);
                s.push(ss);
            }
            None => {
                witness.get_or_insert(Witness { x: worst.1, xi: worst.2, eps, value: worst.0 });
                r.push(f64::INFINITY);
                s.push(f64::INFINITY);
            }
        }
    }
    let finite = witness.is_none();
    let r_fit = if finite { Some(check_slow_scale(ladder, &r, &tol.slow_scale_powers, tol)?) } else { None };
    let s_fit = if finite { Some(check_slow_scale(ladder, &s, &tol.slow_scale_powers, tol)?) } else { None };
    let pass = r_fit.as_ref().is_some_and(|c| c.pass) && s_fit.as_ref().is_some_and(|c| c.pass);
    Ok(MicroEllipticityReport { region: *region, cone: *cone, r, s, r_fit, s_fit, witness, pass })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypoellipticReport {
    pub region: Region,
    pub l: f64,
    /// `ω₁_ε = inf |a_ε|⟨ξ⟩^{-l}` on `|ξ| ≥ r_ε`.
    pub omega1: Vec<f64>,
    /// Fit of `ω₁`; must be a finite power `C ε^s`.
    pub omega1_fit: Option<ScalingFit>,
    pub r: Vec<f64>,
    pub r_fit: Option<SlowScaleCertificate>,
    /// Per `(α, β)`: `sup |∂^α_ξ ∂^β_x a| / |a| · ⟨ξ⟩^{ρ|α|-δ|β|}` on `|ξ| ≥ r_ε`
    /// (floored at one) and its slow-scale certificate.
    pub omega2: Vec<(MultiIndex, MultiIndex, Vec<f64>, SlowScaleCertificate)>,
    pub witness: Option<Witness>,
    pub pass: bool,
}

/// Lower bound of order `l` with a power-of-ε constant, slow-scale threshold,
/// and slow-scale derivative ratios up to order 2.
pub fn check_hypoelliptic(
    a: &SymbolNet,
    region: &Region,
    l: f64,
    ladder: &EpsilonLadder,
    tol: &Tolerances,
) -> Result<HypoellipticReport> {
    let dim = a.dim();
    let full = Cone::full_sphere(dim);
    let e = a.expr().clone();
    let mut omega1 = Vec::new();
    let mut r = Vec::new();
    let mut witness = None;
    for &eps in ladder.values() {
        let inf = annulus_infima(a, region, &full, eps, tol, |x, xi, eps| {
            e.eval(&env(x, xi, eps)).norm() / japanese(&xi[..dim]).powf(l)
        });
        // the lower bound may itself be a power of ε, so "zero" is the machine floor
        let (found, worst) = threshold(&inf, tol.machine_floor);
        match found {
            Some((rr, ss)) => {
                r.push(rr);
                omega1.push(1.0 / ss);
            }
            None => {
                witness.get_or_insert(Witness { x: worst.1, xi: worst.2, eps, value: worst.0 });
                r.push(f64::INFINITY);
                omega1.push(0.0);
            }
        }
    }
    if witness.is_some() {
        return Ok(HypoellipticReport {
            region: *region,
            l,
            omega1,
            omega1_fit: None,
            r,
            r_fit: None,
            omega2: Vec::new(),
            witness,
            pass: false,
        });
    }
    let omega1_fit = fit_ladder(ladder, &omega1, tol).ok();
    let lower_ok = omega1_fit
        .as_ref()
        .is_some_and(|f| !f.floor_flag && f.residual <= tol.residual_gate && f.exponent <= tol.n_max);
    let r_fit = check_slow_scale(ladder, &r, &tol.slow_scale_powers, tol)?;
    let xs = x_samples(dim, region);
    let mut omega2 = Vec::new();
    let mut ratios_ok = true;
    for (alpha, beta) in derivative_pairs(dim, 2) {
        if alpha.order() + beta.order() == 0 {
            continue;
        }
        let d = a.derivative(alpha, beta);
        let w = a.rho() * alpha.order() as f64 - a.delta() * beta.order() as f64;
        let net: Vec<f64> = ladder
            .values()
            .iter()
            .zip(&r)
            .map(|(&eps, &rr)| {
                let xis = radial_samples(dim, None, rr, 2f64.powi(ANNULI as i32), tol.samples_per_octave);
                let mut m = 1.0f64;
                for x in &xs {
                    for xi in &xis {
                        let en = env(*x, *xi, eps);
                        let v = d.eval(&en).norm() / e.eval(&en).norm() * japanese(&xi[..dim]).powf(w);
                        if v.is_finite() {
                            m = m.max(v);
                        }
                    }
                }
                m
            })
            .collect();
        let cert = check_slow_scale(ladder, &net, &tol.slow_scale_powers, tol)?;
        ratios_ok &= cert.pass;
        omega2.push((alpha, beta, net, cert));
    }
    let pass = lower_ok && r_fit.pass && ratios_ok;
    Ok(HypoellipticReport { region: *region, l, omega1, omega1_fit, r, r_fit: Some(r_fit), omega2, witness, pass })
}
