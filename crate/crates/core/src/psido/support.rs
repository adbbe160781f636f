//! Micro-supports: where a symbol fails to be smoothing.

use super::symbol::{derivative_pairs, region_samples, SymbolNet};
use crate::asymptotics::EpsilonLadder;
use crate::expr::{Env, Var};
use crate::genfun::{Grid, Region};
use crate::microlocal::{cone_decay_classify, Cone, ConeClass, ConeDecayProfile, LocalizedSpectrum, WfMode};
use crate::util::prelude::*;
use crate::{par, Complex64, Result, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub struct MicroSupportCell {
    pub index: [usize; 2],
    pub center: [f64; 2],
    /// Per cone: `∀m ∃N` bound.
    pub g_smoothing: Vec<bool>,
    /// Per cone: one `N` for every `m`.
    pub ginf_smoothing: Vec<bool>,
    pub profiles: Vec<ConeDecayProfile>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MicroSupportReport {
    pub cones: Vec<Cone>,
    pub m_grid: Vec<f64>,
    pub cells: Vec<MicroSupportCell>,
}

impl MicroSupportReport {
    /// `(x-cell, cone)` pairs in the micro-support of the mode.
    pub fn members(&self, mode: WfMode) -> Vec<([usize; 2], usize)> {
        let mut out = Vec::new();
        for c in &self.cells {
            for j in 0..self.cones.len() {
                let smoothing = match mode {
                    WfMode::G => c.g_smoothing[j],
                    WfMode::Ginf => c.ginf_smoothing[j],
                };
                if !smoothing {
                    out.push((c.index, j));
                }
            }
        }
        out
    }
}

/// For each x-cell (same layout as the wave front scan) and cone, fit
/// `N(m)` of `sup_{|α|+|β|≤2} |∂^α_ξ ∂^β_x a_ε| ⟨ξ⟩^{-m}` over the m grid.
/// The cone-decay classifier does the fitting: `InGinf` is G∞-smoothing,
/// `InGOnly` G-smoothing only.
pub fn micro_support(
    a: &SymbolNet,
    grid: &Grid,
    ladder: &EpsilonLadder,
    cells: usize,
    cones: Option<Vec<Cone>>,
    tol: &Tolerances,
) -> Result<MicroSupportReport> {
    let dim = a.dim();
    let cones = cones.unwrap_or_else(|| Cone::default_grid(dim));
    let mut t = tol.clone();
    t.l_grid = tol.m_grid.iter().map(|m| -m).collect();
    let derivs: Vec<_> = derivative_pairs(dim, if dim == 1 { 2 } else { 1 })
        .into_iter()
        .map(|(al, be)| a.derivative(al, be))
        .collect();
    let (lo, hi) = (grid.lo(), grid.hi());
    let cells = cells.max(2);
    let w = [(hi[0] - lo[0]) / cells as f64, (hi[1] - lo[1]) / cells as f64];
    let mut layout = Vec::new();
    for i in 1..cells {
        let js: Vec<usize> = if dim == 1 { vec![0] } else { (1..cells).collect() };
        for j in js {
            let c = [lo[0] + i as f64 * w[0], if dim == 1 { 0.0 } else { lo[1] + j as f64 * w[1] }];
            layout.push(([i, j], c));
        }
    }
    let results = par::map(&layout, |(index, center)| -> Result<MicroSupportCell> {
        let half = [w[0] / 2.0, w[1] / 2.0];
        let region = Region {
            lo: [center[0] - half[0], center[1] - if dim == 1 { 0.0 } else { half[1] }],
            hi: [center[0] + half[0], center[1] + if dim == 1 { 0.0 } else { half[1] }],
        };
        let xs = region_samples(dim, &region, 3);
        let spec = LocalizedSpectrum::from_fn(dim, ladder, &t, |e| t.xi_reach / e, |xi, eps| {
            let mut m = 0.0f64;
            for x in &xs {
                let en = Env::new()
                    .with(Var::X, x[0])
                    .with(Var::Y, x[1])
                    .with(Var::Xi, xi[0])
                    .with(Var::Xi2, xi[1])
                    .with(Var::Eps, eps);
                for d in &derivs {
                    m = m.max(d.eval(&en).norm());
                }
            }
            Complex64::new(m, 0.0)
        });
        let mut g = Vec::new();
        let mut ginf = Vec::new();
        let mut profiles = Vec::new();
        for cone in &cones {
            let (cls, prof) = cone_decay_classify(&spec, cone, &t)?;
            g.push(cls != ConeClass::Neither);
            ginf.push(cls == ConeClass::InGinf);
            profiles.push(prof);
        }
        Ok(MicroSupportCell { index: *index, center: *center, g_smoothing: g, ginf_smoothing: ginf, profiles })
    });
    let cells = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(MicroSupportReport { cones, m_grid: tol.m_grid.clone(), cells })
}
