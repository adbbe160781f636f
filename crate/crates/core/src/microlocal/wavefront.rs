use super::classify::{cone_decay_classify, ConeDecayProfile};
use super::cone::{Cone, ConeClass, CutoffSpec, WfClass, WfMode};
use super::spectrum::fourier_localized;
use crate::dual::BasicFunctional;
use crate::util::prelude::*;
use crate::{par, Result, Tolerances};
use alloc::collections::BTreeSet;
use core::fmt::Write;

/// Scan layout: `cells` intervals per axis, cutoff centers at the interior
/// nodes `lo + jΔ`, cutoff radii `factor·Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefrontOptions {
    pub cells: usize,
    pub radius_factors: Vec<f64>,
    /// Direction cones; the default grid of the dimension when `None`.
    pub cones: Option<Vec<Cone>>,
}

impl WavefrontOptions {
    pub fn for_dim(dim: usize) -> Self {
        Self { cells: if dim == 1 { 16 } else { 8 }, radius_factors: vec![1.0, 0.5], cones: None }
    }
}

/// Classification of one x-cell in every cone.
#[derive(Debug, Clone, PartialEq)]
pub struct WfCell {
    pub index: [usize; 2],
    pub center: [f64; 2],
    pub classes: Vec<WfClass>,
    /// Cutoff radius that produced the reported class, per cone.
    pub radius: Vec<f64>,
    pub profiles: Vec<ConeDecayProfile>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveFrontEstimate {
    pub dim: usize,
    pub cell_width: [f64; 2],
    pub cones: Vec<Cone>,
    pub cells: Vec<WfCell>,
}

impl WaveFrontEstimate {
    /// `(x-cell, cone index)` pairs in the wave front set of the mode.
    pub fn members(&self, mode: WfMode) -> Vec<([usize; 2], usize)> {
        let mut out = Vec::new();
        for c in &self.cells {
            for (j, cls) in c.classes.iter().enumerate() {
                if cls.in_wavefront(mode) {
                    out.push((c.index, j));
                }
            }
        }
        out
    }

    pub fn cell(&self, index: [usize; 2]) -> Option<&WfCell> {
        self.cells.iter().find(|c| c.index == index)
    }

    /// One row per (cell, cone): `i,j,x,y,cone_angle,half_angle,class,radius`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,j,x,y,cone_angle,half_angle,class,radius\n");
        for c in &self.cells {
            for (k, cone) in self.cones.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{},{},{:.11e},{:.11e},{:.11e},{:.11e},{},{:.11e}",
                    c.index[0],
                    c.index[1],
                    c.center[0],
                    c.center[1],
                    cone.angle(),
                    cone.half_angle(),
                    c.classes[k].as_str(),
                    c.radius[k]
                );
            }
        }
        s
    }
}

fn centers(t: &BasicFunctional, cells: usize) -> (Vec<([usize; 2], [f64; 2])>, [f64; 2]) {
    let g = t.grid();
    let (lo, hi) = (g.lo(), g.hi());
    let width = [(hi[0] - lo[0]) / cells as f64, (hi[1] - lo[1]) / cells as f64];
    let mut out = Vec::new();
    let ys: Vec<usize> = if t.dim() == 1 { vec![0] } else { (1..cells).collect() };
    for i in 1..cells {
        for j in &ys {
            let y = if t.dim() == 1 { 0.0 } else { lo[1] + *j as f64 * width[1] };
            out.push(([i, *j], [lo[0] + i as f64 * width[0], y]));
        }
    }
    (out, width)
}

/// Scan x-cells × cones. A (cell, cone) pair gets the best class over the
/// cutoff radii; in each mode it belongs to the wave front set when that
/// class says so (`Singular` for G, anything but `RegularBoth` for G∞).
pub fn wavefront(t: &BasicFunctional, opts: &WavefrontOptions, tol: &Tolerances) -> Result<WaveFrontEstimate> {
    let dim = t.dim();
    let cones = opts.cones.clone().unwrap_or_else(|| Cone::default_grid(dim));
    let (cells, width) = centers(t, opts.cells.max(2));
    let results = par::map(&cells, |(index, center)| -> Result<WfCell> {
        let mut best: Vec<Option<(ConeClass, f64, ConeDecayProfile)>> = vec![None; cones.len()];
        for f in &opts.radius_factors {
            let radius = f * width[0].min(if dim == 1 { f64::INFINITY } else { width[1] });
            let spec = fourier_localized(t, &CutoffSpec::new(*center, radius), tol)?;
            for (j, cone) in cones.iter().enumerate() {
                let (cls, prof) = cone_decay_classify(&spec, cone, tol)?;
                if best[j].as_ref().is_none_or(|b| cls < b.0) {
                    best[j] = Some((cls, radius, prof));
                }
            }
            if best.iter().all(|b| b.as_ref().is_some_and(|b| b.0 == ConeClass::InGinf)) {
                break;
            }
        }
        let mut classes = Vec::new();
        let mut radii = Vec::new();
        let mut profiles = Vec::new();
        for b in best.into_iter().flatten() {
            classes.push(WfClass::from_cone(b.0));
            radii.push(b.1);
            profiles.push(b.2);
        }
        Ok(WfCell { index: *index, center: *center, classes, radius: radii, profiles })
    });
    let cells = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(WaveFrontEstimate { dim, cell_width: width, cones, cells })
}

/// x-cells with at least one direction in the wave front set.
pub fn project_singsupp(wf: &WaveFrontEstimate, mode: WfMode) -> BTreeSet<[usize; 2]> {
    wf.members(mode).into_iter().map(|(c, _)| c).collect()
}

/// Singular support from the full-sphere cone, without direction cells.
pub fn singsupp_direct(
    t: &BasicFunctional,
    opts: &WavefrontOptions,
    mode: WfMode,
    tol: &Tolerances,
) -> Result<BTreeSet<[usize; 2]>> {
    let o = WavefrontOptions { cones: Some(vec![Cone::full_sphere(t.dim())]), ..opts.clone() };
    Ok(project_singsupp(&wavefront(t, &o, tol)?, mode))
}
