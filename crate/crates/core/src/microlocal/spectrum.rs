//! Localized Fourier transforms `ξ ↦ T_ε(φ e^{-i x·ξ})`, reduced to per-octave
//! maxima over direction bins.

use super::cone::{bin_angle, bin_count, direction_bin, CutoffSpec};
use crate::asymptotics::EpsilonLadder;
use crate::dual::integrate::axis_nodes;
use crate::dual::BasicFunctional;
use crate::expr::{Env, Expr, Var};
use crate::genfun::{MultiIndex, Region};
use crate::util::prelude::*;
use crate::{fft, Complex64, Result, Tolerances};
use alloc::collections::BTreeMap;
use core::f64::consts::PI;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Per-ε table of `max ⟨ξ⟩^l |F(ξ)|` over each (direction bin, octave
/// `2^o ≤ |ξ| < 2^{o+1}`) for `1 ≤ |ξ| < xi_top`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTable {
    dim: usize,
    xi_top: f64,
    resolved: bool,
    octaves: usize,
    l_grid: Vec<f64>,
    plain: Vec<f64>,
    weighted: Vec<f64>,
    abs_max: f64,
}

impl SpectralTable {
    fn new(dim: usize, xi_top: f64, l_grid: &[f64], resolved: bool) -> Self {
        let octaves = xi_top.log2().round().max(0.0) as usize;
        let cells = bin_count(dim) * octaves;
        Self {
            dim,
            xi_top,
            resolved,
            octaves,
            l_grid: l_grid.to_vec(),
            plain: vec![0.0; cells],
            weighted: vec![0.0; cells * l_grid.len()],
            abs_max: 0.0,
        }
    }

    fn push(&mut self, xi: [f64; 2], v: f64) {
        if !v.is_finite() {
            self.abs_max = f64::INFINITY;
            return;
        }
        self.abs_max = self.abs_max.max(v);
        let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
        if r < 1.0 || r >= self.xi_top {
            return;
        }
        let o = (r.log2().floor() as usize).min(self.octaves - 1);
        let cell = direction_bin(self.dim, xi) * self.octaves + o;
        self.plain[cell] = self.plain[cell].max(v);
        let jx = (1.0 + r * r).sqrt();
        let nl = self.l_grid.len();
        for (i, l) in self.l_grid.iter().enumerate() {
            let w = &mut self.weighted[cell * nl + i];
            *w = w.max(jx.powf(*l) * v);
        }
    }

    /// Zero every cell whose maximum is below `floor` times the global maximum.
    fn finish(&mut self, floor: f64) {
        let cut = floor * self.abs_max;
        let nl = self.l_grid.len();
        for (cell, p) in self.plain.iter_mut().enumerate() {
            if *p < cut {
                *p = 0.0;
                for w in &mut self.weighted[cell * nl..(cell + 1) * nl] {
                    *w = 0.0;
                }
            }
        }
    }

    pub fn xi_top(&self) -> f64 {
        self.xi_top
    }

    /// False when the aliasing guard never passed and the window was cut at the band limit.
    pub fn resolved(&self) -> bool {
        self.resolved
    }

    pub fn octaves(&self) -> usize {
        self.octaves
    }

    pub fn abs_max(&self) -> f64 {
        self.abs_max
    }

    pub fn l_grid(&self) -> &[f64] {
        &self.l_grid
    }

    /// `max |F|` in a (bin, octave) cell.
    pub fn plain(&self, bin: usize, octave: usize) -> f64 {
        self.plain[bin * self.octaves + octave]
    }

    /// `max ⟨ξ⟩^{l_grid[l]} |F|` in a (bin, octave) cell.
    pub fn weighted(&self, bin: usize, octave: usize, l: usize) -> f64 {
        self.weighted[(bin * self.octaves + octave) * self.l_grid.len() + l]
    }
}

/// Octave tables of a localized transform, one per ladder point.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedSpectrum {
    dim: usize,
    ladder: EpsilonLadder,
    tables: Vec<SpectralTable>,
}

impl LocalizedSpectrum {
    /// Spectrum given in closed form, sampled geometrically up to `xi_top(ε)`
    /// (rounded up to a power of two).
    pub fn from_fn(
        dim: usize,
        ladder: &EpsilonLadder,
        tol: &Tolerances,
        xi_top: impl Fn(f64) -> f64,
        f: impl Fn([f64; 2], f64) -> Complex64,
    ) -> Self {
        let tables = ladder
            .values()
            .iter()
            .map(|&eps| {
                let top = pow2_ceil(xi_top(eps));
                let mut t = SpectralTable::new(dim, top, &tol.l_grid, true);
                for xi in geometric_samples(dim, 1.0, top, tol.samples_per_octave) {
                    t.push(xi, f(xi, eps).norm());
                }
                t.finish(tol.spectral_floor);
                t
            })
            .collect();
        Self { dim, ladder: ladder.clone(), tables }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ladder(&self) -> &EpsilonLadder {
        &self.ladder
    }

    pub fn tables(&self) -> &[SpectralTable] {
        &self.tables
    }
}

fn pow2_ceil(x: f64) -> f64 {
    2f64.powi(x.max(2.0).log2().ceil() as i32)
}

/// Radial samples `2^{o + (j+½)/m}` above `from`, in every direction bin.
fn geometric_samples(dim: usize, from: f64, top: f64, per_octave: usize) -> Vec<[f64; 2]> {
    let angles: Vec<f64> = if dim == 1 { vec![0.0, PI] } else { (0..bin_count(2)).map(bin_angle).collect() };
    let octaves = top.log2().round() as i32;
    let mut out = Vec::new();
    for o in 0..octaves {
        for j in 0..per_octave {
            let r = 2f64.powf(o as f64 + (j as f64 + 0.5) / per_octave as f64);
            if r <= from {
                continue;
            }
            for a in &angles {
                out.push([r * a.cos(), if dim == 1 { 0.0 } else { r * a.sin() }]);
            }
        }
    }
    out
}

fn env(p: [f64; 2]) -> Env {
    Env::new().with(Var::X, p[0]).with(Var::Y, p[1])
}

/// `(-iξ)^γ`.
fn minus_i_xi(gamma: MultiIndex, xi: [f64; 2]) -> Complex64 {
    let mut z = Complex64::new(1.0, 0.0);
    for (axis, g) in gamma.0.iter().enumerate() {
        for _ in 0..*g {
            z *= Complex64::new(0.0, -xi[axis]);
        }
    }
    z
}

struct CutoffDerivatives {
    base: Expr,
    cache: BTreeMap<MultiIndex, Expr>,
}

impl CutoffDerivatives {
    fn new(cutoff: &CutoffSpec, dim: usize) -> Self {
        Self { base: cutoff.expr(dim), cache: BTreeMap::new() }
    }

    fn get(&mut self, a: MultiIndex) -> Expr {
        let base = &self.base;
        self.cache
            .entry(a)
            .or_insert_with(|| base.diff_multi(&[Var::X, Var::Y], &[a.0[0] as usize, a.0[1] as usize]))
            .clone()
    }

    fn eval(&mut self, a: MultiIndex, p: [f64; 2]) -> f64 {
        self.get(a).eval_real(&env(p))
    }
}

/// Closed-form atom part: `Σ c ∂^α_x[φ e^{-ix·ξ}](a)` prepared for fast evaluation.
struct AtomPart {
    terms: Vec<(Complex64, [f64; 2], Vec<(MultiIndex, Complex64)>)>,
}

impl AtomPart {
    fn new(t: &BasicFunctional, phi: &mut CutoffDerivatives, k: usize) -> Self {
        let terms = t
            .atoms()
            .iter()
            .filter_map(|a| {
                let loc = a.location[k];
                let c = a.coef[k];
                if c == ZERO {
                    return None;
                }
                let parts: Vec<(MultiIndex, Complex64)> = a
                    .alpha
                    .below()
                    .into_iter()
                    .map(|beta| {
                        let d = phi.eval(a.alpha.sub(&beta), loc);
                        (beta, Complex64::new(a.alpha.binomial(&beta) * d, 0.0))
                    })
                    .filter(|(_, v)| *v != ZERO)
                    .collect();
                if parts.is_empty() { None } else { Some((c, loc, parts)) }
            })
            .collect();
        Self { terms }
    }

    /// `Σ |c| |v| |ξ^β|`, the size of the terms before they cancel.
    fn magnitude(&self, xi: [f64; 2]) -> f64 {
        let mut acc = 0.0;
        for (c, _, parts) in &self.terms {
            for (beta, v) in parts {
                acc += c.norm() * v.norm() * minus_i_xi(*beta, xi).norm();
            }
        }
        acc
    }

    fn eval(&self, xi: [f64; 2]) -> Complex64 {
        let mut acc = ZERO;
        for (c, a, parts) in &self.terms {
            let phase = Complex64::from_polar(1.0, -(a[0] * xi[0] + a[1] * xi[1]));
            let mut s = ZERO;
            for (beta, v) in parts {
                s += v * minus_i_xi(*beta, xi);
            }
            acc += c * s * phase;
        }
        acc
    }
}

/// Densities of a localized functional sampled on a uniform midpoint grid,
/// grouped by the power `(-iξ)^γ` they multiply.
pub(crate) struct DensitySamples {
    dim: usize,
    n: usize,
    lo: [f64; 2],
    s: [f64; 2],
    groups: Vec<(MultiIndex, Vec<Complex64>)>,
    /// L1 mass of each group.
    mass: Vec<f64>,
    resolved: bool,
    ratio: f64,
}

impl DensitySamples {
    fn point(&self, i: usize) -> [f64; 2] {
        if self.dim == 1 {
            [self.lo[0] + (i as f64 + 0.5) * self.s[0], 0.0]
        } else {
            let (a, b) = (i / self.n, i % self.n);
            [self.lo[0] + (a as f64 + 0.5) * self.s[0], self.lo[1] + (b as f64 + 0.5) * self.s[1]]
        }
    }

    fn cell(&self) -> f64 {
        if self.dim == 1 { self.s[0] } else { self.s[0] * self.s[1] }
    }

    /// Nyquist radius of the sampling.
    pub(crate) fn band(&self) -> f64 {
        PI / self.s[0].max(if self.dim == 1 { 0.0 } else { self.s[1] })
    }

    /// Direct sum at arbitrary frequencies.
    fn direct(&self, xi: [f64; 2]) -> Complex64 {
        let mut acc = ZERO;
        for (gamma, vals) in &self.groups {
            let mut s = ZERO;
            for (i, v) in vals.iter().enumerate() {
                if *v == ZERO {
                    continue;
                }
                let p = self.point(i);
                s += v * Complex64::from_polar(1.0, -(p[0] * xi[0] + p[1] * xi[1]));
            }
            acc += s * minus_i_xi(*gamma, xi);
        }
        acc * self.cell()
    }

    /// Zero-padded FFT: calls `sink(ξ, F(ξ), scale)` on every bin, `scale`
    /// bounding the terms that cancel in `F(ξ)`.
    fn transform(&self, pad: usize, mut sink: impl FnMut([f64; 2], Complex64, f64)) {
        let p = self.n * pad;
        let len = if self.dim == 1 { p } else { p * p };
        let spectra: Vec<(MultiIndex, Vec<Complex64>)> = self
            .groups
            .iter()
            .map(|(g, vals)| {
                let mut buf = vec![ZERO; len];
                if self.dim == 1 {
                    buf[..self.n].copy_from_slice(vals);
                    fft::forward(&mut buf);
                } else {
                    for a in 0..self.n {
                        buf[a * p..a * p + self.n].copy_from_slice(&vals[a * self.n..(a + 1) * self.n]);
                    }
                    fft::forward_2d(&mut buf, p, p);
                }
                (*g, buf)
            })
            .collect();
        let origin = self.point(0);
        let cell = self.cell();
        for j in 0..len {
            let xi = if self.dim == 1 {
                [fft::angular_frequency(j, p, self.s[0]), 0.0]
            } else {
                [fft::angular_frequency(j / p, p, self.s[0]), fft::angular_frequency(j % p, p, self.s[1])]
            };
            let phase = Complex64::from_polar(cell, -(origin[0] * xi[0] + origin[1] * xi[1]));
            let mut f = ZERO;
            let mut scale = 0.0;
            for ((g, buf), m) in spectra.iter().zip(&self.mass) {
                let w = minus_i_xi(*g, xi);
                f += buf[j] * w;
                scale += m * w.norm();
            }
            sink(xi, f * phase, scale);
        }
    }
}

fn cutoff_box(cutoff: &CutoffSpec, dim: usize) -> Region {
    let r = cutoff.radius;
    let c = cutoff.center;
    if dim == 1 {
        Region::interval(c[0] - r, c[0] + r)
    } else {
        Region::rect([c[0] - r, c[1] - r], [c[0] + r, c[1] + r])
    }
}

/// Box outside which every density weight is negligible inside the cutoff.
fn crop(t: &BasicFunctional, cutoff: &CutoffSpec, k: usize) -> Option<Region> {
    let dim = t.dim();
    let eps = t.ladder().values()[k];
    let bx = cutoff_box(cutoff, dim).intersect(&t.grid().region())?;
    let mut region: Option<Region> = None;
    for d in t.densities() {
        let r = match d.weight.support_hint() {
            Some(h) => bx.intersect(&h.dilate(t.grid().h())),
            None => Some(bx),
        };
        if let Some(r) = r {
            region = Some(region.map_or(r, |acc| acc.hull(&r)));
        }
    }
    let region = region?;
    let foci = t.foci();
    let (coarse_n, fine) = if dim == 1 { (256, 64) } else { (32, 12) };
    let axes: Vec<Vec<(f64, f64)>> = (0..dim)
        .map(|ax| {
            let wins: Vec<(f64, f64)> = foci
                .iter()
                .map(|f| (f.center[ax] - f.half_width(eps), f.center[ax] + f.half_width(eps)))
                .collect();
            let (lo, hi) = (region.lo[ax], region.hi[ax]);
            axis_nodes(lo, hi, &wins, (hi - lo) / coarse_n as f64, coarse_n, fine)
        })
        .collect();
    let ys = if dim == 1 { vec![(0.0, 0.0)] } else { axes[1].clone() };
    let mut pts = Vec::new();
    let mut widths = Vec::new();
    for (x, wx) in &axes[0] {
        for (y, wy) in &ys {
            let p = [*x, *y];
            let inside = (p[0] - cutoff.center[0]).powi(2) + if dim == 2 { (p[1] - cutoff.center[1]).powi(2) } else { 0.0 }
                < cutoff.radius * cutoff.radius;
            if inside {
                pts.push(p);
                widths.push([*wx, *wy]);
            }
        }
    }
    if pts.is_empty() {
        return None;
    }
    let mut mag = vec![0.0; pts.len()];
    for d in t.densities() {
        for (m, v) in mag.iter_mut().zip(d.weight.eval_derivative(MultiIndex::ZERO, k, &pts)) {
            *m += v.norm();
        }
    }
    let top = mag.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 || !top.is_finite() {
        return if top.is_finite() { None } else { Some(region) };
    }
    let mut out: Option<Region> = None;
    for ((p, w), m) in pts.iter().zip(&widths).zip(&mag) {
        if *m > 1e-14 * top {
            let cellr = Region { lo: [p[0] - w[0], p[1] - w[1]], hi: [p[0] + w[0], p[1] + w[1]] };
            out = Some(out.map_or(cellr, |acc| acc.hull(&cellr)));
        }
    }
    out.and_then(|o| o.intersect(&region))
}

/// Sample `Σ_d Σ_{γ≤β} binom(β,γ) w_d ∂^{β-γ}φ` with doubling until the top
/// octave of the unpadded spectrum falls below the aliasing guard.
pub(crate) fn density_samples(
    t: &BasicFunctional,
    cutoff: &CutoffSpec,
    k: usize,
    tol: &Tolerances,
) -> Option<DensitySamples> {
    let dim = t.dim();
    let region = crop(t, cutoff, k)?;
    let mut phi = CutoffDerivatives::new(cutoff, dim);
    let (mut n, cap) = if dim == 1 { (64, tol.max_refined_points.max(64)) } else { (16, 128) };
    loop {
        let s = [
            (region.hi[0] - region.lo[0]) / n as f64,
            if dim == 1 { 1.0 } else { (region.hi[1] - region.lo[1]) / n as f64 },
        ];
        let mut ds =
            DensitySamples { dim, n, lo: region.lo, s, groups: Vec::new(), mass: Vec::new(), resolved: false, ratio: 0.0 };
        let total = if dim == 1 { n } else { n * n };
        let pts: Vec<[f64; 2]> = (0..total).map(|i| ds.point(i)).collect();
        let mut groups: BTreeMap<MultiIndex, Vec<Complex64>> = BTreeMap::new();
        for d in t.densities() {
            let w = d.weight.eval_derivative(MultiIndex::ZERO, k, &pts);
            for gamma in d.order.below() {
                let c = d.order.binomial(&gamma);
                let dphi = phi.get(d.order.sub(&gamma));
                let g = groups.entry(gamma).or_insert_with(|| vec![ZERO; total]);
                for (i, p) in pts.iter().enumerate() {
                    if w[i] == ZERO {
                        continue;
                    }
                    let f = dphi.eval_real(&env(*p));
                    if f != 0.0 {
                        g[i] += w[i] * (c * f);
                    }
                }
            }
        }
        ds.groups = groups.into_iter().collect();
        ds.mass = ds.groups.iter().map(|(_, v)| v.iter().map(|x| x.norm()).sum::<f64>() * ds.cell()).collect();
        ds.ratio = top_octave_ratio(&ds);
        ds.resolved = ds.ratio <= tol.aliasing_guard;
        if ds.resolved || n >= cap {
            return Some(ds);
        }
        n *= 2;
    }
}

fn top_octave_ratio(ds: &DensitySamples) -> f64 {
    let n = ds.n;
    let mut top = 0.0f64;
    let mut all = 0.0f64;
    for (_, vals) in &ds.groups {
        let mut buf = vals.clone();
        if ds.dim == 1 {
            fft::forward(&mut buf);
        } else {
            fft::forward_2d(&mut buf, n, n);
        }
        for (j, v) in buf.iter().enumerate() {
            let m = v.norm();
            all = all.max(m);
            let signed = |i: usize| if i < n / 2 { i } else { n - i };
            let band = if ds.dim == 1 { signed(j) } else { signed(j / n).max(signed(j % n)) };
            if band >= n / 4 {
                top = top.max(m);
            }
        }
    }
    if all == 0.0 { 0.0 } else { top / all }
}

fn density_key(t: &BasicFunctional) -> bool {
    // True when no density weight changes with ε.
    t.densities().iter().all(|d| match d.weight.source() {
        Some(src) => !src.depends_on_eps(),
        None => (1..t.ladder().len()).all(|k| d.weight.samples(k) == d.weight.samples(0)),
    })
}

/// Relative size of rounding error in a transform, against the magnitude of
/// the terms that cancel in it.
const ROUNDOFF: f64 = 1e-13;

fn above_roundoff(v: f64, scale: f64) -> f64 {
    if v <= ROUNDOFF * scale { 0.0 } else { v }
}

/// Top of the ξ window at `ε`: `max(π/h, xi_reach/ε)` rounded up to a power of two.
pub fn xi_top(grid_h: f64, eps: f64, tol: &Tolerances) -> f64 {
    pow2_ceil((PI / grid_h).max(tol.xi_reach / eps))
}

/// Localized Fourier transform of `T` against the cutoff, one octave table per ε.
pub fn fourier_localized(t: &BasicFunctional, cutoff: &CutoffSpec, tol: &Tolerances) -> Result<LocalizedSpectrum> {
    let dim = t.dim();
    let ladder = t.ladder().clone();
    let fixed = density_key(t);
    let shared = if fixed && !t.densities().is_empty() { Some(density_samples(t, cutoff, 0, tol)) } else { None };
    let pad = if dim == 1 { 4 } else { 2 };
    let mut tables = Vec::with_capacity(ladder.len());
    for (k, &eps) in ladder.values().iter().enumerate() {
        let own;
        let dens = match &shared {
            Some(s) => s.as_ref(),
            None if t.densities().is_empty() => None,
            None => {
                own = density_samples(t, cutoff, k, tol);
                own.as_ref()
            }
        };
        let mut top = xi_top(t.grid().h(), eps, tol);
        let resolved = dens.is_none_or(|d| d.resolved);
        if !resolved {
            let band = dens.map_or(top, |d| d.band());
            top = top.min(2f64.powf(band.log2().floor()));
        }
        let mut phi = CutoffDerivatives::new(cutoff, dim);
        let atoms = AtomPart::new(t, &mut phi, k);
        let mut table = SpectralTable::new(dim, top, &tol.l_grid, resolved);
        let mut from = 1.0;
        if let Some(d) = dens {
            from = d.band();
            d.transform(pad, |xi, f, scale| {
                let (v, scale) =
                    if atoms.terms.is_empty() { (f, scale) } else { (f + atoms.eval(xi), scale + atoms.magnitude(xi)) };
                table.push(xi, above_roundoff(v.norm(), scale));
            });
        }
        if !atoms.terms.is_empty() {
            for xi in geometric_samples(dim, from, top, tol.samples_per_octave) {
                table.push(xi, above_roundoff(atoms.eval(xi).norm(), atoms.magnitude(xi)));
            }
        }
        table.finish(tol.spectral_floor);
        tables.push(table);
    }
    Ok(LocalizedSpectrum { dim, ladder, tables })
}

/// `T_ε(φ e^{-ix·ξ})` at the given frequencies, by closed forms for atoms and
/// direct sums over the refined density samples. Reference path.
pub fn fourier_localized_at(
    t: &BasicFunctional,
    cutoff: &CutoffSpec,
    k: usize,
    xis: &[[f64; 2]],
    tol: &Tolerances,
) -> Vec<Complex64> {
    let mut phi = CutoffDerivatives::new(cutoff, t.dim());
    let atoms = AtomPart::new(t, &mut phi, k);
    let dens = density_samples(t, cutoff, k, tol);
    xis.iter()
        .map(|xi| atoms.eval(*xi) + dens.as_ref().map_or(ZERO, |d| d.direct(*xi)))
        .collect()
}

/// FFT-path values at the bins nearest to the given frequencies, for
/// cross-checking [`fourier_localized_at`]. Returns `(bin ξ, F)` pairs.
pub fn fourier_localized_bins(
    t: &BasicFunctional,
    cutoff: &CutoffSpec,
    k: usize,
    tol: &Tolerances,
) -> Vec<([f64; 2], Complex64)> {
    let mut out = Vec::new();
    if let Some(d) = density_samples(t, cutoff, k, tol) {
        let mut phi = CutoffDerivatives::new(cutoff, t.dim());
        let atoms = AtomPart::new(t, &mut phi, k);
        d.transform(if t.dim() == 1 { 4 } else { 2 }, |xi, f, _| out.push((xi, f + atoms.eval(xi))));
    }
    out
}
