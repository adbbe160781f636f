//! `a(x, D)u = Σ_ξ e^{ix·ξ} a(x, ξ) û(ξ) đξ` on the periodic grid, and the transpose.

use super::symbol::{monomial, SymbolNet};
use crate::genfun::{Grid, MultiIndex, RepresentativeNet};
use crate::util::prelude::*;
use crate::{fft, Complex64, Error, Result};

/// Largest fraction of spectral energy allowed in the top octave of the input.
pub const QUANTIZATION_GUARD: f64 = 1e-6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Evaluation strategy. `Auto` picks the multiplier path for x-independent
/// symbols, the differential path for polynomials in ξ, the general sum otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantPath {
    Auto,
    General,
}

struct Frame {
    dim: usize,
    n: usize,
    h: [f64; 2],
    points: Vec<[f64; 2]>,
}

impl Frame {
    fn new(grid: &Grid) -> Self {
        let dim = grid.dim();
        Self {
            dim,
            n: grid.points_per_axis(),
            h: [grid.spacing(0), if dim == 2 { grid.spacing(1) } else { 1.0 }],
            points: grid.all_points(),
        }
    }

    fn len(&self) -> usize {
        self.points.len()
    }

    /// Frequencies of bin `m`, with every Nyquist component listed with both signs.
    fn bin_variants(&self, m: usize) -> Vec<[f64; 2]> {
        let one = |j: usize, h: f64| -> Vec<f64> {
            let w = fft::angular_frequency(j, self.n, h);
            if j == self.n / 2 { vec![w, -w] } else { vec![w] }
        };
        if self.dim == 1 {
            one(m, self.h[0]).into_iter().map(|w| [w, 0.0]).collect()
        } else {
            let a = one(m / self.n, self.h[0]);
            let b = one(m % self.n, self.h[1]);
            a.iter().flat_map(|x| b.iter().map(move |y| [*x, *y])).collect()
        }
    }

    /// `f` averaged over the Nyquist sign variants of bin `m`; keeps the
    /// discrete transpose exact.
    fn at_bin(&self, m: usize, f: impl Fn([f64; 2]) -> Complex64) -> Complex64 {
        let v = self.bin_variants(m);
        let n = v.len() as f64;
        v.into_iter().map(f).sum::<Complex64>() / n
    }

    fn forward(&self, data: &mut [Complex64]) {
        if self.dim == 1 { fft::forward(data) } else { fft::forward_2d(data, self.n, self.n) }
    }

    fn inverse(&self, data: &mut [Complex64]) {
        if self.dim == 1 { fft::inverse(data) } else { fft::inverse_2d(data, self.n, self.n) }
    }

    fn multiplier(&self, row: &[Complex64], f: impl Fn([f64; 2]) -> Complex64) -> Vec<Complex64> {
        let mut d = row.to_vec();
        self.forward(&mut d);
        for (m, v) in d.iter_mut().enumerate() {
            *v *= self.at_bin(m, &f);
        }
        self.inverse(&mut d);
        d
    }
}

fn check_guard(u: &RepresentativeNet) -> Result<()> {
    for k in 0..u.ladder().len() {
        let r = u.top_octave_energy(k);
        if r > QUANTIZATION_GUARD {
            return Err(Error::AliasingError { top_octave_ratio: r });
        }
    }
    Ok(())
}

fn coefficient_rows(frame: &Frame, c: &crate::Expr, eps: f64) -> Vec<Complex64> {
    frame
        .points
        .iter()
        .map(|p| c.eval(&crate::expr::Env::new().with(crate::Var::X, p[0]).with(crate::Var::Y, p[1]).with(crate::Var::Eps, eps)))
        .collect()
}

/// Largest `points²` for which the general path tabulates the symbol once
/// per ladder point and reuses it across inputs.
const TABLE_CAP: usize = 1 << 21;

fn apply(a: &SymbolNet, u: &RepresentativeNet, path: QuantPath, transpose: bool) -> Result<RepresentativeNet> {
    Ok(apply_many(a, core::slice::from_ref(u), path, transpose)?.remove(0))
}

fn apply_many(
    a: &SymbolNet,
    us: &[RepresentativeNet],
    path: QuantPath,
    transpose: bool,
) -> Result<Vec<RepresentativeNet>> {
    let Some(first) = us.first() else { return Ok(Vec::new()) };
    for u in us {
        if a.dim() != u.dim() {
            return Err(Error::InvalidArgument("symbol and net differ in dimension".into()));
        }
        if u.grid() != first.grid() {
            return Err(Error::GridMismatch);
        }
        first.ladder().ensure_same(u.ladder())?;
        check_guard(u)?;
    }
    let frame = Frame::new(first.grid());
    let sign = if transpose { -1.0 } else { 1.0 };
    let poly = if path == QuantPath::Auto && !a.is_x_independent() { a.polynomial() } else { None };
    let tabulate = us.len() > 1 && frame.len() * frame.len() <= TABLE_CAP;
    let mut rows: Vec<Vec<Vec<Complex64>>> = vec![Vec::with_capacity(first.ladder().len()); us.len()];
    for (k, &eps) in first.ladder().values().iter().enumerate() {
        if path == QuantPath::Auto && a.is_x_independent() {
            for (r, u) in rows.iter_mut().zip(us) {
                r.push(frame.multiplier(u.samples(k), |xi| a.eval([0.0; 2], [sign * xi[0], sign * xi[1]], eps)));
            }
        } else if let Some(coeffs) = &poly {
            for (r, u) in rows.iter_mut().zip(us) {
                r.push(poly_apply(&frame, coeffs, u.samples(k), eps, transpose));
            }
        } else if tabulate {
            let table = SymbolTable::new(&frame, a, eps, transpose);
            for (r, u) in rows.iter_mut().zip(us) {
                r.push(table.apply(&frame, u.samples(k)));
            }
        } else {
            for (r, u) in rows.iter_mut().zip(us) {
                r.push(general(&frame, a, u.samples(k), eps, transpose));
            }
        }
    }
    rows.into_iter()
        .map(|r| RepresentativeNet::from_samples(first.grid().clone(), first.ladder().clone(), r))
        .collect()
}

/// The kernel of [`general`] at one ladder point, phases included, stored
/// row-major by grid point.
struct SymbolTable {
    transpose: bool,
    entries: Vec<Complex64>,
}

impl SymbolTable {
    fn new(frame: &Frame, a: &SymbolNet, eps: f64, transpose: bool) -> Self {
        let o = frame.points[0];
        let sign = if transpose { -1.0 } else { 1.0 };
        let bins: Vec<Vec<[f64; 2]>> = (0..frame.len()).map(|m| frame.bin_variants(m)).collect();
        let mut entries = Vec::with_capacity(frame.len() * frame.len());
        for x in &frame.points {
            for variants in &bins {
                let sym: Complex64 = variants.iter().map(|xi| a.eval(*x, [sign * xi[0], sign * xi[1]], eps)).sum::<Complex64>()
                    / variants.len() as f64;
                let xi = variants[0];
                let phase = Complex64::from_polar(1.0, sign * ((x[0] - o[0]) * xi[0] + (x[1] - o[1]) * xi[1]));
                entries.push(sym * phase);
            }
        }
        Self { transpose, entries }
    }

    fn apply(&self, frame: &Frame, row: &[Complex64]) -> Vec<Complex64> {
        let len = frame.len();
        if !self.transpose {
            let mut hat = row.to_vec();
            frame.forward(&mut hat);
            let scale = 1.0 / len as f64;
            return self
                .entries
                .chunks(len)
                .map(|t| t.iter().zip(&hat).map(|(a, b)| a * b).sum::<Complex64>() * scale)
                .collect();
        }
        let mut v = vec![ZERO; len];
        for (t, uy) in self.entries.chunks(len).zip(row) {
            if *uy == ZERO {
                continue;
            }
            for (vm, a) in v.iter_mut().zip(t) {
                *vm += a * uy;
            }
        }
        frame.inverse(&mut v);
        v
    }
}

/// `Σ_γ p_γ · IFFT[ξ^γ û]`, or for the transpose `Σ_γ IFFT[(-ξ)^γ FFT[p_γ u]]`.
fn poly_apply(
    frame: &Frame,
    coeffs: &[(MultiIndex, crate::Expr)],
    row: &[Complex64],
    eps: f64,
    transpose: bool,
) -> Vec<Complex64> {
    let mut out = vec![ZERO; frame.len()];
    for (g, c) in coeffs {
        let p = coefficient_rows(frame, c, eps);
        if transpose {
            let pu: Vec<Complex64> = p.iter().zip(row).map(|(a, b)| a * b).collect();
            let s = if g.order() % 2 == 1 { -1.0 } else { 1.0 };
            let d = frame.multiplier(&pu, |xi| monomial(*g, xi) * s);
            for (o, v) in out.iter_mut().zip(d) {
                *o += v;
            }
        } else {
            let d = frame.multiplier(row, |xi| monomial(*g, xi));
            for ((o, v), pv) in out.iter_mut().zip(d).zip(p) {
                *o += pv * v;
            }
        }
    }
    out
}

/// Direct `O(N²)` synthesis. Phases are taken relative to the first grid
/// point so that every Nyquist variant of a bin carries the same phase.
fn general(frame: &Frame, a: &SymbolNet, row: &[Complex64], eps: f64, transpose: bool) -> Vec<Complex64> {
    let len = frame.len();
    let o = frame.points[0];
    let phase = |x: [f64; 2], xi: [f64; 2]| Complex64::from_polar(1.0, (x[0] - o[0]) * xi[0] + (x[1] - o[1]) * xi[1]);
    let bins: Vec<Vec<[f64; 2]>> = (0..len).map(|m| frame.bin_variants(m)).collect();
    if !transpose {
        let mut hat = row.to_vec();
        frame.forward(&mut hat);
        let scale = 1.0 / len as f64;
        return frame
            .points
            .iter()
            .map(|x| {
                let mut acc = ZERO;
                for (uh, variants) in hat.iter().zip(&bins) {
                    if *uh == ZERO {
                        continue;
                    }
                    let sym: Complex64 =
                        variants.iter().map(|xi| a.eval(*x, *xi, eps)).sum::<Complex64>() / variants.len() as f64;
                    acc += sym * uh * phase(*x, variants[0]);
                }
                acc * scale
            })
            .collect();
    }
    // ᵗAu: v_m = Σ_y e^{-i(y-y₀)·ξ_m} a(y, -ξ_m) u(y), then inverse synthesis.
    let mut v: Vec<Complex64> = bins
        .iter()
        .map(|variants| {
            let mut acc = ZERO;
            for (y, uy) in frame.points.iter().zip(row) {
                if *uy == ZERO {
                    continue;
                }
                let sym: Complex64 = variants.iter().map(|xi| a.eval(*y, [-xi[0], -xi[1]], eps)).sum::<Complex64>()
                    / variants.len() as f64;
                acc += sym * uy * phase(*y, variants[0]).conj();
            }
            acc
        })
        .collect();
    frame.inverse(&mut v);
    v
}

/// `a(x, D)u` per ladder point.
pub fn quantize_apply(a: &SymbolNet, u: &RepresentativeNet) -> Result<RepresentativeNet> {
    apply(a, u, QuantPath::Auto, false)
}

pub fn quantize_apply_with(a: &SymbolNet, u: &RepresentativeNet, path: QuantPath) -> Result<RepresentativeNet> {
    apply(a, u, path, false)
}

/// `ᵗA u(x) = ∫ e^{i(x-y)·ξ} a(y, -ξ) u(y) dy đξ`.
pub fn transpose_apply(a: &SymbolNet, u: &RepresentativeNet) -> Result<RepresentativeNet> {
    apply(a, u, QuantPath::Auto, true)
}

pub fn transpose_apply_with(a: &SymbolNet, u: &RepresentativeNet, path: QuantPath) -> Result<RepresentativeNet> {
    apply(a, u, path, true)
}

/// [`quantize_apply`] on several nets of one frame; on small grids the
/// general path evaluates the symbol once per ladder point for all of them.
pub fn quantize_apply_many(a: &SymbolNet, us: &[RepresentativeNet]) -> Result<Vec<RepresentativeNet>> {
    apply_many(a, us, QuantPath::Auto, false)
}

/// [`transpose_apply`] on several nets of one frame.
pub fn transpose_apply_many(a: &SymbolNet, us: &[RepresentativeNet]) -> Result<Vec<RepresentativeNet>> {
    apply_many(a, us, QuantPath::Auto, true)
}
