//! Extension of `a(x, D)` to basic functionals: `AT(u) = T(χ · ᵗA u)`.

use super::quantize::quantize_apply;
use super::symbol::SymbolNet;
use crate::asymptotics::GeneralizedNumber;
use crate::dual::{Atom, BasicFunctional, Certificate, DensityTerm};
use crate::expr::{Env, Expr, Var};
use crate::genfun::{Grid, MultiIndex, RepresentativeNet};
use crate::util::prelude::*;
use crate::{fft, Complex64, Error, Result};

/// Smooth step: `0` for `t ≤ 0`, `1` for `t ≥ 1`.
fn smooth_step(t: Expr) -> Expr {
    let a = Expr::flat_exp(0, t.clone());
    let b = Expr::flat_exp(0, Expr::constant(1.0) - t);
    a.clone() / (a + b)
}

/// Cutoff equal to one on the box shrunk by `w/8` per side and zero within
/// `w/16` of its boundary.
pub fn default_cutoff(grid: &Grid) -> Expr {
    let mut out = Expr::constant(1.0);
    for (axis, var) in [Var::X, Var::Y].into_iter().enumerate().take(grid.dim()) {
        let (lo, hi) = (grid.lo()[axis], grid.hi()[axis]);
        let m = (hi - lo) / 16.0;
        let v = Expr::var(var);
        let up = smooth_step((v.clone() - Expr::constant(lo + m)) / Expr::constant(m));
        let down = smooth_step((Expr::constant(hi - m) - v) / Expr::constant(m));
        out = out * up * down;
    }
    out
}

/// `u ↦ T(∂^β u)`.
fn shift_order(t: &BasicFunctional, beta: MultiIndex) -> Result<BasicFunctional> {
    let atoms = t
        .atoms()
        .iter()
        .map(|a| Atom { alpha: a.alpha.add(&beta), ..a.clone() })
        .collect();
    let densities =
        t.densities().iter().map(|d| DensityTerm { weight: d.weight.clone(), order: d.order.add(&beta) }).collect();
    BasicFunctional::new(t.grid(), t.ladder(), atoms, densities, None)
}

fn eval_at(e: &Expr, p: [f64; 2], eps: f64) -> Complex64 {
    e.eval(&Env::new().with(Var::X, p[0]).with(Var::Y, p[1]).with(Var::Eps, eps))
}

/// ε-growth of the symbol's coefficients over the grid box, rounded up.
fn coefficient_growth(a: &SymbolNet, t: &BasicFunctional) -> i64 {
    if !a.depends_on_eps() {
        return 0;
    }
    let xs = super::symbol::region_samples(a.dim(), &t.grid().region(), 5);
    let xis = super::symbol::radial_samples(a.dim(), None, 1.0, 1024.0, 2);
    let g = GeneralizedNumber::from_fn(t.ladder(), |e| {
        let mut m = 0.0f64;
        for x in &xs {
            for xi in &xis {
                m = m.max(a.eval(*x, *xi, e).norm() / crate::util::japanese(&xi[..a.dim()]).powf(a.order()));
            }
        }
        m.into()
    });
    match g.valuation() {
        Ok(v) if v.is_finite() => (-v).ceil().max(0.0) as i64,
        _ => 0,
    }
}

/// `AT(u) := T(χ · ᵗA u)`, with `χ` the supplied cutoff or [`default_cutoff`].
///
/// Symbols polynomial in ξ are applied exactly through Leibniz' rule. Other
/// symbols act on order-0 densities through `∫ w χ ᵗAu = ∫ A(χw) u`, and on
/// atoms through the kernel of `ᵗA` when the symbol does not depend on `x`.
pub fn apply_to_functional(a: &SymbolNet, t: &BasicFunctional, cutoff: Option<&Expr>) -> Result<BasicFunctional> {
    if a.dim() != t.dim() {
        return Err(Error::InvalidArgument("symbol and functional differ in dimension".into()));
    }
    let chi = cutoff.cloned().unwrap_or_else(|| default_cutoff(t.grid()));
    let (mut out, degree) = match a.polynomial() {
        Some(coeffs) => (apply_polynomial(&coeffs, t, &chi)?, coeffs.iter().map(|c| c.0.order()).max().unwrap_or(0)),
        None => (apply_general(a, t, &chi)?, 2),
    };
    if let Some(c) = t.certificate() {
        out = out.with_certificate(Certificate {
            region: c.region.dilate(t.grid().h()),
            order: c.order + degree,
            n: c.n + coefficient_growth(a, t),
            eta: c.eta,
        });
    }
    Ok(out)
}

/// `Σ_β T(q_β ∂^β u)` with `q_β = χ Σ_{γ≥β} i^{|γ|} binom(γ, β) ∂^{γ-β} p_γ`.
fn apply_polynomial(coeffs: &[(MultiIndex, Expr)], t: &BasicFunctional, chi: &Expr) -> Result<BasicFunctional> {
    let mut qs: Vec<(MultiIndex, Expr)> = Vec::new();
    for (gamma, p) in coeffs {
        let ig = Complex64::new(0.0, 1.0).powi(gamma.order() as i32);
        for beta in gamma.below() {
            let d = gamma.sub(&beta);
            let term = Expr::complex(ig * gamma.binomial(&beta))
                * p.diff_multi(&[Var::X, Var::Y], &[d.0[0] as usize, d.0[1] as usize]);
            match qs.iter_mut().find(|(b, _)| *b == beta) {
                Some((_, q)) => *q = q.clone() + term,
                None => qs.push((beta, term)),
            }
        }
    }
    let mut out = BasicFunctional::zero(t.grid(), t.ladder());
    for (beta, q) in qs {
        let q = chi.clone() * q;
        if q.is_zero() {
            continue;
        }
        let net = RepresentativeNet::from_expr(t.grid().clone(), t.ladder().clone(), q)?;
        out = out.add(&shift_order(&t.multiply(&net)?, beta)?)?;
    }
    Ok(out)
}

fn apply_general(a: &SymbolNet, t: &BasicFunctional, chi: &Expr) -> Result<BasicFunctional> {
    let grid = t.grid();
    let ladder = t.ladder();
    let chi_net = RepresentativeNet::from_expr(grid.clone(), ladder.clone(), chi.clone())?;
    let mut out = BasicFunctional::zero(grid, ladder);
    for d in t.densities() {
        if d.order != MultiIndex::ZERO {
            return Err(Error::InvalidArgument(
                "symbols that are not polynomial in ξ act only on order-0 densities".into(),
            ));
        }
        let w = quantize_apply(a, &d.weight.mul(&chi_net)?)?;
        out.push_density(DensityTerm { weight: w, order: MultiIndex::ZERO })?;
    }
    if !t.atoms().is_empty() && !a.is_x_independent() {
        return Err(Error::InvalidArgument(
            "atoms need an x-independent symbol unless it is polynomial in ξ".into(),
        ));
    }
    for atom in t.atoms() {
        let mut rows = Vec::with_capacity(ladder.len());
        for (k, &eps) in ladder.values().iter().enumerate() {
            let loc = atom.location[k];
            let mut row = vec![Complex64::new(0.0, 0.0); grid.len()];
            for mu in atom.alpha.below() {
                let r = atom.alpha.sub(&mu);
                let dchi = eval_at(&chi.diff_multi(&[Var::X, Var::Y], &[r.0[0] as usize, r.0[1] as usize]), loc, eps);
                let c = atom.coef[k] * atom.alpha.binomial(&mu) * dchi;
                if c.norm() == 0.0 {
                    continue;
                }
                for (o, v) in row.iter_mut().zip(kernel_row(a, grid, loc, mu, eps)) {
                    *o += c * v;
                }
            }
            rows.push(row);
        }
        let w = RepresentativeNet::from_samples(grid.clone(), ladder.clone(), rows)?;
        out.push_density(DensityTerm { weight: w, order: MultiIndex::ZERO })?;
    }
    Ok(out)
}

/// Density `y ↦ ∂^μ_x κ(x - y)|_{x = a}` of `u ↦ ∂^μ(ᵗAu)(a)` for an
/// x-independent symbol, `κ` the kernel of the multiplier `a(-ξ)`.
fn kernel_row(a: &SymbolNet, grid: &Grid, loc: [f64; 2], mu: MultiIndex, eps: f64) -> Vec<Complex64> {
    let n = grid.points_per_axis();
    let dim = grid.dim();
    let o = grid.lo();
    let h = [grid.spacing(0), if dim == 2 { grid.spacing(1) } else { 1.0 }];
    let variants = |j: usize, hh: f64| -> Vec<f64> {
        let w = fft::angular_frequency(j, n, hh);
        if j == n / 2 { vec![w, -w] } else { vec![w] }
    };
    let mut g = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (m, gm) in g.iter_mut().enumerate() {
        let (xs, ys) = if dim == 1 { (variants(m, h[0]), vec![0.0]) } else { (variants(m / n, h[0]), variants(m % n, h[1])) };
        let count = (xs.len() * ys.len()) as f64;
        for x in &xs {
            for y in &ys {
                let xi = [*x, *y];
                let ixm = Complex64::new(0.0, xi[0]).powi(mu.0[0] as i32) * Complex64::new(0.0, xi[1]).powi(mu.0[1] as i32);
                let phase = Complex64::from_polar(1.0, (loc[0] - o[0]) * xi[0] + (loc[1] - o[1]) * xi[1]);
                *gm += ixm * a.eval(loc, [-xi[0], -xi[1]], eps) * phase / count;
            }
        }
    }
    if dim == 1 { fft::forward(&mut g) } else { fft::forward_2d(&mut g, n, n) }
    let scale = 1.0 / (grid.len() as f64 * grid.cell_volume());
    g.into_iter().map(|v| v * scale).collect()
}
