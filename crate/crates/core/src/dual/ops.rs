use super::functional::{Atom, BasicFunctional, Certificate, DensityTerm};
use crate::asymptotics::fit_valuation_with;
use crate::config::Tolerances;
use crate::fft;
use crate::genfun::{Grid, MultiIndex, Region, RepresentativeNet, SeminormSpec, Source};
use crate::util::prelude::*;
use crate::{Error, Result};
use alloc::collections::BTreeSet;
use num_complex::Complex64;

/// Outcome of checking `|T_ε(u)| ≤ ε^{-N} p_{K,j}(u)` on probes.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub pass: bool,
    /// `max_ε ε^N |T_ε(u)| / p_{K,j}(u)` over probes.
    pub worst_ratio: f64,
    /// `-slope` of the per-ε maximal ratio; `-∞` when every ratio vanishes.
    pub fitted_n: f64,
}

fn sign(order: usize) -> f64 {
    if order.is_multiple_of(2) { 1.0 } else { -1.0 }
}

impl BasicFunctional {
    pub fn verify_certificate(&self, probes: &[RepresentativeNet], tol: &Tolerances) -> Result<CertificateReport> {
        let cert = self
            .certificate
            .clone()
            .ok_or_else(|| Error::InvalidArgument("functional carries no certificate".into()))?;
        if let Some(a) = self.atoms.iter().find(|a| a.alpha.order() > cert.order) {
            return Err(Error::CertificateViolation(format!(
                "atom of order {} exceeds declared order {}",
                a.alpha.order(),
                cert.order
            )));
        }
        if let Some(d) = self.densities.iter().find(|d| d.order.order() > cert.order) {
            return Err(Error::CertificateViolation(format!(
                "density of order {} exceeds declared order {}",
                d.order.order(),
                cert.order
            )));
        }
        let start = self.ladder.prefix_start(cert.eta);
        let eps = self.ladder.values();
        let mut max_ratio = vec![0.0f64; eps.len()];
        let region = cert.region.intersect(&self.grid.region()).unwrap_or(cert.region);
        for u in probes {
            let values = self.act(u)?;
            let p = u.seminorm_with(&SeminormSpec::compact(region, cert.order), tol)?;
            for k in start..eps.len() {
                let t = values.values()[k].norm();
                if p[k] <= tol.machine_floor {
                    if t > 1e-12 {
                        return Err(Error::CertificateViolation(format!(
                            "zero seminorm with action {t:e} at ε = {:e}",
                            eps[k]
                        )));
                    }
                    continue;
                }
                max_ratio[k] = max_ratio[k].max(t / p[k]);
            }
        }
        let samples: Vec<(f64, f64)> = (start..eps.len()).map(|k| (eps[k], max_ratio[k])).collect();
        let fit = fit_valuation_with(&samples, tol)?;
        let fitted_n = -fit.exponent;
        let worst_ratio = (start..eps.len())
            .map(|k| max_ratio[k] * eps[k].powi(cert.n as i32))
            .fold(0.0, f64::max);
        Ok(CertificateReport { pass: fitted_n <= cert.n as f64 + tol.tau_regular, worst_ratio, fitted_n })
    }

    /// `x ↦ T(u(x, ·))` for a functional in `y` and a net on the `x × y` square.
    pub fn act_parametric(&self, u: &RepresentativeNet) -> Result<RepresentativeNet> {
        if self.dim() != 1 || u.dim() != 2 {
            return Err(Error::InvalidArgument("parametric action needs a 1-D functional and a 2-D net".into()));
        }
        let g = u.grid();
        let n = g.points_per_axis();
        let y_grid = Grid::line(g.lo()[1], g.hi()[1], n)?;
        if y_grid != self.grid {
            return Err(Error::GridMismatch);
        }
        let x_grid = Grid::line(g.lo()[0], g.hi()[0], n)?;
        let len = self.ladder.len();
        let exprs = if self.densities.is_empty() {
            u.source().and_then(|s| s.per_ladder_exprs(len))
        } else {
            None
        };
        let xs = x_grid.coords(0);
        let rows: Vec<Vec<Complex64>> = crate::par::map(&xs.iter().copied().enumerate().collect::<Vec<_>>(), |&(i, x)| {
            let slice = match &exprs {
                Some(es) => {
                    let sliced: Vec<crate::Expr> = es
                        .iter()
                        .map(|e| {
                            e.substitute(crate::Var::X, &crate::Expr::constant(x))
                                .substitute(crate::Var::Y, &crate::Expr::var(crate::Var::X))
                        })
                        .collect();
                    let src = Source::from_terms(vec![crate::genfun::SourceTerm::PerLadder(alloc::sync::Arc::new(sliced))]);
                    RepresentativeNet::from_source(y_grid.clone(), self.ladder.clone(), src)
                }
                None => {
                    let samples = (0..len).map(|k| u.samples(k)[i * n..(i + 1) * n].to_vec()).collect();
                    RepresentativeNet::from_samples(y_grid.clone(), self.ladder.clone(), samples)
                }
            }?;
            Ok(self.act(&slice)?.values().to_vec())
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let samples = (0..len).map(|k| rows.iter().map(|r| r[k]).collect()).collect();
        RepresentativeNet::from_samples(x_grid, self.ladder.clone(), samples)
    }

    /// `(u ∗ T)(x) = T(u(x - ·))`.
    pub fn convolve_fun(&self, u: &RepresentativeNet) -> Result<RepresentativeNet> {
        self.ladder.ensure_same(u.ladder())?;
        if u.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let hint = match (u.support_hint(), self.support_region()) {
            (Some(a), Some(b)) => {
                let s = a.sum(&b);
                if !self.grid.region().contains_region(self.dim(), &s) {
                    return Err(Error::OutOfDomain { point: s.hi });
                }
                Some(s)
            }
            _ => None,
        };
        let mut total: Option<RepresentativeNet> = None;
        for a in &self.atoms {
            let coef: Vec<Complex64> = a.coef.iter().map(|c| c * sign(a.alpha.order())).collect();
            let part = u.derivative(a.alpha)?.translate(&a.location)?.scale(&coef)?;
            total = Some(match total {
                Some(t) => t.add(&part)?,
                None => part,
            });
        }
        for d in &self.densities {
            let du = u.derivative(d.order)?;
            let s = sign(d.order.order());
            let rows = (0..self.ladder.len())
                .map(|k| {
                    let conv = circular_convolution(&self.grid, d.weight.samples(k), &du, k);
                    conv.into_iter().map(|v| v * s).collect()
                })
                .collect();
            let part = RepresentativeNet::from_samples(self.grid.clone(), self.ladder.clone(), rows)?;
            total = Some(match total {
                Some(t) => t.add(&part)?,
                None => part,
            });
        }
        let mut out = match total {
            Some(t) => t,
            None => RepresentativeNet::from_expr(self.grid.clone(), self.ladder.clone(), crate::Expr::constant(0.0))?,
        };
        if let Some(h) = hint {
            out = out.with_support_hint(h.dilate(self.grid.h()))?;
        }
        Ok(out)
    }

    /// `(S ∗ T)(u) = S_x(T_y(u(x + y)))`.
    pub fn convolve(&self, other: &BasicFunctional) -> Result<BasicFunctional> {
        self.ladder.ensure_same(&other.ladder)?;
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut out = BasicFunctional::zero(&self.grid, &self.ladder);
        for a in &self.atoms {
            for b in &other.atoms {
                let location: Vec<[f64; 2]> =
                    a.location.iter().zip(&b.location).map(|(p, q)| [p[0] + q[0], p[1] + q[1]]).collect();
                let coef = a.coef.iter().zip(&b.coef).map(|(x, y)| x * y).collect();
                out.push_atom(Atom { coef, alpha: a.alpha.add(&b.alpha), location })?;
            }
        }
        for (atoms, densities) in [(&self.atoms, &other.densities), (&other.atoms, &self.densities)] {
            for a in atoms.iter() {
                for d in densities.iter() {
                    let weight = d.weight.translate(&a.location)?.scale(&a.coef)?;
                    out.push_density(DensityTerm { weight, order: a.alpha.add(&d.order) })?;
                }
            }
        }
        for d1 in &self.densities {
            for d2 in &other.densities {
                let rows = (0..self.ladder.len())
                    .map(|k| circular_convolution(&self.grid, d1.weight.samples(k), &d2.weight, k))
                    .collect();
                let weight = RepresentativeNet::from_samples(self.grid.clone(), self.ladder.clone(), rows)?;
                out.push_density(DensityTerm { weight, order: d1.order.add(&d2.order) })?;
            }
        }
        out.certificate = match (&self.certificate, &other.certificate) {
            (Some(s), Some(t)) => Some(Certificate {
                region: s.region.sum(&t.region),
                order: s.order + t.order,
                n: s.n + t.n,
                eta: s.eta.min(t.eta),
            }),
            _ => None,
        };
        Ok(out)
    }

    /// `(uT)(v) = T(uv)`.
    pub fn multiply(&self, u: &RepresentativeNet) -> Result<BasicFunctional> {
        self.ladder.ensure_same(u.ladder())?;
        if u.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let mut out = BasicFunctional::zero(&self.grid, &self.ladder);
        for a in &self.atoms {
            for beta in a.alpha.below() {
                let gamma = a.alpha.sub(&beta);
                let binom = a.alpha.binomial(&beta);
                let coef: Vec<Complex64> = (0..self.ladder.len())
                    .map(|k| a.coef[k] * binom * u.eval_derivative(gamma, k, &a.location[k..k + 1])[0])
                    .collect();
                if coef.iter().all(|c| c.norm() == 0.0) {
                    continue;
                }
                out.push_atom(Atom { coef, alpha: beta, location: a.location.clone() })?;
            }
        }
        for d in &self.densities {
            for gamma in d.order.below() {
                let binom = d.order.binomial(&gamma);
                let factor = u.derivative(d.order.sub(&gamma))?.scale_constant(binom.into());
                let mut weight = d.weight.mul(&factor)?;
                if weight.support_hint().is_none() {
                    if let Some(h) = d.weight.support_hint() {
                        weight = weight.with_support_hint(h)?;
                    }
                }
                out.push_density(DensityTerm { weight, order: gamma })?;
            }
        }
        out.certificate = self.certificate.clone();
        Ok(out)
    }

    /// Box covering atoms and density supports over the ladder, if bounded.
    pub fn support_region(&self) -> Option<Region> {
        let mut r: Option<Region> = None;
        let mut grow = |x: Region| r = Some(r.map_or(x, |acc: Region| acc.hull(&x)));
        for a in &self.atoms {
            for p in &a.location {
                grow(Region::point(*p));
            }
        }
        for d in &self.densities {
            grow(d.weight.support_hint()?);
        }
        r
    }

    /// Grid cells meeting the support: atom cells dilated by one cell, plus
    /// cells where some density weight is above the floor.
    pub fn estimate_support(&self) -> BTreeSet<[usize; 2]> {
        let g = &self.grid;
        let n = g.points_per_axis();
        let dim = g.dim();
        let mut cells = BTreeSet::new();
        for a in &self.atoms {
            for (k, p) in a.location.iter().enumerate() {
                if a.coef[k].norm() == 0.0 {
                    continue;
                }
                let c = cell_of(g, *p);
                let r: i64 = 1;
                let range = |c: usize| (-r..=r).map(move |d| (c as i64 + d).rem_euclid(n as i64) as usize);
                for i in range(c[0]) {
                    if dim == 1 {
                        cells.insert([i, 0]);
                    } else {
                        for j in range(c[1]) {
                            cells.insert([i, j]);
                        }
                    }
                }
            }
        }
        for d in &self.densities {
            let peak = (0..self.ladder.len())
                .flat_map(|k| d.weight.samples(k).iter().map(|v| v.norm()))
                .fold(0.0, f64::max);
            if peak == 0.0 {
                continue;
            }
            for idx in 0..g.len() {
                let hit = (0..self.ladder.len()).any(|k| d.weight.samples(k)[idx].norm() > 1e-12 * peak);
                if hit {
                    cells.insert(if dim == 1 { [idx, 0] } else { [idx / n, idx % n] });
                }
            }
        }
        cells
    }
}

/// Index of the cell `[x_i, x_i + h)` containing `p`.
pub fn cell_of(g: &Grid, p: [f64; 2]) -> [usize; 2] {
    let n = g.points_per_axis() as i64;
    let idx = |a: usize| (((p[a] - g.lo()[a]) / g.spacing(a)).floor() as i64).clamp(0, n - 1) as usize;
    if g.dim() == 1 { [idx(0), 0] } else { [idx(0), idx(1)] }
}

/// `(w ∗ f)(x_i) ≈ Σ_j w(x_j) f(x_i - x_j) h^n` on the periodic grid.
pub(crate) fn circular_convolution(grid: &Grid, w: &[Complex64], f: &RepresentativeNet, k: usize) -> Vec<Complex64> {
    let n = grid.points_per_axis();
    let offset = |m: usize, axis: usize| {
        let s = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
        s * grid.spacing(axis)
    };
    let pts: Vec<[f64; 2]> = (0..grid.len())
        .map(|idx| {
            if grid.dim() == 1 {
                [offset(idx, 0), 0.0]
            } else {
                [offset(idx / n, 0), offset(idx % n, 1)]
            }
        })
        .collect();
    let mut fv = f.eval_derivative(MultiIndex::ZERO, k, &pts);
    let mut wv = w.to_vec();
    if grid.dim() == 1 {
        fft::forward(&mut fv);
        fft::forward(&mut wv);
    } else {
        fft::forward_2d(&mut fv, n, n);
        fft::forward_2d(&mut wv, n, n);
    }
    for (a, b) in wv.iter_mut().zip(&fv) {
        *a *= b;
    }
    if grid.dim() == 1 {
        fft::inverse(&mut wv);
    } else {
        fft::inverse_2d(&mut wv, n, n);
    }
    let dv = grid.cell_volume();
    wv.into_iter().map(|v| v * dv).collect()
}
