use super::functional::BasicFunctional;
use super::mollifier::Mollifier;
use crate::asymptotics::{fit_ladder, GeneralizedNumber, ScalingFit};
use crate::config::Tolerances;
use crate::genfun::{Focus, MultiIndex, RepresentativeNet, Source, SourceTerm};
use crate::quadrature;
use crate::util::prelude::*;
use crate::{Error, Result};
use alloc::sync::Arc;
use num_complex::Complex64;

const REMAINDER_NODES: usize = 16;

fn sign(order: usize) -> f64 {
    if order.is_multiple_of(2) { 1.0 } else { -1.0 }
}

/// Convergence of `T_q = ρ_{ε^q} ∗ T` towards `T` on one probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConvergence {
    pub values: Vec<f64>,
    pub fit: ScalingFit,
}

impl BasicFunctional {
    /// `x ↦ T_ε(ρ_{ε^q}(x - ·))`.
    pub fn regularize(&self, rho: &Mollifier, q: u32) -> Result<RepresentativeNet> {
        if rho.dim() != self.dim() {
            return Err(Error::InvalidArgument("mollifier and functional dimensions differ".into()));
        }
        if q == 0 {
            return Err(Error::InvalidArgument("q must be positive".into()));
        }
        let len = self.ladder.len();
        let mut terms = Vec::new();
        let mut focus = Vec::new();
        for a in &self.atoms {
            let s = sign(a.alpha.order());
            let exprs = (0..len)
                .map(|k| rho.scaled_expr(a.alpha, a.location[k], q) * crate::Expr::complex(a.coef[k] * s))
                .collect();
            terms.push(SourceTerm::PerLadder(Arc::new(exprs)));
            if a.is_fixed() {
                focus.push(Focus { center: a.location[0], radius: rho.radius(), q });
            }
        }
        for d in &self.densities {
            let exprs = d
                .weight
                .source()
                .and_then(|s| s.per_ladder_exprs(len))
                .ok_or_else(|| Error::InvalidArgument("regularize needs closed-form density weights".into()))?;
            let s = sign(d.order.order());
            if !all_same(&exprs) {
                return Err(Error::InvalidArgument("regularize needs an ε-uniform density weight".into()));
            }
            // ∫ w ∂^β_y ρ_δ(x - y) dy = (-1)^{|β|} ∂^β (w ∗ ρ_δ)(x)
            let t = SourceTerm::mollified(exprs[0].clone(), rho.clone(), q, s.into());
            terms.extend(Source::from_terms(vec![t]).derivative(d.order).terms().iter().cloned());
        }
        if terms.is_empty() {
            terms.push(SourceTerm::Closed(crate::Expr::constant(0.0)));
        }
        let mut net = RepresentativeNet::from_source(self.grid.clone(), self.ladder.clone(), Source::from_terms(terms))?;
        for f in focus {
            net = net.with_focus(f);
        }
        Ok(net)
    }

    /// `(T_q - T)(u)` per ladder point.
    ///
    /// Atoms use the second-order Taylor remainder of `u` so that the
    /// difference is formed without cancellation; densities are paired with
    /// the mollified probe directly.
    pub fn regularization_error(
        &self,
        rho: &Mollifier,
        q: u32,
        u: &RepresentativeNet,
    ) -> Result<GeneralizedNumber> {
        self.ladder.ensure_same(u.ladder())?;
        let len = self.ladder.len();
        let dim = self.dim();
        let nodes = rho.nodes(if dim == 1 { 512 } else { 48 });
        let moment: Vec<f64> = (0..dim)
            .map(|a| quadrature::integrate(&nodes, |t| t[a] * rho.eval(t)))
            .collect();
        let symmetric = moment.iter().all(|m| m.abs() < 1e-12);
        let s_nodes = quadrature::interval(0.0, 1.0, REMAINDER_NODES);
        let unit = |a: usize| if a == 0 { MultiIndex::d1(1) } else { MultiIndex::d2(0, 1) };
        let mut values = vec![Complex64::new(0.0, 0.0); len];
        for atom in &self.atoms {
            for (k, v) in values.iter_mut().enumerate() {
                let delta = self.ladder.values()[k].powi(q as i32);
                let a = atom.location[k];
                let mut acc = Complex64::new(0.0, 0.0);
                if !symmetric {
                    for (i, m) in moment.iter().enumerate() {
                        acc += u.eval_derivative(atom.alpha.add(&unit(i)), k, &[a])[0] * (delta * m);
                    }
                }
                for i in 0..dim {
                    for j in 0..dim {
                        let gamma = atom.alpha.add(&unit(i)).add(&unit(j));
                        let mut pts = Vec::with_capacity(nodes.len() * s_nodes.len());
                        let mut wts = Vec::with_capacity(pts.capacity());
                        for n in &nodes {
                            let r = rho.eval(n.point);
                            if r == 0.0 {
                                continue;
                            }
                            for s in &s_nodes {
                                let sv = s.point[0];
                                pts.push([a[0] + sv * delta * n.point[0], a[1] + sv * delta * n.point[1]]);
                                wts.push(n.weight * r * n.point[i] * n.point[j] * (1.0 - sv) * s.weight);
                            }
                        }
                        let d = u.eval_derivative(gamma, k, &pts);
                        let sum: Complex64 = d.iter().zip(&wts).map(|(x, w)| x * w).sum();
                        acc += sum * (delta * delta);
                    }
                }
                *v += atom.coef[k] * acc;
            }
        }
        if !self.densities.is_empty() {
            let mut dens_only = self.clone();
            dens_only.atoms.clear();
            let base = dens_only.act(u)?;
            let expr = u
                .source()
                .and_then(|s| s.as_expr())
                .ok_or_else(|| Error::InvalidArgument("probe needs a closed form".into()))?;
            let reflected = Mollifier::from_profile(dim, reflect(rho.profile(), dim), rho.radius())?;
            let smoothed = RepresentativeNet::from_source(
                u.grid().clone(),
                self.ladder.clone(),
                Source::from_terms(vec![SourceTerm::mollified(expr, reflected, q, 1.0.into())]),
            )?;
            let smoothed = match u.support_hint() {
                Some(h) => {
                    let r = rho.radius() * self.ladder.values()[0].powi(q as i32);
                    smoothed.clone().with_support_hint(h.dilate(r)).unwrap_or(smoothed)
                }
                None => smoothed,
            };
            let moll = dens_only.act(&smoothed)?;
            for ((v, m), b) in values.iter_mut().zip(moll.values()).zip(base.values()) {
                *v += m - b;
            }
        }
        GeneralizedNumber::new(self.ladder.clone(), values)
    }

    /// Fitted valuation of `(T_q - T)(u)` for each probe.
    pub fn regularization_report(
        &self,
        rho: &Mollifier,
        q: u32,
        probes: &[RepresentativeNet],
        tol: &Tolerances,
    ) -> Result<Vec<ProbeConvergence>> {
        probes
            .iter()
            .map(|u| {
                let e = self.regularization_error(rho, q, u)?;
                let values = e.magnitudes();
                let fit = fit_ladder(&self.ladder, &values, tol)?;
                Ok(ProbeConvergence { values, fit })
            })
            .collect()
    }
}

fn all_same(es: &[crate::Expr]) -> bool {
    let first = format!("{}", es[0]);
    es.iter().all(|e| format!("{e}") == first)
}

fn reflect(e: &crate::Expr, dim: usize) -> crate::Expr {
    use crate::{Expr, Var};
    let mut r = e.substitute(Var::X, &(-Expr::var(Var::X)));
    if dim == 2 {
        r = r.substitute(Var::Y, &(-Expr::var(Var::Y)));
    }
    r
}
