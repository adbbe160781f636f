//! Analytic descriptions of representative nets.
//!
//! A net with a source can be evaluated, and differentiated, at any point and
//! any ε exactly, independently of the grid it is sampled on. This is what
//! lets ε-scale structure far below the grid spacing be measured.

use super::grid::MultiIndex;
use crate::dual::Mollifier;
use crate::expr::{Env, Expr, Var};
use crate::quadrature::Node;
use crate::util::prelude::*;
use alloc::sync::Arc;
use num_complex::Complex64;

const MOLLIFIER_NODES_1D: usize = 512;
const MOLLIFIER_NODES_2D: usize = 48;

#[derive(Debug, Clone)]
pub enum SourceTerm {
    /// Closed form in `x, y, eps`.
    Closed(Expr),
    /// `c δ^{-|γ|} ∫ g(x - δt) ∂^γρ(t) dt` with `δ = ε^q`, i.e. `c (g ∗ ∂^γ ρ_δ)`.
    Mollified {
        density: Expr,
        mollifier: Mollifier,
        q: u32,
        gamma: MultiIndex,
        coef: Complex64,
        kernel: Expr,
        /// Quadrature nodes with `∂^γρ` folded into the weights.
        nodes: Arc<Vec<Node>>,
    },
    /// A separate closed form for each ladder point.
    PerLadder(Arc<Vec<Expr>>),
    /// Per-ladder coefficient times a term.
    Scaled { coef: Arc<Vec<Complex64>>, inner: Box<SourceTerm> },
    /// `x ↦ f(x - shift_k)`.
    Shifted { shifts: Arc<Vec<[f64; 2]>>, inner: Box<SourceTerm> },
    /// `Σ c a b`, pointwise products of terms without a common closed form.
    Products(Arc<Vec<(f64, SourceTerm, SourceTerm)>>),
}

impl SourceTerm {
    pub fn mollified(density: Expr, mollifier: Mollifier, q: u32, coef: Complex64) -> Self {
        Self::mollified_with(density, mollifier, q, MultiIndex::ZERO, coef)
    }

    fn mollified_with(
        density: Expr,
        mollifier: Mollifier,
        q: u32,
        gamma: MultiIndex,
        coef: Complex64,
    ) -> Self {
        let per_axis = if mollifier.dim() == 1 { MOLLIFIER_NODES_1D } else { MOLLIFIER_NODES_2D };
        let kernel = mollifier.derivative(gamma);
        let nodes: Vec<Node> = mollifier
            .nodes(per_axis)
            .into_iter()
            .filter_map(|n| {
                let kv = kernel
                    .eval_real(&Env::new().with(Var::X, n.point[0]).with(Var::Y, n.point[1]));
                (kv != 0.0).then_some(Node { point: n.point, weight: n.weight * kv })
            })
            .collect();
        SourceTerm::Mollified { density, mollifier, q, gamma, coef, kernel, nodes: Arc::new(nodes) }
    }

    fn derivative(&self, alpha: MultiIndex) -> Self {
        match self {
            SourceTerm::Closed(e) => SourceTerm::Closed(
                e.diff_multi(&[Var::X, Var::Y], &[alpha.0[0] as usize, alpha.0[1] as usize]),
            ),
            SourceTerm::Mollified { density, mollifier, q, gamma, coef, .. } => {
                if density.is_smooth() {
                    let d = density.diff_multi(&[Var::X, Var::Y], &[alpha.0[0] as usize, alpha.0[1] as usize]);
                    Self::mollified_with(d, mollifier.clone(), *q, *gamma, *coef)
                } else {
                    Self::mollified_with(density.clone(), mollifier.clone(), *q, gamma.add(&alpha), *coef)
                }
            }
            SourceTerm::PerLadder(es) => {
                let counts = [alpha.0[0] as usize, alpha.0[1] as usize];
                SourceTerm::PerLadder(Arc::new(
                    es.iter().map(|e| e.diff_multi(&[Var::X, Var::Y], &counts)).collect(),
                ))
            }
            SourceTerm::Scaled { coef, inner } => {
                SourceTerm::Scaled { coef: coef.clone(), inner: Box::new(inner.derivative(alpha)) }
            }
            SourceTerm::Shifted { shifts, inner } => {
                SourceTerm::Shifted { shifts: shifts.clone(), inner: Box::new(inner.derivative(alpha)) }
            }
            SourceTerm::Products(ps) => {
                let mut out = Vec::new();
                for (c, a, b) in ps.iter() {
                    for beta in alpha.below() {
                        let w = c * alpha.binomial(&beta);
                        out.push((w, a.derivative(beta), b.derivative(alpha.sub(&beta))));
                    }
                }
                SourceTerm::Products(Arc::new(out))
            }
        }
    }

    /// `x ↦ f(x - shift_k)` with a per-ladder shift.
    fn translate(&self, shifts: &[[f64; 2]]) -> Self {
        let shifted = shift_expr;
        let uniform = shifts.iter().all(|s| *s == shifts[0]);
        match self {
            SourceTerm::Closed(e) if uniform => SourceTerm::Closed(shifted(e, shifts[0])),
            SourceTerm::Closed(e) => {
                SourceTerm::PerLadder(Arc::new(shifts.iter().map(|s| shifted(e, *s)).collect()))
            }
            SourceTerm::PerLadder(es) => SourceTerm::PerLadder(Arc::new(
                es.iter().zip(shifts).map(|(e, s)| shifted(e, *s)).collect(),
            )),
            SourceTerm::Mollified { density, mollifier, q, gamma, coef, .. } if uniform => {
                Self::mollified_with(shifted(density, shifts[0]), mollifier.clone(), *q, *gamma, *coef)
            }
            SourceTerm::Mollified { .. } => {
                // per-ladder shifts of a convolution: evaluate at the shifted point instead
                SourceTerm::Shifted { shifts: Arc::new(shifts.to_vec()), inner: Box::new(self.clone()) }
            }
            SourceTerm::Scaled { coef, inner } => {
                SourceTerm::Scaled { coef: coef.clone(), inner: Box::new(inner.translate(shifts)) }
            }
            SourceTerm::Shifted { shifts: own, inner } => SourceTerm::Shifted {
                shifts: Arc::new(own.iter().zip(shifts).map(|(a, b)| [a[0] + b[0], a[1] + b[1]]).collect()),
                inner: inner.clone(),
            },
            SourceTerm::Products(ps) => SourceTerm::Products(Arc::new(
                ps.iter().map(|(c, a, b)| (*c, a.translate(shifts), b.translate(shifts))).collect(),
            )),
        }
    }

    fn eval(&self, p: [f64; 2], k: usize, eps: f64) -> Complex64 {
        match self {
            SourceTerm::Closed(e) => {
                e.eval(&Env::new().with(Var::X, p[0]).with(Var::Y, p[1]).with(Var::Eps, eps))
            }
            SourceTerm::Mollified { density, q, gamma, coef, nodes, .. } => {
                let delta = eps.powi(*q as i32);
                let mut env = Env::new().with(Var::Eps, eps);
                let mut acc = Complex64::new(0.0, 0.0);
                for n in nodes.iter() {
                    env.set(Var::X, p[0] - delta * n.point[0]);
                    env.set(Var::Y, p[1] - delta * n.point[1]);
                    acc += density.eval(&env) * n.weight;
                }
                acc * coef * delta.powi(-(gamma.order() as i32))
            }
            SourceTerm::PerLadder(es) => {
                es[k].eval(&Env::new().with(Var::X, p[0]).with(Var::Y, p[1]).with(Var::Eps, eps))
            }
            SourceTerm::Scaled { coef, inner } => coef[k] * inner.eval(p, k, eps),
            SourceTerm::Shifted { shifts, inner } => {
                inner.eval([p[0] - shifts[k][0], p[1] - shifts[k][1]], k, eps)
            }
            SourceTerm::Products(ps) => ps.iter().map(|(c, a, b)| a.eval(p, k, eps) * b.eval(p, k, eps) * c).sum(),
        }
    }

    fn per_ladder(&self, n: usize) -> Option<Vec<Expr>> {
        match self {
            SourceTerm::Closed(e) => Some(vec![e.clone(); n]),
            SourceTerm::PerLadder(es) => Some(es.to_vec()),
            SourceTerm::Scaled { coef, inner } => Some(
                inner.per_ladder(n)?.into_iter().zip(coef.iter()).map(|(e, c)| e * Expr::complex(*c)).collect(),
            ),
            SourceTerm::Shifted { shifts, inner } => {
                let es = inner.per_ladder(n)?;
                Some(es.iter().zip(shifts.iter()).map(|(e, s)| shift_expr(e, *s)).collect())
            }
            SourceTerm::Mollified { .. } => None,
            SourceTerm::Products(ps) => {
                let mut out = vec![Expr::constant(0.0); n];
                for (c, a, b) in ps.iter() {
                    for ((o, x), y) in out.iter_mut().zip(a.per_ladder(n)?).zip(b.per_ladder(n)?) {
                        *o = o.clone() + x * y * Expr::constant(*c);
                    }
                }
                Some(out)
            }
        }
    }

    fn depends_on_eps(&self) -> bool {
        match self {
            SourceTerm::Closed(e) => e.depends_on(Var::Eps),
            _ => true,
        }
    }

    fn is_closed(&self) -> bool {
        match self {
            SourceTerm::Closed(_) | SourceTerm::PerLadder(_) => true,
            SourceTerm::Mollified { .. } => false,
            SourceTerm::Scaled { inner, .. } | SourceTerm::Shifted { inner, .. } => inner.is_closed(),
            SourceTerm::Products(ps) => ps.iter().all(|(_, a, b)| a.is_closed() && b.is_closed()),
        }
    }
}

fn shift_expr(e: &Expr, s: [f64; 2]) -> Expr {
    e.substitute(Var::X, &(Expr::var(Var::X) - Expr::constant(s[0])))
        .substitute(Var::Y, &(Expr::var(Var::Y) - Expr::constant(s[1])))
}

/// Sum of source terms.
#[derive(Debug, Clone)]
pub struct Source {
    terms: Vec<SourceTerm>,
}

impl Source {
    pub fn closed(e: Expr) -> Self {
        Self { terms: vec![SourceTerm::Closed(e)] }
    }

    pub fn from_terms(terms: Vec<SourceTerm>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[SourceTerm] {
        &self.terms
    }

    pub fn derivative(&self, alpha: MultiIndex) -> Self {
        if alpha.order() == 0 {
            return self.clone();
        }
        Self { terms: self.terms.iter().map(|t| t.derivative(alpha)).collect() }
    }

    pub fn eval(&self, p: [f64; 2], k: usize, eps: f64) -> Complex64 {
        self.terms.iter().map(|t| t.eval(p, k, eps)).sum()
    }

    pub fn depends_on_eps(&self) -> bool {
        self.terms.iter().any(|t| t.depends_on_eps())
    }

    /// True when every term is a closed form (cheap to evaluate).
    pub fn is_closed(&self) -> bool {
        self.terms.iter().all(|t| t.is_closed())
    }

    /// The single closed form, when there is one.
    pub fn as_expr(&self) -> Option<Expr> {
        let mut acc = Expr::constant(0.0);
        for t in &self.terms {
            match t {
                SourceTerm::Closed(e) => acc = acc + e.clone(),
                _ => return None,
            }
        }
        Some(acc)
    }

    pub fn translate(&self, shifts: &[[f64; 2]]) -> Self {
        Self { terms: self.terms.iter().map(|t| t.translate(shifts)).collect() }
    }

    /// Per-ladder closed forms, when every term has one.
    pub fn per_ladder_exprs(&self, ladder_len: usize) -> Option<Vec<Expr>> {
        let mut out = vec![Expr::constant(0.0); ladder_len];
        for t in &self.terms {
            let es = t.per_ladder(ladder_len)?;
            for (o, e) in out.iter_mut().zip(es) {
                *o = o.clone() + e;
            }
        }
        Some(out)
    }

    pub fn add(&self, other: &Source) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }
    }

    pub fn scale(&self, coef: Arc<Vec<Complex64>>) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| SourceTerm::Scaled { coef: coef.clone(), inner: Box::new(t.clone()) })
                .collect(),
        }
    }

    /// Pointwise product: symbolic for closed forms, term-wise otherwise.
    pub fn mul(&self, other: &Source, ladder_len: usize) -> Self {
        if let (Some(a), Some(b)) = (self.as_expr(), other.as_expr()) {
            return Self::closed(a * b);
        }
        if let (Some(a), Some(b)) = (self.per_ladder_exprs(ladder_len), other.per_ladder_exprs(ladder_len)) {
            let prod = a.into_iter().zip(b).map(|(x, y)| x * y).collect();
            return Self { terms: vec![SourceTerm::PerLadder(Arc::new(prod))] };
        }
        let pairs =
            self.terms.iter().flat_map(|a| other.terms.iter().map(move |b| (1.0, a.clone(), b.clone()))).collect();
        Self { terms: vec![SourceTerm::Products(Arc::new(pairs))] }
    }
}
