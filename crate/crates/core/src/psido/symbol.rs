use crate::asymptotics::{fit_ladder, EpsilonLadder, ScalingFit};
use crate::expr::{Env, Expr, Var};
use crate::genfun::{MultiIndex, Region};
use crate::util::prelude::*;
use crate::{Complex64, Error, Result, Tolerances};

/// Highest ξ-degree recognized as a differential operator.
pub const MAX_POLY_DEGREE: usize = 4;

/// Properties a symbol is claimed to have; verified by the certificate checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SymbolClaims {
    pub regular: bool,
    pub slow_scale: bool,
}

/// Net of symbols `a_ε(x, ξ)` of order `m` and type `(ρ, δ)`, given in closed
/// form over `x`, `y`, `xi`, `xi2`, `eps`.
#[derive(Debug, Clone)]
pub struct SymbolNet {
    dim: usize,
    expr: Expr,
    order: f64,
    rho: f64,
    delta: f64,
    pub claims: SymbolClaims,
}

fn env(x: [f64; 2], xi: [f64; 2], eps: f64) -> Env {
    Env::new().with(Var::X, x[0]).with(Var::Y, x[1]).with(Var::Xi, xi[0]).with(Var::Xi2, xi[1]).with(Var::Eps, eps)
}

impl SymbolNet {
    pub fn new(dim: usize, expr: Expr, order: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidArgument(format!("dimension {dim} not supported")));
        }
        if dim == 1 && (expr.depends_on(Var::Y) || expr.depends_on(Var::Xi2)) {
            return Err(Error::InvalidArgument("one-dimensional symbol uses y or xi2".into()));
        }
        Ok(Self { dim, expr, order, rho: 1.0, delta: 0.0, claims: SymbolClaims::default() })
    }

    pub fn parse(dim: usize, source: &str, order: f64) -> Result<Self> {
        Self::new(dim, Expr::parse(source)?, order)
    }

    pub fn with_type(mut self, rho: f64, delta: f64) -> Result<Self> {
        if !(0.0 <= delta && delta < rho && rho <= 1.0) {
            return Err(Error::InvalidArgument(format!("type ({rho}, {delta}) needs 0 ≤ δ < ρ ≤ 1")));
        }
        self.rho = rho;
        self.delta = delta;
        Ok(self)
    }

    pub fn with_claims(mut self, claims: SymbolClaims) -> Self {
        self.claims = claims;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn eval(&self, x: [f64; 2], xi: [f64; 2], eps: f64) -> Complex64 {
        self.expr.eval(&env(x, xi, eps))
    }

    pub fn depends_on_eps(&self) -> bool {
        self.expr.depends_on(Var::Eps)
    }

    pub fn is_x_independent(&self) -> bool {
        !self.expr.depends_on(Var::X) && !self.expr.depends_on(Var::Y)
    }

    /// `∂^α_ξ ∂^β_x a`.
    pub fn derivative(&self, alpha: MultiIndex, beta: MultiIndex) -> Expr {
        self.expr.diff_multi(
            &[Var::Xi, Var::Xi2, Var::X, Var::Y],
            &[alpha.0[0] as usize, alpha.0[1] as usize, beta.0[0] as usize, beta.0[1] as usize],
        )
    }

    /// Sum of two symbols; the order is the larger one.
    pub fn add(&self, other: &SymbolNet) -> Result<SymbolNet> {
        if self.dim != other.dim {
            return Err(Error::InvalidArgument("symbols of different dimension".into()));
        }
        Ok(Self {
            dim: self.dim,
            expr: self.expr.clone() + other.expr.clone(),
            order: self.order.max(other.order),
            rho: self.rho.min(other.rho),
            delta: self.delta.max(other.delta),
            claims: SymbolClaims::default(),
        })
    }

    /// Coefficients `p_γ(x, ε)` with `a = Σ p_γ ξ^γ`, when `a` is a polynomial
    /// in ξ of degree at most [`MAX_POLY_DEGREE`]. Detected by comparing the
    /// Taylor polynomial at `ξ = 0` with `a` at sample points.
    pub fn polynomial(&self) -> Option<Vec<(MultiIndex, Expr)>> {
        let zero = Expr::constant(0.0);
        let mut coeffs: Vec<(MultiIndex, Expr)> = Vec::new();
        let xs = [[-0.77, 0.41], [0.13, -1.3], [1.9, 0.6]];
        let xis: Vec<[f64; 2]> = if self.dim == 1 {
            vec![[-7.3, 0.0], [0.6, 0.0], [13.1, 0.0], [101.7, 0.0]]
        } else {
            vec![[-7.3, 2.2], [0.6, -11.5], [13.1, 0.4], [-41.7, 77.0]]
        };
        let epss = [0.25, 0.0123, 3.8e-6];
        for degree in 0..=MAX_POLY_DEGREE {
            for g in MultiIndex::up_to(self.dim, degree).into_iter().filter(|g| g.order() == degree) {
                let d = self.derivative(g, MultiIndex::ZERO).substitute(Var::Xi, &zero).substitute(Var::Xi2, &zero);
                let fact = crate::util::factorial(g.0[0] as usize) * crate::util::factorial(g.0[1] as usize);
                let c = d / Expr::constant(fact);
                if !c.is_zero() {
                    coeffs.push((g, c));
                }
            }
            let matches = xs.iter().all(|x| {
                xis.iter().all(|xi| {
                    epss.iter().all(|e| {
                        let exact = self.eval(*x, *xi, *e);
                        let en = env(*x, *xi, *e);
                        let approx: Complex64 =
                            coeffs.iter().map(|(g, c)| c.eval(&en) * monomial(*g, *xi)).sum();
                        let scale = 1.0 + exact.norm();
                        exact.re.is_finite() && (exact - approx).norm() <= 1e-9 * scale
                    })
                })
            });
            if matches {
                return Some(coeffs);
            }
        }
        None
    }

    /// Spot check of the symbol estimate: fits of
    /// `sup |∂^α_ξ ∂^β_x a_ε| ⟨ξ⟩^{-m+ρ|α|-δ|β|}` over the region and
    /// `1 ≤ |ξ| ≤ 2^12`, for `|α| + |β| ≤ 2`.
    pub fn class_estimate(
        &self,
        region: &Region,
        ladder: &EpsilonLadder,
        tol: &Tolerances,
    ) -> Result<Vec<(MultiIndex, MultiIndex, ScalingFit)>> {
        let xs = region_samples(self.dim, region, 5);
        let xis = radial_samples(self.dim, None, 1.0, 4096.0, 4);
        let mut out = Vec::new();
        for (alpha, beta) in derivative_pairs(self.dim, 2) {
            let d = self.derivative(alpha, beta);
            let w = -self.order + self.rho * alpha.order() as f64 - self.delta * beta.order() as f64;
            let mags: Vec<f64> = ladder
                .values()
                .iter()
                .map(|&e| {
                    let mut m = 0.0f64;
                    for x in &xs {
                        for xi in &xis {
                            let jx = crate::util::japanese(&xi[..self.dim]);
                            m = m.max(d.eval(&env(*x, *xi, e)).norm() * jx.powf(w));
                        }
                    }
                    m
                })
                .collect();
            out.push((alpha, beta, fit_ladder(ladder, &mags, tol)?));
        }
        Ok(out)
    }
}

/// `ξ^γ`.
pub(crate) fn monomial(g: MultiIndex, xi: [f64; 2]) -> Complex64 {
    Complex64::new(xi[0].powi(g.0[0] as i32) * xi[1].powi(g.0[1] as i32), 0.0)
}

/// `(α, β)` with `|α| + |β| ≤ max`.
pub(crate) fn derivative_pairs(dim: usize, max: usize) -> Vec<(MultiIndex, MultiIndex)> {
    let mut out = Vec::new();
    for a in MultiIndex::up_to(dim, max) {
        for b in MultiIndex::up_to(dim, max - a.order()) {
            out.push((a, b));
        }
    }
    out
}

/// Tensor samples of a box, `m` per axis, including corners and centre.
pub(crate) fn region_samples(dim: usize, r: &Region, m: usize) -> Vec<[f64; 2]> {
    let m = m.max(2) | 1;
    let axis = |a: usize| -> Vec<f64> {
        (0..m).map(|i| r.lo[a] + (r.hi[a] - r.lo[a]) * i as f64 / (m - 1) as f64).collect()
    };
    let xs = axis(0);
    let ys = if dim == 1 { vec![0.0] } else { axis(1) };
    let mut out = Vec::new();
    for x in &xs {
        for y in &ys {
            out.push([*x, *y]);
        }
    }
    out
}

/// Radial samples `per_octave` per octave on `[from, to]`, in the cone if given
/// (angular samples span the cone in 2-D), every direction otherwise.
pub(crate) fn radial_samples(
    dim: usize,
    cone: Option<(&crate::microlocal::Cone, usize)>,
    from: f64,
    to: f64,
    per_octave: usize,
) -> Vec<[f64; 2]> {
    use core::f64::consts::PI;
    let dirs: Vec<[f64; 2]> = if dim == 1 {
        match cone {
            Some((c, _)) if !c.is_full() => vec![[c.direction()[0].signum(), 0.0]],
            _ => vec![[1.0, 0.0], [-1.0, 0.0]],
        }
    } else {
        match cone {
            Some((c, m)) if !c.is_full() => {
                let m = m.max(2);
                (0..m)
                    .map(|i| {
                        let t = c.angle() - c.half_angle() + 2.0 * c.half_angle() * i as f64 / (m - 1) as f64;
                        [t.cos(), t.sin()]
                    })
                    .collect()
            }
            _ => (0..16).map(|i| [(i as f64 * PI / 8.0).cos(), (i as f64 * PI / 8.0).sin()]).collect(),
        }
    };
    let octaves = (to / from).log2().ceil().max(0.0) as usize;
    let mut out = Vec::new();
    for o in 0..=octaves {
        for j in 0..per_octave {
            let r = from * 2f64.powf(o as f64 + j as f64 / per_octave as f64);
            if r > to * (1.0 + 1e-12) {
                break;
            }
            for d in &dirs {
                out.push([r * d[0], r * d[1]]);
            }
        }
    }
    out
}
