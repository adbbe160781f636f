use crate::expr::{Env, Expr, Var};
use crate::genfun::MultiIndex;
use crate::quadrature;
use crate::util::prelude::*;
use crate::{Error, Result};

/// Normalized compactly supported profile `ρ` with `∫ρ = 1`.
///
/// The profile is an expression in `x` (and `y` when `dim = 2`) supported in
/// the ball of radius `radius`.
#[derive(Debug, Clone)]
pub struct Mollifier {
    dim: usize,
    radius: f64,
    profile: Expr,
    normalization: f64,
}

const NORMALIZATION_NODES: usize = 4096;

impl Mollifier {
    /// `c·exp(-1/(1-|t|²))` on the unit ball.
    pub fn standard(dim: usize) -> Result<Self> {
        let x = Expr::var(Var::X);
        let raw = if dim == 1 {
            Expr::bump(x)
        } else {
            let y = Expr::var(Var::Y);
            Expr::flat_exp(0, Expr::constant(1.0) - Expr::powi(x, 2) - Expr::powi(y, 2))
        };
        Self::from_profile(dim, raw, 1.0)
    }

    /// Normalizes a non-negative profile supported in `|t| < radius`.
    pub fn from_profile(dim: usize, raw: Expr, radius: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidArgument(format!("mollifier dimension {dim}")));
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument("mollifier radius must be positive".into()));
        }
        let m = if dim == 1 { NORMALIZATION_NODES } else { 512 };
        let nodes = quadrature::ball(dim, radius, m);
        let mut mass = 0.0;
        for n in &nodes {
            let v = raw.eval(&env_at(n.point));
            if v.re < -1e-14 || v.im.abs() > 1e-14 || !v.re.is_finite() {
                return Err(Error::InvalidArgument("mollifier profile must be real, ≥ 0".into()));
            }
            mass += n.weight * v.re;
        }
        if !(mass > 0.0) {
            return Err(Error::InvalidArgument("mollifier profile has zero mass".into()));
        }
        let normalization = 1.0 / mass;
        Ok(Self { dim, radius, profile: raw * Expr::constant(normalization), normalization })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn profile(&self) -> &Expr {
        &self.profile
    }

    pub fn eval(&self, t: [f64; 2]) -> f64 {
        self.profile.eval_real(&env_at(t))
    }

    /// `∂^α ρ` as an expression.
    pub fn derivative(&self, alpha: MultiIndex) -> Expr {
        self.profile.diff_multi(&[Var::X, Var::Y], &[alpha.0[0] as usize, alpha.0[1] as usize])
    }

    /// `ρ_δ(x - c) = δ^{-n} ρ((x - c)/δ)` differentiated by `α` in `x`, with `δ = ε^q`.
    pub fn scaled_expr(&self, alpha: MultiIndex, center: [f64; 2], q: u32) -> Expr {
        let delta = Expr::powi(Expr::var(Var::Eps), q as i32);
        let mut e = self.derivative(alpha);
        e = e.substitute(Var::X, &((Expr::var(Var::X) - Expr::constant(center[0])) / delta.clone()));
        if self.dim == 2 {
            e = e.substitute(
                Var::Y,
                &((Expr::var(Var::Y) - Expr::constant(center[1])) / delta.clone()),
            );
        }
        let power = -(self.dim as i32) - alpha.order() as i32;
        e * Expr::powi(delta, power)
    }

    /// Quadrature nodes on the support.
    pub fn nodes(&self, per_axis: usize) -> Vec<quadrature::Node> {
        quadrature::ball(self.dim, self.radius, per_axis)
    }
}

pub(crate) fn env_at(p: [f64; 2]) -> Env {
    Env::new().with(Var::X, p[0]).with(Var::Y, p[1])
}
