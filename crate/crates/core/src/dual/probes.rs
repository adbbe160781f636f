use crate::asymptotics::EpsilonLadder;
use crate::expr::{Expr, Var};
use crate::genfun::{Grid, Region, RepresentativeNet};
use crate::util::prelude::*;
use crate::Result;

/// `bump((x - c)/r)` in dimension 1 or 2.
pub fn bump_at(dim: usize, center: [f64; 2], r: f64) -> Expr {
    let t = |v: Var, c: f64| (Expr::var(v) - Expr::constant(c)) / Expr::constant(r);
    if dim == 1 {
        Expr::bump(t(Var::X, center[0]))
    } else {
        Expr::flat_exp(
            0,
            Expr::constant(1.0) - Expr::powi(t(Var::X, center[0]), 2) - Expr::powi(t(Var::Y, center[1]), 2),
        )
    }
}

/// Smooth compactly supported test functions around `center`: bumps of radius
/// `r, r/2, r/4` and `cos(k x)`-modulated bumps for `k = 1, 4, 16`.
pub fn standard_probes(grid: &Grid, ladder: &EpsilonLadder, center: [f64; 2], r: f64) -> Result<Vec<RepresentativeNet>> {
    let dim = grid.dim();
    let mut exprs = Vec::new();
    for s in [1.0, 0.5, 0.25] {
        exprs.push((bump_at(dim, center, r * s), r * s));
    }
    for k in [1.0, 4.0, 16.0] {
        let wave = (Expr::constant(k) * (Expr::var(Var::X) - Expr::constant(center[0]))).cos();
        exprs.push((wave * bump_at(dim, center, r), r));
    }
    exprs
        .into_iter()
        .map(|(e, radius)| {
            RepresentativeNet::embed_smooth(grid.clone(), ladder.clone(), e)?
                .with_support_hint(Region::point(center).dilate(radius))
        })
        .collect()
}
