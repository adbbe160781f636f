use crate::expr::{Env, Expr, Var};
use crate::util::prelude::*;
use crate::{Error, Result};
use core::f64::consts::PI;

/// Angle bins used to discretize directions in 2-D.
pub const ANGLE_BINS_2D: usize = 64;

/// Closed cone `{ξ ≠ 0 : angle(ξ, direction) ≤ half_angle}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    dim: usize,
    angle: f64,
    half_angle: f64,
}

impl Cone {
    /// `{ξ > 0}` or `{ξ < 0}` on the line.
    pub fn half_line(positive: bool) -> Self {
        Self { dim: 1, angle: if positive { 0.0 } else { PI }, half_angle: PI / 2.0 }
    }

    pub fn planar(angle: f64, half_angle: f64) -> Result<Self> {
        if !(half_angle > 0.0 && half_angle <= PI / 2.0) {
            return Err(Error::InvalidArgument(format!("half-angle {half_angle} outside (0, π/2]")));
        }
        Ok(Self { dim: 2, angle: angle.rem_euclid(2.0 * PI), half_angle })
    }

    /// Every direction; used for the direct singular-support test.
    pub fn full_sphere(dim: usize) -> Self {
        Self { dim, angle: 0.0, half_angle: PI }
    }

    /// `±` on the line; 16 cones of half-angle π/8 every π/8 in the plane.
    pub fn default_grid(dim: usize) -> Vec<Cone> {
        if dim == 1 {
            vec![Self::half_line(true), Self::half_line(false)]
        } else {
            (0..16).map(|j| Self { dim: 2, angle: j as f64 * PI / 8.0, half_angle: PI / 8.0 }).collect()
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Direction angle (0 or π on the line).
    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    pub fn is_full(&self) -> bool {
        self.half_angle >= PI
    }

    pub fn direction(&self) -> [f64; 2] {
        [self.angle.cos(), self.angle.sin()]
    }

    pub fn contains(&self, xi: [f64; 2]) -> bool {
        if xi[0] == 0.0 && (self.dim == 1 || xi[1] == 0.0) {
            return false;
        }
        if self.is_full() {
            return true;
        }
        if self.dim == 1 {
            return (xi[0] > 0.0) == (self.angle == 0.0);
        }
        angle_distance(xi[1].atan2(xi[0]), self.angle) <= self.half_angle + 1e-12
    }

    /// Direction bins (see [`direction_bin`]) covered by the cone.
    pub fn bins(&self) -> Vec<usize> {
        if self.dim == 1 {
            return match (self.is_full(), self.angle == 0.0) {
                (true, _) => vec![0, 1],
                (false, true) => vec![0],
                (false, false) => vec![1],
            };
        }
        (0..ANGLE_BINS_2D)
            .filter(|b| self.is_full() || angle_distance(bin_angle(*b), self.angle) <= self.half_angle + 1e-12)
            .collect()
    }
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

pub(crate) fn bin_angle(b: usize) -> f64 {
    (b as f64 + 0.5) * 2.0 * PI / ANGLE_BINS_2D as f64
}

/// Direction bin of a nonzero frequency: `0` for `ξ > 0`, `1` for `ξ < 0` on the line.
pub(crate) fn direction_bin(dim: usize, xi: [f64; 2]) -> usize {
    if dim == 1 {
        return if xi[0] > 0.0 { 0 } else { 1 };
    }
    let a = xi[1].atan2(xi[0]).rem_euclid(2.0 * PI);
    ((a / (2.0 * PI) * ANGLE_BINS_2D as f64) as usize).min(ANGLE_BINS_2D - 1)
}

pub(crate) fn bin_count(dim: usize) -> usize {
    if dim == 1 { 2 } else { ANGLE_BINS_2D }
}

/// Smooth plateau cutoff: `1` on `|x - x₀| ≤ r/2`, `0` outside `|x - x₀| < r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub center: [f64; 2],
    pub radius: f64,
}

impl CutoffSpec {
    pub fn new(center: [f64; 2], radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn expr(&self, dim: usize) -> Expr {
        let dx = Expr::var(Var::X) - Expr::constant(self.center[0]);
        let mut s2 = Expr::powi(dx, 2);
        if dim == 2 {
            s2 = s2 + Expr::powi(Expr::var(Var::Y) - Expr::constant(self.center[1]), 2);
        }
        Expr::plateau_sq(s2, self.radius)
    }

    pub fn eval(&self, dim: usize, p: [f64; 2]) -> f64 {
        self.expr(dim).eval_real(&Env::new().with(Var::X, p[0]).with(Var::Y, p[1]))
    }
}

/// Cone-decay class of a localized transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConeClass {
    /// `∃N ∀l`: rapid decay with one ε-growth for every weight.
    InGinf,
    /// `∀l ∃N`: rapid decay, ε-growth depending on the weight.
    InGOnly,
    Neither,
}

impl ConeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ConeClass::InGinf => "InGinf",
            ConeClass::InGOnly => "InGOnly",
            ConeClass::Neither => "Neither",
        }
    }
}

/// Joint classification of a wave-front cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WfClass {
    RegularBoth,
    GRegularOnly,
    Singular,
}

impl WfClass {
    pub fn from_cone(c: ConeClass) -> Self {
        match c {
            ConeClass::InGinf => WfClass::RegularBoth,
            ConeClass::InGOnly => WfClass::GRegularOnly,
            ConeClass::Neither => WfClass::Singular,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WfClass::RegularBoth => "RegularBoth",
            WfClass::GRegularOnly => "GRegularOnly",
            WfClass::Singular => "Singular",
        }
    }

    /// Is the cell in the wave front set for this mode?
    pub fn in_wavefront(self, mode: WfMode) -> bool {
        match mode {
            WfMode::G => self == WfClass::Singular,
            WfMode::Ginf => self != WfClass::RegularBoth,
        }
    }
}

/// Which wave front set is asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WfMode {
    G,
    Ginf,
}
