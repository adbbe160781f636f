use super::grid::{Grid, MultiIndex, Region};
use super::source::{Source, SourceTerm};
use crate::asymptotics::EpsilonLadder;
use crate::dual::Mollifier;
use crate::expr::{Expr, Var};
use crate::par;
use crate::util::prelude::*;
use crate::{Error, Result};
use alloc::sync::Arc;
use num_complex::Complex64;

/// Samples outside a support hint must stay below this.
pub const SUPPORT_FLOOR: f64 = 1e-30;

/// A net `(u_ε)` sampled on a grid at every ladder point.
#[derive(Debug, Clone)]
pub struct RepresentativeNet {
    pub(crate) grid: Grid,
    pub(crate) ladder: EpsilonLadder,
    pub(crate) samples: Arc<Vec<Vec<Complex64>>>,
    pub(crate) source: Option<Source>,
    pub(crate) support_hint: Option<Region>,
    pub(crate) tempered_weight: Option<u32>,
    pub(crate) focus: Vec<Focus>,
}

/// A point where the net has structure on the scale `radius·ε^q`; sups are
/// additionally sampled on a fine window around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Focus {
    pub center: [f64; 2],
    pub radius: f64,
    pub q: u32,
}

impl Focus {
    pub fn half_width(&self, eps: f64) -> f64 {
        2.0 * self.radius * eps.powi(self.q as i32)
    }
}

/// One term `c ∂^α δ_a` of a distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaAtom {
    pub coef: Complex64,
    pub alpha: MultiIndex,
    pub location: [f64; 2],
}

/// Finite sum of delta atoms plus an optional piecewise-smooth density.
#[derive(Debug, Clone, Default)]
pub struct DistributionSpec {
    pub atoms: Vec<DeltaAtom>,
    pub density: Option<Expr>,
}

impl DistributionSpec {
    pub fn delta(location: [f64; 2]) -> Self {
        Self {
            atoms: vec![DeltaAtom { coef: 1.0.into(), alpha: MultiIndex::ZERO, location }],
            density: None,
        }
    }

    pub fn density(g: Expr) -> Self {
        Self { atoms: Vec::new(), density: Some(g) }
    }
}

impl RepresentativeNet {
    pub fn from_samples(
        grid: Grid,
        ladder: EpsilonLadder,
        samples: Vec<Vec<Complex64>>,
    ) -> Result<Self> {
        if samples.len() != ladder.len() {
            return Err(Error::LadderMismatch);
        }
        for row in &samples {
            if row.len() != grid.len() {
                return Err(Error::GridMismatch);
            }
            if let Some(k) = row.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
                let p = grid.point(k);
                return Err(Error::EvaluationError { location: p, detail: "non-finite sample".into() });
            }
        }
        Ok(Self {
            grid,
            ladder,
            samples: Arc::new(samples),
            source: None,
            support_hint: None,
            tempered_weight: None,
            focus: Vec::new(),
        })
    }

    /// Samples an analytic source on the grid at every ladder point.
    pub fn from_source(grid: Grid, ladder: EpsilonLadder, source: Source) -> Result<Self> {
        let points = grid.all_points();
        let indices: Vec<usize> = (0..ladder.len()).collect();
        let rows = par::map(&indices, |&k| {
            let eps = ladder.values()[k];
            let mut row = Vec::with_capacity(points.len());
            for p in &points {
                let v = source.eval(*p, k, eps);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::EvaluationError {
                        location: *p,
                        detail: format!("non-finite value at ε = {eps:e}"),
                    });
                }
                row.push(v);
            }
            Ok(row)
        });
        let samples = rows.into_iter().collect::<Result<Vec<_>>>()?;
        let mut net = Self::from_samples(grid, ladder, samples)?;
        net.focus = detect_focus(&source, net.grid.dim());
        net.source = Some(source);
        Ok(net)
    }

    /// Net given by a closed form in `x, y, eps`.
    pub fn from_expr(grid: Grid, ladder: EpsilonLadder, e: Expr) -> Result<Self> {
        Self::from_source(grid, ladder, Source::closed(e))
    }

    /// Constant-in-ε representative of a smooth function of `x` (and `y`).
    pub fn embed_smooth(grid: Grid, ladder: EpsilonLadder, e: Expr) -> Result<Self> {
        if e.depends_on(Var::Eps) {
            return Err(Error::InvalidArgument("embed_smooth expects an ε-free expression".into()));
        }
        Self::from_expr(grid, ladder, e)
    }

    /// `u_ε = d ∗ ρ_ε`.
    pub fn embed_distribution(
        grid: Grid,
        ladder: EpsilonLadder,
        d: &DistributionSpec,
        rho: &Mollifier,
    ) -> Result<Self> {
        if rho.dim() != grid.dim() {
            return Err(Error::InvalidArgument("mollifier and grid dimensions differ".into()));
        }
        let mut terms = Vec::new();
        let mut focus = Vec::new();
        for atom in &d.atoms {
            focus.push(Focus { center: atom.location, radius: rho.radius(), q: 1 });
            if !grid.contains(atom.location) {
                return Err(Error::OutOfDomain { point: atom.location });
            }
            let e = rho.scaled_expr(atom.alpha, atom.location, 1) * Expr::complex(atom.coef);
            terms.push(SourceTerm::Closed(e));
        }
        if let Some(g) = &d.density {
            terms.push(SourceTerm::mollified(g.clone(), rho.clone(), 1, 1.0.into()));
        }
        if terms.is_empty() {
            terms.push(SourceTerm::Closed(Expr::constant(0.0)));
        }
        let mut net = Self::from_source(grid, ladder, Source::from_terms(terms))?;
        net.focus = focus;
        Ok(net)
    }

    /// Attaches a support box after checking the samples vanish outside it.
    pub fn with_support_hint(mut self, region: Region) -> Result<Self> {
        let dim = self.grid.dim();
        for row in self.samples.iter() {
            for (k, v) in row.iter().enumerate() {
                let p = self.grid.point(k);
                if !region.contains(dim, p) && v.norm() >= SUPPORT_FLOOR {
                    return Err(Error::SupportError(format!(
                        "sample {:.3e} at {:?} outside the support hint",
                        v.norm(),
                        &p[..dim]
                    )));
                }
            }
        }
        self.support_hint = Some(region);
        Ok(self)
    }

    pub fn with_focus(mut self, focus: Focus) -> Self {
        self.focus.push(focus);
        self
    }

    pub fn focus(&self) -> &[Focus] {
        &self.focus
    }

    pub fn with_tempered_weight(mut self, weight: u32) -> Self {
        self.tempered_weight = Some(weight);
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn ladder(&self) -> &EpsilonLadder {
        &self.ladder
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn samples(&self, k: usize) -> &[Complex64] {
        &self.samples[k]
    }

    pub fn source(&self) -> Option<&Source> {
        self.source.as_ref()
    }

    pub fn support_hint(&self) -> Option<Region> {
        self.support_hint
    }

    pub fn tempered_weight(&self) -> Option<u32> {
        self.tempered_weight
    }

    fn same_frame(&self, other: &Self) -> Result<()> {
        self.ladder.ensure_same(&other.ladder)?;
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    fn combine(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Vec<Vec<Complex64>> {
        self.samples
            .iter()
            .zip(other.samples.iter())
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        let mut net = Self::from_samples(self.grid.clone(), self.ladder.clone(), self.combine(other, |a, b| a + b))?;
        if let (Some(a), Some(b)) = (&self.source, &other.source) {
            net.source = Some(a.add(b));
        }
        if let (Some(a), Some(b)) = (self.support_hint, other.support_hint) {
            net.support_hint = Some(a.hull(&b));
        }
        net.focus = merge_focus(&self.focus, &other.focus);
        Ok(net)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale_constant((-1.0).into()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        let mut net = Self::from_samples(self.grid.clone(), self.ladder.clone(), self.combine(other, |a, b| a * b))?;
        if let (Some(a), Some(b)) = (&self.source, &other.source) {
            net.source = Some(a.mul(b, self.ladder.len()));
        }
        net.support_hint = match (self.support_hint, other.support_hint) {
            (Some(a), Some(b)) => a.intersect(&b).or(Some(Region::point(a.lo))),
            (a, b) => a.or(b),
        };
        net.focus = merge_focus(&self.focus, &other.focus);
        Ok(net)
    }

    pub fn scale_constant(&self, c: Complex64) -> Self {
        self.scale(&vec![c; self.ladder.len()]).expect("ladder-sized coefficients")
    }

    /// Multiplies the ε-th representative by `coef[k]`.
    pub fn scale(&self, coef: &[Complex64]) -> Result<Self> {
        if coef.len() != self.ladder.len() {
            return Err(Error::LadderMismatch);
        }
        let samples = self
            .samples
            .iter()
            .zip(coef)
            .map(|(row, c)| row.iter().map(|v| v * c).collect())
            .collect();
        let mut net = Self::from_samples(self.grid.clone(), self.ladder.clone(), samples)?;
        net.source = self.source.as_ref().map(|s| match s.as_expr() {
            Some(e) if coef.iter().all(|c| *c == coef[0]) => Source::closed(e * Expr::complex(coef[0])),
            _ => s.scale(Arc::new(coef.to_vec())),
        });
        net.support_hint = self.support_hint;
        net.tempered_weight = self.tempered_weight;
        net.focus = self.focus.clone();
        Ok(net)
    }
}

/// Foci read off closed-form terms of the shape `f((x - c)/ε^q)`.
fn detect_focus(source: &Source, dim: usize) -> Vec<Focus> {
    let mut centers = Vec::new();
    for t in source.terms() {
        let exprs: Vec<Expr> = match t {
            SourceTerm::Closed(e) => vec![e.clone()],
            SourceTerm::PerLadder(es) => es.first().cloned().into_iter().collect(),
            SourceTerm::Scaled { inner, .. } => match inner.as_ref() {
                SourceTerm::Closed(e) => vec![e.clone()],
                _ => vec![],
            },
            _ => vec![],
        };
        for e in exprs {
            centers.extend(e.scale_centers());
        }
    }
    let mut out = Vec::new();
    let along = |v: Var| centers.iter().filter(move |c| c.0 == v);
    for (_, cx, qx) in along(Var::X) {
        if dim == 1 {
            out.push(Focus { center: [*cx, 0.0], radius: 1.0, q: *qx as u32 });
        } else {
            for (_, cy, qy) in along(Var::Y) {
                out.push(Focus { center: [*cx, *cy], radius: 1.0, q: (*qx).min(*qy) as u32 });
            }
        }
    }
    merge_focus(&out, &[])
}

pub(crate) fn merge_focus(a: &[Focus], b: &[Focus]) -> Vec<Focus> {
    let mut out = a.to_vec();
    for f in b {
        if !out.contains(f) {
            out.push(*f);
        }
    }
    out
}
