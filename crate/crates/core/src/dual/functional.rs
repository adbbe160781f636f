use crate::asymptotics::{EpsilonLadder, GeneralizedNumber};
use crate::expr::Expr;
use crate::genfun::{Focus, Grid, MultiIndex, Region, RepresentativeNet};
use crate::util::prelude::*;
use crate::{Error, Result};
use num_complex::Complex64;

/// `c_ε ∂^α δ_{x_ε}` acting as `u ↦ c_ε (∂^α u)(x_ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub coef: Vec<Complex64>,
    pub alpha: MultiIndex,
    pub location: Vec<[f64; 2]>,
}

impl Atom {
    pub fn constant(ladder: &EpsilonLadder, coef: Complex64, alpha: MultiIndex, location: [f64; 2]) -> Self {
        Self { coef: vec![coef; ladder.len()], alpha, location: vec![location; ladder.len()] }
    }

    pub fn is_fixed(&self) -> bool {
        self.location.iter().all(|p| *p == self.location[0])
    }
}

/// `u ↦ ∫ w_ε ∂^β u_ε dx`.
#[derive(Debug, Clone)]
pub struct DensityTerm {
    pub weight: RepresentativeNet,
    pub order: MultiIndex,
}

/// Uniform continuity data: `|T_ε(u)| ≤ ε^{-N} p_{K,j}(u)` for `ε ≤ η`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub region: Region,
    pub order: usize,
    pub n: i64,
    pub eta: f64,
}

/// ε-net of finite-order distributions: delta atoms plus densities.
#[derive(Debug, Clone)]
pub struct BasicFunctional {
    pub(crate) grid: Grid,
    pub(crate) ladder: EpsilonLadder,
    pub(crate) atoms: Vec<Atom>,
    pub(crate) densities: Vec<DensityTerm>,
    pub(crate) certificate: Option<Certificate>,
}

impl BasicFunctional {
    pub fn zero(grid: &Grid, ladder: &EpsilonLadder) -> Self {
        Self {
            grid: grid.clone(),
            ladder: ladder.clone(),
            atoms: Vec::new(),
            densities: Vec::new(),
            certificate: None,
        }
    }

    pub fn new(
        grid: &Grid,
        ladder: &EpsilonLadder,
        atoms: Vec<Atom>,
        densities: Vec<DensityTerm>,
        certificate: Option<Certificate>,
    ) -> Result<Self> {
        let mut t = Self::zero(grid, ladder);
        for a in atoms {
            t.push_atom(a)?;
        }
        for d in densities {
            t.push_density(d)?;
        }
        t.certificate = certificate;
        Ok(t)
    }

    /// `c ∂^α δ_a`.
    pub fn delta(grid: &Grid, ladder: &EpsilonLadder, location: [f64; 2], alpha: MultiIndex) -> Result<Self> {
        let mut t = Self::zero(grid, ladder);
        t.push_atom(Atom::constant(ladder, 1.0.into(), alpha, location))?;
        let r = grid.h();
        t.certificate = Some(Certificate {
            region: Region::point(location).dilate(r),
            order: alpha.order(),
            n: 0,
            eta: 1.0,
        });
        Ok(t)
    }

    /// `u ↦ ∫ w ∂^β u` with a closed-form ε-free weight.
    pub fn density(grid: &Grid, ladder: &EpsilonLadder, weight: Expr, order: MultiIndex) -> Result<Self> {
        let w = RepresentativeNet::from_expr(grid.clone(), ladder.clone(), weight)?;
        let mut t = Self::zero(grid, ladder);
        t.push_density(DensityTerm { weight: w, order })?;
        Ok(t)
    }

    /// `u ↦ ∫_region u dx`.
    pub fn integral(grid: &Grid, ladder: &EpsilonLadder, region: Option<Region>) -> Result<Self> {
        let box_ = grid.region();
        let region = region.unwrap_or(box_);
        let indicator = if region == box_ {
            Expr::constant(1.0)
        } else {
            indicator_expr(grid.dim(), &region)
        };
        let w = RepresentativeNet::from_expr(grid.clone(), ladder.clone(), indicator)?
            .with_support_hint(region)?;
        let mut t = Self::zero(grid, ladder);
        t.push_density(DensityTerm { weight: w, order: MultiIndex::ZERO })?;
        t.certificate = Some(Certificate { region, order: 0, n: 0, eta: 1.0 });
        Ok(t)
    }

    pub fn push_atom(&mut self, atom: Atom) -> Result<()> {
        if atom.coef.len() != self.ladder.len() || atom.location.len() != self.ladder.len() {
            return Err(Error::LadderMismatch);
        }
        if let Some(p) = atom.location.iter().find(|p| !self.grid.contains(**p)) {
            return Err(Error::OutOfDomain { point: *p });
        }
        self.atoms.push(atom);
        Ok(())
    }

    pub fn push_density(&mut self, d: DensityTerm) -> Result<()> {
        self.ladder.ensure_same(d.weight.ladder())?;
        if d.weight.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        self.densities.push(d);
        Ok(())
    }

    pub fn with_certificate(mut self, c: Certificate) -> Self {
        self.certificate = Some(c);
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

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn densities(&self) -> &[DensityTerm] {
        &self.densities
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    /// Highest derivative order over atoms and densities.
    pub fn order(&self) -> usize {
        let a = self.atoms.iter().map(|a| a.alpha.order()).max().unwrap_or(0);
        let d = self.densities.iter().map(|d| d.order.order()).max().unwrap_or(0);
        a.max(d)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ladder.ensure_same(&other.ladder)?;
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut t = self.clone();
        t.atoms.extend(other.atoms.iter().cloned());
        t.densities.extend(other.densities.iter().cloned());
        t.certificate = match (&self.certificate, &other.certificate) {
            (Some(a), Some(b)) => Some(Certificate {
                region: a.region.hull(&b.region),
                order: a.order.max(b.order),
                n: a.n.max(b.n),
                eta: a.eta.min(b.eta),
            }),
            _ => None,
        };
        Ok(t)
    }

    /// Multiplies the ε-th representative by `coef[k]`.
    pub fn scale(&self, coef: &[Complex64]) -> Result<Self> {
        if coef.len() != self.ladder.len() {
            return Err(Error::LadderMismatch);
        }
        let mut t = self.clone();
        for a in &mut t.atoms {
            for (c, s) in a.coef.iter_mut().zip(coef) {
                *c *= s;
            }
        }
        for d in &mut t.densities {
            d.weight = d.weight.scale(coef)?;
        }
        Ok(t)
    }

    /// `T_ε(u_ε)` per ladder point.
    pub fn act(&self, u: &RepresentativeNet) -> Result<GeneralizedNumber> {
        self.ladder.ensure_same(u.ladder())?;
        if u.dim() != self.dim() {
            return Err(Error::GridMismatch);
        }
        if let (Some(c), Some(hint)) = (&self.certificate, u.support_hint()) {
            let box_ = u.grid().region();
            if c.region.intersect(&hint).is_none() && !box_.contains_region(self.dim(), &c.region) {
                return Err(Error::SupportError("test function does not meet the functional's support".into()));
            }
        }
        let n = self.ladder.len();
        let mut values = vec![Complex64::new(0.0, 0.0); n];
        for a in &self.atoms {
            for (k, v) in values.iter_mut().enumerate() {
                if a.coef[k] != Complex64::new(0.0, 0.0) {
                    *v += a.coef[k] * u.eval_derivative(a.alpha, k, &a.location[k..k + 1])[0];
                }
            }
        }
        for d in &self.densities {
            let idx: Vec<usize> = (0..n).collect();
            let parts = crate::par::map(&idx, |&k| super::integrate::pairing(&d.weight, d.order, u, k));
            for (v, p) in values.iter_mut().zip(parts) {
                *v += p;
            }
        }
        GeneralizedNumber::new(self.ladder.clone(), values)
    }

    /// Points with ε-scale structure, for quadrature refinement.
    pub(crate) fn foci(&self) -> Vec<Focus> {
        let mut out = Vec::new();
        for a in &self.atoms {
            out.push(Focus { center: a.location[0], radius: 1.0, q: 1 });
        }
        for d in &self.densities {
            out.extend(d.weight.focus().iter().copied());
        }
        out
    }
}

/// Sharp indicator of a box.
pub(crate) fn indicator_expr(dim: usize, r: &Region) -> Expr {
    let x = Expr::var(crate::expr::Var::X);
    let mut e = (x.clone() - Expr::constant(r.lo[0])).step() * (Expr::constant(r.hi[0]) - x).step();
    if dim == 2 {
        let y = Expr::var(crate::expr::Var::Y);
        e = e * (y.clone() - Expr::constant(r.lo[1])).step() * (Expr::constant(r.hi[1]) - y).step();
    }
    e
}
