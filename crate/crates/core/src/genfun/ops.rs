use super::grid::{MultiIndex, Region};
use super::net::RepresentativeNet;
use crate::asymptotics::{
    classify_net, fit_ladder, GeneralizedNumber, ModerationClass, ScalingFit, SeminormKey,
};
use crate::config::Tolerances;
use crate::fft;
use crate::par;
use crate::util::prelude::*;
use crate::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use num_complex::Complex64;

/// Which seminorm to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum SeminormSpec {
    /// `p_{K,i}(f) = sup_{x∈K, |α|≤i} |∂^α f(x)|`.
    Compact { region: Region, order: usize },
    /// `p_h(f) = sup_{x, |α|≤h} (1+|x|)^h |∂^α f(x)|`.
    Tempered { order: usize },
}

impl SeminormSpec {
    pub fn compact(region: Region, order: usize) -> Self {
        SeminormSpec::Compact { region, order }
    }

    pub fn order(&self) -> usize {
        match self {
            SeminormSpec::Compact { order, .. } | SeminormSpec::Tempered { order } => *order,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SeminormSpec::Compact { region, order } => {
                format!("K[{},{}]x[{},{}]:{}", region.lo[0], region.hi[0], region.lo[1], region.hi[1], order)
            }
            SeminormSpec::Tempered { order } => format!("tempered:{order}"),
        }
    }
}

const CLOSED_CAP_1D: usize = 1 << 14;
const HEAVY_CAP_1D: usize = 1 << 9;
const CLOSED_CAP_2D: usize = 256;
const HEAVY_CAP_2D: usize = 32;

impl RepresentativeNet {
    /// Spectral `∂^α` of the `k`-th representative on the periodic grid.
    pub fn spectral_derivative_row(&self, k: usize, alpha: MultiIndex) -> Vec<Complex64> {
        let row = &self.samples[k];
        if alpha.order() == 0 {
            return row.clone();
        }
        let n = self.grid.points_per_axis();
        let mut data = row.clone();
        let factor = |j: usize, axis: usize, a: u32| -> Complex64 {
            if a == 0 {
                return Complex64::new(1.0, 0.0);
            }
            if j == n / 2 && a % 2 == 1 {
                return Complex64::new(0.0, 0.0);
            }
            let w = fft::angular_frequency(j, n, self.grid.spacing(axis));
            Complex64::new(0.0, w).powi(a as i32)
        };
        if self.grid.dim() == 1 {
            fft::forward(&mut data);
            for (j, v) in data.iter_mut().enumerate() {
                *v *= factor(j, 0, alpha.0[0]);
            }
            fft::inverse(&mut data);
        } else {
            fft::forward_2d(&mut data, n, n);
            for i in 0..n {
                let fi = factor(i, 0, alpha.0[0]);
                for j in 0..n {
                    data[i * n + j] *= fi * factor(j, 1, alpha.0[1]);
                }
            }
            fft::inverse_2d(&mut data, n, n);
        }
        data
    }

    /// Fraction of spectral energy in the top octave, a resolution indicator.
    pub fn top_octave_energy(&self, k: usize) -> f64 {
        let n = self.grid.points_per_axis();
        let mut data = self.samples[k].clone();
        if self.grid.dim() == 1 {
            fft::forward(&mut data);
        } else {
            fft::forward_2d(&mut data, n, n);
        }
        let signed = |j: usize| if j < n / 2 { j } else { n - j };
        let (mut top, mut total) = (0.0, 0.0);
        for (idx, v) in data.iter().enumerate() {
            let (i, j) = if self.grid.dim() == 1 { (idx, 0) } else { (idx / n, idx % n) };
            let e = v.norm_sqr();
            total += e;
            if signed(i).max(signed(j)) >= n / 4 {
                top += e;
            }
        }
        if total > 0.0 { top / total } else { 0.0 }
    }

    /// Periodic multilinear interpolation of the `k`-th representative.
    pub fn interpolate(&self, k: usize, p: [f64; 2]) -> Complex64 {
        let n = self.grid.points_per_axis();
        let row = &self.samples[k];
        let locate = |axis: usize| -> (usize, usize, f64) {
            let t = (p[axis] - self.grid.lo()[axis]) / self.grid.spacing(axis);
            let f = t.floor();
            let i = (f as i64).rem_euclid(n as i64) as usize;
            (i, (i + 1) % n, t - f)
        };
        let (i0, i1, fx) = locate(0);
        if self.grid.dim() == 1 {
            return row[i0] * (1.0 - fx) + row[i1] * fx;
        }
        let (j0, j1, fy) = locate(1);
        row[i0 * n + j0] * ((1.0 - fx) * (1.0 - fy))
            + row[i1 * n + j0] * (fx * (1.0 - fy))
            + row[i0 * n + j1] * ((1.0 - fx) * fy)
            + row[i1 * n + j1] * (fx * fy)
    }

    /// `∂^α u_ε` at arbitrary points: exact with a source, spectral plus
    /// interpolation otherwise.
    pub fn eval_derivative(&self, alpha: MultiIndex, k: usize, points: &[[f64; 2]]) -> Vec<Complex64> {
        let eps = self.ladder.values()[k];
        match &self.source {
            Some(src) => {
                let d = src.derivative(alpha);
                points.iter().map(|p| d.eval(*p, k, eps)).collect()
            }
            None => {
                let row = self.spectral_derivative_row(k, alpha);
                let tmp = Self { samples: Arc::new(vec![row]), ..self.clone() };
                points.iter().map(|p| tmp.interpolate(0, *p)).collect()
            }
        }
    }

    pub fn derivative(&self, alpha: MultiIndex) -> Result<Self> {
        self.derivative_with(alpha, &Tolerances::default())
    }

    pub fn derivative_with(&self, alpha: MultiIndex, tol: &Tolerances) -> Result<Self> {
        if alpha.order() > tol.max_order {
            return Err(Error::UnsupportedOrder { order: alpha.order(), max: tol.max_order });
        }
        let mut net = match &self.source {
            Some(src) => Self::from_source(self.grid.clone(), self.ladder.clone(), src.derivative(alpha))?,
            None => {
                let idx: Vec<usize> = (0..self.ladder.len()).collect();
                let rows = par::map(&idx, |&k| self.spectral_derivative_row(k, alpha));
                Self::from_samples(self.grid.clone(), self.ladder.clone(), rows)?
            }
        };
        net.support_hint = self.support_hint;
        net.tempered_weight = self.tempered_weight;
        net.focus = self.focus.clone();
        Ok(net)
    }

    /// Per-ladder generalized point value at `x̃_ε`.
    pub fn point_value(&self, points: &[[f64; 2]]) -> Result<GeneralizedNumber> {
        if points.len() != self.ladder.len() {
            return Err(Error::LadderMismatch);
        }
        let dim = self.grid.dim();
        for p in points {
            if !self.grid.region().contains(dim, *p) {
                return Err(Error::OutOfDomain { point: *p });
            }
        }
        let values = (0..self.ladder.len())
            .map(|k| self.eval_derivative(MultiIndex::ZERO, k, &points[k..k + 1])[0])
            .collect();
        GeneralizedNumber::new(self.ladder.clone(), values)
    }

    /// Points where the sup over `region` is taken for the `k`-th representative.
    pub(crate) fn sup_points(&self, region: &Region, k: usize) -> Vec<[f64; 2]> {
        let dim = self.grid.dim();
        let Some(src) = &self.source else {
            return self.grid.all_points().into_iter().filter(|p| region.contains(dim, *p)).collect();
        };
        let eps = self.ladder.values()[k];
        let closed = src.is_closed();
        let cap = match (dim, closed) {
            (1, true) => CLOSED_CAP_1D,
            (1, false) => HEAVY_CAP_1D,
            (_, true) => CLOSED_CAP_2D,
            _ => HEAVY_CAP_2D,
        };
        let target = if src.depends_on_eps() { self.grid.h().min(eps / 8.0) } else { self.grid.h() };
        let axis_points = |a: usize| -> Vec<f64> {
            let len = region.hi[a] - region.lo[a];
            if len <= 0.0 {
                return vec![region.lo[a]];
            }
            let mut m = ((len / target).ceil() as usize).clamp(2, cap);
            if m % 2 == 1 {
                m += 1;
            }
            (0..=m).map(|j| region.lo[a] + len * j as f64 / m as f64).collect()
        };
        let mut out = tensor(dim, &axis_points(0), &axis_points(1.min(dim - 1)));
        for f in &self.focus {
            let w = f.half_width(eps);
            let window = Region::rect([f.center[0] - w, f.center[1] - w], [f.center[0] + w, f.center[1] + w]);
            let Some(local) = window.intersect(region) else { continue };
            let m = if dim == 1 { 256 } else { 64 };
            let axis = |a: usize| -> Vec<f64> {
                (0..=m).map(|j| local.lo[a] + (local.hi[a] - local.lo[a]) * j as f64 / m as f64).collect()
            };
            out.extend(tensor(dim, &axis(0), &axis(1.min(dim - 1))));
        }
        out
    }

    /// `sup_{x∈K} |∂^α u_ε|` for each `|α| ≤ max_order`, keyed by `α`.
    pub fn derivative_sups(&self, region: &Region, max_order: usize) -> Result<BTreeMap<MultiIndex, Vec<f64>>> {
        let dim = self.grid.dim();
        if !self.grid.region().contains_region(dim, region) {
            return Err(Error::InvalidArgument("seminorm region outside the grid box".into()));
        }
        let alphas = MultiIndex::up_to(dim, max_order);
        let idx: Vec<usize> = (0..self.ladder.len()).collect();
        let per_k = par::map(&idx, |&k| {
            let pts = self.sup_points(region, k);
            alphas
                .iter()
                .map(|a| self.eval_derivative(*a, k, &pts).iter().map(|v| v.norm()).fold(0.0, f64::max))
                .collect::<Vec<f64>>()
        });
        let mut out = BTreeMap::new();
        for (i, a) in alphas.iter().enumerate() {
            out.insert(*a, per_k.iter().map(|row| row[i]).collect());
        }
        Ok(out)
    }

    pub fn seminorm(&self, spec: &SeminormSpec) -> Result<Vec<f64>> {
        self.seminorm_with(spec, &Tolerances::default())
    }

    pub fn seminorm_with(&self, spec: &SeminormSpec, tol: &Tolerances) -> Result<Vec<f64>> {
        let order = spec.order();
        if order > tol.max_order {
            return Err(Error::UnsupportedOrder { order, max: tol.max_order });
        }
        match spec {
            SeminormSpec::Compact { region, .. } => {
                let sups = self.derivative_sups(region, order)?;
                Ok(cumulative(&sups, order, self.ladder.len()).pop().unwrap_or_default())
            }
            SeminormSpec::Tempered { order } => {
                if self.tempered_weight.is_none() {
                    return Err(Error::InvalidArgument("tempered seminorm needs a tempered weight".into()));
                }
                let pts = self.grid.all_points();
                let weights: Vec<f64> = pts
                    .iter()
                    .map(|p| (1.0 + (p[0] * p[0] + p[1] * p[1]).sqrt()).powi(*order as i32))
                    .collect();
                let alphas = MultiIndex::up_to(self.grid.dim(), *order);
                let idx: Vec<usize> = (0..self.ladder.len()).collect();
                Ok(par::map(&idx, |&k| {
                    alphas
                        .iter()
                        .map(|a| {
                            let row = self.spectral_derivative_row(k, *a);
                            row.iter().zip(&weights).map(|(v, w)| v.norm() * w).fold(0.0, f64::max)
                        })
                        .fold(0.0, f64::max)
                }))
            }
        }
    }

    /// Scaling fits of `p_{K,i}` for `i = 0..=max_order`.
    pub fn seminorm_fits(&self, region: &Region, tol: &Tolerances) -> Result<BTreeMap<SeminormKey, ScalingFit>> {
        let sups = self.derivative_sups(region, tol.max_order)?;
        let mut out = BTreeMap::new();
        for (i, row) in cumulative(&sups, tol.max_order, self.ladder.len()).into_iter().enumerate() {
            let spec = SeminormSpec::compact(*region, i);
            out.insert(SeminormKey::new(i, spec.label()), fit_ladder(&self.ladder, &row, tol)?);
        }
        Ok(out)
    }

    pub fn classify(&self, region: &Region, tol: &Tolerances) -> Result<ModerationClass> {
        classify_net(&self.seminorm_fits(region, tol)?, tol)
    }
}

fn tensor(dim: usize, xs: &[f64], ys: &[f64]) -> Vec<[f64; 2]> {
    if dim == 1 {
        return xs.iter().map(|x| [*x, 0.0]).collect();
    }
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            out.push([*x, *y]);
        }
    }
    out
}

/// `p_{K,i}` rows for `i = 0..=max_order` from per-α sups.
fn cumulative(sups: &BTreeMap<MultiIndex, Vec<f64>>, max_order: usize, n: usize) -> Vec<Vec<f64>> {
    let mut rows = Vec::with_capacity(max_order + 1);
    let mut acc = vec![0.0; n];
    for i in 0..=max_order {
        for (a, row) in sups {
            if a.order() == i {
                for (x, v) in acc.iter_mut().zip(row) {
                    *x = x.max(*v);
                }
            }
        }
        rows.push(acc.clone());
    }
    rows
}

impl RepresentativeNet {
    /// `x ↦ u_ε(x - s_ε)`: exact with a source, Fourier phase shift otherwise.
    pub fn translate(&self, shifts: &[[f64; 2]]) -> Result<Self> {
        if shifts.len() != self.ladder.len() {
            return Err(Error::LadderMismatch);
        }
        let mut net = match &self.source {
            Some(src) => Self::from_source(self.grid.clone(), self.ladder.clone(), src.translate(shifts))?,
            None => {
                let n = self.grid.points_per_axis();
                let idx: Vec<usize> = (0..self.ladder.len()).collect();
                let rows = par::map(&idx, |&k| {
                    let s = shifts[k];
                    let mut data = self.samples[k].clone();
                    let phase = |j: usize, axis: usize| {
                        let w = fft::angular_frequency(j, n, self.grid.spacing(axis));
                        Complex64::from_polar(1.0, -w * s[axis])
                    };
                    if self.grid.dim() == 1 {
                        fft::forward(&mut data);
                        for (j, v) in data.iter_mut().enumerate() {
                            *v *= phase(j, 0);
                        }
                        fft::inverse(&mut data);
                    } else {
                        fft::forward_2d(&mut data, n, n);
                        for i in 0..n {
                            for j in 0..n {
                                data[i * n + j] *= phase(i, 0) * phase(j, 1);
                            }
                        }
                        fft::inverse_2d(&mut data, n, n);
                    }
                    data
                });
                Self::from_samples(self.grid.clone(), self.ladder.clone(), rows)?
            }
        };
        net.support_hint = self.support_hint.map(|h| {
            shifts.iter().fold(Region::rect([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]), |acc, s| {
                acc.hull(&Region::rect([h.lo[0] + s[0], h.lo[1] + s[1]], [h.hi[0] + s[0], h.hi[1] + s[1]]))
            })
        });
        net.tempered_weight = self.tempered_weight;
        net.focus = self
            .focus
            .iter()
            .map(|f| super::net::Focus { center: [f.center[0] + shifts[0][0], f.center[1] + shifts[0][1]], ..*f })
            .collect();
        Ok(net)
    }
}
