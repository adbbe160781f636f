use crate::util::prelude::*;
use crate::{Error, Result};

pub const MIN_POINTS: usize = 1 << 6;
pub const MAX_POINTS: usize = 1 << 14;

/// Axis-aligned box `[lo, hi]`; the second axis is ignored in dimension 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Region {
    pub fn interval(a: f64, b: f64) -> Self {
        Self { lo: [a, 0.0], hi: [b, 0.0] }
    }

    pub fn rect(lo: [f64; 2], hi: [f64; 2]) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, dim: usize, p: [f64; 2]) -> bool {
        (0..dim).all(|a| p[a] >= self.lo[a] && p[a] <= self.hi[a])
    }

    pub fn contains_region(&self, dim: usize, other: &Region) -> bool {
        (0..dim).all(|a| other.lo[a] >= self.lo[a] - 1e-12 && other.hi[a] <= self.hi[a] + 1e-12)
    }

    pub fn dilate(&self, r: f64) -> Self {
        Self { lo: [self.lo[0] - r, self.lo[1] - r], hi: [self.hi[0] + r, self.hi[1] + r] }
    }

    /// Minkowski sum.
    pub fn sum(&self, other: &Region) -> Self {
        Self {
            lo: [self.lo[0] + other.lo[0], self.lo[1] + other.lo[1]],
            hi: [self.hi[0] + other.hi[0], self.hi[1] + other.hi[1]],
        }
    }

    pub fn intersect(&self, other: &Region) -> Option<Self> {
        let lo = [self.lo[0].max(other.lo[0]), self.lo[1].max(other.lo[1])];
        let hi = [self.hi[0].min(other.hi[0]), self.hi[1].min(other.hi[1])];
        if lo[0] <= hi[0] && lo[1] <= hi[1] {
            Some(Self { lo, hi })
        } else {
            None
        }
    }

    pub fn hull(&self, other: &Region) -> Self {
        Self {
            lo: [self.lo[0].min(other.lo[0]), self.lo[1].min(other.lo[1])],
            hi: [self.hi[0].max(other.hi[0]), self.hi[1].max(other.hi[1])],
        }
    }

    pub fn point(p: [f64; 2]) -> Self {
        Self { lo: p, hi: p }
    }
}

/// Uniform periodic grid on a box: `points` nodes per axis at `lo + k h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    lo: [f64; 2],
    hi: [f64; 2],
    points: usize,
}

impl Grid {
    pub fn new(dim: usize, lo: [f64; 2], hi: [f64; 2], points: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{1, 2}}")));
        }
        if !points.is_power_of_two() || !(MIN_POINTS..=MAX_POINTS).contains(&points) {
            return Err(Error::InvalidGrid(format!(
                "{points} points per axis; need a power of two in [{MIN_POINTS}, {MAX_POINTS}]"
            )));
        }
        for a in 0..dim {
            if !(hi[a] > lo[a]) || !lo[a].is_finite() || !hi[a].is_finite() {
                return Err(Error::InvalidGrid(format!("empty axis {a}: [{}, {}]", lo[a], hi[a])));
            }
        }
        let (lo, hi) = if dim == 1 { ([lo[0], 0.0], [hi[0], 0.0]) } else { (lo, hi) };
        Ok(Self { dim, lo, hi, points })
    }

    pub fn line(a: f64, b: f64, points: usize) -> Result<Self> {
        Self::new(1, [a, 0.0], [b, 0.0], points)
    }

    pub fn square(a: f64, b: f64, points: usize) -> Result<Self> {
        Self::new(2, [a, a], [b, b], points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lo(&self) -> [f64; 2] {
        self.lo
    }

    pub fn hi(&self) -> [f64; 2] {
        self.hi
    }

    pub fn region(&self) -> Region {
        Region { lo: self.lo, hi: self.hi }
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / self.points as f64
    }

    /// Largest spacing over the axes.
    pub fn h(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).fold(0.0, f64::max)
    }

    pub fn coords(&self, axis: usize) -> Vec<f64> {
        let h = self.spacing(axis);
        (0..self.points).map(|k| self.lo[axis] + k as f64 * h).collect()
    }

    /// Coordinates of flat index `k` (row-major, first axis slowest).
    pub fn point(&self, k: usize) -> [f64; 2] {
        if self.dim == 1 {
            [self.lo[0] + k as f64 * self.spacing(0), 0.0]
        } else {
            let (i, j) = (k / self.points, k % self.points);
            [self.lo[0] + i as f64 * self.spacing(0), self.lo[1] + j as f64 * self.spacing(1)]
        }
    }

    pub fn all_points(&self) -> Vec<[f64; 2]> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        self.region().contains(self.dim, p)
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).product()
    }
}

/// Derivative multi-index `(α₁, α₂)`; `α₂ = 0` in dimension 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub [u32; 2]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0, 0]);

    pub fn d1(k: u32) -> Self {
        Self([k, 0])
    }

    pub fn d2(a: u32, b: u32) -> Self {
        Self([a, b])
    }

    pub fn order(&self) -> usize {
        (self.0[0] + self.0[1]) as usize
    }

    pub fn add(&self, other: &MultiIndex) -> Self {
        Self([self.0[0] + other.0[0], self.0[1] + other.0[1]])
    }

    /// All `β ≤ self` componentwise.
    pub fn below(&self) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for a in 0..=self.0[0] {
            for b in 0..=self.0[1] {
                out.push(MultiIndex([a, b]));
            }
        }
        out
    }

    /// `∏ binom(α_i, β_i)`.
    pub fn binomial(&self, beta: &MultiIndex) -> f64 {
        crate::util::binomial(self.0[0] as usize, beta.0[0] as usize)
            * crate::util::binomial(self.0[1] as usize, beta.0[1] as usize)
    }

    pub fn sub(&self, beta: &MultiIndex) -> Self {
        Self([self.0[0] - beta.0[0], self.0[1] - beta.0[1]])
    }

    /// All multi-indices of order `≤ max` in dimension `dim`.
    pub fn up_to(dim: usize, max: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for total in 0..=max as u32 {
            if dim == 1 {
                out.push(MultiIndex([total, 0]));
            } else {
                for a in (0..=total).rev() {
                    out.push(MultiIndex([a, total - a]));
                }
            }
        }
        out
    }
}
