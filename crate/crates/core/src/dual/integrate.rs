//! `∫ w_ε ∂^β u_ε dx` for one ladder point.

use crate::genfun::{Focus, MultiIndex, RepresentativeNet};
use crate::util::prelude::*;
use num_complex::Complex64;

const CAP_1D: usize = 1 << 16;
const CAP_2D: usize = 512;
const HEAVY_CAP_1D: usize = 1 << 12;
const HEAVY_CAP_2D: usize = 96;

pub(crate) fn pairing(w: &RepresentativeNet, beta: MultiIndex, u: &RepresentativeNet, k: usize) -> Complex64 {
    let grid = w.grid();
    let (Some(ws), Some(us)) = (w.source(), u.source()) else {
        let du = match u.source() {
            Some(_) => u.eval_derivative(beta, k, &grid.all_points()),
            None => u.spectral_derivative_row(k, beta),
        };
        let dv = grid.cell_volume();
        return w.samples(k).iter().zip(&du).map(|(a, b)| a * b).sum::<Complex64>() * dv;
    };
    let dim = grid.dim();
    let mut region = grid.region();
    for hint in [w.support_hint(), u.support_hint()].into_iter().flatten() {
        match region.intersect(&hint) {
            Some(r) => region = r,
            None => return Complex64::new(0.0, 0.0),
        }
    }
    let eps = w.ladder().values()[k];
    let closed = ws.is_closed() && us.is_closed();
    let cap = match (dim, closed) {
        (1, true) => CAP_1D,
        (1, false) => HEAVY_CAP_1D,
        (_, true) => CAP_2D,
        _ => HEAVY_CAP_2D,
    };
    let coarse = if ws.depends_on_eps() || us.depends_on_eps() {
        grid.h().min(eps / 8.0)
    } else {
        grid.h() / 2.0
    };
    let foci: Vec<Focus> = w.focus().iter().chain(u.focus()).copied().collect();
    let fine = if dim == 1 { 256 } else { 48 };
    let axis = |a: usize| {
        let windows: Vec<(f64, f64)> = foci
            .iter()
            .map(|f| (f.center[a] - f.half_width(eps), f.center[a] + f.half_width(eps)))
            .collect();
        axis_nodes(region.lo[a], region.hi[a], &windows, coarse, cap, fine)
    };
    let xs = axis(0);
    let ys = if dim == 2 { axis(1) } else { vec![(0.0, 1.0)] };
    let du = us.derivative(beta);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, wx) in &xs {
        for (y, wy) in &ys {
            let p = [*x, *y];
            let wv = ws.eval(p, k, eps);
            if wv == Complex64::new(0.0, 0.0) {
                continue;
            }
            acc += wv * du.eval(p, k, eps) * (wx * wy);
        }
    }
    acc
}

/// Composite midpoint nodes on `[lo, hi]`: `fine` nodes in each window, spacing
/// about `coarse` elsewhere, at most `cap` coarse nodes in total.
pub(crate) fn axis_nodes(lo: f64, hi: f64, windows: &[(f64, f64)], coarse: f64, cap: usize, fine: usize) -> Vec<(f64, f64)> {
    let mut ws: Vec<(f64, f64)> = windows
        .iter()
        .map(|(a, b)| (a.max(lo), b.min(hi)))
        .filter(|(a, b)| b > a)
        .collect();
    ws.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for w in ws {
        match merged.last_mut() {
            Some(last) if w.0 <= last.1 => last.1 = last.1.max(w.1),
            _ => merged.push(w),
        }
    }
    let mut gaps = Vec::new();
    let mut cursor = lo;
    for (a, b) in &merged {
        if *a > cursor {
            gaps.push((cursor, *a));
        }
        cursor = *b;
    }
    if hi > cursor {
        gaps.push((cursor, hi));
    }
    let gap_len: f64 = gaps.iter().map(|(a, b)| b - a).sum();
    let step = coarse.max(gap_len / cap as f64);
    let mut out = Vec::new();
    let mut panel = |a: f64, b: f64, m: usize| {
        let h = (b - a) / m as f64;
        for j in 0..m {
            out.push((a + (j as f64 + 0.5) * h, h));
        }
    };
    for (a, b) in &gaps {
        panel(*a, *b, (((b - a) / step).ceil() as usize).max(1));
    }
    for (a, b) in &merged {
        panel(*a, *b, fine);
    }
    out
}
