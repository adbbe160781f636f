//! Trapezoid-type quadrature rules.
//!
//! Integrands here are smooth and compactly supported or periodic, where the
//! plain trapezoid rule converges faster than any power of the node spacing.

use crate::util::prelude::*;

/// A node with its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub point: [f64; 2],
    pub weight: f64,
}

/// Midpoint nodes on `[a, b]`.
pub fn interval(a: f64, b: f64, m: usize) -> Vec<Node> {
    let h = (b - a) / m as f64;
    (0..m)
        .map(|k| Node { point: [a + (k as f64 + 0.5) * h, 0.0], weight: h })
        .collect()
}

/// Midpoint nodes on the ball `|t| < radius` in dimension 1 or 2, `m` per axis.
pub fn ball(dim: usize, radius: f64, m: usize) -> Vec<Node> {
    if dim == 1 {
        return interval(-radius, radius, m);
    }
    let h = 2.0 * radius / m as f64;
    let mut out = Vec::new();
    for i in 0..m {
        let x = -radius + (i as f64 + 0.5) * h;
        for j in 0..m {
            let y = -radius + (j as f64 + 0.5) * h;
            if x * x + y * y < radius * radius {
                out.push(Node { point: [x, y], weight: h * h });
            }
        }
    }
    out
}

/// Midpoint nodes on an axis-aligned box.
pub fn cuboid(dim: usize, lo: [f64; 2], hi: [f64; 2], m: [usize; 2]) -> Vec<Node> {
    if dim == 1 {
        return interval(lo[0], hi[0], m[0]);
    }
    let xs = interval(lo[0], hi[0], m[0]);
    let ys = interval(lo[1], hi[1], m[1]);
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for a in &xs {
        for b in &ys {
            out.push(Node { point: [a.point[0], b.point[0]], weight: a.weight * b.weight });
        }
    }
    out
}

pub fn integrate(nodes: &[Node], f: impl Fn([f64; 2]) -> f64) -> f64 {
    nodes.iter().map(|n| n.weight * f(n.point)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integral() {
        let v = integrate(&interval(-10.0, 10.0, 400), |p| (-p[0] * p[0]).exp());
        assert!((v - core::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn disk_area() {
        let v = integrate(&ball(2, 1.0, 400), |_| 1.0);
        assert!((v - core::f64::consts::PI).abs() < 1e-3);
    }
}
