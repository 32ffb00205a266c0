//! Quadrature rules and a monotone bisection helper.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite Gauss–Legendre rule: `order` nodes on each of the given panels.
pub fn composite_nodes(edges: &[f64], order: usize) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(order);
    let mut t = Vec::with_capacity(order * edges.len());
    let mut w = Vec::with_capacity(order * edges.len());
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, wx) in gx.iter().zip(&gw) {
            t.push(mid + half * x);
            w.push(half * wx);
        }
    }
    (t, w)
}

/// Panel edges `0, first, 2·first, 4·first, …` up to `end`.
pub fn geometric_edges(first: f64, end: f64) -> Vec<f64> {
    let mut edges = vec![0.0, first.min(end)];
    while *edges.last().unwrap() < end {
        let next = (edges.last().unwrap() * 2.0).min(end);
        edges.push(next);
    }
    edges
}

/// Bisection for the sign change of a monotone function on `(lo, hi)`.
///
/// `increasing` tells the direction of `f`. Stops when the bracket is below
/// `tol·max(1, |x|)` or stops shrinking in floating point.
pub fn bisect_monotone(mut lo: f64, mut hi: f64, increasing: bool, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= tol * mid.abs().max(1.0) {
            return mid;
        }
        let v = f(mid);
        if (v < 0.0) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
