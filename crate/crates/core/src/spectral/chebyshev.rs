//! Chebyshev functional calculus `v ↦ f(A) v`.

use crate::error::{invalid, Error, Result};
use crate::graph::SparseOperator;

/// Largest number of interpolation nodes tried before giving up.
pub const MAX_NODES: usize = 16384;

/// Chebyshev expansion of a function on `[a, b]`.
#[derive(Debug, Clone)]
pub struct ChebSeries {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<f64>,
}

impl ChebSeries {
    /// Interpolates `f` at Chebyshev nodes, doubling the node count until the
    /// upper half of the coefficients sums below `tol` (or below the rounding
    /// floor of the transform), then keeps the lower half.
    pub fn fit(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<ChebSeries> {
        if !(b > a) || !(tol > 0.0) {
            return invalid("Chebyshev fit needs a < b and tol > 0");
        }
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut n = 16;
        loop {
            let pi = std::f64::consts::PI;
            let values: Vec<f64> = (0..n)
                .map(|j| f(mid + half * (pi * (j as f64 + 0.5) / n as f64).cos()))
                .collect();
            if values.iter().any(|v| !v.is_finite()) {
                return invalid("function is not finite on the interval");
            }
            // cos(π k (2j+1) / 2n) from a table of 4n entries
            let m = 4 * n;
            let table: Vec<f64> = (0..m).map(|i| (pi * i as f64 / (2 * n) as f64).cos()).collect();
            let mut coeffs: Vec<f64> = (0..n)
                .map(|k| {
                    let s: f64 = values
                        .iter()
                        .enumerate()
                        .map(|(j, v)| v * table[(k * (2 * j + 1)) % m])
                        .sum();
                    2.0 * s / n as f64
                })
                .collect();
            coeffs[0] *= 0.5;
            let tail: f64 = coeffs[n / 2..].iter().map(|c| c.abs()).sum();
            let fmax = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let floor = n as f64 * f64::EPSILON * fmax;
            if tail < tol.max(floor) {
                coeffs.truncate(n / 2);
                return Ok(ChebSeries { a, b, coeffs });
            }
            if n >= MAX_NODES {
                return Err(Error::NoConvergence { iterations: n, residual: tail });
            }
            n *= 2;
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + self.coeffs[0]
    }

    /// `p(A) v` by the three-term recurrence.
    pub fn apply(&self, op: &SparseOperator, v: &[f64]) -> Result<Vec<f64>> {
        let n = op.dim();
        if v.len() != n {
            return invalid(format!("vector length {} differs from dimension {n}", v.len()));
        }
        let scale = 2.0 / (self.b - self.a);
        let shift = (self.a + self.b) / (self.b - self.a);
        let mut tmp = vec![0.0; n];
        // B x = scale·A x − shift·x maps the interval onto [−1, 1]
        let apply_b = |x: &[f64], out: &mut [f64]| {
            op.matvec_unchecked(x, out);
            out.iter_mut().zip(x).for_each(|(o, xi)| *o = scale * *o - shift * xi);
        };
        let mut y: Vec<f64> = v.iter().map(|x| self.coeffs[0] * x).collect();
        if self.coeffs.len() == 1 {
            return Ok(y);
        }
        let mut prev = v.to_vec();
        let mut cur = vec![0.0; n];
        apply_b(v, &mut cur);
        y.iter_mut().zip(&cur).for_each(|(yi, c)| *yi += self.coeffs[1] * c);
        for &c in &self.coeffs[2..] {
            apply_b(&cur, &mut tmp);
            for i in 0..n {
                let next = 2.0 * tmp[i] - prev[i];
                prev[i] = cur[i];
                cur[i] = next;
                y[i] += c * next;
            }
        }
        Ok(y)
    }
}

/// `p(A) v` where `p` approximates `f` on `interval` within `tol` in the
/// sup norm. `interval` must enclose the spectrum of `A`.
pub fn chebyshev_apply(
    f: impl Fn(f64) -> f64,
    op: &SparseOperator,
    interval: (f64, f64),
    v: &[f64],
    tol: f64,
) -> Result<Vec<f64>> {
    ChebSeries::fit(f, interval.0, interval.1, tol)?.apply(op, v)
}

/// Default interval `[−‖A‖ − 10⁻⁶, ‖A‖ + 10⁻⁶]`.
pub fn default_interval(norm: f64) -> (f64, f64) {
    (-norm - 1e-6, norm + 1e-6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_segment;

    #[test]
    fn identity_is_matvec() {
        let op = build_segment(7).unwrap();
        let v: Vec<f64> = (0..8).map(|i| (i as f64 * 0.7).sin()).collect();
        let y = chebyshev_apply(|x| x, &op, default_interval(2.0), &v, 1e-14).unwrap();
        let av = op.apply(&v).unwrap();
        for (a, b) in y.iter().zip(&av) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn square_on_s2() {
        let op = build_segment(2).unwrap();
        let y = chebyshev_apply(|x| x * x, &op, default_interval(2.0), &[0.0, 1.0, 0.0], 1e-14).unwrap();
        for (a, b) in y.iter().zip([0.0, 2.0, 0.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn clenshaw_matches_function() {
        let s = ChebSeries::fit(|x| (0.3 * x).exp(), -2.0, 2.0, 1e-15).unwrap();
        for i in 0..20 {
            let x = -2.0 + 0.2 * i as f64;
            assert!((s.eval(x) - (0.3 * x).exp()).abs() < 1e-13);
        }
    }
}
