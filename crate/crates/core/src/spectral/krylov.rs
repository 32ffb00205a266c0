//! Lanczos extremal eigenpairs and conjugate-gradient shifted solves.

use crate::error::{invalid, Error, Result};
use crate::graph::SparseOperator;
use crate::linalg::tridiag_eig;

/// Top eigenvalue with its eigenvector normalized to 1 at the root.
#[derive(Debug, Clone)]
pub struct EigPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `‖A v − λ v‖∞` of the returned (root-normalized) vector.
    pub residual: f64,
    pub restarts: usize,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn inf_residual(op: &SparseOperator, v: &[f64], lambda: f64) -> f64 {
    let mut av = vec![0.0; v.len()];
    op.matvec_unchecked(v, &mut av);
    av.iter().zip(v).map(|(a, x)| (a - lambda * x).abs()).fold(0.0, f64::max)
}

/// Largest eigenvalue and Perron–Frobenius vector by restarted Lanczos with
/// full reorthogonalization, started from the all-ones vector.
///
/// Converged when the unit-norm Ritz vector `y` satisfies
/// `‖A y − θ y‖∞ ≤ tol·max(1, |θ|)`.
pub fn extremal_eig(op: &SparseOperator, tol: f64, root: usize) -> Result<EigPair> {
    let n = op.dim();
    if n == 0 {
        return invalid("empty operator");
    }
    if root >= n {
        return invalid(format!("root {root} outside operator of dimension {n}"));
    }
    let basis_cap = n.min(150).min((20_000_000 / n).max(12));
    let mut q: Vec<f64> = vec![1.0 / (n as f64).sqrt(); n];
    let mut last_residual = f64::INFINITY;
    const MAX_RESTARTS: usize = 300;
    for restart in 0..MAX_RESTARTS {
        let mut basis: Vec<Vec<f64>> = vec![q.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![0.0; n];
        loop {
            let j = basis.len() - 1;
            op.matvec_unchecked(&basis[j], &mut w);
            let a = dot(&basis[j], &w);
            alpha.push(a);
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= c * vi);
                }
            }
            let b = norm(&w);
            if basis.len() >= basis_cap || b <= 1e-13 * a.abs().max(1.0) {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
        let t = tridiag_eig(&alpha, &beta, true)?;
        let k = t.values.len() - 1;
        let theta = t.values[k];
        let s = t.vector(k).unwrap();
        let mut y = vec![0.0; n];
        for (v, &si) in basis.iter().zip(&s) {
            y.iter_mut().zip(v).for_each(|(yi, vi)| *yi += si * vi);
        }
        let ny = norm(&y);
        y.iter_mut().for_each(|x| *x /= ny);
        let res = inf_residual(op, &y, theta);
        last_residual = res;
        if res <= tol * theta.abs().max(1.0) {
            let scale = y[root];
            if scale == 0.0 {
                return invalid("eigenvector vanishes at the root");
            }
            let vector: Vec<f64> = y.iter().map(|x| x / scale).collect();
            let residual = inf_residual(op, &vector, theta);
            return Ok(EigPair { value: theta, vector, residual, restarts: restart });
        }
        q = y;
    }
    Err(Error::NoConvergence { iterations: MAX_RESTARTS, residual: last_residual })
}

/// Result of a shifted linear solve.
#[derive(Debug, Clone)]
pub struct Solve {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Relative residual `‖b − (λI − A)x‖ / ‖b‖`.
    pub residual: f64,
}

/// Solves `(λI − A) x = b` by conjugate gradients. `λ` must exceed the
/// spectral radius; when the row-sum bound does not settle this, the top
/// eigenvalue is computed with [`extremal_eig`].
pub fn shifted_solve(op: &SparseOperator, lambda: f64, b: &[f64], tol: f64) -> Result<Solve> {
    let bound = op.max_row_sum();
    let radius = if lambda > bound {
        bound
    } else {
        extremal_eig(op, 1e-10, 0)?.value
    };
    shifted_solve_above(op, lambda, b, tol, radius)
}

/// As [`shifted_solve`] with a known spectral radius.
pub fn shifted_solve_above(op: &SparseOperator, lambda: f64, b: &[f64], tol: f64, radius: f64) -> Result<Solve> {
    let n = op.dim();
    if b.len() != n {
        return invalid(format!("right-hand side length {} differs from dimension {n}", b.len()));
    }
    if lambda <= radius {
        return Err(Error::BelowSpectrum { lambda, radius });
    }
    let bnorm = norm(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(Solve { x, iterations: 0, residual: 0.0 });
    }
    let apply = |v: &[f64], out: &mut [f64]| {
        op.matvec_unchecked(v, out);
        out.iter_mut().zip(v).for_each(|(o, vi)| *o = lambda * vi - *o);
    };
    let max_iter = 20 * n + 1000;
    let mut iterations = 0;
    let mut r = b.to_vec();
    let mut ap = vec![0.0; n];
    for _sweep in 0..4 {
        let mut p = r.clone();
        let mut rr = dot(&r, &r);
        while rr.sqrt() > tol * bnorm && iterations < max_iter {
            apply(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap <= 0.0 {
                return Err(Error::BelowSpectrum { lambda, radius });
            }
            let alpha = rr / pap;
            x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
            r.iter_mut().zip(&ap).for_each(|(ri, api)| *ri -= alpha * api);
            let rr_new = dot(&r, &r);
            let beta = rr_new / rr;
            rr = rr_new;
            p.iter_mut().zip(&r).for_each(|(pi, ri)| *pi = ri + beta * *pi);
            iterations += 1;
        }
        // recompute the true residual; restart if the recursion drifted
        apply(&x, &mut ap);
        r.iter_mut().zip(b.iter().zip(&ap)).for_each(|(ri, (bi, ai))| *ri = bi - ai);
        let rel = norm(&r) / bnorm;
        if rel <= tol {
            return Ok(Solve { x, iterations, residual: rel });
        }
        if iterations >= max_iter {
            return Err(Error::NoConvergence { iterations, residual: rel });
        }
    }
    let rel = norm(&r) / bnorm;
    Err(Error::NoConvergence { iterations, residual: rel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_segment, build_torus};

    #[test]
    fn path_top_eigenvalue() {
        let op = build_segment(10).unwrap();
        let pair = extremal_eig(&op, 1e-12, 0).unwrap();
        let exact = 2.0 * (std::f64::consts::PI / 12.0).cos();
        assert!((pair.value - exact).abs() < 1e-10);
        assert!((pair.vector[0] - 1.0).abs() < 1e-15);
        assert!(pair.vector.iter().all(|&x| x > 0.0));
        for (k, x) in pair.vector.iter().enumerate() {
            let w = (std::f64::consts::PI * (k + 1) as f64 / 12.0).sin() / (std::f64::consts::PI / 12.0).sin();
            assert!((x - w).abs() < 1e-9);
        }
    }

    #[test]
    fn torus_top_is_constant() {
        let op = build_torus(2, 3).unwrap();
        let pair = extremal_eig(&op, 1e-12, 0).unwrap();
        assert!((pair.value - 4.0).abs() < 1e-12);
        assert!(pair.vector.iter().all(|x| (x - 1.0).abs() < 1e-10));
    }

    #[test]
    fn k2_solve() {
        let op = build_segment(1).unwrap();
        let s = shifted_solve(&op, 3.0, &[1.0, 0.0], 1e-14).unwrap();
        assert!((s.x[0] - 0.375).abs() < 1e-14 && (s.x[1] - 0.125).abs() < 1e-14);
    }

    #[test]
    fn solve_rejects_inside_spectrum() {
        let op = build_segment(5).unwrap();
        assert!(matches!(shifted_solve(&op, 1.5, &[1.0; 6], 1e-10), Err(Error::BelowSpectrum { .. })));
    }
}
