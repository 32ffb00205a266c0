//! Small dense linear algebra: symmetric eigensolver (Householder
//! tridiagonalization followed by implicit-shift QL) and LU with partial
//! pivoting.

use crate::error::{invalid, Error, Result};

/// Dense symmetric eigensolver size cap.
pub const DENSE_CAP: usize = 4000;

/// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub n: usize,
    pub values: Vec<f64>,
    /// Row-major `n×n`; column `j` is the eigenvector of `values[j]`.
    pub vectors: Option<Vec<f64>>,
}

impl SymEig {
    pub fn vector(&self, j: usize) -> Option<Vec<f64>> {
        let v = self.vectors.as_ref()?;
        Some((0..self.n).map(|i| v[i * self.n + j]).collect())
    }
}

/// Eigenvalues (and optionally eigenvectors) of the row-major symmetric `a`.
pub fn sym_eig(a: &[f64], n: usize, want_vectors: bool) -> Result<SymEig> {
    if a.len() != n * n {
        return invalid("matrix size does not match dimension");
    }
    if n > DENSE_CAP {
        return Err(Error::TooLarge { dim: n, cap: DENSE_CAP });
    }
    if n == 0 {
        return Ok(SymEig { n, values: vec![], vectors: want_vectors.then(Vec::new) });
    }
    let mut v = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, n, &mut d, &mut e);
    tql2(&mut v, n, &mut d, &mut e, want_vectors)?;
    Ok(SymEig { n, values: d, vectors: want_vectors.then_some(v) })
}

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off[i]` couples `i` and `i+1`).
pub fn tridiag_eig(diag: &[f64], off: &[f64], want_vectors: bool) -> Result<SymEig> {
    let n = diag.len();
    if n == 0 {
        return Ok(SymEig { n, values: vec![], vectors: want_vectors.then(Vec::new) });
    }
    if off.len() + 1 != n {
        return invalid("off-diagonal length must be one less than the diagonal");
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[1..].copy_from_slice(off);
    let mut v = if want_vectors {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        id
    } else {
        Vec::new()
    };
    tql2(&mut v, n, &mut d, &mut e, want_vectors)?;
    Ok(SymEig { n, values: d, vectors: want_vectors.then_some(v) })
}

fn tred2(v: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    let at = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

fn tql2(v: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64], vectors: bool) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::NoConvergence { iterations: iter, residual: e[l].abs() });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if vectors {
                        for k in 0..n {
                            let hk = v[k * n + i + 1];
                            v[k * n + i + 1] = s * v[k * n + i] + c * hk;
                            v[k * n + i] = c * v[k * n + i] - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    // selection sort, ascending
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            if vectors {
                for r in 0..n {
                    v.swap(r * n + i, r * n + k);
                }
            }
        }
    }
    Ok(())
}

/// LU factorization with partial pivoting of a row-major square matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    norm1: f64,
}

impl Lu {
    pub fn new(a: &[f64], n: usize) -> Result<Lu> {
        if a.len() != n * n {
            return invalid("matrix size does not match dimension");
        }
        let norm1 = (0..n)
            .map(|j| (0..n).map(|i| a[i * n + j].abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 {
                return Err(Error::Singular(f64::INFINITY));
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                if factor != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= factor * lu[k * n + j];
                    }
                }
            }
        }
        Ok(Lu { n, lu, perm, norm1 })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }

    /// Row-major inverse.
    pub fn inverse(&self) -> Vec<f64> {
        let n = self.n;
        let mut inv = vec![0.0; n * n];
        let mut unit = vec![0.0; n];
        for j in 0..n {
            unit.iter_mut().for_each(|u| *u = 0.0);
            unit[j] = 1.0;
            let col = self.solve(&unit);
            for i in 0..n {
                inv[i * n + j] = col[i];
            }
        }
        inv
    }

    /// One-norm condition number computed from the explicit inverse.
    pub fn condition(&self) -> f64 {
        let n = self.n;
        let inv = self.inverse();
        let inv_norm = (0..n)
            .map(|j| (0..n).map(|i| inv[i * n + j].abs()).sum::<f64>())
            .fold(0.0, f64::max);
        self.norm1 * inv_norm
    }
}

/// Row-major product of `n×k` and `k×m` matrices.
pub fn matmul(a: &[f64], b: &[f64], n: usize, k: usize, m: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * m];
    for i in 0..n {
        for l in 0..k {
            let x = a[i * k + l];
            if x != 0.0 {
                for j in 0..m {
                    c[i * m + j] += x * b[l * m + j];
                }
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_spectrum() {
        let n = 7;
        let mut a = vec![0.0; n * n];
        for i in 0..n - 1 {
            a[i * n + i + 1] = 1.0;
            a[(i + 1) * n + i] = 1.0;
        }
        let eig = sym_eig(&a, n, true).unwrap();
        for (j, &lam) in eig.values.iter().enumerate() {
            let exact = 2.0 * (std::f64::consts::PI * (n - j) as f64 / (n + 1) as f64).cos();
            assert!((lam - exact).abs() < 1e-13);
            let v = eig.vector(j).unwrap();
            let av = matmul(&a, &v, n, n, 1);
            for i in 0..n {
                assert!((av[i] - lam * v[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let diag = [1.0, -2.0, 0.5, 3.0];
        let off = [0.3, 1.1, -0.7];
        let mut a = vec![0.0; 16];
        for i in 0..4 {
            a[i * 4 + i] = diag[i];
        }
        for i in 0..3 {
            a[i * 4 + i + 1] = off[i];
            a[(i + 1) * 4 + i] = off[i];
        }
        let t = tridiag_eig(&diag, &off, false).unwrap();
        let dn = sym_eig(&a, 4, false).unwrap();
        for (x, y) in t.values.iter().zip(&dn.values) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn lu_solves() {
        let a = [4.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0];
        let lu = Lu::new(&a, 3).unwrap();
        let x = lu.solve(&[1.0, 2.0, 3.0]);
        let b = matmul(&a, &x, 3, 3, 1);
        for (bi, ei) in b.iter().zip([1.0, 2.0, 3.0]) {
            assert!((bi - ei).abs() < 1e-14);
        }
        assert!(Lu::new(&[1.0, 2.0, 2.0, 4.0], 2).is_err());
    }
}
