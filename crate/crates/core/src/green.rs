//! Green functions `⟨R_A(λ)δ_x, δ_y⟩` of ℤ, ℤ^d and ℕ.
//!
//! ℤ and ℕ have closed forms. ℤ² on the diagonal uses the complete
//! elliptic integral through the arithmetic-geometric mean. Other ℤ^d
//! queries go either through a periodic trapezoid rule over `d − 1`
//! frequencies (the last one is integrated in closed form) or through the
//! heat-kernel representation
//!
//! ```text
//! G(λ; k) = ∫₀^∞ e^{−(λ−2d)t} Π_j e^{−2t} I_{k_j}(2t) dt,
//! ```
//!
//! which stays valid at the edge `λ = 2d` for `d ≥ 3`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{invalid, Error, Extended, Result};
use crate::graph::{GraphModel, Site};
use crate::quad::{composite_nodes, gauss_legendre};

/// Evaluation route for ℤ^d Green functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenMethod {
    TorusQuadrature,
    Bessel,
    /// Closed forms where available, quadrature for `d ≤ 2`, Bessel otherwise.
    Auto,
}

/// Transience of the adjacency operator at the top of its spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recurrence {
    Transient,
    Recurrent,
}

fn sqrt_disc(lambda: f64) -> f64 {
    ((lambda - 2.0) * (lambda + 2.0)).sqrt()
}

/// `⟨R_{A_ℤ}(λ)δ_0, δ_k⟩ = r^{|k|}/√(λ²−4)`, `r = (λ − √(λ²−4))/2`.
pub fn green_z1(lambda: f64, k: i64) -> Result<f64> {
    if !(lambda > 2.0) {
        return Err(Error::BelowSpectrum { lambda, radius: 2.0 });
    }
    Ok(green_z1_unchecked(lambda, k))
}

fn green_z1_unchecked(lambda: f64, k: i64) -> f64 {
    let s = sqrt_disc(lambda);
    let t = (s / 2.0).asinh();
    (-(k.unsigned_abs() as f64) * t).exp() / s
}

/// `λ/(λ²−4)^{3/2}`, the diagonal of `R_{A_ℤ}(λ)²`.
fn moment2_z1(lambda: f64) -> f64 {
    let s2 = (lambda - 2.0) * (lambda + 2.0);
    lambda / (s2 * s2.sqrt())
}

/// `⟨R_{A_ℕ}(λ)δ_k, δ_l⟩` through the continued fraction
/// `Γ_0 = ∞`, `Γ_m = λ − 1/Γ_{m−1}`:
///
/// ```text
/// G(k, k+n) = 2 r^n / (λ − 2/Γ_k + √(λ²−4)).
/// ```
pub fn green_n(lambda: f64, k: u64, l: u64) -> Result<f64> {
    if !(lambda >= 2.0) {
        return Err(Error::BelowSpectrum { lambda, radius: 2.0 });
    }
    let (a, b) = (k.min(l), k.max(l));
    if lambda == 2.0 {
        return Ok((a + 1) as f64);
    }
    let mut inv_gamma = 0.0;
    for _ in 0..a {
        inv_gamma = 1.0 / (lambda - inv_gamma);
    }
    let s = sqrt_disc(lambda);
    let diag = 2.0 / (lambda - 2.0 * inv_gamma + s);
    let t = (s / 2.0).asinh();
    Ok(diag * (-((b - a) as f64) * t).exp())
}

/// Complete elliptic integrals `K(k)` and `E(k)` from the modulus and its
/// complement `k' = √(1−k²)`.
pub fn elliptic_ke(k: f64, kc: f64) -> (f64, f64) {
    let (mut a, mut b) = (1.0f64, kc);
    let mut sum = 0.5 * k * k;
    let mut pow = 0.5;
    for _ in 0..60 {
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
        if c.abs() < 1e-17 * a {
            break;
        }
    }
    let kk = PI / (2.0 * a);
    (kk, kk * (1.0 - sum))
}

fn green_z2_diag(lambda: f64) -> f64 {
    let k = 4.0 / lambda;
    let kc = ((lambda - 4.0) * (lambda + 4.0)).sqrt() / lambda;
    2.0 / (PI * lambda) * elliptic_ke(k, kc).0
}

fn moment2_z2(lambda: f64) -> f64 {
    let k = 4.0 / lambda;
    let kc2 = (lambda - 4.0) * (lambda + 4.0) / (lambda * lambda);
    let (kk, ee) = elliptic_ke(k, kc2.sqrt());
    let dk = ee / (k * kc2) - kk / k;
    2.0 / (PI * lambda * lambda) * kk + 2.0 / (PI * lambda) * dk * 4.0 / (lambda * lambda)
}

/// `(1/M^m) Σ_θ Π_j cos(k_j θ_j) g(2 Σ_j cos θ_j)` over the uniform grid,
/// doubling `M` until successive values agree to `rel`.
fn torus_trapezoid(ks: &[i64], g: &(dyn Fn(f64) -> f64 + Sync), rel: f64) -> Result<f64> {
    let m = ks.len();
    if m == 0 {
        return Ok(g(0.0));
    }
    let cap = match m {
        1 => 1 << 16,
        2 => 2048,
        _ => 256,
    };
    let mut nodes = 8usize;
    let mut prev = f64::NAN;
    loop {
        let cosines: Vec<f64> = (0..nodes).map(|i| 2.0 * (2.0 * PI * i as f64 / nodes as f64).cos()).collect();
        let phase = |j: usize, i: usize| {
            let idx = (ks[j].unsigned_abs() as usize * i) % nodes;
            cosines[idx] / 2.0
        };
        let inner_count = nodes.pow(m as u32 - 1);
        let partial: Vec<f64> = (0..nodes)
            .into_par_iter()
            .map(|i0| {
                let mut acc = 0.0;
                for rest in 0..inner_count {
                    let mut r = rest;
                    let mut shift = cosines[i0];
                    let mut ph = phase(0, i0);
                    for j in 1..m {
                        let i = r % nodes;
                        r /= nodes;
                        shift += cosines[i];
                        ph *= phase(j, i);
                    }
                    acc += ph * g(shift);
                }
                acc
            })
            .collect();
        let value = partial.iter().sum::<f64>() / (nodes as f64).powi(m as i32);
        if (value - prev).abs() <= rel * value.abs() + 1e-300 {
            return Ok(value);
        }
        if nodes >= cap {
            return Err(Error::NoConvergence { iterations: nodes, residual: (value - prev).abs() });
        }
        prev = value;
        nodes *= 2;
    }
}

/// Scaled modified Bessel functions `e^{−x} I_m(x)`, `m = 0..=nmax`, by
/// Miller's downward recurrence normalized with `I_0 + 2Σ I_m = e^x`.
pub fn bessel_i_scaled(x: f64, nmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let start = nmax + 20 + (80.0 * x).sqrt().ceil() as usize;
    let (mut above, mut b) = (0.0f64, 1.0f64);
    let mut sum = 0.0;
    for j in (1..=start).rev() {
        if j <= nmax {
            out[j] = b;
        }
        sum += b;
        let below = above + (2.0 * j as f64 / x) * b;
        above = b;
        b = below;
        if b > 1e250 {
            b *= 1e-250;
            above *= 1e-250;
            sum *= 1e-250;
            out.iter_mut().for_each(|v| *v *= 1e-250);
        }
    }
    out[0] = b;
    let norm = b + 2.0 * sum;
    out.iter_mut().for_each(|v| *v /= norm);
    out
}

/// Coefficients `c_s` of `e^{−2t} I_k(2t) ≈ (4πt)^{−1/2} Σ_s c_s t^{−s}`.
fn asymptotic_coeffs(k: i64) -> [f64; 5] {
    let mu = 4.0 * (k * k) as f64;
    let mut c = [0.0; 5];
    c[0] = 1.0;
    let mut term = 1.0;
    for s in 1..5 {
        let odd = (2 * s - 1) as f64;
        term *= (mu - odd * odd) / (8.0 * s as f64);
        // x = 2t, so x^{−s} = 2^{−s} t^{−s}
        c[s] = if s % 2 == 1 { -term } else { term } / 2f64.powi(s as i32);
    }
    c
}

/// Quadrature nodes for the heat-kernel integral with scaled Bessel values
/// tabulated up to order `kmax`.
struct HeatKernelTable {
    eps: f64,
    head_t: Vec<f64>,
    head_w: Vec<f64>,
    bessel: Vec<Vec<f64>>,
    tail_t: Vec<f64>,
    tail_w: Vec<f64>,
}

impl HeatKernelTable {
    /// `decay`: power `p` such that the tail integrand decays like `t^{−p}`
    /// without the exponential factor.
    fn new(kmax: usize, eps: f64, decay: f64) -> Result<Self> {
        let t0 = 1000.0 + 16.0 * (kmax * kmax) as f64;
        let mut head_end = t0;
        if eps > 0.0 {
            head_end = head_end.min(60.0 / eps + 1.0);
        }
        let first = (2.0 / eps.max(1.0)).min(0.5).min(head_end);
        let mut edges = vec![0.0, first];
        while *edges.last().unwrap() < head_end {
            let next = (edges.last().unwrap() * 2.0).min(head_end);
            edges.push(next);
        }
        let (head_t, head_w) = composite_nodes(&edges, 30);
        let bessel: Vec<Vec<f64>> = head_t.par_iter().map(|&t| bessel_i_scaled(2.0 * t, kmax)).collect();
        let (mut tail_t, mut tail_w) = (Vec::new(), Vec::new());
        if head_end >= t0 {
            let mut u_max = f64::INFINITY;
            if eps > 0.0 {
                u_max = (60.0 / (eps * t0)).max(1.0).ln() + 4.0;
            }
            if decay > 1.0 {
                u_max = u_max.min(45.0 / (decay - 1.0));
            }
            if !u_max.is_finite() {
                return invalid("heat-kernel integral diverges");
            }
            let u_max = u_max.min(400.0);
            let panels = u_max.ceil() as usize;
            let (gx, gw) = gauss_legendre(16);
            for p in 0..panels {
                for (x, w) in gx.iter().zip(&gw) {
                    let u = p as f64 + 0.5 + 0.5 * x;
                    let t = t0 * u.exp();
                    tail_t.push(t);
                    tail_w.push(0.5 * w * t);
                }
            }
        }
        Ok(HeatKernelTable { eps, head_t, head_w, bessel, tail_t, tail_w })
    }

    /// `∫₀^∞ t^{power} e^{−εt} Π_j e^{−2t} I_{k_j}(2t) dt`.
    fn integral(&self, ks: &[usize], power: i32) -> f64 {
        let mut head = 0.0;
        for (i, (&t, &w)) in self.head_t.iter().zip(&self.head_w).enumerate() {
            let row = &self.bessel[i];
            let prod: f64 = ks.iter().map(|&k| row[k]).product();
            head += w * prod * (-self.eps * t).exp() * t.powi(power);
        }
        if self.tail_t.is_empty() {
            return head;
        }
        let mut poly = [0.0; 5];
        poly[0] = 1.0;
        for &k in ks {
            let c = asymptotic_coeffs(k as i64);
            let mut next = [0.0; 5];
            for i in 0..5 {
                for j in 0..5 - i {
                    next[i + j] += poly[i] * c[j];
                }
            }
            poly = next;
        }
        let d = ks.len() as i32;
        let pref = (4.0 * PI).powf(-(d as f64) / 2.0);
        let mut tail = 0.0;
        for (&t, &w) in self.tail_t.iter().zip(&self.tail_w) {
            let inv = 1.0 / t;
            let series = poly.iter().rev().fold(0.0, |acc, c| acc * inv + c);
            tail += w * pref * t.powf(-(d as f64) / 2.0) * series * (-self.eps * t).exp() * t.powi(power);
        }
        head + tail
    }
}

fn check_lattice(lambda: f64, d: usize) -> Result<()> {
    if d == 0 {
        return invalid("lattice dimension must be at least 1");
    }
    let edge = 2.0 * d as f64;
    if !(lambda >= edge) {
        return Err(Error::BelowSpectrum { lambda, radius: edge });
    }
    Ok(())
}

/// `⟨R_{A_{ℤ^d}}(λ)δ_0, δ_k⟩`. At the edge `λ = 2d` the value is finite for
/// `d ≥ 3` and reported as [`Extended::Infinite`] for `d ≤ 2`.
pub fn green_zd(lambda: f64, k: &[i64], method: GreenMethod) -> Result<Extended> {
    let d = k.len();
    check_lattice(lambda, d)?;
    let eps = lambda - 2.0 * d as f64;
    if eps == 0.0 && d <= 2 {
        return Ok(Extended::Infinite);
    }
    let method = match method {
        GreenMethod::Auto if d <= 2 => GreenMethod::TorusQuadrature,
        GreenMethod::Auto => GreenMethod::Bessel,
        m => m,
    };
    let value = match method {
        GreenMethod::TorusQuadrature => {
            if eps == 0.0 {
                return Err(Error::Unsupported("torus quadrature at the spectral edge; use the Bessel method".into()));
            }
            if d == 1 {
                green_z1_unchecked(lambda, k[0])
            } else if d == 2 && k.iter().all(|&x| x == 0) {
                green_z2_diag(lambda)
            } else {
                let last = k[d - 1];
                torus_trapezoid(&k[..d - 1], &|s| green_z1_unchecked(lambda - s, last), 1e-13)?
            }
        }
        _ => {
            let ks: Vec<usize> = k.iter().map(|x| x.unsigned_abs() as usize).collect();
            let kmax = *ks.iter().max().unwrap();
            HeatKernelTable::new(kmax, eps, d as f64 / 2.0)?.integral(&ks, 0)
        }
    };
    Ok(Extended::Finite(value))
}

/// `⟨R_{A_{ℤ^d}}(λ)²δ_0, δ_0⟩ = −∂_λ G_d(λ)`. Infinite at the edge for `d ≤ 4`.
pub fn green_moment2(lambda: f64, d: usize) -> Result<Extended> {
    check_lattice(lambda, d)?;
    let eps = lambda - 2.0 * d as f64;
    if eps == 0.0 {
        if d <= 4 {
            return Ok(Extended::Infinite);
        }
        let ks = vec![0usize; d];
        return Ok(Extended::Finite(HeatKernelTable::new(0, 0.0, d as f64 / 2.0 - 1.0)?.integral(&ks, 1)));
    }
    Ok(Extended::Finite(match d {
        1 => moment2_z1(lambda),
        2 => moment2_z2(lambda),
        _ if eps < 0.05 => {
            let ks = vec![0usize; d];
            HeatKernelTable::new(0, eps, d as f64 / 2.0 - 1.0)?.integral(&ks, 1)
        }
        _ => torus_trapezoid(&vec![0; d - 1], &|s| moment2_z1(lambda - s), 1e-13)?,
    }))
}

/// Green function of an infinite non-comb catalog model between two sites.
pub fn green_lattice(model: &GraphModel, lambda: f64, x: &Site, y: &Site) -> Result<Extended> {
    match *model {
        GraphModel::HalfLineN => {
            let (a, b) = (x.base[0], y.base[0]);
            if a < 0 || b < 0 {
                return invalid("sites of ℕ are nonnegative");
            }
            Ok(Extended::Finite(green_n(lambda, a as u64, b as u64)?))
        }
        GraphModel::LineZ | GraphModel::LatticeZd(_) => {
            let d = model.lattice_dim().unwrap();
            if x.base.len() != d || y.base.len() != d {
                return invalid(format!("sites of {model} have {d} coordinates"));
            }
            let k: Vec<i64> = x.base.iter().zip(&y.base).map(|(a, b)| b - a).collect();
            green_zd(lambda, &k, GreenMethod::Auto)
        }
        other => invalid(format!("{other} has no lattice Green function")),
    }
}

/// Diagonal Green function at the top of the spectrum (`+∞` when recurrent).
pub fn edge_diagonal(model: &GraphModel) -> Result<Extended> {
    match *model {
        GraphModel::HalfLineN => Ok(Extended::Finite(green_n(2.0, 0, 0)?)),
        GraphModel::LineZ => green_zd(2.0, &[0], GreenMethod::Auto),
        GraphModel::LatticeZd(d) => green_zd(2.0 * d as f64, &vec![0; d], GreenMethod::Auto),
        other => invalid(format!("no edge diagonal for {other}")),
    }
}

/// Transience from edge values: a lattice or ℕ is transient iff its edge
/// diagonal is finite. For a comb `G ⊣ H`, if `G_H(‖A_H‖) ≥ 1/‖A_G‖` the
/// comb inherits the base's type, otherwise it is always transient.
pub fn classify_recurrence(model: &GraphModel) -> Result<Recurrence> {
    model.validate()?;
    if model.is_finite() {
        return invalid(format!("{model} is finite; transience concerns infinite graphs"));
    }
    let kind = |e: Extended| if e.is_infinite() { Recurrence::Recurrent } else { Recurrence::Transient };
    match model.comb_parts() {
        None => Ok(kind(edge_diagonal(model)?)),
        Some((base, fiber)) => {
            let base_norm = lattice_norm(&base);
            match edge_diagonal(&fiber)? {
                Extended::Finite(g) if g < 1.0 / base_norm => Ok(Recurrence::Transient),
                _ => Ok(kind(edge_diagonal(&base)?)),
            }
        }
    }
}

/// `‖A‖` of ℕ, ℤ and ℤ^d.
pub fn lattice_norm(model: &GraphModel) -> f64 {
    match *model {
        GraphModel::HalfLineN | GraphModel::LineZ => 2.0,
        GraphModel::LatticeZd(d) => 2.0 * d as f64,
        _ => f64::NAN,
    }
}

/// Caps on `n` for [`tauberian_partial_sums`].
pub const TAUBER_CAP_D3: usize = 40;
pub const TAUBER_CAP_D4: usize = 24;

/// Partial sums `S(n) = Σ_{‖k‖∞ ≤ n} (2 G_d(2d; k))²` for each requested `n`.
pub fn tauberian_series(d: usize, ns: &[usize]) -> Result<Vec<f64>> {
    let cap = match d {
        3 => TAUBER_CAP_D3,
        4 => TAUBER_CAP_D4,
        _ => return invalid("Tauberian sums are defined for d = 3 and d = 4"),
    };
    let nmax = ns.iter().copied().max().unwrap_or(0);
    if nmax > cap {
        return invalid(format!("n = {nmax} exceeds the cap {cap} for d = {d}"));
    }
    let table = HeatKernelTable::new(nmax, 0.0, d as f64 / 2.0)?;
    // nondecreasing index classes, each standing for all sign/permutation images
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut idx = vec![0usize; d];
    'outer: loop {
        classes.push(idx.clone());
        let mut j = d;
        loop {
            if j == 0 {
                break 'outer;
            }
            j -= 1;
            if idx[j] < nmax {
                idx[j] += 1;
                for i in j + 1..d {
                    idx[i] = idx[j];
                }
                break;
            }
        }
    }
    let terms: Vec<(usize, f64)> = classes
        .par_iter()
        .map(|ks| {
            let g = table.integral(ks, 0);
            let fact = |m: usize| (1..=m).product::<usize>() as f64;
            let mut perms = fact(d);
            let mut run = 1;
            for j in 1..=d {
                if j < d && ks[j] == ks[j - 1] {
                    run += 1;
                } else {
                    perms /= fact(run);
                    run = 1;
                }
            }
            let signs = 2f64.powi(ks.iter().filter(|&&k| k > 0).count() as i32);
            (*ks.last().unwrap(), perms * signs * 4.0 * g * g)
        })
        .collect();
    Ok(ns
        .iter()
        .map(|&n| terms.iter().filter(|t| t.0 <= n).map(|t| t.1).sum())
        .collect())
}

pub fn tauberian_partial_sums(d: usize, n: usize) -> Result<f64> {
    Ok(tauberian_series(d, &[n])?[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad_z1(lambda: f64, k: i64) -> f64 {
        let m = 4096;
        (0..m)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / m as f64;
                (k as f64 * th).cos() / (lambda - 2.0 * th.cos())
            })
            .sum::<f64>()
            / m as f64
    }

    #[test]
    fn z1_examples() {
        assert!((green_z1(2.5, 0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((green_z1(8f64.sqrt(), 0).unwrap() - 0.5).abs() < 1e-15);
        assert!((green_z1(10.0, 0).unwrap() - quad_z1(10.0, 0)).abs() < 1e-14);
        assert!((green_z1(2.3, 4).unwrap() - quad_z1(2.3, 4)).abs() < 1e-12);
        assert!(green_z1(2.0, 0).is_err());
    }

    #[test]
    fn half_line_edge_and_image_oracle() {
        assert_eq!(green_n(2.0, 3, 7).unwrap(), 4.0);
        assert_eq!(green_n(2.0, 0, 0).unwrap(), 1.0);
        assert!((green_n(2.5, 0, 0).unwrap() - 0.5).abs() < 1e-15);
        for &(k, l) in &[(0u64, 3u64), (4, 4), (7, 2), (20, 25)] {
            let lam = 2.2;
            let image = green_z1(lam, k as i64 - l as i64).unwrap() - green_z1(lam, (k + l + 2) as i64).unwrap();
            assert!((green_n(lam, k, l).unwrap() - image).abs() < 1e-13);
        }
    }

    #[test]
    fn bessel_values() {
        // e^{-1} I_0(1), e^{-1} I_1(1), e^{-10} I_3(10)
        let v = bessel_i_scaled(1.0, 3);
        assert!((v[0] - 0.46575960759364043).abs() < 1e-15);
        assert!((v[1] - 0.2079104153497085).abs() < 1e-15);
        let v = bessel_i_scaled(10.0, 3);
        assert!((v[3] - 0.07983036102984051).abs() < 1e-14);
    }

    #[test]
    fn watson_value_and_neighbor() {
        let g = green_zd(6.0, &[0, 0, 0], GreenMethod::Bessel).unwrap().finite().unwrap();
        assert!((g - 0.25273100985866326).abs() < 1e-10, "{g}");
        let g1 = green_zd(6.0, &[1, 0, 0], GreenMethod::Bessel).unwrap().finite().unwrap();
        assert!((g1 - 0.0860643431919963).abs() < 1e-10, "{g1}");
        // harmonic at the edge: 6 G(0) − 6 G(e1) = 1
        assert!((6.0 * g - 6.0 * g1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn recurrent_edges_are_infinite() {
        assert!(green_zd(4.0, &[0, 0], GreenMethod::Auto).unwrap().is_infinite());
        assert!(green_zd(2.0, &[3], GreenMethod::Auto).unwrap().is_infinite());
        assert!(green_zd(3.9, &[0, 0], GreenMethod::Auto).is_err());
    }

    #[test]
    fn z2_closed_form_matches_quadrature() {
        for &lam in &[4.05, 4.5, 7.0] {
            let q = torus_trapezoid(&[0], &|s| green_z1_unchecked(lam - s, 0), 1e-14).unwrap();
            assert!((green_z2_diag(lam) - q).abs() < 1e-12 * q);
            let m = torus_trapezoid(&[0], &|s| moment2_z1(lam - s), 1e-14).unwrap();
            assert!((moment2_z2(lam) - m).abs() < 1e-10 * m, "{lam}: {} vs {m}", moment2_z2(lam));
        }
    }

    #[test]
    fn moment2_examples() {
        let m = green_moment2(2.5, 1).unwrap().finite().unwrap();
        assert!((m - 2.5 / 2.25f64.powf(1.5)).abs() < 1e-14);
        for d in 1..=4 {
            let m = green_moment2(100.0, d).unwrap().finite().unwrap();
            assert!((m * 1e4 - 1.0).abs() < 0.01);
        }
        assert!(green_moment2(8.0, 4).unwrap().is_infinite());
    }

    #[test]
    fn classification() {
        use GraphModel::*;
        let t = Recurrence::Transient;
        let r = Recurrence::Recurrent;
        assert_eq!(classify_recurrence(&HalfLineN).unwrap(), t);
        assert_eq!(classify_recurrence(&LineZ).unwrap(), r);
        assert_eq!(classify_recurrence(&LatticeZd(2)).unwrap(), r);
        assert_eq!(classify_recurrence(&LatticeZd(3)).unwrap(), t);
        assert_eq!(classify_recurrence(&NComb(2)).unwrap(), t);
        assert_eq!(classify_recurrence(&NComb(3)).unwrap(), t);
        assert_eq!(classify_recurrence(&ZComb(1)).unwrap(), r);
        assert_eq!(classify_recurrence(&ZComb(2)).unwrap(), r);
        assert_eq!(classify_recurrence(&ZComb(3)).unwrap(), t);
    }

    #[test]
    fn tauberian_origin_term() {
        let s0 = tauberian_partial_sums(3, 0).unwrap();
        let g = 0.25273100985866326;
        assert!((s0 - 4.0 * g * g).abs() < 1e-9);
    }
}
