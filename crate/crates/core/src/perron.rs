//! Perron–Frobenius weights of the infinite catalog models, their
//! truncated norms on the exhaustion, finite-volume PF norms and the
//! geometric / PF dimension fits.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::graph::{Exhaustion, GraphModel, Site};
use crate::green::{green_moment2, green_zd, GreenMethod};
use crate::secular::model_norm;
use crate::spectral::torus::{cycle_green_point, CyclePoint, TorusFiber};
use crate::spectral::model_top;

fn unsupported_ncomb(d: usize) -> Error {
    Error::Unsupported(format!(
        "PF weight of NComb({d}): without hidden spectrum the fiber integral needs the regularized kernel, not implemented"
    ))
}

/// `r = √(d²+1) − d`, the decay rate of the ℤ^d ⊣ ℤ weight along fibers.
pub fn zcomb_decay(d: usize) -> f64 {
    let d = d as f64;
    1.0 / ((d * d + 1.0).sqrt() + d)
}

/// PF weight normalized to 1 at the root.
///
/// ℕ: `k + 1`. ℤ^d: 1. ℤ^d ⊣ ℤ: `r^{|m|}`. ℕ ⊣ ℤ^d (`d ≤ 2`):
/// `(j+1)·2G_d(‖A‖; k)`, which equals 1 at the root by the secular equation.
pub fn pf_weight(model: &GraphModel, site: &Site) -> Result<f64> {
    model.neighbors(site)?;
    match *model {
        GraphModel::HalfLineN => Ok((site.base[0] + 1) as f64),
        GraphModel::LineZ | GraphModel::LatticeZd(_) => Ok(1.0),
        GraphModel::ZComb(d) => Ok(zcomb_decay(d).powi(site.fiber[0].unsigned_abs() as i32)),
        GraphModel::NComb(d) if d <= 2 => {
            let norm = model_norm(model)?;
            let g = green_zd(norm, &site.fiber, GreenMethod::Auto)?.require("fiber Green function")?;
            Ok((site.base[0] + 1) as f64 * 2.0 * g)
        }
        GraphModel::NComb(d) => Err(unsupported_ncomb(d)),
        _ => invalid(format!("{model} is finite; PF weights are defined on infinite models")),
    }
}

/// `Σ_{‖k‖∞ ≤ n} (2 G_2(λ; k))²` over the square of radius `n`, `λ > 4`.
fn square_fiber_sum(lambda: f64, n: usize) -> Result<f64> {
    // the summand decays like e^{−2t|k|} with 2cosh t = λ − 2
    let t = (((lambda - 4.0) * lambda).sqrt() / 2.0).asinh();
    let saturate = (45.0 / t).ceil() as usize;
    if n >= saturate {
        return Ok(4.0 * green_moment2(lambda, 2)?.require("second moment")?);
    }
    let m = 2 * n + (150.0 / t).ceil() as usize + 64;
    let nodes: Vec<(f64, f64, f64)> = (0..m)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / m as f64;
            let mu = lambda - 2.0 * th.cos();
            let s = ((mu - 2.0) * (mu + 2.0)).sqrt();
            (th, (-(s / 2.0).asinh()).exp(), s)
        })
        .collect();
    let mut total = 0.0;
    for k2 in 0..=n {
        for k1 in 0..=n {
            let g: f64 = nodes
                .iter()
                .map(|&(th, r, s)| (k1 as f64 * th).cos() * r.powi(k2 as i32) / s)
                .sum::<f64>()
                / m as f64;
            let mult = if k1 > 0 { 2.0 } else { 1.0 } * if k2 > 0 { 2.0 } else { 1.0 };
            total += mult * 4.0 * g * g;
        }
    }
    Ok(total)
}

/// `‖v↾Λ_n‖² = Σ_{x∈Λ_n} v(x)²`.
pub fn pf_partial_norm(model: &GraphModel, n: usize) -> Result<f64> {
    model.validate()?;
    let nf = n as f64;
    let side = 2.0 * nf + 1.0;
    let squares = (nf + 1.0) * (nf + 2.0) * (2.0 * nf + 3.0) / 6.0;
    match *model {
        GraphModel::HalfLineN => Ok(squares),
        GraphModel::LineZ => Ok(side),
        GraphModel::LatticeZd(d) => Ok(side.powi(d as i32)),
        GraphModel::ZComb(d) => {
            let r2 = zcomb_decay(d).powi(2);
            let fiber = 1.0 + 2.0 * r2 * (1.0 - r2.powi(n as i32)) / (1.0 - r2);
            Ok(side.powi(d as i32) * fiber)
        }
        GraphModel::NComb(1) => {
            let lambda = model_norm(model)?;
            let s = ((lambda - 2.0) * (lambda + 2.0)).sqrt();
            let r2 = (-2.0 * (s / 2.0).asinh()).exp();
            let fiber = 4.0 / (s * s) * (1.0 + 2.0 * r2 * (1.0 - r2.powi(n as i32)) / (1.0 - r2));
            Ok(squares * fiber)
        }
        GraphModel::NComb(2) => Ok(squares * square_fiber_sum(model_norm(model)?, n)?),
        GraphModel::NComb(d) => Err(unsupported_ncomb(d)),
        _ => invalid(format!("{model} is finite; truncated PF norms need an infinite model")),
    }
}

/// `‖u‖²` for `u = R_T(L)δ_o / G_T(L)`, the root-normalized fiber profile.
fn fiber_profile_norm(tf: &TorusFiber, lambda: f64) -> f64 {
    let (g, dg) = tf.green_with_deriv(lambda);
    -dg / (g * g)
}

/// `‖v_n‖²` of the PF eigenvector of `A_{Λ_n}` normalized to 1 at the root.
pub fn pf_finite_norm(model: &GraphModel, n: usize) -> Result<f64> {
    let ex = Exhaustion::new(*model, n)?;
    let side = (2 * n + 1) as f64;
    let path_norm = |m: usize| {
        let s = (PI / (m + 2) as f64).sin();
        ((m + 2) as f64 / 2.0) / (s * s)
    };
    match *model {
        GraphModel::HalfLineN => Ok(path_norm(n)),
        GraphModel::SegmentN(m) => Ok(path_norm(m)),
        GraphModel::LineZ => Ok(side),
        GraphModel::LatticeZd(d) => Ok(side.powi(d as i32)),
        GraphModel::TorusZd { d, n } => Ok(((2 * n + 1) as f64).powi(d as i32)),
        GraphModel::NComb(d) => {
            let tf = TorusFiber::new(d, n)?;
            Ok(path_norm(n) * fiber_profile_norm(&tf, model_top(&ex)?))
        }
        GraphModel::ZComb(d) => {
            let len = 2 * n + 1;
            let (g, dg) = cycle_green_point(len, CyclePoint::of(model_top(&ex)?));
            Ok(side.powi(d as i32) * (-dg / (g * g)))
        }
    }
}

/// Finite-volume PF eigenvector on `Λ_n`, normalized to 1 at the root, in
/// the exhaustion's vertex order.
pub fn pf_finite_vector(model: &GraphModel, n: usize) -> Result<Vec<f64>> {
    let ex = Exhaustion::new(*model, n)?;
    let path = |m: usize| -> Vec<f64> {
        let l = (m + 2) as f64;
        (0..=m).map(|k| (PI * (k + 1) as f64 / l).sin() / (PI / l).sin()).collect()
    };
    let outer = |base: Vec<f64>, fiber: Vec<f64>| -> Vec<f64> {
        base.iter().flat_map(|b| fiber.iter().map(move |f| b * f)).collect()
    };
    let fiber_profile = |d: usize, lambda: f64| -> Result<Vec<f64>> {
        let tf = TorusFiber::new(d, n)?;
        let g0 = tf.green(lambda);
        Ok((0..tf.size())
            .map(|i| tf.green_at(lambda, &crate::graph::torus_coords(i, d, n)) / g0)
            .collect())
    };
    match *model {
        GraphModel::HalfLineN => Ok(path(n)),
        GraphModel::SegmentN(m) => Ok(path(m)),
        GraphModel::LineZ | GraphModel::LatticeZd(_) | GraphModel::TorusZd { .. } => Ok(vec![1.0; ex.vertex_count()]),
        GraphModel::NComb(d) => Ok(outer(path(n), fiber_profile(d, model_top(&ex)?)?)),
        GraphModel::ZComb(d) => {
            let base = vec![1.0; (2 * n + 1).pow(d as u32)];
            Ok(outer(base, fiber_profile(1, model_top(&ex)?)?))
        }
    }
}

/// `‖v↾Λ_n‖² / ‖v_n‖²`, which tends to `2π²/3` on ℕ and ℕ ⊣ ℤ^d (`d ≤ 2`).
pub fn pf_finite_ratio(model: &GraphModel, n: usize) -> Result<f64> {
    match *model {
        GraphModel::HalfLineN | GraphModel::NComb(1) | GraphModel::NComb(2) => {
            Ok(pf_partial_norm(model, n)? / pf_finite_norm(model, n)?)
        }
        _ => Err(Error::Unsupported(format!("PF norm ratio is studied on N and NComb(1|2), not {model}"))),
    }
}

/// Log–log growth exponents of `|Λ_n|` and `‖v↾Λ_n‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate {
    pub d_g: f64,
    pub d_pf: f64,
    pub fit_range: (usize, usize),
    /// Largest RMS residual of the two fits in log space.
    pub fit_residual: f64,
    /// False when the residual exceeds 0.05.
    pub reliable: bool,
}

fn fit_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - my - slope * (a - mx)).powi(2))
        .sum();
    (slope, (rss / m).sqrt())
}

/// Geometric and PF dimensions by least squares over `ns` (at least five
/// values).
pub fn estimate_dimensions(model: &GraphModel, ns: &[usize]) -> Result<DimensionEstimate> {
    if ns.len() < 5 {
        return invalid("dimension fits need at least five values of n");
    }
    if ns.contains(&0) {
        return invalid("n must be positive");
    }
    let logn: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let logv: Vec<f64> = ns
        .iter()
        .map(|&n| Ok((Exhaustion::new(*model, n)?.vertex_count() as f64).ln()))
        .collect::<Result<_>>()?;
    let logw: Vec<f64> = ns
        .iter()
        .map(|&n| Ok(pf_partial_norm(model, n)?.ln()))
        .collect::<Result<_>>()?;
    let (d_g, rg) = fit_slope(&logn, &logv);
    let (d_pf, rp) = fit_slope(&logn, &logw);
    let fit_residual = rg.max(rp);
    Ok(DimensionEstimate {
        d_g,
        d_pf,
        fit_range: (*ns.iter().min().unwrap(), *ns.iter().max().unwrap()),
        fit_residual,
        reliable: fit_residual <= 0.05,
    })
}

/// `‖A_∞‖ − ‖A_{Λ_n}‖`.
pub fn finite_gap(model: &GraphModel, n: usize) -> Result<f64> {
    let ex = Exhaustion::new(*model, n)?;
    Ok(model_norm(model)? - model_top(&ex)?)
}
