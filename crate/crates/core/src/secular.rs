//! Comb norms from the secular equation `‖A_G‖·G_H(λ) = 1`, hidden-spectrum
//! reports, the comb resolvent and a dense Krein-formula oracle.

use crate::error::{invalid, Error, Extended, Result};
use crate::graph::{Exhaustion, GraphModel, Site, SparseOperator};
use crate::green::{green_lattice, green_zd, lattice_norm, GreenMethod};
use crate::linalg::{sym_eig, Lu, DENSE_CAP};
use crate::quad::bisect_monotone;
use crate::spectral::model_top;

/// Data of the secular equation of a comb `G ⊣ (H, o)`.
pub struct SecularProblem<'a> {
    pub base_norm: f64,
    pub fiber_norm: f64,
    /// `λ ↦ ⟨R_{A_H}(λ)δ_o, δ_o⟩` for `λ ≥ ‖A_H‖`.
    pub fiber_green_diag: Box<dyn Fn(f64) -> Result<Extended> + Send + Sync + 'a>,
}

impl SecularProblem<'static> {
    pub fn for_model(model: &GraphModel) -> Result<Self> {
        let (base, fiber) = model
            .comb_parts()
            .ok_or_else(|| Error::Invalid(format!("{model} is not a comb model")))?;
        let d = fiber.lattice_dim().unwrap();
        Ok(SecularProblem {
            base_norm: lattice_norm(&base),
            fiber_norm: lattice_norm(&fiber),
            fiber_green_diag: Box::new(move |l| green_zd(l, &vec![0; d], GreenMethod::Auto)),
        })
    }
}

/// Root of `‖A_G‖·G_H(λ) = 1` above `‖A_H‖`, or `‖A_H‖` when the fiber's
/// edge diagonal does not exceed `1/‖A_G‖`.
pub fn comb_norm(p: &SecularProblem, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return invalid("tolerance must be positive");
    }
    let edge = (p.fiber_green_diag)(p.fiber_norm)?;
    match edge {
        Extended::Finite(g) if g * p.base_norm <= 1.0 => return Ok(p.fiber_norm),
        _ => {}
    }
    let secular = |l: f64| -> f64 {
        match (p.fiber_green_diag)(l) {
            Ok(Extended::Finite(g)) => g * p.base_norm - 1.0,
            _ => f64::INFINITY,
        }
    };
    let lo = p.fiber_norm;
    let mut hi = p.fiber_norm + 1.0;
    while secular(hi) >= 0.0 {
        hi = lo + 2.0 * (hi - lo);
        if hi > 1e12 {
            return Err(Error::NoConvergence { iterations: 40, residual: secular(hi) });
        }
    }
    Ok(bisect_monotone(lo, hi, false, tol, secular))
}

/// Norm of the adjacency of an infinite catalog model; finite models return
/// their top eigenvalue.
pub fn model_norm(model: &GraphModel) -> Result<f64> {
    model.validate()?;
    match *model {
        GraphModel::NComb(_) | GraphModel::ZComb(_) => comb_norm(&SecularProblem::for_model(model)?, 1e-15),
        GraphModel::HalfLineN | GraphModel::LineZ | GraphModel::LatticeZd(_) => Ok(lattice_norm(model)),
        GraphModel::SegmentN(_) | GraphModel::TorusZd { .. } => model_top(&Exhaustion::new(*model, 0)?),
    }
}

/// Gap between a comb's norm and the norm of its disjoint fiber copies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HiddenSpectrumReport {
    pub comb_norm: f64,
    pub base_disjoint_norm: f64,
    pub gap: f64,
    pub present: bool,
}

pub fn hidden_spectrum(model: &GraphModel, tol: f64) -> Result<HiddenSpectrumReport> {
    let p = SecularProblem::for_model(model)?;
    let norm = comb_norm(&p, 1e-15)?;
    let gap = (norm - p.fiber_norm).max(0.0);
    Ok(HiddenSpectrumReport { comb_norm: norm, base_disjoint_norm: p.fiber_norm, gap, present: gap > tol })
}

/// `⟨R_{A_{G⊣H}}(λ)δ_{(g,h)}, δ_{(g',h')}⟩` from base and fiber Green
/// functions, with `μ = 1/G_H(λ; o, o)`:
///
/// ```text
/// δ_{gg'} G_H(λ; h, h') + μ (μ G_G(μ; g, g') − δ_{gg'}) G_H(λ; h, o) G_H(λ; o, h')
/// ```
///
/// `λ` may equal the comb norm, where the value is finite for transient
/// bases.
pub fn comb_resolvent_element(model: &GraphModel, lambda: f64, x: &Site, y: &Site, tol: f64) -> Result<f64> {
    let (base, fiber) = model
        .comb_parts()
        .ok_or_else(|| Error::Invalid(format!("{model} is not a comb model")))?;
    let norm = comb_norm(&SecularProblem::for_model(model)?, tol.min(1e-12))?;
    if lambda < norm * (1.0 - 1e-12) {
        return Err(Error::BelowSpectrum { lambda, radius: norm });
    }
    let lambda = lambda.max(norm);
    let root = Site::root(&fiber);
    let fx = Site::point(&x.fiber);
    let fy = Site::point(&y.fiber);
    let bx = Site::point(&x.base);
    let by = Site::point(&y.base);
    let fg = |a: &Site, b: &Site| green_lattice(&fiber, lambda, a, b).and_then(|e| e.require("fiber Green function"));
    let g_oo = fg(&root, &root)?;
    let base_norm = lattice_norm(&base);
    let mut mu = 1.0 / g_oo;
    // at the comb norm μ sits on the base edge up to the bisection error
    if (mu - base_norm).abs() <= 1e-9 * base_norm {
        mu = base_norm;
    }
    let same = x.base == y.base;
    let direct = if same { fg(&fx, &fy)? } else { 0.0 };
    let gb = green_lattice(&base, mu, &bx, &by)?.require("base Green function")?;
    let base_factor = mu * (mu * gb - if same { 1.0 } else { 0.0 });
    Ok(direct + base_factor * fg(&fx, &root)? * fg(&root, &fy)?)
}

/// `R_{A_X + D}(λ)` as a row-major dense matrix, assembled from `R_{A_X}(λ)`
/// by the Krein formula on the range of `D`. Requires `λ > ‖A_X‖ + ‖D‖`.
pub fn krein_resolvent_finite(ax: &SparseOperator, d: &SparseOperator, lambda: f64) -> Result<Vec<f64>> {
    let n = ax.dim();
    if d.dim() != n {
        return invalid("perturbation and operator dimensions differ");
    }
    if n > DENSE_CAP {
        return Err(Error::TooLarge { dim: n, cap: DENSE_CAP });
    }
    let ax_eig = sym_eig(&ax.to_dense(), n, false)?;
    let d_eig = sym_eig(&d.to_dense(), n, true)?;
    let spr = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let bound = spr(&ax_eig.values) + spr(&d_eig.values);
    if !(lambda > bound) {
        return Err(Error::BelowSpectrum { lambda, radius: bound });
    }
    let mut shifted: Vec<f64> = ax.to_dense().iter().map(|x| -x).collect();
    for i in 0..n {
        shifted[i * n + i] += lambda;
    }
    let rx = Lu::new(&shifted, n)?.inverse();
    let dmax = spr(&d_eig.values);
    let range: Vec<usize> = (0..n).filter(|&j| d_eig.values[j].abs() > 1e-12 * dmax.max(1.0)).collect();
    let r = range.len();
    if r == 0 {
        return Ok(rx);
    }
    // U: n×r range basis, Λ: its eigenvalues
    let vecs = d_eig.vectors.as_ref().unwrap();
    let u: Vec<f64> = (0..n).flat_map(|i| range.iter().map(move |&j| vecs[i * n + j])).collect();
    let lam: Vec<f64> = range.iter().map(|&j| d_eig.values[j]).collect();
    // RU = R_X U (n×r)
    let mut ru = vec![0.0; n * r];
    for i in 0..n {
        for k in 0..n {
            let rik = rx[i * n + k];
            for c in 0..r {
                ru[i * r + c] += rik * u[k * r + c];
            }
        }
    }
    // M = I − Λ Uᵀ R_X U on the range of D, i.e. P − S(λ)
    let mut m = vec![0.0; r * r];
    for a in 0..r {
        for b in 0..r {
            let s: f64 = (0..n).map(|i| u[i * r + a] * ru[i * r + b]).sum();
            m[a * r + b] = if a == b { 1.0 } else { 0.0 } - lam[a] * s;
        }
    }
    let lu = Lu::new(&m, r)?;
    let cond = lu.condition();
    if !(cond < 1e14) {
        return Err(Error::Singular(cond));
    }
    let minv = lu.inverse();
    // W = M⁻¹ Λ, then R_Y = R_X + RU W RUᵀ (R_X symmetric)
    let mut w = vec![0.0; r * r];
    for a in 0..r {
        for b in 0..r {
            w[a * r + b] = minv[a * r + b] * lam[b];
        }
    }
    let mut ruw = vec![0.0; n * r];
    for i in 0..n {
        for a in 0..r {
            let x = ru[i * r + a];
            for b in 0..r {
                ruw[i * r + b] += x * w[a * r + b];
            }
        }
    }
    let mut out = rx;
    for i in 0..n {
        for j in 0..n {
            let s: f64 = (0..r).map(|b| ruw[i * r + b] * ru[j * r + b]).sum();
            out[i * n + j] += s;
        }
    }
    Ok(out)
}
