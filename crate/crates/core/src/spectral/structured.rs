//! Full finite-volume spectra with multiplicities: closed forms for paths
//! and tori, per-base-mode rank-one problems for combs, and the dense
//! oracle.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::torus::{torus_eigenvalues, FiberMode, TorusFiber};
use crate::error::{invalid, Error, Result};
use crate::graph::{Exhaustion, GraphModel, SparseOperator};
use crate::linalg::{sym_eig, SymEig, DENSE_CAP};

/// Eigenvalues with multiplicities, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumStructured {
    pub entries: Vec<(f64, usize)>,
}

impl SpectrumStructured {
    /// Sorts and merges bit-identical values.
    pub fn from_entries(mut entries: Vec<(f64, usize)>) -> Self {
        entries.retain(|e| e.1 > 0);
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, usize)> = Vec::with_capacity(entries.len());
        for (v, m) in entries {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += m,
                _ => out.push((v, m)),
            }
        }
        SpectrumStructured { entries: out }
    }

    pub fn from_values(values: &[f64]) -> Self {
        Self::from_entries(values.iter().map(|&v| (v, 1)).collect())
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn max(&self) -> f64 {
        self.entries.last().map_or(f64::NAN, |e| e.0)
    }

    pub fn min(&self) -> f64 {
        self.entries.first().map_or(f64::NAN, |e| e.0)
    }

    /// Every eigenvalue repeated by multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m))
            .collect()
    }

    /// `Σ m·f(λ)`, summed in ascending order.
    pub fn sum_with(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.entries.iter().map(|&(v, m)| m as f64 * f(v)).sum()
    }
}

/// Eigenvalues `2cos(πm/(n+2))`, `m = 1..=n+1`, of the path `S_n`, ascending.
pub fn path_eigenvalues(n: usize) -> Vec<f64> {
    (1..=n + 1).rev().map(|m| path_eigenvalue(n, m)).collect()
}

/// `2cos(πm/(n+2))`, with the middle mode set to exactly 0.
pub fn path_eigenvalue(n: usize, m: usize) -> f64 {
    if 2 * m == n + 2 {
        0.0
    } else {
        2.0 * (PI * m as f64 / (n + 2) as f64).cos()
    }
}

/// Normalized eigenvector component `√(2/(n+2))·sin(πm(k+1)/(n+2))`.
pub fn path_eigenvector(n: usize, m: usize, k: usize) -> f64 {
    let l = (n + 2) as f64;
    (2.0 / l).sqrt() * (PI * (m * (k + 1)) as f64 / l).sin()
}

/// Spectrum of the comb `G ⊣ T^d_{2n+1}` from the distinct base eigenvalues
/// (with multiplicities). `fiber` must be a torus model.
pub fn comb_spectrum_structured(base: &[(f64, usize)], fiber: &GraphModel) -> Result<SpectrumStructured> {
    let (d, n) = match *fiber {
        GraphModel::TorusZd { d, n } => (d, n),
        other => return invalid(format!("structured comb spectra need a torus fiber, got {other}")),
    };
    let tf = TorusFiber::new(d, n)?;
    Ok(comb_spectrum_with(base, &tf))
}

pub(crate) fn comb_spectrum_with(base: &[(f64, usize)], tf: &TorusFiber) -> SpectrumStructured {
    let parts: Vec<Vec<(f64, usize)>> = base
        .par_iter()
        .map(|&(a, bm)| {
            tf.rank_one_modes(snap(a))
                .into_iter()
                .map(|m| (m.value, m.mult * bm))
                .collect()
        })
        .collect();
    SpectrumStructured::from_entries(parts.into_iter().flatten().collect())
}

/// Per-base-mode fiber eigenspaces of a comb, used for spectral sums that
/// need the weight of the fiber root.
pub(crate) fn comb_modes(base: &[f64], tf: &TorusFiber) -> Vec<Vec<FiberMode>> {
    base.par_iter().map(|&a| tf.rank_one_modes(snap(a))).collect()
}

fn snap(a: f64) -> f64 {
    if a.abs() < 1e-12 {
        0.0
    } else {
        a
    }
}

/// Finite-volume spectrum of an exhaustion member in closed or structured
/// form.
pub fn model_spectrum(ex: &Exhaustion) -> Result<SpectrumStructured> {
    let n = ex.n;
    Ok(match ex.model {
        GraphModel::SegmentN(m) => SpectrumStructured::from_values(&path_eigenvalues(m)),
        GraphModel::HalfLineN => SpectrumStructured::from_values(&path_eigenvalues(n)),
        GraphModel::TorusZd { d, n } => SpectrumStructured { entries: torus_eigenvalues(d, n) },
        GraphModel::LineZ => SpectrumStructured { entries: torus_eigenvalues(1, n) },
        GraphModel::LatticeZd(d) => SpectrumStructured { entries: torus_eigenvalues(d, n) },
        GraphModel::NComb(d) => {
            let base: Vec<(f64, usize)> = path_eigenvalues(n).into_iter().map(|v| (v, 1)).collect();
            comb_spectrum_with(&base, &TorusFiber::new(d, n)?)
        }
        GraphModel::ZComb(d) => comb_spectrum_with(&torus_eigenvalues(d, n), &TorusFiber::new(1, n)?),
    })
}

/// Largest eigenvalue `‖A_{Λ_n}‖` of an exhaustion member.
pub fn model_top(ex: &Exhaustion) -> Result<f64> {
    let n = ex.n;
    Ok(match ex.model {
        GraphModel::SegmentN(m) => path_eigenvalue(m, 1),
        GraphModel::HalfLineN => path_eigenvalue(n, 1),
        GraphModel::TorusZd { d, .. } | GraphModel::LatticeZd(d) => 2.0 * d as f64,
        GraphModel::LineZ => 2.0,
        GraphModel::NComb(d) => TorusFiber::new(d, n)?.top_root(path_eigenvalue(n, 1)),
        GraphModel::ZComb(d) => TorusFiber::new(1, n)?.top_root(2.0 * d as f64),
    })
}

/// Dense eigen-decomposition of an operator within the dense cap.
pub fn dense_spectrum(op: &SparseOperator, want_vectors: bool) -> Result<(SpectrumStructured, SymEig)> {
    let n = op.dim();
    if n > DENSE_CAP {
        return Err(Error::TooLarge { dim: n, cap: DENSE_CAP });
    }
    let eig = sym_eig(&op.to_dense(), n, want_vectors)?;
    Ok((SpectrumStructured::from_values(&eig.values), eig))
}
