//! Bose–Gibbs thermodynamics of `H = ‖A‖ − A`: occupation numbers,
//! critical and finite-volume densities, chemical-potential solvers,
//! condensate schedules, two-point functions and the limiting density
//! formulas of the hidden-spectrum combs.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{invalid, Error, Extended, Result};
use crate::graph::{Exhaustion, GraphModel, Site};
use crate::green::{classify_recurrence, green_moment2, green_n, green_zd, GreenMethod, Recurrence};
use crate::linalg::DENSE_CAP;
use crate::perron::{estimate_dimensions, finite_gap, pf_finite_norm, pf_partial_norm, pf_weight, DimensionEstimate};
use crate::quad::bisect_monotone;
use crate::secular::{comb_resolvent_element, model_norm};
use crate::spectral::{
    comb_modes, dense_spectrum, default_interval, model_spectrum, model_top, path_eigenvalue, path_eigenvector,
    shifted_solve_above, torus_eigenvalues, ChebSeries, TorusFiber,
};

/// Inverse temperature and chemical potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoseParams {
    pub beta: f64,
    pub mu: f64,
}

impl BoseParams {
    pub fn new(beta: f64, mu: f64) -> Result<BoseParams> {
        if !(beta > 0.0 && beta.is_finite()) {
            return invalid(format!("beta must be positive and finite, got {beta}"));
        }
        if mu.is_nan() || mu == f64::INFINITY {
            return invalid(format!("chemical potential {mu} is not usable"));
        }
        Ok(BoseParams { beta, mu })
    }
}

/// `1/(e^{β(ε−μ)} − 1)`.
pub fn bose(eps: f64, p: BoseParams) -> Result<f64> {
    if !(eps > p.mu) {
        return Err(Error::InvalidMu { mu: p.mu, eps0: eps });
    }
    Ok(1.0 / (p.beta * (eps - p.mu)).exp_m1())
}

/// `1/(e^x − 1) − 1/x`, continued by `−1/2` at the origin.
pub fn f_reg(x: f64) -> f64 {
    if x.abs() < 0.25 {
        // Bernoulli series
        let x2 = x * x;
        let tail = 1.0 / 12.0
            + x2 * (-1.0 / 720.0
                + x2 * (1.0 / 30240.0
                    + x2 * (-1.0 / 1209600.0 + x2 * (1.0 / 47900160.0 - x2 * 691.0 / 1307674368000.0))));
        return -0.5 + x * tail;
    }
    1.0 / x.exp_m1() - 1.0 / x
}

/// Sum of `f` over `items` in fixed chunks, independent of the thread count.
fn det_sum<T: Sync>(items: &[T], f: impl Fn(&T) -> f64 + Sync) -> f64 {
    items
        .par_chunks(4096)
        .map(|c| c.iter().map(&f).sum::<f64>())
        .collect::<Vec<_>>()
        .iter()
        .sum()
}

/// Trapezoid mean of `f(2Σ_j cos θ_j)` over the `d`-torus, doubling the
/// grid until two successive values agree to `rel`.
fn torus_mean(d: usize, f: &(dyn Fn(f64) -> f64 + Sync), rel: f64) -> Result<f64> {
    fn rec(cos: &[f64], depth: usize, acc: f64, f: &(dyn Fn(f64) -> f64 + Sync)) -> f64 {
        if depth == 0 {
            return f(acc);
        }
        cos.iter().map(|c| rec(cos, depth - 1, acc + c, f)).sum()
    }
    let mut m = 16usize;
    let mut prev = f64::NAN;
    loop {
        let cos: Vec<f64> = (0..m).map(|j| 2.0 * (2.0 * PI * j as f64 / m as f64).cos()).collect();
        let partial: Vec<f64> = cos.par_iter().map(|&c| rec(&cos, d - 1, c, f)).collect();
        let value = partial.iter().sum::<f64>() / (m as f64).powi(d as i32);
        if (value - prev).abs() <= rel * value.abs().max(1e-300) {
            return Ok(value);
        }
        prev = value;
        m *= 2;
        if (m as f64).powi(d as i32) > 2f64.powi(26) {
            return Err(Error::NoConvergence { iterations: m, residual: (value - prev).abs() });
        }
    }
}

/// `ρ_c(β) = ∫ dN(h)/(e^{βh} − 1)`, with `N` the integrated density of
/// states of `‖A‖ − A`.
///
/// The catalog IDS is that of a lattice ℤ^k evaluated at the model norm
/// `λ`, so `ρ_c` is a `k`-torus average of `1/(e^{β(λ − 2Σcos θ)} − 1)`.
/// It is computed as the smooth `f_reg` average plus `G_k(λ; 0)/β`.
pub fn critical_density(model: &GraphModel, beta: f64) -> Result<Extended> {
    BoseParams::new(beta, 0.0)?;
    if model.is_finite() {
        return invalid(format!("{model} is finite; the critical density needs an infinite model"));
    }
    let k = model.spectral_lattice_dim().unwrap();
    let lambda = model_norm(model)?;
    let green = match green_zd(lambda, &vec![0; k], GreenMethod::Auto)? {
        Extended::Infinite => return Ok(Extended::Infinite),
        Extended::Finite(g) => g,
    };
    let smooth = torus_mean(k, &|s| f_reg(beta * (lambda - s).max(0.0)), 1e-14)?;
    Ok(Extended::Finite(smooth + green / beta))
}

/// Energies of `Λ_n` measured from the finite-volume ground state.
struct Levels {
    /// `‖A_∞‖ − ‖A_{Λ_n}‖`.
    eps0: f64,
    /// `(‖A_{Λ_n}‖ − λ_i, multiplicity)`.
    levels: Vec<(f64, f64)>,
    total: f64,
}

impl Levels {
    fn new(model: &GraphModel, n: usize) -> Result<Levels> {
        let ex = Exhaustion::new(*model, n)?;
        let spectrum = model_spectrum(&ex)?;
        let top = spectrum.max();
        let eps0 = model_norm(model)? - top;
        let levels = spectrum.entries.iter().map(|&(l, m)| (top - l, m as f64)).collect();
        Ok(Levels { eps0, levels, total: spectrum.total() as f64 })
    }

    /// Density at `μ = ε₀ − s`.
    fn density(&self, beta: f64, s: f64) -> f64 {
        det_sum(&self.levels, |&(e, m)| m / (beta * (e + s)).exp_m1()) / self.total
    }

    fn shift(&self, mu: f64) -> Result<f64> {
        let s = self.eps0 - mu;
        if !(s > 0.0) {
            return Err(Error::InvalidMu { mu, eps0: self.eps0 });
        }
        Ok(s)
    }
}

/// `(1/|Λ_n|) Σ_i 1/(e^{β(‖A_∞‖ − λ_i − μ)} − 1)`.
pub fn finite_density(model: &GraphModel, n: usize, p: BoseParams) -> Result<f64> {
    let lv = Levels::new(model, n)?;
    let s = lv.shift(p.mu)?;
    Ok(lv.density(p.beta, s))
}

/// Chemical potential giving density `rho` on `Λ_n`.
pub fn solve_mu(model: &GraphModel, n: usize, beta: f64, rho: f64) -> Result<f64> {
    BoseParams::new(beta, 0.0)?;
    if !(rho > 0.0 && rho.is_finite()) {
        return invalid(format!("target density must be positive, got {rho}"));
    }
    let lv = Levels::new(model, n)?;
    let s_min = 1e-14 * model_norm(model)?.max(1.0);
    if lv.density(beta, s_min) < rho {
        return invalid(format!("density {rho} is beyond the range resolvable on n = {n}"));
    }
    let mut s_max = 1.0;
    while lv.density(beta, s_max) > rho {
        s_max *= 2.0;
    }
    let log_s = bisect_monotone(s_min.ln(), s_max.ln(), false, 0.0, |x| lv.density(beta, x.exp()) - rho);
    Ok(lv.eps0 - log_s.exp())
}

/// Chemical potential of the `D`-schedule at volume `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub n: usize,
    pub big_d: f64,
    pub mu: f64,
    /// `ε₀(H_{Λ_n}) = ‖A_∞‖ − ‖A_{Λ_n}‖`.
    pub gap: f64,
    /// `‖v_n‖²`, root-normalized.
    pub pf_norm: f64,
}

impl Schedule {
    /// `1/(‖v_n‖²(ε₀ − μ_n))`.
    pub fn ratio(&self) -> f64 {
        1.0 / (self.pf_norm * (self.gap - self.mu))
    }
}

/// `μ_n = ε₀ − 1/(D‖v_n‖²)`; for `D = 0`, `μ_n = ε₀ − 1`.
pub fn condensate_schedule(model: &GraphModel, n: usize, big_d: f64) -> Result<Schedule> {
    if !(big_d >= 0.0 && big_d.is_finite()) {
        return invalid(format!("condensate weight D must be finite and nonnegative, got {big_d}"));
    }
    if let GraphModel::NComb(d) = *model {
        if d >= 3 {
            return Err(Error::Unsupported(format!(
                "condensate schedules on NComb({d}) lie outside the proved regime d <= 2"
            )));
        }
    }
    let gap = finite_gap(model, n)?;
    let pf_norm = pf_finite_norm(model, n)?;
    let mu = if big_d > 0.0 { gap - 1.0 / (big_d * pf_norm) } else { gap - 1.0 };
    if !(mu < gap) {
        return invalid(format!(
            "D = {big_d} puts mu_n at the ground energy on n = {n}; choose a larger n"
        ));
    }
    Ok(Schedule { n, big_d, mu, gap, pf_norm })
}

/// Evaluation route for finite-volume two-point functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPointMethod {
    /// Structured when available, dense up to the dense cap, else matrix-free.
    Auto,
    Dense,
    /// Chebyshev for the `f_reg` part plus conjugate gradients for the
    /// resolvent part.
    MatrixFree,
    /// Closed-form eigenvectors: segments, tori, and the root line of combs.
    Structured,
}

/// Spectral function `g(λ)` of an adjacency eigenvalue.
#[derive(Debug, Clone, Copy)]
enum Kernel {
    /// `1/(e^{β(shift − λ)} − 1)`.
    Bose { beta: f64, shift: f64 },
    /// `f_reg(β(shift − λ))`.
    Reg { beta: f64, shift: f64 },
}

impl Kernel {
    fn eval(self, lambda: f64) -> f64 {
        match self {
            Kernel::Bose { beta, shift } => 1.0 / (beta * (shift - lambda)).exp_m1(),
            Kernel::Reg { beta, shift } => f_reg(beta * (shift - lambda)),
        }
    }
}

fn on_root_line(site: &Site) -> bool {
    site.fiber.iter().all(|&c| c == 0)
}

fn structured_available(model: &GraphModel, x: &Site, y: &Site) -> bool {
    !model.is_comb() || (on_root_line(x) && on_root_line(y))
}

/// `(1/N^d) Σ_θ cos(θ·Δ) F(2Σcos θ)` over the momenta of `T^d_N`, with `F`
/// tabulated on the distinct eigenvalues.
fn torus_fourier(d: usize, n: usize, delta: &[i64], values: &[f64], table: &[f64]) -> f64 {
    let side = 2 * n + 1;
    let total = side.pow(d as u32);
    let cos: Vec<f64> = (0..side).map(|j| (2.0 * PI * j as f64 / side as f64).cos()).collect();
    let terms: Vec<usize> = (0..total).collect();
    det_sum(&terms, |&idx| {
        let mut rest = idx;
        let mut a = 0.0;
        let mut phase = 0.0;
        for &dj in delta {
            let j = rest % side;
            rest /= side;
            a += 2.0 * cos[j];
            phase += 2.0 * PI * (j as f64) * dj as f64 / side as f64;
        }
        let pos = values.partition_point(|&v| v < a - 1e-12);
        phase.cos() * table[pos.min(values.len() - 1)]
    }) / total as f64
}

fn structured_element(model: &GraphModel, n: usize, x: &Site, y: &Site, g: Kernel) -> Result<f64> {
    let path_sum = |m_top: usize, j: usize, k: usize, f: &dyn Fn(usize) -> f64| -> f64 {
        (1..=m_top + 1)
            .map(|m| path_eigenvector(m_top, m, j) * path_eigenvector(m_top, m, k) * f(m))
            .sum()
    };
    let delta = |d: usize| -> Vec<i64> { (0..d).map(|i| y.base[i] - x.base[i]).collect() };
    match *model {
        GraphModel::SegmentN(m) => {
            let (j, k) = (x.base[0] as usize, y.base[0] as usize);
            Ok(path_sum(m, j, k, &|i| g.eval(path_eigenvalue(m, i))))
        }
        GraphModel::HalfLineN => {
            let (j, k) = (x.base[0] as usize, y.base[0] as usize);
            Ok(path_sum(n, j, k, &|i| g.eval(path_eigenvalue(n, i))))
        }
        GraphModel::TorusZd { d, n: tn } => {
            let values: Vec<f64> = torus_eigenvalues(d, tn).into_iter().map(|v| v.0).collect();
            let table: Vec<f64> = values.iter().map(|&v| g.eval(v)).collect();
            Ok(torus_fourier(d, tn, &delta(d), &values, &table))
        }
        GraphModel::LineZ | GraphModel::LatticeZd(_) => {
            let d = model.lattice_dim().unwrap();
            let values: Vec<f64> = torus_eigenvalues(d, n).into_iter().map(|v| v.0).collect();
            let table: Vec<f64> = values.iter().map(|&v| g.eval(v)).collect();
            Ok(torus_fourier(d, n, &delta(d), &values, &table))
        }
        GraphModel::NComb(d) => {
            let tf = TorusFiber::new(d, n)?;
            let base: Vec<f64> = (1..=n + 1).map(|m| path_eigenvalue(n, m)).collect();
            let modes = comb_modes(&base, &tf);
            let fiber_sum: Vec<f64> = modes
                .iter()
                .map(|ms| ms.iter().map(|fm| fm.root_weight * g.eval(fm.value)).sum())
                .collect();
            let (j, k) = (x.base[0] as usize, y.base[0] as usize);
            Ok(path_sum(n, j, k, &|m| fiber_sum[m - 1]))
        }
        GraphModel::ZComb(d) => {
            let tf = TorusFiber::new(1, n)?;
            let values: Vec<f64> = torus_eigenvalues(d, n).into_iter().map(|v| v.0).collect();
            let table: Vec<f64> = comb_modes(&values, &tf)
                .iter()
                .map(|ms| ms.iter().map(|fm| fm.root_weight * g.eval(fm.value)).sum())
                .collect();
            Ok(torus_fourier(d, n, &delta(d), &values, &table))
        }
    }
}

fn dense_element(ex: &Exhaustion, ix: usize, iy: usize, g: Kernel) -> Result<f64> {
    let (_, eig) = dense_spectrum(&ex.operator()?, true)?;
    let n = eig.n;
    let vecs = eig.vectors.as_ref().ok_or_else(|| Error::Invalid("eigenvectors missing".into()))?;
    Ok((0..n)
        .map(|j| vecs[ix * n + j] * vecs[iy * n + j] * g.eval(eig.values[j]))
        .sum())
}

fn matrix_free_element(ex: &Exhaustion, ix: usize, iy: usize, g: Kernel) -> Result<f64> {
    let op = ex.operator()?;
    let top = model_top(ex)?;
    let mut e = vec![0.0; op.dim()];
    e[iy] = 1.0;
    let (beta, shift, resolvent) = match g {
        Kernel::Bose { beta, shift } => (beta, shift, true),
        Kernel::Reg { beta, shift } => (beta, shift, false),
    };
    let (a, b) = default_interval(op.max_row_sum().max(top));
    let series = ChebSeries::fit(|l| f_reg(beta * (shift - l)), a, b, 1e-13)?;
    let mut value = series.apply(&op, &e)?[ix];
    if resolvent {
        let sol = shifted_solve_above(&op, shift, &e, 1e-13, top)?;
        value += sol.x[ix] / beta;
    }
    Ok(value)
}

fn element(model: &GraphModel, n: usize, x: &Site, y: &Site, g: Kernel, method: TwoPointMethod) -> Result<f64> {
    let ex = Exhaustion::new(*model, n)?;
    let ix = ex.index_of(x)?;
    let iy = ex.index_of(y)?;
    let method = match method {
        TwoPointMethod::Auto if structured_available(model, x, y) => TwoPointMethod::Structured,
        TwoPointMethod::Auto if ex.vertex_count() <= DENSE_CAP => TwoPointMethod::Dense,
        TwoPointMethod::Auto => TwoPointMethod::MatrixFree,
        m => m,
    };
    match method {
        TwoPointMethod::Structured if !structured_available(model, x, y) => Err(Error::Unsupported(
            "structured two-point values of combs are limited to the root line".into(),
        )),
        TwoPointMethod::Structured => structured_element(model, n, x, y, g),
        TwoPointMethod::Dense => dense_element(&ex, ix, iy, g),
        _ => matrix_free_element(&ex, ix, iy, g),
    }
}

/// `⟨(e^{β(H_{Λ_n} − μ)} − 1)^{-1} δ_x, δ_y⟩` with `H_{Λ_n} = ‖A_∞‖ − A_{Λ_n}`.
pub fn two_point_finite(
    model: &GraphModel,
    n: usize,
    p: BoseParams,
    x: &Site,
    y: &Site,
    method: TwoPointMethod,
) -> Result<f64> {
    let norm = model_norm(model)?;
    let eps0 = norm - model_top(&Exhaustion::new(*model, n)?)?;
    if !(p.mu < eps0) {
        return Err(Error::InvalidMu { mu: p.mu, eps0 });
    }
    element(model, n, x, y, Kernel::Bose { beta: p.beta, shift: norm - p.mu }, method)
}

/// `⟨Q_n R_{A_{S_n}}(‖A_{S_n}‖) Q_n δ_k, δ_l⟩` on the segment `S_n`, with
/// `Q_n` the projection off the PF eigenvector.
pub fn projected_resolvent_segment(n: usize, k: usize, l: usize) -> Result<f64> {
    if k > n || l > n {
        return invalid(format!("sites {k}, {l} are outside S_{n}"));
    }
    let top = path_eigenvalue(n, 1);
    Ok((2..=n + 1)
        .map(|m| path_eigenvector(n, m, k) * path_eigenvector(n, m, l) / (top - path_eigenvalue(n, m)))
        .sum())
}

/// Infinite-volume two-point function, split as in
/// `⟨f_reg(βH)δ_x,δ_y⟩ + β⁻¹⟨H⁻¹δ_x,δ_y⟩ + D v(x)v(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointLimit {
    pub f_reg_part: f64,
    pub resolvent_part: f64,
    pub condensate_part: f64,
    /// Volume index at which the `f_reg` part settled.
    pub volume: usize,
}

impl TwoPointLimit {
    pub fn total(&self) -> f64 {
        self.f_reg_part + self.resolvent_part + self.condensate_part
    }
}

/// Tolerance between successive volume doublings of the `f_reg` part.
pub const F_REG_TOL: f64 = 1e-6;

/// Limit of the two-point function along the `D`-schedule. Rejected for
/// recurrent models, whose diagonal two-point function diverges.
pub fn two_point_limit(model: &GraphModel, beta: f64, big_d: f64, x: &Site, y: &Site) -> Result<TwoPointLimit> {
    BoseParams::new(beta, 0.0)?;
    if !(big_d >= 0.0 && big_d.is_finite()) {
        return invalid(format!("condensate weight D must be finite and nonnegative, got {big_d}"));
    }
    if classify_recurrence(model)? == Recurrence::Recurrent {
        return Err(Error::Recurrent(model.to_string()));
    }
    let norm = model_norm(model)?;
    let resolvent = match *model {
        GraphModel::HalfLineN => {
            if x.base[0] < 0 || y.base[0] < 0 {
                return invalid("sites of N are nonnegative");
            }
            green_n(2.0, x.base[0] as u64, y.base[0] as u64)?
        }
        GraphModel::LatticeZd(d) => {
            let k: Vec<i64> = x.base.iter().zip(&y.base).map(|(a, b)| b - a).collect();
            if k.len() != d {
                return invalid(format!("sites of {model} have {d} coordinates"));
            }
            green_zd(norm, &k, GreenMethod::Auto)?.require("edge Green function")?
        }
        _ => comb_resolvent_element(model, norm, x, y, 1e-13)?,
    };
    let condensate = if big_d > 0.0 { big_d * pf_weight(model, x)? * pf_weight(model, y)? } else { 0.0 };
    let extent = x.base.iter().chain(&x.fiber).chain(&y.base).chain(&y.fiber).map(|c| c.unsigned_abs()).max();
    let mut n = 16.max(2 * extent.unwrap_or(0) as usize);
    let kernel = Kernel::Reg { beta, shift: norm };
    let mut prev = element(model, n, x, y, kernel, TwoPointMethod::Auto)?;
    loop {
        let next_n = 2 * n;
        if Exhaustion::new(*model, next_n)?.vertex_count() > 50_000_000 || next_n > 1 << 16 {
            return Err(Error::NoConvergence { iterations: n, residual: f64::NAN });
        }
        let next = element(model, next_n, x, y, kernel, TwoPointMethod::Auto)?;
        let done = (next - prev).abs() < F_REG_TOL;
        prev = next;
        n = next_n;
        if done {
            break;
        }
    }
    Ok(TwoPointLimit { f_reg_part: prev, resolvent_part: resolvent / beta, condensate_part: condensate, volume: n })
}

/// Finite-volume condensate densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondensateDensities {
    /// `1/(|Λ_n|(ε₀ − μ))`, the ground-mode occupation per site.
    pub state_side: f64,
    /// `D ‖v↾Λ_n‖² / |Λ_n|` with `D = 1/(‖v_n‖²(ε₀ − μ))`.
    pub weight_side: f64,
    pub big_d: f64,
}

impl CondensateDensities {
    /// `weight_side / state_side = ‖v↾Λ_n‖² / ‖v_n‖²`.
    pub fn ratio(&self) -> f64 {
        self.weight_side / self.state_side
    }
}

pub fn condensate_density_finite(model: &GraphModel, n: usize, mu: f64) -> Result<CondensateDensities> {
    let ex = Exhaustion::new(*model, n)?;
    let gap = finite_gap(model, n)?;
    if !(mu < gap) {
        return Err(Error::InvalidMu { mu, eps0: gap });
    }
    let volume = ex.vertex_count() as f64;
    let occupation = 1.0 / (gap - mu);
    let big_d = occupation / pf_finite_norm(model, n)?;
    Ok(CondensateDensities {
        state_side: occupation / volume,
        weight_side: big_d * pf_partial_norm(model, n)? / volume,
        big_d,
    })
}

/// The scaling functions of the limiting density formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingFunction {
    /// `r(a) = Σ_{m≥0} 1/(a + π²m(m+2))`.
    LowerR,
    /// `s(a) = Σ_{m≥0} 1/(a + 2π²m²)`.
    LowerS,
    /// `R_d`: `r` for `d = 1`, `1/a` for `d = 2`.
    UpperR(usize),
    /// `S_d`: `s` for `d = 1`, `1/a` for `d ≥ 2`.
    UpperS(usize),
    /// `α(x)`: 0, 1, `+∞` for `x` negative, zero, positive.
    Alpha,
}

fn r_closed(a: f64) -> f64 {
    // r(a) = π⁻² Σ_{j≥1} 1/(j² + c²), c² = (a − π²)/π²
    let c2 = (a - PI * PI) / (PI * PI);
    let sum = if c2.abs() < 1e-3 {
        let z = [PI.powi(2) / 6.0, PI.powi(4) / 90.0, PI.powi(6) / 945.0, PI.powi(8) / 9450.0, PI.powi(10) / 93555.0];
        z.iter().rev().fold(0.0, |acc, zk| zk - c2 * acc)
    } else if c2 > 0.0 {
        let pc = PI * c2.sqrt();
        (pc / pc.tanh() - 1.0) / (2.0 * c2)
    } else {
        let pk = PI * (-c2).sqrt();
        (1.0 - pk / pk.tan()) / (-2.0 * c2)
    };
    sum / (PI * PI)
}

fn s_closed(a: f64) -> f64 {
    let x = (a / 2.0).sqrt();
    0.5 / a + 1.0 / (x.tanh() * 2.0 * (2.0 * a).sqrt())
}

pub fn scaling_function(f: ScalingFunction, a: f64) -> Result<Extended> {
    if a.is_nan() {
        return invalid("scaling function argument is NaN");
    }
    if f == ScalingFunction::Alpha {
        return Ok(if a < 0.0 {
            Extended::Finite(0.0)
        } else if a == 0.0 {
            Extended::Finite(1.0)
        } else {
            Extended::Infinite
        });
    }
    if a < 0.0 {
        return invalid(format!("scaling functions need a >= 0, got {a}"));
    }
    if a == 0.0 {
        return Ok(Extended::Infinite);
    }
    if a == f64::INFINITY {
        return Ok(Extended::Finite(0.0));
    }
    let value = match f {
        ScalingFunction::LowerR | ScalingFunction::UpperR(1) => r_closed(a),
        ScalingFunction::LowerS | ScalingFunction::UpperS(1) => s_closed(a),
        ScalingFunction::UpperR(2) => 1.0 / a,
        ScalingFunction::UpperS(d) if d >= 2 => 1.0 / a,
        other => return invalid(format!("{other:?} is not defined")),
    };
    Ok(Extended::Finite(value))
}

/// Growth exponent of `|Λ_n|`.
pub fn geometric_dim(model: &GraphModel) -> Result<usize> {
    match *model {
        GraphModel::HalfLineN | GraphModel::LineZ => Ok(1),
        GraphModel::LatticeZd(d) => Ok(d),
        GraphModel::NComb(d) | GraphModel::ZComb(d) => Ok(d + 1),
        _ => invalid(format!("{model} is finite")),
    }
}

/// `μ_n = ε₀(H_{Λ_n}) − a/n^{d_G}`, so that `n^{d_G}(ε₀ − μ_n) = a`.
pub fn scaled_schedule_mu(model: &GraphModel, n: usize, a: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return invalid(format!("scaled schedule needs a in (0, inf), got {a}"));
    }
    let dg = geometric_dim(model)? as i32;
    Ok(finite_gap(model, n)? - a / (n as f64).powi(dg))
}

/// Limiting density along the `a`-scaled schedule at `β = 1`.
///
/// `ℕ ⊣ ℤ^d`: `ρ_c + 2^{2−d} R_d(b) m₂` with `b = a m₂/G₀²`.
/// `ℤ^d ⊣ ℤ`: `ρ_c + 2d² m₂ Σ(b)` with `b = 2^d a m₂/G₀²`, where for `d = 1`
/// both `±m` base modes contribute, `Σ(b) = 2s(b) − 1/b`, and
/// `Σ(b) = 1/b` for `d ≥ 2`. Here `m₂ = ‖R(‖A‖)δ₀‖²` and `G₀ = ⟨R(‖A‖)δ₀,δ₀⟩`
/// on the fiber lattice.
pub fn density_limit(model: &GraphModel, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return invalid(format!("density limit needs a in (0, inf], got {a}"));
    }
    let rho_c = critical_density(model, 1.0)?.require("critical density")?;
    if a == f64::INFINITY {
        return Ok(rho_c);
    }
    let norm = model_norm(model)?;
    match *model {
        GraphModel::NComb(d) if d <= 2 => {
            let m2 = green_moment2(norm, d)?.require("second moment")?;
            let g0 = green_zd(norm, &vec![0; d], GreenMethod::Auto)?.require("fiber Green function")?;
            let b = a * m2 / (g0 * g0);
            let r = scaling_function(ScalingFunction::UpperR(d), b)?.require("R(b)")?;
            Ok(rho_c + 2f64.powi(2 - d as i32) * r * m2)
        }
        GraphModel::ZComb(d) => {
            let m2 = green_moment2(norm, 1)?.require("second moment")?;
            let g0 = green_zd(norm, &[0], GreenMethod::Auto)?.require("fiber Green function")?;
            let b = 2f64.powi(d as i32) * a * m2 / (g0 * g0);
            let sigma = if d == 1 { 2.0 * s_closed(b) - 1.0 / b } else { 1.0 / b };
            Ok(rho_c + 2.0 * (d * d) as f64 * m2 * sigma)
        }
        _ => Err(Error::Unsupported(format!("no limiting density formula for {model}"))),
    }
}

/// Outcome of fixing the mean density `ρ ≥ ρ_c` along the exhaustion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `d_PF > d_G`: the condensate coefficient vanishes and the limiting
    /// density is pinned at `ρ_c`.
    ZeroCondensate,
    /// `d_PF = d_G`: finite positive condensate coefficient.
    FiniteCondensate,
    /// `d_PF < d_G`, or recurrent: the diagonal two-point function diverges.
    Divergent,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::ZeroCondensate => "(i)",
            Regime::FiniteCondensate => "(ii)",
            Regime::Divergent => "(iii)",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub regime: Regime,
    pub recurrence: Recurrence,
    pub rho_c: Extended,
    /// Condensate coefficient `D(ρ)`; `None` when divergent.
    pub coefficient: Option<f64>,
    pub dims: Option<DimensionEstimate>,
}

/// Volumes used for the dimension regressions.
pub const DIMENSION_NS: [usize; 6] = [100, 200, 400, 800, 1600, 3200];

/// Regime of the fixed-density limit at `β = 1`.
///
/// The coefficient in regime (ii) is `(ρ − ρ_c)·lim |Λ_n|/‖v_n‖²`, which is
/// `ρ − ρ_c` on ℤ^d and `2π²(ρ − ρ_c)/m₂` on ℕ ⊣ ℤ².
pub fn fixed_density_verdict(model: &GraphModel, rho: f64) -> Result<Verdict> {
    if rho.is_nan() {
        return invalid("density is NaN");
    }
    let recurrence = classify_recurrence(model)?;
    let rho_c = critical_density(model, 1.0)?;
    if recurrence == Recurrence::Recurrent {
        return Ok(Verdict { regime: Regime::Divergent, recurrence, rho_c, coefficient: None, dims: None });
    }
    if !(rho >= rho_c.to_f64()) {
        return Err(Error::BelowCritical { rho, rho_c: rho_c.to_f64() });
    }
    let rho_c_value = rho_c.to_f64();
    let dims = estimate_dimensions(model, &DIMENSION_NS)?;
    let diff = dims.d_pf - dims.d_g;
    let (regime, coefficient) = if diff > 0.5 {
        (Regime::ZeroCondensate, Some(0.0))
    } else if diff < -0.5 {
        (Regime::Divergent, None)
    } else {
        let scale = match *model {
            GraphModel::LatticeZd(_) => 1.0,
            GraphModel::NComb(2) => {
                2.0 * PI * PI / green_moment2(model_norm(model)?, 2)?.require("second moment")?
            }
            _ => return Err(Error::Unsupported(format!("no condensate coefficient for {model}"))),
        };
        (Regime::FiniteCondensate, Some(scale * (rho - rho_c_value)))
    };
    Ok(Verdict { regime, recurrence, rho_c, coefficient, dims: Some(dims) })
}
