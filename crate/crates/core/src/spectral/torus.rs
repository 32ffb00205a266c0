//! Closed-form resolvents of cycles and tori, and the rank-one problems
//! `A_T + a·P_o` that arise on each base mode of a comb with torus fiber.
//!
//! On the odd cycle of length `N`, with `λ = 2cosh t`, `2cos θ` or
//! `−2cosh t`:
//!
//! ```text
//! G(λ) = coth(Nt/2) / (2 sinh t)      λ > 2
//! G(λ) = −cot(Nθ/2) / (2 sin θ)       |λ| ≤ 2
//! G(λ) = −tanh(Nt/2) / (2 sinh t)     λ < −2
//! ```
//!
//! A torus resolvent is a one-dimensional sum of cycle resolvents over the
//! remaining `d − 1` frequencies, grouped by distinct value.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::quad::bisect_monotone;

/// Position of a real spectral parameter relative to the cycle band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CyclePoint {
    Above(f64),
    Band(f64),
    Below(f64),
}

impl CyclePoint {
    pub fn of(mu: f64) -> CyclePoint {
        if mu > 2.0 {
            CyclePoint::Above((((mu - 2.0) * (mu + 2.0)).sqrt() / 2.0).asinh())
        } else if mu < -2.0 {
            CyclePoint::Below((((mu - 2.0) * (mu + 2.0)).sqrt() / 2.0).asinh())
        } else {
            let s = ((2.0 - mu) * (2.0 + mu)).sqrt() / 2.0;
            CyclePoint::Band(s.atan2(mu / 2.0))
        }
    }

    pub fn lambda(self) -> f64 {
        match self {
            CyclePoint::Above(t) => 2.0 + 4.0 * (t / 2.0).sinh().powi(2),
            CyclePoint::Below(t) => -2.0 - 4.0 * (t / 2.0).sinh().powi(2),
            CyclePoint::Band(theta) => 2.0 * theta.cos(),
        }
    }
}

fn cycle_sum(len: usize, mu: f64, power: i32) -> f64 {
    let nf = len as f64;
    (0..len)
        .map(|k| 1.0 / (mu - 2.0 * (2.0 * PI * k as f64 / nf).cos()).powi(power))
        .sum::<f64>()
        / nf
}

/// Value and `λ`-derivative of the diagonal cycle resolvent.
pub fn cycle_green_point(len: usize, p: CyclePoint) -> (f64, f64) {
    let nf = len as f64;
    match p {
        CyclePoint::Above(t) => {
            let (s, c) = (t.sinh(), t.cosh());
            let q = (-nf * t).exp();
            let e = -(-nf * t).exp_m1();
            let coth = (1.0 + q) / e;
            let csch2 = 4.0 * q / (e * e);
            let g = coth / (2.0 * s);
            let dgdt = (-(nf / 2.0) * csch2 * s - coth * c) / (2.0 * s * s);
            (g, dgdt / (2.0 * s))
        }
        CyclePoint::Below(t) => {
            if nf * t < 1e-3 {
                let mu = p.lambda();
                return (cycle_sum(len, mu, 1), -cycle_sum(len, mu, 2));
            }
            let (s, c) = (t.sinh(), t.cosh());
            let q = (-nf * t).exp();
            let e = -(-nf * t).exp_m1();
            let tanh = e / (1.0 + q);
            let sech2 = 4.0 * q / ((1.0 + q) * (1.0 + q));
            let g = -tanh / (2.0 * s);
            let dgdt = -((nf / 2.0) * sech2 * s - tanh * c) / (2.0 * s * s);
            (g, dgdt / (-2.0 * s))
        }
        CyclePoint::Band(theta) if theta <= PI / 2.0 => {
            let (s, c) = theta.sin_cos();
            let x = nf * theta / 2.0;
            let (sx, cx) = x.sin_cos();
            let cot = cx / sx;
            let csc2 = 1.0 / (sx * sx);
            let g = -cot / (2.0 * s);
            let dgdth = ((nf / 2.0) * csc2 * s + cot * c) / (2.0 * s * s);
            (g, dgdth / (-2.0 * s))
        }
        CyclePoint::Band(theta) => {
            let phi = PI - theta;
            if nf * phi < 1e-3 {
                let mu = p.lambda();
                return (cycle_sum(len, mu, 1), -cycle_sum(len, mu, 2));
            }
            let (s, c) = phi.sin_cos();
            let x = nf * phi / 2.0;
            let (sx, cx) = x.sin_cos();
            let tan = sx / cx;
            let sec2 = 1.0 / (cx * cx);
            let g = -tan / (2.0 * s);
            let dgdph = -((nf / 2.0) * sec2 * s - tan * c) / (2.0 * s * s);
            (g, dgdph / (2.0 * s))
        }
    }
}

/// `⟨R(μ)δ_0, δ_0⟩` on the cycle of odd length `len`.
pub fn cycle_green(len: usize, mu: f64) -> f64 {
    cycle_green_point(len, CyclePoint::of(mu)).0
}

/// `⟨R(μ)δ_0, δ_k⟩` on the cycle of odd length `len`, for `μ > 2`.
pub fn cycle_green_at(len: usize, mu: f64, k: i64) -> f64 {
    let k = k.rem_euclid(len as i64) as f64;
    let root = ((mu - 2.0) * (mu + 2.0)).sqrt();
    let t = (root / 2.0).asinh();
    let nf = len as f64;
    ((-k * t).exp() + (-(nf - k) * t).exp()) / (-(-nf * t).exp_m1() * root)
}

/// Distinct eigenvalues `2Σ cos(2πk_j/N)` of `T^d_N` (`N = 2n+1`) with
/// multiplicities, ascending. `d = 0` gives the single value 0.
pub fn torus_eigenvalues(d: usize, n: usize) -> Vec<(f64, usize)> {
    let side = 2 * n + 1;
    let cosines: Vec<f64> = (0..=n).map(|k| 2.0 * (2.0 * PI * k as f64 / side as f64).cos()).collect();
    let mut raw: Vec<(f64, usize)> = Vec::new();
    let mut idx = vec![0usize; d];
    let factorial = |m: usize| (1..=m).product::<usize>();
    loop {
        let value: f64 = idx.iter().map(|&k| cosines[k]).sum();
        let mut perms = factorial(d);
        let mut run = 1;
        for j in 1..=d {
            if j < d && idx[j] == idx[j - 1] {
                run += 1;
            } else {
                perms /= factorial(run);
                run = 1;
            }
        }
        let nonzero = idx.iter().filter(|&&k| k > 0).count();
        raw.push((value, perms << nonzero));
        // next nondecreasing tuple
        let mut j = d;
        loop {
            if j == 0 {
                return merge_values(raw);
            }
            j -= 1;
            if idx[j] < n {
                idx[j] += 1;
                for i in j + 1..d {
                    idx[i] = idx[j];
                }
                break;
            }
        }
    }
}

fn merge_values(mut raw: Vec<(f64, usize)>) -> Vec<(f64, usize)> {
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, usize)> = Vec::with_capacity(raw.len());
    for (v, m) in raw {
        match out.last_mut() {
            Some(last) if v - last.0 <= 1e-13 => last.1 += m,
            _ => out.push((v, m)),
        }
    }
    out
}

/// One eigenspace of `A_T + a·P_o`: eigenvalue, multiplicity and the squared
/// norm of the projection of `δ_o` onto it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberMode {
    pub value: f64,
    pub mult: usize,
    pub root_weight: f64,
}

/// Torus `T^d_{2n+1}` used as a comb fiber.
#[derive(Debug, Clone)]
pub struct TorusFiber {
    pub d: usize,
    pub n: usize,
    side: usize,
    poles: Vec<(f64, usize)>,
    outer: Vec<(f64, f64)>,
}

impl TorusFiber {
    pub fn new(d: usize, n: usize) -> Result<TorusFiber> {
        if d == 0 || n == 0 {
            return invalid("torus fiber needs d >= 1 and n >= 1");
        }
        let side = 2 * n + 1;
        let scale = (side as f64).powi(d as i32 - 1);
        let outer = torus_eigenvalues(d - 1, n)
            .into_iter()
            .map(|(v, m)| (v, m as f64 / scale))
            .collect();
        Ok(TorusFiber { d, n, side, poles: torus_eigenvalues(d, n), outer })
    }

    pub fn size(&self) -> usize {
        self.side.pow(self.d as u32)
    }

    pub fn norm(&self) -> f64 {
        2.0 * self.d as f64
    }

    pub fn poles(&self) -> &[(f64, usize)] {
        &self.poles
    }

    /// `⟨R_T(λ)δ_o, δ_o⟩` and its derivative, `λ` not an eigenvalue.
    pub fn green_with_deriv(&self, lambda: f64) -> (f64, f64) {
        self.outer.iter().fold((0.0, 0.0), |(g, dg), &(s, w)| {
            let (a, b) = cycle_green_point(self.side, CyclePoint::of(lambda - s));
            (g + w * a, dg + w * b)
        })
    }

    pub fn green(&self, lambda: f64) -> f64 {
        self.outer.iter().map(|&(s, w)| w * cycle_green(self.side, lambda - s)).sum()
    }

    /// `⟨R_T(λ)δ_o, δ_k⟩` for `λ > 2d`.
    pub fn green_at(&self, lambda: f64, k: &[i64]) -> f64 {
        let d = self.d;
        let side = self.side;
        let last = k[d - 1];
        if d == 1 {
            return cycle_green_at(side, lambda, last);
        }
        let nf = side as f64;
        let total = side.pow(d as u32 - 1);
        let mut sum = 0.0;
        for idx in 0..total {
            let mut rest = idx;
            let mut shift = 0.0;
            let mut phase = 1.0;
            for &kj in &k[..d - 1] {
                let j = rest % side;
                rest /= side;
                let th = 2.0 * PI * j as f64 / nf;
                shift += 2.0 * th.cos();
                phase *= (th * kj as f64).cos();
            }
            sum += phase * cycle_green_at(side, lambda - shift, last);
        }
        sum / total as f64
    }

    /// Eigenspaces of `A_T + a·P_o`, ascending by value.
    pub fn rank_one_modes(&self, a: f64) -> Vec<FiberMode> {
        let size = self.size() as f64;
        if a == 0.0 {
            return self
                .poles
                .iter()
                .map(|&(value, mult)| FiberMode { value, mult, root_weight: mult as f64 / size })
                .collect();
        }
        let roots = if self.d == 1 { self.cycle_roots(a) } else { self.nested_roots(a) };
        let mut modes: Vec<FiberMode> = roots
            .into_iter()
            .map(|(value, dg)| FiberMode { value, mult: 1, root_weight: 1.0 / (a * a * -dg) })
            .collect();
        modes.extend(
            self.poles
                .iter()
                .filter(|p| p.1 > 1)
                .map(|&(value, mult)| FiberMode { value, mult: mult - 1, root_weight: 0.0 }),
        );
        modes.sort_by(|x, y| x.value.total_cmp(&y.value));
        modes
    }

    /// Largest eigenvalue of `A_T + a·P_o` for `a > 0`.
    pub fn top_root(&self, a: f64) -> f64 {
        if self.d == 1 {
            let nf = self.side;
            let t = top_cycle_t(nf, a);
            CyclePoint::Above(t).lambda()
        } else {
            let cmax = self.poles.last().unwrap().0;
            bisect_monotone(cmax, cmax + a, false, 0.0, |l| a * self.green(l) - 1.0)
        }
    }

    fn nested_roots(&self, a: f64) -> Vec<(f64, f64)> {
        let psi = |l: f64| a * self.green(l) - 1.0;
        let mut out = Vec::with_capacity(self.poles.len());
        let mut push = |l: f64| out.push((l, self.green_with_deriv(l).1));
        let (cmin, cmax) = (self.poles[0].0, self.poles.last().unwrap().0);
        if a < 0.0 {
            push(bisect_monotone(cmin + a, cmin, true, 0.0, psi));
        }
        for w in self.poles.windows(2) {
            push(bisect_monotone(w[0].0, w[1].0, a < 0.0, 0.0, psi));
        }
        if a > 0.0 {
            push(bisect_monotone(cmax, cmax + a, false, 0.0, psi));
        }
        out
    }

    /// Roots on a single cycle, bracketed in the angle between consecutive
    /// poles `θ_k = 2πk/N`.
    fn cycle_roots(&self, a: f64) -> Vec<(f64, f64)> {
        let len = self.side;
        let nf = len as f64;
        let n = self.n;
        let eval = |p: CyclePoint| cycle_green_point(len, p);
        let mut out = Vec::with_capacity(n + 1);
        let mut push = |p: CyclePoint| out.push((p.lambda(), eval(p).1));
        // bottom root for a < 0
        if a < 0.0 {
            let cn = 2.0 * (2.0 * PI * n as f64 / nf).cos();
            let psi_m2 = -a * nf / 4.0 - 1.0;
            if psi_m2 > 0.0 {
                let lmin = cn + a;
                let tmax = (((lmin - 2.0) * (lmin + 2.0)).sqrt() / 2.0).asinh();
                let t = bisect_monotone(0.0, tmax, false, 0.0, |t| a * eval(CyclePoint::Below(t)).0 - 1.0);
                push(CyclePoint::Below(t));
            } else if psi_m2 == 0.0 {
                push(CyclePoint::Band(PI));
            } else {
                let lo = 2.0 * PI * n as f64 / nf;
                let th = bisect_monotone(lo, PI, false, 0.0, |th| a * eval(CyclePoint::Band(th)).0 - 1.0);
                push(CyclePoint::Band(th));
            }
        }
        // one root between consecutive poles, ascending in λ
        for k in (0..n).rev() {
            let lo = 2.0 * PI * k as f64 / nf;
            let hi = 2.0 * PI * (k + 1) as f64 / nf;
            let th = bisect_monotone(lo, hi, a > 0.0, 0.0, |th| a * eval(CyclePoint::Band(th)).0 - 1.0);
            push(CyclePoint::Band(th));
        }
        if a > 0.0 {
            push(CyclePoint::Above(top_cycle_t(len, a)));
        }
        out
    }
}

fn top_cycle_t(len: usize, a: f64) -> f64 {
    let lmax = 2.0 + a;
    let tmax = (((lmax - 2.0) * (lmax + 2.0)).sqrt() / 2.0).asinh();
    bisect_monotone(0.0, tmax, false, 0.0, |t| a * cycle_green_point(len, CyclePoint::Above(t)).0 - 1.0)
}

/// All eigenvalues of `diag(c) + a·w wᵀ`-type rank-one problems written in
/// secular form: roots of `1 = a·Σ_k w_k/(λ − c_k)`, together with poles of
/// zero weight or repeated value passed through. Ascending.
pub fn rank_one_secular(poles: &[f64], weights: &[f64], a: f64, _tol: f64) -> Result<Vec<f64>> {
    if poles.len() != weights.len() || poles.is_empty() {
        return invalid("poles and weights must be nonempty and of equal length");
    }
    if weights.iter().any(|w| !(*w >= 0.0)) {
        return invalid("weights must be nonnegative");
    }
    let mut pairs: Vec<(f64, f64)> = poles.iter().copied().zip(weights.iter().copied()).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out = Vec::with_capacity(pairs.len());
    // group equal poles; a group with positive weight keeps one pole active
    let mut active: Vec<(f64, f64)> = Vec::new();
    for (c, w) in pairs {
        match active.last_mut() {
            Some(last) if last.0 == c => {
                last.1 += w;
                out.push(c);
            }
            _ => active.push((c, w)),
        }
    }
    let mut live = Vec::with_capacity(active.len());
    for &(c, w) in &active {
        if w > 0.0 && a != 0.0 {
            live.push((c, w));
        } else {
            out.push(c);
        }
    }
    if !live.is_empty() {
        let g = |l: f64| live.iter().map(|&(c, w)| w / (l - c)).sum::<f64>();
        let psi = |l: f64| a * g(l) - 1.0;
        let total: f64 = live.iter().map(|p| p.1).sum();
        let (cmin, cmax) = (live[0].0, live.last().unwrap().0);
        if a < 0.0 {
            out.push(bisect_monotone(cmin + a * total, cmin, true, 0.0, psi));
        }
        for w in live.windows(2) {
            out.push(bisect_monotone(w[0].0, w[1].0, a < 0.0, 0.0, psi));
        }
        if a > 0.0 {
            out.push(bisect_monotone(cmax, cmax + a * total, false, 0.0, psi));
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_closed_form_matches_sum() {
        for &len in &[3usize, 7, 21] {
            for &mu in &[-5.0, -2.3, -1.99, -0.7, 0.31, 1.5, 2.2, 4.0] {
                let (g, dg) = cycle_green_point(len, CyclePoint::of(mu));
                assert!((g - cycle_sum(len, mu, 1)).abs() < 1e-11 * g.abs().max(1.0), "{len} {mu}");
                assert!((dg + cycle_sum(len, mu, 2)).abs() < 1e-10 * dg.abs().max(1.0), "{len} {mu}");
            }
            assert!((cycle_green(len, -2.0) + len as f64 / 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn cycle_offdiagonal_matches_sum() {
        let len = 9;
        let mu = 2.7;
        for k in 0..9i64 {
            let direct: f64 = (0..len)
                .map(|j| {
                    let th = 2.0 * PI * j as f64 / len as f64;
                    (th * k as f64).cos() / (mu - 2.0 * th.cos())
                })
                .sum::<f64>()
                / len as f64;
            assert!((cycle_green_at(len, mu, k) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn torus_eigenvalue_counts() {
        for (d, n) in [(1, 3), (2, 2), (3, 1), (3, 2)] {
            let eig = torus_eigenvalues(d, n);
            let total: usize = eig.iter().map(|e| e.1).sum();
            assert_eq!(total, (2 * n + 1).pow(d as u32));
            assert!((eig.last().unwrap().0 - 2.0 * d as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn secular_examples() {
        let r = rank_one_secular(&[-1.0, 1.0], &[0.5, 0.5], 1.0, 1e-14).unwrap();
        let s5 = 5f64.sqrt();
        assert!((r[0] - (1.0 - s5) / 2.0).abs() < 1e-13 && (r[1] - (1.0 + s5) / 2.0).abs() < 1e-13);
        let r = rank_one_secular(&[0.0], &[1.0], 2.0, 1e-14).unwrap();
        assert!((r[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn fiber_modes_sum_to_one() {
        for d in 1..=2 {
            let f = TorusFiber::new(d, 3).unwrap();
            for a in [-1.7, -0.4, 0.0, 0.9, 2.5] {
                let modes = f.rank_one_modes(a);
                let count: usize = modes.iter().map(|m| m.mult).sum();
                assert_eq!(count, f.size());
                let w: f64 = modes.iter().map(|m| m.root_weight).sum();
                assert!((w - 1.0).abs() < 1e-10, "d={d} a={a} weight {w}");
            }
        }
    }
}
