//! Randomized invariants across the spectral, resolvent and thermodynamic layers.

use hopping_core::graph::{build_comb, build_segment, build_torus};
use hopping_core::ids::IdsCurve;
use hopping_core::linalg::{sym_eig, Lu};
use hopping_core::secular::krein_resolvent_finite;
use hopping_core::spectral::{comb_spectrum_structured, dense_spectrum, rank_one_secular, shifted_solve};
use hopping_core::thermo::{
    bose, condensate_schedule, f_reg, finite_density, two_point_finite, BoseParams, TwoPointMethod,
};
use hopping_core::{Exhaustion, GraphModel, Site, SparseOperator};
use proptest::prelude::*;

fn graph(n: usize, mask: &[bool], weights: &[u32]) -> SparseOperator {
    let mut edges = Vec::new();
    let mut t = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask[t % mask.len()] {
                edges.push((i, j, weights[t % weights.len()]));
            }
            t += 1;
        }
    }
    SparseOperator::from_edges(n, &edges).unwrap()
}

fn arb_graph(max: usize) -> impl Strategy<Value = SparseOperator> {
    (2..=max, prop::collection::vec(any::<bool>(), 1..64), prop::collection::vec(1u32..=3, 1..8))
        .prop_map(|(n, mask, w)| graph(n, &mask, &w))
}

fn fiber() -> impl Strategy<Value = GraphModel> {
    prop_oneof![
        (1usize..=5).prop_map(|n| GraphModel::TorusZd { d: 1, n }),
        (1usize..=2).prop_map(|n| GraphModel::TorusZd { d: 2, n }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn comb_spectrum_moments(base in arb_graph(8), fib in fiber()) {
        let (bs, _) = dense_spectrum(&base, false).unwrap();
        let s = comb_spectrum_structured(&bs.entries, &fib).unwrap();
        let GraphModel::TorusZd { d, n } = fib else { unreachable!() };
        let comb = build_comb(&base, &build_torus(d, n).unwrap(), 0).unwrap();
        let trace = s.sum_with(|x| x);
        let second = s.sum_with(|x| x * x);
        let edges: f64 = (0..comb.dim()).flat_map(|i| comb.row(i).map(|(_, w)| (w * w) as f64)).sum();
        prop_assert_eq!(s.total(), comb.dim());
        prop_assert!(trace.abs() < 1e-9 * comb.dim() as f64);
        prop_assert!((second - edges).abs() < 1e-9 * edges.max(1.0));
    }

    #[test]
    fn rank_one_roots_interlace(
        mut poles in prop::collection::vec(-5.0f64..5.0, 1..12),
        weights in prop::collection::vec(0.01f64..1.0, 12),
        a in 0.1f64..4.0,
    ) {
        poles.sort_by(f64::total_cmp);
        poles.dedup_by(|x, y| (*x - *y).abs() < 1e-6);
        let w = &weights[..poles.len()];
        let roots = rank_one_secular(&poles, w, a, 1e-13).unwrap();
        prop_assert_eq!(roots.len(), poles.len());
        for (k, r) in roots.iter().enumerate() {
            prop_assert!(*r >= poles[k] - 1e-9);
            if k + 1 < poles.len() {
                prop_assert!(*r <= poles[k + 1] + 1e-9);
            }
        }
    }

    #[test]
    fn ids_is_a_distribution(base in arb_graph(10)) {
        let (s, _) = dense_spectrum(&base, false).unwrap();
        let top = s.max();
        let ids = IdsCurve::from_spectrum(&s, top);
        prop_assert_eq!(ids.eval(-1.0), 0.0);
        prop_assert!((ids.eval(2.0 * top + 10.0) - 1.0).abs() < 1e-15);
        let mut last = 0.0;
        for &(e, f) in &ids.points {
            prop_assert!(e >= -1e-9 && (0.0..=1.0).contains(&f) && f >= last);
            last = f;
        }
    }

    #[test]
    fn density_increases_with_mu(n in 2usize..30, m1 in 0.01f64..3.0, m2 in 0.01f64..3.0) {
        let model = GraphModel::NComb(1);
        let s = condensate_schedule(&model, n, 1.0).unwrap();
        let (lo, hi) = (s.gap - m1.max(m2), s.gap - m1.min(m2));
        let a = finite_density(&model, n, BoseParams::new(1.0, lo).unwrap()).unwrap();
        let b = finite_density(&model, n, BoseParams::new(1.0, hi).unwrap()).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-12));
    }

    #[test]
    fn regular_part_splits_bose(x in 1e-8f64..50.0) {
        let p = BoseParams::new(1.0, 0.0).unwrap();
        let whole = bose(x, p).unwrap();
        let split = f_reg(x) + 1.0 / x;
        prop_assert!((split - whole).abs() <= 1e-12 * whole.abs().max(1e-300) + 1e-14);
    }

    #[test]
    fn two_point_matrix_is_psd(n in 3usize..12, mu in -2.0f64..-0.01, seed in 0u64..1000) {
        let model = GraphModel::NComb(1);
        let p = BoseParams::new(1.0, mu).unwrap();
        let sites: Vec<Site> = (0..5)
            .map(|j| {
                let h = seed.wrapping_mul(2654435761).wrapping_add(j * 97);
                Site::new(&[(h % (n as u64 + 1)) as i64], &[((h / 7) % (2 * n as u64 + 1)) as i64 - n as i64])
            })
            .collect();
        let mut g = vec![0.0; 25];
        for (i, x) in sites.iter().enumerate() {
            for (j, y) in sites.iter().enumerate() {
                g[i * 5 + j] = two_point_finite(&model, n, p, x, y, TwoPointMethod::Dense).unwrap();
            }
        }
        for i in 0..5 {
            for j in 0..5 {
                prop_assert!((g[i * 5 + j] - g[j * 5 + i]).abs() < 1e-12);
            }
        }
        let e = sym_eig(&g, 5, false).unwrap();
        prop_assert!(e.values.iter().all(|&v| v > -1e-10));
    }

    #[test]
    fn schedule_is_consistent(n in 1usize..400, big_d in 0.01f64..10.0) {
        for model in [GraphModel::HalfLineN, GraphModel::NComb(1), GraphModel::ZComb(1)] {
            let s = condensate_schedule(&model, n, big_d).unwrap();
            prop_assert!(s.mu < s.gap);
            prop_assert!((s.ratio() - big_d).abs() < 1e-9 * big_d);
        }
    }

    #[test]
    fn cg_meets_residual(base in arb_graph(20), shift in 0.05f64..3.0, seed in 0u64..100) {
        let lambda = base.max_row_sum() + shift;
        let b: Vec<f64> = (0..base.dim()).map(|i| ((i as u64 * 31 + seed) % 7) as f64 - 3.0).collect();
        let sol = shifted_solve(&base, lambda, &b, 1e-12).unwrap();
        let ax = base.apply(&sol.x).unwrap();
        let r: f64 = b.iter().zip(&sol.x).zip(&ax).map(|((bi, xi), ai)| (bi - (lambda * xi - ai)).powi(2)).sum();
        let bn: f64 = b.iter().map(|v| v * v).sum();
        prop_assert!(bn == 0.0 || (r / bn).sqrt() <= 1e-10);
    }

    #[test]
    fn krein_matches_inverse(ax in arb_graph(14), extra in 0.1f64..2.0) {
        let n = ax.dim();
        let d = SparseOperator::from_edges(n, &[(0, n - 1, 1)]).unwrap();
        let lambda = ax.max_row_sum() + d.max_row_sum() + extra;
        let r = krein_resolvent_finite(&ax, &d, lambda).unwrap();
        let mut m: Vec<f64> = ax.to_dense().iter().zip(d.to_dense()).map(|(a, b)| -(a + b)).collect();
        for i in 0..n {
            m[i * n + i] += lambda;
        }
        let inv = Lu::new(&m, n).unwrap().inverse();
        for (a, b) in r.iter().zip(&inv) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn dense_matches_matrix_free(n in 2usize..9, mu in -1.0f64..-0.05, k in 0i64..3, m in -2i64..3) {
        for model in [GraphModel::NComb(1), GraphModel::ZComb(1)] {
            let p = BoseParams::new(1.0, mu).unwrap();
            let x = Site::root(&model);
            let base = if model == GraphModel::NComb(1) { k.min(n as i64) } else { -k };
            let y = Site::new(&[base], &[m.clamp(-(n as i64), n as i64)]);
            let a = two_point_finite(&model, n, p, &x, &y, TwoPointMethod::Dense).unwrap();
            let b = two_point_finite(&model, n, p, &x, &y, TwoPointMethod::MatrixFree).unwrap();
            let c = two_point_finite(&model, n, p, &y, &x, TwoPointMethod::Dense).unwrap();
            prop_assert!((a - b).abs() < 1e-8);
            prop_assert!((a - c).abs() < 1e-12);
        }
    }
}

#[test]
fn exhaustion_matches_segment_builder() {
    let ex = Exhaustion::new(GraphModel::HalfLineN, 7).unwrap();
    assert_eq!(ex.operator().unwrap(), build_segment(7).unwrap());
}
