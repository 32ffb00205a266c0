//! The eleven acceptance criteria at their pinned tolerances. Runs without
//! the libtest harness so every PASS/FAIL line is printed; exits nonzero if
//! any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use hopping_core::graph::{build_comb, build_torus, SparseOperator};
use hopping_core::green::{green_n, green_zd, tauberian_series, GreenMethod};
use hopping_core::ids::ids_shift_distance;
use hopping_core::linalg::Lu;
use hopping_core::perron::{estimate_dimensions, pf_finite_ratio};
use hopping_core::secular::{hidden_spectrum, krein_resolvent_finite, model_norm};
use hopping_core::spectral::{comb_spectrum_structured, dense_spectrum};
use hopping_core::thermo::{
    condensate_schedule, density_limit, finite_density, fixed_density_verdict, projected_resolvent_segment,
    scaled_schedule_mu, two_point_finite, two_point_limit, BoseParams, Regime, TwoPointMethod,
};
use hopping_core::{GraphModel, Result, Site};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn c1_comb_norms() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in 1..=4 {
        let exact = 2.0 * ((d * d + 1) as f64).sqrt();
        worst = worst.max((model_norm(&GraphModel::ZComb(d))? - exact).abs());
    }
    worst = worst.max((model_norm(&GraphModel::NComb(1))? - 8f64.sqrt()).abs());
    Ok((worst <= 1e-10, format!("max |error| = {worst:.2e}")))
}

fn c2_dichotomy() -> Outcome {
    let gaps: Vec<f64> = (1..=4)
        .map(|d| Ok(hidden_spectrum(&GraphModel::NComb(d), 1e-12)?.gap))
        .collect::<Result<_>>()?;
    let watson = 2.0 * green_zd(6.0, &[0, 0, 0], GreenMethod::Bessel)?.to_f64();
    let ok = gaps[0] > 1e-6 && gaps[1] > 1e-6 && gaps[2] == 0.0 && gaps[3] == 0.0 && watson > 0.5 && watson < 0.6;
    Ok((ok, format!("gaps d=1..4 = {gaps:.3?}, 2G3(6) = {watson:.6}")))
}

fn c3_halfline_edge() -> Outcome {
    let mut exact = true;
    for k in 0..=50u64 {
        for l in 0..=50u64 {
            exact &= green_n(2.0, k, l)? == (k.min(l) + 1) as f64;
        }
    }
    let mut worst_rel: f64 = 0.0;
    let mut worst_abs: f64 = 0.0;
    for k in 0..=5usize {
        for l in 0..=5usize {
            let target = (k.min(l) + 1) as f64;
            let v = projected_resolvent_segment(2000, k, l)?;
            worst_rel = worst_rel.max((v - target).abs() / target);
            worst_abs = worst_abs.max((v - target).abs());
        }
    }
    Ok((
        exact && worst_rel <= 1e-2,
        format!("exact edge values: {exact}; projected n=2000 rel {worst_rel:.2e} (abs {worst_abs:.2e})"),
    ))
}

fn c4_pf_ratio() -> Outcome {
    let r = pf_finite_ratio(&GraphModel::HalfLineN, 5000)?;
    let target = 2.0 * PI * PI / 3.0;
    let rel = (r / target - 1.0).abs();
    Ok((rel <= 0.01, format!("ratio {r:.6} vs {target:.6}, rel {rel:.2e}")))
}

fn c5_dimensions() -> Outcome {
    let ns: Vec<usize> = (0..6).map(|j| 100 << j).collect();
    let cases = [
        (GraphModel::HalfLineN, 1.0, 3.0),
        (GraphModel::NComb(1), 2.0, 3.0),
        (GraphModel::ZComb(1), 2.0, 1.0),
        (GraphModel::ZComb(2), 3.0, 2.0),
    ];
    let mut ok = true;
    let mut msg = Vec::new();
    for (m, dg, dpf) in cases {
        let e = estimate_dimensions(&m, &ns)?;
        ok &= (e.d_g - dg).abs() <= 0.15 && (e.d_pf - dpf).abs() <= 0.15;
        msg.push(format!("{m}: ({:.3}, {:.3})", e.d_g, e.d_pf));
    }
    Ok((ok, msg.join("; ")))
}

fn c6_ids_shift() -> Outcome {
    let ns = [250, 500, 1000, 2000];
    let dist: Vec<f64> = ns
        .iter()
        .map(|&n| ids_shift_distance(&GraphModel::ZComb(1), n))
        .collect::<Result<_>>()?;
    let monotone = dist.windows(2).all(|w| w[1] <= w[0]);
    Ok((monotone && dist[3] <= 0.02, format!("distances {dist:.5?}")))
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> SparseOperator {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j, rng.gen_range(1..=2u32)));
            }
        }
    }
    SparseOperator::from_edges(n, &edges).unwrap()
}

fn c7_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // structured vs dense comb spectra
    let mut spec_err: f64 = 0.0;
    for _ in 0..50 {
        let fiber_d = rng.gen_range(1..=2usize);
        let fiber_n = if fiber_d == 1 { rng.gen_range(1..=6) } else { rng.gen_range(1..=2) };
        let fiber_size = (2 * fiber_n + 1usize).pow(fiber_d as u32);
        let base_size = rng.gen_range(2..=(400 / fiber_size).clamp(2, 12));
        let base = random_graph(&mut rng, base_size, 0.4);
        let (base_spec, _) = dense_spectrum(&base, false)?;
        let fiber_model = GraphModel::TorusZd { d: fiber_d, n: fiber_n };
        let s = comb_spectrum_structured(&base_spec.entries, &fiber_model)?.expanded();
        let comb = build_comb(&base, &build_torus(fiber_d, fiber_n)?, 0)?;
        let (dense, _) = dense_spectrum(&comb, false)?;
        let d = dense.expanded();
        spec_err = s.iter().zip(&d).fold(spec_err, |m, (a, b)| m.max((a - b).abs()));
    }
    // Krein formula vs direct inversion
    let mut krein_err: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(3..=24);
        let ax = random_graph(&mut rng, n, 0.3);
        let d = random_graph(&mut rng, n, 0.08);
        let bound = ax.max_row_sum() + d.max_row_sum();
        let lambda = bound + rng.gen_range(0.1..3.0);
        let r = krein_resolvent_finite(&ax, &d, lambda)?;
        let mut shifted: Vec<f64> = ax.to_dense().iter().zip(d.to_dense()).map(|(a, b)| -(a + b)).collect();
        for i in 0..n {
            shifted[i * n + i] += lambda;
        }
        let direct = Lu::new(&shifted, n)?.inverse();
        krein_err = r.iter().zip(&direct).fold(krein_err, |m, (a, b)| m.max((a - b).abs()));
    }
    // dense vs matrix-free two-point values on S_20 ⊣ T_41
    let m = GraphModel::NComb(1);
    let p = BoseParams::new(1.0, -0.1)?;
    let sites = [
        Site::new(&[0], &[0]),
        Site::new(&[3], &[0]),
        Site::new(&[7], &[-4]),
        Site::new(&[20], &[20]),
        Site::new(&[11], &[-13]),
    ];
    let mut tp_err: f64 = 0.0;
    for x in &sites {
        for y in &sites {
            let a = two_point_finite(&m, 20, p, x, y, TwoPointMethod::Dense)?;
            let b = two_point_finite(&m, 20, p, x, y, TwoPointMethod::MatrixFree)?;
            tp_err = tp_err.max((a - b).abs());
        }
    }
    Ok((
        spec_err <= 1e-10 && krein_err <= 1e-9 && tp_err <= 1e-8,
        format!("spectra {spec_err:.2e}, Krein {krein_err:.2e}, two-point {tp_err:.2e}"),
    ))
}

fn schedule_error(model: GraphModel, n: usize, big_d: f64) -> Result<(f64, f64, f64)> {
    let o = Site::root(&model);
    let limit = two_point_limit(&model, 1.0, big_d, &o, &o)?.total();
    let s = condensate_schedule(&model, n, big_d)?;
    let v = two_point_finite(&model, n, BoseParams::new(1.0, s.mu)?, &o, &o, TwoPointMethod::Auto)?;
    Ok((v, limit, (v / limit - 1.0).abs()))
}

fn c8_schedule() -> Outcome {
    let (v1, l1, e1) = schedule_error(GraphModel::HalfLineN, 4000, 0.5)?;
    let (v2, l2, e2) = schedule_error(GraphModel::NComb(1), 800, 0.5)?;
    Ok((
        e1 <= 0.02 && e2 <= 0.05,
        format!("N n=4000: {v1:.6} vs {l1:.6} ({e1:.2e}); NComb(1) n=800: {v2:.6} vs {l2:.6} ({e2:.2e})"),
    ))
}

fn c9_density_limits() -> Outcome {
    let mut ok = true;
    let mut msg = Vec::new();
    for (m, tol) in [(GraphModel::ZComb(1), 0.02), (GraphModel::NComb(1), 0.03)] {
        let mu = scaled_schedule_mu(&m, 3000, 1.0)?;
        let rho = finite_density(&m, 3000, BoseParams::new(1.0, mu)?)?;
        let limit = density_limit(&m, 1.0)?;
        let rel = (rho / limit - 1.0).abs();
        ok &= rel <= tol;
        msg.push(format!("{m}: {rho:.6} vs {limit:.6} ({rel:.2e})"));
    }
    Ok((ok, msg.join("; ")))
}

fn c10_tauberian() -> Outcome {
    let s3 = tauberian_series(3, &[8, 16, 32])?;
    let r3 = [s3[1] / s3[0], s3[2] / s3[1]];
    let s4 = tauberian_series(4, &[4, 8, 16])?;
    let inc = [s4[1] - s4[0], s4[2] - s4[1]];
    let inc_ratio = inc[1] / inc[0];
    let ok = r3.iter().all(|r| (1.7..=2.3).contains(r)) && (inc_ratio - 1.0).abs() <= 0.25;
    Ok((ok, format!("d=3 ratios {r3:.4?}; d=4 increments {inc:.5?} (ratio {inc_ratio:.4})")))
}

fn c11_trichotomy() -> Outcome {
    let cases = [
        (GraphModel::NComb(1), Regime::ZeroCondensate),
        (GraphModel::NComb(2), Regime::FiniteCondensate),
        (GraphModel::ZComb(3), Regime::Divergent),
        (GraphModel::LineZ, Regime::Divergent),
        (GraphModel::LatticeZd(2), Regime::Divergent),
        (GraphModel::ZComb(1), Regime::Divergent),
        (GraphModel::ZComb(2), Regime::Divergent),
    ];
    let mut ok = true;
    let mut msg = Vec::new();
    for (m, want) in cases {
        let rho_c = hopping_core::thermo::critical_density(&m, 1.0)?;
        let v = fixed_density_verdict(&m, rho_c.finite().map_or(1.0, |r| r + 1.0))?;
        ok &= v.regime == want;
        msg.push(format!("{m} {}", v.regime.label()));
    }
    Ok((ok, msg.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("comb norms", c1_comb_norms),
        ("hidden-spectrum dichotomy", c2_dichotomy),
        ("N resolvent edge values", c3_halfline_edge),
        ("PF norm ratio", c4_pf_ratio),
        ("dimension table", c5_dimensions),
        ("IDS shift", c6_ids_shift),
        ("oracle equivalences", c7_oracles),
        ("condensate-schedule convergence", c8_schedule),
        ("density limits", c9_density_limits),
        ("Tauberian growth", c10_tauberian),
        ("fixed-density trichotomy", c11_trichotomy),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.1} s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
