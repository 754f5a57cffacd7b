//! Acceptance suite: one test per criterion, each printing a PASS line on
//! success. Grid, sampling and finite-difference oracles are rebuilt here
//! from the problem formulas so they stay independent of the solver paths
//! they adjudicate.

mod common;

use std::time::Instant;

use num_complex::Complex64 as Cplx;
use rand::Rng;

use common::{random_cvec, random_scenario, rng};
use secrecy_opt::cj_opt::{
    cj_max_secrecy_traced, cj_min_power_traced, cj_positivity, cj_suboptimal_maxrate,
    cj_suboptimal_minpower, cj_z_given_gamma, cj_z_given_ps, CjAlphas,
};
use secrecy_opt::df_multi::{build_qcqp, df_multi_max_seeded, df_multi_suboptimal, solve_qcqp};
use secrecy_opt::df_opt::{df_inner_z, df_max_secrecy_j1, df_min_power};
use secrecy_opt::experiments::{
    gen_channels, render_csv, run_sweep, AxisSpec, Geometry, LosParams, Objective, Scheme,
    SweepSpec,
};
use secrecy_opt::linalg::{
    constrained_quadratic_max, herm_eig, overlap_transfer, overlap_transfer_d1,
    overlap_transfer_d2, rank_two_eig, CMat,
};
use secrecy_opt::model::{df_rates, Scenario};
use secrecy_opt::sdp;

// ───────────────────────── shared oracle helpers ─────────────────────────

/// Overlap magnitude between the normalized relay channel vectors.
fn channel_overlap(sc: &Scenario) -> f64 {
    let v1 = sc.h.normalized().unwrap();
    let v2 = sc.g[0].normalized().unwrap();
    v1.dot(&v2).norm().min(1.0)
}

/// DF reduced objective ratio at (ps, z), built from the problem formulas.
fn df_ratio(sc: &Scenario, zeta: f64, ps: f64, z: f64) -> f64 {
    let lz = overlap_transfer(zeta, z).unwrap();
    let rem = sc.p0 - ps;
    let num = sc.sigma2 + ps * sc.h0.norm_sqr() + rem * sc.h.norm_sq() * lz;
    let den = sc.sigma2 + ps * sc.g0[0].norm_sqr() + rem * sc.g[0].norm_sq() * z;
    num / den
}

/// CJ secrecy rate (bits) at (ps, z), built from the α constants.
fn cj_rate(sc: &Scenario, eta: f64, ps: f64, z: f64) -> f64 {
    let h0 = sc.h0.norm_sqr();
    let g0 = sc.g0[0].norm_sqr();
    let gz = overlap_transfer(eta, z).unwrap();
    let den_d = (sc.p0 - ps) * (sc.h.norm_sq() / h0) * z + sc.sigma2 / h0;
    let den_e = (sc.p0 - ps) * (sc.g[0].norm_sq() / g0) * gz + sc.sigma2 / g0;
    (1.0 + ps / den_d).log2() - (1.0 + ps / den_e).log2()
}

/// CJ total power P0(γ, z) for the power-min problem, or None outside the
/// domain.
fn cj_total_power(sc: &Scenario, rho: f64, gamma: f64, z: f64) -> Option<f64> {
    let k = 2f64.powf(sc.rs0);
    let h0 = sc.h0.norm_sqr();
    let g0 = sc.g0[0].norm_sqr();
    let a1 = sc.h.norm_sq() * (k - 1.0) / h0;
    let a2 = sc.sigma2 * (k - 1.0) / h0;
    let a3 = sc.g[0].norm_sq() * (k - 1.0) / (k * g0);
    let a4 = sc.sigma2 * (k - 1.0) / (k * g0);
    let fz = overlap_transfer(rho, z).unwrap();
    let dom = gamma * (a3 * fz - a1 * z) + a4 - a2;
    if dom <= 0.0 {
        return None;
    }
    Some((gamma * a1 * z + a2) * (gamma * a3 * fz + a4) / dom + gamma)
}

fn random_pd(n: usize, r: &mut rand::rngs::StdRng) -> CMat {
    let mut b = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] = Cplx::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        }
    }
    b.adjoint()
        .mul(&b)
        .add(&CMat::scaled_identity(n, 0.3))
        .hermitian_part()
}

// ───────────────────────────── criteria 1–11 ─────────────────────────────

#[test]
fn criterion_01_rank_two_closed_form_vs_eigensolver() {
    let start = Instant::now();
    let mut r = rng(0x01);
    let mut checked = 0;
    while checked < 500 {
        let n = 2 + (checked % 15);
        let rv = random_cvec(&mut r, n, 0.1, 2.0);
        let sv = random_cvec(&mut r, n, 0.1, 2.0);
        let pair = match rank_two_eig(&rv, &sv) {
            Ok(p) => p,
            Err(_) => continue,
        };
        checked += 1;
        let m = rv.outer().sub(&sv.outer());
        let eig = herm_eig(&m).unwrap();
        let scale = eig.eigenvalues[0].abs().max(eig.eigenvalues[n - 1].abs());
        assert!((pair.eta1 - eig.eigenvalues[0]).abs() <= 1e-10 * scale);
        assert!((pair.eta2 - eig.eigenvalues[n - 1]).abs() <= 1e-10 * scale);
        let res_scale = rv.norm_sq().max(sv.norm_sq());
        for (eta, v) in [(pair.eta1, &pair.e1), (pair.eta2, &pair.e2)] {
            assert!((v.norm() - 1.0).abs() <= 1e-12);
            let res = m.mul_vec(v).sub(&v.scale(Cplx::new(eta, 0.0))).norm();
            assert!(res <= 1e-10 * res_scale);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("criterion 1: PASS — 500 rank-two pairs match herm_eig ({elapsed:?})");
}

#[test]
fn criterion_02_constrained_max_vs_span_grid() {
    let mut r = rng(0x02);
    for _ in 0..200 {
        let n = 2 + r.gen_range(0..5);
        let d1 = random_cvec(&mut r, n, 0.3, 1.0).normalized().unwrap();
        let d2 = random_cvec(&mut r, n, 0.3, 1.0).normalized().unwrap();
        let q: f64 = r.gen_range(0.0..1.0);
        let (z, value) = constrained_quadratic_max(&d1, &d2, q).unwrap();
        assert!(
            (z.dot(&d1).norm_sqr() - q).abs() <= 1e-10,
            "constraint violated"
        );

        // 401² grid over the two free phases of z = √q·e^{iχ1}d1 + √(1−q)·e^{iχ2}u.
        let u = d2.sub(&d1.scale(d1.dot(&d2))).normalized().unwrap();
        let d2d1 = d2.dot(&d1);
        let d2u = d2.dot(&u);
        let mut grid = f64::NEG_INFINITY;
        for i in 0..401 {
            let chi1 = std::f64::consts::TAU * i as f64 / 401.0;
            let e1 = Cplx::from_polar(q.sqrt(), chi1) * d2d1;
            for k in 0..401 {
                let chi2 = std::f64::consts::TAU * k as f64 / 401.0;
                let overlap = e1 + Cplx::from_polar((1.0 - q).sqrt(), chi2) * d2u;
                grid = grid.max(overlap.norm_sqr());
            }
        }
        assert!(
            value >= grid - 1e-6,
            "closed form {value} below grid {grid}"
        );
    }
    println!(
        "criterion 2: PASS — constrained-maximum closed form ≥ 401² span grid on 200 instances"
    );
}

#[test]
fn criterion_03_df_rate_closed_form_vs_grid() {
    for seed in 0..100 {
        let sc = random_scenario(4 + (seed % 4) as usize, 1, 0x0300 + seed);
        let sol = df_max_secrecy_j1(&sc).unwrap();
        assert!(
            sol.ps == sc.p0_min || sol.ps == sc.p0,
            "seed {seed}: ps not at an endpoint"
        );
        let zeta = channel_overlap(&sc);
        let mut grid = f64::NEG_INFINITY;
        for i in 0..201 {
            let ps = sc.p0_min + (sc.p0 - sc.p0_min) * i as f64 / 200.0;
            for k in 0..201 {
                let z = k as f64 / 200.0;
                grid = grid.max(0.5 * df_ratio(&sc, zeta, ps, z).log2());
            }
        }
        // Compare unclamped objectives (the grid may be negative).
        let z_at = df_inner_z(&sc, sol.ps).unwrap();
        let closed = 0.5 * df_ratio(&sc, zeta, sol.ps, z_at).log2();
        assert!(
            closed >= grid - 5e-3,
            "seed {seed}: closed form {closed} below grid {grid}"
        );
    }
    println!("criterion 3: PASS — DF rate closed form ≥ 201² grid − 5e-3 bits on 100 scenarios");
}

#[test]
fn criterion_04_df_power_min_equality_and_minimality() {
    for seed in 0..20 {
        let sc = random_scenario(4, 1, 0x0400 + seed);
        let sol = df_min_power(&sc).unwrap();
        let (rd, re) = df_rates(&sc, sol.ps, &sol.w).unwrap();
        assert!(
            ((rd - re[0]) - sc.rs0).abs() < 1e-8,
            "seed {seed}: equality violated"
        );

        let rho = 4f64.powf(sc.rs0);
        let hh = sc.h.norm_sq();
        let gg = sc.g[0].norm_sq();
        let hg = sc.h.dot(&sc.g[0]);
        let beta0 = (rho - 1.0) * sc.sigma2;
        let h0_sq = sc.h0.norm_sqr();
        let g0_sq = sc.g0[0].norm_sqr();
        let mut r = rng(0x0440 + seed);
        let ps_hi = (sol.total_power * (1.0 + 1e-6)).max(sc.p0_min * (1.0 + 1e-9));
        let mut best = f64::INFINITY;
        for _ in 0..1_000_000 {
            let c1 = Cplx::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            let c2 = Cplx::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            let h_w = c1 * hh + c2 * hg;
            let g_w = c1 * hg.conj() + c2 * gg;
            let w_sq = (c1.conj() * h_w + c2.conj() * g_w).re;
            if w_sq <= 1e-12 {
                continue;
            }
            let ps = r.gen_range(sc.p0_min..ps_hi);
            let coef = (h_w.norm_sqr() - rho * g_w.norm_sqr()) / w_sq;
            let t_sq = (beta0 + ps * (rho * g0_sq - h0_sq)) / coef;
            if t_sq.is_finite() && t_sq >= 0.0 {
                best = best.min(ps + t_sq);
            }
        }
        assert!(
            sol.total_power <= best + 1e-9 * best.max(1.0),
            "seed {seed}: {} beaten by sampled candidate {best}",
            sol.total_power
        );
    }
    println!(
        "criterion 4: PASS — DF power closed form: equality to 1e-8, ≤ 10⁶ sampled candidates × 20"
    );
}

#[test]
fn criterion_05_cj_rate_max_algorithm() {
    let mut processed = 0;
    let mut seed = 0u64;
    while processed < 100 {
        seed += 1;
        let sc = random_scenario(4, 1, 0x0500 + seed);
        if !cj_positivity(&sc).unwrap().0 {
            continue;
        }
        processed += 1;
        let eta = channel_overlap(&sc);
        let (sol, traces) = cj_max_secrecy_traced(&sc).unwrap();
        for trace in &traces {
            for pair in trace.steps.windows(2) {
                assert!(
                    pair[1].objective >= pair[0].objective - 1e-12,
                    "seed {seed}: trace not monotone"
                );
            }
        }
        let sub = cj_suboptimal_maxrate(&sc).unwrap();
        assert!(
            sol.secrecy_rate >= sub.secrecy_rate - 1e-9,
            "seed {seed}: below the z = 0 rate baseline"
        );

        // Grid oracle (201²) for a subset (it dominates the runtime).
        if processed % 4 == 0 {
            let mut grid = f64::NEG_INFINITY;
            for i in 0..201 {
                let ps = sc.p0 * i as f64 / 200.0;
                for k in 0..201 {
                    let z = k as f64 / 200.0;
                    grid = grid.max(cj_rate(&sc, eta, ps, z));
                }
            }
            assert!(
                sol.secrecy_rate >= grid - 5e-3,
                "seed {seed}: {} below grid {grid}",
                sol.secrecy_rate
            );
        }

        // Newton root vs test-owned bisection on an independently assembled
        // derivative expression, plus the concavity-at-root check.
        let al = CjAlphas::rate_max(&sc).unwrap();
        let ps_mid = 0.5 * sc.p0;
        if let Ok(z_newton) = cj_z_given_ps(&al, sc.p0, ps_mid) {
            let rem = sc.p0 - ps_mid;
            let a3c = al.a2 / rem;
            let b3c = (al.a2 + ps_mid) / rem;
            let c3c = al.a4 / rem;
            let d3c = (al.a4 + ps_mid) / rem;
            let deriv = |z: f64| -> f64 {
                let g = overlap_transfer(eta, z).unwrap();
                let g1 = overlap_transfer_d1(eta, z).unwrap();
                al.a3 * g1 / ((al.a3 * g + c3c) * (al.a3 * g + d3c))
                    - al.a1 / ((al.a1 * z + a3c) * (al.a1 * z + b3c))
            };
            let (mut lo, mut hi) = (
                z_newton.max(1e-14) / 16.0,
                (z_newton * 16.0).min(1.0 - 1e-14),
            );
            if deriv(lo) > 0.0 && deriv(hi) < 0.0 {
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if deriv(mid) > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let z_bisect = 0.5 * (lo + hi);
                assert!(
                    (z_newton - z_bisect).abs() <= 1e-10,
                    "seed {seed}: Newton {z_newton} vs bisection {z_bisect}"
                );
            }
            // R_s'' < 0 at the accepted root, via the analytic second
            // derivative of the stated R_s'(z) expression (finite
            // differences cancel catastrophically at near-zero roots).
            if z_newton > 1e-300 && z_newton < 1.0 - 1e-12 {
                let g = overlap_transfer(eta, z_newton).unwrap();
                let g1 = overlap_transfer_d1(eta, z_newton).unwrap();
                let g2 = overlap_transfer_d2(eta, z_newton).unwrap();
                let e_prod = (al.a3 * g + c3c) * (al.a3 * g + d3c);
                let e_prod_dz = al.a3 * g1 * (2.0 * al.a3 * g + c3c + d3c);
                let d_prod = (al.a1 * z_newton + a3c) * (al.a1 * z_newton + b3c);
                let d_prod_dz = al.a1 * (2.0 * al.a1 * z_newton + a3c + b3c);
                let second = (al.a3 * g2 * e_prod - al.a3 * g1 * e_prod_dz) / (e_prod * e_prod)
                    + al.a1 * d_prod_dz / (d_prod * d_prod);
                assert!(
                    second < 0.0,
                    "seed {seed}: R_s'' = {second:.3e} at the root"
                );
            }
        }
    }
    println!("criterion 5: PASS — CJ rate alternation monotone, ≥ grid, ≥ z=0 baseline, Newton = bisection");
}

#[test]
fn criterion_06_cj_power_min_algorithm() {
    let mut processed = 0;
    let mut seed = 0u64;
    while processed < 100 {
        seed += 1;
        let sc = random_scenario(4, 1, 0x0600 + seed);
        let (sol, traces) = match cj_min_power_traced(&sc) {
            Ok(v) => v,
            Err(_) => continue,
        };
        processed += 1;
        for trace in &traces {
            for pair in trace.steps.windows(2) {
                assert!(
                    pair[1].objective <= pair[0].objective + 1e-12,
                    "seed {seed}: power trace increased"
                );
            }
        }
        if let Ok(sub) = cj_suboptimal_minpower(&sc) {
            assert!(
                sol.total_power <= sub.total_power + 1e-9,
                "seed {seed}: above the z = 0 power baseline"
            );
        }

        let rho = channel_overlap(&sc);
        if processed % 4 == 0 {
            let gamma_hi = cj_suboptimal_minpower(&sc)
                .map(|s| s.total_power)
                .unwrap_or(sol.total_power * 3.0)
                * 1.05;
            let mut grid = f64::INFINITY;
            for i in 0..201 {
                let gamma = gamma_hi * i as f64 / 200.0;
                for k in 0..201 {
                    let z = k as f64 / 200.0;
                    if let Some(v) = cj_total_power(&sc, rho, gamma, z) {
                        grid = grid.min(v);
                    }
                }
            }
            assert!(
                sol.total_power <= grid * (1.0 + 1e-3),
                "seed {seed}: {} above grid {grid}",
                sol.total_power
            );
        }

        // Concavity of the constraint curve at the z-step root.
        let al = CjAlphas::power_min(&sc).unwrap();
        let gamma_probe = sol.w.norm_sq().max(0.05);
        if let Ok(z_root) = cj_z_given_gamma(&al, gamma_probe) {
            if z_root > 1e-9 && z_root < 1.0 - 1e-9 {
                let f2 = overlap_transfer_d2(rho, z_root).unwrap();
                let f1 = overlap_transfer_d1(rho, z_root).unwrap();
                let fz = overlap_transfer(rho, z_root).unwrap();
                let dd = gamma_probe * al.a1 * z_root + al.a2;
                let de = gamma_probe * al.a3 * fz + al.a4;
                let second = 2.0 * (gamma_probe * al.a1).powi(2) / dd.powi(3)
                    + gamma_probe * al.a3 * f2 / de.powi(2)
                    - 2.0 * (gamma_probe * al.a3 * f1).powi(2) / de.powi(3);
                assert!(
                    second < 0.0,
                    "seed {seed}: f_γ'' = {second:.3e} at the root"
                );
            }
        }
    }
    println!(
        "criterion 6: PASS — CJ power alternation nonincreasing, ≤ grid + 1e-3, ≤ z=0 baseline"
    );
}

#[test]
fn criterion_07_sdr_tightness_two_constraints() {
    let start = Instant::now();
    let mut r = rng(0x07);
    for trial in 0..50 {
        let n = 4 + trial % 5;
        let a: Vec<CMat> = (0..2).map(|_| random_pd(n, &mut r)).collect();
        let res = sdp::solve(&a).unwrap();
        assert_eq!(res.status, sdp::SdpStatus::Optimal, "trial {trial}");
        let scale = 1.0 + res.objective.abs();

        // KKT residuals ≤ 1e-8.
        for aj in &a {
            assert!(aj.trace_product_re(&res.z_opt) <= 1.0 + 1e-8);
        }
        let z_eig = herm_eig(&res.z_opt).unwrap();
        assert!(*z_eig.eigenvalues.last().unwrap() >= -1e-9);
        assert!(res.duals.iter().all(|&y| y >= -1e-12));
        let mut s = CMat::zeros(n, n);
        for (yj, aj) in res.duals.iter().zip(a.iter()) {
            s = s.add(&aj.scale(*yj));
        }
        let s = s.sub(&CMat::identity(n)).hermitian_part();
        assert!(*herm_eig(&s).unwrap().eigenvalues.last().unwrap() >= -1e-8 * scale);
        assert!(res.z_opt.trace_product_re(&s).abs() <= 1e-8 * scale);
        assert!(res.gap.abs() <= 1e-8 * scale);

        // Rank-one extraction value equals the SDR optimum.
        let q = secrecy_opt::df_multi::QcqpInstance {
            a: a.clone(),
            rh_inv_sqrt: CMat::identity(n),
        };
        let (v, sdr_value, tight) = solve_qcqp(&q, trial as u64).unwrap();
        assert!(tight, "trial {trial}: extraction not tight");
        assert!(
            (v.norm_sq() - sdr_value).abs() <= 1e-6 * sdr_value,
            "trial {trial}: value {} vs SDR {}",
            v.norm_sq(),
            sdr_value
        );
        for aj in &a {
            assert!(aj.quad_form(&v) <= 1.0 + 1e-8);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("criterion 7: PASS — J=2 SDR tight on 50 instances, KKT ≤ 1e-8 ({elapsed:?})");
}

#[test]
fn criterion_08_grp_and_multi_eavesdropper_dominance() {
    for idx in 0..100u64 {
        let j = 3 + (idx % 5) as usize;
        let sc = random_scenario(10, j, 0x0800 + idx);

        // GRP candidate: always feasible, never above the SDR bound.
        let ps_probe = 0.5 * (sc.p0_min + sc.p0);
        let q = build_qcqp(&sc, ps_probe).unwrap();
        let (v, sdr_value, _) = solve_qcqp(&q, idx).unwrap();
        let worst =
            q.a.iter()
                .map(|aj| aj.quad_form(&v))
                .fold(f64::NEG_INFINITY, f64::max);
        assert!(
            worst <= 1.0 + 1e-10,
            "instance {idx}: GRP candidate infeasible"
        );
        assert!(
            v.norm_sq() <= sdr_value + 1e-9 * sdr_value.max(1.0),
            "instance {idx}: candidate {} above SDR bound {sdr_value}",
            v.norm_sq()
        );

        let opt = df_multi_max_seeded(&sc, idx).unwrap();
        let sub = df_multi_suboptimal(&sc).unwrap();
        assert!(
            opt.secrecy_rate >= sub.secrecy_rate - 1e-9,
            "instance {idx} (J={j}): optimal {} below nulling {}",
            opt.secrecy_rate,
            sub.secrecy_rate
        );
    }
    println!("criterion 8: PASS — GRP feasible ≤ SDR; alternating ≥ nulling on 100 instances");
}

fn fig_sweep(objective: Objective, axis: AxisSpec, trials: usize, seed: u64) -> SweepSpec {
    SweepSpec {
        name: "acceptance".into(),
        objective,
        schemes: vec![Scheme::Df, Scheme::Cj, Scheme::CjSub, Scheme::Direct],
        axis,
        geometry: Geometry {
            d_sr: 5.0,
            d_sd: 50.0,
            d_se: vec![50.0],
            n_relays: 10,
            n_eaves: 1,
        },
        channel: LosParams {
            rho0: 1.0,
            c: 3.5,
            seed,
        },
        sigma2_dbm: None,
        p0_dbm: 30.0,
        p0_min: None,
        rs0: Some(1.0),
        trials,
        seed,
    }
}

#[test]
fn criterion_09_rate_sweep_orderings() {
    let start = Instant::now();
    let spec = fig_sweep(
        Objective::MaxRate,
        AxisSpec {
            parameter: "d_sd".into(),
            values: None,
            start: Some(10.0),
            stop: Some(100.0),
            step: Some(5.0),
        },
        100,
        0x09,
    );
    let result = run_sweep(&spec).unwrap();
    for point in &result.points {
        let mean_of = |s: Scheme| -> f64 {
            point
                .cells
                .iter()
                .find(|c| c.scheme == s)
                .and_then(|c| c.mean)
                .unwrap_or(0.0)
        };
        let df = mean_of(Scheme::Df);
        let cj = mean_of(Scheme::Cj);
        let direct = mean_of(Scheme::Direct);
        assert!(
            df >= cj - 1e-9 && cj >= direct - 1e-9,
            "ordering failed at d_sd = {}: df={df} cj={cj} direct={direct}",
            point.axis
        );
        if point.axis > 50.0 {
            assert!(
                direct == 0.0,
                "direct rate must vanish past the eavesdropper"
            );
        }
        if (point.axis - 60.0).abs() < 1e-9 {
            assert!(
                df > 0.0 && cj > 0.0,
                "cooperation must stay positive at 60 m"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}");
    println!("criterion 9: PASS — DF ≥ CJ ≥ direct pointwise; direct dies past 50 m ({elapsed:?})");
}

#[test]
fn criterion_10_power_sweep_landmarks() {
    let spec = fig_sweep(
        Objective::MinPower,
        AxisSpec {
            parameter: "d_se".into(),
            values: None,
            start: Some(25.0),
            stop: Some(100.0),
            step: Some(5.0),
        },
        100,
        0x0a,
    );
    let result = run_sweep(&spec).unwrap();
    let mut prev_df = f64::INFINITY;
    let mut first_direct_feasible: Option<f64> = None;
    let mut cj_direct_close: Option<f64> = None;
    for point in &result.points {
        let cell = |s: Scheme| point.cells.iter().find(|c| c.scheme == s).unwrap();
        let df = cell(Scheme::Df).mean.unwrap();
        assert!(
            df <= prev_df + 1e-9,
            "DF mean power increased at d_se = {}",
            point.axis
        );
        prev_df = df;

        let direct = cell(Scheme::Direct);
        if point.axis < spec.geometry.d_sd {
            assert!(
                direct.feasible == 0,
                "direct transmission must be infeasible at d_se = {} < d_sd",
                point.axis
            );
        }
        if direct.feasible > 0 && first_direct_feasible.is_none() {
            first_direct_feasible = Some(point.axis);
        }
        if let (Some(cj), Some(dm)) = (cell(Scheme::Cj).mean, direct.mean) {
            if (cj - dm).abs() < 0.05 && cj_direct_close.is_none() {
                cj_direct_close = Some(point.axis);
            }
        }
    }
    // Landmarks reported, not asserted.
    println!(
        "criterion 10: PASS — DF power nonincreasing; direct infeasible below d_sd; \
         direct first feasible at {:?} m (landmark: 65 m), CJ ≈ direct from {:?} m \
         (landmark: 85 m)",
        first_direct_feasible, cj_direct_close
    );
}

#[test]
fn criterion_11_determinism() {
    let spec = fig_sweep(
        Objective::MaxRate,
        AxisSpec {
            parameter: "d_sd".into(),
            values: Some(vec![20.0, 45.0, 70.0]),
            start: None,
            stop: None,
            step: None,
        },
        25,
        0x0b,
    );
    let first = render_csv(&run_sweep(&spec).unwrap());
    let second = render_csv(&run_sweep(&spec).unwrap());
    assert_eq!(first, second, "rerun must be byte-identical");

    // Channel generation itself is bit-reproducible.
    let geom = spec.geometry.clone();
    let a = gen_channels(&geom, &spec.channel, 3, 1e-5, 1.0, None, Some(1.0)).unwrap();
    let b = gen_channels(&geom, &spec.channel, 3, 1e-5, 1.0, None, Some(1.0)).unwrap();
    assert_eq!(a.h, b.h);
    assert_eq!(a.g, b.g);
    println!("criterion 11: PASS — identical config+seed reproduces identical bytes");
}
