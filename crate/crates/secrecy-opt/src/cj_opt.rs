//! Cooperative-jamming solvers: alternating secrecy-rate maximization and
//! total-power minimization for a single eavesdropper, the positivity test
//! that gates them, and the z = 0 suboptimal baselines.
//!
//! Both alternating schemes reduce the weight vector to a scalar overlap
//! z = |v1†x|² with the destination direction; the best eavesdropper overlap
//! at given z is the transfer curve G(z)/F(z), leaving two-variable problems
//! solved coordinate-wise with closed-form power steps and safeguarded-Newton
//! overlap steps.

use num_complex::Complex64 as Cplx;

use crate::error::{Error, Result};
use crate::linalg::{constrained_quadratic_max, CVec, Overlap};
use crate::model::{cj_rates, secrecy_rate, Branch, Scenario, SchemeSolution};

/// Alternation stops when the objective moves less than this…
const OBJ_TOL: f64 = 1e-10;
/// …and the variables move less than this.
const VAR_TOL: f64 = 1e-8;
/// Outer iteration cap per start.
const MAX_OUTER: usize = 200;
/// Monotonicity slack per alternation step.
const MONOTONE_SLACK: f64 = 1e-12;
/// Number of multistart seeds.
const N_STARTS: usize = 5;
/// Overlap magnitudes this close to 1 mean h ∥ g: the rank-two geometry is
/// gone and the alternating solvers refuse to run.
const ETA_DEGENERATE: f64 = 1.0 - 1e-12;

/// Problem constants of the scalarized CJ problems. Rate maximization and
/// power minimization use different normalizations (the latter folds in the
/// 2^{rs0} factors), so each gets its own constructor.
#[derive(Clone, Copy, Debug)]
pub struct CjAlphas {
    /// Destination jamming coupling.
    pub a1: f64,
    /// Destination noise floor.
    pub a2: f64,
    /// Eavesdropper jamming coupling.
    pub a3: f64,
    /// Eavesdropper noise floor.
    pub a4: f64,
    /// |v1† v2| with v1 = h/‖h‖, v2 = g/‖g‖.
    pub eta_or_rho: f64,
}

impl CjAlphas {
    /// Rate-maximization constants: α1 = ‖h‖²/|h0|², α2 = σ²/|h0|²,
    /// α3 = ‖g‖²/|g0|², α4 = σ²/|g0|².
    pub fn rate_max(sc: &Scenario) -> Result<Self> {
        let (h0_sq, g0_sq, eta) = Self::gains(sc)?;
        Ok(CjAlphas {
            a1: sc.h.norm_sq() / h0_sq,
            a2: sc.sigma2 / h0_sq,
            a3: sc.g[0].norm_sq() / g0_sq,
            a4: sc.sigma2 / g0_sq,
            eta_or_rho: eta,
        })
    }

    /// Power-minimization constants: the rate-max ones scaled by
    /// (2^{rs0}−1), with the eavesdropper pair further divided by 2^{rs0}.
    pub fn power_min(sc: &Scenario) -> Result<Self> {
        if !(sc.rs0 > 0.0) {
            return Err(Error::contract("CJ power minimization requires rs0 > 0"));
        }
        let (h0_sq, g0_sq, rho) = Self::gains(sc)?;
        let k = 2f64.powf(sc.rs0);
        Ok(CjAlphas {
            a1: sc.h.norm_sq() * (k - 1.0) / h0_sq,
            a2: sc.sigma2 * (k - 1.0) / h0_sq,
            a3: sc.g[0].norm_sq() * (k - 1.0) / (k * g0_sq),
            a4: sc.sigma2 * (k - 1.0) / (k * g0_sq),
            eta_or_rho: rho,
        })
    }

    fn gains(sc: &Scenario) -> Result<(f64, f64, f64)> {
        if sc.n_eaves() != 1 {
            return Err(Error::contract("CJ solvers require J = 1"));
        }
        let h0_sq = sc.h0.norm_sqr();
        let g0_sq = sc.g0[0].norm_sqr();
        if h0_sq <= 0.0 || g0_sq <= 0.0 {
            return Err(Error::contract("CJ solvers require nonzero direct gains"));
        }
        if sc.h.norm_sq() <= 0.0 || sc.g[0].norm_sq() <= 0.0 {
            return Err(Error::degenerate("zero relay channel vector"));
        }
        let v1 = sc.h.normalized()?;
        let v2 = sc.g[0].normalized()?;
        Ok((h0_sq, g0_sq, v1.dot(&v2).norm().min(1.0)))
    }

    fn overlap(&self) -> Result<Overlap> {
        Overlap::new(self.eta_or_rho)
    }
}

/// One (power variable, z, objective) step of an alternating run.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct TraceStep {
    /// `ps` for rate maximization, `γ` for power minimization.
    pub var: f64,
    pub z: f64,
    pub objective: f64,
}

/// Full trace of one alternating start; objectives are monotone
/// (nondecreasing for rate-max, nonincreasing for power-min).
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct AltIterTrace {
    pub steps: Vec<TraceStep>,
    pub converged: bool,
    pub iterations: usize,
}

/// The z-interval on which `curve(z) > β1·z + β2`, where `curve` is the
/// overlap transfer for the given κ. The substitution z = 1/(1+u²) turns the
/// boundary equation into a quadratic in u ≥ 0 with coefficients
/// A = φ(0), B = 2κ√(1−κ²), C = φ(1) for φ(z) = curve(z) − β1z − β2, and
/// concavity of φ makes the positive set an interval.
fn positive_interval(kappa: f64, beta1: f64, beta2: f64) -> Option<(f64, f64)> {
    let k_sq = kappa * kappa;
    let phi0 = (1.0 - k_sq) - beta2;
    let phi1 = k_sq - beta1 - beta2;
    if phi0 > 0.0 && phi1 > 0.0 {
        return Some((0.0, 1.0));
    }
    let b = 2.0 * kappa * (1.0 - k_sq).max(0.0).sqrt();
    let mut roots_u: Vec<f64> = Vec::new();
    if phi0.abs() < 1e-300 {
        // Linear in u.
        if b != 0.0 {
            let u = -phi1 / b;
            if u >= 0.0 {
                roots_u.push(u);
            }
        }
    } else {
        let disc = b * b - 4.0 * phi0 * phi1;
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        // Stable quadratic roots of phi0·u² + b·u + phi1 = 0.
        let q = -0.5 * (b + sq.copysign(if b >= 0.0 { 1.0 } else { -1.0 }));
        let r1 = q / phi0;
        let r2 = if q != 0.0 { phi1 / q } else { f64::NAN };
        for u in [r1, r2] {
            if u.is_finite() && u >= 0.0 {
                roots_u.push(u);
            }
        }
    }
    let mut roots_z: Vec<f64> = roots_u
        .iter()
        .map(|u| (1.0 / (1.0 + u * u)).clamp(0.0, 1.0))
        .collect();
    roots_z.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots_z.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

    let (lo, hi) = match (phi0 > 0.0, phi1 > 0.0) {
        (true, true) => (0.0, 1.0),
        (true, false) => (0.0, *roots_z.first()?),
        (false, true) => (*roots_z.last()?, 1.0),
        (false, false) => {
            if roots_z.len() < 2 {
                return None;
            }
            (roots_z[0], roots_z[roots_z.len() - 1])
        }
    };
    if hi - lo <= 1e-14 {
        return None;
    }
    // Concave φ must be positive at the midpoint; rejects spurious pairs.
    let mid = 0.5 * (lo + hi);
    let curve = Overlap::new(kappa).ok()?;
    if curve.value(mid) - beta1 * mid - beta2 <= 0.0 {
        return None;
    }
    Some((lo, hi))
}

/// Maximizer of K(z) = a3·curve(z) − a1·z on [0, 1]: the unique root of
/// curve'(z) = a1/a3, in the closed form z0 = 1/(1+u0²).
fn transfer_gap_maximizer(kappa: f64, a_ratio: f64) -> f64 {
    if kappa <= 1e-9 {
        return 0.0;
    }
    if kappa >= 1.0 - 1e-9 {
        return if a_ratio < 1.0 { 1.0 } else { 0.0 };
    }
    let s = 2.0 * kappa * kappa - 1.0;
    let cross = 2.0 * kappa * (1.0 - kappa * kappa).sqrt();
    let disc = (a_ratio * a_ratio + 1.0 - 2.0 * a_ratio * s).max(0.0);
    let u0 = (a_ratio - s + disc.sqrt()) / cross;
    1.0 / (1.0 + u0 * u0)
}

/// Whether positive secrecy rate is achievable at all.
///
/// Positive outright when α2 < α4 (stronger direct path); otherwise positive
/// iff `p0` exceeds the threshold `(α2−α4)/K(z0)` at the gap maximizer `z0`.
/// Returns `(positive, z0, threshold)`; the latter two only when computed.
pub fn cj_positivity(sc: &Scenario) -> Result<(bool, Option<f64>, Option<f64>)> {
    let al = CjAlphas::rate_max(sc)?;
    if al.a2 < al.a4 {
        return Ok((true, None, None));
    }
    let z0 = transfer_gap_maximizer(al.eta_or_rho, al.a1 / al.a3);
    let curve = al.overlap()?;
    let k_max = al.a3 * curve.value(z0) - al.a1 * z0;
    if k_max <= 0.0 {
        return Ok((false, Some(z0), None));
    }
    let threshold = (al.a2 - al.a4) / k_max;
    Ok((sc.p0 > threshold, Some(z0), Some(threshold)))
}

/// Secrecy rate (bits/s/Hz, unclamped) of the scalarized problem.
fn rate_objective(al: &CjAlphas, curve: &Overlap, p0: f64, ps: f64, z: f64) -> f64 {
    let rem = (p0 - ps).max(0.0);
    let den_d = rem * al.a1 * z + al.a2;
    let den_e = rem * al.a3 * curve.value(z) + al.a4;
    (1.0 + ps / den_d).log2() - (1.0 + ps / den_e).log2()
}

/// Best source power for a fixed overlap z: endpoints {0, p0} plus the real
/// roots of the stationarity quadratic A1·Ps² + B1·Ps + C1 = 0.
pub fn cj_ps_given_z(al: &CjAlphas, p0: f64, z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::contract(format!(
            "cj_ps_given_z: z = {z} outside [0,1]"
        )));
    }
    let curve = al.overlap()?;
    let g = curve.value(z);
    let a1 = p0 * al.a1 * z + al.a2;
    let b1 = al.a1 * z;
    let c1 = p0 * al.a3 * g + al.a4;
    let d1 = al.a3 * g;

    let qa = a1 * d1 * (1.0 - d1) - b1 * c1 * (1.0 - b1);
    let qb = 2.0 * a1 * c1 * (d1 - b1);
    let qc = a1 * c1 * (a1 - c1);

    let mut candidates = vec![0.0, p0];
    let scale = qa.abs().max(qb.abs()).max(qc.abs());
    if scale > 0.0 {
        if qa.abs() <= 1e-14 * scale {
            if qb.abs() > 1e-14 * scale {
                candidates.push(-qc / qb);
            }
        } else {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                let q = -0.5 * (qb + sq.copysign(if qb >= 0.0 { 1.0 } else { -1.0 }));
                if q != 0.0 {
                    candidates.push(q / qa);
                    candidates.push(qc / q);
                } else {
                    candidates.push(0.0);
                }
            }
        }
    }

    let mut best = (f64::NEG_INFINITY, 0.0);
    for ps in candidates {
        if !ps.is_finite() || !(0.0..=p0).contains(&ps) {
            continue;
        }
        let v = rate_objective(al, &curve, p0, ps, z);
        if v > best.0 {
            best = (v, ps);
        }
    }
    Ok(best.1)
}

/// d/dz and d²/dz² of the secrecy rate at fixed ps (natural log; the root
/// set is base-independent).
fn rate_dz(al: &CjAlphas, curve: &Overlap, p0: f64, ps: f64, z: f64) -> (f64, f64) {
    let rem = p0 - ps;
    let den_d = rem * al.a1 * z + al.a2;
    let den_e = rem * al.a3 * curve.value(z) + al.a4;
    let g1 = curve.d1(z);
    let g2 = curve.d2(z);

    let e_prod = den_e * (den_e + ps);
    let d_prod = den_d * (den_d + ps);
    let term_e = al.a3 * g1 / e_prod;
    let term_d = al.a1 / d_prod;
    let first = ps * rem * (term_e - term_d);

    let e_prod_dz = rem * al.a3 * g1 * (2.0 * den_e + ps);
    let d_prod_dz = rem * al.a1 * (2.0 * den_d + ps);
    let term_e_dz = (al.a3 * g2 * e_prod - al.a3 * g1 * e_prod_dz) / (e_prod * e_prod);
    let term_d_dz = -al.a1 * d_prod_dz / (d_prod * d_prod);
    let second = ps * rem * (term_e_dz - term_d_dz);
    (first, second)
}

/// Best overlap z for a fixed source power: the unique stationary point of
/// R_s(z) inside the positive-rate interval, found by safeguarded Newton.
pub fn cj_z_given_ps(al: &CjAlphas, p0: f64, ps: f64) -> Result<f64> {
    if !(ps > 0.0 && ps < p0) {
        return Err(Error::contract(format!(
            "cj_z_given_ps: ps = {ps} outside (0, p0 = {p0})"
        )));
    }
    let curve = al.overlap()?;
    let beta1 = al.a1 / al.a3;
    let beta2 = (al.a2 - al.a4) / ((p0 - ps) * al.a3);
    let (lo, hi) = positive_interval(al.eta_or_rho, beta1, beta2).ok_or_else(|| {
        Error::infeasible(format!(
            "cj_z_given_ps: no positive-rate overlap interval at ps = {ps}"
        ))
    })?;
    let f = |z: f64| rate_dz(al, &curve, p0, ps, z);
    safeguarded_newton(f, lo, hi, 1e-10)
}

/// Newton iteration on f(z) = 0 restricted to a sign-bracketing interval;
/// steps leaving the bracket fall back to bisection. Expects f > 0 near `lo`
/// and f < 0 near `hi` (the unimodal-derivative pattern of both CJ inner
/// problems).
fn safeguarded_newton(f: impl Fn(f64) -> (f64, f64), lo: f64, hi: f64, f_tol: f64) -> Result<f64> {
    let width = hi - lo;
    let eps0 = 1e-9 * width;
    let mut a = lo + eps0;
    let mut b = hi - eps0;

    // Push the endpoints inward until the expected sign pattern shows up;
    // the transfer curve's endpoint singularities guarantee it appears.
    let mut fa = f(a).0;
    let mut guard = 0;
    while fa <= 0.0 && guard < 60 {
        a = lo + (a - lo) * 0.25;
        fa = f(a).0;
        guard += 1;
    }
    let mut fb = f(b).0;
    guard = 0;
    while fb >= 0.0 && guard < 60 {
        b = hi - (hi - b) * 0.25;
        fb = f(b).0;
        guard += 1;
    }
    if fa <= 0.0 || fb >= 0.0 {
        // No interior sign change: the stationary point sits on (or beyond)
        // the interval edge; return the better endpoint.
        return Ok(if fa <= 0.0 { a } else { b });
    }

    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx.abs() <= f_tol || fx == 0.0 {
            return Ok(x);
        }
        if fx > 0.0 {
            a = x;
        } else {
            b = x;
        }
        let newton = x - fx / dfx;
        x = if newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if b - a <= 4.0 * f64::EPSILON * b.abs().max(1e-3) {
            return Ok(0.5 * (a + b));
        }
    }
    Ok(0.5 * (a + b))
}

/// Suboptimal CJ rate maximization with the jamming nulled at the
/// destination (z = 0 fixed): three-branch closed-form source power.
pub fn cj_suboptimal_maxrate(sc: &Scenario) -> Result<SchemeSolution> {
    let al = CjAlphas::rate_max(sc)?;
    let curve = al.overlap()?;
    let eta = al.eta_or_rho;
    let d2 = al.a3 * (1.0 - eta * eta);
    let c3 = al.a4 + sc.p0 * d2;

    let mut root_choice = None;
    let ps = if al.a2 > al.a4 && d2 > 0.0 && sc.p0 < (al.a2 - al.a4) / d2 {
        root_choice = Some("branch-1: no positive rate at z = 0".to_string());
        0.0
    } else if (sc.p0 + al.a4) * al.a4 > (sc.p0 + al.a2) * (sc.p0 * d2 + al.a4) {
        root_choice = Some("branch-2: rate still increasing at ps = p0".to_string());
        sc.p0
    } else {
        // Stationary candidates of the z = 0 objective:
        //   d2(1−d2)·Ps² + 2·c3·d2·Ps − c3(c3−α2) = 0.
        let qa = d2 * (1.0 - d2);
        let qb = 2.0 * c3 * d2;
        let qc = -c3 * (c3 - al.a2);
        let mut candidates = vec![0.0, sc.p0];
        let scale = qa.abs().max(qb.abs()).max(qc.abs());
        let mut roots = Vec::new();
        if scale > 0.0 {
            if qa.abs() <= 1e-14 * scale {
                if qb.abs() > 1e-14 * scale {
                    roots.push(-qc / qb);
                }
            } else {
                let disc = qb * qb - 4.0 * qa * qc;
                if disc >= 0.0 {
                    let sq = disc.sqrt();
                    let q = -0.5 * (qb + sq.copysign(if qb >= 0.0 { 1.0 } else { -1.0 }));
                    if q != 0.0 {
                        roots.push(q / qa);
                        roots.push(qc / q);
                    }
                }
            }
        }
        candidates.extend(roots.iter().copied());
        let mut best = (f64::NEG_INFINITY, 0.0);
        for (idx, ps) in candidates.iter().enumerate() {
            if !ps.is_finite() || !(0.0..=sc.p0).contains(ps) {
                continue;
            }
            let v = rate_objective(&al, &curve, sc.p0, *ps, 0.0);
            if v > best.0 {
                best = (v, *ps);
                if idx >= 2 {
                    root_choice = Some(format!("branch-3: interior root {} of 2", idx - 1));
                }
            }
        }
        best.1
    };

    let w = if ps < sc.p0 {
        let v1 = sc.h.normalized()?;
        let v2 = sc.g[0].normalized()?;
        let (x, _) = constrained_quadratic_max(&v1, &v2, 0.0)?;
        x.scale(Cplx::new((sc.p0 - ps).sqrt(), 0.0))
    } else {
        CVec::zeros(sc.n_relays())
    };
    let (rd, re) = cj_rates(sc, ps, &w)?;
    let mut sol = SchemeSolution::new(ps, w, secrecy_rate(rd, &re), Branch::CjSuboptimalRate);
    sol.diagnostics.root_choice = root_choice;
    Ok(sol)
}

/// Alternating secrecy-rate maximization (multistart), returning the best
/// solution and every start's trace.
pub fn cj_max_secrecy_traced(sc: &Scenario) -> Result<(SchemeSolution, Vec<AltIterTrace>)> {
    let al = CjAlphas::rate_max(sc)?;
    if al.eta_or_rho >= ETA_DEGENERATE {
        return Err(Error::degenerate(
            "cj_max_secrecy: h and g are numerically collinear",
        ));
    }
    let curve = al.overlap()?;
    let (positive, z0, _) = cj_positivity(sc)?;
    if !positive {
        // No operating point achieves positive secrecy rate; report the
        // clamped-zero solution rather than erroring, so sweeps can average.
        let mut sol =
            SchemeSolution::new(0.0, CVec::zeros(sc.n_relays()), 0.0, Branch::CjAlternating);
        sol.warn("positivity condition fails: secrecy rate is zero for all (ps, w)");
        return Ok((sol, Vec::new()));
    }

    let mut seeds = rate_max_seeds(&al, sc.p0, z0);
    // Warm start from the z = 0 suboptimal solution: the z-step at its
    // source power can only improve on it (the transfer curve is continuous
    // at 0), which makes dominance over the baseline structural.
    if let Ok(sub) = cj_suboptimal_maxrate(sc) {
        if sub.ps > 0.0 && sub.ps < sc.p0 {
            if let Ok(z_warm) = cj_z_given_ps(&al, sc.p0, sub.ps) {
                seeds.pop();
                seeds.push(z_warm);
            }
        }
    }
    let mut traces = Vec::new();
    let mut best: Option<(f64, f64, f64, AltIterTrace)> = None; // (obj, ps, z)

    for seed in seeds {
        let run = alternate_rate_max(&al, &curve, sc.p0, seed)?;
        let (obj, ps, z, trace) = run;
        traces.push(trace.clone());
        if best.as_ref().is_none_or(|(b, ..)| obj > *b) {
            best = Some((obj, ps, z, trace));
        }
    }
    let (obj, ps, z, trace) =
        best.ok_or_else(|| Error::numerical("cj_max_secrecy: no start produced an iterate"))?;

    let w = if ps < sc.p0 {
        let v1 = sc.h.normalized()?;
        let v2 = sc.g[0].normalized()?;
        let (x, _) = constrained_quadratic_max(&v1, &v2, z)?;
        x.scale(Cplx::new((sc.p0 - ps).sqrt(), 0.0))
    } else {
        CVec::zeros(sc.n_relays())
    };
    let sol = SchemeSolution::new(ps, w, obj.max(0.0), Branch::CjAlternating)
        .with_iterations(trace.iterations, trace.converged);
    Ok((sol, traces))
}

/// Alternating secrecy-rate maximization for CJ with one eavesdropper.
pub fn cj_max_secrecy(sc: &Scenario) -> Result<SchemeSolution> {
    cj_max_secrecy_traced(sc).map(|(sol, _)| sol)
}

fn rate_max_seeds(al: &CjAlphas, p0: f64, z0: Option<f64>) -> Vec<f64> {
    let beta1 = al.a1 / al.a3;
    let mut seeds = Vec::new();
    // Primary seed: midpoint of the positive-rate interval at ps = p0/2.
    if let Some((lo, hi)) =
        positive_interval(al.eta_or_rho, beta1, (al.a2 - al.a4) / ((p0 / 2.0) * al.a3))
    {
        seeds.push(0.5 * (lo + hi));
    }
    // Gap maximizer: guaranteed feasible whenever positivity holds.
    let z0 = z0.unwrap_or_else(|| transfer_gap_maximizer(al.eta_or_rho, beta1));
    seeds.push(z0);
    // Noise-floor ladder: with a strong destination link the stationary
    // overlap sits where jamming leakage is comparable to the noise floor,
    // z ~ α2/(α1·p0), which can be many decades below the feasibility
    // interval's midpoint. Seeding only from the interval parks the first
    // power step at ps = p0 (jamming off), a fixed point of the alternation.
    let znf = (al.a2 / (al.a1 * p0)).clamp(1e-300, 0.5);
    seeds.push(znf);
    seeds.push((znf * 1e-5).max(1e-300));
    seeds.push((znf * 1e3).min(0.9));
    seeds.retain(|z| z.is_finite() && (0.0..=1.0).contains(z));
    seeds.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    seeds.truncate(N_STARTS);
    if seeds.is_empty() {
        seeds.push(0.5);
    }
    seeds
}

fn alternate_rate_max(
    al: &CjAlphas,
    curve: &Overlap,
    p0: f64,
    z_seed: f64,
) -> Result<(f64, f64, f64, AltIterTrace)> {
    let mut z = z_seed;
    let mut ps;
    let mut obj = f64::NEG_INFINITY;
    let mut trace = AltIterTrace::default();

    for iter in 0..MAX_OUTER {
        ps = cj_ps_given_z(al, p0, z)?;
        let new_obj = rate_objective(al, curve, p0, ps, z);
        check_monotone_up(obj, new_obj)?;
        let prev_obj = obj;
        let prev_z = z;
        obj = new_obj;
        trace.steps.push(TraceStep {
            var: ps,
            z,
            objective: obj,
        });

        if ps <= 0.0 || ps >= p0 {
            // Degenerate power split: the z-subproblem is undefined and the
            // objective no longer depends on z. Converged.
            trace.converged = true;
            trace.iterations = iter + 1;
            return Ok((obj, ps.clamp(0.0, p0), z, trace));
        }

        match cj_z_given_ps(al, p0, ps) {
            Ok(z_new) => z = z_new,
            Err(Error::Infeasible(_)) => {
                trace.converged = true;
                trace.iterations = iter + 1;
                return Ok((obj, ps, z, trace));
            }
            Err(e) => return Err(e),
        }
        let new_obj = rate_objective(al, curve, p0, ps, z);
        check_monotone_up(obj, new_obj)?;
        obj = new_obj;
        trace.steps.push(TraceStep {
            var: ps,
            z,
            objective: obj,
        });

        if iter > 0 && (obj - prev_obj).abs() < OBJ_TOL && (z - prev_z).abs() < VAR_TOL {
            trace.converged = true;
            trace.iterations = iter + 1;
            return Ok((obj, ps, z, trace));
        }
    }
    trace.converged = false;
    trace.iterations = MAX_OUTER;
    let last = trace.steps.last().unwrap();
    Ok((last.objective, last.var, last.z, trace))
}

fn check_monotone_up(prev: f64, new: f64) -> Result<()> {
    if prev.is_finite() && new < prev - MONOTONE_SLACK * prev.abs().max(1.0) {
        return Err(Error::numerical(format!(
            "alternating step decreased the objective: {prev:.12e} → {new:.12e}"
        )));
    }
    Ok(())
}

fn check_monotone_down(prev: f64, new: f64) -> Result<()> {
    if prev.is_finite() && new > prev + MONOTONE_SLACK * prev.abs().max(1.0) {
        return Err(Error::numerical(format!(
            "alternating step increased the total power: {prev:.12e} → {new:.12e}"
        )));
    }
    Ok(())
}

/// Jamming power minimizing `P_0(γ) = P_s(γ, z) + γ` at fixed overlap z,
/// clamped at zero:
///   γ(z) = max{ (√f₁(z) − (α4−α2)) / (α3F(z)−α1z), 0 },
///   f₁(z) = (α2α3F(z) − α1α4z)² / (α3F(z) − α1z + α1α3·z·F(z)).
pub fn cj_gamma_given_z(al: &CjAlphas, z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::contract(format!(
            "cj_gamma_given_z: z = {z} outside [0,1]"
        )));
    }
    let curve = al.overlap()?;
    let fz = curve.value(z);
    let d = al.a3 * fz - al.a1 * z;
    if d <= 0.0 {
        return Err(Error::infeasible(format!(
            "cj_gamma_given_z: α3F(z) − α1z = {d:.3e} ≤ 0 at z = {z}"
        )));
    }
    let denom = d + al.a1 * al.a3 * z * fz;
    let num = al.a2 * al.a3 * fz - al.a1 * al.a4 * z;
    let f1 = num * num / denom;
    Ok(((f1.sqrt() - (al.a4 - al.a2)) / d).max(0.0))
}

/// The secrecy-constraint function `f_γ(z) = 1/(γα1z+α2) − 1/(γα3F(z)+α4)`;
/// its maximizer minimizes `P_s = 1/f_γ(z)`.
fn constraint_fn(al: &CjAlphas, curve: &Overlap, gamma: f64, z: f64) -> f64 {
    1.0 / (gamma * al.a1 * z + al.a2) - 1.0 / (gamma * al.a3 * curve.value(z) + al.a4)
}

fn constraint_dz(al: &CjAlphas, curve: &Overlap, gamma: f64, z: f64) -> (f64, f64) {
    let den_d = gamma * al.a1 * z + al.a2;
    let den_e = gamma * al.a3 * curve.value(z) + al.a4;
    let g1 = curve.d1(z);
    let g2 = curve.d2(z);
    let first = -gamma * al.a1 / (den_d * den_d) + gamma * al.a3 * g1 / (den_e * den_e);
    let second = 2.0 * (gamma * al.a1) * (gamma * al.a1) / (den_d * den_d * den_d)
        + gamma * al.a3 * g2 / (den_e * den_e)
        - 2.0 * (gamma * al.a3 * g1) * (gamma * al.a3 * g1) / (den_e * den_e * den_e);
    (first, second)
}

/// Best overlap for a fixed jamming power γ > 0: the unique stationary point
/// of f_γ on its feasibility interval, via safeguarded Newton.
///
/// The αs are normalized by α4 internally (the root is invariant, the
/// conditioning is not), so the 1e-12 derivative target is meaningful across
/// power scales.
pub fn cj_z_given_gamma(al: &CjAlphas, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::contract(format!(
            "cj_z_given_gamma: gamma = {gamma} must be > 0"
        )));
    }
    let scale = al.a4;
    let aln = CjAlphas {
        a1: al.a1 / scale,
        a2: al.a2 / scale,
        a3: al.a3 / scale,
        a4: 1.0,
        eta_or_rho: al.eta_or_rho,
    };
    let curve = aln.overlap()?;
    let beta1 = aln.a1 / aln.a3;
    let beta2 = (aln.a2 - aln.a4) / (gamma * aln.a3);
    let (lo, hi) = positive_interval(aln.eta_or_rho, beta1, beta2).ok_or_else(|| {
        Error::infeasible(format!(
            "cj_z_given_gamma: no feasible overlap interval at gamma = {gamma}"
        ))
    })?;
    let f = |z: f64| constraint_dz(&aln, &curve, gamma, z);
    safeguarded_newton(f, lo, hi, 1e-12)
}

/// Suboptimal CJ power minimization with jamming nulled at the destination
/// (z = 0 fixed): closed-form γ and source power.
pub fn cj_suboptimal_minpower(sc: &Scenario) -> Result<SchemeSolution> {
    let al = CjAlphas::power_min(sc)?;
    let rho = al.eta_or_rho;
    let d2 = al.a3 * (1.0 - rho * rho);
    if d2 <= 0.0 {
        return Err(Error::degenerate(
            "cj_suboptimal_minpower: h and g are collinear",
        ));
    }
    let gamma = if al.a4 / al.a2 > 1.0 + d2.sqrt() {
        0.0
    } else {
        (al.a2 * d2.sqrt() + al.a2 - al.a4) / d2
    };
    let b = gamma * d2 + al.a4;
    let inv_ps = 1.0 / al.a2 - 1.0 / b;
    if inv_ps <= 0.0 {
        return Err(Error::infeasible(
            "cj_suboptimal_minpower: secrecy constraint unreachable with z = 0 jamming",
        ));
    }
    let ps = 1.0 / inv_ps;
    let w = if gamma > 0.0 {
        let v1 = sc.h.normalized()?;
        let v2 = sc.g[0].normalized()?;
        let (x, _) = constrained_quadratic_max(&v1, &v2, 0.0)?;
        x.scale(Cplx::new(gamma.sqrt(), 0.0))
    } else {
        CVec::zeros(sc.n_relays())
    };
    Ok(SchemeSolution::new(
        ps,
        w,
        sc.rs0,
        Branch::CjSuboptimalPower,
    ))
}

/// Alternating total-power minimization (multistart) with traces.
pub fn cj_min_power_traced(sc: &Scenario) -> Result<(SchemeSolution, Vec<AltIterTrace>)> {
    let al = CjAlphas::power_min(sc)?;
    if al.eta_or_rho >= ETA_DEGENERATE {
        return Err(Error::degenerate(
            "cj_min_power: h and g are numerically collinear",
        ));
    }
    let curve = al.overlap()?;

    // Source-only candidate (γ = 0) exists iff α2 < α4.
    let source_only: Option<f64> = if al.a2 < al.a4 {
        Some(1.0 / (1.0 / al.a2 - 1.0 / al.a4))
    } else {
        None
    };

    let mut seeds = min_power_seeds(&al);
    // Warm start from the z = 0 suboptimal solution: the z-step at γ_sub
    // already matches or beats it, making dominance over the baseline
    // structural.
    if let Ok(sub) = cj_suboptimal_minpower(sc) {
        let gamma_sub = sub.w.norm_sq();
        if gamma_sub > 0.0 {
            if let Ok(z_warm) = cj_z_given_gamma(&al, gamma_sub) {
                seeds.pop();
                seeds.push(z_warm);
            }
        }
    }
    let mut traces = Vec::new();
    let mut best: Option<(f64, f64, f64, AltIterTrace)> = None; // (total, gamma, z)

    for seed in seeds {
        match alternate_min_power(&al, &curve, seed) {
            Ok((total, gamma, z, trace)) => {
                traces.push(trace.clone());
                if best.as_ref().is_none_or(|(b, ..)| total < *b) {
                    best = Some((total, gamma, z, trace));
                }
            }
            Err(Error::Infeasible(_)) => continue,
            Err(e) => return Err(e),
        }
    }

    match (best, source_only) {
        (None, None) => Err(Error::infeasible(
            "cj_min_power: no feasible (gamma, z) found and direct transmission \
             cannot meet the constraint",
        )),
        (None, Some(ps)) => Ok((source_only_solution(sc, ps), Vec::new())),
        (Some((total, gamma, z, trace)), so) => {
            if let Some(ps) = so {
                if ps < total {
                    return Ok((source_only_solution(sc, ps), traces));
                }
            }
            let ps = 1.0 / constraint_fn(&al, &curve, gamma, z);
            let w = if gamma > 0.0 {
                let v1 = sc.h.normalized()?;
                let v2 = sc.g[0].normalized()?;
                let (x, _) = constrained_quadratic_max(&v1, &v2, z)?;
                x.scale(Cplx::new(gamma.sqrt(), 0.0))
            } else {
                CVec::zeros(sc.n_relays())
            };
            let branch = if gamma > 0.0 {
                Branch::CjAlternatingMinPower
            } else {
                Branch::CjMinPowerSourceOnly
            };
            debug_assert!((ps + gamma - total).abs() <= 1e-9 * total.max(1.0));
            let sol = SchemeSolution::new(ps, w, sc.rs0, branch)
                .with_iterations(trace.iterations, trace.converged);
            Ok((sol, traces))
        }
    }
}

/// Alternating total-power minimization for CJ with one eavesdropper.
pub fn cj_min_power(sc: &Scenario) -> Result<SchemeSolution> {
    cj_min_power_traced(sc).map(|(sol, _)| sol)
}

fn source_only_solution(sc: &Scenario, ps: f64) -> SchemeSolution {
    SchemeSolution::new(
        ps,
        CVec::zeros(sc.n_relays()),
        sc.rs0,
        Branch::CjMinPowerSourceOnly,
    )
}

fn min_power_seeds(al: &CjAlphas) -> Vec<f64> {
    let beta1 = al.a1 / al.a3;
    let z0 = transfer_gap_maximizer(al.eta_or_rho, beta1);
    let mut seeds = vec![z0];
    if let Some((lo, hi)) = positive_interval(al.eta_or_rho, beta1, 0.0) {
        for frac in [0.25, 0.75] {
            seeds.push(lo + frac * (hi - lo));
        }
    }
    // Near-zero seed for the regime where jamming must stay clear of the
    // destination (see the rate-max noise-floor ladder).
    seeds.push(1e-9);
    seeds.retain(|z| z.is_finite() && (0.0..=1.0).contains(z));
    seeds.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    seeds.truncate(N_STARTS);
    if seeds.is_empty() {
        seeds.push(0.5);
    }
    seeds
}

fn alternate_min_power(
    al: &CjAlphas,
    curve: &Overlap,
    z_seed: f64,
) -> Result<(f64, f64, f64, AltIterTrace)> {
    let mut z = z_seed;
    let mut gamma;
    let mut total = f64::INFINITY;
    let mut trace = AltIterTrace::default();

    for iter in 0..MAX_OUTER {
        gamma = cj_gamma_given_z(al, z)?;
        if gamma == 0.0 {
            // Clamp active: source-only is optimal for this overlap (and
            // then z no longer matters).
            let fz = constraint_fn(al, curve, 1e-300, z);
            if fz <= 0.0 {
                return Err(Error::infeasible(
                    "cj_min_power: source-only constraint unreachable",
                ));
            }
            let new_total = 1.0 / fz;
            check_monotone_down(total, new_total)?;
            trace.steps.push(TraceStep {
                var: 0.0,
                z,
                objective: new_total,
            });
            trace.converged = true;
            trace.iterations = iter + 1;
            return Ok((new_total, 0.0, z, trace));
        }
        let fz = constraint_fn(al, curve, gamma, z);
        if fz <= 0.0 {
            return Err(Error::infeasible(
                "cj_min_power: constraint value non-positive after gamma step",
            ));
        }
        let new_total = 1.0 / fz + gamma;
        check_monotone_down(total, new_total)?;
        let prev_total = total;
        let prev_z = z;
        total = new_total;
        trace.steps.push(TraceStep {
            var: gamma,
            z,
            objective: total,
        });

        z = cj_z_given_gamma(al, gamma)?;
        let fz = constraint_fn(al, curve, gamma, z);
        if fz <= 0.0 {
            return Err(Error::infeasible(
                "cj_min_power: constraint value non-positive after z step",
            ));
        }
        let new_total = 1.0 / fz + gamma;
        check_monotone_down(total, new_total)?;
        total = new_total;
        trace.steps.push(TraceStep {
            var: gamma,
            z,
            objective: total,
        });

        if iter > 0
            && (total - prev_total).abs() < OBJ_TOL.max(1e-14 * total)
            && (z - prev_z).abs() < VAR_TOL
        {
            trace.converged = true;
            trace.iterations = iter + 1;
            return Ok((total, gamma, z, trace));
        }
    }
    trace.converged = false;
    trace.iterations = MAX_OUTER;
    let last = trace.steps.last().unwrap();
    Ok((last.objective, last.var, last.z, trace))
}
