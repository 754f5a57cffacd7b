//! Decode-and-forward secrecy-rate maximization against multiple
//! eavesdroppers: alternating optimization where the source-power step walks
//! the vertices of an upper envelope of affine functions and the weight step
//! solves a QCQP through its semidefinite relaxation, with exact rank-one
//! extraction for two eavesdroppers and Gaussian randomization beyond.

use num_complex::Complex64 as Cplx;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, CMat, CVec};
use crate::model::{Branch, Scenario, SchemeSolution};
use crate::{df_opt, sdp};

/// Gaussian randomization sample count.
const GRP_SAMPLES: usize = 1000;
/// Eigenvalue-ratio cutoff treating the SDR optimizer as rank one.
const RANK_ONE_RATIO: f64 = 1e-8;
/// Outer alternation cap.
const MAX_OUTER: usize = 100;
/// Objective-change convergence threshold.
const OBJ_TOL: f64 = 1e-10;
/// Retries of a non-improving GRP step before stopping.
const GRP_RETRIES: usize = 5;

/// Upper envelope of the J affine functions
/// `φ_j(ps) = σ² + ps|g0j|² + (p0−ps)·x†R_g^j x` over `[p0_min, p0]`.
#[derive(Clone, Debug)]
pub struct PolygonalEnvelope {
    /// Vertex abscissae, strictly increasing, first = p0_min, last = p0.
    pub breakpoints: Vec<f64>,
    /// Index of the active (maximal) function on each open segment;
    /// `active_index[k]` covers `(breakpoints[k], breakpoints[k+1])`.
    pub active_index: Vec<usize>,
}

/// Affine coefficients (slope, intercept) of the eavesdropper denominators
/// for a fixed unit direction x.
fn eave_lines(sc: &Scenario, x: &CVec) -> Vec<(f64, f64)> {
    sc.g0
        .iter()
        .zip(sc.g.iter())
        .map(|(g0j, gj)| {
            let coupling = gj.dot(x).norm_sqr();
            let slope = g0j.norm_sqr() - coupling;
            let intercept = sc.sigma2 + sc.p0 * coupling;
            (slope, intercept)
        })
        .collect()
}

/// Builds the upper envelope of the J eavesdropper lines on [p0_min, p0].
pub fn build_envelope(sc: &Scenario, x: &CVec) -> Result<PolygonalEnvelope> {
    let lines = eave_lines(sc, x);
    let lo = sc.p0_min;
    let hi = sc.p0;
    let eval = |j: usize, ps: f64| lines[j].0 * ps + lines[j].1;
    let argmax_at = |ps: f64| -> usize {
        let mut best = 0usize;
        let mut best_v = f64::NEG_INFINITY;
        for (j, _) in lines.iter().enumerate() {
            let v = eval(j, ps);
            if v > best_v {
                best_v = v;
                best = j;
            }
        }
        best
    };

    // Candidate vertices: pairwise crossings inside (lo, hi) that lie on the
    // envelope, plus both endpoints.
    let mut pts = vec![lo, hi];
    for j in 0..lines.len() {
        for k in (j + 1)..lines.len() {
            let dm = lines[j].0 - lines[k].0;
            if dm.abs() <= f64::EPSILON * (lines[j].0.abs() + lines[k].0.abs()) {
                continue; // parallel
            }
            let ps = (lines[k].1 - lines[j].1) / dm;
            if ps > lo && ps < hi {
                let arg = argmax_at(ps);
                let tol = 1e-12 * eval(arg, ps).abs().max(1.0);
                if (eval(j, ps) - eval(arg, ps)).abs() <= tol {
                    pts.push(ps);
                }
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * hi.max(1.0));

    let active: Vec<usize> = pts
        .windows(2)
        .map(|seg| argmax_at(0.5 * (seg[0] + seg[1])))
        .collect();
    Ok(PolygonalEnvelope {
        breakpoints: pts,
        active_index: active,
    })
}

/// Worst-case (min over j) DF objective ratio at a (ps, x) pair.
pub fn min_ratio(sc: &Scenario, ps: f64, x: &CVec) -> f64 {
    let num = sc.sigma2 + ps * sc.h0.norm_sqr() + (sc.p0 - ps) * sc.h.dot(x).norm_sqr();
    let den = eave_lines(sc, x)
        .iter()
        .map(|(m, b)| m * ps + b)
        .fold(f64::NEG_INFINITY, f64::max);
    num / den
}

/// Best source power for a fixed unit direction x: the objective is a ratio
/// of affines on each envelope segment, hence quasi-linear there, so only
/// envelope vertices and the interval endpoints can be optimal.
pub fn ps_polygonal_search(sc: &Scenario, x: &CVec) -> Result<f64> {
    if (x.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::contract("ps_polygonal_search: x must be unit-norm"));
    }
    let env = build_envelope(sc, x)?;
    let mut best = (f64::NEG_INFINITY, sc.p0_min);
    for &ps in &env.breakpoints {
        let v = min_ratio(sc, ps, x);
        if v > best.0 {
            best = (v, ps);
        }
    }
    Ok(best.1)
}

/// QCQP data for the fixed-ps weight subproblem: `A_j = R̃_h^{−1/2} R̃_g^j
/// R̃_h^{−1/2}` together with the inverse square root used to map the QCQP
/// optimizer back to a unit direction.
#[derive(Clone, Debug)]
pub struct QcqpInstance {
    pub a: Vec<CMat>,
    pub rh_inv_sqrt: CMat,
}

/// Builds the QCQP matrices at source power `ps`:
///   R̃_h = (σ² + ps|h0|²)I + (p0−ps)R_h,
///   R̃_g^j = (σ² + ps|g0j|²)I + (p0−ps)R_g^j.
pub fn build_qcqp(sc: &Scenario, ps: f64) -> Result<QcqpInstance> {
    if !(sc.p0_min - 1e-12..=sc.p0 + 1e-12).contains(&ps) {
        return Err(Error::contract(format!(
            "build_qcqp: ps = {ps} outside [p0_min, p0]"
        )));
    }
    let n = sc.n_relays();
    let rem = (sc.p0 - ps).max(0.0);
    let rh =
        CMat::scaled_identity(n, sc.sigma2 + ps * sc.h0.norm_sqr()).add(&sc.h.outer().scale(rem));
    let rh_inv_sqrt = rh.inv_sqrt_pd()?;
    let a = sc
        .g0
        .iter()
        .zip(sc.g.iter())
        .map(|(g0j, gj)| {
            let rg = CMat::scaled_identity(n, sc.sigma2 + ps * g0j.norm_sqr())
                .add(&gj.outer().scale(rem));
            rh_inv_sqrt.mul(&rg).mul(&rh_inv_sqrt).hermitian_part()
        })
        .collect();
    Ok(QcqpInstance { a, rh_inv_sqrt })
}

/// Solves `max ‖v‖² s.t. v†A_j v ≤ 1` through the SDR.
///
/// Returns the extracted vector, the SDR optimum (an upper bound on `‖v‖²`,
/// attained when `tight`), and whether extraction was exact. Rank-one SDR
/// optimizers extract directly; two constraints always admit an exact
/// rank-one reduction on the optimal face; otherwise Gaussian randomization
/// with `seed` produces a feasible candidate.
pub fn solve_qcqp(q: &QcqpInstance, seed: u64) -> Result<(CVec, f64, bool)> {
    let res = sdp::solve(&q.a)?;
    if res.status == sdp::SdpStatus::InfeasibleNumeric {
        return Err(Error::numerical("solve_qcqp: SDP solver failed"));
    }
    // Ill-conditioned instances can stall the interior-point run before the
    // target complementarity; the best iterate is still a usable candidate
    // source, but extraction is no longer certified exact.
    let solver_exact = res.status == sdp::SdpStatus::Optimal;
    // The dual objective is a certified upper bound on any feasible value
    // (weak duality with a maintained-PD dual slack); the primal trace can
    // sit a solver-gap below it.
    let sdr_value: f64 = res.duals.iter().sum();
    let eig = herm_eig(&res.z_opt)?;
    let top = eig.eigenvalues[0].max(0.0);
    let rank = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > RANK_ONE_RATIO * top)
        .count()
        .max(1);

    // Rank-one optimizer (or a rescued rank-one candidate on the optimal
    // face): scale the top eigenvector to exact feasibility.
    let top_candidate = {
        let v = eig.eigenvectors[0].scale(Cplx::new(top.sqrt(), 0.0));
        rescale_feasible(&q.a, &v)
    };
    if rank == 1 {
        return Ok((top_candidate.0, sdr_value, solver_exact));
    }
    if solver_exact && top_candidate.1 >= sdr_value * (1.0 - 1e-8) {
        return Ok((top_candidate.0, sdr_value, true));
    }
    if solver_exact && q.a.len() == 2 {
        let v = rank_one_reduce_two_constraints(&res.z_opt, &q.a)?;
        let (v, value) = rescale_feasible(&q.a, &v);
        if value < sdr_value * (1.0 - 1e-6) {
            return Err(Error::numerical(format!(
                "solve_qcqp: rank-one reduction lost value ({value:.6e} vs SDR \
                 {sdr_value:.6e})"
            )));
        }
        return Ok((v, sdr_value, true));
    }

    // Gaussian randomization: v_l = U D^{1/2} ξ_l scaled onto the constraint
    // boundary; keep the first best by sample index. The top eigenvector
    // candidate competes as the starting incumbent.
    let n = res.z_opt.n_rows;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(CVec, f64)> = Some(top_candidate);
    for _ in 0..GRP_SAMPLES {
        let mut v = CVec::zeros(n);
        for (lambda, u) in eig.eigenvalues.iter().zip(eig.eigenvectors.iter()) {
            if *lambda <= 0.0 {
                continue;
            }
            let xi = Cplx::new(standard_normal(&mut rng), standard_normal(&mut rng))
                * std::f64::consts::FRAC_1_SQRT_2;
            let coef = xi * lambda.sqrt();
            v = v.add(&u.scale(coef));
        }
        let (v, value) = rescale_feasible(&q.a, &v);
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((v, value));
        }
    }
    let (v, _) = best.ok_or_else(|| Error::numerical("solve_qcqp: GRP produced no candidate"))?;
    Ok((v, sdr_value, false))
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; two uniforms per call keeps the stream simple and stable.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Scales v so that `max_j v†A_j v = 1`; returns the scaled vector and its
/// squared norm (the QCQP objective value).
fn rescale_feasible(a: &[CMat], v: &CVec) -> (CVec, f64) {
    let worst = a
        .iter()
        .map(|aj| aj.quad_form(v))
        .fold(f64::NEG_INFINITY, f64::max);
    if worst <= 0.0 || !worst.is_finite() {
        return (v.clone(), 0.0);
    }
    let s = 1.0 / worst.sqrt();
    let v = v.scale(Cplx::new(s, 0.0));
    let value = v.norm_sq();
    (v, value)
}

/// Exact rank-one extraction on the optimal face for two constraints.
///
/// Repeatedly finds a Hermitian perturbation Δ of the optimizer's compressed
/// form with Tr(Δ) = Tr(M_1Δ) = Tr(M_2Δ) = 0 (possible while r² > 3) and
/// steps to the PSD boundary, which drops the rank while preserving the
/// objective and both constraint values. Terminates at rank one.
fn rank_one_reduce_two_constraints(z: &CMat, a: &[CMat]) -> Result<CVec> {
    let mut z = z.clone();
    for _ in 0..z.n_rows + 1 {
        let eig = herm_eig(&z)?;
        let top = eig.eigenvalues[0].max(0.0);
        if top <= 0.0 {
            return Err(Error::numerical("rank-one reduction: optimizer vanished"));
        }
        let keep: Vec<usize> = (0..eig.eigenvalues.len())
            .filter(|&i| eig.eigenvalues[i] > RANK_ONE_RATIO * top)
            .collect();
        let r = keep.len();
        if r <= 1 {
            let v = eig.eigenvectors[0].scale(Cplx::new(top.sqrt(), 0.0));
            return Ok(v);
        }

        // Compress onto the top-r eigenspace: Z = V X V† with X = diag(λ).
        let n = z.n_rows;
        let mut v_basis = CMat::zeros(n, r);
        for (col, &i) in keep.iter().enumerate() {
            v_basis.set_column(col, &eig.eigenvectors[i]);
        }
        let m_list: Vec<CMat> = a
            .iter()
            .map(|aj| {
                let av = aj.mul(&v_basis);
                v_basis.adjoint().mul(&av).hermitian_part()
            })
            .collect();

        // Real basis of Hermitian r×r matrices, orthogonalized against
        // {I, M_1, M_2} under ⟨A,B⟩ = Re Tr(AB).
        let mut constraints: Vec<CMat> = vec![CMat::identity(r)];
        constraints.extend(m_list.iter().cloned());
        let delta = match hermitian_null_direction(r, &constraints) {
            Some(d) => d,
            None => {
                return Err(Error::numerical(
                    "rank-one reduction: no admissible perturbation found",
                ))
            }
        };

        // Step X(t) = D + tΔ to the PSD boundary: with W = D^{-1/2} Δ D^{-1/2},
        // the boundary sits at t = −1/μ for the extreme eigenvalue μ of W.
        let lambdas: Vec<f64> = keep.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut w = CMat::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                w[(i, j)] = delta[(i, j)] / (lambdas[i].sqrt() * lambdas[j].sqrt());
            }
        }
        let w_eig = herm_eig(&w.hermitian_part())?;
        let mu_max = w_eig.eigenvalues[0];
        let mu_min = *w_eig.eigenvalues.last().unwrap();
        let t = if mu_min < -1e-14 {
            -1.0 / mu_min
        } else if mu_max > 1e-14 {
            -1.0 / mu_max
        } else {
            return Err(Error::numerical(
                "rank-one reduction: degenerate perturbation",
            ));
        };

        let mut x = CMat::zeros(r, r);
        for i in 0..r {
            x[(i, i)] = Cplx::new(lambdas[i], 0.0);
        }
        let x = x.add(&delta.scale(t));
        z = v_basis.mul(&x).mul(&v_basis.adjoint()).hermitian_part();
    }
    Err(Error::numerical("rank-one reduction failed to terminate"))
}

/// A nonzero Hermitian r×r matrix orthogonal to every matrix in `against`
/// under ⟨A,B⟩ = Re Tr(AB), or None if the constraints fill the space.
fn hermitian_null_direction(r: usize, against: &[CMat]) -> Option<CMat> {
    let inner = |a: &CMat, b: &CMat| a.trace_product_re(b);
    // Orthonormalize the constraint set first.
    let mut ortho: Vec<CMat> = Vec::new();
    for c in against {
        let mut v = c.clone();
        for o in &ortho {
            let coef = inner(&v, o);
            v = v.sub(&o.scale(coef));
        }
        let norm = v.frobenius_norm();
        if norm > 1e-12 {
            ortho.push(v.scale(1.0 / norm));
        }
    }
    // Try canonical Hermitian basis elements until one survives projection.
    let mut basis: Vec<CMat> = Vec::new();
    for i in 0..r {
        let mut e = CMat::zeros(r, r);
        e[(i, i)] = Cplx::new(1.0, 0.0);
        e.hermitian = true;
        basis.push(e);
    }
    for i in 0..r {
        for j in (i + 1)..r {
            let mut e = CMat::zeros(r, r);
            e[(i, j)] = Cplx::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            e[(j, i)] = Cplx::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            basis.push(e);
            let mut f = CMat::zeros(r, r);
            f[(i, j)] = Cplx::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
            f[(j, i)] = Cplx::new(0.0, -std::f64::consts::FRAC_1_SQRT_2);
            basis.push(f);
        }
    }
    for e in basis {
        let mut v = e;
        for o in &ortho {
            let coef = inner(&v, o);
            v = v.sub(&o.scale(coef));
        }
        if v.frobenius_norm() > 1e-8 {
            return Some(v.hermitian_part());
        }
    }
    None
}

/// Suboptimal multi-eavesdropper DF: null the signal at every eavesdropper
/// (requires N ≥ J+1) and beamform the null-space component of h.
pub fn df_multi_suboptimal(sc: &Scenario) -> Result<SchemeSolution> {
    let n = sc.n_relays();
    let j = sc.n_eaves();
    if n < j + 1 {
        return Err(Error::contract(format!(
            "df_multi_suboptimal needs N ≥ J+1 (got N = {n}, J = {j})"
        )));
    }

    // Orthonormal basis E of the null space of G†, via the eigenvectors of
    // the projector onto span{g_j}.
    let mut proj = CMat::zeros(n, n);
    let mut ortho: Vec<CVec> = Vec::new();
    for gj in &sc.g {
        let mut v = gj.clone();
        for o in &ortho {
            v = v.sub(&o.scale(o.dot(&v)));
        }
        if v.norm() > 1e-12 * gj.norm().max(1.0) {
            let o = v.normalized()?;
            for a in 0..n {
                for b in 0..n {
                    proj[(a, b)] += o[a] * o[b].conj();
                }
            }
            ortho.push(o);
        }
    }
    let comp = CMat::identity(n).sub(&proj).hermitian_part();
    let comp_eig = herm_eig(&comp)?;
    let null_basis: Vec<&CVec> = comp_eig
        .eigenvectors
        .iter()
        .zip(comp_eig.eigenvalues.iter())
        .filter(|(_, &l)| l > 0.5)
        .map(|(v, _)| v)
        .collect();
    if null_basis.is_empty() {
        return Err(Error::degenerate(
            "df_multi_suboptimal: eavesdropper channels span the whole space",
        ));
    }

    // Projection of h onto the null space; below roundoff scale it is
    // treated as zero (h inside the eavesdropper span).
    let mut h_null = CVec::zeros(n);
    for e in &null_basis {
        h_null = h_null.add(&e.scale(e.dot(&sc.h)));
    }
    let mut h_null_sq = h_null.norm_sq();
    if h_null_sq <= 1e-20 * sc.h.norm_sq() {
        h_null_sq = 0.0;
    }
    let worst_g0 = sc
        .g0
        .iter()
        .map(|g| g.norm_sqr())
        .fold(f64::NEG_INFINITY, f64::max);
    let f2 = |ps: f64| -> f64 {
        (sc.sigma2 + ps * sc.h0.norm_sqr() + (sc.p0 - ps) * h_null_sq) / (sc.sigma2 + ps * worst_g0)
    };
    let ps = if f2(sc.p0) > f2(sc.p0_min) {
        sc.p0
    } else {
        sc.p0_min
    };

    let mut sol = if h_null_sq > 0.0 && ps < sc.p0 {
        let dir = h_null.normalized()?;
        let w = dir.scale(Cplx::new((sc.p0 - ps).sqrt(), 0.0));
        let rate = 0.5 * f2(ps).log2();
        SchemeSolution::new(ps, w, rate, Branch::DfMultiNulling)
    } else {
        let rate = 0.5 * f2(ps).log2();
        SchemeSolution::new(ps, CVec::zeros(n), rate, Branch::DfMultiNulling)
    };
    if h_null_sq == 0.0 {
        sol.warn("h lies entirely in the eavesdropper span; relays unused");
    }
    Ok(sol)
}

/// Alternating DF rate maximization for J ≥ 2 eavesdroppers (J = 1 routes to
/// the closed-form solver). Exact subproblem solutions keep the trace
/// monotone for J = 2; GRP steps for J > 2 are accepted only when improving.
pub fn df_multi_max(sc: &Scenario) -> Result<SchemeSolution> {
    df_multi_max_seeded(sc, 0x5ec4ec)
}

/// Same as [`df_multi_max`] with an explicit randomization seed.
pub fn df_multi_max_seeded(sc: &Scenario, seed: u64) -> Result<SchemeSolution> {
    if sc.n_eaves() == 1 {
        return df_opt::df_max_secrecy_j1(sc);
    }
    if !(sc.p0_min < sc.p0) {
        return Err(Error::contract("df_multi_max requires p0_min < p0"));
    }
    let exact_steps = sc.n_eaves() == 2;
    let starts = [sc.p0_min, sc.p0, 0.5 * (sc.p0_min + sc.p0)];
    let mut best: Option<(f64, f64, CVec, usize, bool, Vec<f64>)> = None;

    for (si, &ps_start) in starts.iter().enumerate() {
        let run = alternate_multi(sc, ps_start, exact_steps, seed ^ (si as u64) << 32)?;
        if best.as_ref().is_none_or(|(b, ..)| run.0 > *b) {
            best = Some(run);
        }
    }
    let (ratio, ps, x, iterations, converged, bounds) =
        best.ok_or_else(|| Error::numerical("df_multi_max: no start succeeded"))?;

    let w = x.scale(Cplx::new((sc.p0 - ps).max(0.0).sqrt(), 0.0));
    let rate = 0.5 * ratio.log2();
    let mut sol = SchemeSolution::new(ps, w, rate, Branch::DfMultiAlternating)
        .with_iterations(iterations, converged);
    sol.diagnostics.sdr_upper_bounds = bounds;
    Ok(sol)
}

#[allow(clippy::type_complexity)]
fn alternate_multi(
    sc: &Scenario,
    ps_start: f64,
    exact_steps: bool,
    seed: u64,
) -> Result<(f64, f64, CVec, usize, bool, Vec<f64>)> {
    let mut ps = ps_start.clamp(sc.p0_min, sc.p0);
    // A ps at the very top of the budget leaves no relay power and makes the
    // x-step vacuous; nudge inward so the first QCQP is meaningful.
    if sc.p0 - ps < 1e-12 * sc.p0 {
        ps = sc.p0 - 1e-6 * (sc.p0 - sc.p0_min);
    }
    let mut x: Option<CVec> = None;
    let mut obj = f64::NEG_INFINITY;
    let mut bounds: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut iters = 0usize;

    // Exact subproblems (rank-one SDR or the J = 2 reduction) are still only
    // as accurate as the interior-point tolerance; decreases inside that
    // noise band keep the previous iterate, decreases beyond it are bugs.
    const EXACT_SLACK: f64 = 1e-8;

    for iter in 0..MAX_OUTER {
        iters = iter + 1;
        let iter_start_obj = obj;
        // x-step at fixed ps.
        let q = build_qcqp(sc, ps)?;
        let mut x_improved = false;
        let mut x_step_exact = false;
        for retry in 0..=GRP_RETRIES {
            let (v, sdr_value, tight) = solve_qcqp(&q, seed ^ ((iter as u64) << 8) ^ retry as u64)?;
            let x_cand = q.rh_inv_sqrt.mul_vec(&v).normalized()?;
            let cand_obj = min_ratio(sc, ps, &x_cand);
            if !tight {
                // Record the SDR value as the per-iteration upper bound on
                // the weight subproblem.
                bounds.push(sdr_value);
            }
            if tight {
                x_step_exact = true;
                if obj.is_finite() && cand_obj < obj * (1.0 - EXACT_SLACK) {
                    return Err(Error::numerical(format!(
                        "df_multi_max: exact x-step decreased the objective \
                         ({obj:.12e} → {cand_obj:.12e})"
                    )));
                }
                if cand_obj > obj || x.is_none() {
                    x = Some(x_cand);
                    obj = cand_obj.max(obj);
                    x_improved = true;
                }
                break;
            }
            if cand_obj > obj || x.is_none() {
                x = Some(x_cand);
                obj = cand_obj.max(obj);
                x_improved = true;
                break;
            }
        }
        if x.is_none() {
            return Err(Error::numerical("df_multi_max: x-step produced no iterate"));
        }
        if !x_improved && !x_step_exact {
            // GRP retries exhausted without improvement: stop here.
            converged = true;
            break;
        }
        let x_cur = x.as_ref().unwrap();

        // ps-step at fixed x.
        let ps_new = ps_polygonal_search(sc, x_cur)?;
        let new_obj = min_ratio(sc, ps_new, x_cur);
        if exact_steps && new_obj < obj * (1.0 - EXACT_SLACK) {
            return Err(Error::numerical(format!(
                "df_multi_max: exact ps-step decreased the objective \
                 ({obj:.12e} → {new_obj:.12e})"
            )));
        }
        if new_obj > obj {
            ps = ps_new;
            obj = new_obj;
        }
        if iter_start_obj.is_finite() && obj - iter_start_obj < OBJ_TOL * obj.abs().max(1.0) {
            converged = true;
            break;
        }
    }

    let x = x.ok_or_else(|| Error::numerical("df_multi_max: no direction produced"))?;
    Ok((obj, ps, x, iters, converged, bounds))
}
