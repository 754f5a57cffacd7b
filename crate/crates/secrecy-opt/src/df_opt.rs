//! Closed-form decode-and-forward solvers for a single eavesdropper:
//! secrecy-rate maximization under a total power budget and total-power
//! minimization under a secrecy-rate equality constraint.

use num_complex::Complex64 as Cplx;

use crate::error::{Error, Result};
use crate::linalg::{constrained_quadratic_max, rank_two_eig, CVec, Overlap, COLLINEARITY_TOL};
use crate::model::{Branch, Scenario, SchemeSolution};

/// Grid resolution for the degenerate-collinear fallback solver.
const FALLBACK_GRID: usize = 201;

/// Geometry shared by the rate-max closed forms: normalized eavesdropper and
/// destination relay directions and their overlap.
#[derive(Clone, Debug)]
pub struct RateMaxInternals {
    /// u1 = g/‖g‖ (eavesdropper direction).
    pub u1: CVec,
    /// u2 = h/‖h‖ (destination direction).
    pub u2: CVec,
    /// ζ = |u1† u2|.
    pub zeta: f64,
    /// θ = arg(u2† u1) ∈ (−π, π].
    pub theta: f64,
    /// The two candidate branch values (J(p0_min), J(p0)).
    pub j_values: (f64, f64),
}

/// The objective ratio J(P_s) of the reduced one-eavesdropper DF problem,
/// together with the inner maximizer z(P_s). Callers feed it grid oracles.
pub fn df_objective_ratio(sc: &Scenario, ps: f64) -> Result<f64> {
    let z = df_inner_z(sc, ps)?;
    Ok(df_ratio_at(sc, ps, z)?.0)
}

/// Evaluates the reduced objective ratio at an explicit (ps, z) pair.
/// Returns (ratio, numerator, denominator).
pub fn df_ratio_at(sc: &Scenario, ps: f64, z: f64) -> Result<(f64, f64, f64)> {
    let geom = problem_geometry(sc)?;
    let lz = Overlap::new(geom.zeta)?.value(z.clamp(0.0, 1.0));
    let remaining = (sc.p0 - ps).max(0.0);
    let num = sc.sigma2 + ps * sc.h0.norm_sqr() + remaining * geom.h_norm_sq * lz;
    let den = sc.sigma2 + ps * sc.g0[0].norm_sqr() + remaining * geom.g_norm_sq * z;
    Ok((num / den, num, den))
}

struct Geometry {
    u1: CVec,
    u2: CVec,
    zeta: f64,
    theta: f64,
    h_norm_sq: f64,
    g_norm_sq: f64,
}

fn problem_geometry(sc: &Scenario) -> Result<Geometry> {
    if sc.n_eaves() != 1 {
        return Err(Error::contract(
            "single-eavesdropper DF solver requires J = 1",
        ));
    }
    let h_norm_sq = sc.h.norm_sq();
    let g_norm_sq = sc.g[0].norm_sq();
    if h_norm_sq == 0.0 || g_norm_sq == 0.0 {
        return Err(Error::degenerate("zero relay channel vector"));
    }
    let u1 = sc.g[0].normalized()?;
    let u2 = sc.h.normalized()?;
    let overlap = u2.dot(&u1); // u2† u1
    let zeta = overlap.norm().min(1.0);
    Ok(Geometry {
        u1,
        u2,
        zeta,
        theta: overlap.arg(),
        h_norm_sq,
        g_norm_sq,
    })
}

/// Inner maximizer z(P_s) of the reduced objective
///   M(z) = ½log (c − d·z + f·√(z(1−z))) / (a + b·z)
/// over z ∈ [0, 1]: the stationarity condition
///   f·[a − (2a+b)z] = 2(ad+bc)·√(z(1−z))
/// squares to the quadratic P·z² − Q·z + R = 0; the root is picked by the
/// sign of (ad+bc) so the pre-squaring equation holds, and evaluated in the
/// cancellation-free form 2R/(Q+√disc). All coefficients carry a common
/// (p0−ps)² factor that is divided out, which also defines z(p0) by
/// continuity.
pub fn df_inner_z(sc: &Scenario, ps: f64) -> Result<f64> {
    if !(sc.p0_min - 1e-12..=sc.p0 + 1e-12).contains(&ps) {
        return Err(Error::contract(format!(
            "df_inner_z: ps = {ps} outside [p0_min, p0] = [{}, {}]",
            sc.p0_min, sc.p0
        )));
    }
    let geom = problem_geometry(sc)?;
    let zeta = geom.zeta;
    let t = (sc.p0 - ps).max(0.0); // relay power budget

    let a = sc.sigma2 + ps * sc.g0[0].norm_sqr();
    // b, d, f all carry a factor t; work with the t-scaled versions so the
    // quadratic stays finite as ps → p0.
    let b_t = geom.g_norm_sq;
    let c = sc.sigma2 + ps * sc.h0.norm_sqr() + t * geom.h_norm_sq * (1.0 - zeta * zeta);
    let d_t = geom.h_norm_sq * (1.0 - 2.0 * zeta * zeta);
    let f_t = 2.0 * geom.h_norm_sq * zeta * (1.0 - zeta * zeta).max(0.0).sqrt();

    let b = t * b_t;
    let adbc_t = a * d_t + b_t * c; // (ad + bc)/t

    let p = f_t * f_t * (2.0 * a + b) * (2.0 * a + b) + 4.0 * adbc_t * adbc_t;
    let q = 2.0 * a * f_t * f_t * (2.0 * a + b) + 4.0 * adbc_t * adbc_t;
    let r = a * a * f_t * f_t;
    if p <= 0.0 {
        // ζ = 0 and ad+bc = 0 simultaneously: objective flat in z.
        return Ok(0.0);
    }
    // disc = Q² − 4PR = 16(ad+bc)²(a f²(a+b) + (ad+bc)²), guaranteed ≥ 0.
    let disc = (q * q - 4.0 * p * r).max(0.0);
    let sqrt_disc = disc.sqrt();
    let z = if adbc_t >= 0.0 {
        // Smaller root, cancellation-free.
        2.0 * r / (q + sqrt_disc)
    } else {
        (q + sqrt_disc) / (2.0 * p)
    };

    if !(-1e-9..=1.0 + 1e-9).contains(&z) {
        return Err(Error::numerical(format!(
            "df_inner_z: closed form produced z = {z:.6e} outside [0,1]; \
             instance: ps={ps}, a={a:.6e}, b={b:.6e}, c={c:.6e}, d_t={d_t:.6e}, f_t={f_t:.6e}"
        )));
    }
    Ok(z.clamp(0.0, 1.0))
}

/// Branch geometry plus the two candidate values J(p0_min) and J(p0).
pub fn rate_max_internals(sc: &Scenario) -> Result<RateMaxInternals> {
    let geom = problem_geometry(sc)?;
    let j_low = df_objective_ratio(sc, sc.p0_min)?;
    let j_high = df_ratio_at(sc, sc.p0, 0.0)?.0; // z-free at ps = p0
    Ok(RateMaxInternals {
        u1: geom.u1,
        u2: geom.u2,
        zeta: geom.zeta,
        theta: geom.theta,
        j_values: (j_low, j_high),
    })
}

/// Secrecy-rate maximization for DF with one eavesdropper (closed form).
///
/// The optimum uses either minimum source power with relay weights in
/// span{u1, u2}, or full source power with the relays off, depending on
/// which of J(p0_min), J(p0) is larger. Ties prefer the direct branch.
pub fn df_max_secrecy_j1(sc: &Scenario) -> Result<SchemeSolution> {
    if sc.n_eaves() != 1 {
        return Err(Error::contract("df_max_secrecy_j1 requires J = 1"));
    }
    if !(sc.p0_min < sc.p0) {
        return Err(Error::contract("df_max_secrecy_j1 requires p0_min < p0"));
    }

    // Degenerate collinear h, g: closed forms lose rank-2 structure; fall
    // back to a grid solver and flag it.
    let gram_ok = {
        let hh = sc.h.norm_sq();
        let gg = sc.g[0].norm_sq();
        let hg = sc.h.dot(&sc.g[0]).norm_sqr();
        hh * gg - hg > COLLINEARITY_TOL.sqrt() * hh * gg
    };
    if !gram_ok {
        return df_grid_fallback(sc);
    }

    let internals = rate_max_internals(sc)?;
    let (j_low, j_high) = internals.j_values;
    let tie_tol = 1e-12 * j_low.abs().max(j_high.abs()).max(1.0);

    if j_low > j_high + tie_tol {
        // Relay branch: ps = p0_min, w = √(p0−p0_min)·(c1·u1 + c2·u2) from
        // the constrained quadratic maximum at q = z(p0_min).
        let ps = sc.p0_min;
        let z = df_inner_z(sc, ps)?;
        let (x, _) = constrained_quadratic_max(&internals.u1, &internals.u2, z)?;
        let w = x.scale(Cplx::new((sc.p0 - ps).sqrt(), 0.0));
        let rate = 0.5 * j_low.log2();
        Ok(SchemeSolution::new(ps, w, rate, Branch::DfRelay))
    } else {
        let rate = 0.5 * j_high.log2();
        Ok(SchemeSolution::new(
            sc.p0,
            CVec::zeros(sc.n_relays()),
            rate,
            Branch::DfDirect,
        ))
    }
}

/// Grid solver over (ps, z) for the collinear-degenerate case; in that case
/// the overlap curve collapses to L(z) = z, so both quadratic forms share
/// the same overlap variable.
fn df_grid_fallback(sc: &Scenario) -> Result<SchemeSolution> {
    let h_norm_sq = sc.h.norm_sq();
    let g_norm_sq = sc.g[0].norm_sq();
    let mut best = (f64::NEG_INFINITY, sc.p0, 0.0);
    for i in 0..FALLBACK_GRID {
        let ps = sc.p0_min + (sc.p0 - sc.p0_min) * i as f64 / (FALLBACK_GRID - 1) as f64;
        let t = sc.p0 - ps;
        for k in 0..FALLBACK_GRID {
            let z = k as f64 / (FALLBACK_GRID - 1) as f64;
            let num = sc.sigma2 + ps * sc.h0.norm_sqr() + t * h_norm_sq * z;
            let den = sc.sigma2 + ps * sc.g0[0].norm_sqr() + t * g_norm_sq * z;
            let ratio = num / den;
            if ratio > best.0 {
                best = (ratio, ps, z);
            }
        }
    }
    let (ratio, ps, z) = best;
    let dir = sc.h.normalized()?;
    let w = dir.scale(Cplx::new(((sc.p0 - ps) * z).sqrt(), 0.0));
    let mut sol = SchemeSolution::new(ps, w, 0.5 * ratio.log2(), Branch::DfGridFallback);
    sol.warn("h and g are numerically collinear; used 201×201 grid fallback");
    Ok(sol)
}

/// Total-power minimization for DF with one eavesdropper under the secrecy
/// equality constraint R_s = rs0 (closed form).
///
/// With ρ = 4^{rs0}, the constraint pins P_s = w†R̃w + ζ where
/// R̃ = (R_h − ρR_g)/(ρ|g0|² − |h0|²) and ζ = (ρ−1)σ²/(|h0|² − ρ|g0|²);
/// minimizing over the two nonzero eigendirections of R̃ gives three cases,
/// plus a separate case when ρ|g0|² = |h0|².
pub fn df_min_power(sc: &Scenario) -> Result<SchemeSolution> {
    if sc.n_eaves() != 1 {
        return Err(Error::contract("df_min_power requires J = 1"));
    }
    if !(sc.rs0 > 0.0) {
        return Err(Error::contract("df_min_power requires rs0 > 0"));
    }
    let rho = 4f64.powf(sc.rs0);
    let h0_sq = sc.h0.norm_sqr();
    let g0_sq = sc.g0[0].norm_sqr();
    let denom = rho * g0_sq - h0_sq;

    // r r† − s s† with r = h, s = 2^{rs0} g has the rank-two structure.
    let s_vec = sc.g[0].scale(Cplx::new(2f64.powf(sc.rs0), 0.0));
    let pair = rank_two_eig(&sc.h, &s_vec)?;

    if denom.abs() < 1e-12 * h0_sq.max(rho * g0_sq) {
        // Equal-gain case: the constraint fixes only w; source power is free
        // and the minimum sits at p0_min.
        let xi1 = pair.eta1;
        let scale = ((rho - 1.0) * sc.sigma2 / xi1).sqrt();
        let w = pair.e1.scale(Cplx::new(scale, 0.0));
        let sol = SchemeSolution::new(sc.p0_min, w, sc.rs0, Branch::DfMinEqualGain);
        return check_power_cap(sol);
    }

    let zeta = (rho - 1.0) * sc.sigma2 / (h0_sq - rho * g0_sq);
    // Eigenvalues of R̃ = (R_h − ρR_g)/denom: dividing by `denom` rescales
    // and possibly flips the rank-two pair; λ1 > 0 > λ2 after sorting.
    let (lambda1, u1, lambda2, u2) = if denom > 0.0 {
        (pair.eta1 / denom, pair.e1, pair.eta2 / denom, pair.e2)
    } else {
        (pair.eta2 / denom, pair.e2, pair.eta1 / denom, pair.e1)
    };
    debug_assert!(lambda1 > 0.0 && lambda2 < 0.0);

    let sol = if zeta >= sc.p0_min && lambda2 >= -1.0 {
        // Source alone meets the constraint and relays cannot reduce total.
        SchemeSolution::new(
            zeta,
            CVec::zeros(sc.n_relays()),
            sc.rs0,
            Branch::DfMinSourceOnly,
        )
    } else if zeta >= sc.p0_min {
        // λ2 < −1: spending relay power along the negative eigendirection
        // lowers total power until P_s hits p0_min.
        let mag = ((zeta - sc.p0_min) / lambda2.abs()).sqrt();
        let w = u2.scale(Cplx::new(mag, 0.0));
        SchemeSolution::new(sc.p0_min, w, sc.rs0, Branch::DfMinNegativeEig)
    } else {
        // ζ < p0_min: relays must lift the constraint value up to p0_min via
        // the positive eigendirection.
        let mag = ((sc.p0_min - zeta) / lambda1).sqrt();
        let w = u1.scale(Cplx::new(mag, 0.0));
        SchemeSolution::new(sc.p0_min, w, sc.rs0, Branch::DfMinPositiveEig)
    };
    check_power_cap(sol)
}

/// Guard against runaway closed-form output; a correct instance never gets
/// anywhere near this cap.
fn check_power_cap(sol: SchemeSolution) -> Result<SchemeSolution> {
    const POWER_CAP: f64 = 1e6;
    if !sol.total_power.is_finite() || sol.total_power > POWER_CAP {
        return Err(Error::numerical(format!(
            "df_min_power: total power {:.3e} exceeds the {POWER_CAP:.0e} W sanity cap",
            sol.total_power
        )));
    }
    Ok(sol)
}
