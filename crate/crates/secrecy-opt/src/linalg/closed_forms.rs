//! Closed-form structural results used by every solver: the two nonzero
//! eigenpairs of `r r† − s s†`, the constrained quadratic maximum over the
//! span of two unit vectors, and the scalar transfer curve that maximum
//! induces.

use num_complex::Complex64 as Cplx;

use super::CVec;
use crate::error::{Error, Result};

/// Relative Gram-determinant threshold below which two vectors are treated
/// as collinear and the rank-two closed forms refuse to run.
pub const COLLINEARITY_TOL: f64 = 1e-14;

/// The two nonzero eigenpairs of `r r† − s s†`.
#[derive(Clone, Debug)]
pub struct RankTwoEig {
    /// Positive eigenvalue.
    pub eta1: f64,
    /// Negative eigenvalue.
    pub eta2: f64,
    /// Unit eigenvector for `eta1`.
    pub e1: CVec,
    /// Unit eigenvector for `eta2`.
    pub e2: CVec,
}

/// Closed-form eigenpairs of the rank-two Hermitian matrix `r r† − s s†`.
///
/// `r` and `s` must be linearly independent; near-collinear inputs get a
/// degeneracy error so callers can handle the rank-one case explicitly.
pub fn rank_two_eig(r: &CVec, s: &CVec) -> Result<RankTwoEig> {
    if r.len() != s.len() {
        return Err(Error::contract("rank_two_eig: dimension mismatch"));
    }
    if !r.is_finite() || !s.is_finite() {
        return Err(Error::contract("rank_two_eig: non-finite input"));
    }
    let rr = r.norm_sq();
    let ss = s.norm_sq();
    if rr == 0.0 || ss == 0.0 {
        return Err(Error::degenerate("rank_two_eig: zero-length input vector"));
    }
    let rs = r.dot(s); // r† s
    let rs_abs = rs.norm();
    let gram = rr * ss - rs_abs * rs_abs;
    if gram <= COLLINEARITY_TOL * rr * ss {
        return Err(Error::degenerate(format!(
            "rank_two_eig: vectors are numerically collinear (relative Gram determinant \
             {:.3e})",
            gram / (rr * ss)
        )));
    }

    // w = sqrt((‖r‖²+‖s‖²)² − 4|r†s|²), evaluated in the cancellation-free
    // form (‖r‖²−‖s‖²)² + 4·Gram.
    let w = ((rr - ss) * (rr - ss) + 4.0 * gram).sqrt();
    let eta1 = 0.5 * (rr - ss + w);
    let eta2 = 0.5 * (rr - ss - w);

    // |c2| = (‖r‖²+‖s‖²−w)/(2|r†s|), rationalized to 2|r†s|/(‖r‖²+‖s‖²+w)
    // so the orthogonal limit r†s → 0 stays finite. |c2|·|c4| = 1, so the
    // same quantity serves as 1/|c4| when building e2 in overflow-free form.
    let c2_abs = 2.0 * rs_abs / (rr + ss + w);
    let inv_c4_abs = c2_abs;
    let phase = if rs_abs > 0.0 {
        // e^{i(π−θ)} with θ = arg(r†s): equals −conj(rs)/|rs| ... e^{iπ}e^{−iθ}.
        -(rs.conj() / rs_abs)
    } else {
        Cplx::new(1.0, 0.0)
    };

    let e1 = r.add(&s.scale(phase * c2_abs)).normalized()?;
    let e2 = r.scale(Cplx::new(inv_c4_abs, 0.0)).add(&s.scale(phase));
    let e2 = e2.normalized()?;

    Ok(RankTwoEig {
        eta1,
        eta2,
        e1: e1.phase_normalized(),
        e2: e2.phase_normalized(),
    })
}

/// Maximizes `|d2† z|²` over unit vectors `z` with `|d1† z|² = q`.
///
/// Returns the maximizing `z` (phase-normalized) and the maximum value
/// `1 − (r√(1−q) − √((1−r²)q))²` with `r = |d1† d2|`.
pub fn constrained_quadratic_max(d1: &CVec, d2: &CVec, q: f64) -> Result<(CVec, f64)> {
    if d1.len() != d2.len() {
        return Err(Error::contract(
            "constrained_quadratic_max: dimension mismatch",
        ));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::contract(format!(
            "constrained_quadratic_max: q = {q} outside [0, 1]"
        )));
    }
    if (d1.norm() - 1.0).abs() > 1e-12 || (d2.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::contract(
            "constrained_quadratic_max: d1, d2 must be unit-norm within 1e-12",
        ));
    }

    let d2d1 = d2.dot(d1); // d2† d1, argument φ
    let r = d2d1.norm();

    if r >= 1.0 - 1e-12 {
        // Collinear directions: every feasible z has |d2†z|² = q. Build one
        // feasible point as the analytic limit: √q along d1 plus √(1−q) in
        // any orthogonal direction.
        let z = if q >= 1.0 - 1e-15 {
            d1.clone()
        } else {
            let perp = orthogonal_complement_vector(d1)?;
            d1.scale(Cplx::new(q.sqrt(), 0.0))
                .add(&perp.scale(Cplx::new((1.0 - q).sqrt(), 0.0)))
        };
        return Ok((z.phase_normalized(), q));
    }

    let phi = d2d1.arg();
    let c2 = ((1.0 - q) / (1.0 - r * r)).sqrt();
    let phase = Cplx::from_polar(1.0, std::f64::consts::PI - phi);
    let c1 = phase * (r * c2 - q.sqrt());
    let z = d1.scale(c1).add(&d2.scale(Cplx::new(c2, 0.0)));

    let gap = r * (1.0 - q).sqrt() - ((1.0 - r * r) * q).sqrt();
    let value = 1.0 - gap * gap;
    Ok((z.phase_normalized(), value))
}

/// Any unit vector orthogonal to `d` (used only in the collinear limit).
fn orthogonal_complement_vector(d: &CVec) -> Result<CVec> {
    let n = d.len();
    if n < 2 {
        return Err(Error::degenerate("no orthogonal complement in dimension 1"));
    }
    for k in 0..n {
        let mut e = CVec::zeros(n);
        e[k] = Cplx::new(1.0, 0.0);
        let proj = d.dot(&e);
        let cand = e.sub(&d.scale(proj));
        if cand.norm() > 1e-6 {
            return cand.normalized();
        }
    }
    Err(Error::degenerate("failed to build orthogonal complement"))
}

/// The transfer curve `1 − (κ√(1−z) − √((1−κ²)z))²`: the best achievable
/// overlap with one direction given overlap `z` with another, where κ is the
/// magnitude of their inner product.
pub fn overlap_transfer(kappa: f64, z: f64) -> Result<f64> {
    let ot = Overlap::new(kappa)?;
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::contract(format!(
            "overlap_transfer: z = {z} outside [0, 1]"
        )));
    }
    Ok(ot.value(z))
}

/// First derivative of [`overlap_transfer`] in `z`, valid on the open
/// interval (0, 1).
pub fn overlap_transfer_d1(kappa: f64, z: f64) -> Result<f64> {
    let ot = Overlap::new(kappa)?;
    if !(0.0 < z && z < 1.0) {
        return Err(Error::contract(format!(
            "overlap_transfer_d1: z = {z} outside (0, 1)"
        )));
    }
    Ok(ot.d1(z))
}

/// Second derivative of [`overlap_transfer`] in `z`, valid on (0, 1).
/// Strictly negative for κ ∈ (0, 1): the curve is strictly concave.
pub fn overlap_transfer_d2(kappa: f64, z: f64) -> Result<f64> {
    let ot = Overlap::new(kappa)?;
    if !(0.0 < z && z < 1.0) {
        return Err(Error::contract(format!(
            "overlap_transfer_d2: z = {z} outside (0, 1)"
        )));
    }
    Ok(ot.d2(z))
}

/// Precomputed form of the transfer curve for repeated evaluation inside
/// root finders. Expanded form:
///   T(z) = (1−κ²) + (2κ²−1)·z + 2κ√(1−κ²)·√(z(1−z)).
#[derive(Clone, Copy, Debug)]
pub struct Overlap {
    pub kappa: f64,
    lin: f64,   // 2κ²−1
    cross: f64, // κ√(1−κ²)
}

impl Overlap {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&kappa) {
            return Err(Error::contract(format!(
                "overlap transfer: κ = {kappa} outside [0, 1]"
            )));
        }
        Ok(Overlap {
            kappa,
            lin: 2.0 * kappa * kappa - 1.0,
            cross: kappa * (1.0 - kappa * kappa).max(0.0).sqrt(),
        })
    }

    #[inline]
    pub fn value(&self, z: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&z));
        let w = (z * (1.0 - z)).max(0.0);
        (1.0 - self.kappa * self.kappa) + self.lin * z + 2.0 * self.cross * w.sqrt()
    }

    #[inline]
    pub fn d1(&self, z: f64) -> f64 {
        debug_assert!(0.0 < z && z < 1.0);
        let w = z * (1.0 - z);
        self.lin + self.cross * (1.0 - 2.0 * z) / w.sqrt()
    }

    #[inline]
    pub fn d2(&self, z: f64) -> f64 {
        debug_assert!(0.0 < z && z < 1.0);
        let w = z * (1.0 - z);
        let sw = w.sqrt();
        let t = 1.0 - 2.0 * z;
        -self.cross * (2.0 / sw + t * t / (2.0 * w * sw))
    }
}
