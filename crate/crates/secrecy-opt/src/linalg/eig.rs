//! Dense complex Hermitian eigendecomposition: Householder reduction to a
//! real symmetric tridiagonal matrix followed by implicit-shift QL with
//! eigenvector accumulation. Dimension-capped at [`MAX_DIM`]; everything the
//! solvers need stays at desk scale.

use num_complex::Complex64 as Cplx;

use super::{CMat, CVec, HERMITIAN_TOL, MAX_DIM};
use crate::error::{Error, Result};

/// Maximum QL sweeps per eigenvalue before reporting non-convergence.
const MAX_QL_ITERS: usize = 60;

/// Eigendecomposition of a Hermitian matrix: `M = Σ λ_k v_k v_k†` with real
/// eigenvalues sorted descending and orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct HermEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<CVec>,
}

impl HermEig {
    /// Rebuilds `Σ λ_k v_k v_k†`; diagnostic helper for residual checks.
    pub fn reconstruct(&self) -> CMat {
        let n = self.eigenvectors[0].len();
        let mut m = CMat::zeros(n, n);
        for (lambda, v) in self.eigenvalues.iter().zip(self.eigenvectors.iter()) {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += *lambda * v[i] * v[j].conj();
                }
            }
        }
        m.hermitian = true;
        m
    }
}

/// Full eigendecomposition of a Hermitian matrix of dimension ≤ 64.
///
/// Eigenvalues come back real and descending; eigenvectors are orthonormal
/// with the global phase fixed so each vector's largest-magnitude entry is
/// real nonnegative.
pub fn herm_eig(m: &CMat) -> Result<HermEig> {
    if !m.is_square() {
        return Err(Error::contract("herm_eig expects a square matrix"));
    }
    let n = m.n_rows;
    if n == 0 {
        return Err(Error::contract("herm_eig expects a non-empty matrix"));
    }
    if n > MAX_DIM {
        return Err(Error::contract(format!(
            "herm_eig dimension {n} exceeds the cap of {MAX_DIM}"
        )));
    }
    if !m.is_hermitian_within(HERMITIAN_TOL) {
        return Err(Error::contract(
            "herm_eig input is not Hermitian within 1e-12 relative tolerance",
        ));
    }

    // Work on the exactly-Hermitian part so roundoff asymmetry cannot leak
    // into the reduction.
    let mut a = m.hermitian_part();
    let mut q = CMat::identity(n);
    let mut d = vec![0.0f64; n]; // diagonal
    let mut e = vec![0.0f64; n]; // subdiagonal, e[k] couples k and k+1

    householder_tridiagonalize(&mut a, &mut q, &mut d, &mut e)?;
    ql_implicit_shift(&mut d, &mut e, &mut q, m)?;

    // Sort descending, carry eigenvectors along, fix phases.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let eigenvectors: Vec<CVec> = order
        .iter()
        .map(|&i| q.column(i).phase_normalized())
        .collect();

    Ok(HermEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Reduces Hermitian `a` to real symmetric tridiagonal form `Q† A Q = T`,
/// accumulating the unitary `Q`. Outputs the real diagonal `d` and the real
/// nonnegative subdiagonal `e` (phases absorbed into `Q`).
fn householder_tridiagonalize(
    a: &mut CMat,
    q: &mut CMat,
    d: &mut [f64],
    e: &mut [f64],
) -> Result<()> {
    let n = a.n_rows;
    let mut e_c = vec![Cplx::new(0.0, 0.0); n]; // complex subdiagonal

    for k in 0..n.saturating_sub(2) {
        let m_len = n - k - 1; // length of the column below the diagonal
        let mut scale = 0.0f64;
        for i in (k + 1)..n {
            scale += a[(i, k)].re.abs() + a[(i, k)].im.abs();
        }
        if scale == 0.0 {
            e_c[k] = Cplx::new(0.0, 0.0);
            continue;
        }

        // Scaled column x and its norm.
        let mut x = vec![Cplx::new(0.0, 0.0); m_len];
        let mut sigma = 0.0f64;
        for (idx, i) in ((k + 1)..n).enumerate() {
            x[idx] = a[(i, k)] / scale;
            sigma += x[idx].norm_sqr();
        }
        let x_norm = sigma.sqrt();
        if x_norm == 0.0 {
            e_c[k] = Cplx::new(0.0, 0.0);
            continue;
        }

        // Reflector maps x to beta·e1 with |beta| = ‖x‖ and the phase chosen
        // to avoid cancellation in u = x − beta·e1.
        let phase = if x[0].norm() == 0.0 {
            Cplx::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let beta = -phase * x_norm;
        let mut u = x.clone();
        u[0] -= beta;
        let u_norm_sq = 2.0 * (sigma + x_norm * x[0].norm());
        if u_norm_sq <= 0.0 {
            e_c[k] = beta * scale;
            continue;
        }
        let tau = 2.0 / u_norm_sq;

        // Hermitian rank-two update of the trailing block:
        //   A ← A − q u† − u q†, with p = τAu, K = τ/2·(u†p), q = p − K u.
        let mut p = vec![Cplx::new(0.0, 0.0); m_len];
        for (ri, i) in ((k + 1)..n).enumerate() {
            let mut acc = Cplx::new(0.0, 0.0);
            for (rj, j) in ((k + 1)..n).enumerate() {
                acc += a[(i, j)] * u[rj];
            }
            p[ri] = acc * tau;
        }
        let udp: Cplx = u.iter().zip(p.iter()).map(|(ui, pi)| ui.conj() * pi).sum();
        let kfac = udp * (tau / 2.0);
        let qv: Vec<Cplx> = p
            .iter()
            .zip(u.iter())
            .map(|(pi, ui)| pi - kfac * ui)
            .collect();
        for (ri, i) in ((k + 1)..n).enumerate() {
            for (rj, j) in ((k + 1)..n).enumerate() {
                let upd = qv[ri] * u[rj].conj() + u[ri] * qv[rj].conj();
                a[(i, j)] -= upd;
            }
        }

        // Store the produced subdiagonal entry and clear the column.
        e_c[k] = beta * scale;
        a[(k + 1, k)] = e_c[k];
        a[(k, k + 1)] = e_c[k].conj();
        for i in (k + 2)..n {
            a[(i, k)] = Cplx::new(0.0, 0.0);
            a[(k, i)] = Cplx::new(0.0, 0.0);
        }

        // Accumulate Q ← Q (I − τ u u†) on the trailing columns.
        for row in 0..n {
            let mut acc = Cplx::new(0.0, 0.0);
            for (rj, j) in ((k + 1)..n).enumerate() {
                acc += q[(row, j)] * u[rj];
            }
            acc *= tau;
            for (rj, j) in ((k + 1)..n).enumerate() {
                let sub = acc * u[rj].conj();
                q[(row, j)] -= sub;
            }
        }
    }

    if n >= 2 {
        e_c[n - 2] = a[(n - 1, n - 2)];
    }

    // Absorb subdiagonal phases into Q so the tridiagonal matrix is real.
    let mut col_phase = vec![Cplx::new(1.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let mag = e_c[k].norm();
        if mag > 0.0 {
            let ph = e_c[k] / mag;
            col_phase[k + 1] = col_phase[k] * ph;
        } else {
            col_phase[k + 1] = col_phase[k];
        }
        e[k] = mag;
    }
    for j in 0..n {
        if (col_phase[j] - Cplx::new(1.0, 0.0)).norm() > 0.0 {
            for i in 0..n {
                q[(i, j)] *= col_phase[j];
            }
        }
    }
    for i in 0..n {
        d[i] = a[(i, i)].re;
    }
    Ok(())
}

/// Implicit-shift QL iteration on the real symmetric tridiagonal `(d, e)`,
/// rotating the complex columns of `q` in step.
fn ql_implicit_shift(d: &mut [f64], e: &mut [f64], q: &mut CMat, original: &CMat) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    // Shift the offdiagonal so e[l] couples l and l+1; e[n-1] is workspace.
    let mut off = vec![0.0f64; n];
    off[..(n - 1)].copy_from_slice(&e[..(n - 1)]);

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERS {
                return Err(Error::numerical(format!(
                    "herm_eig: QL failed to converge for eigenvalue {l} after {MAX_QL_ITERS} \
                     sweeps (n = {}, ‖M‖_F = {:.3e})",
                    n,
                    original.frobenius_norm()
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + off[l] / (g + r.copysign(g));
            let mut s = 1.0f64;
            let mut c = 1.0f64;
            let mut p = 0.0f64;
            let mut i = m;
            while i > l {
                let i1 = i - 1;
                let f = s * off[i1];
                let b = c * off[i1];
                r = f.hypot(g);
                off[i] = r;
                if r == 0.0 {
                    d[i] -= p;
                    off[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i] - p;
                r = (d[i1] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i] = g + p;
                g = c * r - b;
                // Rotate eigenvector columns i-1 and i.
                for row in 0..q.n_rows {
                    let qi1 = q[(row, i1)];
                    let qi = q[(row, i)];
                    q[(row, i)] = qi1 * s + qi * c;
                    q[(row, i1)] = qi1 * c - qi * s;
                }
                i -= 1;
            }
            if r == 0.0 && i > l {
                continue;
            }
            d[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Cplx {
        Cplx::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut StdRng) -> CMat {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(rng.gen_range(-2.0..2.0), 0.0);
            for j in (i + 1)..n {
                let v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        m.hermitian = true;
        m
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let eig = herm_eig(&CMat::identity(3)).unwrap();
        for l in &eig.eigenvalues {
            assert!((l - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_matrix_recovers_standard_basis() {
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = c(2.0, 0.0);
        m[(1, 1)] = c(-1.0, 0.0);
        m.hermitian = true;
        let eig = herm_eig(&m).unwrap();
        assert!((eig.eigenvalues[0] - 2.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvectors[0][0].re - 1.0).abs() < 1e-12);
        assert!(eig.eigenvectors[0][1].norm() < 1e-12);
        assert!((eig.eigenvectors[1][1].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_8x8_reconstructs_input() {
        let mut rng = StdRng::seed_from_u64(7);
        let m = random_hermitian(8, &mut rng);
        let eig = herm_eig(&m).unwrap();
        let rec = eig.reconstruct();
        let err = rec.sub(&m).frobenius_norm();
        assert!(
            err <= 1e-10 * m.frobenius_norm().max(1.0),
            "reconstruction error {err:.3e}"
        );
        // Orthonormality V†V = I.
        for i in 0..8 {
            for j in 0..8 {
                let d = eig.eigenvectors[i].dot(&eig.eigenvectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (d - c(target, 0.0)).norm() < 1e-10,
                    "orthonormality failure at ({i},{j}): {d}"
                );
            }
        }
    }

    #[test]
    fn eigen_residuals_are_small() {
        let mut rng = StdRng::seed_from_u64(99);
        for n in [2usize, 3, 5, 13, 20] {
            let m = random_hermitian(n, &mut rng);
            let eig = herm_eig(&m).unwrap();
            let scale = m.frobenius_norm().max(1.0);
            for (l, v) in eig.eigenvalues.iter().zip(eig.eigenvectors.iter()) {
                let mv = m.mul_vec(v);
                let lv = v.scale(c(*l, 0.0));
                assert!(
                    mv.sub(&lv).norm() <= 1e-10 * scale,
                    "residual too large at n={n}"
                );
            }
        }
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let mut m = CMat::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 0)] = c(0.5, 0.0);
        assert!(matches!(herm_eig(&m), Err(Error::Contract(_))));
    }

    #[test]
    fn rejects_oversized_input() {
        let m = CMat::identity(65);
        assert!(matches!(herm_eig(&m), Err(Error::Contract(_))));
    }

    #[test]
    fn handles_degenerate_spectra() {
        // Repeated eigenvalues from U diag(3,3,1,1,1) U†.
        let mut rng = StdRng::seed_from_u64(41);
        let base = random_hermitian(5, &mut rng);
        let u = herm_eig(&base).unwrap();
        let mut m = CMat::zeros(5, 5);
        for (idx, lambda) in [3.0, 3.0, 1.0, 1.0, 1.0].iter().enumerate() {
            let v = &u.eigenvectors[idx];
            for i in 0..5 {
                for j in 0..5 {
                    m[(i, j)] += *lambda * v[i] * v[j].conj();
                }
            }
        }
        let m = m.hermitian_part();
        let eig = herm_eig(&m).unwrap();
        for (k, expect) in [3.0, 3.0, 1.0, 1.0, 1.0].iter().enumerate() {
            assert!((eig.eigenvalues[k] - expect).abs() < 1e-10);
        }
        let err = eig.reconstruct().sub(&m).frobenius_norm();
        assert!(err < 1e-10 * m.frobenius_norm());
        // Orthonormality survives the multiplicities.
        for i in 0..5 {
            for j in (i + 1)..5 {
                assert!(eig.eigenvectors[i].dot(&eig.eigenvectors[j]).norm() < 1e-10);
            }
        }
    }
}
