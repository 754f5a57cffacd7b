//! Complex linear-algebra kernel: small dense Hermitian matrices, a general
//! Hermitian eigensolver, and the rank-two / constrained-maximum closed
//! forms the solvers are built on.

mod closed_forms;
mod eig;

pub use closed_forms::{
    constrained_quadratic_max, overlap_transfer, overlap_transfer_d1, overlap_transfer_d2,
    rank_two_eig, Overlap, RankTwoEig, COLLINEARITY_TOL,
};
pub use eig::{herm_eig, HermEig};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Cplx = Complex64;

/// Largest matrix dimension the dense kernel accepts.
pub const MAX_DIM: usize = 64;

/// Relative tolerance for the Hermitian-symmetry check.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense complex vector (channel gains, relay weights).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CVec(#[serde(with = "cplx_serde::vec")] pub Vec<Cplx>);

impl CVec {
    pub fn zeros(n: usize) -> Self {
        CVec(vec![Cplx::new(0.0, 0.0); n])
    }

    pub fn from_reals(re: &[f64]) -> Self {
        CVec(re.iter().map(|&x| Cplx::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Conjugated inner product `self† · other`.
    pub fn dot(&self, other: &CVec) -> Cplx {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, s: Cplx) -> CVec {
        CVec(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &CVec) -> CVec {
        debug_assert_eq!(self.len(), other.len());
        CVec(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &CVec) -> CVec {
        debug_assert_eq!(self.len(), other.len());
        CVec(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Returns `self / ‖self‖`, or an error for the zero vector.
    pub fn normalized(&self) -> Result<CVec> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::degenerate("cannot normalize zero/non-finite vector"));
        }
        Ok(self.scale(Cplx::new(1.0 / n, 0.0)))
    }

    /// Rescales the global phase so the largest-magnitude entry is real
    /// nonnegative. Makes eigenvectors and closed-form solutions reproducible.
    pub fn phase_normalized(&self) -> CVec {
        let mut best = 0usize;
        let mut best_mag = -1.0f64;
        for (i, c) in self.0.iter().enumerate() {
            let m = c.norm_sqr();
            if m > best_mag {
                best_mag = m;
                best = i;
            }
        }
        if best_mag <= 0.0 {
            return self.clone();
        }
        let pivot = self.0[best];
        let phase = pivot / pivot.norm();
        self.scale(phase.conj())
    }

    /// Outer product `self · self†` (Hermitian PSD rank one).
    pub fn outer(&self) -> CMat {
        let n = self.len();
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.0[i] * self.0[j].conj();
            }
        }
        m.hermitian = true;
        m
    }
}

impl std::ops::Index<usize> for CVec {
    type Output = Cplx;
    fn index(&self, i: usize) -> &Cplx {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for CVec {
    fn index_mut(&mut self, i: usize) -> &mut Cplx {
        &mut self.0[i]
    }
}

/// Dense row-major complex matrix with a Hermitian marker.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    pub n_rows: usize,
    pub n_cols: usize,
    pub data: Vec<Cplx>,
    /// Set by constructors that guarantee `M = M†`.
    pub hermitian: bool,
}

impl CMat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CMat {
            n_rows,
            n_cols,
            data: vec![Cplx::new(0.0, 0.0); n_rows * n_cols],
            hermitian: false,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cplx::new(1.0, 0.0);
        }
        m.hermitian = true;
        m
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, f: impl Fn(usize, usize) -> Cplx) -> Self {
        let mut m = CMat::zeros(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        let mut m = CMat::identity(n);
        for i in 0..n {
            m[(i, i)] = Cplx::new(s, 0.0);
        }
        m
    }

    /// Largest entry magnitude; scale reference for tolerances.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Checks `M = M†` entrywise within `tol` relative to the largest entry.
    pub fn is_hermitian_within(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_abs().max(1e-300);
        for i in 0..self.n_rows {
            for j in i..self.n_cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                if d.norm() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Validates Hermitian symmetry and sets the marker flag.
    pub fn assert_hermitian(mut self) -> Result<Self> {
        if !self.is_hermitian_within(HERMITIAN_TOL) {
            return Err(Error::contract(
                "matrix is not Hermitian within 1e-12 relative tolerance",
            ));
        }
        self.hermitian = true;
        Ok(self)
    }

    /// `(M + M†)/2`; exact symmetrization for nearly-Hermitian input.
    pub fn hermitian_part(&self) -> CMat {
        let n = self.n_rows;
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        m.hermitian = true;
        m
    }

    pub fn adjoint(&self) -> CMat {
        let mut m = CMat::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m.hermitian = self.hermitian;
        m
    }

    pub fn add(&self, other: &CMat) -> CMat {
        debug_assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(other.data.iter()) {
            *a += b;
        }
        m.hermitian = self.hermitian && other.hermitian;
        m
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        debug_assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(other.data.iter()) {
            *a -= b;
        }
        m.hermitian = self.hermitian && other.hermitian;
        m
    }

    pub fn scale(&self, s: f64) -> CMat {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a *= s;
        }
        m
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        debug_assert_eq!(self.n_cols, other.n_rows);
        let mut m = CMat::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.n_cols {
                    m[(i, j)] += a * other[(k, j)];
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &CVec) -> CVec {
        debug_assert_eq!(self.n_cols, v.len());
        let mut out = CVec::zeros(self.n_rows);
        for i in 0..self.n_rows {
            let mut acc = Cplx::new(0.0, 0.0);
            for j in 0..self.n_cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn trace(&self) -> Cplx {
        (0..self.n_rows.min(self.n_cols))
            .map(|i| self[(i, i)])
            .sum()
    }

    /// `Re Tr(self · other)`; exact trace for Hermitian pairs.
    pub fn trace_product_re(&self, other: &CMat) -> f64 {
        debug_assert_eq!(self.n_cols, other.n_rows);
        let mut acc = 0.0;
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                acc += (self[(i, k)] * other[(k, i)]).re;
            }
        }
        acc
    }

    /// Quadratic form `v† M v` (real part; exact for Hermitian M).
    pub fn quad_form(&self, v: &CVec) -> f64 {
        let mv = self.mul_vec(v);
        v.dot(&mv).re
    }

    pub fn column(&self, j: usize) -> CVec {
        CVec((0..self.n_rows).map(|i| self[(i, j)]).collect())
    }

    pub fn set_column(&mut self, j: usize, v: &CVec) {
        debug_assert_eq!(self.n_rows, v.len());
        for i in 0..self.n_rows {
            self[(i, j)] = v[i];
        }
    }

    /// Cholesky factorization `M = L L†` of a Hermitian positive-definite
    /// matrix. Errors if a pivot is not strictly positive.
    pub fn cholesky(&self) -> Result<CMat> {
        if !self.is_square() {
            return Err(Error::contract("cholesky expects a square matrix"));
        }
        let n = self.n_rows;
        let mut l = CMat::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(Error::numerical(format!(
                    "cholesky pivot {j} is non-positive ({d:.3e}): matrix not PD"
                )));
            }
            let djj = d.sqrt();
            l[(j, j)] = Cplx::new(djj, 0.0);
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(l)
    }

    /// Solves `L x = b` for lower-triangular `L`.
    pub fn solve_lower(&self, b: &CVec) -> CVec {
        let n = self.n_rows;
        let mut x = b.clone();
        for i in 0..n {
            for k in 0..i {
                let lik = self[(i, k)];
                x[i] = x[i] - lik * x[k];
            }
            x[i] /= self[(i, i)];
        }
        x
    }

    /// Solves `L† x = b` for lower-triangular `L`.
    pub fn solve_lower_adjoint(&self, b: &CVec) -> CVec {
        let n = self.n_rows;
        let mut x = b.clone();
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let lki = self[(k, i)].conj();
                x[i] = x[i] - lki * x[k];
            }
            x[i] /= self[(i, i)].conj();
        }
        x
    }

    /// Inverse of a Hermitian positive-definite matrix via Cholesky.
    pub fn inverse_pd(&self) -> Result<CMat> {
        let n = self.n_rows;
        let l = self.cholesky()?;
        let mut inv = CMat::zeros(n, n);
        for j in 0..n {
            let mut e = CVec::zeros(n);
            e[j] = Cplx::new(1.0, 0.0);
            let y = l.solve_lower(&e);
            let x = l.solve_lower_adjoint(&y);
            inv.set_column(j, &x);
        }
        let mut inv = inv.hermitian_part();
        inv.hermitian = true;
        Ok(inv)
    }

    /// `f(M) = V f(Λ) V†` for Hermitian `M`; used for matrix square roots.
    pub fn hermitian_function(&self, f: impl Fn(f64) -> Result<f64>) -> Result<CMat> {
        let eig = herm_eig(self)?;
        let n = self.n_rows;
        let mut out = CMat::zeros(n, n);
        for (lambda, v) in eig.eigenvalues.iter().zip(eig.eigenvectors.iter()) {
            let fl = f(*lambda)?;
            if fl == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += fl * v[i] * v[j].conj();
                }
            }
        }
        let mut out = out.hermitian_part();
        out.hermitian = true;
        Ok(out)
    }

    /// Inverse square root of a Hermitian positive-definite matrix.
    pub fn inv_sqrt_pd(&self) -> Result<CMat> {
        let scale = self.max_abs();
        self.hermitian_function(|l| {
            if l <= 0.0 || l < 1e-14 * scale {
                Err(Error::numerical(format!(
                    "inv_sqrt_pd: eigenvalue {l:.3e} is not safely positive"
                )))
            } else {
                Ok(1.0 / l.sqrt())
            }
        })
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Cplx;
    fn index(&self, (i, j): (usize, usize)) -> &Cplx {
        &self.data[i * self.n_cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx {
        &mut self.data[i * self.n_cols + j]
    }
}

/// Serde helpers rendering complex numbers as `[re, im]` pairs, the wire
/// format used by every JSON interface of this crate.
pub mod cplx_serde {
    use num_complex::Complex64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, ser: S) -> Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Complex64, D::Error> {
        let pair = <[f64; 2]>::deserialize(de)?;
        if !pair[0].is_finite() || !pair[1].is_finite() {
            return Err(D::Error::custom("complex entries must be finite"));
        }
        Ok(Complex64::new(pair[0], pair[1]))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Complex64], ser: S) -> Result<S::Ok, S::Error> {
            let pairs: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
            pairs.serialize(ser)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Complex64>, D::Error> {
            let pairs = Vec::<[f64; 2]>::deserialize(de)?;
            if pairs.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
                return Err(D::Error::custom("complex entries must be finite"));
            }
            Ok(pairs
                .into_iter()
                .map(|p| Complex64::new(p[0], p[1]))
                .collect())
        }
    }
}
