#![allow(dead_code)] // each test target compiles this module separately

//! Shared generators for the oracle test suites.

use num_complex::Complex64 as Cplx;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use secrecy_opt::linalg::CVec;
use secrecy_opt::model::Scenario;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_cplx(rng: &mut StdRng, mag_lo: f64, mag_hi: f64) -> Cplx {
    let mag = rng.gen_range(mag_lo..mag_hi);
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    Cplx::from_polar(mag, phase)
}

pub fn random_cvec(rng: &mut StdRng, n: usize, mag_lo: f64, mag_hi: f64) -> CVec {
    CVec((0..n).map(|_| random_cplx(rng, mag_lo, mag_hi)).collect())
}

/// Well-conditioned random scenario: gain magnitudes within one decade,
/// moderate noise, unit power budget.
pub fn random_scenario(n: usize, j: usize, seed: u64) -> Scenario {
    let mut r = rng(seed);
    let h0 = random_cplx(&mut r, 0.2, 1.5);
    let h = random_cvec(&mut r, n, 0.2, 1.5);
    let g0: Vec<Cplx> = (0..j).map(|_| random_cplx(&mut r, 0.2, 1.5)).collect();
    let g: Vec<CVec> = (0..j).map(|_| random_cvec(&mut r, n, 0.2, 1.5)).collect();
    let a = random_cvec(&mut r, n, 0.5, 1.5);
    let sigma2 = r.gen_range(1e-3..1e-1);
    let p0_min = r.gen_range(0.01..0.3);
    let rs0 = r.gen_range(0.3..1.5);
    Scenario::from_parts(h0, h, g0, g, a, sigma2, 1.0, Some(p0_min), Some(rs0)).unwrap()
}
