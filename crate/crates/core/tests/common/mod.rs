#![allow(dead_code)]

use proptest::prelude::*;
use schur_bp::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn complex(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| c(re, im))
}

pub fn unimodular() -> impl Strategy<Value = Complex64> {
    (0.0..std::f64::consts::TAU).prop_map(|a| Complex64::from_polar(1.0, a))
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn matrix_diff(a: &schur_bp::CMatrix, b: &schur_bp::CMatrix) -> f64 {
    (a - b).iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn matrix_scale(a: &schur_bp::CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(1.0, f64::max)
}

use rand::Rng;

/// Random `(t0, s0, s1, s2)` for the `N = 2` oracle, mixing generic data with
/// cases pinned to the circle, to Hermitian `P_1` (including `s1 = 0`) and to `u = 0`.
pub fn order2_case<R: Rng>(rng: &mut R) -> (Complex64, Complex64, Complex64, Complex64) {
    let tau = std::f64::consts::TAU;
    let t0 = Complex64::from_polar(1.0, rng.gen_range(0.0..tau));
    let kind = rng.gen_range(0..6);
    let s0 = if kind == 0 {
        Complex64::from_polar(rng.gen_range(0.0..1.5), rng.gen_range(0.0..tau))
    } else {
        Complex64::from_polar(1.0, rng.gen_range(0.0..tau))
    };
    let mut rc = |b: f64| c(rng.gen_range(-b..b), rng.gen_range(-b..b));
    let t0m2 = (t0 * t0).conj();
    let (s1, s2) = match kind {
        0 | 1 => (rc(4.0), rc(8.0)),
        2 => {
            // Hermitian P_1: t0 s1 conj(s0) = r >= 0.
            let r = rc(1.0).re.abs() * 5.0;
            (t0.conj() * s0 * r, rc(8.0))
        }
        3 => (c(0.0, 0.0), if rc(1.0).re > 0.0 { c(0.0, 0.0) } else { rc(2.0) }),
        _ => {
            // u = 0: 2 Re(t0^2 conj(s0) s2) = |s1|^2 - x with x = t0 s1 conj(s0) > 0.
            let x = 0.05 + rc(1.0).re.abs() * 5.0;
            let s1 = t0.conj() * s0 * x;
            let y = rc(3.0).re;
            let mut s2 = t0m2 * s0 * ((s1.norm_sqr() - x) / 2.0) + c(0.0, y) * t0m2 * s0;
            if kind == 5 {
                // Small perturbation of u to either side.
                s2 += t0m2 * s0 * rc(1e-3).re;
            }
            (s1, s2)
        }
    };
    (t0, s0, s1, s2)
}
