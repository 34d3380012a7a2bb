//! Polynomials of sup-norm below one with a prescribed jet at a boundary point.
//!
//! Given `r_0..r_K` with `|r_0| < 1` the construction is
//! `g = r_0 + Q(z) k(z)`, where `k` is a peaked kernel with `k(t0) = 1` and
//! `|k| <= 1` on the circle, and `Q` (degree `K`, `Q(t0) = 0`) is fixed by
//! the jet equations. The kernel
//! `k(z) = [((1 - rho)/2) (1 + conj(t0) z) / (1 - rho conj(t0) z)]^p`, `p = K`,
//! has modulus width and phase scale both of order `1 - rho`, so that
//! `sup |g| <= |r_0| + O(1 - rho)`. The factor `(1 - rho conj(t0) z)^(-p)` is
//! replaced by its Taylor polynomial at the origin, truncated once the tail is
//! negligible, which makes `g` an ordinary polynomial.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::function::AnalyticFunction;
use crate::jets::{jet_div, Jet};
use crate::{ONE, ZERO};

/// Required margin: the returned polynomial satisfies `sup |g| <= 1 - MARGIN` on the grid.
pub const MARGIN: f64 = 1e-6;
/// Jet agreement demanded of the result, relative to `max(1, max |r_j|)`.
pub const JET_TOL: f64 = 1e-9;
/// Circle grid points per unit of degree.
pub const GRID_FACTOR: usize = 128;
const MAX_GRID: usize = 1 << 23;
const DELTA_START: f64 = 0.5;
const DELTA_MIN: f64 = 1.0 / 1024.0;
const TAIL_TOL: f64 = 1e-18;

/// Values of `sum_j coeffs[j] z^j` at the `len` points `exp(2 pi i m / len)`.
pub fn circle_values(coeffs: &[Complex64], len: usize) -> Vec<Complex64> {
    let len = len.max(coeffs.len());
    let mut buf = vec![ZERO; len];
    buf[..coeffs.len()].copy_from_slice(coeffs);
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(len);
    fft.process(&mut buf);
    buf
}

/// `max |p|` over a uniform circle grid of `GRID_FACTOR * (deg + 1)` points (capped).
pub fn polynomial_circle_sup(coeffs: &[Complex64]) -> f64 {
    let len = (GRID_FACTOR * coeffs.len()).min(MAX_GRID);
    circle_values(coeffs, len).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

struct Kernel {
    /// Coefficients at the origin, normalized to `k(t0) = 1`.
    coeffs: Vec<Complex64>,
    /// Jet at `t0` of the same polynomial, computed from positive sums.
    jet: Jet,
}

fn kernel(t0: Complex64, p: usize, delta: f64, order: usize) -> Kernel {
    let rho = (1.0 - delta) / (1.0 + delta);
    let tc = t0.conj();
    // Truncated (1 - rho w)^(-p) = sum_j C(p+j-1, j) rho^j w^j with w = conj(t0) z.
    let mut terms = Vec::new();
    let mut term = 1.0f64;
    let mut j = 0usize;
    loop {
        terms.push(term);
        let next = term * rho * (p + j) as f64 / (j + 1) as f64;
        j += 1;
        if next < term && next * (1.0 - rho).powi(p as i32 - 1) < TAIL_TOL {
            break;
        }
        term = next;
    }
    let g_at_t0: f64 = terms.iter().sum();
    // ((1 - rho)/2)^p (1 + w)^p has value (1 - rho)^p at t0; normalize the product to 1 there.
    let norm = 1.0 / ((1.0 - rho).powi(p as i32) * g_at_t0);
    let half = (1.0 - rho) / 2.0;
    let mut binom = vec![1.0f64; p + 1];
    for i in 1..=p {
        binom[i] = binom[i - 1] * (p + 1 - i) as f64 / i as f64;
    }
    let front: Vec<f64> = binom.iter().map(|b| b * half.powi(p as i32)).collect();
    let deg = front.len() + terms.len() - 2;
    let mut coeffs = vec![ZERO; deg + 1];
    let mut tc_pow = vec![ONE; deg + 1];
    for i in 1..=deg {
        tc_pow[i] = tc_pow[i - 1] * tc;
    }
    for (i, fi) in front.iter().enumerate() {
        for (j, gj) in terms.iter().enumerate() {
            coeffs[i + j] += tc_pow[i + j] * (fi * gj * norm);
        }
    }

    // Jet at t0: the k-th coefficient of sum_j g_j w^j is conj(t0)^k sum_j g_j C(j, k).
    let mut g_jet = vec![0.0f64; order + 1];
    for (j, gj) in terms.iter().enumerate() {
        let mut c = 1.0f64;
        for (k, slot) in g_jet.iter_mut().enumerate() {
            if k > j {
                break;
            }
            if k > 0 {
                c = c * (j + 1 - k) as f64 / k as f64;
            }
            *slot += gj * c;
        }
    }
    let g_jet = Jet::new(t0, (0..=order).map(|k| tc.powu(k as u32) * g_jet[k]).collect());
    let w_plus = Jet::new(t0, {
        let mut v = vec![ZERO; order + 1];
        v[0] = Complex64::new(2.0, 0.0);
        if order >= 1 {
            v[1] = tc;
        }
        v
    });
    let front_jet = w_plus.powi(p as u32).scale(half.powi(p as i32).into());
    let jet = (&front_jet * &g_jet).scale(norm.into());
    Kernel { coeffs, jet }
}

/// A polynomial `g` (coefficients at the origin) with jet `r` at `t0` and
/// `sup |g| <= 1 - 1e-6` on the circle.
pub fn synth_interior_jet(t0: Complex64, r: &[Complex64]) -> Result<AnalyticFunction> {
    let t0 = crate::structured::normalize_t0(t0)?;
    let Some(&r0) = r.first() else {
        return Err(Error::Usage("synth_interior_jet: empty jet".into()));
    };
    if r.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::Input("synth_interior_jet: non-finite coefficient".into()));
    }
    if r0.norm() > 1.0 - MARGIN {
        return Err(Error::Precondition(format!(
            "|r_0| = {} exceeds 1 - {MARGIN:e}",
            r0.norm()
        )));
    }
    let order = r.len() - 1;
    if r[1..].iter().all(|x| *x == ZERO) {
        return Ok(AnalyticFunction::Constant(r0));
    }
    let scale = r.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let mut target = r.to_vec();
    target[0] = ZERO;
    let target = Jet::new(t0, target);

    let mut delta = DELTA_START;
    let mut last_sup = f64::INFINITY;
    while delta >= DELTA_MIN {
        let k = kernel(t0, order.max(1), delta, order);
        // Q = (r - r_0) / k as jets at t0; Q_0 = 0.
        let q = jet_div(&target, &k.jet)?;
        // g = r_0 + sum_j q_j (z - t0)^j k(z), built by repeated multiplication by (z - t0).
        let mut cur = k.coeffs.clone();
        let mut g = vec![ZERO; cur.len() + order];
        for j in 1..=order {
            cur.push(ZERO);
            for i in (0..cur.len()).rev() {
                let lower = if i > 0 { cur[i - 1] } else { ZERO };
                cur[i] = lower - t0 * cur[i];
            }
            let qj = q.coeff(j);
            for (gi, ci) in g.iter_mut().zip(&cur) {
                *gi += qj * ci;
            }
        }
        g[0] += r0;
        while g.len() > 1 && *g.last().unwrap() == ZERO {
            g.pop();
        }
        last_sup = polynomial_circle_sup(&g);
        if last_sup <= 1.0 - MARGIN {
            let f = AnalyticFunction::Polynomial {
                center: ZERO,
                coeffs: g,
            };
            let got = f.jet_at(t0, order)?;
            let err = (0..=order).map(|j| (got.coeff(j) - r[j]).norm()).fold(0.0, f64::max);
            if err > JET_TOL * scale {
                return Err(Error::ConstructionFailure(format!(
                    "jet mismatch {err:e} at kernel width {delta:e}"
                )));
            }
            return Ok(f);
        }
        delta *= 0.5;
    }
    Err(Error::ConstructionFailure(format!(
        "kernel width reached {DELTA_MIN:e} with circle sup {last_sup} > 1 - {MARGIN:e}"
    )))
}
