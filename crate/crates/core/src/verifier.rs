//! Independent numerical checks of claimed solutions and random test problems.
//!
//! Nothing here reuses the synthesis path: asymptotics are probed by direct
//! evaluation along rays into `t0`, Schwarz–Pick matrices come from a
//! bivariate truncated expansion of the kernel, and sup norms from circle grids.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::AnalyticFunction;
use crate::structured::BoundaryJet;
use crate::synthesizer::polynomial_circle_sup;
use crate::{CMatrix, ONE, ZERO};

/// Ratios of this size (times `1 + scale`) count as converged to zero.
pub const RATIO_PASS: f64 = 1e-6;
/// Minimum fitted decay exponent of the remainder ratios.
pub const DECAY_PASS: f64 = 0.5;
/// Jet agreement required when the candidate is analytic at `t0`.
pub const JET_PASS: f64 = 1e-8;
/// Radial samples are kept while `delta^N` stays above this, clear of rounding noise.
const DELTA_POW_FLOOR: f64 = 1e-9;
const FIT_WINDOW: usize = 8;
/// Relative rounding level tolerated in the boundary Schwarz–Pick samples.
const NOISE_CAP: f64 = 1e-8;
const SP_DELTA_START: f64 = 0.25;
const SP_RATIO: f64 = 0.9;
const SP_MAX_NODES: usize = 40;
const SP_MAX_COLUMNS: usize = 20;
/// Neighbor agreement (times scale) reported as converged.
const SP_CONVERGED: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    /// `(delta, |f(z) - T_N(z)| / delta^N)` along the radial path `z = t0 (1 - delta)`.
    pub remainder_ratios: Vec<(f64, f64)>,
    /// Least-squares slope of `log ratio` against `log delta` over the last samples.
    pub fitted_decay_exponent: f64,
    /// Largest `|f|` seen on a 1024-point circle grid.
    pub supnorm: f64,
    /// `max_j |f_j(t0) - s_j|` when `f` is analytic at `t0`.
    pub jet_error: Option<f64>,
    /// Largest ratio over the Stolz-angle rays, when requested.
    pub angle_ratio: Option<f64>,
    pub details: String,
}

fn taylor(data: &BoundaryJet, z: Complex64) -> Complex64 {
    let w = z - data.t0();
    data.s().iter().rev().fold(ZERO, |acc, c| acc * w + c)
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, r)| *r > 0.0)
        .map(|(d, r)| (d.ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        // All remainders vanish (or only one is nonzero): treat as arbitrarily fast decay.
        return f64::INFINITY;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn remainder_ratios(
    f: &AnalyticFunction,
    data: &BoundaryJet,
    direction: Complex64,
    ks: &[usize],
) -> Result<Vec<(f64, f64)>> {
    let big_n = data.order() as i32;
    ks.iter()
        .map(|&k| {
            let delta = 0.5f64.powi(k as i32);
            let z = data.t0() - direction * delta;
            let rem = (f.eval(z)? - taylor(data, z)).norm();
            Ok((delta, rem / delta.powi(big_n)))
        })
        .collect()
}

/// Checks `f(z) = s_0 + ... + s_N (z - t0)^N + o(|z - t0|^N)` along the radius
/// (and, with `angles`, along rays at +-30 and +-60 degrees inside the disk).
///
/// When `f` is analytic at `t0` the verdict is the direct jet comparison
/// (`1e-8 * scale`); otherwise every sampled path needs a final ratio of at most
/// `1e-6 (1 + scale)` or a fitted decay exponent of at least `0.5`.
pub fn verify_asymptotics(
    f: &AnalyticFunction,
    data: &BoundaryJet,
    depth: usize,
    angles: bool,
) -> Result<VerificationReport> {
    let big_n = data.order();
    let scale = data.scale();
    // Deepest k with delta^N >= floor, at least two samples.
    let k_floor = if big_n == 0 {
        depth
    } else {
        (DELTA_POW_FLOOR.log2().abs() / big_n as f64).floor() as usize
    };
    let k_end = k_floor.min(depth).max(3);
    let k_start = 4.min(k_end - 2).max(1);
    let ks: Vec<usize> = (k_start..=k_end).collect();
    let t0 = data.t0();
    let ratios = remainder_ratios(f, data, t0, &ks)?;
    let window = &ratios[ratios.len().saturating_sub(FIT_WINDOW)..];
    let exponent = slope(window);
    let final_ratio = ratios.last().map(|r| r.1).unwrap_or(0.0);
    let ratio_ok = final_ratio <= RATIO_PASS * (1.0 + scale) || exponent >= DECAY_PASS;

    let jet_error = f.jet_at(t0, big_n).ok().map(|j| {
        (0..=big_n)
            .map(|i| (j.coeff(i) - data.coeff(i)).norm())
            .fold(0.0, f64::max)
    });
    let jet_ok = jet_error.is_none_or(|e| e <= JET_PASS * scale);

    let mut angle_ratio = None;
    let mut angle_ok = true;
    if angles {
        let mut worst = 0.0f64;
        for deg in [-60.0f64, -30.0, 30.0, 60.0] {
            // Ray into the disk making angle `deg` with the inward normal at t0.
            let dir = t0 * Complex64::from_polar(1.0, deg.to_radians());
            let rs = remainder_ratios(f, data, dir, &ks)?;
            let win = &rs[rs.len().saturating_sub(FIT_WINDOW)..];
            let last = rs.last().map(|r| r.1).unwrap_or(0.0);
            angle_ok &= last <= RATIO_PASS * (1.0 + scale) || slope(win) >= DECAY_PASS;
            worst = worst.max(last);
        }
        angle_ratio = Some(worst);
    }

    let supnorm = supnorm_disk(f, 1024)?;
    // A matching jet at a point of analyticity implies the expansion outright; the
    // sampled ratios, which may still be pre-asymptotic at the last sample, only
    // decide when f is not analytic at t0.
    let passed = match jet_error {
        Some(_) => jet_ok,
        None => ratio_ok && angle_ok,
    };
    let details = format!(
        "radial samples k = {k_start}..{k_end}; final ratio {final_ratio:e}; decay exponent {exponent:.3}; jet error {}; {}",
        jet_error.map_or("n/a (not analytic at t0)".to_string(), |e| format!("{e:e}")),
        if passed { "passed" } else { "FAILED" }
    );
    Ok(VerificationReport {
        passed,
        remainder_ratios: ratios,
        fitted_decay_exponent: exponent,
        supnorm,
        jet_error,
        angle_ratio,
        details,
    })
}

/// Truncated bivariate series in `(u, conj v)`: entry `(i, j)` multiplies `u^i conj(v)^j`.
fn bivariate_mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut out = CMatrix::zeros(n, n);
    for i1 in 0..n {
        for j1 in 0..n {
            let x = a[(i1, j1)];
            if x == ZERO {
                continue;
            }
            for i2 in 0..n - i1 {
                for j2 in 0..n - j1 {
                    out[(i1 + i2, j1 + j2)] += x * b[(i2, j2)];
                }
            }
        }
    }
    out
}

/// Coefficients of `u^i conj(v)^j` (`0 <= i, j < n`) in
/// `(1 - f(z+u) conj f(z+v)) / (1 - (z+u) conj(z+v))`.
pub fn schwarz_pick_interior(f: &AnalyticFunction, z: Complex64, n: usize) -> Result<CMatrix> {
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!("|z| = {} is not inside the disk", z.norm())));
    }
    if n == 0 {
        return Err(Error::Usage("schwarz_pick_interior: n must be at least 1".into()));
    }
    let jet = f.jet_at(z, n - 1)?;
    let mut num = CMatrix::from_fn(n, n, |i, j| -jet.coeff(i) * jet.coeff(j).conj());
    num[(0, 0)] += ONE;
    // 1 - (z+u) conj(z+v) = rho (1 - X), X = (u conj z + z conj v + u conj v) / rho.
    let rho = 1.0 - z.norm_sqr();
    let mut x = CMatrix::zeros(n, n);
    if n > 1 {
        x[(1, 0)] = z.conj() / rho;
        x[(0, 1)] = z / rho;
        x[(1, 1)] = ONE / rho;
    }
    let mut geo = CMatrix::zeros(n, n);
    geo[(0, 0)] = ONE;
    let mut power = geo.clone();
    for _ in 1..(2 * n).max(2) {
        power = bivariate_mul(&power, &x);
        geo += &power;
    }
    Ok(bivariate_mul(&num, &geo) / Complex64::new(rho, 0.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryLimit {
    pub matrix: CMatrix,
    pub converged: bool,
    /// Difference between the last two extrapolants.
    pub increment: f64,
    pub scale: f64,
}

/// Radial limit of [`schwarz_pick_interior`] at `t0`.
///
/// Samples at `z = t0 (1 - delta_k)`, `delta_k = 2^-2 q^k` with `q = 0.9`,
/// are extrapolated to `delta = 0` entrywise in a Bulirsch–Stoer rational
/// tableau (at most 20 columns): along the radius the entries are rational in
/// `delta` when `f` is. The entry that agrees best with both of its neighbors
/// is returned. Nodes stop at `2^-depth`, after 40 samples, or once the
/// rounding level `eps / (2 delta)^(2n-1)` of a sample would exceed `1e-8`.
/// `converged` means that best agreement is within `1e-8 * scale`; the true
/// error is typically up to a hundred times the agreement.
///
/// Cancellation in the kernel limits this to about `n <= 3`; at `n = 4` the
/// extrapolation usually reports `converged = false`.
pub fn boundary_sp_limit(f: &AnalyticFunction, t0: Complex64, n: usize, depth: usize) -> Result<BoundaryLimit> {
    let t0 = crate::structured::normalize_t0(t0)?;
    if n == 0 {
        return Err(Error::Usage("boundary_sp_limit: n must be at least 1".into()));
    }
    let d_min = 0.5f64.powi(depth as i32);
    let mut deltas: Vec<f64> = Vec::new();
    let mut table: Vec<Vec<CMatrix>> = Vec::new();
    let mut delta = SP_DELTA_START;
    let noise = |d: f64| f64::EPSILON * (2.0 * d).powi(1 - 2 * n as i32);
    while deltas.len() < 3 || (deltas.len() < SP_MAX_NODES && delta >= d_min && noise(delta) <= NOISE_CAP) {
        deltas.push(delta);
        delta *= SP_RATIO;
        let i = deltas.len() - 1;
        let sample = schwarz_pick_interior(f, t0 * (1.0 - deltas[i]), n)?;
        let tiny = noise(deltas[i]) * sample.iter().map(|x| x.norm()).fold(1.0, f64::max);
        let mut row = vec![sample];
        for k in 1..=i.min(SP_MAX_COLUMNS) {
            let ratio = deltas[i - k] / deltas[i];
            let (a, b) = (&row[k - 1], &table[i - 1][k - 1]);
            let c = if k >= 2 { Some(&table[i - 1][k - 2]) } else { None };
            let next = CMatrix::from_fn(n, n, |p, q| {
                rational_step(a[(p, q)], b[(p, q)], c.map_or(ZERO, |m| m[(p, q)]), ratio, tiny)
            });
            row.push(next);
        }
        table.push(row);
    }
    let norm = |m: &CMatrix| m.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut best: Option<(f64, &CMatrix)> = None;
    for (i, row) in table.iter().enumerate() {
        for j in 1..row.len() {
            let mut inc = norm(&(&row[j] - &row[j - 1]));
            if i > 0 && j <= table[i - 1].len() {
                inc = inc.max(norm(&(&row[j] - &table[i - 1][j - 1])));
            }
            if inc.is_finite() && best.is_none_or(|(b, _)| inc < b) {
                best = Some((inc, &row[j]));
            }
        }
    }
    let (increment, matrix) = best
        .map(|(inc, m)| (inc, m.clone()))
        .unwrap_or((f64::INFINITY, table[0][0].clone()));
    let scale = norm(&matrix).max(1.0);
    let converged = increment <= SP_CONVERGED * scale;
    Ok(BoundaryLimit {
        matrix,
        converged,
        increment,
        scale,
    })
}

/// One Bulirsch–Stoer step: `T_{i,k}` from `a = T_{i,k-1}`, `b = T_{i-1,k-1}`,
/// `c = T_{i-1,k-2}` and `ratio = delta_{i-k} / delta_i`. Differences at the
/// rounding level `tiny` fall back to keeping `a` or to a polynomial step.
fn rational_step(a: Complex64, b: Complex64, c: Complex64, ratio: f64, tiny: f64) -> Complex64 {
    let diff = a - b;
    if diff.norm() <= tiny {
        return a;
    }
    if (a - c).norm() <= tiny {
        return (a * ratio - b) / (ratio - 1.0);
    }
    a + diff / ((ONE - diff / (a - c)) * ratio - ONE)
}

/// `max |f|` over `grid` equally spaced points of the unit circle.
pub fn supnorm_disk(f: &AnalyticFunction, grid: usize) -> Result<f64> {
    if grid == 0 {
        return Err(Error::Usage("supnorm_disk: grid must be positive".into()));
    }
    if let AnalyticFunction::Polynomial { center, coeffs } = f {
        if *center == ZERO {
            return Ok(polynomial_circle_sup(coeffs).max(circle_max(f, grid)?));
        }
    }
    circle_max(f, grid)
}

fn circle_max(f: &AnalyticFunction, grid: usize) -> Result<f64> {
    let mut best = 0.0f64;
    for k in 0..grid {
        let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / grid as f64);
        let v = f.eval(z)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::Domain(format!("non-finite value at {z}")));
        }
        best = best.max(v.norm());
    }
    Ok(best)
}

/// Seeded random Blaschke product of degree `degree` (zeros in `|z| <= 0.8`,
/// unimodular gamma) and its boundary jet of order `big_n` at `t0`.
pub fn random_blaschke_problem(
    degree: usize,
    t0: Complex64,
    big_n: usize,
    seed: u64,
) -> Result<(BoundaryJet, AnalyticFunction)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
    let zeros = (0..degree)
        .map(|_| Complex64::from_polar(0.8 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI)))
        .collect();
    let f = AnalyticFunction::blaschke(gamma, zeros)?;
    let data = jet_problem(&f, t0, big_n)?;
    Ok((data, f))
}

/// Boundary data `f_0(t0)..f_N(t0)` of a function analytic at `t0`.
pub fn jet_problem(f: &AnalyticFunction, t0: Complex64, big_n: usize) -> Result<BoundaryJet> {
    let t0 = crate::structured::normalize_t0(t0)?;
    BoundaryJet::new(t0, f.jet_at(t0, big_n)?.into_coeffs())
}
