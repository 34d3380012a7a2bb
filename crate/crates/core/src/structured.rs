//! Structured matrices built from the boundary data `(t0, s_0..s_N)`.
//!
//! Index conventions follow the usual 1-based matrix notation in the public
//! entry functions ([`p_entry`], [`psi_entry`]); the matrices themselves are
//! ordinary 0-based `nalgebra` matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{matrix_scale, pascal, powers};
use crate::{CMatrix, CVector, ZERO};

/// Distance from the unit circle tolerated (and normalized away) for `t0`.
pub const T0_TOL: f64 = 1e-9;

/// Boundary data: a point `t0` on the unit circle and the jet `s_0..s_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryJet {
    t0: Complex64,
    s: Vec<Complex64>,
}

impl BoundaryJet {
    /// Validates the data and projects `t0` onto the circle.
    pub fn new(t0: Complex64, s: Vec<Complex64>) -> Result<Self> {
        let t0 = normalize_t0(t0)?;
        if s.is_empty() {
            return Err(Error::Input("s must contain at least s_0".into()));
        }
        if s.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::Input("s contains a non-finite value".into()));
        }
        Ok(BoundaryJet { t0, s })
    }

    pub fn t0(&self) -> Complex64 {
        self.t0
    }

    pub fn s(&self) -> &[Complex64] {
        &self.s
    }

    pub fn coeff(&self, j: usize) -> Complex64 {
        self.s[j]
    }

    /// `N`, the highest prescribed index.
    pub fn order(&self) -> usize {
        self.s.len() - 1
    }

    /// The same point with the jet cut down to `s_0..s_order`.
    pub fn truncated(&self, order: usize) -> Result<BoundaryJet> {
        self.require(order)?;
        Ok(BoundaryJet {
            t0: self.t0,
            s: self.s[..=order].to_vec(),
        })
    }

    pub fn with_coeffs(&self, s: Vec<Complex64>) -> Result<BoundaryJet> {
        BoundaryJet::new(self.t0, s)
    }

    /// `max(1, max |s_j|)`.
    pub fn scale(&self) -> f64 {
        self.s.iter().map(|x| x.norm()).fold(1.0, f64::max)
    }

    pub(crate) fn require(&self, needed: usize) -> Result<()> {
        if needed > self.order() {
            Err(Error::InsufficientData {
                needed,
                available: self.order(),
            })
        } else {
            Ok(())
        }
    }
}

pub fn normalize_t0(t0: Complex64) -> Result<Complex64> {
    let r = t0.norm();
    if !r.is_finite() || (r - 1.0).abs() > T0_TOL {
        return Err(Error::Input(format!("t0 not unimodular (|t0| = {r})")));
    }
    // Leave points already on the circle to rounding untouched, so normalization is idempotent.
    if (r - 1.0).abs() <= 4.0 * f64::EPSILON {
        return Ok(t0);
    }
    Ok(t0 / r)
}

/// Entry `(j, l)` (1-based) of the upper triangular matrix `Psi(t0)`.
pub fn psi_entry(t0_pows: &[Complex64], binom: &[Vec<u128>], j: usize, l: usize) -> Complex64 {
    if j > l {
        return ZERO;
    }
    let sign = if (l - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    t0_pows[l + j - 1] * (sign * binom[l - 1][j - 1] as f64)
}

/// Upper triangular `n x n` matrix with entries `(-1)^(l-1) C(l-1, j-1) t0^(l+j-1)`.
pub fn build_psi(t0: Complex64, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Usage("build_psi: n must be at least 1".into()));
    }
    let t0 = normalize_t0(t0)?;
    let pows = powers(t0, 2 * n);
    let binom = pascal(n);
    Ok(CMatrix::from_fn(n, n, |r, c| psi_entry(&pows, &binom, r + 1, c + 1)))
}

/// Lower triangular Toeplitz matrix with first column `s_0..s_{n-1}`.
pub fn build_toeplitz_u(data: &BoundaryJet, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Usage("build_toeplitz_u: n must be at least 1".into()));
    }
    data.require(n - 1)?;
    Ok(CMatrix::from_fn(n, n, |j, k| if j >= k { data.s[j - k] } else { ZERO }))
}

/// Hankel matrix with entries `s_{j+k-1}` (1-based), i.e. `s_1..s_{2n-1}`.
pub fn build_hankel_h(data: &BoundaryJet, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Usage("build_hankel_h: n must be at least 1".into()));
    }
    data.require(2 * n - 1)?;
    Ok(CMatrix::from_fn(n, n, |j, k| data.s[j + k + 1]))
}

/// Entry `p_ij` (1-based) from the explicit double sum; needs `s` up to index `i + j - 1`.
pub fn p_entry(data: &BoundaryJet, i: usize, j: usize) -> Result<Complex64> {
    if i == 0 || j == 0 {
        return Err(Error::Usage("p_entry: indices are 1-based".into()));
    }
    data.require(i + j - 1)?;
    let pows = powers(data.t0, i + 2 * j);
    let binom = pascal(j);
    Ok(p_entry_with(data, &pows, &binom, i, j))
}

fn p_entry_with(data: &BoundaryJet, pows: &[Complex64], binom: &[Vec<u128>], i: usize, j: usize) -> Complex64 {
    let s = &data.s;
    let mut total = ZERO;
    for r in 1..=j {
        let mut inner = ZERO;
        for l in 1..=r {
            inner += s[i + l - 1] * psi_entry(pows, binom, l, r);
        }
        total += inner * s[j - r].conj();
    }
    total
}

/// Quantities that exist once the data reach `s_{2n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedEntries {
    /// Column `(p_{1,n+1}, ..., p_{n,n+1})`.
    pub b: CVector,
    pub phi: Complex64,
    pub upsilon: Complex64,
    /// `p_{n+1,n}`
    pub p_next_lower: Complex64,
    /// `p_{n,n+1}`
    pub p_next_upper: Complex64,
    /// Real part of `t0 (p_{n+1,n} - conj p_{n,n+1})`.
    pub u: f64,
    /// Imaginary residual of the same quantity (zero in exact arithmetic when `P_n > 0`).
    pub u_imag: f64,
    /// `max(1, |p_{n+1,n}|, |p_{n,n+1}|)`, the reference for tolerances on `u`.
    pub u_scale: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructuredSet {
    pub n: usize,
    pub u: CMatrix,
    pub h: CMatrix,
    pub psi: CMatrix,
    pub p: CMatrix,
    pub extended: Option<ExtendedEntries>,
}

/// `P_n = H_n Psi_n(t0) U_n^*`, plus the extended entries when `2n <= N`.
pub fn build_p(data: &BoundaryJet, n: usize) -> Result<StructuredSet> {
    let u = build_toeplitz_u(data, n)?;
    let h = build_hankel_h(data, n)?;
    let psi = build_psi(data.t0, n)?;
    let p = &h * &psi * u.adjoint();
    let extended = if 2 * n <= data.order() {
        Some(build_extended_entries(data, n)?)
    } else {
        None
    };
    Ok(StructuredSet {
        n,
        u,
        h,
        psi,
        p,
        extended,
    })
}

/// Only the matrix `P_n`, via the matrix product.
pub fn build_p_matrix(data: &BoundaryJet, n: usize) -> Result<CMatrix> {
    let u = build_toeplitz_u(data, n)?;
    let h = build_hankel_h(data, n)?;
    let psi = build_psi(data.t0, n)?;
    Ok(&h * &psi * u.adjoint())
}

/// `P_n` assembled entry by entry from the explicit sum; the cross-check path.
pub fn build_p_entrywise(data: &BoundaryJet, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Usage("n must be at least 1".into()));
    }
    data.require(2 * n - 1)?;
    let pows = powers(data.t0, 3 * n);
    let binom = pascal(n);
    Ok(CMatrix::from_fn(n, n, |i, j| {
        p_entry_with(data, &pows, &binom, i + 1, j + 1)
    }))
}

pub fn build_extended_entries(data: &BoundaryJet, n: usize) -> Result<ExtendedEntries> {
    if n == 0 {
        return Err(Error::Usage("n must be at least 1".into()));
    }
    data.require(2 * n)?;
    let s = &data.s;
    let t0 = data.t0;
    let pows = powers(t0, 2 * n + 2);
    let binom = pascal(n + 1);
    let psi = |j: usize, l: usize| psi_entry(&pows, &binom, j, l);

    // B_n through the n x (n+1) Hankel block, Psi_{n+1} and the reversed conjugate column.
    let hankel = CMatrix::from_fn(n, n + 1, |r, c| s[r + c + 1]);
    let psi_next = CMatrix::from_fn(n + 1, n + 1, |r, c| psi(r + 1, c + 1));
    let tail = CVector::from_fn(n + 1, |r, _| s[n - r].conj());
    let b = &hankel * &psi_next * &tail;

    let s0c = s[0].conj();
    let mut phi = ZERO;
    for r in 1..n {
        for l in 1..=r {
            phi += s[n + l] * psi(l, r) * s[n - r].conj();
        }
    }
    for l in 1..n {
        phi += s[n + l] * psi(l, n) * s0c;
    }
    let mut upsilon = ZERO;
    for r in 1..=n {
        for l in 1..=r {
            upsilon += s[n + l - 1] * psi(l, r) * s[n + 1 - r].conj();
        }
    }
    for l in 1..=n {
        upsilon += s[n + l - 1] * psi(l, n + 1) * s0c;
    }

    let sign_lower = if (n - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let p_next_lower = pows[2 * n - 1] * s[2 * n] * s0c * sign_lower + phi;
    let p_next_upper = pows[2 * n + 1] * s[2 * n] * s0c * (-sign_lower) + upsilon;
    let uc = t0 * (p_next_lower - p_next_upper.conj());
    Ok(ExtendedEntries {
        b,
        phi,
        upsilon,
        p_next_lower,
        p_next_upper,
        u: uc.re,
        u_imag: uc.im,
        u_scale: 1f64.max(p_next_lower.norm()).max(p_next_upper.norm()),
    })
}

/// Residual of `V Psi_{2n}(t0) conj(V) = Psi_{2n}(t0)` where `V = U_{2n}^T` is the
/// upper triangular Toeplitz matrix with first row `s_0..s_{2n-1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryCheck {
    /// Frobenius norm of the difference.
    pub residual: f64,
    /// `max(1, max entry modulus)` over both sides.
    pub scale: f64,
}

pub fn check_unitary_identity(data: &BoundaryJet, n: usize) -> Result<UnitaryCheck> {
    if n == 0 {
        return Err(Error::Usage("n must be at least 1".into()));
    }
    let u = build_toeplitz_u(data, 2 * n)?;
    let psi = build_psi(data.t0, 2 * n)?;
    let v = u.transpose();
    let lhs = &v * &psi * v.map(|x| x.conj());
    let diff = &lhs - &psi;
    Ok(UnitaryCheck {
        residual: diff.norm(),
        scale: matrix_scale(&lhs).max(matrix_scale(&psi)),
    })
}

/// `max |p_ij - conj p_ji|` over `i, j >= 1` with `i + j <= max_index_sum`
/// and `i + j - 1 <= N`, together with the largest `|p_ij|` seen.
pub fn symmetry_defect(data: &BoundaryJet, max_index_sum: usize) -> (f64, f64) {
    let limit = max_index_sum.min(data.order() + 1);
    let pows = powers(data.t0, 3 * limit + 2);
    let binom = pascal(limit + 1);
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for i in 1..limit {
        for j in 1..=(limit - i) {
            let pij = p_entry_with(data, &pows, &binom, i, j);
            let pji = p_entry_with(data, &pows, &binom, j, i);
            worst = worst.max((pij - pji.conj()).norm());
            scale = scale.max(pij.norm());
        }
    }
    (worst, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ONE;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| c(x, 0.0)).collect()
    }

    fn mat(rows: &[&[f64]]) -> CMatrix {
        CMatrix::from_fn(rows.len(), rows[0].len(), |r, k| c(rows[r][k], 0.0))
    }

    fn jet(s: &[f64]) -> BoundaryJet {
        BoundaryJet::new(ONE, real(s)).unwrap()
    }

    #[test]
    fn psi_small_cases() {
        assert_eq!(build_psi(ONE, 2).unwrap(), mat(&[&[1.0, -1.0], &[0.0, -1.0]]));
        assert_eq!(
            build_psi(ONE, 3).unwrap(),
            mat(&[&[1.0, -1.0, 1.0], &[0.0, -1.0, 2.0], &[0.0, 0.0, 1.0]])
        );
        let t0 = Complex64::from_polar(1.0, 0.7);
        let psi = build_psi(t0, 1).unwrap();
        assert!((psi[(0, 0)] - t0).norm() < 1e-15);
    }

    #[test]
    fn psi_rejects_off_circle() {
        assert!(matches!(build_psi(c(1.1, 0.0), 2), Err(Error::Input(_))));
    }

    #[test]
    fn toeplitz_and_hankel() {
        let d = jet(&[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(build_toeplitz_u(&d, 2).unwrap(), mat(&[&[1.0, 0.0], &[1.0, 1.0]]));
        assert_eq!(build_hankel_h(&d, 2).unwrap(), mat(&[&[1.0, 0.0], &[0.0, 0.0]]));
        let d = jet(&[1.0, 3.0, 3.0, 3.0]);
        assert_eq!(build_toeplitz_u(&d, 2).unwrap(), mat(&[&[1.0, 0.0], &[3.0, 1.0]]));
        assert_eq!(build_hankel_h(&d, 2).unwrap(), mat(&[&[3.0, 3.0], &[3.0, 3.0]]));
        assert_eq!(build_toeplitz_u(&d, 1).unwrap(), mat(&[&[1.0]]));
        assert_eq!(build_hankel_h(&d, 1).unwrap(), mat(&[&[3.0]]));
    }

    #[test]
    fn insufficient_data() {
        let d = jet(&[1.0, 1.0]);
        assert!(matches!(build_toeplitz_u(&d, 3), Err(Error::InsufficientData { .. })));
        assert!(matches!(build_hankel_h(&d, 2), Err(Error::InsufficientData { .. })));
        assert!(build_p(&d, 2).is_err());
        assert!(build_extended_entries(&d, 1).is_err());
    }

    #[test]
    fn p_worked_instances() {
        assert_eq!(
            build_p(&jet(&[1.0, 1.0, 0.0, 0.0]), 2).unwrap().p,
            mat(&[&[1.0, 0.0], &[0.0, 0.0]])
        );
        assert_eq!(
            build_p(&jet(&[1.0, 3.0, 3.0, 3.0]), 2).unwrap().p,
            mat(&[&[3.0, 3.0], &[3.0, 3.0]])
        );
        assert_eq!(build_p(&jet(&[1.0, 3.0]), 1).unwrap().p, mat(&[&[3.0]]));
        assert_eq!(
            build_p(&jet(&[1.0, 3.0, 3.0, 5.0]), 2).unwrap().p,
            mat(&[&[3.0, 3.0], &[3.0, 1.0]])
        );
    }

    #[test]
    fn p1_is_t0_s1_conj_s0() {
        let t0 = Complex64::from_polar(1.0, 1.3);
        let s = vec![Complex64::from_polar(1.0, -0.4), c(0.7, -2.0)];
        let d = BoundaryJet::new(t0, s.clone()).unwrap();
        let p = build_p(&d, 1).unwrap().p;
        assert!((p[(0, 0)] - s[1] * t0 * s[0].conj()).norm() < 1e-14);
    }

    #[test]
    fn extended_entries_instances() {
        let e = build_extended_entries(&jet(&[1.0, 3.0, 9.0]), 1).unwrap();
        assert!((e.p_next_lower - c(9.0, 0.0)).norm() < 1e-14);
        assert!((e.p_next_upper - c(-3.0, 0.0)).norm() < 1e-14);
        assert!((e.u - 12.0).abs() < 1e-14);

        let e = build_extended_entries(&jet(&[1.0, 3.0, 3.0]), 1).unwrap();
        assert!((e.p_next_lower - c(3.0, 0.0)).norm() < 1e-14);
        assert!((e.p_next_upper - c(3.0, 0.0)).norm() < 1e-14);
        assert!(e.u.abs() < 1e-14);

        let e = build_extended_entries(&jet(&[1.0, 3.0, 3.0, 3.0, 3.0]), 2).unwrap();
        assert!((e.b[0] - c(3.0, 0.0)).norm() < 1e-13 && (e.b[1] - c(3.0, 0.0)).norm() < 1e-13);
        assert!((e.p_next_lower - c(3.0, 0.0)).norm() < 1e-13);
        assert!((e.p_next_lower - e.p_next_upper.conj()).norm() < 1e-13);
    }

    #[test]
    fn extended_entries_match_entry_formula() {
        let t0 = Complex64::from_polar(1.0, 2.1);
        let s: Vec<Complex64> = (0..7).map(|k| c(0.3 * k as f64 - 1.0, 0.5 + 0.2 * k as f64)).collect();
        let d = BoundaryJet::new(t0, s).unwrap();
        for n in 1..=3 {
            let e = build_extended_entries(&d, n).unwrap();
            assert!((e.p_next_lower - p_entry(&d, n + 1, n).unwrap()).norm() < 1e-11);
            assert!((e.p_next_upper - p_entry(&d, n, n + 1).unwrap()).norm() < 1e-11);
            for k in 0..n {
                assert!((e.b[k] - p_entry(&d, k + 1, n + 1).unwrap()).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn unitary_identity_instances() {
        let r = check_unitary_identity(&jet(&[1.0, 3.0, 3.0, 3.0]), 2).unwrap();
        assert!(r.residual < 1e-10);
        let d = BoundaryJet::new(ONE, vec![ONE, c(0.0, 1.0)]).unwrap();
        assert!(check_unitary_identity(&d, 1).unwrap().residual >= 1.0);
        assert!(check_unitary_identity(&jet(&[1.0, 0.0]), 1).unwrap().residual < 1e-14);
    }

    #[test]
    fn t0_normalization() {
        let d = BoundaryJet::new(c(1.0 + 5e-10, 0.0), real(&[1.0])).unwrap();
        assert_eq!(d.t0(), ONE);
        assert!(BoundaryJet::new(c(2.0, 0.0), real(&[1.0])).is_err());
        assert!(BoundaryJet::new(ONE, vec![]).is_err());
    }
}
