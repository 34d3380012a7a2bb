//! Hermitian, positive-semidefinite, rank and range tests for small complex matrices.
//!
//! All thresholds are relative: a quantity `q` is compared against
//! `tol * scale` with `scale = max(1, max |m_jk|)`. A decision is *fragile*
//! when some deciding quantity lies within a factor of ten of its threshold.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::matrix_scale;
use crate::{CMatrix, CVector};

pub const DEFAULT_TOL: f64 = 1e-9;
const FRAGILE_FACTOR: f64 = 10.0;

/// True when `|q|` sits in the band `(thr / 10, thr * 10)`.
pub fn near_threshold(q: f64, thr: f64) -> bool {
    let a = q.abs();
    a > thr / FRAGILE_FACTOR && a < thr * FRAGILE_FACTOR
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsdReport {
    pub dim: usize,
    pub hermitian: bool,
    pub herm_residual: f64,
    pub psd: bool,
    pub rank: usize,
    pub min_eig: f64,
    /// Ascending eigenvalues of the symmetrized matrix.
    pub eigs: Vec<f64>,
    pub scale: f64,
    pub fragile: bool,
}

impl PsdReport {
    pub fn positive_definite(&self) -> bool {
        self.psd && self.rank == self.dim
    }
}

/// `(passes, max |m_jk - conj m_kj|)`; passes when the residual is at most `tol * scale`.
pub fn hermitian_test(m: &CMatrix, tol: f64) -> (bool, f64) {
    assert!(m.is_square(), "hermitian_test needs a square matrix");
    let n = m.nrows();
    let mut residual = 0.0f64;
    for j in 0..n {
        for k in j..n {
            residual = residual.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    (residual <= tol * matrix_scale(m), residual)
}

/// Eigenvalue-based PSD test and numerical rank of `(M + M^*)/2`.
pub fn psd_rank(m: &CMatrix, tol: f64) -> Result<PsdReport> {
    if !m.is_square() {
        return Err(Error::Usage("psd_rank needs a square matrix".into()));
    }
    let (hermitian, herm_residual) = hermitian_test(m, tol);
    let scale = matrix_scale(m);
    let thr = tol * scale;
    let dim = m.nrows();
    if dim == 0 {
        return Ok(PsdReport {
            dim,
            hermitian,
            herm_residual,
            psd: true,
            rank: 0,
            min_eig: 0.0,
            eigs: vec![],
            scale,
            fragile: false,
        });
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric("Hermitian eigensolver did not converge".into()))?;
    let mut eigs: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if eigs.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("non-finite eigenvalue".into()));
    }
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let min_eig = eigs[0];
    let rank = eigs.iter().filter(|&&x| x > thr).count();
    let fragile = eigs.iter().any(|&x| near_threshold(x, thr)) || near_threshold(herm_residual, thr);
    Ok(PsdReport {
        dim,
        hermitian,
        herm_residual,
        psd: min_eig >= -thr,
        rank,
        min_eig,
        eigs,
        scale,
        fragile,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RangeCheck {
    pub consistent: bool,
    pub rank_p: usize,
    pub rank_augmented: usize,
    /// Least-squares solution of `P X = B` (pseudo-inverse), when consistent.
    pub x: Option<CVector>,
    pub residual: f64,
    pub fragile: bool,
}

fn numerical_rank(m: &CMatrix, thr: f64) -> Result<(usize, bool)> {
    let sv = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric("SVD did not converge".into()))?
        .singular_values;
    Ok((
        sv.iter().filter(|&&x| x > thr).count(),
        sv.iter().any(|&x| near_threshold(x, thr)),
    ))
}

/// Whether `B` lies in the range of the PSD matrix `P`: `rank [P B] == rank P`.
pub fn range_consistency(p: &CMatrix, b: &CVector, tol: f64) -> Result<RangeCheck> {
    if !p.is_square() || p.nrows() != b.len() {
        return Err(Error::Usage("range_consistency: shape mismatch".into()));
    }
    let n = p.nrows();
    let scale = matrix_scale(p).max(b.iter().map(|x| x.norm()).fold(1.0, f64::max));
    let thr = tol * scale;
    let (rank_p, fragile_p) = numerical_rank(p, thr)?;
    let mut augmented = CMatrix::zeros(n, n + 1);
    augmented.view_mut((0, 0), (n, n)).copy_from(p);
    augmented.set_column(n, b);
    let (rank_augmented, fragile_a) = numerical_rank(&augmented, thr)?;
    let consistent = rank_augmented == rank_p;

    let sym = (p + p.adjoint()).scale(0.5);
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric("Hermitian eigensolver did not converge".into()))?;
    let mut x = CVector::zeros(n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > thr {
            let v = eig.eigenvectors.column(k);
            let coef = v.adjoint() * b;
            x += v * (coef[(0, 0)] / lambda);
        }
    }
    let residual = (p * &x - b).camax();
    Ok(RangeCheck {
        consistent,
        rank_p,
        rank_augmented,
        x: consistent.then_some(x),
        residual,
        fragile: fragile_p || fragile_a,
    })
}
