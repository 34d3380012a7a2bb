//! Small dense helpers shared by the matrix-building modules.

use nalgebra::LU;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{CMatrix, CVector, ONE, ZERO};

/// Relative pivot threshold below which a factorization is treated as singular.
pub const PIVOT_TOL: f64 = 1e-14;

/// `max(1, max |m_jk|)`, the reference magnitude for relative matrix tolerances.
pub fn matrix_scale(m: &CMatrix) -> f64 {
    m.iter().map(|x| x.norm()).fold(1.0, f64::max)
}

pub fn vector_scale(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(1.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// LU factorization that refuses numerically singular matrices.
pub struct Factorized {
    lu: LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl Factorized {
    pub fn new(m: &CMatrix, what: &str) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::Usage(format!("{what}: expected a nonempty square matrix")));
        }
        let lu = m.clone().lu();
        let u = lu.u();
        let max_piv = u.diagonal().iter().map(|x| x.norm()).fold(0.0, f64::max);
        let min_piv = u.diagonal().iter().map(|x| x.norm()).fold(f64::INFINITY, f64::min);
        let reference = max_piv.max(matrix_scale(m) * f64::EPSILON);
        if min_piv.is_nan() || min_piv <= PIVOT_TOL * reference {
            return Err(Error::Numeric(format!(
                "{what} is numerically singular (pivot ratio {:e})",
                min_piv / reference
            )));
        }
        Ok(Factorized { lu })
    }

    pub fn solve(&self, rhs: &CVector) -> CVector {
        self.lu.solve(rhs).expect("factorization was checked nonsingular")
    }

    pub fn solve_mat(&self, rhs: &CMatrix) -> CMatrix {
        self.lu.solve(rhs).expect("factorization was checked nonsingular")
    }
}

/// Rows `0..=max_row` of Pascal's triangle, exact in `u128`.
pub fn pascal(max_row: usize) -> Vec<Vec<u128>> {
    let mut rows: Vec<Vec<u128>> = Vec::with_capacity(max_row + 1);
    for r in 0..=max_row {
        let mut row = vec![1u128; r + 1];
        for k in 1..r {
            row[k] = rows[r - 1][k - 1] + rows[r - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// `[1, z, z^2, ..., z^max]` by repeated multiplication (exact for `1, i, -1, -i`).
pub fn powers(z: Complex64, max: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(max + 1);
    let mut acc = ONE;
    for _ in 0..=max {
        out.push(acc);
        acc *= z;
    }
    out
}

pub fn dot_conj(a: &CVector, b: &CVector) -> Complex64 {
    a.iter().zip(b.iter()).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}
