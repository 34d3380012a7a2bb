//! Truncated complex Taylor series ("jets").
//!
//! A [`Jet`] of order `K` at `center` stores the coefficients of
//! `(z - center)^j` for `j = 0..=K`. Arithmetic is strictly truncated: no
//! operation reads or writes beyond the order, and binary operations require
//! both operands to share center and order.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{ONE, ZERO};

/// Leading-coefficient threshold for [`jet_div`], relative to the largest coefficient.
pub const DIV_UNIT_TOL: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    center: Complex64,
    coeffs: Vec<Complex64>,
}

impl Jet {
    /// Builds a jet from its coefficients. The order is `coeffs.len() - 1`.
    ///
    /// Panics if `coeffs` is empty.
    pub fn new(center: Complex64, coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Jet { center, coeffs }
    }

    pub fn zero(center: Complex64, order: usize) -> Self {
        Jet {
            center,
            coeffs: vec![ZERO; order + 1],
        }
    }

    pub fn constant(center: Complex64, value: Complex64, order: usize) -> Self {
        let mut jet = Jet::zero(center, order);
        jet.coeffs[0] = value;
        jet
    }

    /// The identity function `z` expanded at `center`.
    pub fn variable(center: Complex64, order: usize) -> Self {
        let mut jet = Jet::constant(center, center, order);
        if order >= 1 {
            jet.coeffs[1] = ONE;
        }
        jet
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient `j`, or zero past the order.
    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or(ZERO)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Lower the order, dropping trailing coefficients.
    pub fn truncate(&self, order: usize) -> Jet {
        let keep = (order + 1).min(self.coeffs.len());
        let mut coeffs = self.coeffs[..keep].to_vec();
        coeffs.resize(order + 1, ZERO);
        Jet {
            center: self.center,
            coeffs,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Jet {
        Jet {
            center: self.center,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add_scalar(&self, value: Complex64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    pub fn conj_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.conj()).collect()
    }

    /// Evaluates the Taylor polynomial at `z`.
    pub fn eval_taylor(&self, z: Complex64) -> Complex64 {
        let du = z - self.center;
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * du + c)
    }

    fn check_compatible(&self, other: &Jet, op: &str) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::Usage(format!(
                "{op}: order mismatch ({} vs {})",
                self.order(),
                other.order()
            )));
        }
        if self.center != other.center {
            return Err(Error::Usage(format!(
                "{op}: center mismatch ({} vs {})",
                self.center, other.center
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other, "jet_add")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other, "jet_sub")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Jet, f: impl Fn(Complex64, Complex64) -> Complex64) -> Jet {
        Jet {
            center: self.center,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    /// `1 / self`.
    pub fn try_recip(&self) -> Result<Jet> {
        jet_div(&Jet::constant(self.center, ONE, self.order()), self)
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, mut exp: u32) -> Jet {
        let mut base = self.clone();
        let mut acc = Jet::constant(self.center, ONE, self.order());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = cauchy(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = cauchy(&base, &base);
            }
        }
        acc
    }
}

fn cauchy(a: &Jet, b: &Jet) -> Jet {
    let order = a.order();
    let mut coeffs = vec![ZERO; order + 1];
    for (i, ai) in a.coeffs.iter().enumerate() {
        if *ai == ZERO {
            continue;
        }
        for (j, bj) in b.coeffs[..=order - i].iter().enumerate() {
            coeffs[i + j] += ai * bj;
        }
    }
    Jet {
        center: a.center,
        coeffs,
    }
}

/// Truncated Cauchy product.
pub fn jet_mul(a: &Jet, b: &Jet) -> Result<Jet> {
    a.check_compatible(b, "jet_mul")?;
    Ok(cauchy(a, b))
}

/// Truncated quotient `a / b`, requiring a non-negligible leading coefficient in `b`.
pub fn jet_div(a: &Jet, b: &Jet) -> Result<Jet> {
    a.check_compatible(b, "jet_div")?;
    let b0 = b.coeffs[0];
    let scale = b.max_abs();
    if b0.norm() <= DIV_UNIT_TOL * scale || b0 == ZERO {
        return Err(Error::DivisionByNonUnit { b0, scale });
    }
    let order = a.order();
    let inv_b0 = ONE / b0;
    let mut q = vec![ZERO; order + 1];
    for k in 0..=order {
        let mut acc = a.coeffs[k];
        for j in 1..=k {
            acc -= b.coeffs[j] * q[k - j];
        }
        q[k] = acc * inv_b0;
    }
    Ok(Jet {
        center: a.center,
        coeffs: q,
    })
}

// Operator forms panic on incompatible operands; use the `try_`/`jet_` functions
// where the operands come from outside the crate.

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.try_add(rhs).expect("incompatible jets")
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.try_sub(rhs).expect("incompatible jets")
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        jet_mul(self, rhs).expect("incompatible jets")
    }
}

impl Mul<Complex64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: Complex64) -> Jet {
        self.scale(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-ONE)
    }
}
