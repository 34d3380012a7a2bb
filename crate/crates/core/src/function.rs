//! Evaluable analytic functions: the representations solutions are returned in.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jets::{jet_div, Jet};
use crate::synthesizer::CoefficientMatrix;
use crate::{ONE, ZERO};

/// Tolerance for `|gamma| = 1` and for zeros staying inside the disk.
pub const BLASCHKE_TOL: f64 = 1e-12;

/// Denominators smaller than this (relative) are treated as poles.
const POLE_TOL: f64 = 1e-15;

#[derive(Clone, Debug)]
pub enum AnalyticFunction {
    Constant(Complex64),
    /// `sum_j coeffs[j] (z - center)^j`.
    Polynomial {
        center: Complex64,
        coeffs: Vec<Complex64>,
    },
    /// `gamma * prod_k (z - a_k) / (1 - conj(a_k) z)`. Build with [`AnalyticFunction::blaschke`].
    Blaschke {
        gamma: Complex64,
        zeros: Vec<Complex64>,
    },
    /// `a + b c E / (1 - d E)` with `E = param`.
    LftComposite {
        coefficients: Arc<CoefficientMatrix>,
        param: Box<AnalyticFunction>,
    },
    /// `(f - a) / (b c + d (f - a))` with `f = image`: the parameter that maps to `image`.
    LftInverse {
        coefficients: Arc<CoefficientMatrix>,
        image: Box<AnalyticFunction>,
    },
}

impl PartialEq for AnalyticFunction {
    fn eq(&self, other: &Self) -> bool {
        use AnalyticFunction::*;
        match (self, other) {
            (Constant(a), Constant(b)) => a == b,
            (Polynomial { center: c1, coeffs: k1 }, Polynomial { center: c2, coeffs: k2 }) => c1 == c2 && k1 == k2,
            (Blaschke { gamma: g1, zeros: z1 }, Blaschke { gamma: g2, zeros: z2 }) => g1 == g2 && z1 == z2,
            (
                LftComposite {
                    coefficients: s1,
                    param: p1,
                },
                LftComposite {
                    coefficients: s2,
                    param: p2,
                },
            ) => s1 == s2 && p1 == p2,
            (
                LftInverse {
                    coefficients: s1,
                    image: f1,
                },
                LftInverse {
                    coefficients: s2,
                    image: f2,
                },
            ) => s1 == s2 && f1 == f2,
            _ => false,
        }
    }
}

fn blaschke_factor(a: Complex64, z: Complex64) -> Result<Complex64> {
    let den = ONE - a.conj() * z;
    if den.norm() <= POLE_TOL {
        return Err(Error::Domain(format!(
            "pole of the Blaschke factor with zero {a} at z = {z}"
        )));
    }
    Ok((z - a) / den)
}

impl AnalyticFunction {
    /// Validated Blaschke product: `|gamma| = 1` and every zero strictly inside the disk.
    pub fn blaschke(gamma: Complex64, zeros: Vec<Complex64>) -> Result<Self> {
        if (gamma.norm() - 1.0).abs() > BLASCHKE_TOL {
            return Err(Error::Input(format!("Blaschke gamma {gamma} is not unimodular")));
        }
        if let Some(a) = zeros
            .iter()
            .find(|a| a.norm().is_nan() || a.norm() >= 1.0 - BLASCHKE_TOL)
        {
            return Err(Error::Input(format!("Blaschke zero {a} is not inside the disk")));
        }
        Ok(AnalyticFunction::Blaschke { gamma, zeros })
    }

    pub fn polynomial(center: Complex64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Input("polynomial needs at least one coefficient".into()));
        }
        Ok(AnalyticFunction::Polynomial { center, coeffs })
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            AnalyticFunction::Constant(c) => Ok(*c),
            AnalyticFunction::Polynomial { center, coeffs } => {
                let w = z - center;
                Ok(coeffs.iter().rev().fold(ZERO, |acc, c| acc * w + c))
            }
            AnalyticFunction::Blaschke { gamma, zeros } => zeros
                .iter()
                .try_fold(*gamma, |acc, a| Ok(acc * blaschke_factor(*a, z)?)),
            AnalyticFunction::LftComposite { coefficients, param } => {
                let [a, b, c, d] = coefficients.eval_entries(z).map_err(as_domain)?;
                let e = param.eval(z)?;
                let den = ONE - d * e;
                if den.norm() <= POLE_TOL {
                    return Err(Error::Domain(format!("1 - d E vanishes at z = {z}")));
                }
                Ok(a + b * c * e / den)
            }
            AnalyticFunction::LftInverse { coefficients, image } => {
                let [a, b, c, d] = coefficients.eval_entries(z).map_err(as_domain)?;
                let diff = image.eval(z)? - a;
                let den = b * c + d * diff;
                if den.norm() <= POLE_TOL * (1.0 + diff.norm()) {
                    return Err(Error::Domain(format!("b c + d (f - a) vanishes at z = {z}")));
                }
                Ok(diff / den)
            }
        }
    }

    /// Taylor coefficients `f^(j)(center) / j!` for `j = 0..=order`.
    pub fn jet_at(&self, center: Complex64, order: usize) -> Result<Jet> {
        match self {
            AnalyticFunction::Constant(c) => Ok(Jet::constant(center, *c, order)),
            AnalyticFunction::Polynomial { center: pc, coeffs } => {
                let w = Jet::variable(center, order).add_scalar(-pc);
                let mut acc = Jet::zero(center, order);
                for c in coeffs.iter().rev() {
                    acc = (&acc * &w).add_scalar(*c);
                }
                Ok(acc)
            }
            AnalyticFunction::Blaschke { gamma, zeros } => {
                let z = Jet::variable(center, order);
                let mut acc = Jet::constant(center, *gamma, order);
                for a in zeros {
                    let num = z.add_scalar(-a);
                    let den = (&z * (-a.conj())).add_scalar(ONE);
                    let factor = jet_div(&num, &den)
                        .map_err(|_| Error::Domain(format!("Blaschke product has a pole at {center}")))?;
                    acc = &acc * &factor;
                }
                Ok(acc)
            }
            AnalyticFunction::LftComposite { coefficients, param } => {
                let [a, b, c, d] = coefficients.entry_jets(center, order)?;
                let e = param.jet_at(center, order)?;
                let den = (&(&d * &e) * (-ONE)).add_scalar(ONE);
                let frac = jet_div(&(&(&b * &c) * &e), &den)
                    .map_err(|_| Error::SynthesisDegeneracy(format!("1 - d E vanishes at {center}")))?;
                Ok(&a + &frac)
            }
            AnalyticFunction::LftInverse { coefficients, image } => {
                let [a, b, c, d] = coefficients.entry_jets(center, order)?;
                let diff = &image.jet_at(center, order)? - &a;
                let den = &(&b * &c) + &(&d * &diff);
                jet_div(&diff, &den)
                    .map_err(|_| Error::SynthesisDegeneracy(format!("b c + d (f - a) vanishes at {center}")))
            }
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match self {
            AnalyticFunction::Constant(c) => format!("constant {c}"),
            AnalyticFunction::Polynomial { coeffs, .. } => format!("polynomial of degree {}", coeffs.len() - 1),
            AnalyticFunction::Blaschke { zeros, .. } => format!("Blaschke product of degree {}", zeros.len()),
            AnalyticFunction::LftComposite { coefficients, param } => {
                format!("LFT of order {} applied to ({})", coefficients.n(), param.describe())
            }
            AnalyticFunction::LftInverse { coefficients, image } => {
                format!(
                    "inverse LFT of order {} applied to ({})",
                    coefficients.n(),
                    image.describe()
                )
            }
        }
    }
}

fn as_domain(e: Error) -> Error {
    match e {
        Error::Numeric(msg) => Error::Domain(msg),
        other => other,
    }
}
