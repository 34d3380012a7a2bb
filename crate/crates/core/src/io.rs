//! JSON formats: problem files, function files, classification reports and
//! evaluation samples.
//!
//! Complex numbers are written as `{"re": .., "im": ..}`. Parse errors carry
//! the JSON path of the offending field.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classifier::Classification;
use crate::error::{Error, Result};
use crate::function::AnalyticFunction;
use crate::structured::{BoundaryJet, T0_TOL};
use crate::synthesizer::CoefficientMatrix;
use crate::{CMatrix, CVector};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// `t0` either as a point or as an angle in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Angle { angle: f64 },
    Point(ComplexJson),
}

impl PointSpec {
    pub fn value(&self) -> Complex64 {
        match *self {
            PointSpec::Angle { angle } => Complex64::from_polar(1.0, angle),
            PointSpec::Point(z) => z.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub t0: PointSpec,
    pub s: Vec<ComplexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl ProblemFile {
    pub fn from_jet(data: &BoundaryJet) -> Self {
        ProblemFile {
            t0: PointSpec::Point(data.t0().into()),
            s: data.s().iter().map(|&z| z.into()).collect(),
            tol: None,
            samples: None,
        }
    }

    /// Validates and converts to a [`BoundaryJet`], normalizing `t0` onto the circle.
    pub fn to_jet(&self) -> Result<BoundaryJet> {
        let t0 = self.t0.value();
        let r = t0.norm();
        if !r.is_finite() || (r - 1.0).abs() > T0_TOL {
            return Err(Error::Input(format!("t0: t0 not unimodular (|t0| = {r})")));
        }
        if self.s.is_empty() {
            return Err(Error::Input("s: at least s_0 is required".into()));
        }
        for (j, z) in self.s.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::Input(format!("s[{j}]: non-finite coefficient")));
            }
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::Input(format!("tol: must be positive, got {tol}")));
            }
        }
        BoundaryJet::new(t0, self.s.iter().map(|&z| z.into()).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem file serializes")
    }
}

fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Input(format!("{path}: {}", e.into_inner()))
    })
}

pub fn parse_problem_file(text: &str) -> Result<ProblemFile> {
    parse_json(text)
}

/// Parses a problem document straight to a [`BoundaryJet`].
pub fn parse_problem(text: &str) -> Result<BoundaryJet> {
    parse_problem_file(text)?.to_jet()
}

/// Serialized [`AnalyticFunction`]. The `lft` kind stores `t0`, `M` and `P`,
/// from which the coefficient matrix is rebuilt exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionFile {
    Constant {
        value: ComplexJson,
    },
    Polynomial {
        center: ComplexJson,
        coeffs: Vec<ComplexJson>,
    },
    Blaschke {
        gamma: ComplexJson,
        zeros: Vec<ComplexJson>,
    },
    Lft {
        t0: ComplexJson,
        m: Vec<ComplexJson>,
        /// Row-major.
        p: Vec<Vec<ComplexJson>>,
        param: Box<FunctionFile>,
    },
}

fn list(v: &[Complex64]) -> Vec<ComplexJson> {
    v.iter().map(|&z| z.into()).collect()
}

fn unlist(v: &[ComplexJson]) -> Vec<Complex64> {
    v.iter().map(|&z| z.into()).collect()
}

impl FunctionFile {
    pub fn from_function(f: &AnalyticFunction) -> Result<Self> {
        Ok(match f {
            AnalyticFunction::Constant(c) => FunctionFile::Constant { value: (*c).into() },
            AnalyticFunction::Polynomial { center, coeffs } => FunctionFile::Polynomial {
                center: (*center).into(),
                coeffs: list(coeffs),
            },
            AnalyticFunction::Blaschke { gamma, zeros } => FunctionFile::Blaschke {
                gamma: (*gamma).into(),
                zeros: list(zeros),
            },
            AnalyticFunction::LftComposite { coefficients: s, param } => {
                let p = s.p();
                FunctionFile::Lft {
                    t0: s.t0().into(),
                    m: list(s.m().as_slice()),
                    p: (0..p.nrows())
                        .map(|i| (0..p.ncols()).map(|j| p[(i, j)].into()).collect())
                        .collect(),
                    param: Box::new(FunctionFile::from_function(param)?),
                }
            }
            AnalyticFunction::LftInverse { .. } => {
                return Err(Error::Usage(
                    "inverse LFT parameters have no file representation".into(),
                ));
            }
        })
    }

    pub fn to_function(&self) -> Result<AnalyticFunction> {
        Ok(match self {
            FunctionFile::Constant { value } => AnalyticFunction::Constant((*value).into()),
            FunctionFile::Polynomial { center, coeffs } => {
                AnalyticFunction::polynomial((*center).into(), unlist(coeffs))?
            }
            FunctionFile::Blaschke { gamma, zeros } => AnalyticFunction::blaschke((*gamma).into(), unlist(zeros))?,
            FunctionFile::Lft { t0, m, p, param } => {
                let n = m.len();
                if p.len() != n || p.iter().any(|row| row.len() != n) {
                    return Err(Error::Input(format!("p: expected a {n}x{n} matrix")));
                }
                let pm = CMatrix::from_fn(n, n, |i, j| p[i][j].into());
                let s = CoefficientMatrix::from_parts((*t0).into(), CVector::from_vec(unlist(m)), &pm)?;
                AnalyticFunction::LftComposite {
                    coefficients: Arc::new(s),
                    param: Box::new(param.to_function()?),
                }
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("function file serializes")
    }
}

pub fn parse_function_file(text: &str) -> Result<FunctionFile> {
    parse_json(text)
}

pub fn parse_function(text: &str) -> Result<AnalyticFunction> {
    parse_function_file(text)?.to_function()
}

/// Classification as JSON, with the smallest eigenvalue of each computed `P_m` listed separately.
pub fn classification_report(cls: &Classification) -> Value {
    let mut v = serde_json::to_value(cls).expect("classification serializes");
    let mins: Vec<Value> = cls.diagnostics.iter().map(|d| json!(d.min_eig)).collect();
    v["min_eigenvalues"] = Value::Array(mins);
    v
}

/// `count` samples `(z, f(z))` on the unit circle and `count` on the radius
/// `z = t0 (1 - 2^-k)`, `k = 1..=count`.
pub fn evaluation_samples(f: &AnalyticFunction, t0: Complex64, count: usize) -> Result<Value> {
    let point = |z: Complex64| -> Result<Value> {
        let w = f.eval(z)?;
        Ok(json!({ "z": ComplexJson::from(z), "f": ComplexJson::from(w) }))
    };
    let circle = (0..count)
        .map(|k| point(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / count as f64)))
        .collect::<Result<Vec<_>>>()?;
    let radial = (1..=count)
        .map(|k| point(t0 * (1.0 - 0.5f64.powi(k as i32))))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({ "circle": circle, "radial": radial }))
}
