//! Top-level solver: classify, then emit explicit solutions from fixed,
//! deterministic parameter families.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::classifier::{classify, CaseTag, Classification, Verdict};
use crate::error::{Error, Result};
use crate::function::AnalyticFunction;
use crate::structured::BoundaryJet;
use crate::synthesizer::{
    build_lft, lft_apply, reduce_problem, synth_determinate, synth_interior_jet, CoefficientMatrix,
};
use crate::ZERO;

/// `|R_0|` this close to one selects the unimodular parameter family.
const R0_UNIMODULAR_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SolutionSet {
    pub classification: Classification,
    pub functions: Vec<AnalyticFunction>,
    /// Why the set is empty, when it is.
    pub reason: Option<String>,
    /// Which parameter family produced the functions.
    pub family: String,
}

/// `lambda_i = i / max(4, k - 1)` for `i = 0..k`: values in `[0, 1]`.
pub fn parameter_grid(k: usize) -> Vec<f64> {
    let denom = 4.max(k.saturating_sub(1)) as f64;
    (0..k).map(|i| i as f64 / denom).collect()
}

/// Linear polynomial `p0 + p1 z`.
fn linear(p0: Complex64, p1: Complex64) -> AnalyticFunction {
    AnalyticFunction::Polynomial {
        center: ZERO,
        coeffs: vec![p0, p1],
    }
}

/// Classifies `data` and returns up to `k_samples` distinct solutions.
///
/// Families by case:
/// - unique: the determinate construction;
/// - `|s_0| < 1`: interior polynomials matching `s` plus an extra coefficient `lambda`;
/// - `N = 0`: `s_0 (c + (1 - c) conj(t0) z)`;
/// - `N = 2n - 1`: images of the constants `0`, `-conj d(t0)`, `0.5 e^{2 pi i j / (k-2)}`;
/// - `N = 2n`, `|R_0| < 1`: images of `R_0 + lambda (1 - |R_0|) (conj(t0) z - 1) / 2`;
/// - `N = 2n`, `|R_0| = 1`: images of `R_0 (c + (1 - c) conj(t0) z)`;
/// - `N > 2n`: images of interior polynomials matching `R_0..R_{N-2n}` plus an extra coefficient.
pub fn solve(data: &BoundaryJet, k_samples: usize, tol: f64) -> Result<SolutionSet> {
    let cls = classify(data, tol);
    let k = k_samples.max(1);
    let t0 = data.t0();
    let tc = t0.conj();
    let grid = parameter_grid(k);
    let mut out = SolutionSet {
        classification: cls.clone(),
        functions: Vec::new(),
        reason: None,
        family: String::new(),
    };
    match cls.verdict {
        Verdict::NoSolution => {
            out.reason = Some(cls.reason.clone());
            out.family = "none".into();
            return Ok(out);
        }
        Verdict::Unique => {
            out.functions.push(synth_determinate(data, &cls)?);
            out.family = "determinate".into();
            return Ok(out);
        }
        Verdict::Infinite => {}
    }

    match cls.case_tag {
        CaseTag::AbsLt1 => {
            out.family = "interior jet interpolants with extra coefficient lambda".into();
            for lambda in &grid {
                let mut r = data.s().to_vec();
                r.push(Complex64::new(*lambda, 0.0));
                out.functions.push(synth_interior_jet(t0, &r)?);
            }
        }
        CaseTag::N0Trivial => {
            out.family = "s0 (c + (1 - c) conj(t0) z)".into();
            let s0 = data.coeff(0);
            for c in &grid {
                out.functions.push(linear(s0 * *c, s0 * (1.0 - c) * tc));
            }
        }
        CaseTag::InfiniteMaximal => {
            let s = Arc::new(build_lft(data, cls.n, tol)?);
            let d0 = s.d_at_t0()?;
            let mut params = vec![ZERO, -d0.conj()];
            let ring = k.saturating_sub(2).max(1);
            for j in 0..k.saturating_sub(2) {
                params.push(Complex64::from_polar(0.5, 2.0 * PI * j as f64 / ring as f64));
            }
            params.truncate(k);
            out.family = "LFT images of constant parameters".into();
            out.functions = params
                .into_iter()
                .map(|c| lft_apply(&s, AnalyticFunction::Constant(c)))
                .collect();
        }
        CaseTag::InfiniteEvenUGe0 => {
            let (s, reduced) = reduced_at(data, cls.n, tol)?;
            let r0 = reduced.r0;
            if r0.norm() >= 1.0 - R0_UNIMODULAR_TOL {
                let r0 = r0 / r0.norm();
                out.family = "LFT images of R0 (c + (1 - c) conj(t0) z)".into();
                for c in &grid {
                    out.functions.push(lft_apply(&s, linear(r0 * *c, r0 * (1.0 - c) * tc)));
                }
            } else {
                let m = 1.0 - r0.norm();
                out.family = "LFT images of R0 + lambda (1 - |R0|) (conj(t0) z - 1) / 2".into();
                for lambda in &grid {
                    let h = lambda * m / 2.0;
                    out.functions.push(lft_apply(&s, linear(r0 - h, tc * h)));
                }
            }
        }
        CaseTag::InfiniteMidUGt0 => {
            let (s, reduced) = reduced_at(data, cls.n, tol)?;
            out.family = "LFT images of interior interpolants of the reduced jet".into();
            for lambda in &grid {
                let mut r = reduced.r_jet.clone();
                r.push(Complex64::new(*lambda, 0.0));
                let e = synth_interior_jet(t0, &r)?;
                out.functions.push(lft_apply(&s, e));
            }
        }
        other => {
            return Err(Error::DataInconsistency(format!(
                "case {other} is not an infinite-solution case"
            )));
        }
    }
    Ok(out)
}

fn reduced_at(
    data: &BoundaryJet,
    n: usize,
    tol: f64,
) -> Result<(Arc<CoefficientMatrix>, crate::synthesizer::ReducedProblem)> {
    let s = Arc::new(build_lft(data, n, tol)?);
    let reduced = reduce_problem(data, n, &s, tol)?;
    if !reduced.analytic {
        return Err(Error::DataInconsistency(
            "classification reported solutions but the reduced function is not analytic".into(),
        ));
    }
    Ok((s, reduced))
}
