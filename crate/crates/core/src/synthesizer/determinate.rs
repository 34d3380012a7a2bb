//! The unique solution in the determinate case.
//!
//! With `d = rank P_n`, the matrix `P_d` is positive definite and the data
//! `s_0..s_{2d}` force a unimodular reduced value `R_0`; the solution is the
//! image of the constant `R_0` under the level-`d` linear fractional map, a
//! Blaschke product of degree `d`. A final jet comparison guards the route.

use std::sync::Arc;

use crate::classifier::{Classification, Verdict};
use crate::error::{Error, Result};
use crate::function::AnalyticFunction;
use crate::structured::BoundaryJet;
use crate::synthesizer::{build_lft, lft_apply, reduce_problem};

/// Allowed deviation of `|R_0|` from one. Loose on purpose: ill-conditioned
/// `P_d` (condition ~1e7 at degree 4) moves `|R_0|` by ~1e-7, and the final
/// jet gate is what certifies the result.
pub const UNIMODULAR_TOL: f64 = 1e-6;
/// Final jet gate, relative to `max(1, max |s_j|)`.
pub const GATE_TOL: f64 = 1e-8;

pub fn synth_determinate(data: &BoundaryJet, cls: &Classification) -> Result<AnalyticFunction> {
    if cls.verdict != Verdict::Unique {
        return Err(Error::Usage(format!(
            "synth_determinate needs a unique verdict, got {}",
            cls.verdict
        )));
    }
    let d = cls
        .rank
        .ok_or_else(|| Error::DataInconsistency("unique verdict without a rank".into()))?;
    let f = if d == 0 {
        AnalyticFunction::Constant(data.coeff(0))
    } else {
        let sub = data
            .truncated(2 * d)
            .map_err(|e| Error::DataInconsistency(format!("rank {d} needs s_0..s_{}: {e}", 2 * d)))?;
        let s = build_lft(&sub, d, cls.tol)
            .map_err(|e| Error::DataInconsistency(format!("level-{d} coefficient matrix: {e}")))?;
        let reduced = reduce_problem(&sub, d, &s, cls.tol)?;
        if !reduced.analytic {
            return Err(Error::DataInconsistency(format!(
                "reduced value at level {d} is not analytic"
            )));
        }
        let r0 = reduced.r0;
        if (r0.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::DataInconsistency(format!("|R_0| = {} is not 1", r0.norm())));
        }
        lft_apply(&Arc::new(s), AnalyticFunction::Constant(r0 / r0.norm()))
    };
    let jet = f.jet_at(data.t0(), data.order())?;
    let err = (0..=data.order())
        .map(|j| (jet.coeff(j) - data.coeff(j)).norm())
        .fold(0.0, f64::max);
    if err > GATE_TOL * data.scale() {
        return Err(Error::DataInconsistency(format!(
            "synthesized function misses the data by {err:e}"
        )));
    }
    Ok(f)
}
