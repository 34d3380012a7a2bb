//! Decides whether a boundary problem has no, exactly one, or infinitely many
//! Schur-class solutions.
//!
//! Procedure for `|s_0| = 1`: find the greatest `m <= (N+1)/2` with `P_m`
//! Hermitian (stopping at the first non-Hermitian order), require `P_m >= 0`,
//! then branch on whether `P_n` is singular and on how `N` compares with `2n`.
//! Low-order closed-form tests ([`classify_order1`], [`classify_order2`]) are
//! kept as independent oracles.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::psd::{near_threshold, psd_rank, range_consistency, PsdReport};
use crate::structured::{build_extended_entries, build_p_matrix, BoundaryJet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoSolution,
    Unique,
    Infinite,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NoSolution => "no_solution",
            Verdict::Unique => "unique",
            Verdict::Infinite => "infinite",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// `|s_0| < 1`.
    AbsLt1,
    /// `N = 0`, `|s_0| = 1`.
    #[serde(rename = "N0_trivial")]
    N0Trivial,
    /// `N = 2n - 1`, `P_n` singular, `rank P_n = rank P_{n-1}`.
    UniqueOddRankChain,
    /// `N = 2n`, `P_n` singular, symmetry and range conditions hold.
    #[serde(rename = "unique_even_1_11")]
    UniqueEven111,
    /// `N = 2n - 1`, `P_n > 0`.
    InfiniteMaximal,
    /// `N = 2n`, `P_n > 0`, `u >= 0`.
    #[serde(rename = "infinite_even_u_ge_0")]
    InfiniteEvenUGe0,
    /// `N > 2n`, `P_n > 0`, `u > 0`.
    #[serde(rename = "infinite_mid_u_gt_0")]
    InfiniteMidUGt0,
    NoneAbsGt1,
    /// `P_1` not Hermitian or negative.
    NoneN0,
    /// Greatest Hermitian `P_m` is not positive semidefinite.
    NoneNotPsd,
    /// `N = 2n - 1`, `P_n` singular, rank chain broken.
    NoneRankChain,
    /// `N = 2n`, `P_n` singular, symmetry or range condition fails.
    #[serde(rename = "none_1_11")]
    None111,
    /// `N > 2n`, `P_n` singular.
    NoneSingularDeep,
    /// `P_n > 0`, `N >= 2n`, `u < 0`.
    NoneUNegative,
    /// `P_n > 0`, `N > 2n`, `u = 0` within tolerance.
    NoneUZeroDeep,
}

impl CaseTag {
    pub fn verdict(self) -> Verdict {
        use CaseTag::*;
        match self {
            AbsLt1 | N0Trivial | InfiniteMaximal | InfiniteEvenUGe0 | InfiniteMidUGt0 => Verdict::Infinite,
            UniqueOddRankChain | UniqueEven111 => Verdict::Unique,
            NoneAbsGt1 | NoneN0 | NoneNotPsd | NoneRankChain | None111 | NoneSingularDeep | NoneUNegative
            | NoneUZeroDeep => Verdict::NoSolution,
        }
    }

    pub fn as_str(self) -> &'static str {
        use CaseTag::*;
        match self {
            AbsLt1 => "abs_lt_1",
            N0Trivial => "N0_trivial",
            UniqueOddRankChain => "unique_odd_rank_chain",
            UniqueEven111 => "unique_even_1_11",
            InfiniteMaximal => "infinite_maximal",
            InfiniteEvenUGe0 => "infinite_even_u_ge_0",
            InfiniteMidUGt0 => "infinite_mid_u_gt_0",
            NoneAbsGt1 => "none_abs_gt_1",
            NoneN0 => "none_n0",
            NoneNotPsd => "none_not_psd",
            NoneRankChain => "none_rank_chain",
            None111 => "none_1_11",
            NoneSingularDeep => "none_singular_deep",
            NoneUNegative => "none_u_negative",
            NoneUZeroDeep => "none_u_zero_deep",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub case_tag: CaseTag,
    /// Greatest order with `P_n >= 0` (0 if none or not applicable).
    pub n: usize,
    /// `rank P_n` when `P_n` was computed.
    pub rank: Option<usize>,
    /// `Re t0 (p_{n+1,n} - conj p_{n,n+1})` when it was needed.
    pub u: Option<f64>,
    pub fragile: bool,
    pub tol: f64,
    /// One report per computed order `m = 1, 2, ...`.
    pub diagnostics: Vec<PsdReport>,
    pub reason: String,
}

impl Classification {
    fn new(tag: CaseTag, tol: f64, reason: impl Into<String>) -> Self {
        Classification {
            verdict: tag.verdict(),
            case_tag: tag,
            n: 0,
            rank: None,
            u: None,
            fragile: false,
            tol,
            diagnostics: Vec::new(),
            reason: reason.into(),
        }
    }
}

fn abs_gate(s0: Complex64, tol: f64) -> Option<Classification> {
    let r = s0.norm();
    let fragile = near_threshold(r - 1.0, tol);
    let mut out = if r > 1.0 + tol {
        Classification::new(CaseTag::NoneAbsGt1, tol, format!("|s_0| = {r} > 1"))
    } else if r < 1.0 - tol {
        Classification::new(CaseTag::AbsLt1, tol, format!("|s_0| = {r} < 1"))
    } else {
        return None;
    };
    out.fragile = fragile;
    Some(out)
}

/// Full decision procedure. `tol` is relative to `max(1, max |entry|)` of the quantity tested.
pub fn classify(data: &BoundaryJet, tol: f64) -> Classification {
    match classify_inner(data, tol) {
        Ok(c) => c,
        // Only eigen/SVD non-convergence can land here; report it as a fragile no-solution.
        Err(e) => {
            let mut c = Classification::new(CaseTag::NoneNotPsd, tol, format!("numerical failure: {e}"));
            c.fragile = true;
            c
        }
    }
}

fn classify_inner(data: &BoundaryJet, tol: f64) -> crate::Result<Classification> {
    if let Some(c) = abs_gate(data.coeff(0), tol) {
        return Ok(c);
    }
    let big_n = data.order();
    let mut fragile = near_threshold(data.coeff(0).norm() - 1.0, tol);
    if big_n == 0 {
        let mut c = Classification::new(CaseTag::N0Trivial, tol, "N = 0 with |s_0| = 1");
        c.fragile = fragile;
        return Ok(c);
    }

    let max_m = big_n.div_ceil(2);
    let mut reports: Vec<PsdReport> = Vec::new();
    for m in 1..=max_m {
        let report = psd_rank(&build_p_matrix(data, m)?, tol)?;
        let hermitian = report.hermitian;
        if !hermitian {
            fragile |= report.fragile;
        }
        reports.push(report);
        if !hermitian {
            break;
        }
    }
    let herm_count = reports.iter().take_while(|r| r.hermitian).count();
    let finish = |mut c: Classification, reports: Vec<PsdReport>, fragile: bool| {
        c.fragile |= fragile;
        c.diagnostics = reports;
        Ok(c)
    };

    let p1 = &reports[0];
    if herm_count == 0 || !p1.psd {
        let c = Classification::new(CaseTag::NoneN0, tol, "P_1 = t0 s_1 conj(s_0) is not a nonnegative real");
        let fr = p1.fragile;
        return finish(c, reports, fragile || fr);
    }
    let n = herm_count;
    let pn = reports[n - 1].clone();
    fragile |= pn.fragile;
    if !pn.psd {
        let mut c = Classification::new(
            CaseTag::NoneNotPsd,
            tol,
            format!("P_{n} is Hermitian but not positive semidefinite"),
        );
        c.n = reports.iter().take_while(|r| r.hermitian && r.psd).count();
        return finish(c, reports, fragile);
    }

    let mut out = if pn.rank < n {
        classify_singular(data, n, &pn, &reports, tol, &mut fragile)?
    } else {
        classify_definite(data, n, tol, &mut fragile)?
    };
    out.n = n;
    out.rank = Some(pn.rank);
    finish(out, reports, fragile)
}

fn classify_singular(
    data: &BoundaryJet,
    n: usize,
    pn: &PsdReport,
    reports: &[PsdReport],
    tol: f64,
    fragile: &mut bool,
) -> crate::Result<Classification> {
    let big_n = data.order();
    if big_n + 1 == 2 * n {
        let prev_rank = if n == 1 { 0 } else { reports[n - 2].rank };
        *fragile |= n > 1 && reports[n - 2].fragile;
        return Ok(if pn.rank == prev_rank {
            Classification::new(
                CaseTag::UniqueOddRankChain,
                tol,
                format!("rank P_{n} = rank P_{} = {prev_rank}", n - 1),
            )
        } else {
            Classification::new(
                CaseTag::NoneRankChain,
                tol,
                format!("rank P_{n} = {} differs from rank P_{} = {prev_rank}", pn.rank, n - 1),
            )
        });
    }
    if big_n == 2 * n {
        let ext = build_extended_entries(data, n)?;
        let sym_defect = (ext.p_next_lower - ext.p_next_upper.conj()).norm();
        let sym_thr = tol * ext.u_scale;
        *fragile |= near_threshold(sym_defect, sym_thr);
        let p = build_p_matrix(data, n)?;
        let range = range_consistency(&p, &ext.b, tol)?;
        *fragile |= range.fragile;
        let mut c = if sym_defect <= sym_thr && range.consistent {
            Classification::new(
                CaseTag::UniqueEven111,
                tol,
                "p_{n+1,n} = conj p_{n,n+1} and B_n lies in the range of P_n",
            )
        } else if sym_defect > sym_thr {
            Classification::new(
                CaseTag::None111,
                tol,
                format!("p_{{n+1,n}} - conj p_{{n,n+1}} = {sym_defect:e} is not zero"),
            )
        } else {
            Classification::new(CaseTag::None111, tol, "rank [P_n B_n] exceeds rank P_n")
        };
        c.u = Some(ext.u);
        return Ok(c);
    }
    Ok(Classification::new(
        CaseTag::NoneSingularDeep,
        tol,
        format!("P_{n} is singular while N = {big_n} > 2n"),
    ))
}

fn classify_definite(data: &BoundaryJet, n: usize, tol: f64, fragile: &mut bool) -> crate::Result<Classification> {
    let big_n = data.order();
    if big_n + 1 == 2 * n {
        return Ok(Classification::new(
            CaseTag::InfiniteMaximal,
            tol,
            format!("P_{n} > 0 with N = 2n - 1"),
        ));
    }
    let ext = build_extended_entries(data, n)?;
    let thr = tol * ext.u_scale;
    *fragile |= near_threshold(ext.u, thr);
    let u = ext.u;
    let mut c = if big_n == 2 * n {
        if u >= -thr {
            Classification::new(
                CaseTag::InfiniteEvenUGe0,
                tol,
                format!("P_{n} > 0, N = 2n, u = {u:e} >= 0"),
            )
        } else {
            Classification::new(CaseTag::NoneUNegative, tol, format!("P_{n} > 0, N = 2n, u = {u:e} < 0"))
        }
    } else if u > thr {
        Classification::new(
            CaseTag::InfiniteMidUGt0,
            tol,
            format!("P_{n} > 0, N > 2n, u = {u:e} > 0"),
        )
    } else if u < -thr {
        Classification::new(CaseTag::NoneUNegative, tol, format!("P_{n} > 0, N > 2n, u = {u:e} < 0"))
    } else {
        *fragile = true;
        Classification::new(
            CaseTag::NoneUZeroDeep,
            tol,
            format!("P_{n} > 0, N > 2n, u = {u:e} is zero within tolerance"),
        )
    };
    c.u = Some(u);
    Ok(c)
}

/// Closed-form test for `N = 1`.
pub fn classify_order1(t0: Complex64, s0: Complex64, s1: Complex64, tol: f64) -> Classification {
    if let Some(c) = abs_gate(s0, tol) {
        return c;
    }
    let x = t0 * s1 * s0.conj();
    let scale = 1f64.max(x.norm());
    let mut c = if x.im.abs() > tol * scale || x.re < -tol * scale {
        Classification::new(CaseTag::NoneN0, tol, "t0 s_1 conj(s_0) is not a nonnegative real")
    } else if x.re <= tol * scale {
        Classification::new(
            CaseTag::UniqueOddRankChain,
            tol,
            "s_1 = 0: the solution is the constant s_0",
        )
    } else {
        Classification::new(CaseTag::InfiniteMaximal, tol, "t0 s_1 conj(s_0) > 0")
    };
    c.n = usize::from(c.verdict != Verdict::NoSolution);
    c
}

/// Closed-form test for `N = 2`.
///
/// With `|s_0| = 1` and `x = t0 s_1 conj(s_0) > 0`, solvability is
/// `2 Re(t0^2 conj(s_0) s_2) >= |s_1|^2 - x`. When `s_1 = 0` the solution, if
/// any, is the constant `s_0`, so then `s_2 = 0` is required as well.
pub fn classify_order2(t0: Complex64, s0: Complex64, s1: Complex64, s2: Complex64, tol: f64) -> Classification {
    if let Some(c) = abs_gate(s0, tol) {
        return c;
    }
    let x = t0 * s1 * s0.conj();
    let xs = 1f64.max(x.norm());
    if x.im.abs() > tol * xs || x.re < -tol * xs {
        return Classification::new(CaseTag::NoneN0, tol, "t0 s_1 conj(s_0) is not a nonnegative real");
    }
    if x.re <= tol * xs {
        let mut c = if s2.norm() <= tol * 1f64.max(s2.norm()) {
            Classification::new(CaseTag::UniqueEven111, tol, "s_1 = s_2 = 0: the constant s_0")
        } else {
            Classification::new(CaseTag::None111, tol, "s_1 = 0 forces the constant s_0, but s_2 != 0")
        };
        c.n = 1;
        return c;
    }
    let lhs = 2.0 * (t0 * t0 * s0.conj() * s2).re;
    let rhs = s1.norm_sqr() - x.re;
    let u = lhs - rhs;
    let scale = 1f64.max(s2.norm()).max(s1.norm_sqr());
    let mut c = if u >= -tol * scale {
        Classification::new(
            CaseTag::InfiniteEvenUGe0,
            tol,
            "2 Re(t0^2 conj(s_0) s_2) >= |s_1|^2 - t0 conj(s_0) s_1",
        )
    } else {
        Classification::new(
            CaseTag::NoneUNegative,
            tol,
            "2 Re(t0^2 conj(s_0) s_2) < |s_1|^2 - t0 conj(s_0) s_1",
        )
    };
    c.n = 1;
    c.u = Some(u);
    c
}
