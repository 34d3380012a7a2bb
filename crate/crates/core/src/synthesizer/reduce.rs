//! Reduction of an order-`N` problem with `P_n > 0` to interpolation
//! conditions `E_j(t0) = R_j` on the parameter of the linear fractional map.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jets::{jet_div, Jet};
use crate::structured::BoundaryJet;
use crate::synthesizer::CoefficientMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedProblem {
    pub n: usize,
    /// `R_0..R_{N-2n}` (empty when not analytic).
    pub r_jet: Vec<Complex64>,
    /// `R(t0)` from the jet quotient, or the closed form when not analytic (then infinite).
    pub r0: Complex64,
    /// `R(t0)` from the closed form in terms of `s_{2n}`, `a_{2n}`, `c_n`, `d(t0)`.
    pub r0_closed: Complex64,
    pub analytic: bool,
    /// `B(t0) C(t0) + D(t0) F(t0) = b_n c_n + d(t0) (s_{2n} - a_{2n})`.
    pub denominator: Complex64,
    pub d_t0: Complex64,
    pub b_n: Complex64,
    pub c_n: Complex64,
    pub a_2n: Complex64,
}

impl ReducedProblem {
    /// `|c_n|^2 (1 - |R_0|^2) / |conj d(t0) - R_0|^2`, which equals `u` at level `n`.
    pub fn u_from_r0(&self) -> f64 {
        self.c_n.norm_sqr() * (1.0 - self.r0.norm_sqr()) / (self.d_t0.conj() - self.r0).norm_sqr()
    }
}

/// Forms `F, D, B, C` and `R = F / (B C + D F)` from the jets of `S` at `t0`.
///
/// `analytic` is false when `|B(t0) C(t0) + D(t0) F(t0)| <= tol * scale`; no
/// error is raised in that case since it is a finding about the data.
pub fn reduce_problem(data: &BoundaryJet, n: usize, s: &CoefficientMatrix, tol: f64) -> Result<ReducedProblem> {
    if n == 0 || s.n() != n {
        return Err(Error::Usage(format!(
            "reduce_problem: level {n} does not match S of order {}",
            s.n()
        )));
    }
    let big_n = data.order();
    if big_n < 2 * n {
        return Err(Error::InsufficientData {
            needed: 2 * n,
            available: big_n,
        });
    }
    let t0 = data.t0();
    let [a, b, c, d] = s.entry_jets(t0, big_n)?;
    let len = big_n - 2 * n + 1;
    let take = |jet: &Jet, offset: usize, f: &dyn Fn(usize, Complex64) -> Complex64| {
        Jet::new(t0, (0..len).map(|j| f(j, jet.coeff(offset + j))).collect())
    };
    let f = take(&a, 2 * n, &|j, aj| data.coeff(2 * n + j) - aj);
    let dd = take(&d, 0, &|_, x| x);
    let bb = take(&b, n, &|_, x| x);
    let cc = take(&c, n, &|_, x| x);
    let den = &(&bb * &cc) + &(&dd * &f);

    let d_t0 = d.coeff(0);
    let (b_n, c_n, a_2n) = (b.coeff(n), c.coeff(n), a.coeff(2 * n));
    let diff = data.coeff(2 * n) - a_2n;
    let sign = if (n - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let closed_den = t0.conj().powu(2 * n as u32) * c_n.norm_sqr() * data.coeff(0) * sign + diff;
    let r0_closed = d_t0.conj() * diff / closed_den;

    let denominator = den.coeff(0);
    let scale = 1f64.max((b_n * c_n).norm()).max((d_t0 * diff).norm());
    let analytic = denominator.norm() > tol * scale;
    let (r_jet, r0) = if analytic {
        let r = jet_div(&f, &den)?;
        let r0 = r.coeff(0);
        (r.into_coeffs(), r0)
    } else {
        (Vec::new(), r0_closed)
    };
    Ok(ReducedProblem {
        n,
        r_jet,
        r0,
        r0_closed,
        analytic,
        denominator,
        d_t0,
        b_n,
        c_n,
        a_2n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesizer::build_lft;
    use crate::ONE;

    fn reduce(s: &[f64]) -> ReducedProblem {
        let data = BoundaryJet::new(ONE, s.iter().map(|&x| Complex64::new(x, 0.0)).collect()).unwrap();
        let lft = build_lft(&data, 1, 1e-9).unwrap();
        reduce_problem(&data, 1, &lft, 1e-9).unwrap()
    }

    #[test]
    fn worked_instances() {
        let r = reduce(&[1.0, 3.0, 9.0]);
        assert!(r.analytic && r.r0.norm() < 1e-12 && r.r0_closed.norm() < 1e-12);
        assert!((r.u_from_r0() - 12.0).abs() < 1e-10);

        let r = reduce(&[1.0, 3.0, 3.0]);
        assert!(r.analytic);
        assert!((r.r0 + ONE).norm() < 1e-12 && (r.r0_closed + ONE).norm() < 1e-12);
        assert!((r.r0 - r.d_t0.conj()).norm() > 1.0);

        let r = reduce(&[1.0, 3.0, -3.0]);
        assert!(!r.analytic && r.r_jet.is_empty());
    }

    #[test]
    fn higher_order_jet() {
        let r = reduce(&[1.0, 3.0, 9.0, 27.0, 81.0]);
        assert!(r.analytic);
        assert_eq!(r.r_jet.len(), 3);
        // The data are the jet of a = 1/(4 - 3z) itself, so R vanishes identically.
        assert!(r.r_jet.iter().all(|x| x.norm() < 1e-9));
    }
}
