//! The 2x2 inner coefficient matrix `S = [[a, b], [c, d]]` and the linear
//! fractional map `E -> a + b c E / (1 - d E)` it generates.
//!
//! Entries are never expanded symbolically: every value and every Taylor jet
//! comes from linear solves against `P~ - z P T^*`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::AnalyticFunction;
use crate::jets::Jet;
use crate::linalg::{dot_conj, Factorized};
use crate::psd::psd_rank;
use crate::structured::{build_p_matrix, normalize_t0, BoundaryJet};
use crate::{CMatrix, CVector, ONE, ZERO};

/// Number of circle samples used to measure how far `S` is from unitary.
pub const INNER_SAMPLES: usize = 128;

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientMatrix {
    t0: Complex64,
    t: CMatrix,
    m: CVector,
    p: CMatrix,
    ptilde: CMatrix,
    alpha: f64,
    beta: f64,
    // Derived once: P T^*, T^{-1} E, T M and w = P~ P^{-1} M (so that d = z a b w^* K T^{-1} E).
    pt_star: CMatrix,
    t_inv_e: CVector,
    tm: CVector,
    w: CVector,
    inner_defect: f64,
}

/// Lower bidiagonal `n x n` matrix with `t0` on the diagonal and ones below it.
pub fn shift_matrix(t0: Complex64, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |r, c| {
        if r == c {
            t0
        } else if r == c + 1 {
            ONE
        } else {
            ZERO
        }
    })
}

impl CoefficientMatrix {
    /// Assembles `S` from `t0`, `M = (s_0..s_{n-1})` and a positive definite `P`.
    ///
    /// `P` is symmetrized before use.
    pub fn from_parts(t0: Complex64, m: CVector, p: &CMatrix) -> Result<Self> {
        let n = m.len();
        if n == 0 || p.shape() != (n, n) {
            return Err(Error::Usage(
                "coefficient matrix: M and P must have matching size n >= 1".into(),
            ));
        }
        let t0 = normalize_t0(t0)?;
        let p = (p + p.adjoint()).scale(0.5);
        let t = shift_matrix(t0, n);
        let ptilde = &p + &m * m.adjoint();
        let mut e = CVector::zeros(n);
        e[0] = ONE;
        let p_fact = Factorized::new(&p, "P")?;
        let t_fact = Factorized::new(&t, "T")?;
        let t_inv_e = t_fact.solve(&e);
        // With P~ = P + M M^* (and P~ = T P T^* + E E^* for Hermitian data),
        // Sherman-Morrison gives alpha^2 = 1 / (1 + M^* P^-1 M) and
        // beta^2 = 1 / (1 + (T^-1 E)^* P^-1 T^-1 E) without cancellation.
        let q_m = dot_conj(&m, &p_fact.solve(&m)).re;
        let q_e = dot_conj(&t_inv_e, &p_fact.solve(&t_inv_e)).re;
        let alpha2 = 1.0 / (1.0 + q_m);
        let stein = &ptilde - &t * &p * t.adjoint() - &e * e.adjoint();
        let beta2 = if stein.norm() <= 1e-10 * ptilde.norm().max(1.0) {
            1.0 / (1.0 + q_e)
        } else {
            let pt_fact = Factorized::new(&ptilde, "P~")?;
            let b2 = 1.0 - dot_conj(&e, &pt_fact.solve(&e)).re;
            if !(b2 > 0.0 && b2 <= 1.0 + 1e-12) {
                return Err(Error::Numeric(format!(
                    "coefficient matrix: beta^2 = {b2} outside (0, 1]"
                )));
            }
            b2
        };
        if !(q_m.is_finite() && q_e.is_finite()) {
            return Err(Error::Numeric("coefficient matrix: non-finite quadratic form".into()));
        }
        let w = &ptilde * p_fact.solve(&m);
        let mut s = CoefficientMatrix {
            t0,
            pt_star: &p * t.adjoint(),
            t_inv_e,
            tm: &t * &m,
            w,
            t,
            m,
            p,
            ptilde,
            alpha: alpha2.min(1.0).sqrt(),
            beta: beta2.min(1.0).sqrt(),
            inner_defect: 0.0,
        };
        s.inner_defect = s.measure_inner_defect()?;
        Ok(s)
    }

    pub fn t0(&self) -> Complex64 {
        self.t0
    }
    pub fn n(&self) -> usize {
        self.m.len()
    }
    pub fn t(&self) -> &CMatrix {
        &self.t
    }
    pub fn m(&self) -> &CVector {
        &self.m
    }
    pub fn p(&self) -> &CMatrix {
        &self.p
    }
    pub fn ptilde(&self) -> &CMatrix {
        &self.ptilde
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    /// `max_z max_jk |(S^* S - I)_jk|` over the circle samples.
    pub fn inner_defect(&self) -> f64 {
        self.inner_defect
    }

    fn resolvent_at(&self, z: Complex64) -> Result<Factorized> {
        if z == self.t0 {
            // P~ - t0 P T^* = M M^* - t0 P N^T with N the lower shift; forming it
            // this way avoids cancelling P against t0 P conj(t0).
            let n = self.n();
            let shift_t = CMatrix::from_fn(n, n, |i, j| if j == i + 1 { ONE } else { ZERO });
            let a0 = &self.m * self.m.adjoint() - &self.p * shift_t * self.t0;
            return Factorized::new(&a0, "P~ - t0 P T^*");
        }
        Factorized::new(&(&self.ptilde - &self.pt_star * z), "P~ - z P T^*")
    }

    /// `[a(z), b(z), c(z), d(z)]`.
    pub fn eval_entries(&self, z: Complex64) -> Result<[Complex64; 4]> {
        let k = self.resolvent_at(z)?;
        let x = k.solve(&self.m);
        let y = k.solve(&self.t_inv_e);
        let a = x[0];
        let b = (ONE - z * y[0]) * self.beta;
        let c = (ONE - z * dot_conj(&self.tm, &x)) * self.alpha;
        let d = z * dot_conj(&self.w, &y) * (self.alpha * self.beta);
        Ok([a, b, c, d])
    }

    /// Jets of `[a, b, c, d]` at `center`, from `A_0 X_k = (P T^*) X_{k-1}` with `A_0 = P~ - center P T^*`.
    pub fn entry_jets(&self, center: Complex64, order: usize) -> Result<[Jet; 4]> {
        let k = self.resolvent_at(center).map_err(|e| match e {
            Error::Numeric(msg) => Error::SynthesisDegeneracy(format!("singular resolvent at {center}: {msg}")),
            other => other,
        })?;
        let mut x = k.solve(&self.m);
        let mut y = k.solve(&self.t_inv_e);
        let mut a = Vec::with_capacity(order + 1);
        let mut tx = Vec::with_capacity(order + 1);
        let mut y0 = Vec::with_capacity(order + 1);
        let mut wy = Vec::with_capacity(order + 1);
        for step in 0..=order {
            a.push(x[0]);
            tx.push(dot_conj(&self.tm, &x));
            y0.push(y[0]);
            wy.push(dot_conj(&self.w, &y));
            if step < order {
                x = k.solve(&(&self.pt_star * &x));
                y = k.solve(&(&self.pt_star * &y));
            }
        }
        let z = Jet::variable(center, order);
        let one_minus = |v: Vec<Complex64>| (&(&z * &Jet::new(center, v)) * (-ONE)).add_scalar(ONE);
        let a = Jet::new(center, a);
        let b = one_minus(y0).scale(self.beta.into());
        let c = one_minus(tx).scale(self.alpha.into());
        let d = (&z * &Jet::new(center, wy)).scale((self.alpha * self.beta).into());
        Ok([a, b, c, d])
    }

    fn measure_inner_defect(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for k in 0..INNER_SAMPLES {
            // Offset by half a step so that t0 itself (often a root of unity) is never sampled.
            let z = Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / INNER_SAMPLES as f64);
            let [a, b, c, d] = self.eval_entries(z)?;
            let g11 = a.norm_sqr() + c.norm_sqr() - 1.0;
            let g22 = b.norm_sqr() + d.norm_sqr() - 1.0;
            let g12 = a.conj() * b + c.conj() * d;
            worst = worst.max(g11.abs()).max(g22.abs()).max(g12.norm());
        }
        Ok(worst)
    }

    /// `d(t0)`.
    pub fn d_at_t0(&self) -> Result<Complex64> {
        Ok(self.eval_entries(self.t0)?[3])
    }
}

/// Builds `S` at level `n` from `s_0..s_{2n-1}`.
///
/// Requires `|s_0| = 1` and `P_n` positive definite (relative tolerance `tol`).
pub fn build_lft(data: &BoundaryJet, n: usize, tol: f64) -> Result<CoefficientMatrix> {
    if n == 0 {
        return Err(Error::Usage("build_lft: n must be at least 1".into()));
    }
    if ((data.coeff(0).norm()) - 1.0).abs() > tol {
        return Err(Error::Precondition(format!(
            "|s_0| = {} is not 1",
            data.coeff(0).norm()
        )));
    }
    let p = build_p_matrix(data, n)?;
    let report = psd_rank(&p, tol)?;
    if !report.hermitian || !report.positive_definite() {
        return Err(Error::Precondition(format!(
            "P_{n} is not positive definite (min eigenvalue {:e}, rank {})",
            report.min_eig, report.rank
        )));
    }
    let m = CVector::from_fn(n, |r, _| data.coeff(r));
    CoefficientMatrix::from_parts(data.t0(), m, &p)
}

/// `T_S[E] = a + b c E / (1 - d E)`.
pub fn lft_apply(s: &Arc<CoefficientMatrix>, e: AnalyticFunction) -> AnalyticFunction {
    AnalyticFunction::LftComposite {
        coefficients: Arc::clone(s),
        param: Box::new(e),
    }
}

/// The parameter `E = (f - a) / (b c + d (f - a))` with `T_S[E] = f`.
///
/// Rejects `f` when the denominator vanishes on a grid of interior points.
pub fn lft_invert(s: &Arc<CoefficientMatrix>, f: AnalyticFunction) -> Result<AnalyticFunction> {
    for ring in [0.3, 0.6, 0.9] {
        for k in 0..32 {
            let z = Complex64::from_polar(ring, 2.0 * PI * (k as f64 + 0.25) / 32.0);
            let [a, b, c, d] = s.eval_entries(z)?;
            let diff = f.eval(z)? - a;
            let den = b * c + d * diff;
            if den.norm() <= 1e-12 * (1.0 + diff.norm()) {
                return Err(Error::DegenerateInput(format!(
                    "b c + d (f - a) vanishes near z = {z}; f is not in the image of the transform"
                )));
            }
        }
    }
    Ok(AnalyticFunction::LftInverse {
        coefficients: Arc::clone(s),
        image: Box::new(f),
    })
}
