//! Boundary interpolation for Schur-class functions.
//!
//! Given a unimodular point `t0` and numbers `s_0, ..., s_N`, the problem is to
//! find an analytic self-map `f` of the closed unit disk with the nontangential
//! expansion `f(z) = s_0 + s_1 (z - t0) + ... + s_N (z - t0)^N + o(|z - t0|^N)`.
//!
//! The crate decides solvability, classifies the problem as having no, exactly
//! one, or infinitely many solutions, builds explicit solutions and checks
//! every claimed property numerically.
//!
//! Layout:
//! - [`jets`]: truncated Taylor arithmetic, the derivative engine.
//! - [`function`]: evaluable solution representations.
//! - [`structured`]: the Toeplitz/Hankel/Pick-type matrices built from the data.
//! - [`psd`]: Hermitian, positivity, rank and range tests.
//! - [`classifier`]: the decision procedure.
//! - [`synthesizer`]: coefficient matrix, linear fractional parametrization and solution synthesis.
//! - [`verifier`]: independent numerical checks and random test problems.
//! - [`io`]: JSON problem/function/report formats.

pub mod classifier;
pub mod error;
pub mod function;
pub mod io;
pub mod jets;
pub mod linalg;
pub mod psd;
pub mod structured;
pub mod synthesizer;
pub mod verifier;

pub use classifier::{classify, classify_order1, classify_order2, CaseTag, Classification, Verdict};
pub use error::{Error, Result};
pub use function::AnalyticFunction;
pub use jets::Jet;
pub use num_complex::Complex64;
pub use structured::{BoundaryJet, StructuredSet};
pub use synthesizer::{
    build_lft, lft_apply, lft_invert, reduce_problem, solve, synth_determinate, synth_interior_jet, CoefficientMatrix,
    ReducedProblem, SolutionSet,
};

/// Complex dense matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Complex column vector.
pub type CVector = nalgebra::DVector<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
