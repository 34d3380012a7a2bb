//! Solution synthesis: the coefficient matrix and its linear fractional map,
//! the reduction to conditions on the parameter, interior jet matching, the
//! determinate construction and the top-level [`solve`].

mod determinate;
mod interior;
mod lft;
mod reduce;
mod solve;

pub use determinate::{synth_determinate, GATE_TOL, UNIMODULAR_TOL};
pub use interior::{circle_values, polynomial_circle_sup, synth_interior_jet, MARGIN};
pub use lft::{build_lft, lft_apply, lft_invert, shift_matrix, CoefficientMatrix, INNER_SAMPLES};
pub use reduce::{reduce_problem, ReducedProblem};
pub use solve::{parameter_grid, solve, SolutionSet};
