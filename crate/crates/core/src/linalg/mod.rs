//! Exact integer linear algebra: dense matrices, Smith/Hermite forms,
//! integer kernels and solvers, polynomials and minimal polynomials.

mod matrix;
mod minpoly;
mod poly;
mod smith;

pub use matrix::{dot, int_vec, IntMatrix};
pub use minpoly::{characteristic_polynomial, minimal_polynomial, MinPolyData};
pub use poly::IntPoly;
pub use smith::{
    hermite_normal_form, integer_kernel, lattice_basis, rank, smith_normal_form,
    solvable_over_rationals, solve_integer_linear, solve_with_smith, HermiteDecomposition,
    SmithDecomposition,
};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Nearest binary64 value; saturates to +-inf for huge magnitudes.
pub fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
