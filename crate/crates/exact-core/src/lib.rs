//! Exact integer and rational linear algebra, plus the polyhedral primitives
//! (feasibility with strict rows, boundedness, lattice points, extreme rays)
//! that the toric crates are built on. No floating point anywhere.

pub mod arith;
pub mod cone;
mod error;
pub mod matrix;
pub mod polyhedron;
mod simplex;
pub mod snf;

pub use arith::{
    ceil, dot, dot_rat, floor, fmt_rat, gcd_all, int, is_zero_vec, ivec, lcm_denominators, pair, parse_rat, primitive,
    primitive_of_rat, rat, rat_from_int, rvec, Int, IntVec, Rat,
};
pub use cone::{cone_coefficients, cone_contains, extreme_rays, is_pointed};
pub use error::ExactError;
pub use matrix::{solve_rational, IntMat, RatMat, Solution};
pub use polyhedron::{
    count_lattice_points, feasible, has_lattice_point, is_bounded, lattice_points, maximize, mixed_integer_point, Ineq,
    IneqSystem, Optimum,
};
pub use snf::{invariant_factors, rank_fp, rank_q, smith_normal_form, Snf};
