//! Exact arithmetic and integer/rational linear algebra.

pub mod matrix;
pub mod normal_form;
pub mod poly;
pub mod quad;
pub mod rational;
pub mod subspace;

pub use matrix::{IntMat, Matrix, RatMat};
pub use normal_form::{hnf, snf, solve_integer, solve_mod_lattice, Hnf, Snf};
pub use poly::{charpoly, root_of_unity_orders, totient, Poly};
pub use quad::QuadExt;
pub use rational::{parse_rational, parse_vector, Rational};
pub use subspace::{rational_image, rational_kernel, solve_rational, SubspaceQ};
