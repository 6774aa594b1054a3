//! Scalars, polynomials, series, rational functions and dense matrices.

pub mod matrix;
pub mod numeric;
pub mod poly;
pub mod ratfunc;
pub mod roots;
pub mod scalar;
pub mod series;

pub use matrix::{rref_exact, Matrix};
pub use numeric::{eig_approx, rank_numeric, singular_values, Eigen};
pub use poly::{vandermonde_solve, Poly};
pub use ratfunc::{LaurentInf, RatFunc};
pub use roots::{roots_approx, split_roots};
pub use scalar::{embed_rational, rat, Field, Scalar};
pub use series::{series_exp, series_log, Series};
