//! Exact and numeric computations around the Weyl algebra, Calogero-Moser
//! matrix pairs, Baker functions and the adelic Grassmannian.

pub mod adelic;
pub mod baker;
pub mod cmspace;
pub mod error;
pub mod exactnum;
pub mod psdo;
pub mod sample;
pub mod suite;
pub mod transitivity;
pub mod weylops;

pub use error::{Error, Result};

/// Outcome of a verification routine, with a human-readable explanation.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(passed: bool, detail: impl Into<String>) -> Self {
        Check {
            passed,
            detail: detail.into(),
        }
    }
}

use num_complex::{Complex, Complex64};
use num_rational::BigRational;

/// Exact rational scalar.
pub type Rational = BigRational;
/// Exact Gaussian rational scalar.
pub type GaussianRational = Complex<BigRational>;
/// Double precision complex scalar.
pub type Approx = Complex64;

pub type RatPoly = exactnum::Poly<Rational>;
pub type ExactMatrix = exactnum::Matrix<GaussianRational>;
pub type ApproxMatrix = exactnum::Matrix<Approx>;
