//! Scalar fields.
//!
//! Everything in the crate is generic over [`Field`]; numerically flavoured
//! code additionally needs [`Scalar`], which adds a bridge to `Complex<f64>`.
//! The exact backends are [`BigRational`] and Gaussian rationals
//! `Complex<BigRational>`; the approximate backend is `Complex<f64>`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Commutative field of characteristic zero.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Exact fields decide equality; approximate ones compare with tolerances.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Zero test used by elimination. `scale` is the magnitude of the data the
    /// value was computed from; exact fields ignore it.
    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    /// Preference for pivot selection (larger is better).
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

/// A field embeddable in the complex numbers.
pub trait Scalar: Field {
    fn to_c64(&self) -> Complex64;

    /// Recover an element from a floating point approximation. Exact fields
    /// return the simplest nearby value, which callers must verify.
    fn rationalize(value: Complex64) -> Option<Self>;

    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }
}

/// Relative tolerance used by approximate elimination.
pub const APPROX_EPS: f64 = 1e-11;

impl Field for BigRational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Scalar for BigRational {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn rationalize(value: Complex64) -> Option<Self> {
        if value.im.abs() > 1e-7 * value.norm().max(1.0) {
            return None;
        }
        rationalize_real(value.re)
    }
}

impl Field for Complex<BigRational> {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_i64(n), BigRational::zero())
    }
}

impl Scalar for Complex<BigRational> {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn rationalize(value: Complex64) -> Option<Self> {
        let scale = value.norm().max(1.0);
        let re = if value.re.abs() < 1e-9 * scale {
            BigRational::zero()
        } else {
            rationalize_real(value.re)?
        };
        let im = if value.im.abs() < 1e-9 * scale {
            BigRational::zero()
        } else {
            rationalize_real(value.im)?
        };
        Some(Complex::new(re, im))
    }
}

impl Field for Complex64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.norm() <= APPROX_EPS * scale.max(f64::MIN_POSITIVE)
    }

    fn pivot_weight(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for Complex64 {
    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn rationalize(value: Complex64) -> Option<Self> {
        Some(value)
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= APPROX_EPS * scale.max(f64::MIN_POSITIVE)
    }

    fn pivot_weight(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for f64 {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }

    fn rationalize(value: Complex64) -> Option<Self> {
        (value.im.abs() <= 1e-9 * value.norm().max(1.0)).then_some(value.re)
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerators/denominators: scale by bit lengths first.
    let shift = q.numer().bits() as i64 - q.denom().bits() as i64;
    let num = q.numer().abs();
    let den = q.denom().clone();
    let (n, d) = if shift > 0 {
        (num, den << (shift as usize))
    } else {
        (num << ((-shift) as usize), den)
    };
    let m = BigRational::new(n, d).to_f64().unwrap_or(1.0);
    let v = m * 2f64.powi(shift.clamp(-2000, 2000) as i32);
    if q.is_negative() {
        -v
    } else {
        v
    }
}

/// Best rational approximation by continued fractions with denominator at most
/// one million, accepted when it reproduces `x` to about nine digits.
pub fn rationalize_real(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    const MAX_DEN: i128 = 1_000_000;
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > MAX_DEN {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= 1e-9 * x.abs().max(1.0) {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = r - a;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 != 0 && (h1 as f64 / k1 as f64 - x).abs() <= 1e-9 * x.abs().max(1.0) {
        Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
    } else {
        None
    }
}

/// Convenience constructor for rationals.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for Gaussian rationals.
pub fn gauss(re: BigRational, im: BigRational) -> Complex<BigRational> {
    Complex::new(re, im)
}

/// Map an exact rational into any field.
pub fn embed_rational<F: Field>(q: &BigRational) -> F {
    let n = bigint_into::<F>(q.numer());
    let d = bigint_into::<F>(q.denom());
    n / d
}

fn bigint_into<F: Field>(n: &BigInt) -> F {
    if let Some(v) = n.to_i64() {
        return F::from_i64(v);
    }
    // Horner in base 2^32.
    let (sign, digits) = n.to_u32_digits();
    let base = F::from_i64(1 << 32);
    let mut acc = F::zero();
    for d in digits.iter().rev() {
        acc = acc * base.clone() + F::from_i64(*d as i64);
    }
    if sign == num_bigint::Sign::Minus {
        -acc
    } else {
        acc
    }
}

/// Factorial as a field element.
pub fn factorial<F: Field>(n: usize) -> F {
    (1..=n).fold(F::one(), |acc, k| acc * F::from_i64(k as i64))
}

/// Binomial coefficient `binom(a, k)` for an integer (possibly negative) `a`.
pub fn binomial<F: Field>(a: i64, k: usize) -> F {
    let mut acc = F::one();
    for t in 0..k {
        acc = acc * F::from_i64(a - t as i64) / F::from_i64(t as i64 + 1);
    }
    acc
}

/// Falling factorial `a (a-1) ... (a-k+1)`.
pub fn falling<F: Field>(a: i64, k: usize) -> F {
    (0..k).fold(F::one(), |acc, t| acc * F::from_i64(a - t as i64))
}
