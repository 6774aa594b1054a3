use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exactnum::poly::Poly;
use crate::exactnum::scalar::Field;
use crate::exactnum::series::Series;

/// Univariate rational function `num / den`, kept in lowest terms with a monic
/// denominator (over exact fields).
#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::from_poly(Poly::zero());
        }
        if den.degree() == Some(0) {
            let l = den.lead();
            return RatFunc {
                num: num.scale(&(F::one() / l)),
                den: Poly::one(),
            };
        }
        let (num, den) = if F::EXACT {
            let g = num.gcd(&den);
            if g.degree().unwrap_or(0) > 0 {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            } else {
                (num, den)
            }
        } else {
            (num, den)
        };
        let l = den.lead();
        RatFunc {
            num: num.scale(&(F::one() / l.clone())),
            den: den.scale(&(F::one() / l)),
        }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// `z^k` for any integer `k`.
    pub fn power(k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(F::one(), k as usize))
        } else {
            RatFunc {
                num: Poly::one(),
                den: Poly::monomial(F::one(), (-k) as usize),
            }
        }
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Degree at infinity: `deg num - deg den` (`i64::MIN` for zero).
    pub fn degree(&self) -> i64 {
        if self.num.is_zero() {
            i64::MIN
        } else {
            self.num.deg() - self.den.deg()
        }
    }

    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den)
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |f, _| f.derivative())
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }

    /// Laurent expansion at infinity down to (and including) `z^lowest`.
    pub fn laurent_at_infinity(&self, lowest: i64) -> LaurentInf<F> {
        if self.num.is_zero() {
            return LaurentInf {
                top: lowest,
                coeffs: Vec::new(),
            };
        }
        let top = self.degree();
        if top < lowest {
            return LaurentInf {
                top: lowest,
                coeffs: Vec::new(),
            };
        }
        let len = (top - lowest + 1) as usize;
        let rev = |p: &Poly<F>| {
            let mut c = p.coeffs().to_vec();
            c.reverse();
            Series::new(c, len)
        };
        let n = rev(&self.num);
        let d = rev(&self.den);
        let q = n.mul(&d.inverse().expect("monic reversed denominator is a unit"));
        LaurentInf {
            top,
            coeffs: q.coeffs().to_vec(),
        }
    }
}

/// Coefficients `c_k` of `z^k` for `k = top, top-1, ..., top-len+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentInf<F> {
    pub top: i64,
    pub coeffs: Vec<F>,
}

impl<F: Field> LaurentInf<F> {
    pub fn coeff(&self, k: i64) -> F {
        if k > self.top {
            return F::zero();
        }
        self.coeffs
            .get((self.top - k) as usize)
            .cloned()
            .unwrap_or_else(F::zero)
    }

    pub fn lowest(&self) -> i64 {
        self.top - self.coeffs.len() as i64 + 1
    }

    /// Nonzero `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(t, c)| (self.top - t as i64, c))
    }
}

impl<F: Field> Zero for RatFunc<F> {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<F: Field> One for RatFunc<F> {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl<F: Field> Add for RatFunc<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            if self.is_poly() {
                return Self::from_poly(&self.num + &rhs.num);
            }
            return Self::new(&self.num + &rhs.num, self.den);
        }
        Self::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<F: Field> Sub for RatFunc<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Field> Mul for RatFunc<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_poly() && rhs.is_poly() {
            return Self::from_poly(&self.num * &rhs.num);
        }
        Self::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<F: Field> Div for RatFunc<F> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "rational function division by zero");
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl<F: Field> Neg for RatFunc<F> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFunc {
            num: -self.num,
            den: self.den,
        }
    }
}

impl<F: Field> Field for RatFunc<F> {
    const EXACT: bool = F::EXACT;

    fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;
    use num_rational::BigRational;

    type R = RatFunc<BigRational>;
    type P = Poly<BigRational>;

    #[test]
    fn reduces_to_lowest_terms() {
        let f = R::new(P::from_i64s(&[-1, 0, 1]), P::from_i64s(&[2, 2]));
        assert_eq!(f.num(), &P::new(vec![rat(-1, 2), rat(1, 2)]));
        assert_eq!(f.den(), &P::one());
    }

    #[test]
    fn laurent_expansion_of_geometric_series() {
        // 1/(z-1) = z^-1 + z^-2 + ...
        let f = R::new(P::one(), P::from_i64s(&[-1, 1]));
        let l = f.laurent_at_infinity(-4);
        assert_eq!(l.top, -1);
        for k in -4..=-1 {
            assert_eq!(l.coeff(k), rat(1, 1));
        }
        assert_eq!(l.coeff(0), rat(0, 1));
    }

    #[test]
    fn second_derivative_of_inverse() {
        let f = R::power(-1);
        assert_eq!(f.nth_derivative(2), R::new(P::from_i64s(&[2]), P::monomial(rat(1, 1), 3)));
    }
}
