use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::poly::Poly;
use crate::exactnum::ratfunc::RatFunc;
use crate::exactnum::scalar::{binomial, Field};

/// Normal-ordered differential operator `sum_i a_i(z) d^i` with rational
/// function coefficients written to the left of the powers of `d = d/dz`.
#[derive(Clone, PartialEq, Debug)]
pub struct DiffOperator<F> {
    coeffs: Vec<RatFunc<F>>,
}

impl<F: Field> DiffOperator<F> {
    pub fn new(mut coeffs: Vec<RatFunc<F>>) -> Self {
        while coeffs.last().is_some_and(|c| c.num().is_zero()) {
            coeffs.pop();
        }
        DiffOperator { coeffs }
    }

    /// Operator `sum_i a_i(z) d^i` from polynomial coefficients.
    pub fn from_polys(coeffs: Vec<Poly<F>>) -> Self {
        Self::new(coeffs.into_iter().map(RatFunc::from_poly).collect())
    }

    /// `delta^{-1} sum_i a_i d^i`.
    pub fn with_denominator(coeffs: Vec<Poly<F>>, delta: &Poly<F>) -> Result<Self> {
        if delta.is_zero() {
            return Err(Error::InvalidInput("zero operator denominator".into()));
        }
        Ok(Self::new(
            coeffs
                .into_iter()
                .map(|a| RatFunc::new(a, delta.clone()))
                .collect(),
        ))
    }

    pub fn zero() -> Self {
        DiffOperator { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::function(RatFunc::from_poly(Poly::one()))
    }

    pub fn scalar(c: F) -> Self {
        Self::function(RatFunc::constant(c))
    }

    /// Multiplication operator by `f`.
    pub fn function(f: RatFunc<F>) -> Self {
        Self::new(vec![f])
    }

    pub fn poly(p: Poly<F>) -> Self {
        Self::function(RatFunc::from_poly(p))
    }

    /// The coordinate `z`.
    pub fn z() -> Self {
        Self::poly(Poly::identity())
    }

    /// The derivation `d/dz`.
    pub fn d() -> Self {
        Self::new(vec![RatFunc::zero(), RatFunc::one()])
    }

    /// `z^j d^i` with coefficient `c`.
    pub fn monomial(c: F, j: usize, i: usize) -> Self {
        let mut v = vec![RatFunc::zero(); i + 1];
        v[i] = RatFunc::from_poly(Poly::monomial(c, j));
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[RatFunc<F>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFunc<F> {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_polynomial(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_poly)
    }

    /// Polynomial coefficients, or an error when some coefficient has poles.
    pub fn poly_coeffs(&self) -> Result<Vec<Poly<F>>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.is_poly() {
                    Ok(c.num().scale(&(F::one() / c.den().lead())))
                } else {
                    Err(Error::Undefined("operator has non-polynomial coefficients".into()))
                }
            })
            .collect()
    }

    /// Monic common denominator `delta` and polynomial numerators with
    /// `self = delta^{-1} sum_i n_i d^i`.
    pub fn common_denominator(&self) -> (Poly<F>, Vec<Poly<F>>) {
        let delta = self
            .coeffs
            .iter()
            .fold(Poly::one(), |acc, c| acc.lcm(c.den()));
        let nums = self
            .coeffs
            .iter()
            .map(|c| &c.num().clone() * &delta.div_rem(c.den()).0)
            .collect();
        (delta, nums)
    }

    /// Largest degree (at infinity) among coefficients; `i64::MIN` for zero.
    pub fn coeff_degree(&self) -> i64 {
        self.coeffs.iter().map(RatFunc::degree).max().unwrap_or(i64::MIN)
    }

    /// `f * self` (left multiplication by a function).
    pub fn left_mul_fn(&self, f: &RatFunc<F>) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * f.clone()).collect())
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> DiffOperator<G> {
        DiffOperator::new(
            self.coeffs
                .iter()
                .map(|c| RatFunc::new(c.num().map(&f), c.den().map(&f)))
                .collect(),
        )
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| op_mul(&acc, self))
    }

    /// Action on a rational function.
    pub fn apply(&self, f: &RatFunc<F>) -> RatFunc<F> {
        op_apply(self, f)
    }

    /// Action on a polynomial (the result may have poles).
    pub fn apply_poly(&self, f: &Poly<F>) -> RatFunc<F> {
        op_apply(self, &RatFunc::from_poly(f.clone()))
    }
}

/// Normal-ordered product via `d^i b = sum_k binom(i,k) b^{(k)} d^{i-k}`.
pub fn op_mul<F: Field>(a: &DiffOperator<F>, b: &DiffOperator<F>) -> DiffOperator<F> {
    if a.is_zero() || b.is_zero() {
        return DiffOperator::zero();
    }
    let (oa, ob) = (a.coeffs.len() - 1, b.coeffs.len() - 1);
    let mut out = vec![RatFunc::zero(); oa + ob + 1];
    // derivatives of b's coefficients, computed once
    let mut derivs: Vec<Vec<RatFunc<F>>> = Vec::with_capacity(oa + 1);
    derivs.push(b.coeffs.clone());
    for k in 1..=oa {
        let next = derivs[k - 1].iter().map(RatFunc::derivative).collect();
        derivs.push(next);
    }
    for (i, ai) in a.coeffs.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (k, dk) in derivs.iter().enumerate().take(i + 1) {
            let c: F = binomial(i as i64, k);
            for (j, bj) in dk.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let term = ai.clone() * bj.clone().scale(&c);
                let idx = i - k + j;
                out[idx] = out[idx].clone() + term;
            }
        }
    }
    DiffOperator::new(out)
}

/// `D.f = sum_i a_i f^{(i)}`.
pub fn op_apply<F: Field>(d: &DiffOperator<F>, f: &RatFunc<F>) -> RatFunc<F> {
    let mut acc = RatFunc::zero();
    let mut fk = f.clone();
    for (i, a) in d.coeffs.iter().enumerate() {
        if i > 0 {
            fk = fk.derivative();
        }
        if !a.is_zero() {
            acc = acc + a.clone() * fk.clone();
        }
    }
    acc
}

impl<F: Field> Add for &DiffOperator<F> {
    type Output = DiffOperator<F>;
    fn add(self, rhs: Self) -> DiffOperator<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DiffOperator::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<F: Field> Sub for &DiffOperator<F> {
    type Output = DiffOperator<F>;
    fn sub(self, rhs: Self) -> DiffOperator<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DiffOperator::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<F: Field> Mul for &DiffOperator<F> {
    type Output = DiffOperator<F>;
    fn mul(self, rhs: Self) -> DiffOperator<F> {
        op_mul(self, rhs)
    }
}

impl<F: Field> Neg for &DiffOperator<F> {
    type Output = DiffOperator<F>;
    fn neg(self) -> DiffOperator<F> {
        DiffOperator::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<F: Field + fmt::Display> fmt::Display for DiffOperator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_poly() {
                write!(f, "({})", c.num())?;
            } else {
                write!(f, "({})/({})", c.num(), c.den())?;
            }
            match i {
                0 => {}
                1 => write!(f, "*d")?,
                _ => write!(f, "*d^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;
    use num_rational::BigRational;

    type D = DiffOperator<BigRational>;
    type P = Poly<BigRational>;
    type R = RatFunc<BigRational>;

    #[test]
    fn leibniz_examples() {
        let z = D::z();
        let d = D::d();
        assert_eq!(&d * &z, &(&z * &d) + &D::one());
        assert_eq!(&z * &d, D::monomial(rat(1, 1), 1, 1));
        let lhs = &d.pow(2) * &z;
        let rhs = &D::monomial(rat(1, 1), 1, 2) + &D::monomial(rat(2, 1), 0, 1);
        assert_eq!(lhs, rhs);
        // both sides on z^3
        let z3 = P::monomial(rat(1, 1), 3);
        assert_eq!(lhs.apply_poly(&z3), d.pow(2).apply_poly(&(&z3 * &P::identity())));
    }

    #[test]
    fn apply_examples() {
        let zd = D::monomial(rat(1, 1), 1, 1);
        for k in 0..5 {
            let zk = P::monomial(rat(1, 1), k);
            assert_eq!(zd.apply_poly(&zk), R::from_poly(zk.scale(&rat(k as i64, 1))));
        }
        let one_minus = &D::one() - &zd;
        assert_eq!(one_minus.apply_poly(&P::one()), R::one());
        assert_eq!(
            D::d().pow(2).apply(&R::power(-1)),
            R::new(P::from_i64s(&[2]), P::monomial(rat(1, 1), 3))
        );
    }

    #[test]
    fn common_denominator_round_trip() {
        let a = D::new(vec![R::power(-1), R::new(P::one(), P::from_i64s(&[-1, 1]))]);
        let (delta, nums) = a.common_denominator();
        assert_eq!(delta, P::from_i64s(&[0, -1, 1]));
        assert_eq!(D::with_denominator(nums, &delta).unwrap(), a);
    }
}
