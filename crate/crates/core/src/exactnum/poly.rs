use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exactnum::scalar::Field;

/// Univariate polynomial with ascending coefficients. The zero polynomial has
/// an empty coefficient list and no trailing zeros are ever stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn identity() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `z - root`.
    pub fn linear(root: F) -> Self {
        Self::new(vec![-root, F::one()])
    }

    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a F>) -> Self
    where
        F: 'a,
    {
        roots
            .into_iter()
            .fold(Self::one(), |acc, r| &acc * &Self::linear(r.clone()))
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `-1` for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        self.map(|c| c.clone() / l.clone())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let mut v = vec![F::zero()];
        v.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.clone() / F::from_i64(k as i64 + 1)),
        );
        Self::new(v)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `self(inner(z))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    /// Taylor shift: coefficients of `self(z + s)`, i.e. the Taylor
    /// coefficients `f^{(k)}(s)/k!` at `s`.
    pub fn shift(&self, s: &F) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j + 1].clone() * s.clone();
                c[j] = c[j].clone() + t;
            }
        }
        Self::new(c)
    }

    /// First `r` Taylor coefficients at `s` (zero padded).
    pub fn taylor(&self, s: &F, r: usize) -> Vec<F> {
        let sh = self.shift(s);
        (0..r).map(|k| sh.coeff(k)).collect()
    }

    /// Multiplicity of `root` as a root (0 if not a root). Zero polynomial
    /// yields `usize::MAX`.
    pub fn order_at(&self, root: &F) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let sh = self.shift(root);
        sh.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let lead = d.lead();
        let mut rem = self.coeffs.clone();
        let mut q = vec![F::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
                }
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Self::new(q), Self::new(rem))
    }

    /// Exact quotient; errors when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Internal("inexact polynomial division".into()))
        }
    }

    /// Monic greatest common divisor (exact fields).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        (self * other).div_rem(&g).0.monic()
    }

    /// Square-free part (exact fields).
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// `self` with `z` replaced by `c z`.
    pub fn rescale_var(&self, c: &F) -> Self {
        let mut p = F::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a.clone() * p.clone());
            p = p * c.clone();
        }
        Self::new(v)
    }
}

impl<F: Field> Default for Poly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a, F: Field> Add<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a, F: Field> Sub<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a, F: Field> Mul<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        self.map(|c| -c.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr<Poly<F>> for Poly<F> {
            type Output = Poly<F>;
            fn $m(self, rhs: Poly<F>) -> Poly<F> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}

impl<F: Field + fmt::Display> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

/// Interpolating polynomial of degree `< n` through `(nodes[i], values[i])`,
/// by Newton divided differences.
pub fn vandermonde_solve<F: Field>(nodes: &[F], values: &[F]) -> Result<Poly<F>> {
    if nodes.len() != values.len() {
        return Err(Error::InvalidInput(format!(
            "{} nodes but {} values",
            nodes.len(),
            values.len()
        )));
    }
    let n = nodes.len();
    let scale = 1.0;
    for i in 0..n {
        for j in (i + 1)..n {
            if (nodes[i].clone() - nodes[j].clone()).is_negligible(scale) {
                return Err(Error::CoincidentNodes(i, j));
            }
        }
    }
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone())
                / (nodes[i].clone() - nodes[i - level].clone());
        }
    }
    let mut p = Poly::zero();
    for i in (0..n).rev() {
        p = &(&p * &Poly::linear(nodes[i].clone())) + &Poly::constant(dd[i].clone());
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;
    use num_rational::BigRational;

    type P = Poly<BigRational>;

    #[test]
    fn trailing_zeros_trimmed() {
        let p = P::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(P::from_i64s(&[0, 0]).degree(), None);
    }

    #[test]
    fn division_and_gcd() {
        let a = P::from_i64s(&[-1, 0, 1]); // z^2 - 1
        let b = P::from_i64s(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, P::from_i64s(&[-1, 1]));
        assert!(r.is_zero());
        let g = a.gcd(&P::from_i64s(&[-1, 1]).pow(2));
        assert_eq!(g, P::from_i64s(&[-1, 1]));
    }

    #[test]
    fn taylor_shift_matches_derivatives() {
        let p = P::from_i64s(&[1, -3, 0, 2]);
        let s = rat(3, 2);
        let t = p.taylor(&s, 4);
        assert_eq!(t[0], p.eval(&s));
        assert_eq!(t[1], p.derivative().eval(&s));
        assert_eq!(t[2], p.nth_derivative(2).eval(&s) / rat(2, 1));
        assert_eq!(p.order_at(&rat(1, 1)), 1);
        assert_eq!(P::from_i64s(&[-1, 1]).pow(3).order_at(&rat(1, 1)), 3);
    }

    #[test]
    fn interpolation_examples() {
        let c = |v: &[i64]| v.iter().map(|&x| rat(x, 1)).collect::<Vec<_>>();
        assert_eq!(vandermonde_solve(&c(&[0]), &c(&[5])).unwrap(), P::from_i64s(&[5]));
        assert_eq!(vandermonde_solve(&c(&[0, 1]), &c(&[0, 1])).unwrap(), P::from_i64s(&[0, 1]));
        let p = vandermonde_solve(&c(&[0, 1, 2]), &c(&[1, 2, 5])).unwrap();
        assert_eq!(p, P::from_i64s(&[1, 0, 1]));
        assert_eq!(
            vandermonde_solve(&c(&[1, 1]), &c(&[0, 1])),
            Err(Error::CoincidentNodes(0, 1))
        );
    }

    #[test]
    fn compose_and_integral() {
        let p = P::from_i64s(&[0, 1, 1]);
        let q = P::from_i64s(&[1, 1]);
        assert_eq!(p.compose(&q), P::from_i64s(&[2, 3, 1]));
        assert_eq!(p.derivative().integral(), p);
    }
}
