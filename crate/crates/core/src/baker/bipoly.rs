use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::exactnum::matrix::Matrix;
use crate::exactnum::poly::{vandermonde_solve, Poly};
use crate::exactnum::scalar::Field;

/// Polynomial in `(x, z)`, stored as polynomials in `z` indexed by the power of `x`.
#[derive(Clone, PartialEq, Debug)]
pub struct BiPoly<F> {
    rows: Vec<Poly<F>>,
}

impl<F: Field> BiPoly<F> {
    pub fn new(mut rows: Vec<Poly<F>>) -> Self {
        while rows.last().is_some_and(Poly::is_zero) {
            rows.pop();
        }
        BiPoly { rows }
    }

    /// From a grid `c[i][j]` of coefficients of `x^i z^j`.
    pub fn from_grid(grid: Vec<Vec<F>>) -> Self {
        Self::new(grid.into_iter().map(Poly::new).collect())
    }

    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![Poly::constant(c)])
    }

    pub fn x() -> Self {
        Self::new(vec![Poly::zero(), Poly::one()])
    }

    pub fn z() -> Self {
        Self::new(vec![Poly::identity()])
    }

    /// `f(x)`.
    pub fn from_x(f: &Poly<F>) -> Self {
        Self::new(f.coeffs().iter().map(|c| Poly::constant(c.clone())).collect())
    }

    /// `g(z)`.
    pub fn from_z(g: &Poly<F>) -> Self {
        Self::new(vec![g.clone()])
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn coeff(&self, i: usize, j: usize) -> F {
        self.rows.get(i).map_or_else(F::zero, |r| r.coeff(j))
    }

    /// Degree in `x` (`-1` for zero).
    pub fn deg_x(&self) -> i64 {
        self.rows.len() as i64 - 1
    }

    /// Degree in `z` (`-1` for zero).
    pub fn deg_z(&self) -> i64 {
        self.rows.iter().map(Poly::deg).max().unwrap_or(-1)
    }

    /// Coefficient of `x^i` as a polynomial in `z`.
    pub fn x_coeff(&self, i: usize) -> Poly<F> {
        self.rows.get(i).cloned().unwrap_or_else(Poly::zero)
    }

    /// Coefficient of `z^j` as a polynomial in `x`.
    pub fn z_coeff(&self, j: usize) -> Poly<F> {
        Poly::new(self.rows.iter().map(|r| r.coeff(j)).collect())
    }

    /// Coefficient grid with rows indexed by the `x` power.
    pub fn grid(&self) -> Vec<Vec<F>> {
        let w = (self.deg_z() + 1).max(0) as usize;
        self.rows
            .iter()
            .map(|r| (0..w).map(|j| r.coeff(j)).collect())
            .collect()
    }

    pub fn coeff_matrix(&self) -> Matrix<F> {
        let dx = (self.deg_x() + 1).max(0) as usize;
        let dz = (self.deg_z() + 1).max(0) as usize;
        Matrix::from_fn(dx, dz, |i, j| self.coeff(i, j))
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.rows.iter().map(|r| r.scale(c)).collect())
    }

    pub fn eval(&self, x: &F, z: &F) -> F {
        self.eval_x(x).eval(z)
    }

    /// Specialize `x`, leaving a polynomial in `z`.
    pub fn eval_x(&self, x: &F) -> Poly<F> {
        self.rows
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, r| &acc.scale(x) + r)
    }

    /// Specialize `z`, leaving a polynomial in `x`.
    pub fn eval_z(&self, z: &F) -> Poly<F> {
        Poly::new(self.rows.iter().map(|r| r.eval(z)).collect())
    }

    /// `f(z, x)`.
    pub fn swap(&self) -> Self {
        let dz = (self.deg_z() + 1).max(0) as usize;
        Self::new((0..dz).map(|j| self.z_coeff(j)).collect())
    }

    pub fn deriv_x(&self) -> Self {
        Self::new(
            self.rows
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, r)| r.scale(&F::from_i64(i as i64)))
                .collect(),
        )
    }

    /// `f(x + s, z)`.
    pub fn shift_x(&self, s: &F) -> Self {
        let dz = (self.deg_z() + 1).max(0) as usize;
        let cols: Vec<Poly<F>> = (0..dz).map(|j| self.z_coeff(j).shift(s)).collect();
        let dx = cols.iter().map(Poly::deg).max().unwrap_or(-1);
        if dx < 0 {
            return Self::zero();
        }
        Self::new(
            (0..=dx as usize)
                .map(|i| Poly::new(cols.iter().map(|c| c.coeff(i)).collect()))
                .collect(),
        )
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Interpolate from values `v[i][j] = f(xs[i], zs[j])`, with degree below
    /// the number of nodes in each variable.
    pub fn interpolate(xs: &[F], zs: &[F], values: &[Vec<F>]) -> Result<Self> {
        // interpolate in z for every x node, then in x coefficient-wise
        let in_z: Vec<Poly<F>> = values
            .iter()
            .map(|row| vandermonde_solve(zs, row))
            .collect::<Result<_>>()?;
        let mut rows = vec![Poly::zero(); xs.len()];
        for j in 0..zs.len() {
            let col: Vec<F> = in_z.iter().map(|p| p.coeff(j)).collect();
            let px = vandermonde_solve(xs, &col)?;
            for (i, r) in rows.iter_mut().enumerate() {
                let mut c = r.coeffs().to_vec();
                c.resize(zs.len(), F::zero());
                c[j] = px.coeff(i);
                *r = Poly::new(c);
            }
        }
        Ok(Self::new(rows))
    }
}

impl<F: Field> Add for &BiPoly<F> {
    type Output = BiPoly<F>;
    fn add(self, rhs: Self) -> BiPoly<F> {
        let n = self.rows.len().max(rhs.rows.len());
        BiPoly::new((0..n).map(|i| &self.x_coeff(i) + &rhs.x_coeff(i)).collect())
    }
}

impl<F: Field> Sub for &BiPoly<F> {
    type Output = BiPoly<F>;
    fn sub(self, rhs: Self) -> BiPoly<F> {
        let n = self.rows.len().max(rhs.rows.len());
        BiPoly::new((0..n).map(|i| &self.x_coeff(i) - &rhs.x_coeff(i)).collect())
    }
}

impl<F: Field> Mul for &BiPoly<F> {
    type Output = BiPoly<F>;
    fn mul(self, rhs: Self) -> BiPoly<F> {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let mut rows = vec![Poly::zero(); self.rows.len() + rhs.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.rows.iter().enumerate() {
                rows[i + j] = &rows[i + j] + &(a * b);
            }
        }
        BiPoly::new(rows)
    }
}

impl<F: Field> Neg for &BiPoly<F> {
    type Output = BiPoly<F>;
    fn neg(self) -> BiPoly<F> {
        BiPoly::new(self.rows.iter().map(|r| -r).collect())
    }
}

impl<F: Field + fmt::Display> fmt::Display for BiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, r) in self.rows.iter().enumerate() {
            for (j, c) in r.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({c})")?;
                if i > 0 {
                    write!(f, "*x^{i}")?;
                }
                if j > 0 {
                    write!(f, "*z^{j}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Determinant of a matrix of bivariate polynomials by cofactor expansion.
pub fn cofactor_det<F: Field>(m: &[Vec<BiPoly<F>>]) -> BiPoly<F> {
    let n = m.len();
    match n {
        0 => BiPoly::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = BiPoly::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BiPoly<F>>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &cofactor_det(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;
    use num_rational::BigRational;

    type B = BiPoly<BigRational>;

    #[test]
    fn arithmetic_and_swap() {
        let f = &(&B::x() * &B::z()) - &B::one();
        assert_eq!(f.coeff(1, 1), rat(1, 1));
        assert_eq!(f.coeff(0, 0), rat(-1, 1));
        assert_eq!(f.swap(), f);
        let g = &B::x() + &B::z().pow(2);
        assert_eq!(g.swap(), &B::z() + &B::x().pow(2));
        assert_eq!(g.eval(&rat(2, 1), &rat(3, 1)), rat(11, 1));
    }

    #[test]
    fn shift_and_derivative() {
        let f = &(&B::x().pow(2) * &B::z()) + &B::x();
        let s = f.shift_x(&rat(1, 1));
        // (x+1)^2 z + x + 1
        assert_eq!(s.eval(&rat(2, 1), &rat(5, 1)), rat(9 * 5 + 3, 1));
        assert_eq!(f.deriv_x(), &(&B::x().scale(&rat(2, 1)) * &B::z()) + &B::one());
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = &(&(&B::x().pow(2) * &B::z()) - &B::z().pow(2)) + &B::constant(rat(3, 1));
        let xs: Vec<_> = (0..3).map(|i| rat(i, 1)).collect();
        let zs: Vec<_> = (0..3).map(|i| rat(i, 1)).collect();
        let vals: Vec<Vec<_>> = xs
            .iter()
            .map(|x| zs.iter().map(|z| f.eval(x, z)).collect())
            .collect();
        assert_eq!(B::interpolate(&xs, &zs, &vals).unwrap(), f);
    }
}
