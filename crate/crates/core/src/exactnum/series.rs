use crate::error::{Error, Result};
use crate::exactnum::poly::Poly;
use crate::exactnum::scalar::Field;

/// Truncated power series `sum_{m < order} c_m z^m`. Coefficients at or beyond
/// the order are unknown and never reported.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Series<F> {
    /// Series of the given order; missing coefficients are zero, extra ones dropped.
    pub fn new(mut coeffs: Vec<F>, order: usize) -> Self {
        coeffs.resize(order, F::zero());
        Series { coeffs }
    }

    pub fn from_poly(p: &Poly<F>, order: usize) -> Self {
        Self::new(p.coeffs().iter().take(order).cloned().collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> Option<&F> {
        self.coeffs.get(m)
    }

    pub fn to_poly(&self) -> Poly<F> {
        Poly::new(self.coeffs.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut v = vec![F::zero(); order];
        for (i, a) in self.coeffs.iter().enumerate().take(order) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order - i) {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Series { coeffs: v }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let order = self.order();
        if order == 0 {
            return Ok(self.clone());
        }
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::Undefined("series with zero constant term is not invertible".into()));
        }
        let mut inv = vec![F::zero(); order];
        inv[0] = F::one() / c0.clone();
        for m in 1..order {
            let mut acc = F::zero();
            for k in 1..=m {
                acc = acc + self.coeffs[k].clone() * inv[m - k].clone();
            }
            inv[m] = -acc / c0.clone();
        }
        Ok(Series { coeffs: inv })
    }
}

/// `exp(p)` to the given order. The constant term of `p` must vanish so that
/// the coefficients stay in the field of `p`.
pub fn series_exp<F: Field>(p: &Poly<F>, order: usize) -> Result<Series<F>> {
    if !p.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let mut e = vec![F::zero(); order];
    if order == 0 {
        return Ok(Series { coeffs: e });
    }
    e[0] = F::one();
    // m E_m = sum_{j=1}^{m} j p_j E_{m-j}
    for m in 1..order {
        let mut acc = F::zero();
        for j in 1..=m.min(p.deg().max(0) as usize) {
            let pj = p.coeff(j);
            if !pj.is_zero() {
                acc = acc + F::from_i64(j as i64) * pj * e[m - j].clone();
            }
        }
        e[m] = acc / F::from_i64(m as i64);
    }
    Ok(Series { coeffs: e })
}

/// Logarithm of a series with constant term 1, as a polynomial of degree
/// below the series order.
pub fn series_log<F: Field>(s: &Series<F>) -> Result<Poly<F>> {
    let order = s.order();
    if order == 0 {
        return Ok(Poly::zero());
    }
    if !s.coeffs[0].is_one() {
        return Err(Error::ConstantTermNotOne);
    }
    // m s_m = sum_{j=1}^{m} j L_j s_{m-j}
    let mut l = vec![F::zero(); order];
    for m in 1..order {
        let mut acc = F::from_i64(m as i64) * s.coeffs[m].clone();
        for j in 1..m {
            acc = acc - F::from_i64(j as i64) * l[j].clone() * s.coeffs[m - j].clone();
        }
        l[m] = acc / F::from_i64(m as i64);
    }
    Ok(Poly::new(l))
}
