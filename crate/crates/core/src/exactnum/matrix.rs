use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::exactnum::poly::Poly;
use crate::exactnum::scalar::{Field, Scalar};

/// Dense row-major matrix over a field.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64s(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| F::from_i64(v)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn diag(d: &[F]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { F::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|a| a.clone() * s.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * other.data[k * other.cols + j].clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly<F>) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = Self::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Self::identity(n).scale(c));
        }
        acc
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    fn magnitude_scale(&self) -> f64 {
        self.data.iter().map(|a| a.pivot_weight()).fold(0.0, f64::max)
    }

    /// Reduced row-echelon form and pivot columns. Exact over exact fields;
    /// approximate fields use partial pivoting with a relative threshold.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let scale = self.magnitude_scale();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let mut best = None;
            let mut best_w = 0.0;
            for r in row..m.rows {
                let e = &m[(r, col)];
                if e.is_negligible(scale) {
                    continue;
                }
                let w = e.pivot_weight();
                if best.is_none() || (!F::EXACT && w > best_w) {
                    best = Some(r);
                    best_w = w;
                    if F::EXACT {
                        break;
                    }
                }
            }
            let Some(p) = best else { continue };
            m.swap_rows(row, p);
            let inv = F::one() / m[(row, col)].clone();
            for j in col..m.cols {
                let v = m[(row, j)].clone() * inv.clone();
                m[(row, j)] = v;
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m[(r, col)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m[(r, j)].clone() - f.clone() * m[(row, j)].clone();
                    m[(r, j)] = v;
                }
                if !F::EXACT {
                    m[(r, col)] = F::zero();
                }
            }
            pivots.push(col);
            row += 1;
        }
        if !F::EXACT {
            for v in m.data.iter_mut() {
                if v.is_negligible(scale) {
                    *v = F::zero();
                }
            }
        }
        (m, pivots)
    }

    /// Nonzero rows of the reduced echelon form.
    pub fn row_basis(&self) -> Self {
        let (r, p) = self.rref();
        Self::from_fn(p.len(), self.cols, |i, j| r[(i, j)].clone())
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{v : M v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> F {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let scale = self.magnitude_scale();
        let mut det = F::one();
        for col in 0..n {
            let mut best = None;
            let mut best_w = 0.0;
            for r in col..n {
                let e = &m[(r, col)];
                if e.is_zero() || (!F::EXACT && e.is_negligible(scale * 1e-3)) {
                    continue;
                }
                let w = e.pivot_weight();
                if best.is_none() || (!F::EXACT && w > best_w) {
                    best = Some(r);
                    best_w = w;
                    if F::EXACT {
                        break;
                    }
                }
            }
            let Some(p) = best else { return F::zero() };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m[(col, col)].clone();
            det = det * piv.clone();
            for r in (col + 1)..n {
                let f = m[(r, col)].clone() / piv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m[(r, j)].clone() - f.clone() * m[(col, j)].clone();
                    m[(r, j)] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Characteristic polynomial `det(t I - M)` (Faddeev-LeVerrier).
    pub fn charpoly(&self) -> Poly<F> {
        assert!(self.is_square());
        let n = self.rows;
        let mut c = vec![F::zero(); n + 1];
        c[n] = F::one();
        let mut mk = Self::zeros(n, n);
        for k in 1..=n {
            mk = self.mul(&mk).add(&Self::identity(n).scale(&c[n - k + 1]));
            let t = self.mul(&mk).trace();
            c[n - k] = -t / F::from_i64(k as i64);
        }
        Poly::new(c)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<F: Scalar> Matrix<F> {
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.abs_f64().powi(2)).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.abs_f64()).fold(0.0, f64::max)
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row-echelon form with pivot list.
pub fn rref_exact<F: Field>(m: &Matrix<F>) -> (Matrix<F>, Vec<usize>) {
    m.rref()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type M = Matrix<BigRational>;

    #[test]
    fn rref_examples() {
        let (r, p) = rref_exact(&M::identity(3));
        assert_eq!(r, M::identity(3));
        assert_eq!(p, vec![0, 1, 2]);
        let (r, p) = rref_exact(&M::zeros(2, 3));
        assert!(r.is_zero());
        assert!(p.is_empty());
        let m = M::from_i64s(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.det(), rat(0, 1));
        let (r, p) = rref_exact(&m);
        assert_eq!(r, M::from_i64s(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn charpoly_and_inverse() {
        let m = M::from_rows(vec![
            vec![rat(3, 2), rat(-1, 4)],
            vec![rat(-1, 1), rat(3, 2)],
        ])
        .unwrap();
        assert_eq!(m.charpoly(), Poly::from_i64s(&[2, -3, 1]));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), M::identity(2));
        assert_eq!(m.det(), rat(2, 1));
        assert!(M::from_i64s(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = M::from_i64s(&[&[1, 2, 3, 4], &[2, 4, 6, 9]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(|x| x == &rat(0, 1)));
        }
    }

    fn small_matrix(r: usize, c: usize) -> impl Strategy<Value = M> {
        proptest::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
            M::new(r, c, v.into_iter().map(|x| rat(x, 1)).collect()).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn rref_idempotent_and_preserves_row_space(m in small_matrix(6, 8)) {
            let (r, _) = m.rref();
            prop_assert_eq!(&r.rref().0, &r);
            // every original row lies in the row space of the echelon form
            let rank = r.rank();
            for i in 0..m.rows() {
                let one = M::new(1, 8, m.row(i).to_vec()).unwrap();
                prop_assert_eq!(r.stack(&one).rank(), rank);
            }
            prop_assert_eq!(m.rank(), rank);
        }

        #[test]
        fn determinant_multiplicative(a in small_matrix(3, 3), b in small_matrix(3, 3)) {
            prop_assert_eq!(a.mul(&b).det(), a.det() * b.det());
        }
    }
}
