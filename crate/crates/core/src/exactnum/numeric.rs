//! Floating point linear algebra on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactnum::matrix::Matrix;
use crate::exactnum::scalar::Scalar;

/// Relative gap below which two eigenvalues count as coincident.
pub const DEFAULT_GAP_TOL: f64 = 1e-6;

pub fn to_dmatrix<F: Scalar>(m: &Matrix<F>) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_c64())
}

pub fn from_dmatrix(m: &DMatrix<Complex64>) -> Matrix<Complex64> {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn to_approx<F: Scalar>(m: &Matrix<F>) -> Matrix<Complex64> {
    m.map(|a| a.to_c64())
}

/// Singular values in decreasing order.
pub fn singular_values<F: Scalar>(m: &Matrix<F>) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = to_dmatrix(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values exceeding `tol` times the largest one.
pub fn rank_numeric<F: Scalar>(m: &Matrix<F>, tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&top) = s.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > tol * top).count()
}

/// Ratio of extreme singular values (infinite when singular).
pub fn condition_number<F: Scalar>(m: &Matrix<F>) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&a), Some(&b)) if b > 0.0 => a / b,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<Complex64>,
    /// Unit eigenvectors as columns, in the order of `values`.
    pub vectors: Matrix<Complex64>,
    /// `|M v - lambda v|` for each returned pair.
    pub residuals: Vec<f64>,
    pub min_gap: f64,
    /// All pairwise gaps exceed the threshold.
    pub distinct: bool,
}

impl Eigen {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Eigen-decomposition through the complex Schur form. Distinctness uses
/// `gap > gap_tol * max(diameter, |M|_F)`.
pub fn eig_approx<F: Scalar>(m: &Matrix<F>, gap_tol: f64) -> Result<Eigen> {
    if !m.is_square() {
        return Err(Error::InvalidInput("eigenvalues of a non-square matrix".into()));
    }
    let n = m.rows();
    let a = to_dmatrix(m);
    if a.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::EigenFailure("non-finite matrix entry".into()));
    }
    if n == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            vectors: Matrix::zeros(0, 0),
            residuals: Vec::new(),
            min_gap: f64::INFINITY,
            distinct: true,
        });
    }
    let norm = a.norm();
    let schur = a
        .clone()
        .try_schur(f64::EPSILON * 4.0, 10_000)
        .ok_or_else(|| Error::EigenFailure("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let floor = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
    let mut vecs = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let lambda = values[k];
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[k] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for l in (j + 1)..=k {
                s += t[(j, l)] * v[l];
            }
            let mut d = t[(j, j)] - lambda;
            if d.norm() < floor {
                d = Complex64::new(floor, 0.0);
            }
            v[j] = -s / d;
        }
        let tv = nalgebra::DVector::from_vec(v);
        let mut x = &q * tv;
        let nx = x.norm();
        if !nx.is_finite() || nx == 0.0 {
            return Err(Error::EigenFailure(format!("eigenvector {k} is degenerate")));
        }
        x /= Complex64::new(nx, 0.0);
        vecs.set_column(k, &x);
    }
    let residuals: Vec<f64> = (0..n)
        .map(|k| {
            let v = vecs.column(k);
            (&a * v - v * values[k]).norm()
        })
        .collect();
    if residuals.iter().any(|r| !r.is_finite()) {
        return Err(Error::EigenFailure("non-finite residual".into()));
    }
    let mut min_gap = f64::INFINITY;
    let mut diameter: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let g = (values[i] - values[j]).norm();
            min_gap = min_gap.min(g);
            diameter = diameter.max(g);
        }
    }
    let scale = diameter.max(norm);
    let distinct = n < 2 || min_gap > gap_tol * scale;
    Ok(Eigen {
        values,
        vectors: from_dmatrix(&vecs),
        residuals,
        min_gap,
        distinct,
    })
}

/// Inverse of an approximate matrix, rejecting numerically singular input.
pub fn inverse_approx(m: &Matrix<Complex64>) -> Result<Matrix<Complex64>> {
    let d = to_dmatrix(m);
    d.try_inverse()
        .map(|i| from_dmatrix(&i))
        .ok_or_else(|| Error::Conditioning("matrix is numerically singular".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;
    use num_rational::BigRational;

    type M = Matrix<BigRational>;

    fn sorted_re(e: &Eigen) -> Vec<f64> {
        let mut v: Vec<f64> = e.values.iter().map(|c| c.re).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_numeric(&M::from_i64s(&[&[-1]]), 1e-8), 1);
        assert_eq!(rank_numeric(&M::zeros(2, 2), 1e-8), 0);
        assert_eq!(rank_numeric(&M::from_fn(3, 3, |_, _| rat(-1, 1)), 1e-8), 1);
        assert_eq!(rank_numeric(&M::zeros(0, 0), 1e-8), 0);
    }

    #[test]
    fn eigen_examples() {
        let e = eig_approx(&M::diag(&[rat(1, 1), rat(2, 1)]), DEFAULT_GAP_TOL).unwrap();
        assert_eq!(sorted_re(&e), vec![1.0, 2.0]);
        assert!(e.distinct);

        let e = eig_approx(&M::from_i64s(&[&[0, 1], &[0, 0]]), DEFAULT_GAP_TOL).unwrap();
        assert!(e.values.iter().all(|v| v.norm() < 1e-12));
        assert!(!e.distinct);

        let m = M::from_rows(vec![vec![rat(3, 2), rat(-1, 4)], vec![rat(-1, 1), rat(3, 2)]]).unwrap();
        let e = eig_approx(&m, DEFAULT_GAP_TOL).unwrap();
        let v = sorted_re(&e);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 2.0).abs() < 1e-12);
        assert!(e.max_residual() <= 1e-8 * m.frobenius_norm());
    }

    #[test]
    fn complex_spectrum() {
        // rotation generator: eigenvalues +-i
        let e = eig_approx(&M::from_i64s(&[&[0, -1], &[1, 0]]), DEFAULT_GAP_TOL).unwrap();
        let mut im: Vec<f64> = e.values.iter().map(|c| c.im).collect();
        im.sort_by(f64::total_cmp);
        assert!((im[0] + 1.0).abs() < 1e-12 && (im[1] - 1.0).abs() < 1e-12);
        assert!(e.max_residual() < 1e-12);
    }
}
