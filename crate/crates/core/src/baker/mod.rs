//! Baker functions `psi = e^{xz} psi~(x, z)` of Calogero-Moser points, with
//! `psi~(x, z) = det(I - (xI - X)^{-1} (zI - Y)^{-1})`.

pub mod bipoly;

use crate::cmspace::{cm_transpose_swap, phi_point, CMPoint};
use crate::error::{Error, Result};
use crate::exactnum::matrix::Matrix;
use crate::exactnum::poly::Poly;
use crate::exactnum::ratfunc::RatFunc;
use crate::exactnum::scalar::Field;
use crate::Check;

pub use bipoly::{cofactor_det, BiPoly};

/// `psi~ = num(x, z) / (den_x(x) den_z(z))`, not necessarily reduced.
#[derive(Clone, Debug)]
pub struct BakerFunction<F> {
    pub num: BiPoly<F>,
    pub den_x: Poly<F>,
    pub den_z: Poly<F>,
}

impl<F: Field> BakerFunction<F> {
    pub fn one() -> Self {
        BakerFunction {
            num: BiPoly::one(),
            den_x: Poly::one(),
            den_z: Poly::one(),
        }
    }

    pub fn eval(&self, x: &F, z: &F) -> Option<F> {
        let d = self.den_x.eval(x) * self.den_z.eval(z);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x, z) / d)
        }
    }

    /// Equality as rational functions, by cross-multiplication.
    pub fn same_function(&self, other: &Self) -> bool {
        let lhs = &self.num * &BiPoly::from_x(&other.den_x);
        let lhs = &lhs * &BiPoly::from_z(&other.den_z);
        let rhs = &other.num * &BiPoly::from_x(&self.den_x);
        let rhs = &rhs * &BiPoly::from_z(&self.den_z);
        lhs == rhs
    }

    /// `(x, z) -> psi~(z, x)`.
    pub fn swap_vars(&self) -> Self {
        BakerFunction {
            num: self.num.swap(),
            den_x: self.den_z.clone(),
            den_z: self.den_x.clone(),
        }
    }

    /// `(x, z) -> psi~(x - s, z)`.
    pub fn translate_x(&self, s: &F) -> Self {
        let m = -s.clone();
        BakerFunction {
            num: self.num.shift_x(&m),
            den_x: self.den_x.shift(&m),
            den_z: self.den_z.clone(),
        }
    }

    /// Full denominator as a bivariate polynomial.
    pub fn denominator(&self) -> BiPoly<F> {
        &BiPoly::from_x(&self.den_x) * &BiPoly::from_z(&self.den_z)
    }

    /// `psi~ -> 1` as `z -> infinity` and as `x -> infinity`: the top
    /// coefficients of the numerator reproduce the denominators.
    pub fn normalized_at_infinity(&self) -> bool {
        let dz = self.den_z.deg();
        let dx = self.den_x.deg();
        if self.num.deg_z() > dz || self.num.deg_x() > dx {
            return false;
        }
        let top_z = self.num.z_coeff(dz.max(0) as usize).scale(&(F::one() / self.den_z.lead()));
        let top_x = self.num.x_coeff(dx.max(0) as usize).scale(&(F::one() / self.den_x.lead()));
        top_z == self.den_x && top_x == self.den_z
    }

    /// Rank of the coefficient matrix of the numerator: the least number of
    /// products `f(x) g(z)` summing to it.
    pub fn separation_rank(&self) -> usize {
        self.num.coeff_matrix().rank()
    }
}

/// Entry matrix of `(xI - A)(zI - Y) - I` at a point.
fn pencil<F: Field>(a: &Matrix<F>, y: &Matrix<F>, x: &F, z: &F) -> Matrix<F> {
    let n = a.rows();
    let xa = Matrix::identity(n).scale(x).sub(a);
    let zy = Matrix::identity(n).scale(z).sub(y);
    xa.mul(&zy).sub(&Matrix::identity(n))
}

/// `det((xI - A)(zI - Y) - I)` by exact evaluation on an `(n+1) x (n+1)`
/// integer grid and bivariate interpolation.
pub fn baker_numerator<F: Field>(a: &Matrix<F>, y: &Matrix<F>) -> Result<BiPoly<F>> {
    let n = a.rows();
    let nodes: Vec<F> = (0..=n as i64).map(F::from_i64).collect();
    let values: Vec<Vec<F>> = nodes
        .iter()
        .map(|x| nodes.iter().map(|z| pencil(a, y, x, z).det()).collect())
        .collect();
    BiPoly::interpolate(&nodes, &nodes, &values)
}

/// The same determinant by cofactor expansion over bivariate polynomials.
pub fn baker_numerator_cofactor<F: Field>(a: &Matrix<F>, y: &Matrix<F>) -> BiPoly<F> {
    let n = a.rows();
    let entry = |m: &Matrix<F>, var: &BiPoly<F>, i: usize, j: usize| {
        let c = BiPoly::constant(-m[(i, j)].clone());
        if i == j {
            var + &c
        } else {
            c
        }
    };
    let xa: Vec<Vec<BiPoly<F>>> = (0..n)
        .map(|i| (0..n).map(|j| entry(a, &BiPoly::x(), i, j)).collect())
        .collect();
    let zy: Vec<Vec<BiPoly<F>>> = (0..n)
        .map(|i| (0..n).map(|j| entry(y, &BiPoly::z(), i, j)).collect())
        .collect();
    let m: Vec<Vec<BiPoly<F>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = (0..n).fold(BiPoly::zero(), |acc, k| &acc + &(&xa[i][k] * &zy[k][j]));
                    if i == j {
                        s = &s - &BiPoly::one();
                    }
                    s
                })
                .collect()
        })
        .collect();
    cofactor_det(&m)
}

pub fn baker_reduced<F: Field>(pt: &CMPoint<F>) -> Result<BakerFunction<F>> {
    Ok(BakerFunction {
        num: baker_numerator(pt.x(), pt.y())?,
        den_x: pt.x().charpoly(),
        den_z: pt.y().charpoly(),
    })
}

/// `det(I - (xI + p'(Y) - X)^{-1}(zI - Y)^{-1})`: the Baker function at
/// `gamma = e^{xz + p(z)}`.
pub fn baker_reduced_general<F: Field>(pt: &CMPoint<F>, p: &Poly<F>) -> Result<BakerFunction<F>> {
    let a = pt.x().sub(&pt.y().eval_poly(&p.derivative()));
    Ok(BakerFunction {
        num: baker_numerator(&a, pt.y())?,
        den_x: a.charpoly(),
        den_z: pt.y().charpoly(),
    })
}

/// `det(I - (xI - X)^{-1}(zI - Y)^{-1})` evaluated directly.
pub fn baker_eval_direct<F: Field>(pt: &CMPoint<F>, x: &F, z: &F) -> Option<F> {
    let n = pt.n();
    let xa = Matrix::identity(n).scale(x).sub(pt.x()).inverse()?;
    let zy = Matrix::identity(n).scale(z).sub(pt.y()).inverse()?;
    Some(Matrix::identity(n).sub(&xa.mul(&zy)).det())
}

/// `psi~` of `(Y^t, X^t)` at `(x, z)` against `psi~` of `(X, Y)` at `(z, x)`.
pub fn baker_bispectral_check<F: Field + std::fmt::Display>(pt: &CMPoint<F>) -> Result<Check> {
    let lhs = baker_reduced(&cm_transpose_swap(pt))?;
    let rhs = baker_reduced(pt)?.swap_vars();
    let passed = lhs.same_function(&rhs);
    Ok(Check::new(
        passed,
        if passed {
            format!("identity holds, numerator degree ({}, {})", lhs.num.deg_x(), lhs.num.deg_z())
        } else {
            format!("swap numerator {} differs from transposed {}", lhs.num, rhs.num)
        },
    ))
}

/// `psi~` of `(X + sI, Y)` against `psi~(x - s, z)`.
pub fn baker_flow_check<F: Field + std::fmt::Display>(pt: &CMPoint<F>, s: &F) -> Result<Check> {
    let q = Poly::new(vec![F::zero(), s.clone()]);
    let moved = phi_point(&q, pt);
    let lhs = baker_reduced(&moved)?;
    let rhs = baker_reduced(pt)?.translate_x(s);
    let passed = lhs.same_function(&rhs);
    Ok(Check::new(
        passed,
        if passed {
            "translation law holds".to_string()
        } else {
            format!("translated numerator {} differs from {}", rhs.num, lhs.num)
        },
    ))
}

/// Polynomial flow: for `q = s z + q_hi`, the Baker function of
/// `(X + q'(Y), Y)` agrees with the general Baker function of `(X, Y)` at
/// `e^{xz - q(z)}` and with the translate by `s` of the one at `e^{xz - q_hi(z)}`.
pub fn baker_poly_flow_check<F: Field + std::fmt::Display>(pt: &CMPoint<F>, q: &Poly<F>) -> Result<Check> {
    let moved = phi_point(q, pt);
    let direct = baker_reduced(&moved)?;
    let general = baker_reduced_general(pt, &-q)?;
    if !direct.same_function(&general) {
        return Ok(Check::new(false, format!("flow by {q} disagrees with the general Baker function")));
    }
    let s = q.coeff(1);
    let mut hi = q.coeffs().to_vec();
    if hi.len() > 1 {
        hi[1] = F::zero();
    }
    let q_hi = Poly::new(hi);
    let partial = baker_reduced_general(pt, &-&q_hi)?.translate_x(&s);
    if !direct.same_function(&partial) {
        return Ok(Check::new(false, format!("linear part of {q} does not act by translation")));
    }
    let staged = baker_reduced(&phi_point(&Poly::new(vec![F::zero(), s.clone()]), &phi_point(&q_hi, pt)))?;
    let passed = staged.same_function(&direct);
    Ok(Check::new(
        passed,
        if passed {
            "polynomial flow consistent".to_string()
        } else {
            "staged flows disagree".to_string()
        },
    ))
}

/// `f_i(z) = (z + d/dx)^i psi~(x, z)` at `x = x0`, for `i < count`.
pub fn baker_subspace<F: Field>(pt: &CMPoint<F>, x0: &F, count: usize) -> Result<Vec<RatFunc<F>>> {
    let b = baker_reduced(pt)?;
    let out: Vec<RatFunc<F>> = subspace_numerators(&b, x0, count)?
        .into_iter()
        .map(|h| RatFunc::new(h, b.den_z.clone()))
        .collect();
    for (k, f) in out.iter().enumerate() {
        let lead_ok = f.degree() == k as i64 && {
            let zk = RatFunc::from_poly(Poly::monomial(F::one(), k));
            (f.clone() - zk).degree() < k as i64
        };
        if !lead_ok {
            return Err(Error::ExcludedPoint(format!(
                "f_{k} does not have the form z^{k} + lower terms at this x0"
            )));
        }
    }
    Ok(out)
}

/// `den_z(z) (z + d/dx)^i psi~(x, z)` at `x = x0` for `i < count`, as
/// polynomials in `z`.
fn subspace_numerators<F: Field>(b: &BakerFunction<F>, x0: &F, count: usize) -> Result<Vec<Poly<F>>> {
    let chi = &b.den_x;
    let c0 = chi.eval(x0);
    if c0.is_zero() {
        return Err(Error::ExcludedPoint(
            "x0 is a pole of the Baker function in x".to_string(),
        ));
    }
    let chi_b = BiPoly::from_x(chi);
    let dchi_b = BiPoly::from_x(&chi.derivative());
    // f_k = h_k / (chi(x)^{k+1} den_z(z))
    let mut h = b.num.clone();
    let mut out = Vec::with_capacity(count);
    let mut cpow = c0.clone();
    for k in 0..count {
        out.push(h.eval_x(x0).scale(&(F::one() / cpow.clone())));
        if k + 1 < count {
            let zh = &(&BiPoly::z() * &h) * &chi_b;
            let hx = &h.deriv_x() * &chi_b;
            let hc = (&h * &dchi_b).scale(&F::from_i64(k as i64 + 1));
            h = &(&zh + &hx) - &hc;
            cpow = cpow * c0.clone();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmspace::{cm_base_point, random_point};
    use crate::exactnum::scalar::rat;
    use crate::sample;
    use crate::Rational;

    type M = Matrix<Rational>;
    type B = BiPoly<Rational>;

    fn point(a: i64, b: i64) -> CMPoint<Rational> {
        CMPoint::new_unchecked(M::from_i64s(&[&[a]]), M::from_i64s(&[&[b]]))
    }

    #[test]
    fn small_examples() {
        let empty = baker_reduced(&cm_base_point::<Rational>(0)).unwrap();
        assert!(empty.same_function(&BakerFunction::one()));
        // 1 - 1/((x-a)(z-b)) = ((x-a)(z-b) - 1) / ((x-a)(z-b))
        let f = baker_reduced(&point(2, -3)).unwrap();
        let xa = &B::x() - &B::constant(rat(2, 1));
        let zb = &B::z() + &B::constant(rat(3, 1));
        assert_eq!(f.num, &(&xa * &zb) - &B::one());
        assert_eq!(f.den_x, Poly::from_i64s(&[-2, 1]));
        assert_eq!(f.den_z, Poly::from_i64s(&[3, 1]));
        let g = baker_reduced(&point(0, 0)).unwrap();
        assert_eq!(g.num, &(&B::x() * &B::z()) - &B::one());
    }

    #[test]
    fn interpolation_matches_cofactor_and_direct_evaluation() {
        let mut rng = sample::rng(4);
        for n in 1..=3 {
            let (p, _) = random_point(&mut rng, n, 2, 2);
            let b = baker_reduced(&p).unwrap();
            assert_eq!(b.num, baker_numerator_cofactor(p.x(), p.y()));
            let (x, z) = (rat(7, 3), rat(-5, 2));
            if let Some(v) = baker_eval_direct(&p, &x, &z) {
                assert_eq!(b.eval(&x, &z), Some(v));
            }
            assert!(b.normalized_at_infinity());
            assert!(b.separation_rank() <= n + 1);
        }
    }

    #[test]
    fn bispectral_and_flow() {
        let mut rng = sample::rng(9);
        for n in 0..=3 {
            let (p, _) = random_point(&mut rng, n, 2, 2);
            assert!(baker_bispectral_check(&p).unwrap().passed);
            let s = sample::small_rational(&mut rng);
            assert!(baker_flow_check(&p, &s).unwrap().passed);
            assert!(baker_flow_check(&p, &rat(0, 1)).unwrap().passed);
            let q = sample::poly_no_constant(&mut rng, 3);
            assert!(baker_poly_flow_check(&p, &q).unwrap().passed);
        }
        let f = baker_reduced(&point(0, 0)).unwrap().translate_x(&rat(1, 1));
        let g = baker_reduced(&point(1, 0)).unwrap();
        assert!(f.same_function(&g));
    }

    #[test]
    fn wrong_sign_flow_is_rejected() {
        let mut rng = sample::rng(2);
        let (p, _) = random_point(&mut rng, 2, 2, 2);
        let moved = phi_point(&Poly::new(vec![rat(0, 1), rat(1, 1)]), &p);
        let wrong = baker_reduced(&p).unwrap().translate_x(&rat(-1, 1));
        assert!(!baker_reduced(&moved).unwrap().same_function(&wrong));
    }

    #[test]
    fn subspace_for_simplest_point() {
        let f = baker_subspace(&point(0, 0), &rat(1, 1), 3).unwrap();
        let z = |k: i64| RatFunc::<Rational>::power(k);
        assert_eq!(f[0], z(0) - z(-1));
        assert_eq!(f[1], z(1) - z(0) + z(-1));
        assert!(matches!(
            baker_subspace(&point(0, 0), &rat(0, 1), 2),
            Err(Error::ExcludedPoint(_))
        ));
        let empty = baker_subspace(&cm_base_point::<Rational>(0), &rat(1, 1), 3).unwrap();
        assert_eq!(empty, vec![z(0), z(1), z(2)]);
    }
}
