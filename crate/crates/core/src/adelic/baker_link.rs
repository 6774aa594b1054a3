//! Passing between Baker functions and points of the Grassmannian.

use crate::baker::{BakerFunction, BiPoly};
use crate::error::{Error, Result};
use crate::exactnum::matrix::Matrix;
use crate::exactnum::poly::Poly;
use crate::exactnum::ratfunc::RatFunc;
use crate::exactnum::scalar::{factorial, Scalar};

use super::emap::pd_from_span;
use num_traits::Zero;

use super::pd::GrPoint;

/// The point `W` containing `psi(x, .)` for every `x`, spanned by the
/// coefficients of the Laurent expansion of `psi = e^{xz} psi~` in `x` at 0.
/// The window `d` is passed to [`pd_from_span`].
pub fn gr_from_baker<F: Scalar>(b: &BakerFunction<F>, d: usize) -> Result<GrPoint<F>> {
    let n = b.den_z.deg().max(0) as usize;
    let polys = laurent_numerators(b, d + n + 2);
    let v = pd_from_span(&polys, d)?;
    let m = b.den_z.monic();
    if v.canonical_poly() != m {
        return Err(Error::Internal(format!(
            "subspace has codimension {} but the z-denominator has degree {}",
            v.codim(),
            m.deg()
        )));
    }
    Ok(GrPoint { m, v })
}

/// `den_z(z)` times the coefficients of `x^k`, `k >= -ord_0(den_x)`, of
/// `e^{xz} psi~(x, z)`, up to `k < count`.
fn laurent_numerators<F: Scalar>(b: &BakerFunction<F>, count: usize) -> Vec<Poly<F>> {
    let e = b.den_x.order_at(&F::zero());
    let u = b.den_x.exact_div(&Poly::monomial(F::one(), e)).expect("x^e divides");
    let len = count + e + 1;
    // 1/u as a power series in x
    let mut inv: Vec<F> = Vec::with_capacity(len);
    let u0 = u.coeff(0);
    for k in 0..len {
        let mut acc = if k == 0 { F::one() } else { F::zero() };
        for j in 1..=k {
            acc = acc - u.coeff(j) * inv[k - j].clone();
        }
        inv.push(acc / u0.clone());
    }
    // q_s = coefficient of x^{s - e} in num/den_x
    let q: Vec<Poly<F>> = (0..len)
        .map(|s| {
            (0..=s).fold(Poly::zero(), |acc, t| &acc + &b.num.x_coeff(t).scale(&inv[s - t]))
        })
        .collect();
    (0..len)
        .map(|s| {
            (0..=s).fold(Poly::zero(), |acc, a| {
                let za = Poly::monomial(F::one() / factorial::<F>(a), a);
                &acc + &(&za * &q[s - a])
            })
        })
        .collect()
}

/// `psi~_W = p(x, z)/m(z)` with `p` monic of degree `deg m` in `z` and
/// `e^{xz} p(x, .)` satisfying the conditions of `V`.
pub fn baker_from_gr<F: Scalar>(w: &GrPoint<F>) -> Result<BakerFunction<F>> {
    let big_n = w.m.deg().max(0) as usize;
    let x = Poly::<F>::identity();
    // jets of e^{x(z - l)} z^t at l, with coefficients in C(x)
    let exp_jet = |t: usize, l: &F, r: usize| -> Vec<RatFunc<F>> {
        let zt = Poly::monomial(F::one(), t).taylor(l, r);
        (0..r)
            .map(|s| {
                let mut acc = Poly::zero();
                for a in 0..=s {
                    let c = zt[s - a].clone() / factorial::<F>(a);
                    acc = &acc + &x.pow(a).scale(&c);
                }
                RatFunc::from_poly(acc)
            })
            .collect()
    };
    let mut rows: Vec<Vec<RatFunc<F>>> = Vec::new();
    for p in w.v.points() {
        for ann in p.annihilator() {
            let ann: Vec<RatFunc<F>> = ann.into_iter().map(RatFunc::constant).collect();
            let row: Vec<RatFunc<F>> = (0..=big_n)
                .map(|t| {
                    exp_jet(t, p.lambda(), p.r())
                        .into_iter()
                        .zip(&ann)
                        .fold(RatFunc::zero(), |acc, (j, a)| acc + j * a.clone())
                })
                .collect();
            rows.push(row);
        }
    }
    let coeffs: Vec<RatFunc<F>> = if rows.is_empty() {
        Vec::new()
    } else {
        let mat = Matrix::from_fn(rows.len(), big_n + 1, |i, j| rows[i][j].clone());
        let null = mat.nullspace();
        if null.len() != 1 || null[0][big_n].is_zero() {
            return Err(Error::Internal(format!(
                "Baker conditions have a {}-dimensional solution space",
                null.len()
            )));
        }
        let lead = null[0][big_n].clone();
        null[0][..big_n].iter().map(|c| c.clone() / lead.clone()).collect()
    };
    if coeffs.len() != big_n {
        return Err(Error::Internal("conditions do not match the denominator degree".into()));
    }
    let den_x = coeffs.iter().fold(Poly::one(), |acc, c| acc.lcm(c.den()));
    let zpow = |t: usize| BiPoly::from_z(&Poly::monomial(F::one(), t));
    let mut num = &BiPoly::from_x(&den_x) * &zpow(big_n);
    for (t, c) in coeffs.iter().enumerate() {
        let ct = c.num() * &den_x.exact_div(c.den())?;
        num = &num + &(&BiPoly::from_x(&ct) * &zpow(t));
    }
    Ok(BakerFunction {
        num,
        den_x,
        den_z: w.m.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adelic::pd::{gr_canonical, LocalCondition, PrimaryDecomposable};
    use crate::baker::baker_reduced;
    use crate::cmspace::CMPoint;
    use crate::exactnum::scalar::rat;
    use crate::Rational;

    type M = Matrix<Rational>;

    fn model() -> GrPoint<Rational> {
        gr_canonical(
            &PrimaryDecomposable::new(vec![
                LocalCondition::new(rat(0, 1), 2, vec![vec![rat(1, 1), rat(0, 1)]]).unwrap(),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn simplest_point() {
        let pt = CMPoint::new_unchecked(M::from_i64s(&[&[0]]), M::from_i64s(&[&[0]]));
        let b = baker_reduced(&pt).unwrap();
        assert_eq!(gr_from_baker(&b, 12).unwrap(), model());
        // 1 - 1/(xz)
        let back = baker_from_gr(&model()).unwrap();
        assert!(back.same_function(&b));
    }

    #[test]
    fn trivial_point() {
        let b = baker_from_gr(&GrPoint::<Rational>::trivial()).unwrap();
        assert!(b.same_function(&BakerFunction::one()));
        assert_eq!(gr_from_baker(&BakerFunction::<Rational>::one(), 6).unwrap(), GrPoint::trivial());
    }

    #[test]
    fn round_trip_through_cm_points() {
        // X upper triangular with distinct rational eigenvalues for Y
        let pts = [
            CMPoint::new_unchecked(M::from_i64s(&[&[3]]), M::from_i64s(&[&[-2]])),
            CMPoint::new_unchecked(
                M::from_i64s(&[&[0, 0], &[-1, 0]]),
                M::from_i64s(&[&[0, 1], &[0, 0]]),
            ),
        ];
        for pt in pts {
            let b = baker_reduced(&pt).unwrap();
            let w = gr_from_baker(&b, 12).unwrap();
            assert!(baker_from_gr(&w).unwrap().same_function(&b));
        }
    }
}
