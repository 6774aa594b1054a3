//! The residue pairing and the dual point `W*`, which realizes the action of
//! the formal adjoint `c` on the Grassmannian.

use crate::error::{Error, Result};
use crate::exactnum::matrix::Matrix;
use crate::exactnum::poly::Poly;
use crate::exactnum::ratfunc::RatFunc;
use crate::exactnum::roots::split_roots;
use crate::exactnum::scalar::Scalar;
use crate::weylops::endo::anti_c;

use super::opspace::{solve_ansatz_gr, IdealSlice};
use super::pd::{gr_canonical, rows_matrix, GrPoint, LocalCondition, PrimaryDecomposable};

/// `res_inf f g dz`, taken as minus the coefficient of `z^{-1}` at infinity.
pub fn residue_pair<F: Scalar>(f: &RatFunc<F>, g: &RatFunc<F>) -> F {
    -(f.clone() * g.clone()).laurent_at_infinity(-1).coeff(-1)
}

/// The orthogonal complement of `W` under the residue pairing.
///
/// With `W = m^{-1} V` and `rho` the conductor of `V`, the complement lies in
/// `(m/rho) C[z]`, and `(m/rho) h` is orthogonal to `W` iff `v h / rho` has no
/// residue for every `v` in `V`. Locally at `l` that is the vanishing of the
/// `(z-l)^{r-1}` Taylor coefficient of `v h / u_l`, where `rho = (z-l)^r u_l`.
pub fn dual<F: Scalar>(w: &GrPoint<F>) -> Result<GrPoint<F>> {
    let rho = w.v.conductor();
    let mut points = Vec::new();
    for p in w.v.points() {
        let r = p.r();
        let lam = p.lambda();
        let u = rho.exact_div(&Poly::linear(lam.clone()).pow(r))?;
        let inv = RatFunc::new(Poly::one(), u.shift(lam));
        // Taylor coefficients of 1/u at l, from the expansion of 1/u(l + t)
        let wser = taylor_at_zero(&inv, r);
        let gram = Matrix::from_fn(r, r, |a, b| {
            if a + b < r {
                wser[r - 1 - a - b].clone()
            } else {
                F::zero()
            }
        });
        let conds = if p.dim() == 0 {
            Vec::new()
        } else {
            p.basis().mul(&gram).to_rows()
        };
        let h = if conds.is_empty() {
            (0..r)
                .map(|i| (0..r).map(|j| if i == j { F::one() } else { F::zero() }).collect())
                .collect()
        } else {
            rows_matrix(&conds, r).nullspace()
        };
        points.push(LocalCondition::new(lam.clone(), r, h)?);
    }
    let h = PrimaryDecomposable::new(points)?;
    let v = h.scale_by_roots(&split_roots(&w.m)?);
    let out = gr_canonical(&v);
    if out.m != rho.monic() {
        return Err(Error::Internal(format!(
            "dual carries denominator of degree {}, expected the conductor of degree {}",
            out.m.deg(),
            rho.deg()
        )));
    }
    Ok(out)
}

/// First `r` Taylor coefficients at 0 of a function regular there.
fn taylor_at_zero<F: Scalar>(f: &RatFunc<F>, r: usize) -> Vec<F> {
    // f(t) = n(t)/d(t) with d(0) != 0; long division of power series
    let n = f.num();
    let d = f.den();
    let d0 = d.coeff(0);
    let mut out: Vec<F> = Vec::with_capacity(r);
    for k in 0..r {
        let mut acc = n.coeff(k);
        for j in 1..=k {
            acc = acc - d.coeff(j) * out[k - j].clone();
        }
        out.push(acc / d0.clone());
    }
    out
}

/// Result of comparing `R_{W*}` with `c(L_W)` inside one operator window.
#[derive(Clone, Debug)]
pub struct CActionReport<F> {
    pub passed: bool,
    pub dual: GrPoint<F>,
    pub r_dim: usize,
    pub cl_dim: usize,
    pub window_dim: usize,
}

/// Checks `D(C[z], W*) = c(D(W, C[z]))` for operators
/// `rho^{-1} sum_{i <= m_ord} a_i d^i` with `deg a_i <= d_coeff + deg rho`.
pub fn c_action_check<F: Scalar>(w: &GrPoint<F>, m_ord: usize, d_coeff: usize) -> Result<CActionReport<F>> {
    let dual = dual(w)?;
    let rho = w.v.conductor();
    let window = IdealSlice::window(m_ord, d_coeff + rho.deg().max(0) as usize, &rho);
    let left = solve_ansatz_gr(&window, &GrPoint::trivial(), &dual)?;
    let adj: Vec<_> = window.iter().map(anti_c).collect();
    let right = solve_ansatz_gr(&adj, w, &GrPoint::trivial())?;
    let n = window.len();
    let span = |v: &[Vec<F>]| {
        if v.is_empty() {
            Matrix::zeros(0, n)
        } else {
            rows_matrix(v, n).row_basis()
        }
    };
    let passed = span(&left) == span(&right);
    Ok(CActionReport {
        passed,
        dual,
        r_dim: left.len(),
        cl_dim: right.len(),
        window_dim: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::adelic::pd::gr_equal;
    use crate::exactnum::scalar::rat;
    use crate::Rational;

    type P = Poly<Rational>;
    type R = RatFunc<Rational>;
    type V = PrimaryDecomposable<Rational>;

    fn model() -> GrPoint<Rational> {
        gr_canonical(
            &V::new(vec![LocalCondition::new(rat(0, 1), 2, vec![vec![rat(1, 1), rat(0, 1)]]).unwrap()]).unwrap(),
        )
    }

    #[test]
    fn pairing_values() {
        assert_eq!(residue_pair(&R::one(), &R::power(-1)), rat(-1, 1));
        assert_eq!(residue_pair(&R::power(2), &R::power(-4)), rat(0, 1));
        let f = R::new(P::one(), P::from_i64s(&[-1, 1]));
        assert_eq!(residue_pair(&f, &R::one()), rat(-1, 1));
        // bilinear and symmetric
        let g = R::new(P::from_i64s(&[2, 0, 1]), P::from_i64s(&[1, 3, 1]));
        let h = R::new(P::from_i64s(&[0, 5]), P::from_i64s(&[-2, 0, 0, 1]));
        assert_eq!(residue_pair(&g, &h), residue_pair(&h, &g));
        let s = g.clone() + f.scale(&rat(3, 1));
        assert_eq!(
            residue_pair(&s, &h),
            residue_pair(&g, &h) + rat(3, 1) * residue_pair(&f, &h)
        );
    }

    #[test]
    fn dual_is_orthogonal() {
        let cases = vec![
            model(),
            gr_canonical(
                &V::new(vec![
                    LocalCondition::new(rat(1, 1), 3, vec![vec![rat(1, 1), rat(2, 1), rat(0, 1)]]).unwrap(),
                    LocalCondition::new(rat(-1, 1), 2, vec![vec![rat(1, 1), rat(-3, 1)]]).unwrap(),
                ])
                .unwrap(),
            ),
        ];
        for w in cases {
            let d = dual(&w).unwrap();
            let wb: Vec<R> = w.v.basis(8).iter().map(|v| R::new(v.clone(), w.m.clone())).collect();
            let db: Vec<R> = d.v.basis(8).iter().map(|v| R::new(v.clone(), d.m.clone())).collect();
            for f in &wb {
                for g in &db {
                    assert_eq!(residue_pair(f, g), rat(0, 1));
                }
            }
            // duality is an involution
            assert!(gr_equal(&dual(&d).unwrap(), &w).unwrap());
        }
    }

    #[test]
    fn simplest_models_are_self_dual() {
        assert_eq!(dual(&GrPoint::<Rational>::trivial()).unwrap(), GrPoint::trivial());
        assert!(gr_equal(&dual(&model()).unwrap(), &model()).unwrap());
    }

    #[test]
    fn adjoint_matches_dual() {
        for w in [GrPoint::trivial(), model()] {
            let rep = c_action_check(&w, 2, 3).unwrap();
            assert!(rep.passed, "{} vs {}", rep.r_dim, rep.cl_dim);
            assert!(rep.r_dim > 0);
        }
    }
}
