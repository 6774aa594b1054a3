//! Recovering a primary decomposable space from a finite spanning set, and
//! the map from ideals back to the Grassmannian.

use crate::error::{Error, Result};
use crate::exactnum::matrix::Matrix;
use crate::exactnum::poly::Poly;
use crate::exactnum::ratfunc::RatFunc;
use crate::exactnum::roots::split_roots;
use crate::exactnum::scalar::Scalar;

use super::opspace::IdealSlice;
use super::pd::{jet, rows_matrix, GrPoint, LocalCondition, PrimaryDecomposable};

/// Echelon basis of `span(polys)` with pivots on the highest degrees, so that
/// the rows of degree `<= e` span the intersection with `P_e`.
fn top_echelon<F: Scalar>(polys: &[Poly<F>], width: usize) -> Vec<Poly<F>> {
    if polys.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_fn(polys.len(), width, |i, j| polys[i].coeff(width - 1 - j));
    let b = m.row_basis();
    (0..b.rows())
        .map(|i| Poly::new(b.row(i).iter().rev().cloned().collect()))
        .collect()
}

/// The primary decomposable space `V` with `V cap P_d = span(polys) cap P_d`.
///
/// The codimension of the span in `P_e` must be stable for `e = d-2..=d`.
/// The conductor is found as the shortest linear recurrence shared by the
/// annihilating functionals (they all vanish on `rho C[z]`), and the answer
/// is verified exactly against the input.
pub fn pd_from_span<F: Scalar>(polys: &[Poly<F>], d: usize) -> Result<PrimaryDecomposable<F>> {
    let unstable = Error::NoStabilization { degree: d };
    if d < 2 {
        return Err(unstable);
    }
    let width = polys
        .iter()
        .map(|p| (p.deg() + 1).max(0) as usize)
        .max()
        .unwrap_or(0)
        .max(d + 1);
    let ech = top_echelon(polys, width);
    let upto = |e: usize| -> Vec<Poly<F>> {
        ech.iter().filter(|p| p.deg() <= e as i64).cloned().collect()
    };
    let codim = |e: usize| e + 1 - upto(e).len();
    let k = codim(d);
    if codim(d - 1) != k || codim(d - 2) != k {
        return Err(unstable);
    }
    if k == 0 {
        return Ok(PrimaryDecomposable::whole());
    }
    let sd = upto(d);
    let ann = rows_matrix(
        &sd.iter()
            .map(|p| (0..=d).map(|j| p.coeff(j)).collect::<Vec<F>>())
            .collect::<Vec<_>>(),
        d + 1,
    )
    .nullspace();

    for l in 1..=d {
        let Some(sigma) = common_recurrence(&ann, l) else {
            continue;
        };
        let Ok(roots) = split_roots(&sigma) else {
            continue;
        };
        let points: Vec<LocalCondition<F>> = roots
            .iter()
            .map(|(lam, r)| {
                let rows: Vec<Vec<F>> = sd.iter().map(|p| jet(p, lam, *r)).collect();
                LocalCondition::new(lam.clone(), *r, rows)
            })
            .collect::<Result<_>>()?;
        let v = PrimaryDecomposable::new(points)?;
        if polys.iter().all(|p| v.contains(p)) && v.basis(d).len() == sd.len() {
            return Ok(v);
        }
    }
    Err(unstable)
}

/// Monic `sigma` of degree `l` with `sum_t sigma_t w_{j+t} = 0` for every
/// functional `w` and every admissible `j`, if it exists uniquely.
fn common_recurrence<F: Scalar>(ann: &[Vec<F>], l: usize) -> Option<Poly<F>> {
    let n = ann.first()?.len();
    if l >= n {
        return None;
    }
    let mut rows = Vec::new();
    for w in ann {
        for j in 0..n - l {
            rows.push(w[j..=j + l].to_vec());
        }
    }
    // nullspace of the recurrence system; a unique monic solution needs dimension one
    let null = rows_matrix(&rows, l + 1).nullspace();
    if null.len() != 1 || null[0][l].is_zero() {
        return None;
    }
    Some(Poly::new(null[0].clone()).monic())
}

/// `I . C[z]` as a point of the Grassmannian, read off from the operators of
/// the slice applied to `1, z, ..., z^d`.
pub fn e_map<F: Scalar>(slice: &IdealSlice<F>, d: usize) -> Result<GrPoint<F>> {
    let delta = slice
        .ops
        .iter()
        .fold(Poly::one(), |acc, g| acc.lcm(&g.common_denominator().0));
    let dr = RatFunc::from_poly(delta.clone());
    let mut polys = Vec::new();
    for g in &slice.ops {
        let e = g.left_mul_fn(&dr);
        for j in 0..=d {
            let f = e.apply_poly(&Poly::monomial(F::one(), j));
            if !f.is_poly() {
                return Err(Error::Internal("cleared operator produced a pole".into()));
            }
            polys.push(f.num().scale(&(F::one() / f.den().lead())));
        }
    }
    Ok(GrPoint {
        m: delta,
        v: pd_from_span(&polys, d)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adelic::opspace::alpha_slice;
    use crate::adelic::pd::{gr_canonical, gr_equal};
    use crate::exactnum::scalar::rat;
    use crate::weylops::diffop::DiffOperator;
    use crate::Rational;

    type P = Poly<Rational>;
    type V = PrimaryDecomposable<Rational>;

    fn lc(l: i64, r: usize, rows: &[&[i64]]) -> LocalCondition<Rational> {
        LocalCondition::new(
            rat(l, 1),
            r,
            rows.iter().map(|v| v.iter().map(|&c| rat(c, 1)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn recovers_from_basis() {
        let cases = vec![
            V::whole(),
            V::new(vec![lc(0, 2, &[&[1, 0]])]).unwrap(),
            V::new(vec![lc(1, 3, &[&[1, 2, 0]]), lc(-2, 1, &[])]).unwrap(),
            V::new(vec![lc(0, 3, &[&[1, 0, 1]]), lc(2, 2, &[&[0, 1]]), lc(-1, 2, &[&[1, 1]])]).unwrap(),
        ];
        for v in cases {
            let got = pd_from_span(&v.basis(12), 12).unwrap();
            assert_eq!(got, v);
        }
    }

    #[test]
    fn too_small_window_is_reported() {
        let v = V::new(vec![lc(0, 3, &[&[1, 0, 1]]), lc(2, 3, &[&[0, 1, 0]])]).unwrap();
        assert!(matches!(
            pd_from_span(&v.basis(4), 4),
            Err(Error::NoStabilization { .. })
        ));
    }

    #[test]
    fn generators_of_higher_degree() {
        // z^2 C[z] generated by z^2 and z^3; the window is filled by products
        let polys: Vec<P> = (2..=14).map(|k| P::monomial(rat(1, 1), k)).collect();
        assert_eq!(pd_from_span(&polys, 12).unwrap(), V::ideal_power(rat(0, 1), 2));
    }

    #[test]
    fn example_ideal() {
        let z = |k| DiffOperator::monomial(rat(1, 1), k, 0);
        let slice = IdealSlice {
            ops: vec![
                z(2),
                DiffOperator::monomial(rat(1, 1), 2, 1),
                &DiffOperator::one() - &DiffOperator::monomial(rat(1, 1), 1, 1),
            ],
            order: 1,
            degree: 2,
            delta: P::one(),
        };
        let got = e_map(&slice, 12).unwrap();
        assert_eq!(got.m, P::one());
        assert_eq!(got.v, V::new(vec![lc(0, 2, &[&[1, 0]])]).unwrap());
    }

    #[test]
    fn alpha_then_e() {
        let v = V::new(vec![lc(0, 2, &[&[1, 0]]), lc(1, 2, &[&[1, 3]])]).unwrap();
        let w = gr_canonical(&v);
        let rmax = 2;
        let slice = alpha_slice(&w, rmax, w.v.conductor().deg() as usize + rmax).unwrap();
        let back = e_map(&slice, 12).unwrap();
        assert!(gr_equal(&back, &w).unwrap());
    }
}
