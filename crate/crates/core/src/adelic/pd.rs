use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::matrix::Matrix;
use crate::exactnum::poly::Poly;
use crate::exactnum::roots::split_roots;
use crate::exactnum::scalar::{Field, Scalar};

/// Divided jet `(f(l), f'(l), ..., f^{(r-1)}(l)/(r-1)!)`.
pub fn jet<F: Field>(f: &Poly<F>, lambda: &F, r: usize) -> Vec<F> {
    f.taylor(lambda, r)
}

/// Matrix with the given rows and `cols` columns (which may be zero rows).
pub(crate) fn rows_matrix<F: Field>(rows: &[Vec<F>], cols: usize) -> Matrix<F> {
    Matrix::from_fn(rows.len(), cols, |i, j| rows[i][j].clone())
}

pub(crate) fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Condition "the order-`r` jet at `lambda` lies in the row space of `basis`".
#[derive(Clone, Debug, PartialEq)]
pub struct LocalCondition<F> {
    lambda: F,
    r: usize,
    basis: Matrix<F>,
}

impl<F: Field> LocalCondition<F> {
    pub fn new(lambda: F, r: usize, rows: Vec<Vec<F>>) -> Result<Self> {
        if rows.iter().any(|v| v.len() != r) {
            return Err(Error::InvalidInput(format!(
                "jet-space basis vectors must have length r = {r}"
            )));
        }
        Ok(Self::from_matrix(lambda, r, &rows_matrix(&rows, r)))
    }

    fn from_matrix(lambda: F, r: usize, m: &Matrix<F>) -> Self {
        let basis = if m.rows() == 0 {
            Matrix::zeros(0, r)
        } else {
            m.row_basis()
        };
        LocalCondition { lambda, r, basis }
    }

    pub fn lambda(&self) -> &F {
        &self.lambda
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Reduced echelon basis of the jet image.
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn codim(&self) -> usize {
        self.r - self.dim()
    }

    pub fn contains_jet(&self, j: &[F]) -> bool {
        let row = rows_matrix(&[j.to_vec()], self.r);
        self.basis.stack(&row).rank() == self.dim()
    }

    /// Functionals cutting out the jet image.
    pub fn annihilator(&self) -> Vec<Vec<F>> {
        self.basis.nullspace()
    }

    /// Smallest `r` describing the same subspace of `C[z]`.
    fn minimized(mut self) -> Self {
        while self.r > 0 {
            let mut e = vec![F::zero(); self.r];
            e[self.r - 1] = F::one();
            if !self.contains_jet(&e) {
                break;
            }
            let r = self.r - 1;
            let proj = Matrix::from_fn(self.basis.rows(), r, |i, j| self.basis[(i, j)].clone());
            self = Self::from_matrix(self.lambda.clone(), r, &proj);
        }
        self
    }

    /// Jet condition satisfied by `pi * f` for `f` satisfying this one, where
    /// `pi` vanishes to order `e` at `lambda`.
    fn multiplied(&self, pi: &Poly<F>, e: usize) -> Self {
        let r2 = self.r + e;
        let c = pi.taylor(&self.lambda, r2);
        let rows: Vec<Vec<F>> = (0..self.basis.rows())
            .map(|a| {
                (0..r2)
                    .map(|k| {
                        (0..=k.min(self.r.saturating_sub(1)))
                            .filter(|&t| t < self.r)
                            .fold(F::zero(), |acc, t| {
                                acc + self.basis[(a, t)].clone() * c[k - t].clone()
                            })
                    })
                    .collect()
            })
            .collect();
        Self::from_matrix(self.lambda.clone(), r2, &rows_matrix(&rows, r2))
    }
}

/// Finite-codimension subspace `{f : jet_{r_l}(f, l) in S_l for all l}` of `C[z]`.
///
/// The encoding is canonical: each condition uses the least possible `r`,
/// vacuous conditions are dropped and points are kept in insertion order
/// (equality ignores the order).
#[derive(Clone, Debug)]
pub struct PrimaryDecomposable<F> {
    points: Vec<LocalCondition<F>>,
}

impl<F: Field> PartialEq for PrimaryDecomposable<F> {
    fn eq(&self, other: &Self) -> bool {
        self.points.len() == other.points.len()
            && self
                .points
                .iter()
                .all(|p| other.points.iter().any(|q| p == q))
    }
}

impl<F: Field> PrimaryDecomposable<F> {
    pub fn new(points: Vec<LocalCondition<F>>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if points[..i].iter().any(|q| q.lambda == p.lambda) {
                return Err(Error::InvalidInput("support points must be distinct".into()));
            }
        }
        Ok(PrimaryDecomposable {
            points: points
                .into_iter()
                .map(LocalCondition::minimized)
                .filter(|p| p.r > 0)
                .collect(),
        })
    }

    /// `C[z]`.
    pub fn whole() -> Self {
        PrimaryDecomposable { points: Vec::new() }
    }

    /// `(z - lambda)^r C[z]`.
    pub fn ideal_power(lambda: F, r: usize) -> Self {
        PrimaryDecomposable::new(vec![
            LocalCondition::new(lambda, r, Vec::new()).expect("empty basis")
        ])
        .expect("single point")
    }

    pub fn points(&self) -> &[LocalCondition<F>] {
        &self.points
    }

    pub fn point(&self, lambda: &F) -> Option<&LocalCondition<F>> {
        self.points.iter().find(|p| &p.lambda == lambda)
    }

    pub fn codim(&self) -> usize {
        self.points.iter().map(LocalCondition::codim).sum()
    }

    /// `prod (z - l)^{r_l}`, which generates the largest ideal inside.
    pub fn conductor(&self) -> Poly<F> {
        self.points.iter().fold(Poly::one(), |acc, p| {
            &acc * &Poly::linear(p.lambda.clone()).pow(p.r)
        })
    }

    /// `m_V = prod (z - l)^{k_l}` with `k_l` the local codimension.
    pub fn canonical_poly(&self) -> Poly<F> {
        self.points.iter().fold(Poly::one(), |acc, p| {
            &acc * &Poly::linear(p.lambda.clone()).pow(p.codim())
        })
    }

    pub fn contains(&self, f: &Poly<F>) -> bool {
        self.points
            .iter()
            .all(|p| p.contains_jet(&jet(f, &p.lambda, p.r)))
    }

    /// Linear functionals on coefficient vectors of degree `<= d` cutting out
    /// `V`.
    pub fn constraint_rows(&self, d: usize) -> Vec<Vec<F>> {
        let mut rows = Vec::new();
        for p in &self.points {
            let jets: Vec<Vec<F>> = (0..=d)
                .map(|j| jet(&Poly::monomial(F::one(), j), &p.lambda, p.r))
                .collect();
            for w in p.annihilator() {
                rows.push(jets.iter().map(|jt| dot(jt, &w)).collect());
            }
        }
        rows
    }

    /// Echelon basis of `V` intersected with polynomials of degree `<= d`.
    pub fn basis(&self, d: usize) -> Vec<Poly<F>> {
        let rows = self.constraint_rows(d);
        let null = rows_matrix(&rows, d + 1).nullspace();
        if null.is_empty() {
            return Vec::new();
        }
        let b = rows_matrix(&null, d + 1).row_basis();
        (0..b.rows()).map(|i| Poly::new(b.row(i).to_vec())).collect()
    }

    /// `pi V` for `pi = c prod (z - l)^{e_l}` given by its roots.
    pub fn scale_by_roots(&self, roots: &[(F, usize)]) -> Self {
        let pi = roots
            .iter()
            .fold(Poly::one(), |acc, (l, e)| &acc * &Poly::linear(l.clone()).pow(*e));
        let mut points = Vec::new();
        for p in &self.points {
            let e = roots
                .iter()
                .find(|(l, _)| l == &p.lambda)
                .map_or(0, |(_, e)| *e);
            points.push(p.multiplied(&pi, e));
        }
        for (l, e) in roots {
            if *e > 0 && self.point(l).is_none() {
                points.push(LocalCondition {
                    lambda: l.clone(),
                    r: *e,
                    basis: Matrix::zeros(0, *e),
                });
            }
        }
        PrimaryDecomposable::new(points).expect("distinct points")
    }

    /// Roots of `m_V` with multiplicities.
    pub fn canonical_roots(&self) -> Vec<(F, usize)> {
        self.points
            .iter()
            .map(|p| (p.lambda.clone(), p.codim()))
            .collect()
    }
}

impl<F: Scalar> PrimaryDecomposable<F> {
    /// `pi V`; `pi` must split over the scalar field.
    pub fn scale(&self, pi: &Poly<F>) -> Result<Self> {
        if pi.is_zero() {
            return Err(Error::InvalidInput("cannot scale by the zero polynomial".into()));
        }
        Ok(self.scale_by_roots(&split_roots(pi)?))
    }
}

impl<F: Field + fmt::Display> fmt::Display for PrimaryDecomposable<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points.is_empty() {
            return write!(f, "C[z]");
        }
        for (n, p) in self.points.iter().enumerate() {
            if n > 0 {
                write!(f, " & ")?;
            }
            write!(f, "[l={}, r={}, S={{", p.lambda, p.r)?;
            for i in 0..p.basis.rows() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                let v: Vec<String> = p.basis.row(i).iter().map(|c| c.to_string()).collect();
                write!(f, "({})", v.join(","))?;
            }
            write!(f, "}}]")?;
        }
        Ok(())
    }
}

/// A point `W = m^{-1} V` of the adelic Grassmannian.
#[derive(Clone, Debug)]
pub struct GrPoint<F> {
    pub m: Poly<F>,
    pub v: PrimaryDecomposable<F>,
}

impl<F: Field> PartialEq for GrPoint<F> {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.v == other.v
    }
}

impl<F: Field> GrPoint<F> {
    /// `C[z]` itself.
    pub fn trivial() -> Self {
        gr_canonical(&PrimaryDecomposable::whole())
    }

    pub fn contains(&self, f: &crate::exactnum::ratfunc::RatFunc<F>) -> bool {
        // f in m^{-1} V  iff  m f is a polynomial in V
        let g = f.clone() * crate::exactnum::ratfunc::RatFunc::from_poly(self.m.clone());
        g.is_poly() && self.v.contains(&g.num().scale(&(F::one() / g.den().lead())))
    }
}

pub fn gr_canonical<F: Field>(v: &PrimaryDecomposable<F>) -> GrPoint<F> {
    GrPoint {
        m: v.canonical_poly(),
        v: v.clone(),
    }
}

/// Equality of points given with arbitrary (split) denominators:
/// `m_a^{-1} V_a = m_b^{-1} V_b` iff `m_b V_a = m_a V_b`.
pub fn gr_equal<F: Scalar>(a: &GrPoint<F>, b: &GrPoint<F>) -> Result<bool> {
    Ok(a.v.scale(&b.m)? == b.v.scale(&a.m)?)
}

/// `U` and `V` define the same point of the Grassmannian: `m_V U = m_U V`.
pub fn class_equal<F: Field>(u: &PrimaryDecomposable<F>, v: &PrimaryDecomposable<F>) -> bool {
    u.scale_by_roots(&v.canonical_roots()) == v.scale_by_roots(&u.canonical_roots())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;
    use crate::Rational;

    type P = Poly<Rational>;
    type V = PrimaryDecomposable<Rational>;

    fn one_plus_z2() -> V {
        V::new(vec![LocalCondition::new(rat(0, 1), 2, vec![vec![rat(1, 1), rat(0, 1)]]).unwrap()]).unwrap()
    }

    #[test]
    fn membership_and_basis() {
        let v = one_plus_z2();
        assert!(v.contains(&P::one()));
        assert!(!v.contains(&P::identity()));
        assert!(v.contains(&P::from_i64s(&[3, 0, 5, 7])));
        assert!(V::whole().contains(&P::from_i64s(&[1, 2])));
        let b = v.basis(3);
        assert_eq!(b, vec![P::one(), P::from_i64s(&[0, 0, 1]), P::from_i64s(&[0, 0, 0, 1])]);
        assert_eq!(V::whole().basis(2).len(), 3);
        assert_eq!(v.basis(20).len(), 21 - v.codim());
        let g = &P::from_i64s(&[3, 1]).pow(2) * &P::from_i64s(&[2, -1, 4]);
        let w = V::ideal_power(rat(-3, 1), 2);
        assert!(w.contains(&g));
    }

    #[test]
    fn canonical_encoding() {
        // r = 3 with S containing e_2 reduces to r = 2
        let v = V::new(vec![LocalCondition::new(
            rat(0, 1),
            3,
            vec![vec![rat(1, 1), rat(0, 1), rat(0, 1)], vec![rat(0, 1), rat(0, 1), rat(1, 1)]],
        )
        .unwrap()])
        .unwrap();
        assert_eq!(v, one_plus_z2());
        let full = V::new(vec![LocalCondition::new(rat(2, 1), 1, vec![vec![rat(5, 1)]]).unwrap()]).unwrap();
        assert_eq!(full, V::whole());
    }

    #[test]
    fn scaling() {
        let v = one_plus_z2();
        assert_eq!(v.scale(&P::one()).unwrap(), v);
        assert_eq!(V::whole().scale(&P::identity()).unwrap(), V::ideal_power(rat(0, 1), 1));
        // z (C + z^2 C[z]) = zC + z^3 C[z]
        let zv = v.scale(&P::identity()).unwrap();
        for (f, inside) in [
            (P::from_i64s(&[0, 1]), true),
            (P::from_i64s(&[0, 0, 1]), false),
            (P::from_i64s(&[0, 2, 0, 1, 1]), true),
            (P::one(), false),
        ] {
            assert_eq!(zv.contains(&f), inside);
        }
        assert_eq!(zv.codim(), 2);
    }

    #[test]
    fn classes() {
        let v = one_plus_z2();
        assert!(class_equal(&v, &v));
        assert!(class_equal(&V::whole(), &V::ideal_power(rat(0, 1), 1)));
        assert!(!class_equal(&v, &V::whole()));
        let pi = P::from_i64s(&[-2, 1, 1]);
        assert!(class_equal(&v, &v.scale(&pi).unwrap()));
        assert_eq!(gr_canonical(&V::whole()).m, P::one());
        assert_eq!(gr_canonical(&v).m, P::identity());
        assert_eq!(gr_canonical(&V::ideal_power(rat(0, 1), 2)).m, P::from_i64s(&[0, 0, 1]));
    }
}
