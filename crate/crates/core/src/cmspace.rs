//! Pairs of matrices `(X, Y)` with `rank([X, Y] - I) <= 1` and the action of
//! the automorphism group generated by `Phi_p` and `Psi_q`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactnum::matrix::Matrix;
use crate::exactnum::numeric::{rank_numeric, singular_values};
use crate::exactnum::poly::Poly;
use crate::exactnum::scalar::{embed_rational, Field, Scalar};
use crate::sample;
use crate::weylops::EndoSpec;
use crate::Rational;

/// Default relative tolerance for numeric rank.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Clone, PartialEq, Debug)]
pub struct CMPoint<F> {
    x: Matrix<F>,
    y: Matrix<F>,
}

impl<F: Field> CMPoint<F> {
    /// Build without validation. Callers must guarantee the rank condition.
    pub fn new_unchecked(x: Matrix<F>, y: Matrix<F>) -> Self {
        CMPoint { x, y }
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn x(&self) -> &Matrix<F> {
        &self.x
    }

    pub fn y(&self) -> &Matrix<F> {
        &self.y
    }

    /// `[X, Y] - I`.
    pub fn defect(&self) -> Matrix<F> {
        self.x.commutator(&self.y).sub(&Matrix::identity(self.n()))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> CMPoint<G> {
        CMPoint {
            x: self.x.map(&f),
            y: self.y.map(&f),
        }
    }

    /// `(g X g^{-1}, g Y g^{-1})`.
    pub fn conjugate(&self, g: &Matrix<F>) -> Result<Self> {
        let gi = g
            .inverse()
            .ok_or_else(|| Error::InvalidInput("conjugator is singular".into()))?;
        Ok(self.conjugate_with(g, &gi))
    }

    pub fn conjugate_with(&self, g: &Matrix<F>, g_inv: &Matrix<F>) -> Self {
        CMPoint {
            x: g.mul(&self.x).mul(g_inv),
            y: g.mul(&self.y).mul(g_inv),
        }
    }
}

impl<F: Scalar> CMPoint<F> {
    /// Rank of `[X, Y] - I`: exact for exact fields, numeric otherwise.
    pub fn defect_rank(&self, tol: f64) -> usize {
        let d = self.defect();
        if F::EXACT {
            d.rank()
        } else {
            rank_numeric(&d, tol)
        }
    }

    pub fn to_approx(&self) -> CMPoint<num_complex::Complex64> {
        self.map(|a| a.to_c64())
    }
}

/// Validate a pair. The empty pair is always valid.
pub fn cm_validate<F: Scalar>(x: Matrix<F>, y: Matrix<F>, tol: f64) -> Result<CMPoint<F>> {
    if !x.is_square() || !y.is_square() || x.rows() != y.rows() {
        return Err(Error::InvalidInput(format!(
            "expected two square matrices of equal size, got {}x{} and {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    let p = CMPoint { x, y };
    let rank = p.defect_rank(tol);
    if rank > 1 {
        return Err(Error::RankViolation {
            rank,
            singular_values: singular_values(&p.defect()),
        });
    }
    Ok(p)
}

/// Word in the generators, applied left to right.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct GWord<F> {
    steps: Vec<EndoSpec<F>>,
}

impl<F: Field> GWord<F> {
    pub fn new(steps: Vec<EndoSpec<F>>) -> Result<Self> {
        for s in &steps {
            match s {
                EndoSpec::Phi(p) | EndoSpec::Psi(p) if p.coeff(0).is_zero() => {}
                EndoSpec::Phi(_) | EndoSpec::Psi(_) => return Err(Error::NonzeroConstantTerm),
                other => {
                    return Err(Error::InvalidInput(format!(
                        "{other:?} is not a generator of the group"
                    )))
                }
            }
        }
        Ok(GWord { steps })
    }

    pub fn empty() -> Self {
        GWord { steps: Vec::new() }
    }

    pub fn steps(&self) -> &[EndoSpec<F>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        GWord { steps }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> GWord<G> {
        GWord {
            steps: self
                .steps
                .iter()
                .map(|s| match s {
                    EndoSpec::Phi(p) => EndoSpec::Phi(p.map(&f)),
                    EndoSpec::Psi(q) => EndoSpec::Psi(q.map(&f)),
                    _ => unreachable!("validated at construction"),
                })
                .collect(),
        }
    }
}

/// `(X + p'(Y), Y)`.
pub fn phi_point<F: Field>(p: &Poly<F>, pt: &CMPoint<F>) -> CMPoint<F> {
    CMPoint {
        x: pt.x.add(&pt.y.eval_poly(&p.derivative())),
        y: pt.y.clone(),
    }
}

/// `(X, Y - q'(X))`.
pub fn psi_point<F: Field>(q: &Poly<F>, pt: &CMPoint<F>) -> CMPoint<F> {
    CMPoint {
        x: pt.x.clone(),
        y: pt.y.sub(&pt.x.eval_poly(&q.derivative())),
    }
}

pub fn cm_act<F: Field>(w: &GWord<F>, pt: &CMPoint<F>) -> CMPoint<F> {
    w.steps.iter().fold(pt.clone(), |acc, s| match s {
        EndoSpec::Phi(p) => phi_point(p, &acc),
        EndoSpec::Psi(q) => psi_point(q, &acc),
        _ => unreachable!("validated at construction"),
    })
}

/// `(Y^t, X^t)`.
pub fn cm_transpose_swap<F: Field>(pt: &CMPoint<F>) -> CMPoint<F> {
    CMPoint {
        x: pt.y.transpose(),
        y: pt.x.transpose(),
    }
}

/// `X_0 = -sum r E_{r+1,r}`, `Y_0 = sum E_{r,r+1}`.
pub fn cm_base_point<F: Field>(n: usize) -> CMPoint<F> {
    CMPoint {
        x: Matrix::from_fn(n, n, |i, j| {
            if i == j + 1 {
                F::from_i64(-(i as i64))
            } else {
                F::zero()
            }
        }),
        y: Matrix::from_fn(n, n, |i, j| if j == i + 1 { F::one() } else { F::zero() }),
    }
}

/// Words in `X`, `Y` of length `1..=max_len`, shortest first, then
/// lexicographic with `X < Y`.
pub fn trace_words(max_len: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for w in &layer {
            next.push(format!("{w}X"));
            next.push(format!("{w}Y"));
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Traces of all words of length `1..=max_len` in the order of [`trace_words`].
pub fn cm_invariants<F: Field>(pt: &CMPoint<F>, max_len: usize) -> Vec<F> {
    let mut out = Vec::new();
    let mut layer = vec![Matrix::identity(pt.n())];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for m in &layer {
            next.push(m.mul(&pt.x));
            next.push(m.mul(&pt.y));
        }
        out.extend(next.iter().map(Matrix::trace));
        layer = next;
    }
    out
}

/// Largest relative discrepancy between two invariant lists, each word
/// measured against `n |X|^a |Y|^b` for a word with `a` letters X and `b` letters Y.
pub fn invariant_discrepancy<F: Scalar, G: Scalar>(
    a: &[F],
    b: &[G],
    n: usize,
    norm_x: f64,
    norm_y: f64,
    max_len: usize,
) -> f64 {
    let words = trace_words(max_len);
    let nx = norm_x.max(1.0);
    let ny = norm_y.max(1.0);
    let mut worst: f64 = 0.0;
    for ((w, u), v) in words.iter().zip(a).zip(b) {
        let cx = w.chars().filter(|&c| c == 'X').count() as i32;
        let cy = w.len() as i32 - cx;
        let scale = (n.max(1) as f64) * nx.powi(cx) * ny.powi(cy);
        worst = worst.max((u.to_c64() - v.to_c64()).norm() / scale);
    }
    worst
}

/// Random valid point: a random word applied to the base point followed by a
/// random unimodular conjugation. Returns the point and the word.
pub fn random_point(
    rng: &mut impl Rng,
    n: usize,
    word_len: usize,
    max_degree: usize,
) -> (CMPoint<Rational>, GWord<Rational>) {
    let steps = (0..word_len)
        .map(|t| {
            let deg = rng.gen_range(1..=max_degree.max(1));
            let p = sample::poly_no_constant(rng, deg);
            if (t + rng.gen_range(0..2)) % 2 == 0 {
                EndoSpec::Phi(p)
            } else {
                EndoSpec::Psi(p)
            }
        })
        .collect();
    let w = GWord { steps };
    let g = sample::unimodular(rng, n);
    let gi = g.inverse().expect("unimodular");
    let p = cm_act(&w, &cm_base_point(n)).conjugate_with(&g, &gi);
    (p, w)
}

/// Embed a rational point into another field.
pub fn embed_point<F: Field>(pt: &CMPoint<Rational>) -> CMPoint<F> {
    pt.map(embed_rational)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;
    use num_complex::Complex64;

    type M = Matrix<Rational>;

    #[test]
    fn validation_examples() {
        assert!(cm_validate(M::zeros(0, 0), M::zeros(0, 0), RANK_TOL).is_ok());
        assert!(cm_validate(M::from_i64s(&[&[3]]), M::from_i64s(&[&[-2]]), RANK_TOL).is_ok());
        let x = M::diag(&[rat(0, 1), rat(1, 1)]);
        let y = M::from_i64s(&[&[5, -1], &[1, 7]]);
        let p = cm_validate(x, y, RANK_TOL).unwrap();
        assert_eq!(p.defect(), M::from_i64s(&[&[-1, 1], &[1, -1]]));
        let bad = cm_validate(M::identity(2), M::zeros(2, 2), RANK_TOL);
        assert!(matches!(bad, Err(Error::RankViolation { rank: 2, .. })));
    }

    #[test]
    fn base_point_and_actions() {
        let b = cm_base_point::<Rational>(2);
        assert_eq!(b.x(), &M::from_i64s(&[&[0, 0], &[-1, 0]]));
        assert_eq!(b.y(), &M::from_i64s(&[&[0, 1], &[0, 0]]));
        assert_eq!(b.defect(), M::from_i64s(&[&[0, 0], &[0, -2]]));
        assert_eq!(b.defect_rank(RANK_TOL), 1);
        let w = GWord::new(vec![EndoSpec::Phi(Poly::from_i64s(&[0, 0, 1]))]).unwrap();
        let a = cm_act(&w, &b);
        assert_eq!(a.x(), &M::from_i64s(&[&[0, 2], &[-1, 0]]));
        assert_eq!(a.y(), b.y());
        let w = GWord::new(vec![EndoSpec::Psi(Poly::zero())]).unwrap();
        assert_eq!(cm_act(&w, &a), a);
        assert_eq!(cm_base_point::<Rational>(1).x(), &M::zeros(1, 1));
    }

    #[test]
    fn swap_conjugates_phi_to_psi() {
        let mut rng = sample::rng(3);
        for _ in 0..20 {
            let (p, _) = random_point(&mut rng, 3, 2, 2);
            let q = sample::poly_no_constant(&mut rng, 3);
            let lhs = cm_transpose_swap(&phi_point(&q, &cm_transpose_swap(&p)));
            assert_eq!(lhs, psi_point(&-&q, &p));
            assert_eq!(cm_transpose_swap(&cm_transpose_swap(&p)), p);
        }
    }

    #[test]
    fn invariants() {
        let b = cm_base_point::<Rational>(2);
        let inv = cm_invariants(&b, 2);
        let words = trace_words(2);
        let xy = words.iter().position(|w| w == "XY").unwrap();
        assert_eq!(inv[xy], rat(-1, 1));
        assert!(cm_invariants(&cm_base_point::<Rational>(1), 3).iter().all(|v| *v == rat(0, 1)));
        let mut rng = sample::rng(11);
        let (p, _) = random_point(&mut rng, 3, 2, 2);
        let g = sample::unimodular(&mut rng, 3);
        assert_eq!(cm_invariants(&p.conjugate(&g).unwrap(), 6), cm_invariants(&p, 6));
    }

    #[test]
    fn numeric_validation_tolerates_rounding() {
        let mut rng = sample::rng(5);
        let (p, _) = random_point(&mut rng, 4, 3, 2);
        let a: CMPoint<Complex64> = p.to_approx();
        assert!(cm_validate(a.x().clone(), a.y().clone(), RANK_TOL).is_ok());
    }
}
