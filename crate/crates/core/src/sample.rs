//! Seeded random instances for property checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactnum::matrix::Matrix;
use crate::exactnum::poly::Poly;
use crate::exactnum::scalar::rat;
use crate::weylops::DiffOperator;
use crate::Rational;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational with numerator in `-5..=5` and denominator in `1..=4`.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

pub fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let r = small_rational(rng);
        if r != rat(0, 1) {
            return r;
        }
    }
}

pub fn small_int(rng: &mut impl Rng, bound: i64) -> Rational {
    rat(rng.gen_range(-bound..=bound), 1)
}

pub fn poly(rng: &mut impl Rng, degree: usize) -> Poly<Rational> {
    Poly::new((0..=degree).map(|_| small_rational(rng)).collect())
}

/// Polynomial of exact degree `degree` with zero constant term.
pub fn poly_no_constant(rng: &mut impl Rng, degree: usize) -> Poly<Rational> {
    let mut c = vec![rat(0, 1)];
    c.extend((1..degree).map(|_| small_rational(rng)));
    if degree > 0 {
        c.push(nonzero_rational(rng));
    }
    Poly::new(c)
}

/// Polynomial-coefficient operator of order at most `order`.
pub fn diff_operator(rng: &mut impl Rng, order: usize, degree: usize) -> DiffOperator<Rational> {
    DiffOperator::from_polys((0..=order).map(|_| poly(rng, degree)).collect())
}

pub fn matrix(rng: &mut impl Rng, n: usize) -> Matrix<Rational> {
    Matrix::from_fn(n, n, |_, _| small_rational(rng))
}

/// Integer matrix with unit determinant, `L U` with unit-diagonal triangular
/// factors; entries bounded so the condition number stays moderate.
pub fn unimodular(rng: &mut impl Rng, n: usize) -> Matrix<Rational> {
    let l = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => rat(1, 1),
        std::cmp::Ordering::Greater => rat(rng.gen_range(-1..=1), 1),
        _ => rat(0, 1),
    });
    let u = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => rat(1, 1),
        std::cmp::Ordering::Less => rat(rng.gen_range(-1..=1), 1),
        _ => rat(0, 1),
    });
    l.mul(&u)
}

/// Primary decomposable space with at most `max_points` support points in
/// `-3..=3` and conductor exponents at most `max_r`.
pub fn primary_decomposable(
    rng: &mut impl Rng,
    max_points: usize,
    max_r: usize,
) -> crate::adelic::PrimaryDecomposable<Rational> {
    use crate::adelic::{LocalCondition, PrimaryDecomposable};
    let k = rng.gen_range(1..=max_points.max(1));
    let mut lambdas: Vec<i64> = Vec::new();
    while lambdas.len() < k {
        let l = rng.gen_range(-3..=3);
        if !lambdas.contains(&l) {
            lambdas.push(l);
        }
    }
    let points = lambdas
        .into_iter()
        .map(|l| {
            let r = rng.gen_range(1..=max_r.max(1));
            let dim = rng.gen_range(0..r);
            let rows = (0..dim)
                .map(|_| (0..r).map(|_| small_int(rng, 2)).collect())
                .collect();
            LocalCondition::new(rat(l, 1), r, rows).expect("row length r")
        })
        .collect();
    PrimaryDecomposable::new(points).expect("distinct points")
}
