//! Moving a point of the Calogero-Moser space to the base point with at most
//! three generators.

use num_complex::Complex64;
use rand::Rng;

use crate::cmspace::{cm_act, cm_base_point, phi_point, CMPoint, GWord};
use crate::error::{Error, Result};
use crate::exactnum::matrix::Matrix;
use crate::exactnum::numeric::{eig_approx, inverse_approx, DEFAULT_GAP_TOL};
use crate::exactnum::poly::{vandermonde_solve, Poly};
use crate::exactnum::roots::split_roots;
use crate::exactnum::scalar::{factorial, Field, Scalar};
use crate::exactnum::series::{series_log, Series};
use crate::sample;
use crate::weylops::EndoSpec;

/// Elementary symmetric polynomials `e_0, ..., e_n` of the given values.
pub fn elementary_symmetric<F: Field>(values: &[F]) -> Vec<F> {
    let mut e = vec![F::zero(); values.len() + 1];
    e[0] = F::one();
    for (k, v) in values.iter().enumerate() {
        for m in (1..=k + 1).rev() {
            e[m] = e[m].clone() + e[m - 1].clone() * v.clone();
        }
    }
    e
}

/// The polynomial `p` of degree at most `n` without constant term such that
/// `X_0 + p'(Y_0)` has the given spectrum.
pub fn plem_solve<F: Field>(lambda: &[F]) -> Poly<F> {
    let n = lambda.len();
    let e = elementary_symmetric(lambda);
    let nf: F = factorial(n);
    let target: Vec<F> = (0..=n)
        .map(|m| e[m].clone() * factorial::<F>(n - m) / nf.clone())
        .collect();
    series_log(&Series::new(target, n + 1)).expect("constant term is one")
}

/// Eigenvalues and a matrix of eigenvectors (columns) of a matrix with
/// pairwise distinct eigenvalues. Exact fields need the spectrum to lie in
/// the field.
pub fn diagonalize<F: Scalar>(x: &Matrix<F>, gap_tol: f64) -> Result<(Vec<F>, Matrix<F>)> {
    let n = x.rows();
    if F::EXACT {
        let roots = split_roots(&x.charpoly())?;
        if roots.iter().any(|(_, m)| *m > 1) || roots.len() != n {
            return Err(Error::EigenCollision { min_gap: 0.0 });
        }
        let mut cols = Vec::with_capacity(n);
        for (r, _) in &roots {
            let shifted = x.sub(&Matrix::identity(n).scale(r));
            let ns = shifted.nullspace();
            let v = ns
                .into_iter()
                .next()
                .ok_or_else(|| Error::Internal("eigenvalue without eigenvector".into()))?;
            cols.push(v);
        }
        let s = Matrix::from_fn(n, n, |i, j| cols[j][i].clone());
        Ok((roots.into_iter().map(|(r, _)| r).collect(), s))
    } else {
        let e = eig_approx(x, gap_tol)?;
        if !e.distinct {
            return Err(Error::EigenCollision { min_gap: e.min_gap });
        }
        let values = e
            .values
            .iter()
            .map(|&v| F::rationalize(v).ok_or_else(|| Error::Internal("eigenvalue outside field".into())))
            .collect::<Result<Vec<F>>>()?;
        let s = e.vectors.map(|&v| F::rationalize(v).expect("approximate field"));
        Ok((values, s))
    }
}

fn invert<F: Scalar>(m: &Matrix<F>) -> Result<Matrix<F>> {
    if F::EXACT {
        m.inverse()
            .ok_or_else(|| Error::Internal("eigenvector matrix is singular".into()))
    } else {
        let a = inverse_approx(&m.map(|v| v.to_c64()))?;
        Ok(a.map(|&v| F::rationalize(v).expect("approximate field")))
    }
}

/// Conjugate `(diag(x), Yhat)` by a diagonal matrix so that the off-diagonal
/// part of `Y` becomes `1/(x_j - x_i)`. Returns the normalized `Y` and the
/// diagonal scaling `d` (the conjugation is `diag(d) . diag(d)^{-1}`).
fn normalize_cm_form<F: Scalar>(x: &[F], yhat: &Matrix<F>) -> Result<(Matrix<F>, Vec<F>)> {
    let n = x.len();
    let dmat = Matrix::diag(x);
    let m = dmat.commutator(yhat).sub(&Matrix::identity(n));
    let col = (0..n)
        .max_by(|&a, &b| {
            let na: f64 = m.column(a).iter().map(|v| v.abs_f64()).sum();
            let nb: f64 = m.column(b).iter().map(|v| v.abs_f64()).sum();
            na.total_cmp(&nb)
        })
        .unwrap_or(0);
    let scale = m.max_abs();
    let mut d = Vec::with_capacity(n);
    for i in 0..n {
        let v = m[(i, col)].clone();
        if v.is_zero() || v.abs_f64() <= 1e-12 * scale {
            return Err(Error::Internal(
                "rank-one defect has a vanishing entry and cannot be normalized".into(),
            ));
        }
        d.push(F::one() / v);
    }
    let y = Matrix::from_fn(n, n, |i, j| yhat[(i, j)].clone() * d[i].clone() / d[j].clone());
    Ok((y, d))
}

#[derive(Clone, Debug)]
pub struct DlemSolution<F> {
    pub p: Poly<F>,
    pub q: Poly<F>,
    /// `P = g (Psi_q Phi_p (X_0, Y_0)) g^{-1}`.
    pub g: Matrix<F>,
}

/// For `X` with distinct eigenvalues, find `p`, `q` with
/// `Psi_q Phi_p (X_0, Y_0)` conjugate to the point.
pub fn dlem_solve<F: Scalar>(pt: &CMPoint<F>, gap_tol: f64) -> Result<DlemSolution<F>> {
    let n = pt.n();
    if n == 0 {
        return Ok(DlemSolution {
            p: Poly::zero(),
            q: Poly::zero(),
            g: Matrix::identity(0),
        });
    }
    let (x, s) = diagonalize(pt.x(), gap_tol)?;
    let s_inv = invert(&s)?;
    let yhat = s_inv.mul(pt.y()).mul(&s);
    let (y_cm, d) = normalize_cm_form(&x, &yhat)?;
    let g1 = Matrix::from_fn(n, n, |i, j| s[(i, j)].clone() / d[j].clone());

    let p = plem_solve(&x);
    let p1 = phi_point(&p, &cm_base_point(n));
    let (x1, s1) = diagonalize(p1.x(), gap_tol)?;
    let perm = match_order(&x, &x1)?;
    let s1 = Matrix::from_fn(n, n, |i, j| s1[(i, perm[j])].clone());
    let s1_inv = invert(&s1)?;
    let yhat1 = s1_inv.mul(p1.y()).mul(&s1);
    let (y1_cm, d1) = normalize_cm_form(&x, &yhat1)?;
    let g2 = Matrix::from_fn(n, n, |i, j| s1[(i, j)].clone() / d1[j].clone());

    let diff: Vec<F> = (0..n)
        .map(|i| y1_cm[(i, i)].clone() - y_cm[(i, i)].clone())
        .collect();
    let q = vandermonde_solve(&x, &diff)?.integral();
    let g = g1.mul(&invert(&g2)?);
    Ok(DlemSolution { p, q, g })
}

/// `perm[j]` is the index in `b` of the value matching `a[j]`.
fn match_order<F: Scalar>(a: &[F], b: &[F]) -> Result<Vec<usize>> {
    let mut used = vec![false; b.len()];
    let mut perm = Vec::with_capacity(a.len());
    for v in a {
        let best = (0..b.len())
            .filter(|&k| !used[k])
            .min_by(|&i, &j| {
                let di = (b[i].to_c64() - v.to_c64()).norm();
                let dj = (b[j].to_c64() - v.to_c64()).norm();
                di.total_cmp(&dj)
            })
            .ok_or_else(|| Error::Internal("spectra have different sizes".into()))?;
        if F::EXACT && b[best] != *v {
            return Err(Error::Internal("spectrum of X_0 + p'(Y_0) does not match".into()));
        }
        used[best] = true;
        perm.push(best);
    }
    Ok(perm)
}

/// A polynomial `r` without constant term for which `X + r'(Y)` has distinct
/// eigenvalues. Tries `r = 0`, then `r' = t Y` on a growing random grid of
/// `t`, then random quadratic and cubic `r'`.
pub fn taka_find(pt: &CMPoint<Complex64>, seed: u64, max_tries: usize) -> Result<Poly<Complex64>> {
    let mut best_gap: f64 = 0.0;
    for r in taka_candidates(pt, seed, max_tries) {
        let m = phi_point(&r, pt);
        let e = eig_approx(m.x(), DEFAULT_GAP_TOL)?;
        if e.distinct {
            return Ok(r);
        }
        best_gap = best_gap.max(e.min_gap);
    }
    Err(Error::SearchExhausted {
        tries: max_tries,
        best_gap,
    })
}

fn taka_candidates(pt: &CMPoint<Complex64>, seed: u64, max_tries: usize) -> Vec<Poly<Complex64>> {
    let mut rng = sample::rng(seed);
    let nx = pt.x().frobenius_norm();
    let ny = pt.y().frobenius_norm();
    let unit = if ny > 0.0 { (nx / ny).max(1.0 / ny).clamp(1e-3, 1e3) } else { 1.0 };
    let mut out = Vec::with_capacity(max_tries);
    out.push(Poly::zero());
    for k in 1..max_tries {
        let grow = 1.0 + k as f64 / 4.0;
        let mut t = || Complex64::new(rng.gen_range(-1.0..1.0) * unit * grow, 0.0);
        let deriv = if k < max_tries / 2 || k < 8 {
            vec![Complex64::new(0.0, 0.0), t()]
        } else if k % 2 == 0 {
            vec![Complex64::new(0.0, 0.0), t(), t()]
        } else {
            vec![Complex64::new(0.0, 0.0), t(), t(), t()]
        };
        out.push(Poly::new(deriv).integral());
    }
    out
}

#[derive(Clone, Debug)]
pub struct NormalFormOptions {
    pub seed: u64,
    pub max_tries: usize,
    pub gap_tol: f64,
    pub residual_tol: f64,
}

impl Default for NormalFormOptions {
    fn default() -> Self {
        NormalFormOptions {
            seed: 0,
            max_tries: 64,
            gap_tol: DEFAULT_GAP_TOL,
            residual_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NormalFormCertificate {
    pub input: CMPoint<Complex64>,
    /// Applied left to right to the base point.
    pub word: GWord<Complex64>,
    pub g: Matrix<Complex64>,
    pub residual: f64,
}

impl NormalFormCertificate {
    /// `cm_act(word, base)`.
    pub fn reconstruction(&self) -> CMPoint<Complex64> {
        cm_act(&self.word, &cm_base_point(self.input.n()))
    }
}

/// Relative residual of `g A g^{-1}` against `P`.
pub fn conjugation_residual(
    pt: &CMPoint<Complex64>,
    a: &CMPoint<Complex64>,
    g: &Matrix<Complex64>,
) -> Result<f64> {
    let gi = inverse_approx(g)?;
    let c = a.conjugate_with(g, &gi);
    let num = c.x().sub(pt.x()).frobenius_norm() + c.y().sub(pt.y()).frobenius_norm();
    let den = (pt.x().frobenius_norm() + pt.y().frobenius_norm()).max(1.0);
    Ok(num / den)
}

pub fn normal_form(pt: &CMPoint<Complex64>, opts: &NormalFormOptions) -> Result<NormalFormCertificate> {
    let n = pt.n();
    let base = cm_base_point::<Complex64>(n);
    if *pt == base {
        return Ok(NormalFormCertificate {
            input: pt.clone(),
            word: GWord::empty(),
            g: Matrix::identity(n),
            residual: 0.0,
        });
    }
    let mut best: Option<NormalFormCertificate> = None;
    let mut last_err = None;
    for r in taka_candidates(pt, opts.seed, opts.max_tries) {
        let shifted = phi_point(&r, pt);
        let sol = match dlem_solve(&shifted, opts.gap_tol) {
            Ok(s) => s,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let mut steps = vec![EndoSpec::Phi(sol.p), EndoSpec::Psi(sol.q)];
        if !r.is_zero() {
            steps.push(EndoSpec::Phi(-&r));
        }
        let word = GWord::new(steps)?;
        let rec = cm_act(&word, &base);
        let residual = match conjugation_residual(pt, &rec, &sol.g) {
            Ok(v) if v.is_finite() => v,
            _ => continue,
        };
        let cert = NormalFormCertificate {
            input: pt.clone(),
            word,
            g: sol.g,
            residual,
        };
        if residual <= opts.residual_tol {
            return Ok(cert);
        }
        if best.as_ref().is_none_or(|b| residual < b.residual) {
            best = Some(cert);
        }
    }
    match (best, last_err) {
        (Some(b), _) => Err(Error::Conditioning(format!(
            "best reconstruction residual {:.3e} exceeds {:.1e}",
            b.residual, opts.residual_tol
        ))),
        (None, Some(Error::EigenCollision { min_gap })) => Err(Error::SearchExhausted {
            tries: opts.max_tries,
            best_gap: min_gap,
        }),
        (None, Some(e)) => Err(e),
        (None, None) => Err(Error::SearchExhausted {
            tries: opts.max_tries,
            best_gap: 0.0,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmspace::{cm_invariants, embed_point, invariant_discrepancy, psi_point, random_point};
    use crate::exactnum::scalar::rat;
    use crate::exactnum::series::series_exp;
    use crate::Rational;

    type M = Matrix<Rational>;

    #[test]
    fn plem_examples() {
        let zeros = vec![rat(0, 1); 3];
        assert!(plem_solve(&zeros).is_zero());
        let p = plem_solve(&[rat(1, 1), rat(2, 1)]);
        assert_eq!(p, Poly::new(vec![rat(0, 1), rat(3, 2), rat(-1, 8)]));
        let x1 = phi_point(&p, &cm_base_point(2));
        assert_eq!(
            x1.x(),
            &M::from_rows(vec![vec![rat(3, 2), rat(-1, 4)], vec![rat(-1, 1), rat(3, 2)]]).unwrap()
        );
        let mut roots = split_roots(&x1.x().charpoly()).unwrap();
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(roots, vec![(rat(1, 1), 1), (rat(2, 1), 1)]);
    }

    #[test]
    fn characteristic_polynomial_identity() {
        let mut rng = sample::rng(21);
        for n in 1..=6 {
            let p = sample::poly_no_constant(&mut rng, n);
            let m = phi_point(&p, &cm_base_point::<Rational>(n));
            let e = series_exp(&p, n + 1).unwrap();
            // det(M - tI) = sum_k (n!/k!) E_{n-k} (-t)^k
            let cp = m.x().charpoly();
            for k in 0..=n {
                let sign = if n % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
                let lhs = cp.coeff(k) * sign;
                let ksig = if k % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
                let rhs = factorial::<Rational>(n) / factorial::<Rational>(k) * e.coeffs()[n - k].clone() * ksig;
                assert_eq!(lhs, rhs, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn dlem_one_by_one() {
        let pt = CMPoint::new_unchecked(M::from_i64s(&[&[3]]), M::from_i64s(&[&[-5]]));
        let s = dlem_solve(&pt, DEFAULT_GAP_TOL).unwrap();
        assert_eq!(s.p, Poly::from_i64s(&[0, 3]));
        assert_eq!(s.q, Poly::from_i64s(&[0, 5]));
    }

    #[test]
    fn cm_form_for_two_points() {
        let x = [rat(0, 1), rat(1, 1)];
        // CM form conjugated by diag(2, 3)
        let y = M::from_rows(vec![vec![rat(4, 1), rat(2, 3)], vec![rat(-3, 2), rat(9, 1)]]).unwrap();
        let (ycm, _) = normalize_cm_form(&x, &y).unwrap();
        assert_eq!(ycm[(0, 1)], rat(1, 1));
        assert_eq!(ycm[(1, 0)], rat(-1, 1));
    }

    #[test]
    fn dlem_recovers_exact_data() {
        let mut rng = sample::rng(8);
        for n in 1..=4 {
            let lambda: Vec<Rational> = (0..n).map(|k| rat(2 * k as i64 - 3, 1 + (k % 2) as i64)).collect();
            let p = plem_solve(&lambda);
            let q = sample::poly_no_constant(&mut rng, n);
            let q = Poly::new(q.coeffs()[..=n.min(q.deg() as usize)].to_vec());
            let pt = psi_point(&q, &phi_point(&p, &cm_base_point(n)));
            let g = sample::unimodular(&mut rng, n);
            let pt = pt.conjugate(&g).unwrap();
            let s = dlem_solve(&pt, DEFAULT_GAP_TOL).unwrap();
            assert_eq!(s.p, p);
            assert_eq!(s.q, q);
            let rec = psi_point(&s.q, &phi_point(&s.p, &cm_base_point(n)));
            assert_eq!(rec.conjugate(&s.g).unwrap(), pt);
        }
    }

    #[test]
    fn taka_examples() {
        let base = cm_base_point::<Complex64>(2);
        let r = taka_find(&base, 1, 16).unwrap();
        assert!(!r.is_zero());
        let diag = CMPoint::new_unchecked(
            Matrix::diag(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]),
            Matrix::from_fn(2, 2, |i, j| {
                if i == j {
                    Complex64::new(0.0, 0.0)
                } else if i == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(-1.0, 0.0)
                }
            }),
        );
        assert!(taka_find(&diag, 1, 16).unwrap().is_zero());
        let one = cm_base_point::<Complex64>(1);
        assert!(taka_find(&one, 1, 4).unwrap().is_zero());
    }

    #[test]
    fn normal_form_examples() {
        let opts = NormalFormOptions::default();
        let base = cm_base_point::<Complex64>(3);
        let c = normal_form(&base, &opts).unwrap();
        assert!(c.word.is_empty());
        assert_eq!(c.residual, 0.0);

        let z3 = Poly::from_i64s(&[0, 0, 0, 1]);
        let pt = phi_point(&z3, &cm_base_point::<Rational>(3));
        let a: CMPoint<Complex64> = pt.to_approx();
        let c = normal_form(&a, &opts).unwrap();
        assert!(c.word.len() <= 3);
        assert!(c.residual <= 1e-6, "{}", c.residual);

        let mut rng = sample::rng(99);
        for _ in 0..10 {
            let (pt, _) = random_point(&mut rng, 5, 3, 2);
            let a: CMPoint<Complex64> = embed_point(&pt);
            let c = normal_form(&a, &opts).unwrap();
            assert!(c.residual <= 1e-6, "{}", c.residual);
            let rec = c.reconstruction();
            let gap = invariant_discrepancy(
                &cm_invariants(&rec, 10),
                &cm_invariants(&a, 10),
                5,
                a.x().frobenius_norm(),
                a.y().frobenius_norm(),
                10,
            );
            assert!(gap <= 1e-6, "{gap}");
        }
    }
}
