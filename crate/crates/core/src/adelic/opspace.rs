//! Finite slices of the spaces `D(U, V) = {D in C(z)[d] : D.U in V}`.

use crate::error::Result;
use crate::exactnum::matrix::Matrix;
use crate::exactnum::poly::Poly;
use crate::exactnum::ratfunc::RatFunc;
use crate::exactnum::roots::split_roots;
use crate::exactnum::scalar::Scalar;
use crate::weylops::diffop::{op_mul, DiffOperator};

use super::pd::{dot, jet, rows_matrix, GrPoint, PrimaryDecomposable};

/// Linearly independent operators spanning a finite slice of an ideal, all of
/// the form `delta^{-1} sum_{i <= order} a_i d^i` with `deg a_i <= degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealSlice<F> {
    pub ops: Vec<DiffOperator<F>>,
    pub order: usize,
    pub degree: usize,
    pub delta: Poly<F>,
}

impl<F: Scalar> IdealSlice<F> {
    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    pub fn contains(&self, d: &DiffOperator<F>) -> bool {
        let mut all = self.ops.clone();
        let before = op_rank(&all);
        all.push(d.clone());
        op_rank(&all) == before
    }

    /// The operators `delta^{-1} z^k d^i` spanning the ambient window.
    pub fn window(order: usize, degree: usize, delta: &Poly<F>) -> Vec<DiffOperator<F>> {
        let mut out = Vec::new();
        for i in 0..=order {
            for k in 0..=degree {
                let mut c = vec![Poly::zero(); i + 1];
                c[i] = Poly::monomial(F::one(), k);
                out.push(DiffOperator::with_denominator(c, delta).expect("nonzero delta"));
            }
        }
        out
    }
}

/// Coordinates of operators after clearing a common denominator: one row per
/// operator, columns indexed by `(order, z-power)`.
pub fn op_coordinates<F: Scalar>(ops: &[DiffOperator<F>]) -> Matrix<F> {
    let delta = ops.iter().fold(Poly::one(), |acc, d| acc.lcm(&d.common_denominator().0));
    let cleared: Vec<Vec<Poly<F>>> = ops
        .iter()
        .map(|d| {
            let e = d.left_mul_fn(&RatFunc::from_poly(delta.clone()));
            e.poly_coeffs().expect("common denominator clears poles")
        })
        .collect();
    let ord = cleared.iter().map(Vec::len).max().unwrap_or(0);
    let deg = cleared
        .iter()
        .flatten()
        .map(|p| (p.deg() + 1).max(0) as usize)
        .max()
        .unwrap_or(0);
    Matrix::from_fn(ops.len(), ord * deg, |r, c| {
        cleared[r].get(c / deg.max(1)).map_or_else(F::zero, |p| p.coeff(c % deg.max(1)))
    })
}

pub fn op_rank<F: Scalar>(ops: &[DiffOperator<F>]) -> usize {
    if ops.is_empty() {
        0
    } else {
        op_coordinates(ops).rank()
    }
}

/// Equality of the linear spans of two operator lists.
pub fn span_equal<F: Scalar>(a: &[DiffOperator<F>], b: &[DiffOperator<F>]) -> bool {
    let ra = op_rank(a);
    let rb = op_rank(b);
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    ra == rb && op_rank(&both) == ra
}

/// Basis of the coefficient vectors `c` with `(sum c_k B_k).U in V`.
///
/// After clearing the common denominator `delta` of the ansatz, the condition
/// reads `E.U in delta V` with polynomial-coefficient `E`. A jet condition of
/// order `r` at `l` then only sees the order `r + ord E` jet of `u`, and the
/// jets of `u in U` of that order are realized modulo the ideal
/// `conductor(U) prod (z - l)^{r + ord E}`, which lies in `U`, so elements of
/// degree below its degree suffice.
pub fn solve_ansatz<F: Scalar>(
    ansatz: &[DiffOperator<F>],
    u: &PrimaryDecomposable<F>,
    v: &PrimaryDecomposable<F>,
) -> Result<Vec<Vec<F>>> {
    let n = ansatz.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let delta = ansatz
        .iter()
        .fold(Poly::one(), |acc, d| acc.lcm(&d.common_denominator().0));
    let target = v.scale_by_roots(&split_roots(&delta)?);
    let polys: Vec<DiffOperator<F>> = ansatz
        .iter()
        .map(|d| d.left_mul_fn(&RatFunc::from_poly(delta.clone())))
        .collect();
    let ord = polys.iter().filter_map(DiffOperator::order).max().unwrap_or(0);
    if target.points().is_empty() {
        return Ok(identity_rows(n));
    }
    let depth = u.conductor().deg().max(0) as usize
        + target.points().iter().map(|p| p.r() + ord).sum::<usize>();
    let sources = u.basis(depth);

    let mut rows = Vec::new();
    for b in &sources {
        let images: Vec<Poly<F>> = polys
            .iter()
            .map(|e| {
                let f = e.apply_poly(b);
                f.num().scale(&(F::one() / f.den().lead()))
            })
            .collect();
        for p in target.points() {
            let ann = p.annihilator();
            if ann.is_empty() {
                continue;
            }
            let jets: Vec<Vec<F>> = images.iter().map(|g| jet(g, p.lambda(), p.r())).collect();
            for w in &ann {
                rows.push(jets.iter().map(|j| dot(j, w)).collect::<Vec<F>>());
            }
        }
    }
    if rows.is_empty() {
        return Ok(identity_rows(n));
    }
    let null = rows_matrix(&rows, n).nullspace();
    if null.is_empty() {
        return Ok(null);
    }
    let b = rows_matrix(&null, n).row_basis();
    Ok((0..b.rows()).map(|i| b.row(i).to_vec()).collect())
}

fn identity_rows<F: Scalar>(n: usize) -> Vec<Vec<F>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect()
}

fn combine<F: Scalar>(ansatz: &[DiffOperator<F>], c: &[F]) -> DiffOperator<F> {
    ansatz
        .iter()
        .zip(c)
        .fold(DiffOperator::zero(), |acc, (b, x)| &acc + &b.scale(x))
}

/// `m_V B m_U^{-1}`: turns `B.W_U in W_V` into a condition between
/// primary decomposable spaces.
fn conjugate_for<F: Scalar>(b: &DiffOperator<F>, wu: &GrPoint<F>, wv: &GrPoint<F>) -> DiffOperator<F> {
    let left = DiffOperator::poly(wv.m.clone());
    let right = DiffOperator::function(RatFunc::new(Poly::one(), wu.m.clone()));
    op_mul(&op_mul(&left, b), &right)
}

/// Coefficient vectors `c` with `(sum c_k B_k).W_U in W_V` for Grassmannian points.
pub fn solve_ansatz_gr<F: Scalar>(
    ansatz: &[DiffOperator<F>],
    wu: &GrPoint<F>,
    wv: &GrPoint<F>,
) -> Result<Vec<Vec<F>>> {
    let conj: Vec<DiffOperator<F>> = ansatz.iter().map(|b| conjugate_for(b, wu, wv)).collect();
    solve_ansatz(&conj, &wu.v, &wv.v)
}

/// Operators of `span(ansatz)` mapping `W_U` into `W_V`, echelonized in the
/// ansatz coordinates.
pub fn gr_duv<F: Scalar>(
    ansatz: &[DiffOperator<F>],
    wu: &GrPoint<F>,
    wv: &GrPoint<F>,
) -> Result<Vec<DiffOperator<F>>> {
    Ok(solve_ansatz_gr(ansatz, wu, wv)?
        .iter()
        .map(|c| combine(ansatz, c))
        .collect())
}

pub fn duv_contains<F: Scalar>(d: &DiffOperator<F>, wu: &GrPoint<F>, wv: &GrPoint<F>) -> Result<bool> {
    if d.is_zero() {
        return Ok(true);
    }
    Ok(!solve_ansatz_gr(std::slice::from_ref(d), wu, wv)?.is_empty())
}

/// `{D = delta^{-1} sum_{i <= m_ord} a_i d^i, deg a_i <= d_coeff : D.U in V}`.
pub fn duv_solve<F: Scalar>(
    u: &PrimaryDecomposable<F>,
    v: &PrimaryDecomposable<F>,
    m_ord: usize,
    d_coeff: usize,
    delta: &Poly<F>,
) -> Result<IdealSlice<F>> {
    let ansatz = IdealSlice::window(m_ord, d_coeff, delta);
    let sol = solve_ansatz(&ansatz, u, v)?;
    Ok(IdealSlice {
        ops: sol.iter().map(|c| combine(&ansatz, c)).collect(),
        order: m_ord,
        degree: d_coeff,
        delta: delta.monic(),
    })
}

/// Slice of `R_W = D(C[z], W)`: operators `m^{-1} sum a_i d^i` with
/// `deg a_i <= d_coeff + deg m`.
pub fn alpha_slice<F: Scalar>(w: &GrPoint<F>, m_ord: usize, d_coeff: usize) -> Result<IdealSlice<F>> {
    let deg = d_coeff + w.m.deg().max(0) as usize;
    let ansatz = IdealSlice::window(m_ord, deg, &w.m);
    Ok(IdealSlice {
        ops: gr_duv(&ansatz, &GrPoint::trivial(), w)?,
        order: m_ord,
        degree: deg,
        delta: w.m.clone(),
    })
}

/// Denominator sufficient for `L_W` up to order `m_ord`.
///
/// `W` contains `(rho/m) C[z]` with `rho` the conductor, so every `L` in
/// `L_W` is `A (m/rho)` with `A` polynomial; normal ordering produces at
/// most the poles of the `m_ord`-th derivative of `m/rho`.
pub fn lw_denominator<F: Scalar>(w: &GrPoint<F>, m_ord: usize) -> Poly<F> {
    w.v.points().iter().fold(Poly::one(), |acc, p| {
        &acc * &Poly::linear(p.lambda().clone()).pow(p.r() - p.codim() + m_ord)
    })
}

/// Slice of `L_W = D(W, C[z])` with denominator [`lw_denominator`].
pub fn lw_slice<F: Scalar>(w: &GrPoint<F>, m_ord: usize, d_coeff: usize) -> Result<IdealSlice<F>> {
    let delta = lw_denominator(w, m_ord);
    let deg = d_coeff + delta.deg().max(0) as usize;
    let ansatz = IdealSlice::window(m_ord, deg, &delta);
    Ok(IdealSlice {
        ops: gr_duv(&ansatz, w, &GrPoint::trivial())?,
        order: m_ord,
        degree: deg,
        delta,
    })
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::adelic::pd::{class_equal, gr_canonical};
    use crate::sample;
    use crate::Rational;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn scaling_preserves_class(seed in any::<u64>()) {
            let mut rng = sample::rng(seed);
            let v = sample::primary_decomposable(&mut rng, 3, 3);
            let pi = Poly::from_roots(&[sample::small_int(&mut rng, 3), sample::small_int(&mut rng, 3)]);
            prop_assert!(class_equal(&v, &v.scale(&pi).unwrap()));
        }

        #[test]
        fn alpha_slice_maps_into_w(seed in any::<u64>()) {
            let mut rng = sample::rng(seed);
            let v = sample::primary_decomposable(&mut rng, 2, 2);
            let w = gr_canonical(&v);
            let s = alpha_slice(&w, 1, 2).unwrap();
            for d in &s.ops {
                for k in 0..8 {
                    prop_assert!(w.contains(&d.apply_poly(&Poly::<Rational>::monomial(crate::exactnum::scalar::rat(1, 1), k))));
                }
            }
        }
    }
}
