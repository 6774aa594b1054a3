//! Truncated pseudo-differential calculus: the operators `K_W` with
//! `psi_W = K_W . e^{xz}`, and membership tests for `D(W_U, W_V)` through them.

mod trunc;

pub use trunc::{wave_apply, z_operator_on_exponential, FormalWave, PsdoTrunc};

use crate::adelic::{alpha_slice, baker_from_gr, gr_from_baker, lw_slice, GrPoint};
use crate::baker::{baker_reduced, BakerFunction};
use crate::cmspace::CMPoint;
use crate::error::{Error, Result};
use crate::exactnum::matrix::Matrix;
use crate::exactnum::poly::Poly;
use crate::exactnum::ratfunc::RatFunc;
use crate::exactnum::scalar::{Field, Scalar};
use crate::weylops::diffop::DiffOperator;

/// Laurent coefficients at infinity of `1/p`, for `z^k` with `k >= -depth`
/// (the top is `z^{-deg p}`).
fn reciprocal_expansion<F: Field>(p: &Poly<F>, depth: i64) -> Vec<(i64, F)> {
    let r = RatFunc::new(Poly::one(), p.clone());
    r.laurent_at_infinity(-depth)
        .terms()
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

/// `K_W = sum a_ij x^j d^i` from the expansion of `psi~` at `x, z = infinity`.
pub fn kw_from_baker<F: Field>(b: &BakerFunction<F>, depth: usize) -> PsdoTrunc<F> {
    let t = depth as i64;
    let nz = b.num.deg_z().max(0);
    let nx = b.num.deg_x().max(0);
    // expansions deep enough that every retained product term is exact
    let ex = reciprocal_expansion(&b.den_x, t + nx);
    let ez = reciprocal_expansion(&b.den_z, t + nz);
    let mut terms = Vec::new();
    for (i_num, j_num, c) in (0..=nx as usize).flat_map(|a| {
        (0..=nz as usize).map(move |bz| (bz, a))
    }).filter_map(|(bz, a)| {
        let c = b.num.coeff(a, bz);
        (!c.is_zero()).then_some((bz as i64, a as i64, c))
    }) {
        for (kx, cx) in &ex {
            let j = j_num + kx;
            if j < -t {
                continue;
            }
            for (kz, cz) in &ez {
                let i = i_num + kz;
                if i < -t {
                    continue;
                }
                terms.push(((i, j), c.clone() * cx.clone() * cz.clone()));
            }
        }
    }
    let exact = b.den_x.deg() <= 0 && b.den_z.deg() <= 0;
    let k = PsdoTrunc::from_terms(depth, terms).with_tops(0, 0);
    if exact {
        k
    } else {
        k.with_floors(Some(-t), Some(-t))
    }
}

pub fn kw_from_point<F: Field>(pt: &CMPoint<F>, depth: usize) -> Result<PsdoTrunc<F>> {
    Ok(kw_from_baker(&baker_reduced(pt)?, depth))
}

/// An operator `sum a_i(z) d^i` with rational `a_i` as an element of the
/// truncated algebra, the coefficients expanded at infinity.
pub fn diffop_to_psdo<F: Field>(d: &DiffOperator<F>, depth: usize) -> PsdoTrunc<F> {
    let t = depth as i64;
    let mut terms = Vec::new();
    let mut infinite = false;
    let mut top = -t - 1;
    for (i, a) in d.coeffs().iter().enumerate() {
        if a.num().is_zero() {
            continue;
        }
        infinite |= !a.is_poly();
        top = top.max(a.degree());
        for (k, c) in a.laurent_at_infinity(-t).terms() {
            terms.push(((i as i64, k), c.clone()));
        }
    }
    let out = PsdoTrunc::from_terms(depth, terms).with_tops(d.order().unwrap_or(0) as i64, top);
    if infinite {
        out.with_floors(None, Some(-t))
    } else {
        out
    }
}

/// `b(D)` for an operator in `z`: `b(a(z) d^i) = x^i a(d)`.
pub fn b_of_diffop<F: Field>(d: &DiffOperator<F>, depth: usize) -> PsdoTrunc<F> {
    diffop_to_psdo(d, depth).b()
}

/// Verdict of the truncated differentiality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Member { depth: i64 },
    NotMember { order: i64, x_power: i64 },
    Inconclusive { depth: i64 },
}

/// Tests whether `K_U b(D) K_V^{-1}` has no terms of negative order, which
/// holds exactly when `D` maps `W_U` into `W_V`. `K_inv_v` is `K_V^{-1}`.
pub fn keylem_with<F: Field>(
    d: &DiffOperator<F>,
    k_u: &PsdoTrunc<F>,
    k_inv_v: &PsdoTrunc<F>,
    floor: usize,
) -> Membership {
    let bd = b_of_diffop(d, k_u.depth());
    let theta = k_u.mul(&bd).mul(k_inv_v);
    differential_verdict(&theta, floor)
}

fn differential_verdict<F: Field>(theta: &PsdoTrunc<F>, floor: usize) -> Membership {
    let bad = theta
        .terms()
        .filter(|(&(i, j), c)| i < 0 && theta.is_reliable(i, j) && !c.is_zero())
        .map(|(&(i, j), _)| (i, j))
        .max();
    let depth = theta.reliable_depth();
    match bad {
        Some((order, x_power)) => Membership::NotMember { order, x_power },
        None if depth >= floor as i64 => Membership::Member { depth },
        None => Membership::Inconclusive { depth },
    }
}

/// Window depth needed for a reliable depth of `floor` on `K_U b(D) K_V^{-1}`.
pub fn keylem_window<F: Field>(d: &DiffOperator<F>, floor: usize) -> usize {
    let ord = d.order().unwrap_or(0);
    let deg = d.coeffs().iter().map(|a| a.degree().max(0)).max().unwrap_or(0) as usize;
    floor + ord.max(deg) + 1
}

pub fn keylem_membership<F: Field>(
    d: &DiffOperator<F>,
    p_u: &CMPoint<F>,
    p_v: &CMPoint<F>,
    floor: usize,
) -> Result<Membership> {
    let depth = keylem_window(d, floor);
    let k_u = kw_from_point(p_u, depth)?;
    let k_v = kw_from_point(p_v, depth)?;
    Ok(keylem_with(d, &k_u, &k_v.inverse()?, floor))
}

/// `[K_U b(D) K_V^{-1}]_+`.
pub fn theta_operator<F: Field>(
    d: &DiffOperator<F>,
    k_u: &PsdoTrunc<F>,
    k_inv_v: &PsdoTrunc<F>,
) -> PsdoTrunc<F> {
    k_u.mul(&b_of_diffop(d, k_u.depth())).mul(k_inv_v).plus()
}

#[derive(Clone, Debug)]
pub struct KpropElement {
    pub differential: bool,
    pub member: bool,
    pub depth: i64,
}

#[derive(Clone, Debug)]
pub struct KpropReport {
    pub passed: bool,
    pub elements: Vec<KpropElement>,
    pub min_depth: i64,
}

/// Checks that `K_W b(L)` lies in `D(C[z], b(W))` for each `L` of the
/// `lw_slice` of `W` at bounds `(m_ord, d_coeff)`.
pub fn kprop_check<F: Scalar>(
    w: &GrPoint<F>,
    baker: &BakerFunction<F>,
    bw: &GrPoint<F>,
    m_ord: usize,
    d_coeff: usize,
    floor: usize,
) -> Result<KpropReport> {
    let depth = floor + m_ord.max(d_coeff) + 1;
    let k = kw_from_baker(baker, depth);
    let l = lw_slice(w, m_ord, d_coeff)?;
    // K_W b(L) has d-order <= d_coeff and x-degree <= m_ord
    let r = alpha_slice(bw, d_coeff, m_ord)?;
    let basis: Vec<PsdoTrunc<F>> = r.ops.iter().map(|a| diffop_to_psdo(a, depth)).collect();
    let mut elements = Vec::new();
    for op in &l.ops {
        let dd = k.mul(&b_of_diffop(op, depth));
        let differential = matches!(
            differential_verdict(&dd, 0),
            Membership::Member { .. }
        );
        let member = in_span(&dd.plus(), &basis, &dd);
        elements.push(KpropElement {
            differential,
            member,
            depth: dd.reliable_depth(),
        });
    }
    let min_depth = elements.iter().map(|e| e.depth).min().unwrap_or(depth as i64);
    let passed = elements.iter().all(|e| e.differential && e.member) && min_depth >= floor as i64;
    Ok(KpropReport {
        passed,
        elements,
        min_depth,
    })
}

/// `K_W b(L) in D(C[z], b(W))` with `b(W)` from the swapped Baker function.
pub fn kprop_for_point<F: Scalar>(
    w: &GrPoint<F>,
    m_ord: usize,
    d_coeff: usize,
    floor: usize,
    window: usize,
) -> Result<KpropReport> {
    let baker = baker_from_gr(w)?;
    let bw = gr_from_baker(&baker.swap_vars(), window)?;
    kprop_check(w, &baker, &bw, m_ord, d_coeff, floor)
}

/// Linear membership of `target` in the span of `basis`, compared on the
/// coefficients reliable in every operand.
fn in_span<F: Field>(target: &PsdoTrunc<F>, basis: &[PsdoTrunc<F>], reliable: &PsdoTrunc<F>) -> bool {
    let mut keys: Vec<(i64, i64)> = target.terms().map(|(k, _)| *k).collect();
    for b in basis {
        keys.extend(b.terms().map(|(k, _)| *k));
    }
    keys.sort_unstable();
    keys.dedup();
    keys.retain(|&(i, j)| {
        reliable.is_reliable(i, j) && basis.iter().all(|b| b.is_reliable(i, j))
    });
    if keys.is_empty() {
        return true;
    }
    let a = Matrix::from_fn(keys.len(), basis.len(), |r, c| basis[c].coeff(keys[r].0, keys[r].1));
    let aug = Matrix::from_fn(keys.len(), basis.len() + 1, |r, c| {
        if c < basis.len() {
            basis[c].coeff(keys[r].0, keys[r].1)
        } else {
            target.coeff(keys[r].0, keys[r].1)
        }
    });
    let ra = if basis.is_empty() { 0 } else { a.rank() };
    aug.rank() == ra
}

/// Truncated depth at which the window is too shallow for a check.
pub fn require_depth(depth: i64, floor: usize) -> Result<()> {
    if depth < floor as i64 {
        Err(Error::Truncation(format!(
            "reliable depth {depth} is below the requested floor {floor}"
        )))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adelic::{duv_contains, gr_canonical, LocalCondition, PrimaryDecomposable};
    use crate::cmspace::cm_transpose_swap;
    use crate::exactnum::scalar::rat;
    use crate::Rational;

    type M = Matrix<Rational>;
    type D = DiffOperator<Rational>;
    type T = PsdoTrunc<Rational>;

    fn pt(a: i64, b: i64) -> CMPoint<Rational> {
        CMPoint::new_unchecked(M::from_i64s(&[&[a]]), M::from_i64s(&[&[b]]))
    }

    fn empty() -> CMPoint<Rational> {
        CMPoint::new_unchecked(M::zeros(0, 0), M::zeros(0, 0))
    }

    #[test]
    fn kw_examples() {
        assert!(kw_from_point(&empty(), 8).unwrap().agrees_with(&T::one(8)));
        let k = kw_from_point(&pt(0, 0), 8).unwrap();
        let expect = T::from_terms(8, [((0, 0), rat(1, 1)), ((-1, -1), rat(-1, 1))]);
        assert!(k.agrees_with(&expect));
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn kw_reproduces_baker_expansion() {
        let p = pt(2, -1);
        let k = kw_from_point(&p, 6).unwrap();
        let w = wave_apply(&k, &FormalWave::exponential(6));
        // 1 - 1/((x-2)(z+1)) = 1 - sum 2^a (-1)^b x^{-a-1} z^{-b-1}
        for a in 0..4i64 {
            for b in 0..4i64 {
                let c = rat(-(2i64.pow(a as u32)) * (-1i64).pow(b as u32), 1);
                assert_eq!(w.coeff(-b - 1, -a - 1), c);
            }
        }
    }

    #[test]
    fn bispectral_symmetry_of_k() {
        let p = CMPoint::new_unchecked(
            M::from_i64s(&[&[0, 0], &[-1, 0]]),
            M::from_i64s(&[&[1, 1], &[0, 2]]),
        );
        let k = kw_from_point(&p, 8).unwrap();
        let ks = kw_from_point(&cm_transpose_swap(&p), 8).unwrap();
        assert!(ks.agrees_with(&k.b()));
        assert!(k.common_depth(&ks) >= 8);
    }

    #[test]
    fn keylem_examples() {
        let u = pt(0, 0);
        assert!(matches!(
            keylem_membership(&D::one(), &u, &u, 8).unwrap(),
            Membership::Member { .. }
        ));
        let z2 = D::monomial(rat(1, 1), 2, 0);
        assert!(matches!(
            keylem_membership(&z2, &empty(), &u, 8).unwrap(),
            Membership::Member { .. }
        ));
        // the identity does not send C[z] into z^{-1} C + z C[z]
        assert!(matches!(
            keylem_membership(&D::one(), &empty(), &u, 8).unwrap(),
            Membership::NotMember { .. }
        ));
    }

    #[test]
    fn keylem_matches_duv_on_model() {
        let model = gr_canonical(
            &PrimaryDecomposable::new(vec![
                LocalCondition::new(rat(0, 1), 2, vec![vec![rat(1, 1), rat(0, 1)]]).unwrap(),
            ])
            .unwrap(),
        );
        let triv = GrPoint::trivial();
        let ops = [
            D::monomial(rat(1, 1), 2, 0),
            D::monomial(rat(1, 1), 2, 1),
            &D::one() - &D::monomial(rat(1, 1), 1, 1),
            D::z(),
            D::d(),
            D::monomial(rat(1, 1), 1, 1),
        ];
        for d in &ops {
            let exact = duv_contains(d, &triv, &model).unwrap();
            let k = keylem_membership(d, &empty(), &pt(0, 0), 8).unwrap();
            assert_eq!(exact, matches!(k, Membership::Member { .. }), "{d}");
        }
    }

    #[test]
    fn theta_intertwines() {
        // D(z) psi_U = Theta(x) psi_V for z^2 from C[z] to the model
        let k_v = kw_from_point(&pt(0, 0), 10).unwrap();
        let theta = theta_operator(&D::monomial(rat(1, 1), 2, 0), &T::one(10), &k_v.inverse().unwrap());
        assert!(matches!(
            differential_verdict(&k_v.inverse().unwrap().mul(&T::monomial(10, 2, 0)), 0),
            Membership::Member { .. } | Membership::NotMember { .. }
        ));
        let lhs = T::monomial(10, 2, 0);
        let rhs = wave_apply(&theta, &wave_apply(&k_v, &FormalWave::exponential(10)));
        assert!(lhs.agrees_with(&rhs.coeffs));
        assert!(rhs.coeffs.reliable_depth() >= 4);
    }

    #[test]
    fn kprop_on_small_models() {
        let triv = GrPoint::<Rational>::trivial();
        let r = kprop_for_point(&triv, 1, 1, 8, 12).unwrap();
        assert!(r.passed);
        let model = gr_canonical(
            &PrimaryDecomposable::new(vec![
                LocalCondition::new(rat(0, 1), 2, vec![vec![rat(1, 1), rat(0, 1)]]).unwrap(),
            ])
            .unwrap(),
        );
        let r = kprop_for_point(&model, 1, 1, 8, 12).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(!r.elements.is_empty());
    }
}
