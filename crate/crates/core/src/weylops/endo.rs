use rand::Rng;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::poly::Poly;
use crate::exactnum::ratfunc::RatFunc;
use crate::exactnum::scalar::{binomial, Field};
use crate::sample;
use crate::weylops::diffop::{op_mul, DiffOperator};
use crate::Rational;

/// Generators of the automorphism group and the two anti-automorphisms.
#[derive(Clone, PartialEq, Debug)]
pub enum EndoSpec<F> {
    /// `d -> d - p'(z)`, `z -> z`: conjugation by `e^{p(z)}`.
    Phi(Poly<F>),
    /// `z -> z + q'(d)`, `d -> d`.
    Psi(Poly<F>),
    /// `d -> -z`, `z -> d`.
    Fourier,
    /// Anti-automorphism exchanging `z` and `d`.
    AntiB,
    /// Formal adjoint: anti-automorphism with `d -> -d`, `z -> z`.
    AntiC,
}

impl<F: Field> EndoSpec<F> {
    pub fn phi(p: Poly<F>) -> Result<Self> {
        check_no_constant(&p)?;
        Ok(EndoSpec::Phi(p))
    }

    pub fn psi(q: Poly<F>) -> Result<Self> {
        check_no_constant(&q)?;
        Ok(EndoSpec::Psi(q))
    }

    pub fn is_anti(&self) -> bool {
        matches!(self, EndoSpec::AntiB | EndoSpec::AntiC)
    }
}

fn check_no_constant<F: Field>(p: &Poly<F>) -> Result<()> {
    if p.coeff(0).is_zero() {
        Ok(())
    } else {
        Err(Error::NonzeroConstantTerm)
    }
}

pub fn apply_endo<F: Field>(sigma: &EndoSpec<F>, d: &DiffOperator<F>) -> Result<DiffOperator<F>> {
    match sigma {
        EndoSpec::Phi(p) => Ok(phi(p, d)),
        EndoSpec::Psi(q) => psi(q, d),
        EndoSpec::Fourier => fourier(d),
        EndoSpec::AntiB => anti_b(d),
        EndoSpec::AntiC => Ok(anti_c(d)),
    }
}

/// `e^{p} D e^{-p}`: every `d` becomes `d - p'(z)`.
pub fn phi<F: Field>(p: &Poly<F>, d: &DiffOperator<F>) -> DiffOperator<F> {
    let shifted = &DiffOperator::d() - &DiffOperator::poly(p.derivative());
    let mut acc = DiffOperator::zero();
    let mut power = DiffOperator::one();
    for (i, a) in d.coeffs().iter().enumerate() {
        if i > 0 {
            power = op_mul(&power, &shifted);
        }
        if !a.is_zero() {
            acc = &acc + &power.left_mul_fn(a);
        }
    }
    acc
}

/// `b(z^j d^i) = z^i d^j`. Only defined on polynomial coefficients.
pub fn anti_b<F: Field>(d: &DiffOperator<F>) -> Result<DiffOperator<F>> {
    let polys = d.poly_coeffs()?;
    let top = polys.iter().map(|p| p.deg()).max().unwrap_or(-1);
    if top < 0 {
        return Ok(DiffOperator::zero());
    }
    let out: Vec<Poly<F>> = (0..=top as usize)
        .map(|j| Poly::new(polys.iter().map(|p| p.coeff(j)).collect()))
        .collect();
    Ok(DiffOperator::from_polys(out))
}

/// `c(a d^i) = (-d)^i a`, normal ordered.
pub fn anti_c<F: Field>(d: &DiffOperator<F>) -> DiffOperator<F> {
    let order = match d.order() {
        Some(o) => o,
        None => return DiffOperator::zero(),
    };
    let mut out = vec![RatFunc::zero(); order + 1];
    for (i, a) in d.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let sign = if i % 2 == 0 { F::one() } else { -F::one() };
        let mut ak = a.clone();
        for k in 0..=i {
            if k > 0 {
                ak = ak.derivative();
            }
            let c: F = binomial(i as i64, k);
            out[i - k] = out[i - k].clone() + ak.scale(&(c * sign.clone()));
        }
    }
    DiffOperator::new(out)
}

/// `phi = b c`.
pub fn fourier<F: Field>(d: &DiffOperator<F>) -> Result<DiffOperator<F>> {
    anti_b(&anti_c(d))
}

/// `phi^{-1} = c b`.
pub fn fourier_inverse<F: Field>(d: &DiffOperator<F>) -> Result<DiffOperator<F>> {
    Ok(anti_c(&anti_b(d)?))
}

/// `Psi_q = b Phi_{-q} b`.
pub fn psi<F: Field>(q: &Poly<F>, d: &DiffOperator<F>) -> Result<DiffOperator<F>> {
    anti_b(&phi(&-q, &anti_b(d)?))
}

/// Evaluate `sum_i a_i(Z) D^i` for operators `Z`, `D` (coefficients must be
/// polynomial). Used to realize automorphisms by substituting generator images.
pub fn substitute<F: Field>(
    d: &DiffOperator<F>,
    z_image: &DiffOperator<F>,
    d_image: &DiffOperator<F>,
) -> Result<DiffOperator<F>> {
    let polys = d.poly_coeffs()?;
    let mut acc = DiffOperator::zero();
    let mut dpow = DiffOperator::one();
    for (i, a) in polys.iter().enumerate() {
        if i > 0 {
            dpow = op_mul(&dpow, d_image);
        }
        if a.is_zero() {
            continue;
        }
        let mut az = DiffOperator::zero();
        for c in a.coeffs().iter().rev() {
            az = &op_mul(&az, z_image) + &DiffOperator::scalar(c.clone());
        }
        acc = &acc + &op_mul(&az, &dpow);
    }
    Ok(acc)
}

/// `Psi_q` by direct substitution `z -> z + q'(d)`.
pub fn psi_by_substitution<F: Field>(q: &Poly<F>, d: &DiffOperator<F>) -> Result<DiffOperator<F>> {
    let mut qd = DiffOperator::zero();
    for (k, c) in q.derivative().coeffs().iter().enumerate() {
        qd = &qd + &DiffOperator::d().pow(k).scale(c);
    }
    substitute(d, &(&DiffOperator::z() + &qd), &DiffOperator::d())
}

/// `phi` by direct substitution `z -> d`, `d -> -z`.
pub fn fourier_by_substitution<F: Field>(d: &DiffOperator<F>) -> Result<DiffOperator<F>> {
    substitute(d, &DiffOperator::d(), &-&DiffOperator::z())
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub instances: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Random exact checks of `Psi_q = b Phi_{-q} b = phi Phi_q phi^{-1}` and of
/// the involution and anti-multiplicativity properties of `b` and `c`.
/// `psi_impl` is the realization of `Psi_q` under test.
pub fn endo_check_relations_with(
    seed: u64,
    instances: usize,
    psi_impl: impl Fn(&Poly<Rational>, &DiffOperator<Rational>) -> Result<DiffOperator<Rational>>,
) -> Result<RelationReport> {
    let mut rng = sample::rng(seed);
    for t in 0..instances {
        let a = sample::diff_operator(&mut rng, 3, 3);
        let b = sample::diff_operator(&mut rng, 2, 2);
        let deg = rng.gen_range(1..=3);
        let q = sample::poly_no_constant(&mut rng, deg);
        let fail = |what: &str| {
            Ok(RelationReport {
                instances: t + 1,
                passed: false,
                witness: Some(format!("{what}: D = {a}, q = {q}")),
            })
        };
        let via_psi = psi_impl(&q, &a)?;
        if via_psi != psi_by_substitution(&q, &a)? {
            return fail("Psi_q differs from substitution z -> z + q'(d)");
        }
        if via_psi != anti_b(&phi(&-&q, &anti_b(&a)?))? {
            return fail("Psi_q differs from b Phi_{-q} b");
        }
        let conj = fourier(&phi(&q, &fourier_inverse(&a)?))?;
        if via_psi != conj {
            return fail("Psi_q differs from phi Phi_q phi^-1");
        }
        if fourier(&a)? != fourier_by_substitution(&a)? {
            return fail("phi = bc differs from substitution");
        }
        if anti_b(&anti_b(&a)?)? != a || anti_c(&anti_c(&a)) != a {
            return fail("b or c is not involutive");
        }
        let ab = op_mul(&a, &b);
        if anti_b(&ab)? != op_mul(&anti_b(&b)?, &anti_b(&a)?) {
            return fail("b is not anti-multiplicative");
        }
        if anti_c(&ab) != op_mul(&anti_c(&b), &anti_c(&a)) {
            return fail("c is not anti-multiplicative");
        }
        if phi(&-&q, &phi(&q, &a)) != a || phi(&q, &ab) != op_mul(&phi(&q, &a), &phi(&q, &b)) {
            return fail("Phi_q is not a ring automorphism");
        }
    }
    Ok(RelationReport {
        instances,
        passed: true,
        witness: None,
    })
}

pub fn endo_check_relations(seed: u64, instances: usize) -> Result<RelationReport> {
    endo_check_relations_with(seed, instances, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;

    type D = DiffOperator<Rational>;
    type P = Poly<Rational>;

    #[test]
    fn generator_images() {
        let z2 = P::monomial(rat(1, 1), 2);
        assert_eq!(
            phi(&z2, &D::d()),
            &D::d() - &D::monomial(rat(2, 1), 1, 0)
        );
        // b fixes z d (already symmetric after reordering)
        let zd = D::monomial(rat(1, 1), 1, 1);
        assert_eq!(anti_b(&zd).unwrap(), zd);
        assert_eq!(anti_b(&zd).unwrap(), op_mul(&anti_b(&D::d()).unwrap(), &anti_b(&D::z()).unwrap()));
        assert_eq!(anti_c(&D::d().pow(2)), D::d().pow(2));
        assert_eq!(psi(&z2, &D::d()).unwrap(), D::d());
        assert_eq!(psi(&z2, &D::z()).unwrap(), &D::z() + &D::monomial(rat(2, 1), 0, 1));
        assert_eq!(fourier(&D::d()).unwrap(), -&D::z());
        assert_eq!(fourier(&D::z()).unwrap(), D::d());
    }

    #[test]
    fn anti_b_rejects_poles() {
        let f = D::function(RatFunc::power(-1));
        assert!(matches!(anti_b(&f), Err(Error::Undefined(_))));
        // c is fine with poles
        assert_eq!(anti_c(&f), f);
    }

    #[test]
    fn random_relations_hold() {
        let r = endo_check_relations(7, 40).unwrap();
        assert!(r.passed, "{:?}", r.witness);
    }

    #[test]
    fn sign_flipped_psi_is_caught() {
        let r = endo_check_relations_with(7, 10, |q, d| psi(&-q, d)).unwrap();
        assert!(!r.passed);
    }
}
