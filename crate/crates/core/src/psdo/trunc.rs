use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::scalar::{binomial, falling, Field};

/// Truncated element `sum a_ij x^j d^i` of the algebra of operators whose
/// `x`- and `d`-powers are bounded above.
///
/// Terms with `i < -depth` or `j < -depth` are not stored. A coefficient at
/// `(i, j)` is reliable when `i >= floor_d` and `j >= floor_x`; `None` means
/// nothing was lost in that direction. `top_d` and `top_x` bound the powers of
/// the untruncated element from above.
#[derive(Clone, Debug)]
pub struct PsdoTrunc<F> {
    terms: BTreeMap<(i64, i64), F>,
    depth: i64,
    floor_d: Option<i64>,
    floor_x: Option<i64>,
    top_d: i64,
    top_x: i64,
}

fn max_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

impl<F: Field> PsdoTrunc<F> {
    /// Exact element from finitely many `((i, j), a_ij)` terms.
    pub fn from_terms(depth: usize, terms: impl IntoIterator<Item = ((i64, i64), F)>) -> Self {
        let mut out = Self::zero(depth);
        for ((i, j), c) in terms {
            out.add_term(i, j, c);
        }
        out.top_d = out.terms.keys().map(|k| k.0).max().unwrap_or(-out.depth - 1);
        out.top_x = out.terms.keys().map(|k| k.1).max().unwrap_or(-out.depth - 1);
        out
    }

    pub fn zero(depth: usize) -> Self {
        let depth = depth as i64;
        PsdoTrunc {
            terms: BTreeMap::new(),
            depth,
            floor_d: None,
            floor_x: None,
            top_d: -depth - 1,
            top_x: -depth - 1,
        }
    }

    pub fn one(depth: usize) -> Self {
        Self::from_terms(depth, [((0, 0), F::one())])
    }

    /// `x^j d^i`.
    pub fn monomial(depth: usize, i: i64, j: i64) -> Self {
        Self::from_terms(depth, [((i, j), F::one())])
    }

    /// Marks the element as known only above the given floors.
    pub fn with_floors(mut self, floor_d: Option<i64>, floor_x: Option<i64>) -> Self {
        self.floor_d = max_floor(self.floor_d, floor_d);
        self.floor_x = max_floor(self.floor_x, floor_x);
        self
    }

    /// Raise the stated upper bounds on the powers.
    pub fn with_tops(mut self, top_d: i64, top_x: i64) -> Self {
        self.top_d = self.top_d.max(top_d);
        self.top_x = self.top_x.max(top_x);
        self
    }

    fn add_term(&mut self, i: i64, j: i64, c: F) {
        if c.is_zero() {
            return;
        }
        if i < -self.depth {
            self.floor_d = max_floor(self.floor_d, Some(-self.depth));
            return;
        }
        if j < -self.depth {
            self.floor_x = max_floor(self.floor_x, Some(-self.depth));
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(F::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn depth(&self) -> usize {
        self.depth as usize
    }

    pub fn floor_d(&self) -> Option<i64> {
        self.floor_d
    }

    pub fn floor_x(&self) -> Option<i64> {
        self.floor_x
    }

    pub fn top_d(&self) -> i64 {
        self.top_d
    }

    pub fn top_x(&self) -> i64 {
        self.top_x
    }

    /// Number of reliable orders below zero, the smaller of the two directions.
    pub fn reliable_depth(&self) -> i64 {
        let d = self.floor_d.map_or(self.depth, |f| -f);
        let x = self.floor_x.map_or(self.depth, |f| -f);
        d.min(x)
    }

    pub fn is_reliable(&self, i: i64, j: i64) -> bool {
        i >= self.floor_d.unwrap_or(i64::MIN)
            && j >= self.floor_x.unwrap_or(i64::MIN)
            && i >= -self.depth
            && j >= -self.depth
    }

    pub fn coeff(&self, i: i64, j: i64) -> F {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(F::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = self.clone();
        if c.is_zero() {
            out.terms.clear();
        } else {
            for v in out.terms.values_mut() {
                *v = v.clone() * c.clone();
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.depth.min(other.depth) as usize);
        out.floor_d = max_floor(self.floor_d, other.floor_d);
        out.floor_x = max_floor(self.floor_x, other.floor_x);
        for (&(i, j), c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(i, j, c.clone());
        }
        out.top_d = self.top_d.max(other.top_d);
        out.top_x = self.top_x.max(other.top_x);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    /// Product by the extended Leibniz rule
    /// `d^b x^c = sum_k binom(b, k) falling(c, k) x^{c-k} d^{b-k}`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.depth.min(other.depth) as usize);
        out.floor_d = max_floor(
            self.floor_d.map(|f| f + other.top_d),
            other.floor_d.map(|f| f + self.top_d),
        );
        out.floor_x = max_floor(
            self.floor_x.map(|f| f + other.top_x),
            other.floor_x.map(|f| f + self.top_x),
        );
        for (&(b, a), u) in &self.terms {
            for (&(d, c), v) in &other.terms {
                let uv = u.clone() * v.clone();
                let mut k = 0i64;
                loop {
                    let (i, j) = (b + d - k, a + c - k);
                    if i < -out.depth || j < -out.depth {
                        // the remaining terms of this pair all lie below the window
                        let coef = leibniz::<F>(b, c, k as usize);
                        if !coef.is_zero() {
                            out.add_term(i, j, coef * uv.clone());
                        }
                        break;
                    }
                    let coef = leibniz::<F>(b, c, k as usize);
                    if coef.is_zero() && (c >= 0 && k > c || b >= 0 && k > b) {
                        break;
                    }
                    out.add_term(i, j, coef * uv.clone());
                    k += 1;
                }
            }
        }
        out.top_d = self.top_d + other.top_d;
        out.top_x = self.top_x + other.top_x;
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(self.depth as usize), |acc, _| acc.mul(self))
    }

    /// Anti-automorphism `x -> d`, `d -> x`. On normal-ordered monomials
    /// `b(x^j d^i) = b(d)^i b(x)^j = x^i d^j`, which is again normal ordered.
    pub fn b(&self) -> Self {
        PsdoTrunc {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
            depth: self.depth,
            floor_d: self.floor_x,
            floor_x: self.floor_d,
            top_d: self.top_x,
            top_x: self.top_d,
        }
    }

    /// The differential part: terms with `i >= 0`.
    pub fn plus(&self) -> Self {
        let mut out = self.clone();
        out.terms.retain(|&(i, _), _| i >= 0);
        out
    }

    /// Inverse of `1 + N` with `N` of negative order in `d`, by the geometric
    /// series, which terminates in the window.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeff(0, 0) != F::one() || self.terms.keys().any(|&(i, j)| i >= 0 && (i, j) != (0, 0)) {
            return Err(Error::InvalidInput(
                "inverse needs the form 1 + (terms of negative order in d)".into(),
            ));
        }
        let mut n = self.clone();
        n.terms.remove(&(0, 0));
        n.top_d = n.terms.keys().map(|k| k.0).max().unwrap_or(-n.depth - 1);
        n.top_x = n.terms.keys().map(|k| k.1).max().unwrap_or(-n.depth - 1);
        let neg = n.scale(&-F::one());
        // (-N)^k has d-order at most -k, so k <= depth covers the window
        let mut out = Self::one(self.depth as usize);
        let mut p = Self::one(self.depth as usize);
        for _ in 0..=self.depth {
            p = p.mul(&neg);
            out = out.add(&p);
            if p.is_empty() {
                break;
            }
        }
        Ok(out)
    }

    /// Agreement on every coefficient reliable in both operands.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let keys: Vec<(i64, i64)> = self.terms.keys().chain(other.terms.keys()).cloned().collect();
        keys.into_iter()
            .filter(|&(i, j)| self.is_reliable(i, j) && other.is_reliable(i, j))
            .all(|(i, j)| self.coeff(i, j) == other.coeff(i, j))
    }

    /// Common reliable depth of a comparison with `other`.
    pub fn common_depth(&self, other: &Self) -> i64 {
        self.reliable_depth().min(other.reliable_depth())
    }
}

/// `binom(b, k) falling(c, k)`: the coefficient of `x^{c-k} d^{b-k}` in `d^b x^c`.
fn leibniz<F: Field>(b: i64, c: i64, k: usize) -> F {
    binomial::<F>(b, k) * falling::<F>(c, k)
}

impl<F: Field + fmt::Display> fmt::Display for PsdoTrunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, ((i, j), c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if *j != 0 {
                write!(f, "*x^{j}")?;
            }
            if *i != 0 {
                write!(f, "*d^{i}")?;
            }
        }
        Ok(())
    }
}

/// `e^{xz} sum a_ij x^j z^i`, with the same truncation bookkeeping as
/// [`PsdoTrunc`] (`i` is the power of `z`).
#[derive(Clone, Debug)]
pub struct FormalWave<F> {
    pub coeffs: PsdoTrunc<F>,
}

impl<F: Field> FormalWave<F> {
    /// `e^{xz}`.
    pub fn exponential(depth: usize) -> Self {
        FormalWave {
            coeffs: PsdoTrunc::one(depth),
        }
    }

    pub fn coeff(&self, z_pow: i64, x_pow: i64) -> F {
        self.coeffs.coeff(z_pow, x_pow)
    }
}

/// Action on waves: `d` acts on `e^{xz} h` as `e^{xz} (z + d_x) h`, and
/// `(z + d_x)^b = sum_k binom(b, k) z^{b-k} d_x^k` in powers of `z^{-1}`.
pub fn wave_apply<F: Field>(a: &PsdoTrunc<F>, w: &FormalWave<F>) -> FormalWave<F> {
    let h = &w.coeffs;
    let depth = a.depth.min(h.depth);
    let mut out = PsdoTrunc::zero(depth as usize);
    out.floor_d = max_floor(a.floor_d.map(|f| f + h.top_d), h.floor_d.map(|f| f + a.top_d));
    out.floor_x = max_floor(a.floor_x.map(|f| f + h.top_x), h.floor_x.map(|f| f + a.top_x));
    for (&(b, xa), u) in &a.terms {
        for (&(zi, xj), v) in &h.terms {
            // x^xa (z + d_x)^b applied to x^xj z^zi
            let mut k = 0usize;
            loop {
                let zp = zi + b - k as i64;
                let xp = xa + xj - k as i64;
                let c = binomial::<F>(b, k) * falling::<F>(xj, k);
                if zp < -depth || xp < -depth {
                    if !c.is_zero() {
                        out.add_term(zp, xp, c * u.clone() * v.clone());
                    }
                    break;
                }
                if c.is_zero() && (xj >= 0 && k as i64 > xj || b >= 0 && k as i64 > b) {
                    break;
                }
                out.add_term(zp, xp, c * u.clone() * v.clone());
                k += 1;
            }
        }
    }
    out.top_d = a.top_d + h.top_d;
    out.top_x = a.top_x + h.top_x;
    FormalWave { coeffs: out }
}

/// `L(z) . e^{xz}` for an operator written in `z`: each `z^j d_z^i` gives
/// `x^i z^j e^{xz}`.
pub fn z_operator_on_exponential<F: Field>(l: &PsdoTrunc<F>) -> FormalWave<F> {
    // the z-power is the first index of the wave, the x-power the second
    FormalWave { coeffs: l.b() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;
    use crate::Rational;

    type T = PsdoTrunc<Rational>;

    fn t(depth: usize, terms: &[((i64, i64), i64)]) -> T {
        T::from_terms(depth, terms.iter().map(|&(k, c)| (k, rat(c, 1))))
    }

    #[test]
    fn small_products() {
        let dinv = T::monomial(8, -1, 0);
        let d = T::monomial(8, 1, 0);
        let x = T::monomial(8, 0, 1);
        assert!(dinv.mul(&d).agrees_with(&T::one(8)));
        // d^{-1} x = x d^{-1} - d^{-2}
        let p = dinv.mul(&x);
        assert_eq!(p.coeff(-1, 1), rat(1, 1));
        assert_eq!(p.coeff(-2, 0), rat(-1, 1));
        assert_eq!(p.len(), 2);
        // multiplying back by d recovers x
        assert!(d.mul(&p).agrees_with(&x));
    }

    #[test]
    fn differential_operators_multiply_as_usual() {
        // (x d)(x d) = x^2 d^2 + x d
        let xd = t(6, &[((1, 1), 1)]);
        let sq = xd.mul(&xd);
        assert!(sq.agrees_with(&t(6, &[((2, 2), 1), ((1, 1), 1)])));
        assert_eq!(sq.floor_d(), None);
    }

    #[test]
    fn b_examples() {
        let x = T::monomial(6, 0, 1);
        assert!(x.b().agrees_with(&T::monomial(6, 1, 0)));
        let xd = t(6, &[((1, 1), 1)]);
        assert!(xd.b().agrees_with(&xd));
        let k = t(6, &[((0, 0), 1), ((-1, -1), -1)]);
        assert!(k.b().agrees_with(&k));
    }

    #[test]
    fn plus_projection() {
        let a = t(6, &[((1, 0), 1), ((-1, 0), 1)]);
        assert!(a.plus().agrees_with(&T::monomial(6, 1, 0)));
        assert!(t(6, &[((-1, 1), 1)]).plus().is_empty());
    }

    #[test]
    fn inverse_examples() {
        assert!(T::one(6).inverse().unwrap().agrees_with(&T::one(6)));
        let k = t(10, &[((0, 0), 1), ((-1, -1), -1)]);
        let ki = k.inverse().unwrap();
        let prod = k.mul(&ki);
        assert!(prod.agrees_with(&T::one(10)));
        assert!(prod.common_depth(&T::one(10)) >= 9);
        assert!(ki.inverse().unwrap().agrees_with(&k));
        assert!(t(6, &[((0, 0), 2)]).inverse().is_err());
    }

    #[test]
    fn wave_action() {
        let e = FormalWave::exponential(6);
        let d = T::monomial(6, 1, 0);
        assert!(wave_apply(&d, &e).coeffs.agrees_with(&T::monomial(6, 1, 0)));
        // d^{-1} on e^{xz} x = e^{xz}(x z^{-1} - z^{-2})
        let w = FormalWave {
            coeffs: T::monomial(6, 0, 1),
        };
        let r = wave_apply(&T::monomial(6, -1, 0), &w);
        assert_eq!(r.coeff(-1, 1), rat(1, 1));
        assert_eq!(r.coeff(-2, 0), rat(-1, 1));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::sample;
    use crate::Rational;
    use proptest::prelude::*;
    use rand::Rng;

    fn random(seed: u64, terms: usize, depth: usize) -> PsdoTrunc<Rational> {
        let mut rng = sample::rng(seed);
        let t: Vec<_> = (0..terms)
            .map(|_| {
                (
                    (rng.gen_range(-4..=2), rng.gen_range(-4..=2)),
                    sample::small_rational(&mut rng),
                )
            })
            .collect();
        PsdoTrunc::from_terms(depth, t)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn associative(s in any::<u64>()) {
            let (a, b, c) = (random(s, 4, 10), random(s ^ 1, 4, 10), random(s ^ 2, 4, 10));
            let l = a.mul(&b).mul(&c);
            let r = a.mul(&b.mul(&c));
            prop_assert!(l.agrees_with(&r));
        }

        #[test]
        fn b_is_an_involutive_anti_automorphism(s in any::<u64>()) {
            let (a, b) = (random(s, 5, 10), random(s ^ 7, 5, 10));
            prop_assert!(a.mul(&b).b().agrees_with(&b.b().mul(&a.b())));
            prop_assert!(a.b().b().agrees_with(&a));
        }

        #[test]
        fn calculation_rule(s in any::<u64>()) {
            // L(x) . e^{xz} = b(L)(z) . e^{xz}
            let l = random(s, 20, 10);
            let lhs = wave_apply(&l, &FormalWave::exponential(10));
            let rhs = z_operator_on_exponential(&l.b());
            prop_assert!(lhs.coeffs.agrees_with(&rhs.coeffs));
        }

        #[test]
        fn action_is_a_module_action(s in any::<u64>()) {
            let (a, b) = (random(s, 4, 10), random(s ^ 3, 4, 10));
            let w = FormalWave { coeffs: random(s ^ 5, 4, 10) };
            let l = wave_apply(&a.mul(&b), &w);
            let r = wave_apply(&a, &wave_apply(&b, &w));
            prop_assert!(l.coeffs.agrees_with(&r.coeffs));
        }
    }
}
