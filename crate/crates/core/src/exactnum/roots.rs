use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactnum::matrix::Matrix;
use crate::exactnum::numeric::eig_approx;
use crate::exactnum::poly::Poly;
use crate::exactnum::scalar::Scalar;

/// Complex roots of a nonzero polynomial, with multiplicity, via the
/// companion matrix.
pub fn roots_approx<F: Scalar>(p: &Poly<F>) -> Result<Vec<Complex64>> {
    let Some(d) = p.degree() else {
        return Err(Error::InvalidInput("roots of the zero polynomial".into()));
    };
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = p.lead().to_c64();
    let c: Vec<Complex64> = p.coeffs().iter().map(|a| a.to_c64() / lead).collect();
    let comp = Matrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -c[i]
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(eig_approx(&comp, 0.0)?.values)
}

/// Exact roots with multiplicities of a polynomial that splits over `F`.
/// Candidates come from the numeric roots of the squarefree part and are
/// verified exactly; anything left unexplained is reported as [`Error::NotSplit`].
pub fn split_roots<F: Scalar>(p: &Poly<F>) -> Result<Vec<(F, usize)>> {
    if !F::EXACT {
        return Err(Error::InvalidInput("exact root splitting needs an exact field".into()));
    }
    if p.is_zero() {
        return Err(Error::InvalidInput("roots of the zero polynomial".into()));
    }
    let sf = p.squarefree();
    let mut rest = sf.monic();
    let mut out: Vec<(F, usize)> = Vec::new();
    for z in roots_approx(&sf)? {
        let Some(r) = F::rationalize(z) else { continue };
        if out.iter().any(|(s, _)| *s == r) {
            continue;
        }
        if rest.eval(&r).is_zero() {
            rest = rest.div_rem(&Poly::linear(r.clone())).0;
            let mult = p.order_at(&r);
            out.push((r, mult));
        }
    }
    if rest.deg() > 0 {
        return Err(Error::NotSplit(format!(
            "factor of degree {} has no exact roots in the field",
            rest.deg()
        )));
    }
    Ok(out)
}
