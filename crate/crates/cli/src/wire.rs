//! JSON encodings. Exact scalars are strings `"p/q"`, Gaussian rationals
//! `{"re": .., "im": ..}`, approximate scalars `[re, im]`.

use num_complex::Complex64;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use weylcm::adelic::{GrPoint, LocalCondition, PrimaryDecomposable};
use weylcm::baker::{BakerFunction, BiPoly};
use weylcm::cmspace::{CMPoint, GWord};
use weylcm::exactnum::ratfunc::RatFunc;
use weylcm::exactnum::scalar::Scalar;
use weylcm::exactnum::{Matrix, Poly};
use weylcm::psdo::PsdoTrunc;
use weylcm::weylops::diffop::DiffOperator;
use weylcm::weylops::endo::EndoSpec;
use weylcm::{GaussianRational, Rational};

pub type WireResult<T> = std::result::Result<T, String>;

pub trait WireScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> WireResult<Self>;
}

fn parse_rational(s: &str) -> WireResult<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| format!("bad rational {s:?}: {e}"))
}

impl WireScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> WireResult<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
            Value::Object(_) => {
                let g = GaussianRational::from_json(v)?;
                if g.im.is_zero() {
                    Ok(g.re)
                } else {
                    Err(format!("expected a rational, found {v}"))
                }
            }
            _ => Err(format!("expected an exact scalar \"p/q\", found {v}")),
        }
    }
}

impl WireScalar for GaussianRational {
    fn to_json(&self) -> Value {
        json!({"re": self.re.to_string(), "im": self.im.to_string()})
    }

    fn from_json(v: &Value) -> WireResult<Self> {
        match v {
            Value::Object(m) => {
                let part = |k: &str| m.get(k).map_or(Ok(Rational::zero()), Rational::from_json);
                Ok(GaussianRational::new(part("re")?, part("im")?))
            }
            _ => Ok(GaussianRational::new(Rational::from_json(v)?, Rational::zero())),
        }
    }
}

impl WireScalar for Complex64 {
    fn to_json(&self) -> Value {
        json!([self.re, self.im])
    }

    fn from_json(v: &Value) -> WireResult<Self> {
        match v {
            Value::Array(a) if a.len() == 2 => {
                let f = |x: &Value| x.as_f64().ok_or_else(|| format!("expected a number, found {x}"));
                Ok(Complex64::new(f(&a[0])?, f(&a[1])?))
            }
            Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
            _ => Ok(GaussianRational::from_json(v)?.to_c64()),
        }
    }
}

/// The narrowest scalar field able to hold every scalar in a document.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ScalarKind {
    Rational,
    Gaussian,
    Approx,
}

pub fn scalar_kind(v: &Value) -> ScalarKind {
    match v {
        Value::Number(n) if !n.is_i64() => ScalarKind::Approx,
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) && a.iter().any(|x| !x.is_i64()) => {
            ScalarKind::Approx
        }
        Value::Array(a) => a.iter().map(scalar_kind).max().unwrap_or(ScalarKind::Rational),
        Value::Object(m) if m.contains_key("re") => {
            let im_zero = m.get("im").is_none_or(|im| Rational::from_json(im).is_ok_and(|r| r.is_zero()));
            if im_zero {
                ScalarKind::Rational
            } else {
                ScalarKind::Gaussian
            }
        }
        Value::Object(m) => m.values().map(scalar_kind).max().unwrap_or(ScalarKind::Rational),
        _ => ScalarKind::Rational,
    }
}

pub fn field<'a>(v: &'a Value, key: &str) -> WireResult<&'a Value> {
    v.get(key).ok_or_else(|| format!("missing field {key:?}"))
}

fn array(v: &Value) -> WireResult<&Vec<Value>> {
    v.as_array().ok_or_else(|| format!("expected an array, found {v}"))
}

fn uint(v: &Value) -> WireResult<usize> {
    v.as_u64().map(|u| u as usize).ok_or_else(|| format!("expected a nonnegative integer, found {v}"))
}

fn int(v: &Value) -> WireResult<i64> {
    v.as_i64().ok_or_else(|| format!("expected an integer, found {v}"))
}

pub fn poly_to<F: WireScalar>(p: &Poly<F>) -> Value {
    Value::Array(p.coeffs().iter().map(WireScalar::to_json).collect())
}

pub fn poly_from<F: WireScalar>(v: &Value) -> WireResult<Poly<F>> {
    Ok(Poly::new(array(v)?.iter().map(F::from_json).collect::<WireResult<_>>()?))
}

pub fn matrix_to<F: WireScalar>(m: &Matrix<F>) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(WireScalar::to_json).collect()))
            .collect(),
    )
}

pub fn matrix_from<F: WireScalar>(v: &Value) -> WireResult<Matrix<F>> {
    let rows = array(v)?
        .iter()
        .map(|r| array(r)?.iter().map(F::from_json).collect::<WireResult<Vec<F>>>())
        .collect::<WireResult<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, 0));
    }
    Matrix::from_rows(rows).map_err(|e| e.to_string())
}

pub fn point_to<F: WireScalar>(p: &CMPoint<F>) -> Value {
    json!({"x": matrix_to(p.x()), "y": matrix_to(p.y())})
}

/// Unvalidated pair; callers decide whether to check the rank condition.
pub fn point_from<F: WireScalar>(v: &Value) -> WireResult<CMPoint<F>> {
    let x = matrix_from(field(v, "x")?)?;
    let y = matrix_from(field(v, "y")?)?;
    if !x.is_square() || x.rows() != y.rows() || x.cols() != y.cols() {
        return Err("x and y must be square matrices of equal size".into());
    }
    Ok(CMPoint::new_unchecked(x, y))
}

pub fn word_to<F: WireScalar>(w: &GWord<F>) -> Value {
    Value::Array(
        w.steps()
            .iter()
            .map(|s| match s {
                EndoSpec::Phi(p) => json!({"op": "phi", "poly": poly_to(p)}),
                EndoSpec::Psi(q) => json!({"op": "psi", "poly": poly_to(q)}),
                other => json!({"op": format!("{other:?}")}),
            })
            .collect(),
    )
}

pub fn word_from<F: WireScalar>(v: &Value) -> WireResult<GWord<F>> {
    let steps = array(v)?
        .iter()
        .map(|s| {
            let p = poly_from(field(s, "poly")?)?;
            match field(s, "op")?.as_str() {
                Some("phi") => Ok(EndoSpec::Phi(p)),
                Some("psi") => Ok(EndoSpec::Psi(p)),
                _ => Err(format!("word steps are phi or psi, found {s}")),
            }
        })
        .collect::<WireResult<Vec<_>>>()?;
    GWord::new(steps).map_err(|e| e.to_string())
}

pub fn ratfunc_to<F: WireScalar>(f: &RatFunc<F>) -> Value {
    json!({"numerator": poly_to(f.num()), "denominator": poly_to(f.den())})
}

pub fn op_to<F: WireScalar>(d: &DiffOperator<F>) -> Value {
    Value::Array(
        d.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| {
                let mut m = Map::new();
                m.insert("dOrder".into(), json!(i));
                m.insert("coeffPoly".into(), poly_to(a.num()));
                if a.den() != &Poly::one() {
                    m.insert("coeffDen".into(), poly_to(a.den()));
                }
                Value::Object(m)
            })
            .collect(),
    )
}

pub fn op_from<F: WireScalar>(v: &Value) -> WireResult<DiffOperator<F>> {
    let mut coeffs: Vec<RatFunc<F>> = Vec::new();
    for t in array(v)? {
        let i = uint(field(t, "dOrder")?)?;
        let num = poly_from(field(t, "coeffPoly")?)?;
        let den = match t.get("coeffDen") {
            Some(d) => poly_from(d)?,
            None => Poly::one(),
        };
        if den.is_zero() {
            return Err("zero coefficient denominator".into());
        }
        if coeffs.len() <= i {
            coeffs.resize(i + 1, RatFunc::zero());
        }
        coeffs[i] = coeffs[i].clone() + RatFunc::new(num, den);
    }
    Ok(DiffOperator::new(coeffs))
}

pub fn ops_from<F: WireScalar>(v: &Value) -> WireResult<Vec<DiffOperator<F>>> {
    array(v)?.iter().map(op_from).collect()
}

pub fn ops_to<F: WireScalar>(ops: &[DiffOperator<F>]) -> Value {
    Value::Array(ops.iter().map(op_to).collect())
}

fn grid_to<F: WireScalar>(b: &BiPoly<F>) -> Value {
    Value::Array(
        b.grid()
            .iter()
            .map(|r| Value::Array(r.iter().map(WireScalar::to_json).collect()))
            .collect(),
    )
}

fn grid_from<F: WireScalar>(v: &Value) -> WireResult<BiPoly<F>> {
    let grid = array(v)?
        .iter()
        .map(|r| array(r)?.iter().map(F::from_json).collect::<WireResult<Vec<F>>>())
        .collect::<WireResult<Vec<_>>>()?;
    Ok(BiPoly::from_grid(grid))
}

/// Grids are indexed `[x power][z power]`.
pub fn baker_to<F: WireScalar>(b: &BakerFunction<F>) -> Value {
    json!({
        "numerator": grid_to(&b.num),
        "denominator": grid_to(&b.denominator()),
        "denX": poly_to(&b.den_x),
        "denZ": poly_to(&b.den_z),
    })
}

pub fn baker_from<F: WireScalar>(v: &Value) -> WireResult<BakerFunction<F>> {
    Ok(BakerFunction {
        num: grid_from(field(v, "numerator")?)?,
        den_x: poly_from(field(v, "denX")?)?,
        den_z: poly_from(field(v, "denZ")?)?,
    })
}

pub fn psdo_to<F: WireScalar>(p: &PsdoTrunc<F>) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(&(i, j), c)| json!({"i": i, "j": j, "coeff": c.to_json()}))
        .collect();
    json!({
        "depth": p.depth(),
        "floorD": p.floor_d(),
        "floorX": p.floor_x(),
        "topD": p.top_d(),
        "topX": p.top_x(),
        "terms": terms,
    })
}

pub fn psdo_from<F: WireScalar>(v: &Value) -> WireResult<PsdoTrunc<F>> {
    let depth = uint(field(v, "depth")?)?;
    let terms = array(field(v, "terms")?)?
        .iter()
        .map(|t| Ok(((int(field(t, "i")?)?, int(field(t, "j")?)?), F::from_json(field(t, "coeff")?)?)))
        .collect::<WireResult<Vec<_>>>()?;
    let opt = |k: &str| v.get(k).filter(|x| !x.is_null()).map(int).transpose();
    let mut out = PsdoTrunc::from_terms(depth, terms).with_floors(opt("floorD")?, opt("floorX")?);
    if let (Some(d), Some(x)) = (opt("topD")?, opt("topX")?) {
        out = out.with_tops(d, x);
    }
    Ok(out)
}

pub fn pd_to<F: WireScalar>(v: &PrimaryDecomposable<F>) -> Value {
    let points: Vec<Value> = v
        .points()
        .iter()
        .map(|p| {
            json!({
                "lambda": p.lambda().to_json(),
                "r": p.r(),
                "S": matrix_to(p.basis()),
            })
        })
        .collect();
    json!({"points": points})
}

pub fn pd_from<F: WireScalar>(v: &Value) -> WireResult<PrimaryDecomposable<F>> {
    let points = array(field(v, "points")?)?
        .iter()
        .map(|p| {
            let lambda = F::from_json(field(p, "lambda")?)?;
            let r = uint(field(p, "r")?)?;
            let rows = array(field(p, "S")?)?
                .iter()
                .map(|row| array(row)?.iter().map(F::from_json).collect::<WireResult<Vec<F>>>())
                .collect::<WireResult<Vec<_>>>()?;
            LocalCondition::new(lambda, r, rows).map_err(|e| e.to_string())
        })
        .collect::<WireResult<Vec<_>>>()?;
    PrimaryDecomposable::new(points).map_err(|e| e.to_string())
}

/// `W = m^{-1} V`.
pub fn gr_to<F: WireScalar>(w: &GrPoint<F>) -> Value {
    json!({"m": poly_to(&w.m), "V": pd_to(&w.v)})
}

pub fn gr_from<F: WireScalar>(v: &Value) -> WireResult<GrPoint<F>> {
    let m: Poly<F> = poly_from(field(v, "m")?)?;
    if m.is_zero() {
        return Err("m must be nonzero".into());
    }
    Ok(GrPoint {
        m,
        v: pd_from(field(v, "V")?)?,
    })
}

pub fn checked_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}
