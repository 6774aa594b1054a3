use num_complex::Complex64;
use serde_json::{json, Value};

use weylcm::adelic::{
    alpha_slice, baker_from_gr, c_action_check, class_equal, duv_contains, duv_solve, e_map,
    gr_canonical, gr_duv, gr_equal, gr_from_baker, GrPoint, IdealSlice,
};
use weylcm::baker::{
    baker_bispectral_check, baker_flow_check, baker_poly_flow_check, baker_reduced, baker_subspace,
};
use weylcm::cmspace::{cm_act, CMPoint};
use weylcm::exactnum::numeric::singular_values;
use weylcm::exactnum::Poly;
use weylcm::psdo::{keylem_window, keylem_with, kprop_for_point, kw_from_baker, kw_from_point, Membership, PsdoTrunc};
use weylcm::suite::{run_criterion, Mutation, SuiteConfig, CRITERIA};
use weylcm::transitivity::{normal_form, NormalFormOptions};
use weylcm::weylops::diffop::DiffOperator;
use weylcm::{Error, GaussianRational, Rational};

use crate::wire::*;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Invalid = 2,
    Inconclusive = 3,
}

#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub code: &'static str,
    pub message: String,
}

impl Failure {
    pub fn parse(message: impl Into<String>) -> Self {
        Failure {
            status: Status::Invalid,
            code: "parse_error",
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": self.code, "message": self.message})
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (status, code) = match &e {
            Error::InvalidInput(_) => (Status::Invalid, "invalid_input"),
            Error::RankViolation { .. } => (Status::Invalid, "rank_violation"),
            Error::ExcludedPoint(_) => (Status::Invalid, "excluded_point"),
            Error::NotSplit(_) => (Status::Invalid, "not_split"),
            Error::NoStabilization { .. } => (Status::Inconclusive, "no_stabilization"),
            Error::Truncation(_) => (Status::Inconclusive, "truncation"),
            Error::EigenCollision { .. } => (Status::Fail, "eigen_collision"),
            Error::SearchExhausted { .. } => (Status::Fail, "search_exhausted"),
            Error::Conditioning(_) => (Status::Fail, "ill_conditioned"),
            _ => (Status::Fail, "computation_failed"),
        };
        Failure {
            status,
            code,
            message: e.to_string(),
        }
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::parse(s)
    }
}

pub type Outcome = std::result::Result<(Value, Status), Failure>;

fn verdict(passed: bool) -> Status {
    if passed {
        Status::Pass
    } else {
        Status::Fail
    }
}

// ---- cm

pub fn cm_check(doc: &Value, rank_tol: f64) -> Outcome {
    match scalar_kind(doc) {
        ScalarKind::Rational => cm_check_in::<Rational>(doc, rank_tol),
        ScalarKind::Gaussian => cm_check_in::<GaussianRational>(doc, rank_tol),
        ScalarKind::Approx => cm_check_in::<Complex64>(doc, rank_tol),
    }
}

fn cm_check_in<F: WireScalar>(doc: &Value, rank_tol: f64) -> Outcome {
    let pt: CMPoint<F> = point_from(doc)?;
    let rank = pt.defect_rank(rank_tol);
    let sv: Vec<Value> = singular_values(&pt.defect()).into_iter().map(checked_f64).collect();
    let valid = rank <= 1;
    Ok((
        json!({
            "valid": valid,
            "n": pt.n(),
            "exact": F::EXACT,
            "defectRank": rank,
            "singularValues": sv,
            "bounds": {"rankTol": rank_tol},
        }),
        verdict(valid),
    ))
}

pub fn cm_act_cmd(doc: &Value) -> Outcome {
    match scalar_kind(doc) {
        ScalarKind::Rational => cm_act_in::<Rational>(doc),
        ScalarKind::Gaussian => cm_act_in::<GaussianRational>(doc),
        ScalarKind::Approx => cm_act_in::<Complex64>(doc),
    }
}

fn cm_act_in<F: WireScalar>(doc: &Value) -> Outcome {
    let pt: CMPoint<F> = point_from(field(doc, "point")?)?;
    let word = word_from::<F>(field(doc, "word")?)?;
    let out = cm_act(&word, &pt);
    Ok((json!({"point": point_to(&out)}), Status::Pass))
}

pub fn cm_normal_form(doc: &Value, seed: u64, residual_tol: f64) -> Outcome {
    let pt: CMPoint<Complex64> = point_from(doc)?;
    let opts = NormalFormOptions {
        seed,
        residual_tol,
        ..NormalFormOptions::default()
    };
    let cert = normal_form(&pt, &opts)?;
    let passed = cert.residual <= residual_tol && cert.word.len() <= 3;
    Ok((
        json!({
            "word": word_to(&cert.word),
            "conjugator": matrix_to(&cert.g),
            "residual": checked_f64(cert.residual),
            "passed": passed,
            "seed": seed,
            "bounds": {"residualTol": residual_tol},
        }),
        verdict(passed),
    ))
}

// ---- baker

fn rational_point(doc: &Value) -> std::result::Result<CMPoint<Rational>, Failure> {
    if scalar_kind(doc) != ScalarKind::Rational {
        return Err(Failure::parse("this command needs exact rational matrices"));
    }
    Ok(point_from(doc)?)
}

pub fn baker_eval(doc: &Value) -> Outcome {
    let b = baker_reduced(&rational_point(doc)?)?;
    Ok((baker_to(&b), Status::Pass))
}

fn check_doc(c: weylcm::Check) -> Outcome {
    Ok((json!({"passed": c.passed, "detail": c.detail}), verdict(c.passed)))
}

pub fn baker_bispectral(doc: &Value) -> Outcome {
    check_doc(baker_bispectral_check(&rational_point(doc)?)?)
}

pub fn baker_flow(doc: &Value, s: &str, q: Option<&str>) -> Outcome {
    let pt = rational_point(doc)?;
    let s = Rational::from_json(&Value::String(s.into()))?;
    let mut out = baker_flow_check(&pt, &s)?;
    if let Some(q) = q {
        let qv: Value = serde_json::from_str(q).map_err(|e| Failure::parse(format!("--q: {e}")))?;
        let c = baker_poly_flow_check(&pt, &poly_from(&qv)?)?;
        out = weylcm::Check::new(out.passed && c.passed, format!("{}; {}", out.detail, c.detail));
    }
    check_doc(out)
}

pub fn baker_subspace_cmd(doc: &Value, x0: &str, count: usize) -> Outcome {
    let pt = rational_point(doc)?;
    let x0 = Rational::from_json(&Value::String(x0.into()))?;
    let fs = baker_subspace(&pt, &x0, count)?;
    let fs: Vec<Value> = fs.iter().map(ratfunc_to).collect();
    Ok((json!({"functions": fs, "x0": x0.to_json(), "bounds": {"count": count}}), Status::Pass))
}

// ---- gr

/// A point of the Grassmannian given as `{m, V}`, as a bare primary
/// decomposable space (with its canonical `m`), or as a CM pair.
pub fn w_like(doc: &Value, degree: usize) -> std::result::Result<GrPoint<Rational>, Failure> {
    if doc.get("V").is_some() {
        Ok(gr_from(doc)?)
    } else if doc.get("points").is_some() {
        Ok(gr_canonical(&pd_from(doc)?))
    } else if doc.get("x").is_some() {
        Ok(gr_from_baker(&baker_reduced(&rational_point(doc)?)?, degree)?)
    } else {
        Err(Failure::parse("expected {m, V}, {points} or {x, y}"))
    }
}

/// Parses and echelonizes a point; bare spaces get their canonical `m`.
pub fn gr_canon(doc: &Value, degree: usize) -> Outcome {
    Ok((gr_to(&w_like(doc, degree)?), Status::Pass))
}

pub fn gr_class_equal(doc: &Value, degree: usize) -> Outcome {
    let (u, v) = (field(doc, "U")?, field(doc, "V")?);
    let equal = if u.get("points").is_some() && v.get("points").is_some() {
        class_equal(&pd_from::<Rational>(u)?, &pd_from(v)?)
    } else {
        gr_equal(&w_like(u, degree)?, &w_like(v, degree)?)?
    };
    Ok((json!({"equal": equal}), Status::Pass))
}

pub fn gr_duv_cmd(doc: &Value, order: usize, coeff_degree: usize, degree: usize) -> Outcome {
    let (u, v) = (field(doc, "U")?, field(doc, "V")?);
    let bounds = json!({"order": order, "coeffDegree": coeff_degree});
    if u.get("points").is_some() && v.get("points").is_some() {
        let delta = match doc.get("delta") {
            Some(d) => poly_from(d)?,
            None => Poly::from_i64s(&[1]),
        };
        if delta.is_zero() {
            return Err(Failure::parse("delta must be nonzero"));
        }
        let s = duv_solve(&pd_from::<Rational>(u)?, &pd_from(v)?, order, coeff_degree, &delta)?;
        return Ok((json!({"basis": ops_to(&s.ops), "delta": poly_to(&s.delta), "bounds": bounds}), Status::Pass));
    }
    let (wu, wv) = (w_like(u, degree)?, w_like(v, degree)?);
    let window = IdealSlice::window(order, coeff_degree + wv.m.deg().max(0) as usize, &wv.m);
    let basis = gr_duv(&window, &wu, &wv)?;
    Ok((json!({"basis": ops_to(&basis), "delta": poly_to(&wv.m), "bounds": bounds}), Status::Pass))
}

pub fn gr_alpha(doc: &Value, order: Option<usize>, coeff_degree: Option<usize>, degree: usize) -> Outcome {
    let w = w_like(doc, degree)?;
    let r = w.v.points().iter().map(|p| p.r()).max().unwrap_or(0);
    let order = order.unwrap_or(r);
    let coeff_degree = coeff_degree.unwrap_or(w.v.conductor().deg().max(0) as usize + r);
    let s = alpha_slice(&w, order, coeff_degree)?;
    Ok((
        json!({
            "ops": ops_to(&s.ops),
            "delta": poly_to(&s.delta),
            "bounds": {"order": order, "coeffDegree": coeff_degree},
        }),
        Status::Pass,
    ))
}

pub fn gr_e(doc: &Value, degree: usize) -> Outcome {
    let ops: Vec<DiffOperator<Rational>> = ops_from(field(doc, "ops")?)?;
    if ops.is_empty() {
        return Err(Failure::parse("the slice needs at least one operator"));
    }
    let order = ops.iter().filter_map(DiffOperator::order).max().unwrap_or(0);
    let delta = ops.iter().fold(Poly::from_i64s(&[1]), |acc, d| acc.lcm(&d.common_denominator().0));
    let slice = IdealSlice {
        ops,
        order,
        degree: 0,
        delta,
    };
    let w = e_map(&slice, degree)?;
    Ok((json!({"point": gr_to(&w), "bounds": {"degree": degree}}), Status::Pass))
}

pub fn gr_c_check(doc: &Value, order: usize, coeff_degree: usize, degree: usize) -> Outcome {
    let w = w_like(doc, degree)?;
    let r = c_action_check(&w, order, coeff_degree)?;
    Ok((
        json!({
            "passed": r.passed,
            "dual": gr_to(&r.dual),
            "rDim": r.r_dim,
            "clDim": r.cl_dim,
            "windowDim": r.window_dim,
            "bounds": {"order": order, "coeffDegree": coeff_degree},
        }),
        verdict(r.passed),
    ))
}

// ---- psdo

fn wave_operator(doc: &Value, depth: usize, degree: usize) -> std::result::Result<PsdoTrunc<Rational>, Failure> {
    if doc.get("x").is_some() {
        Ok(kw_from_point(&rational_point(doc)?, depth)?)
    } else {
        Ok(kw_from_baker(&baker_from_gr(&w_like(doc, degree)?)?, depth))
    }
}

pub fn psdo_kw(doc: &Value, depth: usize, degree: usize) -> Outcome {
    let k = wave_operator(doc, depth, degree)?;
    Ok((psdo_to(&k), Status::Pass))
}

pub fn psdo_keylem(doc: &Value, floor: usize, degree: usize) -> Outcome {
    let d: DiffOperator<Rational> = op_from(field(doc, "D")?)?;
    let (u, v) = (field(doc, "U")?, field(doc, "V")?);
    let depth = keylem_window(&d, floor);
    let k_u = wave_operator(u, depth, degree)?;
    let k_v = wave_operator(v, depth, degree)?;
    let result = keylem_with(&d, &k_u, &k_v.inverse()?, floor);
    let exact = duv_contains(&d, &w_like(u, degree)?, &w_like(v, degree)?)?;
    let (name, status, extra) = match result {
        Membership::Member { depth } => ("member", Status::Pass, json!({"depth": depth})),
        Membership::NotMember { order, x_power } => {
            ("not_member", Status::Pass, json!({"order": order, "xPower": x_power}))
        }
        Membership::Inconclusive { depth } => ("inconclusive", Status::Inconclusive, json!({"depth": depth})),
    };
    let agrees = match result {
        Membership::Inconclusive { .. } => Value::Null,
        Membership::Member { .. } => json!(exact),
        Membership::NotMember { .. } => json!(!exact),
    };
    Ok((
        json!({
            "verdict": name,
            "witness": extra,
            "exact": exact,
            "agrees": agrees,
            "bounds": {"floor": floor, "window": depth},
        }),
        status,
    ))
}

pub fn psdo_kprop(
    doc: &Value,
    order: usize,
    coeff_degree: usize,
    floor: usize,
    degree: usize,
) -> Outcome {
    let w = w_like(doc, degree)?;
    let r = kprop_for_point(&w, order, coeff_degree, floor, degree)?;
    let elements: Vec<Value> = r
        .elements
        .iter()
        .map(|e| json!({"differential": e.differential, "member": e.member, "depth": e.depth}))
        .collect();
    Ok((
        json!({
            "passed": r.passed,
            "minDepth": r.min_depth,
            "elements": elements,
            "bounds": {"order": order, "coeffDegree": coeff_degree, "floor": floor, "degree": degree},
        }),
        verdict(r.passed),
    ))
}

// ---- suite

pub fn suite_run(cfg: &SuiteConfig, only: Option<usize>) -> Outcome {
    let ids: Vec<usize> = match only {
        Some(id) if (1..=CRITERIA.len()).contains(&id) => vec![id],
        Some(id) => return Err(Failure::parse(format!("no criterion {id}"))),
        None => (1..=CRITERIA.len()).collect(),
    };
    let results: Vec<_> = ids.iter().map(|&id| run_criterion(id, cfg)).collect();
    let passed = results.iter().all(|r| r.passed);
    let criteria: Vec<Value> = results
        .iter()
        .map(|r| json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail}))
        .collect();
    Ok((
        json!({
            "passed": passed,
            "criteria": criteria,
            "seed": cfg.seed,
            "mutation": cfg.mutation.map(|m| match m { Mutation::PsiSignFlip => "psi-sign-flip" }),
            "bounds": {
                "rankTol": cfg.rank_tol,
                "residualTol": cfg.residual_tol,
                "floor": cfg.floor,
                "degree": cfg.degree,
            },
        }),
        verdict(passed),
    ))
}
