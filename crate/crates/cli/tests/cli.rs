use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::{json, Value};
use weylcm::cmspace::random_point;
use weylcm::psdo::kw_from_point;
use weylcm::{sample, Approx, Rational};
use weylcm_cli::wire::*;

fn run(args: &[&str], input: &Value) -> (i32, Value) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_weylcm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // commands that ignore stdin may exit before the write completes
    let _ = child.stdin.take().unwrap().write_all(input.to_string().as_bytes());
    let out = child.wait_with_output().unwrap();
    let code = out.status.code().unwrap();
    let text = if out.stdout.is_empty() { out.stderr } else { out.stdout };
    (code, serde_json::from_slice(&text).unwrap_or(Value::Null))
}

fn base2() -> Value {
    json!({"x": [["0", "0"], ["-1", "0"]], "y": [["0", "1"], ["0", "0"]]})
}

fn p00() -> Value {
    json!({"x": [["0"]], "y": [["0"]]})
}

fn model() -> Value {
    json!({"points": [{"lambda": "0", "r": 2, "S": [["1", "0"]]}]})
}

#[test]
fn cm_examples() {
    let (code, out) = run(&["cm", "check"], &base2());
    assert_eq!((code, &out["valid"]), (0, &json!(true)));

    let doc = json!({"point": base2(), "word": [{"op": "phi", "poly": ["0", "0", "1"]}]});
    let (code, out) = run(&["cm", "act"], &doc);
    assert_eq!(code, 0);
    assert_eq!(out["point"]["x"], json!([["0", "2"], ["-1", "0"]]));

    let (code, out) = run(&["cm", "normal-form", "--seed", "3"], &base2());
    assert_eq!(code, 0);
    assert_eq!(out["word"], json!([]));
    assert_eq!(out["seed"], json!(3));
}

#[test]
fn invalid_pair_fails_check() {
    let doc = json!({"x": [["1", "0"], ["0", "2"]], "y": [["0", "0"], ["0", "0"]]});
    let (code, out) = run(&["cm", "check"], &doc);
    assert_eq!((code, &out["defectRank"]), (1, &json!(2)));
}

#[test]
fn approximate_and_gaussian_inputs() {
    let doc = json!({"x": [[[0.5, 0.0]]], "y": [[[0.0, 1.0]]]});
    let (code, out) = run(&["cm", "check"], &doc);
    assert_eq!((code, &out["exact"]), (0, &json!(false)));
    let doc = json!({"x": [[{"re": "1", "im": "2"}]], "y": [["0"]]});
    let (code, out) = run(&["cm", "check"], &doc);
    assert_eq!((code, &out["exact"]), (0, &json!(true)));
}

#[test]
fn baker_examples() {
    let (code, out) = run(&["baker", "eval"], &p00());
    assert_eq!(code, 0);
    // xz - 1 over xz
    assert_eq!(out["numerator"], json!([["-1", "0"], ["0", "1"]]));
    assert_eq!(out["denominator"], json!([["0", "0"], ["0", "1"]]));
    let round = baker_from::<Rational>(&out).unwrap();
    assert_eq!(baker_to(&round), out);

    assert_eq!(run(&["baker", "bispectral"], &base2()).0, 0);
    assert_eq!(run(&["baker", "flow", "--s", "0"], &base2()).0, 0);
    assert_eq!(run(&["baker", "flow", "--s", "-2/3", "--q", "[\"0\",\"1\",\"1\"]"], &base2()).0, 0);
    let (code, out) = run(&["baker", "subspace", "--x0", "0"], &p00());
    assert_eq!((code, &out["error"]), (2, &json!("excluded_point")));
}

#[test]
fn gr_examples() {
    let doc = json!({"U": {"points": []}, "V": model()});
    let (code, out) = run(&["gr", "duv", "--order", "1", "--coeff-degree", "2"], &doc);
    assert_eq!(code, 0);
    let basis = ops_from::<Rational>(&out["basis"]).unwrap();
    let op = |s: Value| op_from::<Rational>(&s).unwrap();
    let expect = vec![
        op(json!([{"dOrder": 0, "coeffPoly": ["0", "0", "1"]}])),
        op(json!([{"dOrder": 1, "coeffPoly": ["0", "0", "1"]}])),
        op(json!([{"dOrder": 0, "coeffPoly": ["1"]}, {"dOrder": 1, "coeffPoly": ["0", "-1"]}])),
    ];
    assert!(weylcm::adelic::span_equal(&basis, &expect));

    let doc = json!({"U": {"points": []}, "V": {"points": [{"lambda": "0", "r": 1, "S": []}]}});
    let (code, out) = run(&["gr", "class-equal"], &doc);
    assert_eq!((code, &out["equal"]), (0, &json!(true)));
    let doc = json!({"U": {"points": []}, "V": model()});
    assert_eq!(run(&["gr", "class-equal"], &doc).1["equal"], json!(false));

    let (_, alpha) = run(&["gr", "alpha"], &model());
    let (code, e) = run(&["gr", "e"], &alpha);
    assert_eq!(code, 0);
    let (_, canon) = run(&["gr", "canon"], &model());
    assert_eq!(e["point"], canon);

    let (code, out) = run(&["gr", "c-check"], &model());
    assert_eq!((code, &out["passed"]), (0, &json!(true)));
}

#[test]
fn psdo_examples() {
    let (code, out) = run(&["psdo", "kw", "--depth", "6"], &p00());
    assert_eq!(code, 0);
    let terms: Vec<(i64, i64, String)> = out["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["i"].as_i64().unwrap(), t["j"].as_i64().unwrap(), t["coeff"].as_str().unwrap().into()))
        .collect();
    assert_eq!(terms, vec![(-1, -1, "-1".to_string()), (0, 0, "1".to_string())]);

    let z2 = json!([{"dOrder": 0, "coeffPoly": ["0", "0", "1"]}]);
    let one = json!([{"dOrder": 0, "coeffPoly": ["1"]}]);
    let (code, out) = run(&["psdo", "keylem"], &json!({"D": z2, "U": {"points": []}, "V": p00()}));
    assert_eq!((code, &out["verdict"], &out["agrees"]), (0, &json!("member"), &json!(true)));
    let (code, out) = run(&["psdo", "keylem"], &json!({"D": one, "U": {"points": []}, "V": p00()}));
    assert_eq!((code, &out["verdict"], &out["agrees"]), (0, &json!("not_member"), &json!(true)));

    let (code, out) = run(&["psdo", "kprop"], &model());
    assert_eq!((code, &out["passed"]), (0, &json!(true)));
}

#[test]
fn exit_codes() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_weylcm"))
        .args(["cm", "check"])
        .stdin(Stdio::piped())
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"{not json").unwrap();
    assert_eq!(child.wait().unwrap().code(), Some(2));

    assert_eq!(run(&["cm", "act"], &json!({"point": base2()})).0, 2);
    // a slice too small for the span to stabilise is a truncation failure
    let (_, alpha) = run(&["gr", "alpha"], &model());
    let (code, out) = run(&["gr", "e", "--degree", "1"], &alpha);
    assert_eq!((code, &out["error"]), (3, &json!("no_stabilization")));
}

#[test]
fn suite_single_criteria_and_mutation() {
    let (code, out) = run(&["suite", "run", "--only", "2"], &Value::Null);
    assert_eq!((code, &out["passed"]), (0, &json!(true)));
    let (code, out) = run(&["suite", "run", "--only", "10", "--mutation", "psi-sign-flip"], &Value::Null);
    assert_eq!((code, &out["passed"]), (1, &json!(false)));
    let (code, _) = run(&["suite", "run", "--only", "10", "--seed", "99"], &Value::Null);
    assert_eq!(code, 0);
}

#[test]
fn commands_are_deterministic() {
    for args in [
        &["cm", "normal-form", "--seed", "5"][..],
        &["baker", "eval"][..],
        &["psdo", "kw"][..],
    ] {
        let doc = json!({"x": [["1", "2"], ["3", "-1"]], "y": [["0", "1/5"], ["-1/5", "0"]]});
        let doc = if args[0] == "cm" { doc } else { base2() };
        assert_eq!(run(args, &doc), run(args, &doc));
    }
}

fn reencode(v: &Value) -> String {
    serde_json::to_string(v).unwrap()
}

#[test]
fn exact_documents_round_trip() {
    let mut rng = sample::rng(17);
    for _ in 0..20 {
        let (pt, word) = random_point(&mut rng, 3, 2, 2);
        let doc = point_to(&pt);
        let text = reencode(&doc);
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(point_from::<Rational>(&back).unwrap(), pt);
        assert_eq!(reencode(&point_to(&point_from::<Rational>(&back).unwrap())), text);
        assert_eq!(reencode(&word_to(&word_from::<Rational>(&word_to(&word)).unwrap())), reencode(&word_to(&word)));

        let v = sample::primary_decomposable(&mut rng, 3, 3);
        assert_eq!(pd_from::<Rational>(&pd_to(&v)).unwrap(), v);
        let w = weylcm::adelic::gr_canonical(&v);
        assert!(gr_from::<Rational>(&gr_to(&w)).unwrap() == w);

        let d = sample::diff_operator(&mut rng, 3, 3);
        assert_eq!(op_from::<Rational>(&op_to(&d)).unwrap(), d);

        let k = kw_from_point(&pt, 4).unwrap();
        assert_eq!(reencode(&psdo_to(&psdo_from::<Rational>(&psdo_to(&k)).unwrap())), reencode(&psdo_to(&k)));
    }
    // rational coefficients
    let alpha = weylcm::adelic::alpha_slice(&weylcm::adelic::gr_canonical(&pd_from(&model()).unwrap()), 2, 3).unwrap();
    for d in &alpha.ops {
        assert_eq!(&op_from::<Rational>(&op_to(d)).unwrap(), d);
    }
}

#[test]
fn approximate_documents_round_trip() {
    let mut rng = sample::rng(23);
    let (pt, _) = random_point(&mut rng, 4, 3, 2);
    let a = pt.to_approx();
    let text = reencode(&point_to(&a));
    let back: weylcm::cmspace::CMPoint<Approx> = point_from(&serde_json::from_str(&text).unwrap()).unwrap();
    let err = back.x().sub(a.x()).max_abs() + back.y().sub(a.y()).max_abs();
    assert!(err <= 1e-12 * a.x().max_abs().max(1.0), "{err}");
}
