//! The acceptance suite: one seeded, exact (or tolerance-bounded) check per
//! property, shared by the test harness and the command line.

use std::time::Instant;

use num_traits::{One, Zero};
use rand::Rng;

use crate::adelic::{
    alpha_slice, baker_from_gr, c_action_check, duv_contains, e_map, gr_canonical, gr_duv,
    gr_equal, gr_from_baker, GrPoint, IdealSlice, LocalCondition, PrimaryDecomposable,
};
use crate::baker::{baker_bispectral_check, baker_flow_check, baker_poly_flow_check, baker_reduced};
use crate::cmspace::{
    cm_base_point, cm_invariants, cm_transpose_swap, invariant_discrepancy, phi_point,
    psi_point, random_point, CMPoint, GWord,
};
use crate::error::Result;
use crate::exactnum::poly::Poly;
use crate::exactnum::numeric::singular_values;
use crate::exactnum::scalar::{rat, Field, Scalar};
use crate::exactnum::series::series_exp;
use crate::psdo::{keylem_window, keylem_with, kprop_for_point, kw_from_baker, kw_from_point, Membership};
use crate::sample;
use crate::transitivity::{normal_form, NormalFormOptions};
use crate::weylops::diffop::DiffOperator;
use crate::weylops::endo::{endo_check_relations_with, psi, EndoSpec};
use crate::{Approx, Rational};

/// Deliberate defects, used to confirm that the suite notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// `Psi_q` replaced by `Psi_{-q}`, at matrix and operator level.
    PsiSignFlip,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub rank_tol: f64,
    pub residual_tol: f64,
    pub floor: usize,
    pub degree: usize,
    pub mutation: Option<Mutation>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 2024,
            rank_tol: 1e-8,
            residual_tol: 1e-6,
            floor: 8,
            degree: 12,
            mutation: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

pub const CRITERIA: [&str; 11] = [
    "rank invariance",
    "characteristic polynomial identity",
    "constructive transitivity",
    "bispectrality",
    "flow translation",
    "e after alpha round trip",
    "D(U,V) cross-validation",
    "wave operator of b(W)",
    "K_W b(L) in R_b(W)",
    "group identities",
    "residue pairing and c-action",
];

pub fn run_suite(cfg: &SuiteConfig) -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).map(|id| run_criterion(id, cfg)).collect()
}

pub fn all_passed(results: &[CriterionResult]) -> bool {
    results.iter().all(|r| r.passed)
}

/// Runs one criterion, numbered from 1. Errors count as failures.
pub fn run_criterion(id: usize, cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let seed = cfg.seed.wrapping_add(id as u64 * 1_000_003);
    let outcome = match id {
        1 => rank_invariance(seed, cfg),
        2 => char_poly_identity(seed),
        3 => transitivity(seed, cfg),
        4 => bispectrality(seed),
        5 => flow(seed),
        6 => round_trip(seed, cfg),
        7 => duv_cross_validation(seed, cfg),
        8 => wave_of_swap(seed, cfg),
        9 => kprop(),
        10 => group_identities(seed, cfg),
        11 => c_action(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name: CRITERIA.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

type Outcome = Result<(bool, String)>;

fn psi_point_under<F: Field>(cfg: &SuiteConfig, q: &Poly<F>, pt: &CMPoint<F>) -> CMPoint<F> {
    match cfg.mutation {
        Some(Mutation::PsiSignFlip) => psi_point(&-q, pt),
        None => psi_point(q, pt),
    }
}

fn random_word(rng: &mut impl Rng, len: usize, max_degree: usize) -> GWord<Rational> {
    let steps = (0..len)
        .map(|_| {
            let deg = rng.gen_range(1..=max_degree);
            let p = sample::poly_no_constant(rng, deg);
            if rng.gen_bool(0.5) {
                EndoSpec::Phi(p)
            } else {
                EndoSpec::Psi(p)
            }
        })
        .collect();
    GWord::new(steps).expect("nonconstant polynomials")
}

fn act_under<F: Field>(cfg: &SuiteConfig, w: &GWord<F>, pt: &CMPoint<F>) -> CMPoint<F> {
    w.steps().iter().fold(pt.clone(), |acc, s| match s {
        EndoSpec::Phi(p) => phi_point(p, &acc),
        EndoSpec::Psi(q) => psi_point_under(cfg, q, &acc),
        _ => unreachable!("words here hold only Phi and Psi"),
    })
}

fn rank_invariance(seed: u64, cfg: &SuiteConfig) -> Outcome {
    let mut rng = sample::rng(seed);
    for t in 0..200 {
        let n = rng.gen_range(1..=6);
        let len = rng.gen_range(0..=2);
        let (pt, _) = random_point(&mut rng, n, len, 2);
        let wlen = rng.gen_range(1..=4);
        let w = random_word(&mut rng, wlen, 3);
        let out = act_under(cfg, &w, &pt);
        let exact = out.defect().rank();
        let approx = act_under(cfg, &w.map(|c| c.to_c64()), &pt.to_approx());
        let numeric = scaled_rank(&approx, cfg.rank_tol);
        if exact > 1 || numeric > 1 {
            return Ok((false, format!("instance {t}: n = {n}, exact rank {exact}, numeric rank {numeric}")));
        }
    }
    Ok((true, "200 points, n <= 6, words <= 4: rank([X,Y]-I) <= 1 exactly and in floating point".into()))
}

/// Numeric rank of `[X,Y] - I`, counting singular values above `tol` times
/// the size of the commutator, which bounds its rounding error.
fn scaled_rank(pt: &CMPoint<Approx>, tol: f64) -> usize {
    let scale = (pt.x().frobenius_norm() * pt.y().frobenius_norm()).max(1.0);
    singular_values(&pt.defect()).iter().filter(|&&s| s > tol * scale).count()
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * rat(k, 1))
}

fn char_poly_identity(seed: u64) -> Outcome {
    let mut rng = sample::rng(seed);
    for t in 0..100 {
        let n = rng.gen_range(1..=8);
        let deg = rng.gen_range(1..=4);
        let p = sample::poly_no_constant(&mut rng, deg);
        let lhs = phi_point(&p, &cm_base_point::<Rational>(n)).x().det();
        let exp = series_exp(&p, n + 1)?;
        let rhs = factorial(n) * exp.coeffs().get(n).cloned().unwrap_or_else(Rational::zero);
        if lhs != rhs {
            return Ok((false, format!("instance {t}: n = {n}, p = {p}: {lhs} vs {rhs}")));
        }
    }
    Ok((true, "100 polynomials, n <= 8: det(X0 + p'(Y0)) = n! [z^n] exp(p)".into()))
}

fn transitivity(seed: u64, cfg: &SuiteConfig) -> Outcome {
    let mut rng = sample::rng(seed);
    let mut worst_res: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    for t in 0..50 {
        let n = rng.gen_range(1..=5);
        let len = rng.gen_range(0..=3);
        let (pt, _) = random_point(&mut rng, n, len, 2);
        let a = pt.to_approx();
        let opts = NormalFormOptions {
            seed: seed ^ t,
            residual_tol: cfg.residual_tol,
            ..NormalFormOptions::default()
        };
        let cert = normal_form(&a, &opts)?;
        let rec = cert.reconstruction();
        let gap = invariant_discrepancy(
            &cm_invariants(&rec, 2 * n),
            &cm_invariants(&a, 2 * n),
            n,
            a.x().frobenius_norm(),
            a.y().frobenius_norm(),
            2 * n,
        );
        worst_res = worst_res.max(cert.residual);
        worst_gap = worst_gap.max(gap);
        if cert.word.len() > 3 || cert.residual > cfg.residual_tol || gap > cfg.residual_tol {
            return Ok((
                false,
                format!("instance {t}: n = {n}, word {}, residual {:.2e}, gap {gap:.2e}", cert.word.len(), cert.residual),
            ));
        }
    }
    Ok((true, format!("50 points, n <= 5: words <= 3, residual {worst_res:.1e}, invariant gap {worst_gap:.1e}")))
}

/// Base points and seeded random points, `n` in `1..=max_n`.
pub fn rational_corpus(seed: u64, max_n: usize) -> Vec<CMPoint<Rational>> {
    let mut rng = sample::rng(seed);
    let mut out = vec![cm_base_point(0)];
    for n in 1..=max_n {
        out.push(cm_base_point(n));
        for _ in 0..4 {
            let len = rng.gen_range(1..=3);
            out.push(random_point(&mut rng, n, len, 2).0);
        }
    }
    out
}

fn bispectrality(seed: u64) -> Outcome {
    let corpus = rational_corpus(seed, 4);
    for (t, pt) in corpus.iter().enumerate() {
        let c = baker_bispectral_check(pt)?;
        if !c.passed {
            return Ok((false, format!("corpus point {t}: {}", c.detail)));
        }
    }
    Ok((true, format!("{} corpus points, n <= 4", corpus.len())))
}

fn flow(seed: u64) -> Outcome {
    let mut rng = sample::rng(seed);
    for t in 0..25 {
        let n = rng.gen_range(1..=3);
        let len = rng.gen_range(0..=3);
        let (pt, _) = random_point(&mut rng, n, len, 2);
        let s = sample::nonzero_rational(&mut rng);
        let c = baker_flow_check(&pt, &s)?;
        if !c.passed {
            return Ok((false, format!("instance {t}: {}", c.detail)));
        }
        let deg = rng.gen_range(1..=3);
        let q = sample::poly_no_constant(&mut rng, deg);
        let c = baker_poly_flow_check(&pt, &q)?;
        if !c.passed {
            return Ok((false, format!("instance {t}, q = {q}: {}", c.detail)));
        }
    }
    Ok((true, "25 instances, n <= 3: translation and degree <= 3 flows".into()))
}

fn round_trip(seed: u64, cfg: &SuiteConfig) -> Outcome {
    let mut rng = sample::rng(seed);
    for t in 0..25 {
        let v = sample::primary_decomposable(&mut rng, 3, 3);
        let w = gr_canonical(&v);
        let r = v.points().iter().map(|p| p.r()).max().unwrap_or(0);
        let slice = alpha_slice(&w, r, v.conductor().deg().max(0) as usize + r)?;
        let back = e_map(&slice, cfg.degree)?;
        if !gr_equal(&back, &w)? {
            return Ok((false, format!("instance {t}: {v:?}")));
        }
    }
    Ok((true, format!("25 spaces, <= 3 points, exponents <= 3, degree {}", cfg.degree)))
}

fn lc(lambda: i64, r: usize, rows: &[&[i64]]) -> LocalCondition<Rational> {
    let rows = rows.iter().map(|row| row.iter().map(|&c| rat(c, 1)).collect()).collect();
    LocalCondition::new(rat(lambda, 1), r, rows).expect("valid local condition")
}

fn cm_model(a: i64, b: i64, degree: usize) -> Result<GrPoint<Rational>> {
    let pt = CMPoint::new_unchecked(
        crate::exactnum::matrix::Matrix::from_fn(1, 1, |_, _| rat(a, 1)),
        crate::exactnum::matrix::Matrix::from_fn(1, 1, |_, _| rat(b, 1)),
    );
    gr_from_baker(&baker_reduced(&pt)?, degree)
}

/// Two primary decomposable points that are not of the form `a C[z]`.
pub fn hand_built_points() -> Vec<GrPoint<Rational>> {
    vec![
        // f(0) = f(1)
        gr_canonical(&PrimaryDecomposable::new(vec![lc(0, 1, &[]), lc(1, 1, &[])]).unwrap()),
        // f'(0) = 0 and f(2) = 0
        gr_canonical(&PrimaryDecomposable::new(vec![lc(0, 2, &[&[1, 0]]), lc(2, 1, &[])]).unwrap()),
    ]
}

fn query_pool(seed: u64, degree: usize) -> Result<Vec<GrPoint<Rational>>> {
    let mut pool = vec![GrPoint::trivial(), cm_model(0, 0, degree)?, cm_model(1, -1, degree)?];
    pool.extend(hand_built_points());
    let mut rng = sample::rng(seed);
    pool.push(gr_canonical(&sample::primary_decomposable(&mut rng, 2, 2)));
    Ok(pool)
}

fn duv_cross_validation(seed: u64, cfg: &SuiteConfig) -> Outcome {
    let (order, degree) = (2, 4);
    let pool = query_pool(seed, cfg.degree)?;
    let depth = cfg.floor + order.max(degree) + 1;
    let ks = pool
        .iter()
        .map(|w| Ok(kw_from_baker(&baker_from_gr(w)?, depth)))
        .collect::<Result<Vec<_>>>()?;
    let k_invs = ks.iter().map(|k| k.inverse()).collect::<Result<Vec<_>>>()?;
    let mut rng = sample::rng(seed);
    let (mut queries, mut inconclusive, mut members) = (0, 0, 0);
    for (iu, u) in pool.iter().enumerate() {
        for (iv, v) in pool.iter().enumerate() {
            let window = IdealSlice::window(order, degree + v.m.deg().max(0) as usize, &v.m);
            let slice = gr_duv(&window, u, v)?;
            let mut cands = vec![sample::diff_operator(&mut rng, order, degree)];
            if !slice.is_empty() {
                let member = slice.iter().fold(DiffOperator::zero(), |acc, g| {
                    &acc + &g.scale(&sample::small_int(&mut rng, 2))
                });
                let k = rng.gen_range(0..=degree);
                let i = rng.gen_range(0..=order);
                cands.push(&member + &DiffOperator::monomial(rat(1, 1), k, i));
                cands.push(member);
            }
            for d in cands.into_iter().filter(|d| !d.is_zero()) {
                queries += 1;
                debug_assert!(keylem_window(&d, cfg.floor) <= depth);
                let exact = duv_contains(&d, u, v)?;
                members += exact as usize;
                match keylem_with(&d, &ks[iu], &k_invs[iv], cfg.floor) {
                    Membership::Inconclusive { .. } => inconclusive += 1,
                    verdict => {
                        let said = matches!(verdict, Membership::Member { .. });
                        if said != exact {
                            return Ok((false, format!("pair ({iu},{iv}), D = {d}: exact {exact}, truncated {verdict:?}")));
                        }
                    }
                }
            }
        }
    }
    let passed = queries >= 100 && inconclusive * 10 < queries;
    Ok((
        passed,
        format!("{queries} queries over {} points ({members} members), {inconclusive} inconclusive", pool.len()),
    ))
}

fn wave_of_swap(seed: u64, cfg: &SuiteConfig) -> Outcome {
    let corpus = rational_corpus(seed, 3);
    for (t, pt) in corpus.iter().enumerate() {
        let lhs = kw_from_point(&cm_transpose_swap(pt), cfg.floor)?;
        let rhs = kw_from_point(pt, cfg.floor)?.b();
        let depth = lhs.common_depth(&rhs);
        if !lhs.agrees_with(&rhs) || depth < cfg.floor as i64 {
            return Ok((false, format!("corpus point {t}: agreement to depth {depth}")));
        }
    }
    Ok((true, format!("{} corpus points, n <= 3, floor {}", corpus.len(), cfg.floor)))
}

fn kprop() -> Outcome {
    let mut points = vec![GrPoint::trivial(), cm_model(0, 0, 12)?, cm_model(2, 1, 12)?];
    points.extend(hand_built_points());
    let mut min_depth = i64::MAX;
    let mut elements = 0;
    for (t, w) in points.iter().enumerate() {
        let r = kprop_for_point(w, 1, 2, 6, 12)?;
        min_depth = min_depth.min(r.min_depth);
        elements += r.elements.len();
        if !r.passed {
            let bad = r.elements.iter().filter(|e| !(e.differential && e.member)).count();
            return Ok((false, format!("point {t}: {bad} of {} elements fail, depth {}", r.elements.len(), r.min_depth)));
        }
    }
    Ok((true, format!("{} points, {elements} slice elements, depth >= {min_depth}", points.len())))
}

fn group_identities(seed: u64, cfg: &SuiteConfig) -> Outcome {
    let mut rng = sample::rng(seed);
    for t in 0..100 {
        let n = rng.gen_range(1..=4);
        let len = rng.gen_range(0..=2);
        let (pt, _) = random_point(&mut rng, n, len, 2);
        let deg = rng.gen_range(1..=3);
        let q = sample::poly_no_constant(&mut rng, deg);
        let direct = psi_point_under(cfg, &q, &pt);
        let via_b = cm_transpose_swap(&phi_point(&-&q, &cm_transpose_swap(&pt)));
        if direct != via_b {
            return Ok((false, format!("matrix level, instance {t}: Psi_q differs from b Phi_-q b, q = {q}")));
        }
    }
    let flip = cfg.mutation == Some(Mutation::PsiSignFlip);
    let report = endo_check_relations_with(seed, 100, |q, d| if flip { psi(&-q, d) } else { psi(q, d) })?;
    if !report.passed {
        return Ok((false, format!("operator level: {}", report.witness.unwrap_or_default())));
    }
    Ok((true, "100 matrix and 100 operator instances".into()))
}

fn c_action() -> Outcome {
    let mut detail = Vec::new();
    for (name, w) in [("C[z]", GrPoint::trivial()), ("(0,0) model", cm_model(0, 0, 12)?)] {
        let r = c_action_check(&w, 2, 3)?;
        detail.push(format!("{name}: {} ops", r.r_dim));
        if !r.passed {
            return Ok((false, format!("{name}: c(R_W) has dim {}, L_W* has dim {}", r.r_dim, r.cl_dim)));
        }
    }
    Ok((true, detail.join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_sign_flip_is_detected() {
        let cfg = SuiteConfig {
            mutation: Some(Mutation::PsiSignFlip),
            ..SuiteConfig::default()
        };
        let r = run_criterion(10, &cfg);
        assert!(!r.passed, "{}", r.detail);
        // the flipped map is still a symplectomorphism, so ranks are unaffected
        assert!(run_criterion(1, &cfg).passed);
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run_criterion(12, &SuiteConfig::default()).passed);
    }
}
