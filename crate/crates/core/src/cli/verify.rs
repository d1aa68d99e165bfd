//! Monte-Carlo inequality suites over a DKK space.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::condest::SearchBudget;
use crate::dkk::{DkkSpace, Inequality, LemmaConstants, IDENTITY_ATOL};
use crate::error::Result;
use crate::greedy::{partial_sum_constant, qg_ratio_estimate, trial_vector};
use crate::normer::Normer;
use crate::sample::{heavy_tailed, random_subset, sample_rng};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub trials: usize,
    pub violations: usize,
    /// Smallest `(rhs - lhs) / |rhs|` seen; negative exactly when some check failed
    /// beyond tolerance or by rounding.
    pub worst_slack: f64,
    pub runtime_ms: u64,
}

fn relative_slack(q: &Inequality) -> f64 {
    if q.rhs == 0.0 {
        if q.lhs <= 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    } else {
        (q.rhs - q.lhs) / q.rhs.abs()
    }
}

fn suite_seed(seed: u64, idx: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(idx)
}

fn run_suite<F>(name: &str, idx: u64, trials: usize, seed: u64, check: F) -> Result<SuiteOutcome>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Vec<Inequality>> + Sync,
{
    let start = std::time::Instant::now();
    let s = suite_seed(seed, idx);
    let results: Vec<Result<Vec<Inequality>>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| check(&mut sample_rng(s, i)))
        .collect();
    let mut out = SuiteOutcome { name: name.into(), trials, violations: 0, worst_slack: f64::INFINITY, runtime_ms: 0 };
    for r in results {
        let ineqs = r?;
        if ineqs.iter().any(|q| !q.holds) {
            out.violations += 1;
        }
        for q in &ineqs {
            out.worst_slack = out.worst_slack.min(relative_slack(q));
        }
    }
    out.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(out)
}

fn identity(err: f64, scale: f64) -> Inequality {
    let tol = IDENTITY_ATOL * scale.max(1.0);
    Inequality { lhs: err, rhs: tol, holds: err <= tol }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn random_blocks(rng: &mut ChaCha8Rng, blocks: usize) -> Vec<usize> {
    (1..=blocks).filter(|_| rng.gen_bool(0.5)).collect()
}

/// A set `A ⊆ ∪_{n >= r} σ_n` with `|A| <= M_r` for a random `r`.
pub fn tail_set(y: &DkkSpace, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let p = y.partition();
    let r = rng.gen_range(1..=p.len());
    let start = p.m_r(r - 1);
    let room = p.total() - start;
    let k = rng.gen_range(0..=p.m_r(r).min(room));
    random_subset(rng, room, k).into_iter().map(|j| j + start).collect()
}

/// All suites applicable to `y`, with `trials` samples each.
pub fn verify_suites(y: &DkkSpace, trials: usize, seed: u64, budget: &SearchBudget) -> Result<Vec<SuiteOutcome>> {
    let dim = y.dim();
    let blocks = y.partition().len();
    let constants = y.lemma_constants(dim);
    let mut out = Vec::new();

    out.push(run_suite("averaging_p", 0, trials, seed, |rng| {
        let f = heavy_tailed(rng, dim);
        Ok(vec![Inequality::new(y.sym_norm(&y.avg_projection(&f)?), 2.0 * y.sym_norm(&f))])
    })?);
    out.push(run_suite("averaging_q", 1, trials, seed, |rng| {
        let f = heavy_tailed(rng, dim);
        Ok(vec![Inequality::new(y.sym_norm(&y.q_projection(&f)?), 3.0 * y.sym_norm(&f))])
    })?);
    out.push(run_suite("equivalent_norm", 2, trials, seed, |rng| {
        let f = heavy_tailed(rng, dim);
        let s = y.sym_norm(&f);
        let mid = y.sym_norm(&y.q_projection(&f)?) + y.sym_norm(&y.avg_projection(&f)?);
        Ok(vec![Inequality::new(s, mid), Inequality::new(mid, 5.0 * s)])
    })?);
    out.push(run_suite("sandwich", 3, trials, seed, |rng| {
        let n = rng.gen_range(1..=blocks);
        let range = y.partition().block(n);
        let mut f = vec![0.0; dim];
        let vals = heavy_tailed(rng, range.len());
        f[range].copy_from_slice(&vals);
        let (lo, hi) = y.sandwich_check(&f)?;
        Ok(vec![lo, hi])
    })?);
    out.push(run_suite("embedding", 4, trials, seed, |rng| {
        let f = heavy_tailed(rng, dim);
        let e = y.embedding_check(&f)?;
        Ok([Some(e.lower), Some(e.upper), e.dini].into_iter().flatten().collect())
    })?);
    out.push(run_suite("commuting", 5, trials, seed, |rng| {
        let f = heavy_tailed(rng, dim);
        let set = y.partition().union_of(&random_blocks(rng, blocks));
        let ok = y.commuting_check(&f, &set)?;
        Ok(vec![Inequality { lhs: if ok { 0.0 } else { 1.0 }, rhs: 0.0, holds: ok }])
    })?);
    out.push(run_suite("round_trip", 6, trials, seed, |rng| {
        let f = heavy_tailed(rng, dim);
        let (g, h) = y.h_map(&f)?;
        let back = y.g_map(&g, &h)?;
        let g2 = y.q_projection(&heavy_tailed(rng, dim))?;
        let h2 = heavy_tailed(rng, blocks);
        let (g3, h3) = y.h_map(&y.g_map(&g2, &h2)?)?;
        Ok(vec![
            identity(max_abs_diff(&f, &back), max_abs(&f)),
            identity(max_abs_diff(&g2, &g3).max(max_abs_diff(&h2, &h3)), max_abs(&g2).max(max_abs(&h2))),
        ])
    })?);
    out.push(run_suite("projection_lemma", 7, trials, seed, |rng| {
        let f = heavy_tailed(rng, dim);
        let n = rng.gen_range(1..=blocks);
        let range = y.partition().block(n);
        let k = rng.gen_range(0..=range.len());
        let set: Vec<usize> = random_subset(rng, range.len(), k).into_iter().map(|j| j + range.start).collect();
        let mut v = vec![y.projection_lemma_check(&f, n, &set)?];
        if y.is_l1() {
            v.push(y.projection_lemma_l1_check(&f, n, &set)?);
        }
        Ok(v)
    })?);
    out.push(run_suite("ax_norm_estimate", 8, trials, seed, |rng| {
        let f = heavy_tailed(rng, dim);
        let k = rng.gen_range(0..=dim);
        Ok(vec![y.ax_norm_estimate_check(&f, &random_subset(rng, dim, k))?])
    })?);
    out.push(run_suite("lemma7", 9, trials, seed, |rng| {
        Ok(vec![y.lemma7_check(rng.gen_range(1..=dim), rng.gen_range(1..=dim))?])
    })?);
    if y.basis().functional_norms(blocks).is_some() {
        out.push(run_suite("coordinate_bound", 10, trials, seed, |rng| {
            Ok(vec![y.coordinate_bound_check(&heavy_tailed(rng, dim))?])
        })?);
    }
    if constants.c_a.is_some() {
        out.push(run_suite("tail_projection", 11, trials, seed, |rng| {
            let f = heavy_tailed(rng, dim);
            let set = tail_set(y, rng);
            Ok(vec![y.tail_projection_check(&f, &set, &constants)?.main])
        })?);
    }
    if let Some(q) = qg_bound(y, &constants, trials, seed, budget)? {
        out.push(q);
    }
    Ok(out)
}

/// Per-sample quasi-greedy ratios against `C_b + C_a + C_1 C_2`, with `C_b` measured.
fn qg_bound(
    y: &DkkSpace,
    constants: &LemmaConstants,
    trials: usize,
    seed: u64,
    budget: &SearchBudget,
) -> Result<Option<SuiteOutcome>> {
    let Some(base) = constants.qg_without_cb else {
        return Ok(None);
    };
    let start = std::time::Instant::now();
    let dim = y.dim();
    let s = suite_seed(seed, 12);
    let cb = partial_sum_constant(y, dim, trials.min(64), budget, s)?.value;
    let bound = cb + base;
    let per: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let f = trial_vector(s, i, dim);
            let norm = y.norm(&f);
            let order = crate::greedy::greedy_ordering(&f);
            let mut worst: f64 = 0.0;
            let mut rest = f.clone();
            for &j in order.iter().take_while(|&&j| f[j] != 0.0) {
                rest[j] = 0.0;
                worst = worst.max(y.norm(&rest) / norm);
            }
            worst
        })
        .collect();
    let mut out =
        SuiteOutcome { name: "qg_bound".into(), trials, violations: 0, worst_slack: f64::INFINITY, runtime_ms: 0 };
    for r in per {
        let q = Inequality::new(r, bound);
        if !q.holds {
            out.violations += 1;
        }
        out.worst_slack = out.worst_slack.min(relative_slack(&q));
    }
    // cross-check against the estimator that also enumerates tied greedy sets
    let est = qg_ratio_estimate(y, dim, trials.min(64), s)?;
    let q = Inequality::new(est.residual_ratio, bound);
    if !q.holds {
        out.violations += 1;
    }
    out.worst_slack = out.worst_slack.min(relative_slack(&q));
    out.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(Some(out))
}
