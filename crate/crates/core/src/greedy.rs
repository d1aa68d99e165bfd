//! The thresholding greedy algorithm and estimates of quasi-greedy, democracy and
//! almost-greedy constants for any coefficient norm.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::condest::{projection_ratio, SearchBudget, Witness, EXACT_K_SUBSET_CAP};
use crate::error::{Error, Result};
use crate::normer::{project, project_complement, Normer};
use crate::sample::{heavy_tailed, random_subset, sample_rng};
use crate::search::coordinate_ascent;

/// Exhaustive almost-greedy estimates enumerate `2^dim` sets.
pub const SMALLCASE_DIM_CAP: usize = 12;
/// Tied inputs have all their admissible greedy sets checked when there are at most this many.
pub const ADMISSIBLE_SET_CAP: usize = 64;

/// Indices sorted by decreasing `|a_j|`, smallest index first among ties.
pub fn greedy_ordering(f: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..f.len()).collect();
    idx.sort_by(|&i, &j| f[j].abs().total_cmp(&f[i].abs()).then(i.cmp(&j)));
    idx
}

/// The `m` largest coefficients (0-based), in greedy order; the whole support if `m`
/// exceeds it.
pub fn greedy_set(f: &[f64], m: usize) -> Vec<usize> {
    greedy_ordering(f).into_iter().filter(|&j| f[j] != 0.0).take(m).collect()
}

/// `|a_j| <= |a_k|` for every `j` outside `set` and `k` inside.
pub fn is_greedy_set(f: &[f64], set: &[usize]) -> bool {
    let mut inside = vec![false; f.len()];
    for &k in set {
        if k >= f.len() || inside[k] {
            return false;
        }
        inside[k] = true;
    }
    let min_in = set.iter().map(|&k| f[k].abs()).fold(f64::INFINITY, f64::min);
    let max_out = (0..f.len()).filter(|&j| !inside[j]).map(|j| f[j].abs()).fold(0.0, f64::max);
    set.is_empty() || max_out <= min_in
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn combinations(pool: &[usize], k: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, start: usize) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..pool.len() {
        if pool.len() - i < k - cur.len() {
            break;
        }
        cur.push(pool[i]);
        combinations(pool, k, out, cur, i + 1);
        cur.pop();
    }
}

/// Every greedy set of size `m` (sorted), or `None` when there are more than `cap`.
pub fn admissible_greedy_sets(f: &[f64], m: usize, cap: usize) -> Option<Vec<Vec<usize>>> {
    let order = greedy_ordering(f);
    let m = m.min(f.len());
    if m == 0 {
        return Some(vec![vec![]]);
    }
    let threshold = f[order[m - 1]].abs();
    let sure: Vec<usize> = order.iter().copied().filter(|&j| f[j].abs() > threshold).collect();
    let tied: Vec<usize> = order.iter().copied().filter(|&j| f[j].abs() == threshold).collect();
    let need = m - sure.len();
    if binomial(tied.len(), need) > cap as u128 {
        return None;
    }
    let mut picks = Vec::new();
    combinations(&tied, need, &mut picks, &mut Vec::new(), 0);
    Some(
        picks
            .into_iter()
            .map(|p| {
                let mut s = sure.clone();
                s.extend(p);
                s.sort_unstable();
                s
            })
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyTrace {
    pub f: Vec<f64>,
    pub ordering: Vec<usize>,
    /// `F_0, F_1, ..., F_s` with `s = |supp f|`.
    pub sets: Vec<Vec<usize>>,
    /// `||f - S_{F_m} f||`.
    pub errors: Vec<f64>,
}

pub fn greedy_trace(normer: &dyn Normer, f: &[f64]) -> GreedyTrace {
    let ordering = greedy_ordering(f);
    let support = f.iter().filter(|x| **x != 0.0).count();
    let sets: Vec<Vec<usize>> = (0..=support).map(|m| ordering[..m].to_vec()).collect();
    let errors = sets.iter().map(|s| normer.norm(&project_complement(f, s))).collect();
    GreedyTrace { f: f.to_vec(), ordering, sets, errors }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QgEstimate {
    /// `max ||f - S_F f|| / ||f||`; the witness set is the complement of `F`.
    pub residual_ratio: f64,
    pub residual_witness: Option<Witness>,
    /// `max ||S_F f|| / ||f||`.
    pub projection_ratio: f64,
    pub projection_witness: Option<Witness>,
    pub trials: usize,
    pub dim: usize,
}

/// Trial `i` of the sweeps: heavy-tailed, except every fourth trial which takes
/// magnitudes from `{1, 2}` so that greedy sets are far from unique.
pub fn trial_vector(seed: u64, i: u64, dim: usize) -> Vec<f64> {
    let mut rng = sample_rng(seed, i);
    if i % 4 == 3 {
        (0..dim)
            .map(|_| {
                let mag = if rng.gen_bool(0.5) { 1.0 } else { 2.0 };
                if rng.gen_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            })
            .collect()
    } else {
        heavy_tailed(&mut rng, dim)
    }
}

fn greedy_sets_for(f: &[f64], m: usize) -> Vec<Vec<usize>> {
    admissible_greedy_sets(f, m, ADMISSIBLE_SET_CAP).unwrap_or_else(|| {
        let mut s = greedy_set(f, m);
        s.sort_unstable();
        vec![s]
    })
}

fn better(a: &(f64, Option<Witness>), b: &(f64, Option<Witness>)) -> bool {
    b.0 > a.0 || a.1.is_none() && b.1.is_some() && b.0 >= a.0
}

/// Largest `||f - S_F f|| / ||f||` and `||S_F f|| / ||f||` over sampled `f` and all
/// their greedy sets `F`.
pub fn qg_ratio_estimate(normer: &dyn Normer, dim: usize, trials: usize, seed: u64) -> Result<QgEstimate> {
    if trials == 0 {
        return Err(Error::Config("qg_ratio_estimate needs at least one trial".into()));
    }
    if let Some(cap) = normer.max_dim() {
        if dim > cap {
            return Err(Error::Domain(format!("{} covers {cap} coefficients, {dim} requested", normer.label())));
        }
    }
    type Best = ((f64, Option<Witness>), (f64, Option<Witness>));
    let per_trial: Vec<Best> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let f = trial_vector(seed, i, dim);
            let norm = normer.norm(&f);
            let mut res = (0.0, None);
            let mut proj = (0.0, None);
            if norm == 0.0 {
                return (res, proj);
            }
            let support = f.iter().filter(|x| **x != 0.0).count();
            for m in 1..=support {
                for set in greedy_sets_for(&f, m) {
                    let complement: Vec<usize> = (0..dim).filter(|j| set.binary_search(j).is_err()).collect();
                    let r = normer.norm(&project(&f, &complement)) / norm;
                    let p = normer.norm(&project(&f, &set)) / norm;
                    if r > res.0 {
                        res = (r, Some(Witness { f: f.clone(), set: complement }));
                    }
                    if p > proj.0 {
                        proj = (p, Some(Witness { f: f.clone(), set }));
                    }
                }
            }
            (res, proj)
        })
        .collect();
    let mut res = (0.0, None);
    let mut proj = (0.0, None);
    for (r, p) in per_trial {
        if better(&res, &r) {
            res = r;
        }
        if better(&proj, &p) {
            proj = p;
        }
    }
    Ok(QgEstimate {
        residual_ratio: res.0,
        residual_witness: res.1,
        projection_ratio: proj.0,
        projection_witness: proj.1,
        trials,
        dim,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialSumEstimate {
    /// Measured `max_m ||f - S_m f|| / ||f||` (a lower bound for `C_b`).
    pub value: f64,
    pub m: usize,
    pub witness: Option<Witness>,
}

/// Measured `sup_m ||Id - S_m||` on the `dim`-truncation: sampled vectors for every
/// `m`, then coordinate ascent at the few most promising `m`.
pub fn partial_sum_constant(
    normer: &dyn Normer,
    dim: usize,
    trials: usize,
    budget: &SearchBudget,
    seed: u64,
) -> Result<PartialSumEstimate> {
    if let Some(cap) = normer.max_dim() {
        if dim > cap {
            return Err(Error::Domain(format!("{} covers {cap} coefficients, {dim} requested", normer.label())));
        }
    }
    let tails: Vec<Vec<usize>> = (0..dim).map(|m| (m..dim).collect()).collect();
    let per_m: Vec<(f64, Vec<f64>)> = (0..dim)
        .into_par_iter()
        .map(|m| {
            let mut best = (0.0, vec![0.0; dim]);
            for i in 0..trials as u64 {
                let f = trial_vector(seed, i, dim);
                let r = projection_ratio(normer, &f, &tails[m]);
                if r > best.0 {
                    best = (r, f);
                }
            }
            best
        })
        .collect();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| per_m[b].0.total_cmp(&per_m[a].0).then(a.cmp(&b)));
    let refined: Vec<(f64, usize, Vec<f64>)> = order
        .into_par_iter()
        .take(3)
        .map(|m| {
            let start = per_m[m].1.clone();
            let (_, f) = coordinate_ascent(|g| projection_ratio(normer, g, &tails[m]), start, budget.ascent);
            (projection_ratio(normer, &f, &tails[m]), m, f)
        })
        .collect();
    let mut out = PartialSumEstimate { value: 0.0, m: 0, witness: None };
    for (m, (v, f)) in per_m.into_iter().enumerate() {
        if v > out.value {
            out = PartialSumEstimate { value: v, m, witness: Some(Witness { f, set: tails[m].clone() }) };
        }
    }
    for (v, m, f) in refined {
        if v > out.value {
            out = PartialSumEstimate { value: v, m, witness: Some(Witness { f, set: tails[m].clone() }) };
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiResult {
    pub value: f64,
    pub exact: bool,
    /// A set attaining `value` (0-based).
    pub set: Vec<usize>,
    /// Known `(lower, upper)` bounds, when the normer supplies them.
    pub bounds: Option<(f64, f64)>,
}

fn indicator(dim: usize, set: &[usize]) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    for &j in set {
        v[j] = 1.0;
    }
    v
}

fn for_each_subset_upto(n: usize, k: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if !cur.is_empty() {
            visit(cur);
        }
        if cur.len() == k {
            return;
        }
        for j in start..n {
            cur.push(j);
            rec(j + 1, n, k, cur, visit);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), visit);
}

fn subset_count(n: usize, k: usize) -> u128 {
    (0..=k.min(n)).map(|i| binomial(n, i)).sum()
}

/// `φ_m = sup_{|A| <= m} ||Σ_{j ∈ A} e_j||` over `A ⊆ [1, dim]`.
pub fn fundamental_phi(
    normer: &dyn Normer,
    m: usize,
    dim: usize,
    mode: crate::condest::Mode,
    budget: &SearchBudget,
    seed: u64,
) -> Result<PhiResult> {
    if m == 0 || m > dim {
        return Err(Error::Domain(format!("fundamental function needs 1 <= m <= dim (m = {m}, dim = {dim})")));
    }
    if let Some(cap) = normer.max_dim() {
        if dim > cap {
            return Err(Error::Domain(format!("{} covers {cap} coefficients, {dim} requested", normer.label())));
        }
    }
    let bounds = normer.fundamental_bounds(m);
    if let Some(space) = normer.symmetric_space() {
        return Ok(PhiResult { value: space.lambda(m), exact: true, set: (0..m).collect(), bounds });
    }
    let mut best = (0.0, Vec::new());
    let mut consider = |set: &[usize]| {
        let v = normer.norm(&indicator(dim, set));
        if v > best.0 {
            best = (v, set.to_vec());
        }
    };
    if mode == crate::condest::Mode::Exact {
        if subset_count(dim, m) > EXACT_K_SUBSET_CAP as u128 {
            return Err(Error::Budget(format!(
                "exact fundamental function at m = {m}, dim = {dim} enumerates more than {EXACT_K_SUBSET_CAP} sets"
            )));
        }
        for_each_subset_upto(dim, m, &mut consider);
        return Ok(PhiResult { value: best.0, exact: true, set: best.1, bounds });
    }
    for len in 1..=m {
        for a in 0..=dim - len {
            consider(&(a..a + len).collect::<Vec<_>>());
        }
    }
    for (f, _) in normer.structured_candidates(dim) {
        let mut set: Vec<usize> = (0..f.len().min(dim)).filter(|&j| f[j] != 0.0).take(m).collect();
        set.sort_unstable();
        if !set.is_empty() {
            consider(&set);
        }
    }
    let mut rng = sample_rng(seed, 0);
    for _ in 0..budget.random_subsets {
        let k = rng.gen_range(1..=m);
        consider(&random_subset(&mut rng, dim, k));
    }
    // single swaps from the best set found
    let mut set = best.1.clone();
    for _ in 0..budget.restarts.max(1) {
        let mut improved = false;
        for pos in 0..set.len() {
            for j in 0..dim {
                if set.contains(&j) {
                    continue;
                }
                let mut cand = set.clone();
                cand[pos] = j;
                cand.sort_unstable();
                let v = normer.norm(&indicator(dim, &cand));
                if v > best.0 {
                    best = (v, cand.clone());
                    set = cand;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(PhiResult { value: best.0, exact: false, set: best.1, bounds })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemocracyEstimate {
    /// `max / min` over the sampled signed indicators.
    pub ratio: f64,
    pub max: f64,
    pub min: f64,
    pub max_vector: Vec<f64>,
    pub min_vector: Vec<f64>,
    pub exact: bool,
}

/// Spread of `||Σ_{j ∈ A} ε_j e_j||` over `|A| = m`, signs `ε`; exhaustive for `m = 1`.
pub fn superdemocracy_ratio(normer: &dyn Normer, m: usize, dim: usize, samples: usize, seed: u64) -> Result<DemocracyEstimate> {
    if m == 0 || m > dim {
        return Err(Error::Domain(format!("super-democracy needs 1 <= m <= dim (m = {m}, dim = {dim})")));
    }
    if let Some(cap) = normer.max_dim() {
        if dim > cap {
            return Err(Error::Domain(format!("{} covers {cap} coefficients, {dim} requested", normer.label())));
        }
    }
    if let Some(space) = normer.symmetric_space() {
        let v = space.lambda(m);
        let x = indicator(dim, &(0..m).collect::<Vec<_>>());
        return Ok(DemocracyEstimate { ratio: 1.0, max: v, min: v, max_vector: x.clone(), min_vector: x, exact: true });
    }
    let vectors: Vec<Vec<f64>> = if m == 1 {
        (0..dim).map(|j| indicator(dim, &[j])).collect()
    } else {
        (0..samples.max(1) as u64)
            .map(|i| {
                let mut rng = sample_rng(seed, i);
                let set = random_subset(&mut rng, dim, m);
                let mut v = vec![0.0; dim];
                for j in set {
                    v[j] = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                }
                v
            })
            .collect()
    };
    let mut est = DemocracyEstimate {
        ratio: 1.0,
        max: f64::NEG_INFINITY,
        min: f64::INFINITY,
        max_vector: Vec::new(),
        min_vector: Vec::new(),
        exact: m == 1,
    };
    for v in vectors {
        let n = normer.norm(&v);
        if n > est.max {
            est.max = n;
            est.max_vector = v.clone();
        }
        if n < est.min {
            est.min = n;
            est.min_vector = v;
        }
    }
    est.ratio = est.max / est.min;
    Ok(est)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlmostGreedyEstimate {
    /// `max ||f - S_F f|| / min_{|A| <= |F|} ||f - S_A f||`.
    pub ratio: f64,
    pub f: Vec<f64>,
    pub m: usize,
    pub greedy_set: Vec<usize>,
}

/// Exhaustive almost-greedy ratio on `dim <= 12` coordinates: every admissible greedy
/// set against the exact minimum over all `A ⊆ [1, dim]` with `|A| <= m`. When both
/// sides vanish the ratio is taken as 1.
pub fn almost_greedy_ratio_smallcase(normer: &dyn Normer, dim: usize, trials: usize, seed: u64) -> Result<AlmostGreedyEstimate> {
    if dim > SMALLCASE_DIM_CAP {
        return Err(Error::Budget(format!("exhaustive almost-greedy ratio needs dim <= {SMALLCASE_DIM_CAP}, got {dim}")));
    }
    if let Some(cap) = normer.max_dim() {
        if dim > cap {
            return Err(Error::Domain(format!("{} covers {cap} coefficients, {dim} requested", normer.label())));
        }
    }
    let per_trial: Vec<AlmostGreedyEstimate> = (0..trials.max(1) as u64)
        .into_par_iter()
        .map(|i| {
            let f = trial_vector(seed, i, dim);
            almost_greedy_single(normer, &f)
        })
        .collect();
    let mut best = per_trial[0].clone();
    for e in per_trial.into_iter().skip(1) {
        if e.ratio > best.ratio {
            best = e;
        }
    }
    Ok(best)
}

/// The almost-greedy ratio of one vector, maximized over `m` and admissible greedy sets.
pub fn almost_greedy_single(normer: &dyn Normer, f: &[f64]) -> AlmostGreedyEstimate {
    let dim = f.len();
    let full = 1usize << dim;
    // residual[mask] = ||f - S_mask f||
    let residual: Vec<f64> = (0..full)
        .map(|mask| {
            let kept: Vec<f64> = (0..dim).map(|j| if mask >> j & 1 == 1 { 0.0 } else { f[j] }).collect();
            normer.norm(&kept)
        })
        .collect();
    let mut min_by_size = vec![f64::INFINITY; dim + 1];
    for (mask, r) in residual.iter().enumerate() {
        let k = mask.count_ones() as usize;
        min_by_size[k] = min_by_size[k].min(*r);
    }
    for k in 1..=dim {
        min_by_size[k] = min_by_size[k].min(min_by_size[k - 1]);
    }
    let support = f.iter().filter(|x| **x != 0.0).count();
    let mut best = AlmostGreedyEstimate { ratio: 1.0, f: f.to_vec(), m: 0, greedy_set: Vec::new() };
    for m in 0..=support {
        for set in admissible_greedy_sets(f, m, usize::MAX).expect("uncapped") {
            let mask: usize = set.iter().map(|j| 1usize << j).sum();
            let num = residual[mask];
            let den = min_by_size[m];
            let ratio = if num == 0.0 && den == 0.0 { 1.0 } else { num / den };
            if ratio > best.ratio {
                best = AlmostGreedyEstimate { ratio, f: f.to_vec(), m, greedy_set: set };
            }
        }
    }
    best
}

/// `||f - S_F f|| / min_{|A| <= |F|} ||f - S_A f||` for one vector and one set, by
/// enumeration of all `A ⊆ [1, dim]`; 1 when both sides vanish.
pub fn almost_greedy_ratio_for(normer: &dyn Normer, f: &[f64], set: &[usize]) -> f64 {
    let dim = f.len();
    let m = set.len();
    let num = normer.norm(&project_complement(f, set));
    let mut den = f64::INFINITY;
    for_each_subset_upto(dim, m, &mut |a| den = den.min(normer.norm(&project_complement(f, a))));
    den = den.min(normer.norm(f));
    if num == 0.0 && den == 0.0 {
        1.0
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{summing_basis, unit_vector_basis};
    use crate::condest::Mode;
    use crate::dkk::{DkkSpace, Partition};
    use crate::seqspace::{SymSpace, Weight};
    use approx::assert_relative_eq;

    #[test]
    fn greedy_set_examples() {
        assert_eq!(greedy_set(&[1.0, -2.0, 3.0], 2), vec![2, 1]);
        assert_eq!(greedy_set(&[1.0, 1.0, 1.0], 2), vec![0, 1]);
        assert_eq!(greedy_set(&[0.0, 5.0], 1), vec![1]);
        assert_eq!(greedy_set(&[0.0, 5.0], 3), vec![1]);
    }

    #[test]
    fn admissible_sets_enumerate_ties() {
        let f = [2.0, 1.0, -1.0, 1.0];
        let sets = admissible_greedy_sets(&f, 2, 10).unwrap();
        assert_eq!(sets, vec![vec![0, 1], vec![0, 2], vec![0, 3]]);
        assert!(sets.iter().all(|s| is_greedy_set(&f, s)));
        assert!(!is_greedy_set(&f, &[1, 2]));
        assert!(admissible_greedy_sets(&[1.0; 20], 10, 64).is_none());
    }

    #[test]
    fn trace_is_nested_and_greedy() {
        let s = summing_basis();
        let f = trial_vector(3, 0, 9);
        let t = greedy_trace(&s, &f);
        for w in t.sets.windows(2) {
            assert!(w[0].iter().all(|j| w[1].contains(j)));
            assert_eq!(w[1].len(), w[0].len() + 1);
        }
        assert!(t.sets.iter().all(|set| is_greedy_set(&f, set)));
        assert_relative_eq!(t.errors[0], s.norm(&f));
        // all-equal magnitudes give prefixes, i.e. partial sums
        let eq = [1.0, -1.0, 1.0, 1.0];
        let t = greedy_trace(&s, &eq);
        assert_eq!(t.sets[2], vec![0, 1]);
    }

    #[test]
    fn unconditional_ratios_are_at_most_one() {
        for sp in [SymSpace::lp(1.0), SymSpace::lp(2.0), SymSpace::lorentz(1.0, Weight::power(-0.5))] {
            let b = unit_vector_basis(sp).unwrap();
            let q = qg_ratio_estimate(&b, 16, 40, 1).unwrap();
            assert!(q.residual_ratio <= 1.0 && q.projection_ratio <= 1.0);
            let w = q.residual_witness.unwrap();
            assert_relative_eq!(w.ratio(&b), q.residual_ratio, max_relative = 1e-12);
        }
    }

    #[test]
    fn phi_examples() {
        let l3 = unit_vector_basis(SymSpace::lp(3.0)).unwrap();
        let p = fundamental_phi(&l3, 8, 8, Mode::Exact, &SearchBudget::default(), 0).unwrap();
        assert!(p.exact);
        assert_relative_eq!(p.value, 2.0, max_relative = 1e-15);
        let s = summing_basis();
        let p = fundamental_phi(&s, 1, 6, Mode::Exact, &SearchBudget::default(), 0).unwrap();
        assert_eq!(p.value, 1.0);
        let p = fundamental_phi(&s, 3, 6, Mode::Exact, &SearchBudget::default(), 0).unwrap();
        assert_eq!(p.value, 3.0);
        assert!(fundamental_phi(&s, 12, 40, Mode::Exact, &SearchBudget::default(), 0).is_err());

        let y = DkkSpace::new(summing_basis(), SymSpace::lp(2.0), Partition::dyadic(5).unwrap()).unwrap();
        for m in [1, 3, 8, 20] {
            let p = fundamental_phi(&y, m, 31, Mode::Search, &SearchBudget::default(), 0).unwrap();
            let (lo, hi) = p.bounds.unwrap();
            assert!(lo <= p.value + 1e-12 && p.value <= hi + 1e-12, "m={m}: {lo} {} {hi}", p.value);
        }
    }

    #[test]
    fn democracy_examples() {
        let l2 = unit_vector_basis(SymSpace::lp(2.0)).unwrap();
        assert_eq!(superdemocracy_ratio(&l2, 5, 20, 10, 0).unwrap().ratio, 1.0);
        let y = DkkSpace::new(summing_basis(), SymSpace::lp(2.0), Partition::dyadic(4).unwrap()).unwrap();
        let d = superdemocracy_ratio(&y, 1, 15, 0, 0).unwrap();
        assert!(d.exact);
        let norms: Vec<f64> = (0..15).map(|j| y.norm(&indicator(15, &[j]))).collect();
        let (lo, hi) = norms.iter().fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(*x), b.max(*x)));
        assert_relative_eq!(d.ratio, hi / lo, max_relative = 1e-14);
    }

    #[test]
    fn almost_greedy_smallcase() {
        let l2 = unit_vector_basis(SymSpace::lp(2.0)).unwrap();
        let e = almost_greedy_ratio_smallcase(&l2, 8, 20, 0).unwrap();
        assert_relative_eq!(e.ratio, 1.0, max_relative = 1e-12);
        assert!(almost_greedy_ratio_smallcase(&l2, 13, 1, 0).is_err());
        let s = summing_basis();
        let e = almost_greedy_ratio_smallcase(&s, 8, 20, 0).unwrap();
        assert!(e.ratio >= 1.0);
        assert_relative_eq!(almost_greedy_ratio_for(&s, &e.f, &e.greedy_set), e.ratio, max_relative = 1e-12);
    }
}
