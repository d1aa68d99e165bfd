//! Conditionality constants: norms of coordinate projections `S_A`, the sequences
//! `k_m` and `L_m`, and the block-constant witnesses that transfer conditionality
//! from a seed basis to a DKK space.
//!
//! When the basis has an `l_1`, `l_2` or `c_0` ambient representation `M`, the
//! projection is `M D_A M^{-1}` in ambient coordinates and its norm is the maximal
//! column sum, largest singular value, or maximal row sum. Everything else is a
//! search, and the value reported is attained by the reported witness.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dkk::DkkSpace;
use crate::error::{Error, Result};
use crate::normer::{project, AmbientKind, Normer};
use crate::sample::{heavy_tailed, random_subset, sample_rng};
use crate::search::{coordinate_ascent, random_start, AscentConfig};

/// Exhaustive `L_m` enumerates `2^m` subsets.
pub const EXACT_L_CAP: usize = 20;
/// Largest number of subsets `compute_k_m` is willing to enumerate.
pub const EXACT_K_SUBSET_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub f: Vec<f64>,
    /// 0-based coordinates kept by the projection.
    pub set: Vec<usize>,
}

impl Witness {
    /// `||S_A f|| / ||f||`.
    pub fn ratio(&self, normer: &dyn Normer) -> f64 {
        projection_ratio(normer, &self.f, &self.set)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjNormResult {
    pub value: f64,
    pub exact: bool,
    pub witness: Option<Witness>,
}

impl ProjNormResult {
    fn zero() -> Self {
        ProjNormResult { value: 0.0, exact: true, witness: None }
    }

    fn absorb(&mut self, other: ProjNormResult) {
        self.exact &= other.exact;
        if other.value > self.value || self.witness.is_none() && other.witness.is_some() && other.value >= self.value {
            self.value = other.value;
            self.witness = other.witness;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Search,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    /// Random restarts of the ascent per projection.
    pub restarts: usize,
    /// Random subsets tried after the structured ones.
    pub random_subsets: usize,
    pub ascent: AscentConfig,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { restarts: 2, random_subsets: 32, ascent: AscentConfig { sweeps: 40, ..AscentConfig::default() } }
    }
}

pub fn projection_ratio(normer: &dyn Normer, f: &[f64], set: &[usize]) -> f64 {
    let den = normer.norm(f);
    if den == 0.0 {
        return 0.0;
    }
    normer.norm(&project(f, set)) / den
}

/// Precomputed exact-path data for one truncation.
struct ExactPath {
    m: DMatrix<f64>,
    minv: DMatrix<f64>,
    kind: AmbientKind,
}

impl ExactPath {
    fn new(normer: &dyn Normer, dim: usize) -> Result<Option<Self>> {
        let Some((m, kind)) = normer.ambient(dim) else {
            return Ok(None);
        };
        let minv = m
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numerical(format!("singular {dim}-truncation of {}", normer.label())))?;
        Ok(Some(ExactPath { m, minv, kind }))
    }

    fn projection_norm(&self, set: &[usize]) -> ProjNormResult {
        let dim = self.m.nrows();
        if set.is_empty() {
            return ProjNormResult::zero();
        }
        // T = M[:, A] * Minv[A, :]
        let mut t = DMatrix::zeros(dim, dim);
        for &j in set {
            t += self.m.column(j) * self.minv.row(j);
        }
        let (value, y) = match self.kind {
            AmbientKind::Sup => {
                let (i, v) = (0..dim)
                    .map(|i| (i, t.row(i).iter().map(|x| x.abs()).sum::<f64>()))
                    .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
                let y: Vec<f64> = t.row(i).iter().map(|x| if *x < 0.0 { -1.0 } else { 1.0 }).collect();
                (v, y)
            }
            AmbientKind::L1 => {
                let (j, v) = (0..dim)
                    .map(|j| (j, t.column(j).iter().map(|x| x.abs()).sum::<f64>()))
                    .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
                let mut y = vec![0.0; dim];
                y[j] = 1.0;
                (v, y)
            }
            AmbientKind::L2 => {
                let svd = t.svd(false, true);
                let (k, v) = svd
                    .singular_values
                    .iter()
                    .copied()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
                let vt = svd.v_t.expect("requested right singular vectors");
                (v, vt.row(k).iter().copied().collect())
            }
        };
        let f = &self.minv * DVector::from_vec(y);
        ProjNormResult {
            value,
            exact: true,
            witness: Some(Witness { f: f.as_slice().to_vec(), set: set.to_vec() }),
        }
    }
}

fn check_dim(normer: &dyn Normer, dim: usize) -> Result<()> {
    match normer.max_dim() {
        Some(cap) if dim > cap => Err(Error::Domain(format!(
            "{} covers {cap} coefficients, {dim} requested",
            normer.label()
        ))),
        _ => Ok(()),
    }
}

fn search_projection(
    normer: &dyn Normer,
    set: &[usize],
    dim: usize,
    starts: Vec<Vec<f64>>,
    budget: &SearchBudget,
    seed: u64,
) -> ProjNormResult {
    let mut best = ProjNormResult { value: 0.0, exact: false, witness: None };
    if set.is_empty() {
        return best;
    }
    let mut rng = sample_rng(seed, 0);
    let mut all_starts = starts;
    // e_j for j in A attains ratio 1 on any lattice-like norm; it is a safe floor.
    let mut e = vec![0.0; dim];
    e[set[0]] = 1.0;
    all_starts.push(e);
    for _ in 0..budget.restarts {
        all_starts.push(random_start(&mut rng, dim));
    }
    let objective = |f: &[f64]| projection_ratio(normer, f, set);
    for start in all_starts {
        let (v, f) = coordinate_ascent(objective, start, budget.ascent);
        // re-evaluate so the stored value is exactly what the witness reproduces
        let v = objective(&f).max(if v.is_finite() { f64::NEG_INFINITY } else { v });
        if v > best.value || best.witness.is_none() {
            best.value = v;
            best.witness = Some(Witness { f, set: set.to_vec() });
        }
    }
    best
}

fn symmetric_projection(set: &[usize], dim: usize) -> ProjNormResult {
    if set.is_empty() {
        return ProjNormResult::zero();
    }
    // 1-unconditional lattice norm: ||S_A f|| <= ||f||, attained at e_j
    let mut f = vec![0.0; dim];
    f[set[0]] = 1.0;
    ProjNormResult { value: 1.0, exact: true, witness: Some(Witness { f, set: set.to_vec() }) }
}

/// Norm of `S_A` on the `dim`-truncation.
pub fn proj_operator_norm(
    normer: &dyn Normer,
    set: &[usize],
    dim: usize,
    budget: &SearchBudget,
    seed: u64,
) -> Result<ProjNormResult> {
    check_dim(normer, dim)?;
    if let Some(&j) = set.iter().find(|&&j| j >= dim) {
        return Err(Error::Domain(format!("index {} outside [1, {dim}]", j + 1)));
    }
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    if normer.symmetric_space().is_some() {
        return Ok(symmetric_projection(&set, dim));
    }
    if let Some(path) = ExactPath::new(normer, dim)? {
        return Ok(path.projection_norm(&set));
    }
    Ok(search_projection(normer, &set, dim, Vec::new(), budget, seed))
}

/// Subsets tried by the searches: intervals, the alternating set and its complement.
fn structured_subsets(n: usize, max_size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a..n.min(a + max_size) {
            out.push((a..=b).collect());
        }
    }
    let alternating: Vec<usize> = (0..n).step_by(2).take(max_size).collect();
    let complement: Vec<usize> = (1..n).step_by(2).take(max_size).collect();
    out.push(alternating);
    if !complement.is_empty() {
        out.push(complement);
    }
    out
}

fn search_over_subsets(
    normer: &dyn Normer,
    dim: usize,
    max_size: usize,
    budget: &SearchBudget,
    seed: u64,
    path: Option<&ExactPath>,
    candidates: Vec<(Vec<f64>, Vec<usize>)>,
) -> ProjNormResult {
    let mut best = ProjNormResult { value: 0.0, exact: false, witness: None };
    let mut rng = sample_rng(seed, u64::MAX);
    let mut subsets = structured_subsets(dim, max_size);
    for _ in 0..budget.random_subsets {
        let k = rng.gen_range(1..=max_size.min(dim));
        subsets.push(random_subset(&mut rng, dim, k));
    }
    for (i, set) in subsets.iter().enumerate() {
        let r = match path {
            Some(p) => p.projection_norm(set),
            None => search_projection(normer, set, dim, Vec::new(), budget, seed.wrapping_add(i as u64)),
        };
        best.absorb(ProjNormResult { exact: false, ..r });
    }
    for (k, (f, set)) in candidates.into_iter().enumerate() {
        if set.len() > max_size || f.len() > dim || set.iter().any(|&j| j >= dim) {
            continue;
        }
        let mut start = f;
        start.resize(dim, 0.0);
        let r = search_projection(normer, &set, dim, vec![start], &SearchBudget { restarts: 0, ..*budget }, seed ^ k as u64);
        best.absorb(r);
    }
    best.exact = false;
    best
}

/// `L_m`: sup of `||S_A f|| / ||f||` over `f` supported in the first `m` coordinates.
pub fn compute_l_m(normer: &dyn Normer, m: usize, mode: Mode, budget: &SearchBudget, seed: u64) -> Result<ProjNormResult> {
    if m == 0 {
        return Err(Error::Domain("L_m is defined for m >= 1".into()));
    }
    check_dim(normer, m)?;
    if normer.symmetric_space().is_some() {
        return Ok(symmetric_projection(&[0], m));
    }
    let path = ExactPath::new(normer, m)?;
    match mode {
        Mode::Exact => {
            if m > EXACT_L_CAP {
                return Err(Error::Budget(format!("exact L_m enumerates 2^m subsets; m = {m} exceeds {EXACT_L_CAP}")));
            }
            let mut best = ProjNormResult::zero();
            for mask in 1u32..(1u32 << m) {
                let set: Vec<usize> = (0..m).filter(|j| mask >> j & 1 == 1).collect();
                let r = match &path {
                    Some(p) => p.projection_norm(&set),
                    None => search_projection(normer, &set, m, Vec::new(), budget, seed.wrapping_add(mask as u64)),
                };
                best.absorb(r);
            }
            Ok(best)
        }
        Mode::Search => {
            let candidates = normer.structured_candidates(m);
            Ok(search_over_subsets(normer, m, m, budget, seed, path.as_ref(), candidates))
        }
    }
}

fn binomial_prefix(n: usize, k: usize) -> u64 {
    let mut total: u64 = 0;
    let mut c: u64 = 1;
    for i in 0..=k.min(n) {
        if i > 0 {
            c = c.saturating_mul((n - i + 1) as u64) / i as u64;
        }
        total = total.saturating_add(c);
    }
    total
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

/// `k_m`: sup of `||S_A||` over `|A| <= m`, `A` within the `dim`-truncation. Exhaustive
/// (and exact) when the basis has a closed-form ambient and the subset count is small.
pub fn compute_k_m(normer: &dyn Normer, m: usize, dim: usize, budget: &SearchBudget, seed: u64) -> Result<ProjNormResult> {
    if m == 0 || m > dim {
        return Err(Error::Domain(format!("k_m needs 1 <= m <= dim (m = {m}, dim = {dim})")));
    }
    check_dim(normer, dim)?;
    if normer.symmetric_space().is_some() {
        return Ok(symmetric_projection(&[0], dim));
    }
    let path = ExactPath::new(normer, dim)?;
    if let Some(p) = &path {
        if binomial_prefix(dim, m) <= EXACT_K_SUBSET_CAP {
            let mut best = ProjNormResult::zero();
            for_each_subset_upto(dim, m, &mut |set| best.absorb(p.projection_norm(set)));
            return Ok(best);
        }
    }
    Ok(search_over_subsets(normer, dim, m, budget, seed, path.as_ref(), normer.structured_candidates(m)))
}

/// Lower bound for `L_{M_r}` of the unit-vector system of `space`, from vectors that are
/// constant on each of the first `r` blocks: `f = sum_n a_n v_n`, projected onto whole
/// blocks. For these `Q_σ f = 0`, so the ratio equals `||S_A(sum a_n x_n)|| / ||sum a_n x_n||`
/// in the seed basis; the gauge is nevertheless evaluated directly.
pub fn dkk_witness_lb(
    space: &DkkSpace,
    r: usize,
    inner_dim_cap: usize,
    budget: &SearchBudget,
    samples: usize,
    seed: u64,
) -> Result<ProjNormResult> {
    let blocks = space.partition().len();
    if r == 0 || r > blocks {
        return Err(Error::Domain(format!("r = {r} outside the configured partition range [1, {blocks}]")));
    }
    let mut candidates: Vec<(Vec<f64>, Vec<usize>)> = Vec::new();
    let basis = space.basis();
    let mode = if r <= inner_dim_cap.min(EXACT_L_CAP) { Mode::Exact } else { Mode::Search };
    if let Some(w) = compute_l_m(basis, r, mode, budget, seed)?.witness {
        candidates.push((w.f, w.set));
    }
    let alternating: Vec<f64> = (0..r).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
    candidates.push((alternating, (0..r).step_by(2).collect()));
    for i in 0..samples {
        let mut rng = sample_rng(seed, i as u64 + 1);
        let a = heavy_tailed(&mut rng, r);
        let k = rng.gen_range(1..=r);
        candidates.push((a, random_subset(&mut rng, r, k)));
    }
    let mut best = ProjNormResult { value: 0.0, exact: false, witness: None };
    for (a, set) in candidates {
        if a.iter().all(|x| *x == 0.0) {
            continue;
        }
        let (f, b) = space.lift_block_witness(&a, &set);
        let value = projection_ratio(space, &f, &b);
        if value > best.value || best.witness.is_none() {
            best.value = value;
            best.witness = Some(Witness { f, set: b });
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

/// Least-squares fit of `value ≈ slope · (ln m)^exponent + intercept`.
pub fn log_growth_fit(points: &[(usize, f64)], exponent: f64) -> Result<GrowthFit> {
    if points.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    let xs: Vec<f64> = points.iter().map(|(m, _)| (*m as f64).ln().powf(exponent)).collect();
    let ys: Vec<f64> = points.iter().map(|(_, v)| *v).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if !(sxx > 1e-12 * xs.iter().map(|x| x * x).sum::<f64>().max(1e-300)) {
        return Err(Error::Fit("degenerate abscissas".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum::<f64>() / n).sqrt();
    Ok(GrowthFit { slope, intercept, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{difference_basis, summing_basis, unit_vector_basis};
    use crate::seqspace::{SymSpace, Weight};
    use approx::assert_relative_eq;

    fn budget() -> SearchBudget {
        SearchBudget { restarts: 2, random_subsets: 8, ascent: AscentConfig { sweeps: 30, ..Default::default() } }
    }

    #[test]
    fn unit_bases_have_norm_one_projections() {
        for s in [SymSpace::lp(1.0), SymSpace::lp(2.0), SymSpace::lp(3.0), SymSpace::Sup] {
            let b = unit_vector_basis(s).unwrap();
            let r = proj_operator_norm(&b, &[0, 2], 4, &budget(), 0).unwrap();
            assert_eq!(r.value, 1.0);
            assert!(r.exact);
            let l = compute_l_m(&b, 6, Mode::Exact, &budget(), 0).unwrap();
            let k = compute_k_m(&b, 3, 6, &budget(), 0).unwrap();
            assert_eq!((l.value, k.value), (1.0, 1.0));
        }
    }

    #[test]
    fn difference_basis_projection() {
        let d = difference_basis();
        // hand evaluation: f = (1,1) has norm 1, S_{2} f = (0,1) has norm 2
        assert_eq!(projection_ratio(&d, &[1.0, 1.0], &[1]), 2.0);
        let r = proj_operator_norm(&d, &[1], 2, &budget(), 0).unwrap();
        assert!(r.exact);
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-12);
        let w = r.witness.unwrap();
        assert_relative_eq!(w.ratio(&d), r.value, max_relative = 1e-9);
        let l2 = compute_l_m(&d, 2, Mode::Exact, &budget(), 0).unwrap();
        assert!(l2.value >= 2.0 - 1e-12);
    }

    #[test]
    fn summing_basis_projection() {
        let s = summing_basis();
        assert_eq!(projection_ratio(&s, &[1.0, -1.0, 1.0, -1.0], &[0, 2]), 2.0);
        let r = proj_operator_norm(&s, &[0, 2], 4, &budget(), 0).unwrap();
        assert!(r.value >= 2.0);
        assert_relative_eq!(r.witness.as_ref().unwrap().ratio(&s), r.value, max_relative = 1e-9);
        let l4 = compute_l_m(&s, 4, Mode::Exact, &budget(), 0).unwrap();
        assert!(l4.exact && l4.value >= 2.0);
    }

    #[test]
    fn summing_k_m_grows_linearly() {
        let s = summing_basis();
        for m in 1..=5 {
            let dim = 2 * m;
            let set: Vec<usize> = (0..dim).step_by(2).collect();
            let f: Vec<f64> = (0..dim).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
            // alternating witness: ||f|| = 1 and ||S_odd f|| = m
            assert_eq!(projection_ratio(&s, &f, &set), m as f64);
            let k = compute_k_m(&s, m, dim, &budget(), 0).unwrap();
            assert!(k.value >= m as f64);
        }
    }

    #[test]
    fn k_m_dominates_l_m() {
        for b in [summing_basis(), difference_basis()] {
            for m in 1..=6 {
                let l = compute_l_m(&b, m, Mode::Exact, &budget(), 0).unwrap();
                let k = compute_k_m(&b, m, m + 2, &budget(), 0).unwrap();
                assert!(l.exact && k.exact);
                assert!(k.value >= l.value - 1e-12, "{} m={m}: k={} L={}", b.name, k.value, l.value);
            }
        }
    }

    #[test]
    fn search_never_exceeds_exact() {
        for b in [summing_basis(), difference_basis()] {
            for dim in [3, 6, 9] {
                let path = ExactPath::new(&b, dim).unwrap().unwrap();
                for set in [vec![0], vec![0, 2], vec![1, 2, dim - 1]] {
                    let exact = path.projection_norm(&set).value;
                    let s = search_projection(&b, &set, dim, vec![], &budget(), 3);
                    assert!(s.value <= exact + 1e-9);
                    assert_relative_eq!(s.witness.unwrap().ratio(&b), s.value, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn exact_cap_is_enforced() {
        let r = compute_l_m(&summing_basis(), 21, Mode::Exact, &budget(), 0);
        assert!(matches!(r, Err(Error::Budget(_))));
        let lor = unit_vector_basis(SymSpace::lorentz(1.0, Weight::power(-0.5))).unwrap();
        assert_eq!(compute_l_m(&lor, 40, Mode::Search, &budget(), 0).unwrap().value, 1.0);
    }

    #[test]
    fn growth_fit() {
        let pts: Vec<(usize, f64)> = (2..10).map(|m| (m, 1.5 * (m as f64).ln())).collect();
        let fit = log_growth_fit(&pts, 1.0).unwrap();
        assert_relative_eq!(fit.slope, 1.5, max_relative = 1e-12);
        assert!(fit.residual < 1e-12);
        let flat: Vec<(usize, f64)> = (2..10).map(|m| (m, 3.0)).collect();
        assert!(log_growth_fit(&flat, 1.0).unwrap().slope.abs() < 1e-12);
        assert!(log_growth_fit(&[(4, 1.0), (4, 2.0), (4, 3.0)], 1.0).is_err());
        assert!(log_growth_fit(&[(4, 1.0), (5, 2.0)], 1.0).is_err());
    }
}
