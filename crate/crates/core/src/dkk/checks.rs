//! Per-vector verification of the inequalities that make the gauge a norm with a
//! quasi-greedy unit-vector system, together with the constants they are checked against.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::normer::{project, Normer};
use crate::seqspace::{check_lrp, check_urp, dini_constant, RegularityVerdict};

use super::space::DkkSpace;

/// Relative slack for all inequality checks.
pub const CHECK_RTOL: f64 = 1e-9;
/// Absolute tolerance for the exact identities.
pub const IDENTITY_ATOL: f64 = 1e-12;
/// Largest `b` tried by the regularity checks behind `lemma_constants`.
pub const REGULARITY_B_MAX: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Inequality {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Inequality { lhs, rhs, holds: lhs <= rhs + CHECK_RTOL * rhs.abs().max(lhs.abs()) + 1e-15 }
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingCheck {
    /// `||f||_{d_1^∞(w)} <= (1 + C_σ) ν ||f||`.
    pub lower: Inequality,
    /// `||f|| <= (3 + C_σ) ν ||f||_{d_1(w')}`.
    pub upper: Inequality,
    /// `||f|| <= (3 + C_σ) C_d ν ||f||_{d_1(w)}`, when `Λ` has the LRP.
    pub dini: Option<Inequality>,
}

/// Constants assembled from `Λ`, `Λ*`, the partition and the seed basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaConstants {
    pub horizon: usize,
    pub c_sigma: f64,
    /// `max_r Λ*_{M_r} / Λ*_{|σ_r|}`.
    pub c1: f64,
    /// `max_r Σ_{n=r}^R Λ*_{|σ_r|} / Λ*_{|σ_n|}`.
    pub c2: f64,
    /// `max_r Λ_{M_r} / Λ_{|σ_r|}`.
    pub c3: f64,
    /// `max_r Σ_{n=r}^R Λ_{|σ_r|} / Λ_{|σ_n|}`.
    pub c4: f64,
    pub lrp: RegularityVerdict,
    pub urp: RegularityVerdict,
    pub dini: f64,
    /// `max_n ||x_n||` and `min_n ||x_n||` over the first `R` vectors.
    pub basis_norm_max: f64,
    pub basis_norm_min: f64,
    /// `max_n ||x_n^*||` on the `R`-truncation, if computable.
    pub functional_norm_max: Option<f64>,
    /// `max_n ||x_n|| ||x_n^*||`.
    pub biorthogonal_max: Option<f64>,
    /// `"lrp_urp"`, `"l1"` or `"inapplicable"`.
    pub case: String,
    pub c_a: Option<f64>,
    /// Lower and upper embedding constants against `d_1^∞(w)` and `d_1(w)`.
    pub embedding_lower: f64,
    pub embedding_upper: Option<f64>,
    /// `C_a + embedding_lower · embedding_upper`; the quasi-greedy constant is this plus `C_b`.
    pub qg_without_cb: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailCheck {
    /// The block index `r` used for the hypothesis.
    pub r: usize,
    pub main: Inequality,
}

fn ratio_max(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, f64::max)
}

impl DkkSpace {
    fn normalization_spread(&self) -> f64 {
        let (lo, hi) = self.basis_norm_range();
        (hi / lo).max(1.0)
    }

    /// The two identities `v_n^*(S_B f) = 1_A(n) v_n^*(f)` and `S_B Q f = Q S_B f` for
    /// a block-aligned `B = ∪_{n ∈ A} σ_n` (0-based coordinates).
    pub fn commuting_check(&self, f: &[f64], set: &[usize]) -> Result<bool> {
        let f = self.padded(f)?;
        let blocks = self
            .partition()
            .as_block_union(set)
            .ok_or_else(|| Error::Domain("set is not a union of partition blocks".into()))?;
        let scale = f.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let tol = IDENTITY_ATOL * scale;
        let sbf = project(&f, set);
        let v_all = self.v_coeffs(&f)?;
        let v_sb = self.v_coeffs(&sbf)?;
        let first = v_all.iter().zip(&v_sb).enumerate().all(|(n, (a, b))| {
            let expect = if blocks.contains(&(n + 1)) { *a } else { 0.0 };
            (b - expect).abs() <= tol
        });
        let lhs = project(&self.q_projection(&f)?, set);
        let rhs = self.q_projection(&sbf)?;
        let second = lhs.iter().zip(&rhs).all(|(a, b)| (a - b).abs() <= tol);
        Ok(first && second)
    }

    pub fn embedding_check(&self, f: &[f64]) -> Result<EmbeddingCheck> {
        let f = self.padded(f)?;
        let dim = self.dim();
        let c = self.partition().c_sigma();
        let nu = self.normalization_spread();
        let gauge = self.dkk_norm(&f)?;
        let mut a: Vec<f64> = f.iter().map(|x| x.abs()).collect();
        a.sort_by(|x, y| y.total_cmp(x));
        let weak = (1..=dim).map(|m| a[m - 1] * self.lambda(m)).fold(0.0, f64::max);
        let strong_prime: f64 = (1..=dim).map(|n| a[n - 1] * self.lambda(n) / n as f64).sum();
        let strong: f64 = (1..=dim).map(|n| a[n - 1] * (self.lambda(n) - self.lambda(n - 1))).sum();
        let lower = Inequality::new(weak, (1.0 + c) * nu * gauge);
        let upper = Inequality::new(gauge, (3.0 + c) * nu * strong_prime);
        let dini = self.lrp_verdict().witness.map(|_| {
            let cd = dini_constant(|m| self.lambda(m), dim);
            Inequality::new(gauge, (3.0 + c) * cd * nu * strong)
        });
        Ok(EmbeddingCheck { lower, upper, dini })
    }

    fn lambda_extended(&self) -> Vec<f64> {
        self.space().lambda_table(REGULARITY_B_MAX * self.dim())
    }

    fn lrp_verdict(&self) -> RegularityVerdict {
        let table = self.lambda_extended();
        check_lrp(|m| table[m], REGULARITY_B_MAX, self.dim())
    }

    /// Constants of the tail-projection estimate and of the quasi-greedy bound.
    ///
    /// The seed basis enters through `X = max ||x_n||`, `F = max ||x_n^*||`,
    /// `K = max ||x_n|| ||x_n^*||` and `1/min ||x_n||`; for normalized bimonotone
    /// bases all of these are 1 and the assembled constants are
    /// `2 C1 C2 + max(5, 2 C3 C4)` and `max(6, 3 C3 C4)`.
    pub fn lemma_constants(&self, horizon: usize) -> LemmaConstants {
        let p = self.partition();
        let r_max = p.len();
        let ls = |m: usize| self.lambda_star(m);
        let l = |m: usize| self.lambda(m);
        let c1 = ratio_max((1..=r_max).map(|r| ls(p.m_r(r)) / ls(p.size(r))));
        let c2 = ratio_max((1..=r_max).map(|r| (r..=r_max).map(|n| ls(p.size(r)) / ls(p.size(n))).sum()));
        let c3 = ratio_max((1..=r_max).map(|r| l(p.m_r(r)) / l(p.size(r))));
        let c4 = ratio_max((1..=r_max).map(|r| (r..=r_max).map(|n| l(p.size(r)) / l(p.size(n))).sum()));

        let table = self.space().lambda_table(REGULARITY_B_MAX * horizon.max(1));
        let lrp = check_lrp(|m| table[m], REGULARITY_B_MAX, horizon);
        let urp = check_urp(|m| table[m], REGULARITY_B_MAX, horizon);
        let dini = dini_constant(|m| table[m], horizon.min(self.dim()).max(1));

        let norms = self.basis().basis_vector_norms(r_max);
        let x_max = norms.iter().copied().fold(0.0, f64::max);
        let x_min = norms.iter().copied().fold(f64::INFINITY, f64::min);
        let functionals = self.basis().functional_norms(r_max);
        let f_max = functionals.as_ref().map(|v| v.iter().copied().fold(0.0, f64::max));
        let k_max = functionals
            .as_ref()
            .map(|v| v.iter().zip(&norms).map(|(a, b)| a * b).fold(0.0, f64::max));

        let c_sigma = p.c_sigma();
        let low = (1.0 / x_min).max(1.0);
        let embedding_lower = (1.0 + c_sigma) * f_max.unwrap_or(f64::INFINITY).max(1.0);
        let embedding_upper = lrp.witness.map(|_| (3.0 + x_max * c_sigma) * dini);

        let (case, c_a, note) = match (f_max, k_max) {
            (Some(fm), Some(_)) if self.is_l1() => {
                let v = (5.0 + x_max).max((2.0 + x_max) * c3 * c4 * fm);
                ("l1", Some(v), None)
            }
            (Some(fm), Some(km)) if lrp.witness.is_some() && urp.witness.is_some() => {
                let v = 2.0 * c1 * c2 * x_max * low * km.max(1.0) + 5f64.max(2.0 * c3 * c4 * fm);
                ("lrp_urp", Some(v), None)
            }
            (Some(_), Some(_)) => (
                "inapplicable",
                None,
                Some(format!(
                    "Λ fails {} up to m = {horizon}, b <= {REGULARITY_B_MAX}",
                    if lrp.witness.is_none() { "the LRP" } else { "the URP" }
                )),
            ),
            _ => ("inapplicable", None, Some("coordinate functional norms of the seed basis are unavailable".into())),
        };
        let qg_without_cb = match (c_a, embedding_upper) {
            (Some(a), Some(u)) if embedding_lower.is_finite() => Some(a + embedding_lower * u),
            _ => None,
        };
        LemmaConstants {
            horizon,
            c_sigma,
            c1,
            c2,
            c3,
            c4,
            lrp,
            urp,
            dini,
            basis_norm_max: x_max,
            basis_norm_min: x_min,
            functional_norm_max: f_max,
            biorthogonal_max: k_max,
            case: case.into(),
            c_a,
            embedding_lower,
            embedding_upper,
            qg_without_cb,
            note,
        }
    }

    /// `||S_A f|| <= C_a ||f||` for `A ⊆ ∪_{n >= r} σ_n` with `|A| <= M_r`.
    pub fn tail_projection_check(&self, f: &[f64], set: &[usize], constants: &LemmaConstants) -> Result<TailCheck> {
        let f = self.padded(f)?;
        let c_a = constants
            .c_a
            .ok_or_else(|| Error::Domain(format!("tail estimate inapplicable: {}", constants.note.clone().unwrap_or_default())))?;
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        let p = self.partition();
        // the largest r with A ⊆ ∪_{n >= r} σ_n is the block of min A
        let r = match set.first() {
            None => 1,
            Some(&j) => p
                .block_of(j)
                .ok_or_else(|| Error::Domain(format!("tail clause: coordinate {} is outside [1, {}]", j + 1, p.total())))?,
        };
        if let Some(&j) = set.iter().find(|&&j| j >= p.total()) {
            return Err(Error::Domain(format!("tail clause: coordinate {} is outside [1, {}]", j + 1, p.total())));
        }
        if set.len() > p.m_r(r) {
            return Err(Error::Domain(format!(
                "cardinality clause: |A| = {} exceeds M_r = {} for r = {r}",
                set.len(),
                p.m_r(r)
            )));
        }
        let lhs = self.norm(&project(&f, &set));
        Ok(TailCheck { r, main: Inequality::new(lhs, c_a * self.norm(&f)) })
    }

    fn check_within_block(&self, n: usize, set: &[usize]) -> Result<()> {
        if n == 0 || n > self.partition().len() {
            return Err(Error::Domain(format!("block {n} outside [1, {}]", self.partition().len())));
        }
        let range = self.partition().block(n);
        if let Some(j) = set.iter().find(|j| !range.contains(j)) {
            return Err(Error::Domain(format!("coordinate {} is not in block {n}", j + 1)));
        }
        Ok(())
    }

    /// `|v_n^*(S_A f)| <= 2 Λ*_{|A|} / Λ*_{|σ_n|} ||S_{σ_n} f||_S` for `A ⊆ σ_n`.
    pub fn projection_lemma_check(&self, f: &[f64], n: usize, set: &[usize]) -> Result<Inequality> {
        let f = self.padded(f)?;
        self.check_within_block(n, set)?;
        let size = self.partition().size(n);
        let lhs = self.v_coeffs(&project(&f, set))?[n - 1].abs();
        let block: Vec<usize> = self.partition().block(n).collect();
        let rhs = 2.0 * self.lambda_star(set.len()) / self.lambda_star(size) * self.sym_norm(&project(&f, &block));
        Ok(Inequality::new(lhs, rhs))
    }

    /// In `l_1`: `|v_n^*(S_A f)| <= Λ_{|A|}/Λ_{|σ_n|} |v_n^*(f)| + Σ_{σ_n} |a_j - Av(f, σ_n)|`.
    pub fn projection_lemma_l1_check(&self, f: &[f64], n: usize, set: &[usize]) -> Result<Inequality> {
        if !self.is_l1() {
            return Err(Error::Domain("the l_1 projection estimate needs S = l_1".into()));
        }
        let f = self.padded(f)?;
        self.check_within_block(n, set)?;
        let size = self.partition().size(n);
        let lhs = self.v_coeffs(&project(&f, set))?[n - 1].abs();
        let vn = self.v_coeffs(&f)?[n - 1];
        let range = self.partition().block(n);
        let av = f[range.clone()].iter().sum::<f64>() / size as f64;
        let dev: f64 = f[range].iter().map(|a| (a - av).abs()).sum();
        Ok(Inequality::new(lhs, self.lambda(set.len()) / self.lambda(size) * vn.abs() + dev))
    }

    /// `||Q S_A f||_S <= 5 ||Q f||_S + 2 Σ_n Λ_{|A_n|}/Λ_{|σ_n|} |v_n^*(f)|`.
    pub fn ax_norm_estimate_check(&self, f: &[f64], set: &[usize]) -> Result<Inequality> {
        let f = self.padded(f)?;
        if let Some(j) = set.iter().find(|&&j| j >= self.dim()) {
            return Err(Error::Domain(format!("coordinate {} is outside the partition range", j + 1)));
        }
        let lhs = self.sym_norm(&self.q_projection(&project(&f, set))?);
        let v = self.v_coeffs(&f)?;
        let p = self.partition();
        let tail: f64 = (1..=p.len())
            .map(|n| {
                let range = p.block(n);
                let a_n = set.iter().filter(|j| range.contains(j)).count();
                self.lambda(a_n) / self.lambda(range.len()) * v[n - 1].abs()
            })
            .sum();
        Ok(Inequality::new(lhs, 5.0 * self.sym_norm(&self.q_projection(&f)?) + 2.0 * tail))
    }

    /// `(k/(k+n)) Λ_n + (n/(k+n)) Λ_k <= 2 Λ_k`.
    pub fn lemma7_check(&self, k: usize, n: usize) -> Result<Inequality> {
        if k == 0 || n == 0 || k > self.dim() || n > self.dim() {
            return Err(Error::Domain(format!("indices ({k}, {n}) outside [1, {}]", self.dim())));
        }
        let (kf, nf) = (k as f64, n as f64);
        let lhs = kf / (kf + nf) * self.lambda(n) + nf / (kf + nf) * self.lambda(k);
        Ok(Inequality::new(lhs, 2.0 * self.lambda(k)))
    }

    /// `c_1^{-1} ||f||_S <= ||f|| <= c_2 ||f||_S` for `f` supported in one block, with
    /// `(c_1, c_2) = (1, 5)` for normalized bases and
    /// `(max(1, 1/min ||x_n||), 5 max(1, max ||x_n||))` otherwise.
    pub fn sandwich_check(&self, f: &[f64]) -> Result<(Inequality, Inequality)> {
        let f = self.padded(f)?;
        let support: Vec<usize> = (0..f.len()).filter(|&j| f[j] != 0.0).collect();
        let p = self.partition();
        if let Some(&j0) = support.first() {
            let n = p.block_of(j0).expect("padded");
            if support.iter().any(|&j| p.block_of(j) != Some(n)) {
                return Err(Error::Domain("f is not supported on a single block".into()));
            }
        }
        let (lo, hi) = self.basis_norm_range();
        let (c1, c2) = ((1.0 / lo).max(1.0), 5.0 * hi.max(1.0));
        let s = self.sym_norm(&f);
        let g = self.norm(&f);
        Ok((Inequality::new(s, c1 * g), Inequality::new(g, c2 * s)))
    }

    /// `max_k |a_k| <= C ||f||` with `C = max(1, max ||x_n^*||) / Λ_1`.
    pub fn coordinate_bound_check(&self, f: &[f64]) -> Result<Inequality> {
        let f = self.padded(f)?;
        let fm = self
            .basis()
            .functional_norms(self.partition().len())
            .ok_or_else(|| Error::Domain("coordinate functional norms of the seed basis are unavailable".into()))?
            .into_iter()
            .fold(1.0, f64::max);
        let lhs = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Ok(Inequality::new(lhs, fm / self.lambda(1) * self.norm(&f)))
    }
}
