use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A positive weight sequence `(w_n)_{n>=1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    /// `w_n = n^exponent`.
    Power { exponent: f64 },
    /// Listed values; the last entry is repeated past the end of the list.
    Explicit { values: Vec<f64> },
    /// The weight `n^{q/p - 1}` of the classical Lorentz space `l_{p,q}`.
    LorentzClassical { p: f64, q: f64 },
}

impl Weight {
    pub fn power(exponent: f64) -> Self {
        Weight::Power { exponent }
    }

    pub fn explicit(values: Vec<f64>) -> Self {
        Weight::Explicit { values }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Weight::Power { exponent } if !exponent.is_finite() => {
                Err(Error::Config(format!("weight exponent {exponent} is not finite")))
            }
            Weight::Explicit { values } if values.is_empty() => {
                Err(Error::Config("explicit weight list is empty".into()))
            }
            Weight::Explicit { values } => match values.iter().position(|w| !(*w > 0.0 && w.is_finite())) {
                Some(i) => Err(Error::Config(format!(
                    "weight entry {} = {} is not a positive finite scalar",
                    i + 1,
                    values[i]
                ))),
                None => Ok(()),
            },
            Weight::LorentzClassical { p, q } if !(*p >= 1.0 && *q >= 1.0 && p.is_finite() && q.is_finite()) => {
                Err(Error::Config(format!("classical Lorentz indices need 1 <= p, q < inf (got p={p}, q={q})")))
            }
            _ => Ok(()),
        }
    }

    /// `w_n` for `n >= 1`.
    pub fn at(&self, n: usize) -> f64 {
        debug_assert!(n >= 1);
        match self {
            Weight::Power { exponent } => (n as f64).powf(*exponent),
            Weight::Explicit { values } => values[(n - 1).min(values.len() - 1)],
            Weight::LorentzClassical { p, q } => (n as f64).powf(q / p - 1.0),
        }
    }

    /// `(w_1, ..., w_len)`.
    pub fn values(&self, len: usize) -> Vec<f64> {
        (1..=len).map(|n| self.at(n)).collect()
    }

    pub fn is_nonincreasing(&self, len: usize) -> bool {
        let v = self.values(len);
        v.windows(2).all(|w| w[1] <= w[0])
    }
}

/// A sequence-space norm (or, for the weak Lorentz space, a quasi-norm).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymSpace {
    /// `l_p` for finite `p >= 1`.
    Lp { p: f64 },
    /// `c_0` with the max norm (the `p = inf` member of the `l_p` family).
    Sup,
    /// `d_q(w)`: `(sum_n (a*_n)^q w_n)^{1/q}`.
    Lorentz { q: f64, weight: Weight },
    /// `d_1^inf(w)`: `sup_m a*_m (w_1 + ... + w_m)`. Only used as a test functional.
    WeakLorentz { weight: Weight },
    /// Bounded variation `v_1^0`: `|a_1| + sum_j |a_{j+1} - a_j|`, counting the final
    /// drop back to zero of a finitely supported sequence.
    Variation,
}

impl SymSpace {
    pub fn lp(p: f64) -> Self {
        SymSpace::Lp { p }
    }

    pub fn lorentz(q: f64, weight: Weight) -> Self {
        SymSpace::Lorentz { q, weight }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SymSpace::Lp { p } if !(*p >= 1.0) || !p.is_finite() => {
                Err(Error::Config(format!("l_p needs 1 <= p < inf, got p = {p}")))
            }
            SymSpace::Lorentz { q, .. } if !(*q >= 1.0) || !q.is_finite() => {
                Err(Error::Config(format!("Lorentz d_q(w) needs 1 <= q < inf, got q = {q}")))
            }
            SymSpace::Lorentz { weight, .. } | SymSpace::WeakLorentz { weight } => weight.validate(),
            _ => Ok(()),
        }
    }

    /// Whether the unit-vector system is a 1-subsymmetric (here: symmetric) basis
    /// for a genuine norm. The weak Lorentz quasi-norm and `v_1` are excluded.
    pub fn is_subsymmetric(&self) -> bool {
        matches!(self, SymSpace::Lp { .. } | SymSpace::Sup | SymSpace::Lorentz { .. })
    }

    /// Hölder conjugate exponent when the space is an `l_p` (`c_0` counts as `p = inf`).
    pub fn conjugate_exponent(&self) -> Option<f64> {
        match self {
            SymSpace::Lp { p } if *p == 1.0 => Some(f64::INFINITY),
            SymSpace::Lp { p } => Some(p / (p - 1.0)),
            SymSpace::Sup => Some(1.0),
            _ => None,
        }
    }

    /// Norm of `f`. Parameters are assumed valid; see [`eval_norm`] for the checked entry point.
    pub fn norm(&self, f: &[f64]) -> f64 {
        match self {
            SymSpace::Lp { p } => lp_norm(f, *p),
            SymSpace::Sup => f.iter().fold(0.0, |m, x| m.max(x.abs())),
            SymSpace::Lorentz { q, weight } => {
                let r = rearrange_nonincreasing(f);
                let mut s = 0.0;
                for (n, a) in r.iter().enumerate() {
                    if *a == 0.0 {
                        break;
                    }
                    s += a.powf(*q) * weight.at(n + 1);
                }
                if *q == 1.0 {
                    s
                } else {
                    s.powf(1.0 / q)
                }
            }
            SymSpace::WeakLorentz { weight } => {
                let r = rearrange_nonincreasing(f);
                let mut partial = 0.0;
                let mut best: f64 = 0.0;
                for (n, a) in r.iter().enumerate() {
                    if *a == 0.0 {
                        break;
                    }
                    partial += weight.at(n + 1);
                    best = best.max(a * partial);
                }
                best
            }
            SymSpace::Variation => {
                let mut prev = 0.0;
                let mut s = 0.0;
                for &a in f {
                    s += (a - prev).abs();
                    prev = a;
                }
                s + prev.abs()
            }
        }
    }

    /// `Λ_m`, the norm of `e_1 + ... + e_m`. Requires a subsymmetric space.
    pub fn lambda(&self, m: usize) -> f64 {
        match self {
            SymSpace::Lp { p } => (m as f64).powf(1.0 / p),
            SymSpace::Sup => {
                if m == 0 {
                    0.0
                } else {
                    1.0
                }
            }
            SymSpace::Lorentz { q, weight } => {
                let w: f64 = (1..=m).map(|n| weight.at(n)).sum();
                w.powf(1.0 / q)
            }
            SymSpace::WeakLorentz { weight } => (1..=m).map(|n| weight.at(n)).sum(),
            SymSpace::Variation => {
                if m == 0 {
                    0.0
                } else {
                    2.0
                }
            }
        }
    }

    /// `(Λ_0, Λ_1, ..., Λ_len)` with `Λ_0 = 0`.
    pub fn lambda_table(&self, len: usize) -> Vec<f64> {
        match self {
            SymSpace::Lorentz { q, weight } => {
                let mut out = Vec::with_capacity(len + 1);
                out.push(0.0);
                let mut w = 0.0;
                for n in 1..=len {
                    w += weight.at(n);
                    out.push(if *q == 1.0 { w } else { w.powf(1.0 / q) });
                }
                out
            }
            _ => (0..=len).map(|m| self.lambda(m)).collect(),
        }
    }
}

fn lp_norm(f: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        f.iter().map(|x| x.abs()).sum()
    } else if p == 2.0 {
        // scaled to avoid overflow on large entries
        let scale = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        scale * f.iter().map(|x| (x / scale) * (x / scale)).sum::<f64>().sqrt()
    } else {
        let scale = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        scale * f.iter().map(|x| (x.abs() / scale).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Checked norm evaluation.
pub fn eval_norm(space: &SymSpace, f: &[f64]) -> Result<f64> {
    space.validate()?;
    Ok(space.norm(f))
}

/// `|f|` sorted in non-increasing order; ties keep their original order.
pub fn rearrange_nonincreasing(f: &[f64]) -> Vec<f64> {
    let mut r: Vec<f64> = f.iter().map(|x| x.abs()).collect();
    r.sort_by(|a, b| b.total_cmp(a));
    r
}

fn require_subsymmetric(space: &SymSpace) -> Result<()> {
    space.validate()?;
    if space.is_subsymmetric() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{space:?} is not a subsymmetric sequence space")))
    }
}

/// `Λ_m = ||1_{[1,m]}||_S`.
pub fn fundamental_lambda(space: &SymSpace, m: usize) -> Result<f64> {
    require_subsymmetric(space)?;
    if m == 0 {
        return Err(Error::Domain("Λ_m is defined for m >= 1".into()));
    }
    Ok(space.lambda(m))
}

/// `Λ*_m = m / Λ_m`.
pub fn lambda_star(space: &SymSpace, m: usize) -> Result<f64> {
    Ok(m as f64 / fundamental_lambda(space, m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn examples_from_definitions() {
        assert_relative_eq!(SymSpace::lp(2.0).norm(&[3.0, 4.0]), 5.0, max_relative = 1e-15);
        let w = Weight::explicit(vec![1.0, 0.5, 1.0 / 3.0]);
        // brute force: sort |f| descending and dot with w
        let oracle = 3.0 * 1.0 + 2.0 * 0.5 + 1.0 / 3.0;
        assert_relative_eq!(SymSpace::lorentz(1.0, w).norm(&[3.0, 1.0, 2.0]), oracle, max_relative = 1e-15);
        assert_relative_eq!(oracle, 13.0 / 3.0, max_relative = 1e-15);
        let weak = SymSpace::WeakLorentz { weight: Weight::explicit(vec![1.0, 1.0, 1.0]) };
        assert_eq!(weak.norm(&[3.0, 1.0, 2.0]), 4.0);
    }

    #[test]
    fn variation_counts_final_drop() {
        // |1| + |3-1| + |2-3| + |0-2|
        assert_eq!(SymSpace::Variation.norm(&[1.0, 3.0, 2.0]), 6.0);
        assert_eq!(SymSpace::Variation.norm(&[1.0, 3.0, 2.0, 0.0, 0.0]), 6.0);
        assert_eq!(SymSpace::Variation.norm(&[]), 0.0);
    }

    #[test]
    fn trailing_zeros_are_inert() {
        let spaces = [
            SymSpace::lp(1.5),
            SymSpace::Sup,
            SymSpace::lorentz(2.0, Weight::power(-0.5)),
            SymSpace::WeakLorentz { weight: Weight::power(-0.3) },
        ];
        for s in &spaces {
            assert_eq!(s.norm(&[1.0, -2.0]), s.norm(&[1.0, -2.0, 0.0, 0.0]));
        }
    }

    #[test]
    fn rearrangement() {
        assert_eq!(rearrange_nonincreasing(&[0.0, -2.0, 1.0]), vec![2.0, 1.0, 0.0]);
        assert_eq!(rearrange_nonincreasing(&[1.0, 1.0, 1.0]), vec![1.0, 1.0, 1.0]);
        assert_eq!(rearrange_nonincreasing(&[5.0]), vec![5.0]);
    }

    #[test]
    fn lambda_examples() {
        assert_relative_eq!(fundamental_lambda(&SymSpace::lp(3.0), 8).unwrap(), 2.0, max_relative = 1e-14);
        let w = Weight::power(-0.5);
        let lor = SymSpace::lorentz(1.0, w.clone());
        let wsum: f64 = (1..=5).map(|n| (n as f64).powf(-0.5)).sum();
        assert_relative_eq!(fundamental_lambda(&lor, 5).unwrap(), wsum, max_relative = 1e-14);
        assert_relative_eq!(lambda_star(&lor, 5).unwrap(), 5.0 / wsum, max_relative = 1e-14);
        let lor2 = SymSpace::lorentz(2.0, w);
        assert_relative_eq!(fundamental_lambda(&lor2, 5).unwrap(), wsum.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(lambda_star(&SymSpace::lp(4.0), 16).unwrap(), 8.0, max_relative = 1e-14);
        for s in [SymSpace::lp(1.0), SymSpace::Sup, lor] {
            assert_eq!(fundamental_lambda(&s, 1).unwrap(), s.norm(&[1.0]));
            assert_relative_eq!(lambda_star(&s, 1).unwrap(), 1.0 / s.norm(&[1.0]));
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(eval_norm(&SymSpace::lp(0.5), &[1.0]), Err(Error::Config(_))));
        assert!(matches!(fundamental_lambda(&SymSpace::Variation, 3), Err(Error::Domain(_))));
        assert!(matches!(
            eval_norm(&SymSpace::lorentz(1.0, Weight::explicit(vec![1.0, -1.0])), &[1.0]),
            Err(Error::Config(_))
        ));
        assert_eq!(eval_norm(&SymSpace::lp(2.0), &[]).unwrap(), 0.0);
    }

    #[test]
    fn lambda_table_matches_pointwise() {
        let s = SymSpace::lorentz(1.5, Weight::power(-0.25));
        let t = s.lambda_table(20);
        for m in 1..=20 {
            assert_relative_eq!(t[m], s.lambda(m), max_relative = 1e-13);
            let ind = vec![1.0; m];
            assert_relative_eq!(t[m], s.norm(&ind), max_relative = 1e-13);
        }
    }
}
