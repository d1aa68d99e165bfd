//! Concrete bases, represented by the linear map from coefficients to ambient coordinates.
//!
//! For every basis here a coefficient vector of length `n` maps to `n` ambient
//! coordinates, so finite truncations are square matrices.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normer::{AmbientKind, Normer};
use crate::seqspace::SymSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisKind {
    /// The unit-vector system of a sequence space.
    Unit { space: SymSpace },
    /// `s_j = e_1 + ... + e_j` in `c_0`.
    Summing,
    /// `d_j = e_j - e_{j-1}` in `l_1`.
    Difference,
    /// `(x_1,0), (0,y_1), (x_2,0), ...` normed by `||x|| + ||y||`.
    DirectSum { first: Box<BasisRep>, second: Box<BasisRep> },
    /// Copies of `base` truncated to `sizes[r]` coefficients, glued in the `l_p` sense
    /// (`p = 0` for the max norm).
    BlockRepeat { base: Box<BasisRep>, sizes: Vec<usize>, p: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisRep {
    pub name: String,
    pub kind: BasisKind,
}

pub fn unit_vector_basis(space: SymSpace) -> Result<BasisRep> {
    space.validate()?;
    Ok(BasisRep { name: format!("unit({})", space_label(&space)), kind: BasisKind::Unit { space } })
}

pub fn summing_basis() -> BasisRep {
    BasisRep { name: "summing".into(), kind: BasisKind::Summing }
}

pub fn difference_basis() -> BasisRep {
    BasisRep { name: "difference".into(), kind: BasisKind::Difference }
}

pub fn direct_sum(first: BasisRep, second: BasisRep) -> BasisRep {
    BasisRep {
        name: format!("{}+{}", first.name, second.name),
        kind: BasisKind::DirectSum { first: Box::new(first), second: Box::new(second) },
    }
}

pub fn block_repeat(base: BasisRep, sizes: Vec<usize>, p: f64) -> Result<BasisRep> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::Config("block sizes must be a non-empty list of positive integers".into()));
    }
    if !(p == 0.0 || (p >= 1.0 && p.is_finite())) {
        return Err(Error::Config(format!("block gluing exponent must be 0 or in [1, inf), got {p}")));
    }
    if let Some(cap) = base.max_dim() {
        if let Some(&n) = sizes.iter().find(|&&n| n > cap) {
            return Err(Error::Config(format!("copy of size {n} exceeds the base dimension {cap}")));
        }
    }
    Ok(BasisRep {
        name: format!("blocks({})", base.name),
        kind: BasisKind::BlockRepeat { base: Box::new(base), sizes, p },
    })
}

/// `sup_r M_r / N_{r+1}` with `M_r = N_1 + ... + N_r`, over the listed sizes.
pub fn block_growth_ratio(sizes: &[usize]) -> f64 {
    let mut m = 0usize;
    let mut best: f64 = 0.0;
    for w in sizes.windows(2) {
        m += w[0];
        best = best.max(m as f64 / w[1] as f64);
    }
    best
}

pub(crate) fn space_label(space: &SymSpace) -> String {
    match space {
        SymSpace::Lp { p } => format!("l{p}"),
        SymSpace::Sup => "c0".into(),
        SymSpace::Lorentz { q, .. } => format!("d{q}(w)"),
        SymSpace::WeakLorentz { .. } => "d1inf(w)".into(),
        SymSpace::Variation => "v1".into(),
    }
}

fn split_interleaved(coeffs: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let odd = coeffs.iter().step_by(2).copied().collect();
    let even = coeffs.iter().skip(1).step_by(2).copied().collect();
    (odd, even)
}

impl BasisRep {
    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            BasisKind::Unit { space } => space.validate(),
            BasisKind::DirectSum { first, second } => {
                first.validate()?;
                second.validate()
            }
            BasisKind::BlockRepeat { base, .. } => base.validate(),
            _ => Ok(()),
        }
    }

    /// Largest number of coefficients the representation covers.
    pub fn max_dim(&self) -> Option<usize> {
        match &self.kind {
            BasisKind::BlockRepeat { sizes, .. } => Some(sizes.iter().sum()),
            BasisKind::DirectSum { first, second } => match (first.max_dim(), second.max_dim()) {
                (Some(a), Some(b)) => Some(a.min(b) * 2 + usize::from(a > b)),
                (Some(a), None) => Some(2 * a),
                (None, Some(b)) => Some(2 * b + 1),
                (None, None) => None,
            },
            _ => None,
        }
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.max_dim() {
            Some(cap) if dim > cap => Err(Error::Domain(format!(
                "{} covers {cap} coefficients, {dim} requested",
                self.name
            ))),
            _ => Ok(()),
        }
    }

    /// Ambient coordinates of `sum_j a_j x_j`.
    pub fn to_ambient(&self, coeffs: &[f64]) -> Vec<f64> {
        match &self.kind {
            BasisKind::Unit { .. } => coeffs.to_vec(),
            BasisKind::Summing => {
                let mut out = vec![0.0; coeffs.len()];
                let mut tail = 0.0;
                for k in (0..coeffs.len()).rev() {
                    tail += coeffs[k];
                    out[k] = tail;
                }
                out
            }
            BasisKind::Difference => (0..coeffs.len())
                .map(|k| coeffs[k] - coeffs.get(k + 1).copied().unwrap_or(0.0))
                .collect(),
            BasisKind::DirectSum { first, second } => {
                let (odd, even) = split_interleaved(coeffs);
                let mut out = first.to_ambient(&odd);
                out.extend(second.to_ambient(&even));
                out
            }
            BasisKind::BlockRepeat { base, .. } => {
                let mut out = Vec::with_capacity(coeffs.len());
                for chunk in self.copies(coeffs) {
                    out.extend(base.to_ambient(chunk));
                }
                out
            }
        }
    }

    fn copies<'a>(&self, coeffs: &'a [f64]) -> Vec<&'a [f64]> {
        let BasisKind::BlockRepeat { sizes, .. } = &self.kind else {
            unreachable!()
        };
        let total: usize = sizes.iter().sum();
        assert!(coeffs.len() <= total, "{} coefficients exceed the {total} configured in {}", coeffs.len(), self.name);
        let mut out = Vec::new();
        let mut start = 0;
        for &n in sizes {
            if start >= coeffs.len() {
                break;
            }
            let end = (start + n).min(coeffs.len());
            out.push(&coeffs[start..end]);
            start += n;
        }
        out
    }

    /// Closed-form norm family of the ambient coordinates, when there is one.
    pub fn ambient_kind(&self) -> Option<AmbientKind> {
        match &self.kind {
            BasisKind::Unit { space } => match space {
                SymSpace::Lp { p } if *p == 1.0 => Some(AmbientKind::L1),
                SymSpace::Lp { p } if *p == 2.0 => Some(AmbientKind::L2),
                SymSpace::Sup => Some(AmbientKind::Sup),
                _ => None,
            },
            BasisKind::Summing => Some(AmbientKind::Sup),
            BasisKind::Difference => Some(AmbientKind::L1),
            BasisKind::DirectSum { first, second } => match (first.ambient_kind(), second.ambient_kind()) {
                (Some(AmbientKind::L1), Some(AmbientKind::L1)) => Some(AmbientKind::L1),
                _ => None,
            },
            BasisKind::BlockRepeat { base, p, .. } => match (base.ambient_kind(), *p) {
                (Some(AmbientKind::L1), 1.0) => Some(AmbientKind::L1),
                (Some(AmbientKind::L2), 2.0) => Some(AmbientKind::L2),
                (Some(AmbientKind::Sup), 0.0) => Some(AmbientKind::Sup),
                _ => None,
            },
        }
    }

    /// Matrix of the coefficient-to-ambient map on the first `dim` coefficients.
    pub fn ambient_matrix(&self, dim: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(dim, dim);
        let mut e = vec![0.0; dim];
        for j in 0..dim {
            e[j] = 1.0;
            let col = self.to_ambient(&e);
            for (i, v) in col.into_iter().enumerate() {
                m[(i, j)] = v;
            }
            e[j] = 0.0;
        }
        m
    }

    /// `||x_j||` for `j < dim`.
    pub fn basis_vector_norms(&self, dim: usize) -> Vec<f64> {
        let mut e = vec![0.0; dim];
        (0..dim)
            .map(|j| {
                e[j] = 1.0;
                let v = self.norm(&e);
                e[j] = 0.0;
                v
            })
            .collect()
    }

    /// Norms `||x_j^*||` of the coordinate functionals on the `dim`-truncation, exact
    /// where the ambient norm has a closed-form dual.
    pub fn functional_norms(&self, dim: usize) -> Option<Vec<f64>> {
        if let BasisKind::Unit { space } = &self.kind {
            if space.is_subsymmetric() {
                return Some(vec![1.0 / space.lambda(1); dim]);
            }
        }
        let kind = self.ambient_kind()?;
        let inv = self.ambient_matrix(dim).try_inverse()?;
        Some((0..dim).map(|j| kind.dual_norm(inv.row(j).transpose().as_slice())).collect())
    }

    pub fn is_unit_vector_basis(&self) -> bool {
        matches!(self.kind, BasisKind::Unit { .. })
    }
}

impl Normer for BasisRep {
    fn norm(&self, coeffs: &[f64]) -> f64 {
        match &self.kind {
            BasisKind::Unit { space } => space.norm(coeffs),
            BasisKind::Summing => {
                let mut tail = 0.0;
                let mut best: f64 = 0.0;
                for a in coeffs.iter().rev() {
                    tail += a;
                    best = best.max(tail.abs());
                }
                best
            }
            BasisKind::Difference => AmbientKind::L1.norm(&self.to_ambient(coeffs)),
            BasisKind::DirectSum { first, second } => {
                let (odd, even) = split_interleaved(coeffs);
                first.norm(&odd) + second.norm(&even)
            }
            BasisKind::BlockRepeat { base, p, .. } => {
                let parts = self.copies(coeffs).into_iter().map(|c| base.norm(c));
                if *p == 0.0 {
                    parts.fold(0.0, f64::max)
                } else if *p == 1.0 {
                    parts.sum()
                } else {
                    parts.map(|v| v.powf(*p)).sum::<f64>().powf(1.0 / p)
                }
            }
        }
    }

    fn label(&self) -> String {
        self.name.clone()
    }

    fn max_dim(&self) -> Option<usize> {
        BasisRep::max_dim(self)
    }

    fn symmetric_space(&self) -> Option<&SymSpace> {
        match &self.kind {
            BasisKind::Unit { space } if space.is_subsymmetric() => Some(space),
            _ => None,
        }
    }

    fn ambient(&self, dim: usize) -> Option<(DMatrix<f64>, AmbientKind)> {
        self.ambient_kind().map(|k| (self.ambient_matrix(dim), k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_basis_examples() {
        let b = unit_vector_basis(SymSpace::lp(2.0)).unwrap();
        assert_relative_eq!(b.norm(&[3.0, 4.0]), 5.0, max_relative = 1e-15);
        let w = crate::seqspace::Weight::power(-0.5);
        let lor = unit_vector_basis(SymSpace::lorentz(1.0, w)).unwrap();
        assert_eq!(lor.basis_vector_norms(6), vec![1.0; 6]);
        assert_eq!(lor.to_ambient(&[1.0, -2.0]), vec![1.0, -2.0]);
    }

    #[test]
    fn summing_examples() {
        let s = summing_basis();
        assert_eq!(s.to_ambient(&[1.0, -1.0, 1.0, -1.0]), vec![0.0, -1.0, 0.0, -1.0]);
        assert_eq!(s.norm(&[1.0, -1.0, 1.0, -1.0]), 1.0);
        assert_eq!(s.norm(&[1.0]), 1.0);
        assert_eq!(s.to_ambient(&[1.0, 1.0]), vec![2.0, 1.0]);
        assert_eq!(s.norm(&[1.0, 1.0]), 2.0);
        assert_eq!(s.basis_vector_norms(5), vec![1.0; 5]);
        // a_j = y_j - y_{j+1}: functionals of norm 2 except the last
        assert_eq!(s.functional_norms(4).unwrap(), vec![2.0, 2.0, 2.0, 1.0]);
    }

    #[test]
    fn difference_examples() {
        let d = difference_basis();
        assert_eq!(d.to_ambient(&[1.0, 1.0]), vec![0.0, 1.0]);
        assert_eq!(d.norm(&[1.0, 1.0]), 1.0);
        assert_eq!(d.to_ambient(&[0.0, 1.0]), vec![-1.0, 1.0]);
        assert_eq!(d.norm(&[0.0, 1.0]), 2.0);
        assert_eq!(d.norm(&[1.0, 0.0]), 1.0);
        assert_eq!(d.norm(&[1.0; 9]), 1.0);
        assert_eq!(d.basis_vector_norms(4), vec![1.0, 2.0, 2.0, 2.0]);
        assert_eq!(d.functional_norms(4).unwrap(), vec![1.0; 4]);
    }

    #[test]
    fn direct_sum_examples() {
        let l2 = unit_vector_basis(SymSpace::lp(2.0)).unwrap();
        let ds = direct_sum(l2.clone(), l2.clone());
        assert_eq!(ds.norm(&[1.0, 1.0]), 2.0);
        // odd (1-based) positions only: the first summand's norm of the de-interleaved vector
        let f = [3.0, 0.0, 4.0, 0.0, 0.0];
        assert_relative_eq!(ds.norm(&f), 5.0, max_relative = 1e-15);
        let s = summing_basis();
        let ds2 = direct_sum(s.clone(), l2);
        let a = [1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0];
        assert_eq!(ds2.norm(&a), s.norm(&[1.0, -1.0, 1.0, -1.0]));
        assert_eq!(direct_sum(difference_basis(), difference_basis()).ambient_kind(), Some(AmbientKind::L1));
    }

    #[test]
    fn block_repeat_examples() {
        let s = summing_basis();
        let single = block_repeat(s.clone(), vec![5], 1.0).unwrap();
        let f = [1.0, -2.0, 0.5, 3.0, -1.0];
        assert_eq!(single.norm(&f), s.norm(&f));
        let two = block_repeat(s.clone(), vec![2, 3], 1.0).unwrap();
        assert_eq!(two.norm(&[0.0, 0.0, 1.0, -1.0, 1.0]), s.norm(&[1.0, -1.0, 1.0]));
        assert!(two.check_dim(6).is_err());
        assert!(block_repeat(s.clone(), vec![2, 0], 1.0).is_err());
        assert!(block_repeat(s, vec![2], 0.5).is_err());
        let sizes: Vec<usize> = (1..=12).map(|n| 1usize << n).collect();
        let g = block_growth_ratio(&sizes);
        // M_r = 2^{r+1} - 2, N_{r+1} = 2^{r+1}
        let oracle = (1..12).map(|r| ((1u64 << (r + 1)) - 2) as f64 / (1u64 << (r + 1)) as f64).fold(0.0, f64::max);
        assert_eq!(g, oracle);
        assert!(g < 1.0);
    }

    #[test]
    fn ambient_matrix_agrees_with_norm() {
        let bases = [
            summing_basis(),
            difference_basis(),
            block_repeat(summing_basis(), vec![2, 4], 0.0).unwrap(),
            block_repeat(difference_basis(), vec![3, 3], 1.0).unwrap(),
            direct_sum(difference_basis(), unit_vector_basis(SymSpace::lp(1.0)).unwrap()),
        ];
        let f = [0.5, -1.0, 2.0, 0.25, -0.75, 1.5];
        for b in &bases {
            let (m, kind) = b.ambient(6).unwrap();
            let y = &m * nalgebra::DVector::from_column_slice(&f);
            assert_relative_eq!(kind.norm(y.as_slice()), b.norm(&f), max_relative = 1e-14);
        }
    }
}
