use crate::bases::BasisRep;
use crate::error::{Error, Result};
use crate::normer::{project, Normer};
use crate::seqspace::SymSpace;

use super::partition::Partition;

/// Relative tolerance for "block average vanishes" when validating inputs of `g_map`.
pub const RANGE_RTOL: f64 = 1e-10;

/// The sequence space built from a basis `(x_n)`, a subsymmetric space `S` and an
/// ordered partition `σ`, normed by `||Q_σ f||_S + ||Σ v_n^*(f) x_n||_X` on `[1, M_R]`.
#[derive(Debug, Clone)]
pub struct DkkSpace {
    basis: BasisRep,
    space: SymSpace,
    partition: Partition,
    lambda: Vec<f64>,
}

impl DkkSpace {
    pub fn new(basis: BasisRep, space: SymSpace, partition: Partition) -> Result<Self> {
        basis.validate()?;
        space.validate()?;
        if !space.is_subsymmetric() {
            return Err(Error::Domain(format!("{space:?} is not subsymmetric")));
        }
        basis.check_dim(partition.len())?;
        let lambda = space.lambda_table(partition.total());
        Ok(DkkSpace { basis, space, partition, lambda })
    }

    pub fn basis(&self) -> &BasisRep {
        &self.basis
    }

    pub fn space(&self) -> &SymSpace {
        &self.space
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// `M_R`, the number of coordinates.
    pub fn dim(&self) -> usize {
        self.partition.total()
    }

    pub fn is_l1(&self) -> bool {
        matches!(self.space, SymSpace::Lp { p } if p == 1.0)
    }

    /// `Λ_m` for `m <= M_R`.
    pub fn lambda(&self, m: usize) -> f64 {
        self.lambda[m]
    }

    /// `Λ*_m = m / Λ_m`, with `Λ*_0 = 0`.
    pub fn lambda_star(&self, m: usize) -> f64 {
        if m == 0 {
            0.0
        } else {
            m as f64 / self.lambda[m]
        }
    }

    pub(crate) fn padded(&self, f: &[f64]) -> Result<Vec<f64>> {
        let dim = self.dim();
        if let Some(j) = f.iter().skip(dim).position(|x| *x != 0.0) {
            return Err(Error::Domain(format!(
                "coordinate {} is outside the partition range [1, {dim}]",
                dim + j + 1
            )));
        }
        let mut out = f[..f.len().min(dim)].to_vec();
        out.resize(dim, 0.0);
        Ok(out)
    }

    fn block_sums(&self, f: &[f64]) -> Vec<f64> {
        (1..=self.partition.len()).map(|n| f[self.partition.block(n)].iter().sum()).collect()
    }

    fn avg_unchecked(&self, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; f.len()];
        for (n, s) in self.block_sums(f).into_iter().enumerate() {
            let range = self.partition.block(n + 1);
            let av = s / range.len() as f64;
            out[range].iter_mut().for_each(|x| *x = av);
        }
        out
    }

    fn q_unchecked(&self, f: &[f64]) -> Vec<f64> {
        let p = self.avg_unchecked(f);
        f.iter().zip(p).map(|(a, b)| a - b).collect()
    }

    fn v_unchecked(&self, f: &[f64]) -> Vec<f64> {
        self.block_sums(f)
            .into_iter()
            .enumerate()
            .map(|(n, s)| {
                let k = self.partition.size(n + 1);
                self.lambda[k] / k as f64 * s
            })
            .collect()
    }

    fn gauge(&self, f: &[f64]) -> f64 {
        self.space.norm(&self.q_unchecked(f)) + self.basis.norm(&self.v_unchecked(f))
    }

    /// `P_σ f`: every block replaced by its average.
    pub fn avg_projection(&self, f: &[f64]) -> Result<Vec<f64>> {
        Ok(self.avg_unchecked(&self.padded(f)?))
    }

    /// `Q_σ f = f - P_σ f`.
    pub fn q_projection(&self, f: &[f64]) -> Result<Vec<f64>> {
        Ok(self.q_unchecked(&self.padded(f)?))
    }

    /// `(v_n^*(f))_{n <= R}` with `v_n^*(f) = (Λ_{|σ_n|} / |σ_n|) Σ_{j ∈ σ_n} a_j`.
    pub fn v_coeffs(&self, f: &[f64]) -> Result<Vec<f64>> {
        Ok(self.v_unchecked(&self.padded(f)?))
    }

    /// `v_n = 1_{σ_n} / Λ_{|σ_n|}`, 1-based `n`.
    pub fn v_vector(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        let range = self.partition.block(n);
        let c = 1.0 / self.lambda[range.len()];
        out[range].iter_mut().for_each(|x| *x = c);
        out
    }

    pub fn dkk_norm(&self, f: &[f64]) -> Result<f64> {
        Ok(self.gauge(&self.padded(f)?))
    }

    /// `H(f) = (Q_σ f, (v_n^*(f))_n)`.
    pub fn h_map(&self, f: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let f = self.padded(f)?;
        Ok((self.q_unchecked(&f), self.v_unchecked(&f)))
    }

    /// `G(g, h) = g + Σ h_n v_n`, for `g` with vanishing block averages.
    pub fn g_map(&self, g: &[f64], h: &[f64]) -> Result<Vec<f64>> {
        let g = self.padded(g)?;
        if h.len() > self.partition.len() {
            return Err(Error::Domain(format!(
                "{} coefficients for {} blocks",
                h.len(),
                self.partition.len()
            )));
        }
        for n in 1..=self.partition.len() {
            let block = &g[self.partition.block(n)];
            let sum: f64 = block.iter().sum();
            let scale: f64 = block.iter().map(|x| x.abs()).sum();
            if sum.abs() > RANGE_RTOL * scale.max(f64::MIN_POSITIVE) && sum != 0.0 {
                return Err(Error::Domain(format!("g has nonzero average {sum:e} on block {n}")));
            }
        }
        let mut out = g;
        for (n, &c) in h.iter().enumerate() {
            let range = self.partition.block(n + 1);
            let v = c / self.lambda[range.len()];
            out[range].iter_mut().for_each(|x| *x += v);
        }
        Ok(out)
    }

    /// Block-constant vector `f = Σ_{n <= r} a_n v_n` and the coordinate union of the
    /// blocks listed in `blocks` (0-based block indices).
    pub fn lift_block_witness(&self, a: &[f64], blocks: &[usize]) -> (Vec<f64>, Vec<usize>) {
        let mut f = vec![0.0; self.dim()];
        for (n, &c) in a.iter().enumerate() {
            let range = self.partition.block(n + 1);
            let v = c / self.lambda[range.len()];
            f[range].iter_mut().for_each(|x| *x = v);
        }
        let one_based: Vec<usize> = blocks.iter().map(|n| n + 1).collect();
        (f, self.partition.union_of(&one_based))
    }

    /// `||f||_S`.
    pub fn sym_norm(&self, f: &[f64]) -> f64 {
        self.space.norm(f)
    }

    /// `(min, max)` of `||x_n||` over the first `R` basis vectors.
    pub fn basis_norm_range(&self) -> (f64, f64) {
        let norms = self.basis.basis_vector_norms(self.partition.len());
        let lo = norms.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = norms.iter().copied().fold(0.0, f64::max);
        (lo, hi)
    }
}

impl Normer for DkkSpace {
    fn norm(&self, coeffs: &[f64]) -> f64 {
        if coeffs.len() == self.dim() {
            return self.gauge(coeffs);
        }
        self.dkk_norm(coeffs).expect("coefficients within the partition range")
    }

    fn label(&self) -> String {
        format!(
            "dkk({}, {}, {:?})",
            self.basis.name,
            crate::bases::space_label(&self.space),
            self.partition.sizes()
        )
    }

    fn max_dim(&self) -> Option<usize> {
        Some(self.dim())
    }

    /// Block-constant alternating vectors projected onto every other block, and the
    /// alternating-sign vector projected onto the odd coordinates.
    fn structured_candidates(&self, m: usize) -> Vec<(Vec<f64>, Vec<usize>)> {
        let mut out = Vec::new();
        let blocks = (1..=self.partition.len()).take_while(|&r| self.partition.m_r(r) <= m).count();
        for r in 1..=blocks {
            let a: Vec<f64> = (0..r).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
            let chosen: Vec<usize> = (0..r).step_by(2).collect();
            let (mut f, set) = self.lift_block_witness(&a, &chosen);
            f.truncate(m);
            out.push((f, set));
        }
        let alt: Vec<f64> = (0..m).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        out.push((alt, (0..m).step_by(2).collect()));
        out
    }

    /// `Λ_m / (1 + C_σ) <= φ_m <= (3 + C_σ) ||1_m||_{d_1(w')}`, scaled by the spread of
    /// `||x_n||`.
    fn fundamental_bounds(&self, m: usize) -> Option<(f64, f64)> {
        if m == 0 || m > self.dim() {
            return None;
        }
        let c = self.partition.c_sigma();
        let (lo, hi) = self.basis_norm_range();
        let nu = (hi / lo).max(1.0);
        let strong: f64 = (1..=m).map(|n| self.lambda[n] / n as f64).sum();
        Some((self.lambda[m] / ((1.0 + c) * nu), (3.0 + c) * nu * strong))
    }
}

/// `||S_A f|| / ||f||` on a DKK space, with `A` given as 0-based coordinates.
pub fn dkk_projection_ratio(space: &DkkSpace, f: &[f64], set: &[usize]) -> Result<f64> {
    let den = space.dkk_norm(f)?;
    Ok(if den == 0.0 { 0.0 } else { space.dkk_norm(&project(f, set))? / den })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{summing_basis, unit_vector_basis};
    use approx::assert_relative_eq;

    fn l2_dkk(blocks: Vec<usize>) -> DkkSpace {
        DkkSpace::new(summing_basis(), SymSpace::lp(2.0), Partition::new(blocks).unwrap()).unwrap()
    }

    #[test]
    fn averaging_example() {
        let y = l2_dkk(vec![2, 2]);
        let f = [1.0, 3.0, 5.0, 7.0];
        assert_eq!(y.avg_projection(&f).unwrap(), vec![2.0, 2.0, 6.0, 6.0]);
        assert_eq!(y.q_projection(&f).unwrap(), vec![-1.0, 1.0, -1.0, 1.0]);
        let p = y.avg_projection(&f).unwrap();
        assert_eq!(y.avg_projection(&p).unwrap(), p);
        assert!(matches!(y.avg_projection(&[0.0, 0.0, 0.0, 0.0, 1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn v_coefficient_examples() {
        let y = l2_dkk(vec![2, 3]);
        let v = y.v_coeffs(&[1.0, 3.0]).unwrap();
        assert_relative_eq!(v[0], 2.0 * 2f64.sqrt(), max_relative = 1e-15);
        // P_σ f = Σ v_n^*(f) v_n
        let f = [1.0, 3.0, -2.0, 0.5, 4.0];
        let coeffs = y.v_coeffs(&f).unwrap();
        let p = y.avg_projection(&f).unwrap();
        let rebuilt: Vec<f64> = (0..5).map(|j| coeffs[0] * y.v_vector(1)[j] + coeffs[1] * y.v_vector(2)[j]).collect();
        for (a, b) in p.iter().zip(&rebuilt) {
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
        for n in 1..=2 {
            assert_relative_eq!(y.sym_norm(&y.v_vector(n)), 1.0, max_relative = 1e-15);
            let c = y.v_coeffs(&y.v_vector(n)).unwrap();
            for (k, ck) in c.iter().enumerate() {
                assert_relative_eq!(*ck, if k + 1 == n { 1.0 } else { 0.0 }, epsilon = 1e-15);
            }
        }
        let l1 = DkkSpace::new(summing_basis(), SymSpace::lp(1.0), Partition::dyadic(3).unwrap()).unwrap();
        assert_eq!(l1.v_coeffs(&[1.0, 2.0, 3.0, 1.0, 1.0, 1.0, 1.0]).unwrap(), vec![1.0, 5.0, 4.0]);
    }

    #[test]
    fn gauge_examples() {
        let y = l2_dkk(vec![1, 2, 4]);
        // block constant: gauge equals the seed-basis norm of the coefficients
        let (f, _) = y.lift_block_witness(&[1.0, -1.0, 1.0], &[]);
        assert_relative_eq!(y.dkk_norm(&f).unwrap(), 1.0, max_relative = 1e-14);
        // one block: ||Q f|| + |v_k^*(f)| ||x_k||
        let f = [0.0, 0.0, 0.0, 1.0, 2.0, -1.0, 3.0];
        let q = y.q_projection(&f).unwrap();
        let v = y.v_coeffs(&f).unwrap();
        assert_relative_eq!(y.dkk_norm(&f).unwrap(), y.sym_norm(&q) + v[2].abs(), max_relative = 1e-14);
    }

    #[test]
    fn h_and_g_round_trip() {
        let y = l2_dkk(vec![1, 2, 4, 8]);
        let f: Vec<f64> = (0..15).map(|j| ((j * 7 % 5) as f64) - 1.5).collect();
        let (g, h) = y.h_map(&f).unwrap();
        let back = y.g_map(&g, &h).unwrap();
        for (a, b) in f.iter().zip(&back) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
        let (g2, h2) = y.h_map(&back).unwrap();
        for (a, b) in g.iter().zip(&g2).chain(h.iter().zip(&h2)) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
        assert!(matches!(y.g_map(&[1.0], &[]), Err(Error::Domain(_))));
        let (_, blocks) = y.lift_block_witness(&[0.5, 2.0], &[]);
        assert!(blocks.is_empty());
        let (f, _) = y.lift_block_witness(&[0.5, 2.0], &[]);
        let (q, c) = y.h_map(&f).unwrap();
        assert!(q.iter().all(|x| x.abs() < 1e-15));
        assert_relative_eq!(c[1], 2.0, max_relative = 1e-15);
    }

    #[test]
    fn rejects_non_subsymmetric_space() {
        let p = Partition::dyadic(2).unwrap();
        assert!(DkkSpace::new(summing_basis(), SymSpace::Variation, p.clone()).is_err());
        let short = crate::bases::block_repeat(summing_basis(), vec![1], 0.0).unwrap();
        assert!(DkkSpace::new(short, SymSpace::lp(2.0), p.clone()).is_err());
        assert!(DkkSpace::new(unit_vector_basis(SymSpace::Sup).unwrap(), SymSpace::Sup, p).is_ok());
    }
}
