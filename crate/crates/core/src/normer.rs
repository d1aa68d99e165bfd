//! The common interface of everything that assigns a norm to a finite coefficient vector.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::seqspace::SymSpace;

/// Norms admitting closed-form operator norms for matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AmbientKind {
    L1,
    L2,
    Sup,
}

impl AmbientKind {
    pub fn norm(&self, y: &[f64]) -> f64 {
        match self {
            AmbientKind::L1 => y.iter().map(|v| v.abs()).sum(),
            AmbientKind::L2 => y.iter().map(|v| v * v).sum::<f64>().sqrt(),
            AmbientKind::Sup => y.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    /// Norm of a row of functionals measured in the dual of this norm.
    pub fn dual_norm(&self, row: &[f64]) -> f64 {
        match self {
            AmbientKind::L1 => AmbientKind::Sup.norm(row),
            AmbientKind::L2 => AmbientKind::L2.norm(row),
            AmbientKind::Sup => AmbientKind::L1.norm(row),
        }
    }
}

/// A norm on coefficient vectors `(a_1, ..., a_n)` of some basis.
pub trait Normer: Sync {
    fn norm(&self, coeffs: &[f64]) -> f64;

    fn label(&self) -> String;

    /// Largest admissible number of coefficients, if bounded.
    fn max_dim(&self) -> Option<usize> {
        None
    }

    /// The sequence space whose unit-vector basis this is, when that space is subsymmetric.
    fn symmetric_space(&self) -> Option<&SymSpace> {
        None
    }

    /// `(M, kind)` such that `norm(a) = kind.norm(M a)` on the first `dim` coefficients.
    fn ambient(&self, _dim: usize) -> Option<(DMatrix<f64>, AmbientKind)> {
        None
    }

    /// Problem-specific `(f, A)` pairs worth trying when searching for large
    /// `||S_A f|| / ||f||` with `f` supported in the first `m` coordinates.
    fn structured_candidates(&self, _m: usize) -> Vec<(Vec<f64>, Vec<usize>)> {
        Vec::new()
    }

    /// Known `(lower, upper)` bounds on the fundamental function at `m`.
    fn fundamental_bounds(&self, _m: usize) -> Option<(f64, f64)> {
        None
    }
}

/// `S_A f`: keep the coordinates listed in `set` (0-based), zero the rest.
pub fn project(f: &[f64], set: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    for &j in set {
        if j < f.len() {
            out[j] = f[j];
        }
    }
    out
}

/// `f - S_A f`.
pub fn project_complement(f: &[f64], set: &[usize]) -> Vec<f64> {
    let mut out = f.to_vec();
    for &j in set {
        if j < out.len() {
            out[j] = 0.0;
        }
    }
    out
}
