use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::norm::SymSpace;
use crate::error::{Error, Result};
use crate::search::{coordinate_ascent, random_start, AscentConfig};

/// A lower bound on `sup { <f, g> : ||f||_S <= 1 }` together with the `f` attaining it.
#[derive(Debug, Clone)]
pub struct DualBound {
    pub value: f64,
    /// True when the value is the dual norm itself (Hölder duality on `l_p`).
    pub exact: bool,
    pub witness: Vec<f64>,
}

fn pairing(f: &[f64], g: &[f64]) -> f64 {
    f.iter().zip(g).map(|(a, b)| a * b).sum()
}

/// Dual-norm estimate of the functional `g` on `space`.
///
/// On `l_p` and `c_0` the exact Hölder value is returned. Elsewhere the candidates are
/// the normalised flat indicators `sign(g) 1_{top k} / Λ_k` followed by `budget`
/// restarts of coordinate ascent; the result is a lower bound attained by `witness`.
pub fn dual_norm_lb(space: &SymSpace, g: &[f64], budget: usize, seed: u64) -> Result<DualBound> {
    space.validate()?;
    if !space.is_subsymmetric() {
        return Err(Error::Domain(format!("dual estimate needs a subsymmetric space, got {space:?}")));
    }
    let n = g.len();
    if g.iter().all(|x| *x == 0.0) {
        return Ok(DualBound { value: 0.0, exact: true, witness: vec![0.0; n] });
    }
    if let Some(q) = space.conjugate_exponent() {
        let witness: Vec<f64> = if q.is_infinite() {
            let j = argmax_abs(g);
            let mut w = vec![0.0; n];
            w[j] = g[j].signum();
            w
        } else if q == 1.0 {
            g.iter().map(|x| x.signum()).collect()
        } else {
            g.iter().map(|x| x.signum() * x.abs().powf(q - 1.0)).collect()
        };
        let value = if q.is_infinite() {
            g.iter().fold(0.0f64, |m, x| m.max(x.abs()))
        } else {
            SymSpace::Lp { p: q }.norm(g)
        };
        return Ok(DualBound { value, exact: true, witness });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g[b].abs().total_cmp(&g[a].abs()));
    let mut best = DualBound { value: f64::NEG_INFINITY, exact: false, witness: vec![] };
    let mut f = vec![0.0; n];
    for &j in &order {
        f[j] = g[j].signum();
        let v = pairing(&f, g) / space.norm(&f);
        if v > best.value {
            best.value = v;
            best.witness = f.clone();
        }
    }

    let objective = |f: &[f64]| pairing(f, g).abs() / space.norm(f);
    let cfg = AscentConfig { sweeps: 50, ..AscentConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..budget {
        let start = match k {
            0 => best.witness.clone(),
            1 => g.to_vec(),
            _ => random_start(&mut rng, n),
        };
        let (v, x) = coordinate_ascent(objective, start, cfg);
        if v > best.value {
            let sign = pairing(&x, g).signum();
            best.value = v;
            best.witness = x.into_iter().map(|t| t * sign).collect();
        }
    }
    Ok(best)
}

fn argmax_abs(g: &[f64]) -> usize {
    let mut j = 0;
    for (i, x) in g.iter().enumerate() {
        if x.abs() > g[j].abs() {
            j = i;
        }
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqspace::Weight;
    use approx::assert_relative_eq;

    #[test]
    fn holder_duals() {
        let b = dual_norm_lb(&SymSpace::lp(2.0), &[3.0, 4.0], 0, 1).unwrap();
        assert!(b.exact);
        assert_relative_eq!(b.value, 5.0, max_relative = 1e-12);
        let b = dual_norm_lb(&SymSpace::lp(1.0), &[2.0, -5.0], 0, 1).unwrap();
        assert_eq!(b.value, 5.0);
        let b = dual_norm_lb(&SymSpace::Sup, &[2.0, -5.0], 0, 1).unwrap();
        assert_eq!(b.value, 7.0);
        for p in [1.0, 1.5, 2.0, 3.0] {
            let s = SymSpace::lp(p);
            let g = [0.3, -1.2, 2.5, 0.0, 0.7];
            let b = dual_norm_lb(&s, &g, 0, 0).unwrap();
            // the witness attains the value
            assert_relative_eq!(pairing(&b.witness, &g) / s.norm(&b.witness), b.value, max_relative = 1e-12);
        }
    }

    #[test]
    fn lorentz_dual_against_grid_oracle() {
        let s = SymSpace::lorentz(1.0, Weight::explicit(vec![1.0, 0.5]));
        let g = [1.0, 1.0];
        let b0 = dual_norm_lb(&s, &g, 0, 7).unwrap();
        assert!(!b0.exact);
        assert_relative_eq!(b0.value, 4.0 / 3.0, max_relative = 1e-12);
        // dense search over the unit circle: the norm is positively homogeneous, so the
        // sup of <f,g>/||f|| over directions is the dual norm in dimension 2
        let grid_max = (0..200_000)
            .map(|k| {
                let t = k as f64 / 200_000.0 * std::f64::consts::TAU;
                let f = [t.cos(), t.sin()];
                pairing(&f, &g) / s.norm(&f)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let b = dual_norm_lb(&s, &g, 4, 7).unwrap();
        assert!(b.value >= 4.0 / 3.0 - 1e-12);
        assert!(b.value <= grid_max + 1e-9);
        assert!(grid_max - b.value < 1e-6, "grid {grid_max} vs {0}", b.value);
    }

    #[test]
    fn rejects_nonsymmetric() {
        assert!(dual_norm_lb(&SymSpace::Variation, &[1.0], 1, 0).is_err());
    }
}
