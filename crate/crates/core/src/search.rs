//! Derivative-free maximisation of scale-invariant objectives.
//!
//! Used wherever an operator norm or dual norm has no closed form: every value
//! returned is attained by the returned vector, so it is a certified lower bound.

use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct AscentConfig {
    pub sweeps: usize,
    /// Coarse grid points per coordinate line search.
    pub grid: usize,
    /// Golden-section refinement steps after the grid.
    pub golden_iters: usize,
}

impl Default for AscentConfig {
    fn default() -> Self {
        AscentConfig { sweeps: 200, grid: 8, golden_iters: 24 }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Coordinate-wise ascent on `objective`, which must be invariant under positive scaling.
/// Each coordinate is moved by a grid scan followed by golden-section refinement; the
/// iterate is rescaled to unit max-norm after every sweep.
pub fn coordinate_ascent<F>(objective: F, start: Vec<f64>, cfg: AscentConfig) -> (f64, Vec<f64>)
where
    F: Fn(&[f64]) -> f64,
{
    let mut x = start;
    let n = x.len();
    let eval = |v: &[f64]| {
        let r = objective(v);
        if r.is_finite() {
            r
        } else {
            f64::NEG_INFINITY
        }
    };
    let mut best = eval(&x);
    if n == 0 {
        return (best, x);
    }
    let mut scratch = x.clone();
    for _ in 0..cfg.sweeps {
        let before = best;
        for i in 0..n {
            let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
            let x0 = x[i];
            scratch.copy_from_slice(&x);
            let mut line = |t: f64| {
                scratch[i] = t;
                eval(&scratch)
            };
            let lo = x0 - 2.0 * scale;
            let hi = x0 + 2.0 * scale;
            let step = (hi - lo) / cfg.grid.max(1) as f64;
            let (mut bt, mut bv) = (x0, best);
            for k in 0..=cfg.grid {
                let t = lo + step * k as f64;
                let v = line(t);
                if v > bv {
                    bv = v;
                    bt = t;
                }
            }
            // golden section on [bt - step, bt + step]
            let (mut a, mut b) = (bt - step, bt + step);
            let mut c = b - INV_PHI * (b - a);
            let mut d = a + INV_PHI * (b - a);
            let mut fc = line(c);
            let mut fd = line(d);
            for _ in 0..cfg.golden_iters {
                if fc > fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - INV_PHI * (b - a);
                    fc = line(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + INV_PHI * (b - a);
                    fd = line(d);
                }
            }
            for (t, v) in [(c, fc), (d, fd)] {
                if v > bv {
                    bv = v;
                    bt = t;
                }
            }
            if bv > best {
                x[i] = bt;
                best = bv;
            }
        }
        let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale > 0.0 {
            x.iter_mut().for_each(|v| *v /= scale);
            best = eval(&x);
        }
        if best - before <= 1e-13 * best.abs().max(1.0) {
            break;
        }
    }
    (best, x)
}

/// A vector with i.i.d. coordinates uniform in `[-1, 1]`.
pub fn random_start<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}
