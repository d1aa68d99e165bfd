//! Finite-horizon checks of the lower/upper regularity properties and the Dini condition.
//!
//! The properties quantify over every `m`; the verdicts here only cover `m <= horizon`.

use serde::Serialize;

/// Relative slack granted to the equality cases (`2 sqrt(m) = sqrt(4m)` and friends).
pub const REGULARITY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityVerdict {
    /// Smallest admissible `b` found, if any.
    pub witness: Option<usize>,
    pub horizon: usize,
    pub b_max: usize,
}

/// Smallest `b <= b_max` with `2 Λ_m <= Λ_{bm}` for every `m <= horizon`.
pub fn check_lrp<F: Fn(usize) -> f64>(lambda: F, b_max: usize, horizon: usize) -> RegularityVerdict {
    let witness = (2..=b_max).find(|&b| {
        (1..=horizon).all(|m| 2.0 * lambda(m) <= lambda(b * m) * (1.0 + REGULARITY_RTOL))
    });
    RegularityVerdict { witness, horizon, b_max }
}

/// Smallest `b` with `3 <= b <= b_max` and `Λ_{bm} <= (b/2) Λ_m` for every `m <= horizon`.
pub fn check_urp<F: Fn(usize) -> f64>(lambda: F, b_max: usize, horizon: usize) -> RegularityVerdict {
    let witness = (3..=b_max).find(|&b| {
        (1..=horizon).all(|m| lambda(b * m) <= 0.5 * b as f64 * lambda(m) * (1.0 + REGULARITY_RTOL))
    });
    RegularityVerdict { witness, horizon, b_max }
}

/// `max_{m <= horizon} (sum_{n <= m} Λ_n / n) / Λ_m`.
pub fn dini_constant<F: Fn(usize) -> f64>(lambda: F, horizon: usize) -> f64 {
    let mut partial = 0.0;
    let mut best: f64 = 0.0;
    for m in 1..=horizon {
        let l = lambda(m);
        partial += l / m as f64;
        best = best.max(partial / l);
    }
    best
}

/// `(k/(k+n)) Λ_n + (n/(k+n)) Λ_k <= 2 Λ_k` for all `k, n <= horizon`.
pub fn lemma7_holds(lambda: &[f64], horizon: usize) -> bool {
    (1..=horizon).all(|k| {
        (1..=horizon).all(|n| {
            let (kf, nf) = (k as f64, n as f64);
            kf / (kf + nf) * lambda[n] + nf / (kf + nf) * lambda[k] <= 2.0 * lambda[k] * (1.0 + 1e-12)
        })
    })
}
