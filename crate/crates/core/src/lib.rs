//! A laboratory for highly conditional almost-greedy bases built by averaging
//! projections over ordered partitions (the Dilworth–Kalton–Kutzarova method).
//!
//! * [`seqspace`]: sequence-space norms, weights and regularity checks.
//! * [`bases`]: concrete bases as coefficient-to-ambient linear maps.
//! * [`condest`]: conditionality constants `k_m`, `L_m` and witness constructions.
//! * [`dkk`]: ordered partitions, averaging projections and the DKK gauge.
//! * [`greedy`]: thresholding greedy algorithm and democracy estimates.
//! * [`cli`]: the experiment runner behind the `dkklab` binary.

pub mod bases;
pub mod cli;
pub mod condest;
pub mod dkk;
pub mod error;
pub mod greedy;
pub mod normer;
pub mod sample;
pub mod search;
pub mod seqspace;

pub use error::{Error, Result};
pub use normer::{AmbientKind, Normer};
