//! Ordered partitions, averaging projections and the DKK gauge
//! `||f|| = ||Q_σ f||_S + ||Σ v_n^*(f) x_n||_X`.

mod checks;
mod partition;
mod space;

pub use checks::{
    EmbeddingCheck, Inequality, LemmaConstants, TailCheck, CHECK_RTOL, IDENTITY_ATOL, REGULARITY_B_MAX,
};
pub use partition::Partition;
pub use space::{dkk_projection_ratio, DkkSpace, RANGE_RTOL};
