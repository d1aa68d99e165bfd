//! Sequence-space norms and the scalar-sequence toolkit built on them.
//!
//! Sequences are plain `&[f64]` slices; position `i` holds the coefficient of
//! the unit vector `e_{i+1}`. Anything past the end of a slice is zero.

mod dual;
mod norm;
mod px;
mod regularity;

pub use dual::{dual_norm_lb, DualBound};
pub use norm::{eval_norm, fundamental_lambda, lambda_star, rearrange_nonincreasing, SymSpace, Weight};
pub use px::{lifting, retraction};
pub use regularity::{
    check_lrp, check_urp, dini_constant, lemma7_holds, RegularityVerdict, REGULARITY_RTOL,
};
