mod local;
mod module;
pub mod newton;
pub mod skew;

pub use local::{c_v, j_phi_v, log_b_t, log_plus_t_inv, reduction_type, ReductionType};
pub use module::{bezout, DrinfeldModule, WeightedPoint};
pub use skew::{skew_add, skew_eval, skew_from, skew_identity, skew_mul, SkewPoly};
