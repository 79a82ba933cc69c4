//! Lift geometry of a family member: the normal lift into complex space,
//! the modified metric and its connection, the cubic form measured by two
//! independent routes, the Cayley transform with its projectors and
//! four-tensor, and the quadric-side curvature restriction.

pub mod alpha;
pub mod cayley;
pub mod curvature;
pub mod ghat;
pub mod invariants;
pub mod lift;

pub use alpha::{alpha_via_connection, alpha_via_lift};
pub use cayley::{
    b_at_t, b_form, b_operator, cayley_apply_at, complexify, complexify_vec, projector, t_tensor,
};
pub use curvature::{lift_forms, quadric_residuals, LiftForms};
pub use ghat::{
    bracket, bracket_fields, eframe_scales, ghat_matrix, ghat_value, nabla_ghat,
    nabla_ghat_field, FnField, TangentField,
};
pub use invariants::InvariantSet;
pub use lift::{bilin, dlift, dlift_coeffs, dlift_col, herm, lift, lift_residuals, lift_t_coherence};
