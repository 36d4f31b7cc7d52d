//! Positivity of generalized Choi maps: closed-form conditions, the
//! principal-minor oracle and edge-function gradients.

mod classify;
mod conditions;
mod gradients;
mod minors;

pub use classify::{
    classify_positivity, classify_with_resolution, verdict_from_conditions, PositivityVerdict,
    DEFAULT_RESOLUTION,
};
pub use conditions::{
    condition_report, edge_functions, hessian_radius, Condition, ConditionReport, SimplexPoint,
};
pub(crate) use conditions::{
    condition_report_params, edge_function_clamped, edge_function_raw, edge_pair,
};
pub use gradients::{
    closed_form_scale, edge_gradients, equal_gradient_residual, finite_difference_gradients,
    gradient_check, projected_gradients, GradientCheck,
};
pub use minors::{min_minor_scan, minor, minor_of, IndexSet, MinorScan};
