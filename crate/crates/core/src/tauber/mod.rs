//! Smoothing of monotone step functions and the Tauberian two-sided estimates.

mod bounds;
mod step;
mod suite;

pub use bounds::{
    conv_f, conv_fprime, corridor_bounds, identity_residual, pointwise_bounds, smoothed_integral,
    weighted_defect, weighted_interval_bounds, ConstantWeight, CorridorBounds, FnWeight,
    IntervalBounds, LinearWeight, PointwiseBounds, SmoothingParams, Weight,
};
pub use step::{random_ensemble, EnsembleSpec, StepFunction};
pub use suite::{evaluate_function, run_suite, SuiteConfig, SuiteReport};
