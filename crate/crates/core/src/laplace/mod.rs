//! Dirichlet Laplacian on boxes: exact eigen-data and the spectral bounds.

mod bounds;
mod domain;
mod spectrum;

pub use bounds::{
    berezin_liyau, counting_bounds, lambda_grid, loglog_slope, optimal_theta, remainder_scan,
    spectral_bounds, spectrum_for, BoxConstants, ScanRow,
};
pub use domain::{layer_data, unit_ball_constant, BoxDomain, LayerData};
pub use spectrum::{Mode, Spectrum, DEFAULT_CUTOFF};
