//! Fourier Tauberian estimates for monotone functions.

pub mod error;
pub mod laplace;
pub mod mollifier;
pub mod power;
pub mod quadrature;
pub mod report;
pub mod special;
pub mod tauber;

pub use error::{Error, Result};
pub use laplace::{BoxDomain, Spectrum};
pub use mollifier::{
    build_gamma, build_rho_from_zeta, solve_zeta, Kernel, TestFunction, ZetaSolution,
};
pub use report::{BoundReport, BoundRow};
pub use tauber::{SmoothingParams, StepFunction};
