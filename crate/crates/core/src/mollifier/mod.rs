//! Band-limited test functions and the kernels derived from them.

mod certify;
mod profile;
mod testfn;
pub mod zeta;

pub use certify::{certify, two_sided_constants, AxiomCheck, AxiomReport, AXIOM_TOL, SLOPE_SLACK};
pub use testfn::{
    build_gamma, build_rho_from_zeta, BandLimitCertificate, Construction, CumulativeTable, Kernel,
    TestFunction, BAND_ETA, BAND_TOL, DOCUMENT_VERSION, TAU_MAX,
};
pub use zeta::{crude_nu_bound, rayleigh_bound, solve_zeta, ZetaSolution};
