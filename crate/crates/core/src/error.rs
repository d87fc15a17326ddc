use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("gamma construction needs l >= 1, got l = {0}")]
    GammaOrder(u32),

    #[error("zeta solver supports 1 <= m <= 6, got m = {0}")]
    ZetaOrder(u32),

    #[error(
        "eigenvalue for m = {m} did not converge with {basis} basis functions \
         (last iterate {last:.15e}, previous {previous:.15e})"
    )]
    EigenNotConverged {
        m: u32,
        basis: usize,
        last: f64,
        previous: f64,
    },

    #[error("linear algebra failure: {0}")]
    Linalg(String),

    #[error("moment order {kappa} outside the convergence window (-1, {upper})")]
    MomentWindow { kappa: f64, upper: f64 },

    #[error("kernel rho_{{1,{k}}} needs decay order m > 0 (have m = {m})")]
    KernelNeedsDecay { k: u8, m: u32 },

    #[error(
        "step function of growth degree {degree} is too steep for decay order {have}; \
         need m >= {required}"
    )]
    DecayTooWeak {
        degree: u32,
        have: u32,
        required: u32,
    },

    #[error("quadrature did not reach tolerance on [{a}, {b}] (estimate {estimate:.3e})")]
    Quadrature { a: f64, b: f64, estimate: f64 },

    #[error("point {0:?} is not strictly inside the domain")]
    OutsideDomain(Vec<f64>),

    #[error("lambda = {lambda} exceeds the enumeration cutoff {cutoff}")]
    AboveCutoff { lambda: f64, cutoff: f64 },

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("unsupported test-function document version {0}")]
    DocumentVersion(u32),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
