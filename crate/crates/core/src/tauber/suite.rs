use serde::{Deserialize, Serialize};

use super::bounds::{
    conv_f, corridor_bounds, identity_residual, pointwise_bounds, SmoothingParams,
};
use super::step::{random_ensemble, EnsembleSpec, StepFunction};
use crate::error::Result;
use crate::mollifier::TestFunction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub ensemble: EnsembleSpec,
    pub taus: Vec<f64>,
    /// `(T, δ)` pairs.
    pub pairs: Vec<(f64, f64)>,
    pub epsilon: f64,
    pub tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            ensemble: EnsembleSpec::default(),
            taus: (0..41).map(|i| -10.0 + 0.5 * i as f64).collect(),
            pairs: vec![(1.0, 1.0), (2.0, 1.0), (5.0, 1.0)],
            epsilon: 1.0,
            tolerance: 1e-6,
        }
    }
}

impl SuiteConfig {
    pub fn ensemble(&self) -> Vec<StepFunction> {
        random_ensemble(self.seed, &self.ensemble)
    }
}

/// Violation counts and worst cases over an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SuiteReport {
    pub functions: usize,
    pub evaluations: usize,
    pub max_identity_residual: f64,
    pub identity_violations: usize,
    pub sandwich_violations: usize,
    pub signed_kernel_violations: usize,
    pub corridor_violations: usize,
    pub monotone_violations: usize,
    /// Smallest `min(F - lower, upper - F)` for the pointwise bounds.
    pub worst_sandwich_margin: f64,
    pub worst_corridor_margin: f64,
}

impl SuiteReport {
    fn empty() -> Self {
        Self {
            worst_sandwich_margin: f64::INFINITY,
            worst_corridor_margin: f64::INFINITY,
            ..Self::default()
        }
    }

    pub fn merge(mut self, other: &SuiteReport) -> Self {
        self.functions += other.functions;
        self.evaluations += other.evaluations;
        self.max_identity_residual = self.max_identity_residual.max(other.max_identity_residual);
        self.identity_violations += other.identity_violations;
        self.sandwich_violations += other.sandwich_violations;
        self.signed_kernel_violations += other.signed_kernel_violations;
        self.corridor_violations += other.corridor_violations;
        self.monotone_violations += other.monotone_violations;
        self.worst_sandwich_margin = self.worst_sandwich_margin.min(other.worst_sandwich_margin);
        self.worst_corridor_margin = self.worst_corridor_margin.min(other.worst_corridor_margin);
        self
    }

    pub fn identity_passed(&self) -> bool {
        self.identity_violations == 0
    }

    pub fn containment_passed(&self) -> bool {
        self.sandwich_violations == 0
            && self.signed_kernel_violations == 0
            && self.corridor_violations == 0
            && self.monotone_violations == 0
    }

    pub fn passed(&self) -> bool {
        self.identity_passed() && self.containment_passed()
    }
}

/// Runs every check for one step function.
pub fn evaluate_function(
    rho: &TestFunction,
    f: &StepFunction,
    config: &SuiteConfig,
) -> Result<SuiteReport> {
    let tol = config.tolerance;
    let mut r = SuiteReport::empty();
    r.functions = 1;
    for &(t, delta) in &config.pairs {
        let params = SmoothingParams::new(delta, t, config.epsilon, 1.0)?;
        let mut previous = f64::NEG_INFINITY;
        for &tau in &config.taus {
            r.evaluations += 1;
            let value = f.eval(tau);

            let residual = identity_residual(rho, t, f, tau)?;
            r.max_identity_residual = r.max_identity_residual.max(residual);
            if residual > tol {
                r.identity_violations += 1;
            }

            let p = pointwise_bounds(rho, &params, f, tau)?;
            let slack = tol + p.margin;
            r.worst_sandwich_margin = r
                .worst_sandwich_margin
                .min((value - p.lower).min(p.upper - value));
            if !p.contains(value, slack) {
                r.sandwich_violations += 1;
            }
            if let Some((plus, minus)) = p.signed_kernels {
                if !(plus <= value + slack && value <= minus + slack) {
                    r.signed_kernel_violations += 1;
                }
            }

            let c = corridor_bounds(rho, &params, f, tau)?;
            let slack = tol + c.margin;
            for (lo, hi) in [
                (c.lower_average, c.upper_average),
                (c.lower_shifted, c.upper_shifted),
            ] {
                r.worst_corridor_margin = r.worst_corridor_margin.min((value - lo).min(hi - value));
                if !(lo <= value + slack && value <= hi + slack) {
                    r.corridor_violations += 1;
                }
            }

            let smoothed = conv_f(rho, t, f, tau)?;
            if smoothed < previous - f.numeric_margin() {
                r.monotone_violations += 1;
            }
            previous = smoothed;
        }
    }
    Ok(r)
}

/// Sequential run over the seeded ensemble.
pub fn run_suite(rho: &TestFunction, config: &SuiteConfig) -> Result<SuiteReport> {
    let mut total = SuiteReport::empty();
    for f in config.ensemble() {
        total = total.merge(&evaluate_function(rho, &f, config)?);
    }
    Ok(total)
}
