use std::f64::consts::PI;

use super::domain::BoxDomain;
use crate::error::{invalid, Error, Result};
use crate::tauber::StepFunction;

/// Default enumeration cutoff.
pub const DEFAULT_CUTOFF: f64 = 2.0e4;

/// Relative distance below which `λ` counts as an eigenvalue.
const TIE_TOL: f64 = 1e-12;

/// Dirichlet eigenvalue `π² Σ k_i²/L_i²` with its multi-index.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub lambda: f64,
    pub k: Vec<u32>,
}

/// All Dirichlet eigenvalues of a box up to a cutoff, in increasing order.
#[derive(Debug, Clone)]
pub struct Spectrum {
    domain: BoxDomain,
    cutoff: f64,
    modes: Vec<Mode>,
}

impl Spectrum {
    pub fn new(domain: BoxDomain, cutoff: f64) -> Result<Self> {
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(invalid("cutoff", format!("must be positive, got {cutoff}")));
        }
        let mut modes = Vec::new();
        let mut k = Vec::with_capacity(domain.sides().len());
        enumerate(
            domain.sides(),
            cutoff * (1.0 + TIE_TOL),
            0.0,
            &mut k,
            &mut modes,
        );
        modes.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then_with(|| a.k.cmp(&b.k)));
        Ok(Self {
            domain,
            cutoff,
            modes,
        })
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    fn check(&self, lambda: f64) -> Result<()> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(invalid(
                "lambda",
                format!("must be non-negative, got {lambda}"),
            ));
        }
        if lambda > self.cutoff {
            return Err(Error::AboveCutoff {
                lambda,
                cutoff: self.cutoff,
            });
        }
        Ok(())
    }

    /// Modes with `λ_k ≤ λ` and their midpoint weights.
    fn below(&self, lambda: f64) -> impl Iterator<Item = (&Mode, f64)> {
        let tol = TIE_TOL * lambda.max(1.0);
        self.modes
            .iter()
            .take_while(move |m| m.lambda <= lambda + tol)
            .map(move |m| (m, if m.lambda < lambda - tol { 1.0 } else { 0.5 }))
    }

    /// `N(λ)` with `N(λ_k) = (N(λ_k - 0) + N(λ_k + 0))/2`.
    pub fn counting(&self, lambda: f64) -> Result<f64> {
        self.check(lambda)?;
        Ok(self.below(lambda).map(|(_, w)| w).sum())
    }

    /// `∫_0^λ N(μ) dμ = Σ (λ - λ_k)_+`.
    pub fn riesz_mean(&self, lambda: f64) -> Result<f64> {
        self.check(lambda)?;
        Ok(self.below(lambda).map(|(m, _)| lambda - m.lambda).sum())
    }

    fn density(&self, m: &Mode, x: &[f64]) -> f64 {
        m.k.iter()
            .zip(x)
            .zip(self.domain.sides())
            .map(|((&k, &xi), &l)| 2.0 / l * (k as f64 * PI * xi / l).sin().powi(2))
            .product()
    }

    /// `e(x, x; λ) = Σ_{λ_k < λ} φ_k(x)²`.
    pub fn spectral_function(&self, x: &[f64], lambda: f64) -> Result<f64> {
        self.check(lambda)?;
        self.domain.check_interior(x)?;
        Ok(self
            .below(lambda)
            .map(|(m, w)| w * self.density(m, x))
            .sum())
    }

    /// `∫_0^λ e(x, x; μ) dμ`.
    pub fn spectral_integral(&self, x: &[f64], lambda: f64) -> Result<f64> {
        self.check(lambda)?;
        self.domain.check_interior(x)?;
        Ok(self
            .below(lambda)
            .map(|(m, _)| (lambda - m.lambda) * self.density(m, x))
            .sum())
    }

    /// `∫_{d>ε} φ_k²`, a product of one-dimensional `sin²` integrals.
    fn interior_mass(&self, m: &Mode, epsilon: f64) -> f64 {
        if epsilon >= self.domain.inradius() {
            return 0.0;
        }
        m.k.iter()
            .zip(self.domain.sides())
            .map(|(&k, &l)| {
                let kp = k as f64 * PI;
                (l - 2.0 * epsilon) / l + (2.0 * kp * epsilon / l).sin() / kp
            })
            .product()
    }

    /// `N_ε^i(λ) = ∫_{d>ε} e(x, x; λ) dx`.
    pub fn interior_count(&self, lambda: f64, epsilon: f64) -> Result<f64> {
        self.check(lambda)?;
        Ok(self
            .below(lambda)
            .map(|(m, w)| w * self.interior_mass(m, epsilon))
            .sum())
    }

    /// `∫_0^λ N_ε^i(μ) dμ`.
    pub fn interior_riesz_mean(&self, lambda: f64, epsilon: f64) -> Result<f64> {
        self.check(lambda)?;
        Ok(self
            .below(lambda)
            .map(|(m, _)| (lambda - m.lambda) * self.interior_mass(m, epsilon))
            .sum())
    }

    /// `τ ↦ N(τ²)` as a step function with one unit jump per eigenvalue.
    pub fn as_step(&self) -> Result<StepFunction> {
        let jumps = self.modes.iter().map(|m| (m.lambda.sqrt(), 1.0)).collect();
        StepFunction::new(jumps, 0.0, self.domain.dim())
    }
}

fn enumerate(sides: &[f64], cutoff: f64, partial: f64, k: &mut Vec<u32>, out: &mut Vec<Mode>) {
    let depth = k.len();
    if depth == sides.len() {
        out.push(Mode {
            lambda: partial,
            k: k.clone(),
        });
        return;
    }
    let scale = (PI / sides[depth]).powi(2);
    let mut j = 1u32;
    loop {
        let lambda = partial + scale * (j as f64).powi(2);
        // the remaining coordinates contribute at least their k = 1 terms
        let rest: f64 = sides[depth + 1..].iter().map(|l| (PI / l).powi(2)).sum();
        if lambda + rest > cutoff {
            break;
        }
        k.push(j);
        enumerate(sides, cutoff, lambda, k, out);
        k.pop();
        j += 1;
    }
}
