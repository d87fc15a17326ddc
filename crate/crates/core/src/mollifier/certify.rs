//! Numerical certificate that a built test function meets every axiom.

use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

use super::testfn::{Construction, TestFunction, TAU_MAX};
use super::zeta::{crude_nu_bound, rayleigh_bound};

/// Tolerance for normalization, evenness, non-negativity and moment identities.
pub const AXIOM_TOL: f64 = 1e-8;
/// Allowed excess over the ideal decay slope `-(2m+2)`.
pub const SLOPE_SLACK: f64 = 0.3;
pub const SLOPE_WINDOW: (f64, f64) = (10.0, 100.0);

#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn at_most(name: &'static str, value: f64, limit: f64) -> AxiomCheck {
    AxiomCheck {
        name,
        value,
        limit,
        passed: value <= limit,
    }
}

fn at_least(name: &'static str, value: f64, limit: f64) -> AxiomCheck {
    AxiomCheck {
        name,
        value,
        limit,
        passed: value >= limit,
    }
}

pub fn certify(rho: &TestFunction) -> AxiomReport {
    let m = rho.decay_order();
    let mut checks = Vec::new();

    let target_mass = match rho.construction() {
        Construction::Gamma {
            l,
            normalized: false,
        } => 2.0 * *l as f64 * std::f64::consts::PI * super::profile::sinc_power_integral(2 * l),
        _ => 1.0,
    };
    checks.push(at_most(
        "normalization",
        (rho.mass() - target_mass).abs() / target_mass,
        AXIOM_TOL,
    ));

    let grid = &rho.table().grid;
    let evenness = grid
        .iter()
        .step_by(7)
        .map(|t| (rho.density(*t) - rho.density(-*t)).abs())
        .fold(0.0, f64::max);
    checks.push(at_most("evenness", evenness, AXIOM_TOL));

    let min = rho
        .table()
        .rho
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    checks.push(at_least("nonnegativity", min, -AXIOM_TOL));

    let dc = rho.decay_constant();
    checks.push(AxiomCheck {
        name: "decay_constant",
        value: dc,
        limit: f64::INFINITY,
        passed: dc.is_finite() && dc > 0.0,
    });
    let ideal = -(2.0 * m as f64 + 2.0);
    checks.push(at_most(
        "decay_slope",
        rho.decay_slope(SLOPE_WINDOW.0, SLOPE_WINDOW.1),
        ideal + SLOPE_SLACK,
    ));

    let cert = rho.certificate();
    let limit = cert.tolerance * cert.rho_hat_zero;
    checks.push(at_most("band_limit", cert.sup_density, limit));
    if let Some(s) = cert.sup_k0 {
        checks.push(at_most("band_limit_k0", s, limit));
    }

    // c_r^κ ≤ c_κ^r on the integer moments of ρ / c_{ρ,0}
    let top = 2 * m;
    let c: Vec<f64> = (0..=top)
        .filter_map(|k| rho.moment(k as f64).ok())
        .map(|v| v / rho.mass())
        .collect();
    let mut jensen: f64 = f64::NEG_INFINITY;
    for kappa in 1..c.len() {
        for r in 1..kappa {
            let lhs = kappa as f64 * c[r].ln();
            let rhs = r as f64 * c[kappa].ln();
            jensen = jensen.max(lhs - rhs);
        }
    }
    if jensen.is_finite() {
        checks.push(at_most("jensen", jensen, 1e-12));
    }

    match rho.construction() {
        Construction::Zeta { solution } => {
            if let Some(c1) = rho.c1() {
                checks.push(at_least("c1_lower_bound", c1, FRAC_PI_2));
            }
            checks.push(at_most(
                "rayleigh_bound",
                solution.nu_tilde,
                rayleigh_bound(solution.m),
            ));
            if solution.m >= 2 {
                checks.push(at_most(
                    "crude_nu_bound",
                    solution.nu,
                    crude_nu_bound(solution.m),
                ));
            }
            let worst = (0..=solution.m as usize)
                .map(|k| {
                    let exact = solution.derivative_norms[k];
                    let quad = rho.moment_quadrature(2.0 * k as f64).unwrap_or(f64::NAN);
                    ((quad - exact) / exact).abs()
                })
                .fold(0.0, f64::max);
            checks.push(at_most("even_moments", worst, AXIOM_TOL));
        }
        Construction::Gamma { l, .. } => {
            let (lo, hi) = two_sided_constants(rho, 2 * *l);
            checks.push(at_least("two_sided_lower", lo, f64::MIN_POSITIVE));
            checks.push(AxiomCheck {
                name: "two_sided_upper",
                value: hi,
                limit: f64::INFINITY,
                passed: hi.is_finite(),
            });
        }
    }
    AxiomReport { checks }
}

/// `min` and `max` of `ρ(τ)⟨τ⟩^{p}` on `[0, 50]`.
pub fn two_sided_constants(rho: &TestFunction, p: u32) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..=5000 {
        let t = 50.0 * i as f64 / 5000.0;
        debug_assert!(t <= TAU_MAX);
        let v = rho.density(t) * (1.0 + t * t).powf(0.5 * p as f64);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}
