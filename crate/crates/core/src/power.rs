//! Bounds for functions that behave like `τ_+^n`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::mollifier::{solve_zeta, TestFunction, TAU_MAX};
use crate::quadrature::Adaptive;
use crate::special::binomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerParams {
    pub n: u32,
    /// 1 for even `n`, 0 for odd.
    pub sigma_n: u32,
    /// Least integer above `n/2`.
    pub m_n: u32,
    /// `ν_{m_n}`.
    pub nu: f64,
}

/// `σ_n` and `m_n`, with `ν_{m_n}` from the eigenvalue solver.
pub fn classify(n: u32) -> Result<PowerParams> {
    let m_n = n / 2 + 1;
    Ok(PowerParams {
        n,
        sigma_n: u32::from(n % 2 == 0),
        m_n,
        nu: solve_zeta(m_n)?.nu,
    })
}

/// Monomial `coeff · τ^tau_power · μ^mu_power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub tau_power: u32,
    pub mu_power: u32,
}

/// Expansion of `P_n^±`; only even powers of `μ` occur.
pub fn p_terms(sign: Sign, n: u32) -> Vec<Term> {
    let parity = match sign {
        Sign::Plus => 0,
        Sign::Minus => 1,
    };
    (0..=n)
        .filter(|k| k % 2 == parity)
        .map(|k| Term {
            coeff: binomial(n as f64, k as usize),
            tau_power: n - k,
            mu_power: k + parity,
        })
        .collect()
}

/// `P_n^+ = ((τ+μ)^n + (τ-μ)^n)/2`, `P_n^- = μ((τ+μ)^n - (τ-μ)^n)/2`.
pub fn p_poly(sign: Sign, n: u32, tau: f64, mu: f64) -> f64 {
    let (a, b) = ((tau + mu).powi(n as i32), (tau - mu).powi(n as i32));
    match sign {
        Sign::Plus => 0.5 * (a + b),
        Sign::Minus => 0.5 * mu * (a - b),
    }
}

fn check_order(rho: &TestFunction, n: u32) -> Result<()> {
    let m = rho.decay_order();
    if 2 * m > n {
        Ok(())
    } else {
        Err(Error::DecayTooWeak {
            degree: n,
            have: m,
            required: n / 2 + 1,
        })
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive, got {v}")))
    }
}

/// `∫ P_n^±(τ, δ^{-1}μ) ρ(μ) dμ` from the moment table.
pub fn p_moment_integral(
    rho: &TestFunction,
    sign: Sign,
    n: u32,
    delta: f64,
    tau: f64,
) -> Result<f64> {
    let mut s = 0.0;
    for t in p_terms(sign, n) {
        s += t.coeff
            * tau.powi(t.tau_power as i32)
            * delta.powi(-(t.mu_power as i32))
            * rho.moment(t.mu_power as f64)?;
    }
    Ok(s)
}

/// The same integral by direct quadrature of the polynomial against `ρ`.
pub fn p_quadrature_integral(
    rho: &TestFunction,
    sign: Sign,
    n: u32,
    delta: f64,
    tau: f64,
) -> Result<f64> {
    let breaks: Vec<f64> = (0..=(TAU_MAX as usize))
        .step_by(2)
        .map(|x| x as f64)
        .collect();
    let head = Adaptive::new(1e-14, 1e-13)
        .integrate_breaks(&breaks, |v| {
            p_poly(sign, n, tau, v / delta) * rho.density(v)
        })?
        .value;
    let mut tail = 0.0;
    for t in p_terms(sign, n) {
        tail += t.coeff
            * tau.powi(t.tau_power as i32)
            * delta.powi(-(t.mu_power as i32))
            * rho.upper_moment(t.mu_power as f64, TAU_MAX)?;
    }
    Ok(2.0 * (head + tail))
}

/// `Σ_j C(p, j) τ^{p-j} δ^{-j} c_{ρ, j+shift}`, i.e. `∫ |μ|^shift (τ + δ^{-1}|μ|)^p ρ`.
fn shifted_power_integral(
    rho: &TestFunction,
    p: u32,
    shift: u32,
    delta: f64,
    tau: f64,
) -> Result<f64> {
    let mut s = 0.0;
    for j in 0..=p {
        s += binomial(p as f64, j as usize)
            * tau.powi((p - j) as i32)
            * delta.powi(-(j as i32))
            * rho.moment((j + shift) as f64)?;
    }
    Ok(s)
}

/// Moment bounds for `ρ_δ*F` and `ρ_{δ,0}*F'` when `F` matches `τ_+^n` on `(-δ, δ)` in frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelSandwich {
    pub n: u32,
    pub delta: f64,
    pub tau: f64,
    /// `∫[P_n^+ - σ_n δ^{-n}|μ|^n] ρ`.
    pub conv_lower: f64,
    /// `∫ P_n^+ ρ`.
    pub conv_upper: f64,
    /// `δ² ∫[P_n^- + σ_n δ^{-n-1}|μ|^{n+1}] ρ`.
    pub convprime_upper: f64,
    /// `τ^n`.
    pub coarse_conv_lower: f64,
    /// `τ^n + n δ^{-1} ∫|μ|(τ + δ^{-1}|μ|)^{n-1} ρ`.
    pub coarse_conv_upper: f64,
    /// `n ∫ μ²(τ + δ^{-1}|μ|)^{n-1} ρ`.
    pub coarse_convprime_upper: f64,
}

pub fn model_sandwich(rho: &TestFunction, n: u32, delta: f64, tau: f64) -> Result<ModelSandwich> {
    check_order(rho, n)?;
    check_positive("delta", delta)?;
    check_positive("tau", tau)?;
    let sigma = f64::from(u8::from(n % 2 == 0));
    let plus = p_moment_integral(rho, Sign::Plus, n, delta, tau)?;
    let minus = p_moment_integral(rho, Sign::Minus, n, delta, tau)?;
    let cn = rho.moment(n as f64)?;
    let cn1 = rho.moment((n + 1) as f64)?;
    let tau_n = tau.powi(n as i32);
    let (coarse_up, coarse_prime) = if n == 0 {
        (tau_n, 0.0)
    } else {
        let nf = n as f64;
        (
            tau_n + nf / delta * shifted_power_integral(rho, n - 1, 1, delta, tau)?,
            nf * shifted_power_integral(rho, n - 1, 2, delta, tau)?,
        )
    };
    Ok(ModelSandwich {
        n,
        delta,
        tau,
        conv_lower: plus - sigma * delta.powi(-(n as i32)) * cn,
        conv_upper: plus,
        convprime_upper: delta * delta * (minus + sigma * delta.powi(-(n as i32) - 1) * cn1),
        coarse_conv_lower: tau_n,
        coarse_conv_upper: coarse_up,
        coarse_convprime_upper: coarse_prime,
    })
}

/// `ρ_δ*τ_+^n` at `τ`, as `∫_{μ<δτ} (τ - μ/δ)^n ρ(μ) dμ`.
pub fn model_convolution(rho: &TestFunction, n: u32, delta: f64, tau: f64) -> Result<f64> {
    check_order(rho, n)?;
    check_positive("delta", delta)?;
    let nf = n as f64;
    if tau <= 0.0 {
        // only μ < δτ ≤ 0 contributes: ∫_{v > δ|τ|} (v/δ - |τ|)^n ρ(v) dv
        let a = -tau;
        let mut s = 0.0;
        for k in 0..=n {
            s += binomial(nf, k as usize)
                * (-a).powi((n - k) as i32)
                * delta.powi(-(k as i32))
                * rho.upper_moment(k as f64, delta * a)?;
        }
        return Ok(s);
    }
    let mut s = 0.0;
    for k in 0..=n {
        s += binomial(nf, k as usize)
            * tau.powi((n - k) as i32)
            * delta.powi(-(k as i32))
            * rho.upper_moment(k as f64, 0.0)?;
    }
    let near = finite_integral(delta * tau, |v| {
        (tau - v / delta).powi(n as i32) * rho.density(v)
    })?;
    Ok(s + near)
}

/// `ρ_{δ,0}*(τ_+^n)'` at `τ > 0`, as `-δ ∫_{μ<δτ} μ (τ - μ/δ)^n ρ(μ) dμ`.
pub fn model_derivative_convolution(
    rho: &TestFunction,
    n: u32,
    delta: f64,
    tau: f64,
) -> Result<f64> {
    check_order(rho, n)?;
    check_positive("delta", delta)?;
    check_positive("tau", tau)?;
    let mut s = 0.0;
    for k in 0..=n {
        s += binomial(n as f64, k as usize)
            * tau.powi((n - k) as i32)
            * delta.powi(-(k as i32))
            * rho.upper_moment((k + 1) as f64, 0.0)?;
    }
    let near = finite_integral(delta * tau, |v| {
        v * (tau - v / delta).powi(n as i32) * rho.density(v)
    })?;
    Ok(delta * (s - near))
}

fn finite_integral<F: FnMut(f64) -> f64>(b: f64, f: F) -> Result<f64> {
    let mut breaks = vec![0.0];
    let mut p = 2.0;
    while p < b {
        breaks.push(p);
        p += 2.0;
    }
    breaks.push(b);
    Ok(Adaptive::new(1e-14, 1e-13)
        .integrate_breaks(&breaks, f)?
        .value)
}

/// Lower and upper bounds for `F(τ)` in terms of `ν_{m_n}` alone.
pub fn weyl_pointwise(n: u32, delta: f64, tau: f64, nu: f64) -> (f64, f64) {
    let nf = n as f64;
    let spread = nf / delta * (tau + nu / delta).powi(n as i32 - 1);
    let main = tau.powi(n as i32);
    let c = 2.0 / PI * nu * nu;
    (main - c * spread, main + (c + nu) * spread)
}

/// Bounds for `∫_0^{λ²} F(√μ) dμ`.
pub fn riesz_bounds(n: u32, delta: f64, lambda: f64, nu: f64) -> (f64, f64) {
    let nf = n as f64;
    let main = riesz_main_term(n, lambda);
    let shifted = lambda + nu / delta;
    let d2 = nu * nu / (delta * delta);
    (
        main - 2.0 * nf * d2 * lambda * shifted.powi(n as i32 - 1),
        main + (nf + 1.0) * d2 * shifted.powi(n as i32),
    )
}

/// `2λ^{n+2}/(n+2) = ∫_0^{λ²} (√μ)^n dμ`.
pub fn riesz_main_term(n: u32, lambda: f64) -> f64 {
    2.0 * lambda.powi(n as i32 + 2) / (n as f64 + 2.0)
}

/// Cubic bounds for `F(τ)` from `d1 = ‖ζ'‖²` and `d2 = ‖ζ''‖²`.
pub fn cubic_sandwich(eps: f64, delta: f64, tau: f64, d1: f64, d2: f64) -> (f64, f64) {
    let poly = |s: f64| {
        tau.powi(3)
            + s * 1.5 * eps * tau * tau
            + eps * eps * tau
            + s * eps.powi(3) / 4.0
            + 1.5 / (delta * delta) * (tau + s * (tau * tau / eps + eps / 2.0)) * d1
            + s * d2 / (eps * delta.powi(4))
    };
    (poly(-1.0), poly(1.0))
}

/// The two sides of the weighted estimate with `f(τ) = τ` on `[0, λ]`, `T = δ`, for `F = τ_+^n`.
pub fn model_riesz_inputs(
    rho: &TestFunction,
    n: u32,
    delta: f64,
    lambda: f64,
) -> Result<(f64, f64)> {
    check_positive("lambda", lambda)?;
    let q = Adaptive::new(1e-12, 1e-11);
    let mut failure = None;
    let mut guard = |r: Result<f64>| match r {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let smooth = q
        .integrate(0.0, lambda, |t| {
            t * guard(model_convolution(rho, n, delta, t))
        })?
        .value;
    let prime = q
        .integrate(0.0, lambda, |t| {
            if t > 0.0 {
                guard(model_derivative_convolution(rho, n, delta, t))
            } else {
                0.0
            }
        })?
        .value;
    if let Some(e) = failure {
        return Err(e);
    }
    let g = model_derivative_convolution(rho, n, delta, lambda)?;
    let d2 = delta * delta;
    Ok((
        2.0 * smooth - 2.0 * lambda * g / d2,
        2.0 * (smooth + prime / d2),
    ))
}

/// Direct convolutions of `τ_+^n` next to every bound that constrains them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelChain {
    pub sandwich: ModelSandwich,
    /// `ρ_δ*F(τ)`.
    pub conv: f64,
    /// `ρ_δ*F(-τ)`.
    pub conv_reflected: f64,
    /// `ρ_{δ,0}*F'(τ)`.
    pub convprime: f64,
    /// `ρ_δ*F ∓ c_{ρ,1}^{-1}δ^{-1}ρ_{δ,0}*F'` with `T = δ`.
    pub pointwise: (f64, f64),
    pub weyl: (f64, f64),
    pub tolerance: f64,
}

impl ModelChain {
    pub fn lower_holds(&self) -> bool {
        self.conv >= self.sandwich.conv_lower - self.tolerance
    }

    /// Upper moment bound applied to `ρ_δ*F(τ)` itself.
    pub fn upper_holds(&self) -> bool {
        self.conv <= self.sandwich.conv_upper + self.tolerance
    }

    /// Upper moment bound applied to `ρ_δ*F(τ) - ρ_δ*F(-τ)`.
    pub fn antisymmetric_upper_holds(&self) -> bool {
        self.conv - self.conv_reflected <= self.sandwich.conv_upper + self.tolerance
    }

    pub fn prime_holds(&self) -> bool {
        self.convprime <= self.sandwich.convprime_upper + self.tolerance
    }

    /// The coarse forms are implied by the moment forms.
    pub fn coarse_weaker(&self) -> bool {
        let s = &self.sandwich;
        s.coarse_conv_lower <= s.conv_lower + self.tolerance
            && s.conv_upper <= s.coarse_conv_upper + self.tolerance
            && s.convprime_upper <= s.coarse_convprime_upper + self.tolerance
    }

    pub fn weyl_contains(&self) -> bool {
        let v = self.sandwich.tau.powi(self.sandwich.n as i32);
        self.weyl.0 - self.tolerance <= v && v <= self.weyl.1 + self.tolerance
    }

    pub fn pointwise_contains(&self) -> bool {
        let v = self.sandwich.tau.powi(self.sandwich.n as i32);
        self.pointwise.0 - self.tolerance <= v && v <= self.pointwise.1 + self.tolerance
    }

    /// The Tauberian interval sits inside the explicit one.
    pub fn weyl_reproduced(&self) -> bool {
        self.pointwise.0 >= self.weyl.0 - self.tolerance
            && self.pointwise.1 <= self.weyl.1 + self.tolerance
    }
}

pub fn model_chain(
    rho: &TestFunction,
    n: u32,
    delta: f64,
    tau: f64,
    nu: f64,
) -> Result<ModelChain> {
    let sandwich = model_sandwich(rho, n, delta, tau)?;
    let conv = model_convolution(rho, n, delta, tau)?;
    let conv_reflected = model_convolution(rho, n, delta, -tau)?;
    let convprime = model_derivative_convolution(rho, n, delta, tau)?;
    let c1 = rho.c1().ok_or(Error::KernelNeedsDecay {
        k: 0,
        m: rho.decay_order(),
    })?;
    let e = convprime / (c1 * delta);
    Ok(ModelChain {
        sandwich,
        conv,
        conv_reflected,
        convprime,
        pointwise: (conv - e, conv + e),
        weyl: weyl_pointwise(n, delta, tau, nu),
        tolerance: 1e-8 * (1.0 + conv.abs()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms_reproduce_polynomials() {
        for n in 0..6 {
            for sign in [Sign::Plus, Sign::Minus] {
                let (tau, mu) = (1.3f64, -0.7f64);
                let s: f64 = p_terms(sign, n)
                    .iter()
                    .map(|t| t.coeff * tau.powi(t.tau_power as i32) * mu.powi(t.mu_power as i32))
                    .sum();
                assert!((s - p_poly(sign, n, tau, mu)).abs() < 1e-12);
                assert!(p_terms(sign, n).iter().all(|t| t.mu_power % 2 == 0));
            }
        }
    }

    #[test]
    fn shifted_identity() {
        // τ P_n^+ + P_n^- = P_{n+1}^+
        for n in 0..5 {
            let (tau, nu) = (0.8, 2.1);
            let lhs = tau * p_poly(Sign::Plus, n, tau, nu) + p_poly(Sign::Minus, n, tau, nu);
            assert!((lhs - p_poly(Sign::Plus, n + 1, tau, nu)).abs() < 1e-12);
        }
    }
}
