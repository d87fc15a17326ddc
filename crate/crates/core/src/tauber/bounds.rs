use serde::{Deserialize, Serialize};

use super::step::StepFunction;
use crate::error::{invalid, Error, Result};
use crate::mollifier::{Kernel, TestFunction};
use crate::quadrature::Adaptive;

/// Smoothing scales `T ≥ δ > 0`, averaging shift `ε > 0` and tuning parameter `θ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingParams {
    pub delta: f64,
    pub t: f64,
    pub epsilon: f64,
    pub theta: f64,
}

impl SmoothingParams {
    pub fn new(delta: f64, t: f64, epsilon: f64, theta: f64) -> Result<Self> {
        let p = Self {
            delta,
            t,
            epsilon,
            theta,
        };
        p.validate()?;
        Ok(p)
    }

    /// `T = δ`, `ε = 1`, `θ = 1`.
    pub fn symmetric(delta: f64) -> Result<Self> {
        Self::new(delta, delta, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(invalid(
                "delta",
                format!("must be positive, got {}", self.delta),
            ));
        }
        if !(self.t >= self.delta && self.t.is_finite()) {
            return Err(invalid(
                "t",
                format!(
                    "need T >= delta, got T = {} and delta = {}",
                    self.t, self.delta
                ),
            ));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(invalid(
                "epsilon",
                format!("must be positive, got {}", self.epsilon),
            ));
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(invalid(
                "theta",
                format!("must be positive, got {}", self.theta),
            ));
        }
        Ok(())
    }
}

/// `ρ_T*F` and `ρ_{T,1}*F'` converge for `n < 2m + 1`; `ρ_{δ,0}*F'` and
/// `ρ_{δ,2}*F'` need `n < 2m`.
fn check_degree(rho: &TestFunction, f: &StepFunction, strict: bool) -> Result<()> {
    let (n, m) = (f.degree(), rho.decay_order());
    let (ok, required) = if strict {
        (2 * m > n, n / 2 + 1)
    } else {
        (2 * m + 1 > n, n.div_ceil(2))
    };
    if ok {
        Ok(())
    } else {
        Err(Error::DecayTooWeak {
            degree: n,
            have: m,
            required,
        })
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive, got {v}")))
    }
}

/// `ρ_T*F(τ) = c_{ρ,0} base + Σ w_i ∫_{-∞}^{T(τ-τ_i)} ρ`.
pub fn conv_f(rho: &TestFunction, t: f64, f: &StepFunction, tau: f64) -> Result<f64> {
    positive("t", t)?;
    check_degree(rho, f, false)?;
    Ok(rho.mass() * f.base()
        + f.jumps()
            .iter()
            .map(|&(x, w)| w * rho.distribution(t * (tau - x)))
            .sum::<f64>())
}

/// `ρ_{δ,k}*F'(τ) = Σ w_i ρ_{δ,k}(τ - τ_i)`.
pub fn conv_fprime(
    rho: &TestFunction,
    delta: f64,
    kernel: Kernel,
    f: &StepFunction,
    tau: f64,
) -> Result<f64> {
    positive("delta", delta)?;
    check_degree(rho, f, matches!(kernel, Kernel::K0 | Kernel::K2))?;
    let mut s = 0.0;
    for &(x, w) in f.jumps() {
        s += w * rho.kernel(kernel, delta, tau - x)?;
    }
    Ok(s)
}

/// `|F(τ) - ρ_T*F(τ) - ρ_{T,1}*F'(τ)|`.
pub fn identity_residual(rho: &TestFunction, t: f64, f: &StepFunction, tau: f64) -> Result<f64> {
    let smoothed = conv_f(rho, t, f, tau)?;
    let correction = conv_fprime(rho, t, Kernel::K1, f, tau)?;
    Ok((f.eval(tau) - smoothed - correction).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointwiseBounds {
    pub lower: f64,
    pub upper: f64,
    /// `ρ_T*F(τ)`.
    pub smoothed: f64,
    /// `c_{ρ,1}^{-1} δ^{-1} ρ_{δ,0}*F'(τ)`.
    pub error_term: f64,
    pub margin: f64,
    /// `(ρ_δ^+*F(τ), ρ_δ^-*F(τ))` with `ρ_δ^± = ρ_δ ± c_{ρ,1}^{-1} δτ ρ_δ`, when `T = δ`.
    pub signed_kernels: Option<(f64, f64)>,
}

impl PointwiseBounds {
    pub fn contains(&self, value: f64, slack: f64) -> bool {
        value >= self.lower - slack && value <= self.upper + slack
    }
}

fn c1(rho: &TestFunction) -> Result<f64> {
    rho.c1().ok_or(Error::KernelNeedsDecay {
        k: 0,
        m: rho.decay_order(),
    })
}

pub fn pointwise_bounds(
    rho: &TestFunction,
    params: &SmoothingParams,
    f: &StepFunction,
    tau: f64,
) -> Result<PointwiseBounds> {
    params.validate()?;
    let c1 = c1(rho)?;
    let smoothed = conv_f(rho, params.t, f, tau)?;
    let g = conv_fprime(rho, params.delta, Kernel::K0, f, tau)?;
    let error_term = g / (c1 * params.delta);
    let signed_kernels = if params.t == params.delta {
        // ∫_{-∞}^{y} δv ρ_δ(v) dv = -ρ_{1,0}(δy)
        let mut plus = rho.mass() * f.base();
        let mut minus = plus;
        for &(x, w) in f.jumps() {
            let y = params.delta * (tau - x);
            let phi = rho.distribution(y);
            let first = rho.rho10(y)? / c1;
            plus += w * (phi - first);
            minus += w * (phi + first);
        }
        Some((plus, minus))
    } else {
        None
    };
    Ok(PointwiseBounds {
        lower: smoothed - error_term,
        upper: smoothed + error_term,
        smoothed,
        error_term,
        margin: f.numeric_margin(),
        signed_kernels,
    })
}

/// Non-negative, non-decreasing `C¹` weight on an interval.
pub trait Weight {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
}

/// `f ≡ c`.
#[derive(Debug, Clone, Copy)]
pub struct ConstantWeight(pub f64);

impl Weight for ConstantWeight {
    fn value(&self, _: f64) -> f64 {
        self.0
    }
    fn derivative(&self, _: f64) -> f64 {
        0.0
    }
}

/// `f(x) = slope · (x - origin)`.
#[derive(Debug, Clone, Copy)]
pub struct LinearWeight {
    pub slope: f64,
    pub origin: f64,
}

impl Weight for LinearWeight {
    fn value(&self, x: f64) -> f64 {
        self.slope * (x - self.origin)
    }
    fn derivative(&self, _: f64) -> f64 {
        self.slope
    }
}

/// Weight from a value closure and a derivative closure.
pub struct FnWeight<F, D> {
    pub value: F,
    pub derivative: D,
}

impl<F: Fn(f64) -> f64, D: Fn(f64) -> f64> Weight for FnWeight<F, D> {
    fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }
    fn derivative(&self, x: f64) -> f64 {
        (self.derivative)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalBounds {
    pub lower: f64,
    pub upper: f64,
    pub margin: f64,
}

impl IntervalBounds {
    pub fn contains(&self, value: f64, slack: f64) -> bool {
        value >= self.lower - slack && value <= self.upper + slack
    }
}

fn check_weight(w: &dyn Weight, a: f64, b: f64) -> Result<()> {
    for i in 0..=64 {
        let x = a + (b - a) * i as f64 / 64.0;
        let (v, d) = (w.value(x), w.derivative(x));
        if !(v >= 0.0 && d >= 0.0) {
            return Err(invalid(
                "f",
                format!(
                    "weight must be non-negative and non-decreasing; f({x}) = {v}, f'({x}) = {d}"
                ),
            ));
        }
    }
    Ok(())
}

fn breaks_within(f: &StepFunction, a: f64, b: f64) -> Vec<f64> {
    let mut v = vec![a];
    v.extend(f.jumps().iter().map(|j| j.0).filter(|x| *x > a && *x < b));
    v.push(b);
    v
}

/// Two sides of the weighted estimate for `∫_a^b f(τ)[F(τ) - ρ_T*F(τ)] dτ`.
pub fn weighted_interval_bounds(
    rho: &TestFunction,
    params: &SmoothingParams,
    f: &StepFunction,
    a: f64,
    b: f64,
    weight: &dyn Weight,
) -> Result<IntervalBounds> {
    params.validate()?;
    if !(a < b) {
        return Err(invalid("interval", format!("need a < b, got [{a}, {b}]")));
    }
    check_weight(weight, a, b)?;
    let scale = 1.0 / (params.t * params.delta);
    let g = |x: f64| conv_fprime(rho, params.delta, Kernel::K0, f, x);
    let ga = g(a)?;
    let gb = g(b)?;
    let mut failure = None;
    let inner = Adaptive::new(1e-13, 1e-11).integrate_breaks(&breaks_within(f, a, b), |x| {
        let d = weight.derivative(x);
        if d == 0.0 {
            return 0.0;
        }
        match g(x) {
            Ok(v) => d * v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(IntervalBounds {
        lower: -scale * weight.value(b) * gb,
        upper: scale * (weight.value(a) * ga + inner.value),
        margin: f.numeric_margin() * (b - a) * weight.value(b).max(1.0) + inner.error,
    })
}

/// `∫_a^b f(τ)[F(τ) - ρ_T*F(τ)] dτ` by adaptive quadrature.
pub fn weighted_defect(
    rho: &TestFunction,
    t: f64,
    f: &StepFunction,
    a: f64,
    b: f64,
    weight: &dyn Weight,
) -> Result<f64> {
    check_degree(rho, f, false)?;
    positive("t", t)?;
    let v = Adaptive::new(1e-13, 1e-11).integrate_breaks(&breaks_within(f, a, b), |x| {
        weight.value(x) * (f.eval(x) - conv_f(rho, t, f, x).unwrap_or(f64::NAN))
    })?;
    Ok(v.value)
}

/// `∫_a^b ρ_T*F(μ) dμ` through the antiderivative `c_{ρ,0} x_+ + ρ_{1,2}(x)` of `∫_{-∞}^x ρ`.
pub fn smoothed_integral(
    rho: &TestFunction,
    t: f64,
    f: &StepFunction,
    a: f64,
    b: f64,
) -> Result<f64> {
    positive("t", t)?;
    check_degree(rho, f, false)?;
    let c0 = rho.mass();
    let psi = |x: f64| -> Result<f64> { Ok(c0 * x.max(0.0) + rho.rho12(x)?) };
    let mut s = c0 * f.base() * (b - a);
    for &(x, w) in f.jumps() {
        s += w * (psi(t * (b - x))? - psi(t * (a - x))?) / t;
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorridorBounds {
    /// Averaged lower bound at `b = τ`.
    pub lower_average: f64,
    /// Shifted lower bound `ρ_T*F(τ-ε) - ...`.
    pub lower_shifted: f64,
    pub upper_average: f64,
    pub upper_shifted: f64,
    pub lower: f64,
    pub upper: f64,
    pub margin: f64,
}

impl CorridorBounds {
    pub fn contains(&self, value: f64, slack: f64) -> bool {
        value >= self.lower - slack && value <= self.upper + slack
    }
}

pub fn corridor_bounds(
    rho: &TestFunction,
    params: &SmoothingParams,
    f: &StepFunction,
    tau: f64,
) -> Result<CorridorBounds> {
    params.validate()?;
    let (t, eps) = (params.t, params.epsilon);
    let g = conv_fprime(rho, params.delta, Kernel::K0, f, tau)?;
    let e = g / (eps * t * params.delta);
    let lower_average = smoothed_integral(rho, t, f, tau - eps, tau)? / eps - e;
    let lower_shifted = conv_f(rho, t, f, tau - eps)? - e;
    let upper_average = smoothed_integral(rho, t, f, tau, tau + eps)? / eps + e;
    let upper_shifted = conv_f(rho, t, f, tau + eps)? + e;
    Ok(CorridorBounds {
        lower_average,
        lower_shifted,
        upper_average,
        upper_shifted,
        lower: lower_average.max(lower_shifted),
        upper: upper_average.min(upper_shifted),
        margin: f.numeric_margin() * (1.0 + 1.0 / eps),
    })
}
