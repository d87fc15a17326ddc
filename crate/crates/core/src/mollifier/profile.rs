//! Raw profiles behind a test function: pointwise evaluation plus exact
//! oscillatory tails `∫_X^∞ τ^κ e^{itτ} ρ(τ) dτ` for `X` beyond the tables.

use num_complex::Complex64;
use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

use super::zeta::ZetaSolution;
use crate::quadrature::GaussLegendre;
use crate::special::{binomial, power_exp_tail, sinc};

#[derive(Debug, Clone)]
pub(crate) enum Profile {
    Zeta(ZetaProfile),
    Gamma(GammaProfile),
}

impl Profile {
    pub fn eval(&self, tau: f64) -> f64 {
        match self {
            Profile::Zeta(p) => p.eval(tau),
            Profile::Gamma(p) => p.eval(tau),
        }
    }

    /// `∫_x^∞ τ^κ e^{itτ} ρ(τ) dτ`, `x` at least [`TAIL_START`].
    pub fn tail(&self, kappa: f64, t: f64, x: f64) -> Complex64 {
        match self {
            Profile::Zeta(p) => p.tail(kappa, t, x),
            Profile::Gamma(p) => p.tail(kappa, t, x),
        }
    }
}

/// Smallest abscissa at which the closed tail formulas are trusted.
pub(crate) const TAIL_START: f64 = 100.0;

/// `ρ = ζ̂²` for a polynomial `ζ` on `[-1/2, 1/2]`.
///
/// Integrating by parts to exhaustion gives
/// `ζ̂(τ) = √(2/π) [A(τ) cos(τ/2) + B(τ) sin(τ/2)]` with `A`, `B`
/// polynomials in `1/τ`, exact for every `τ ≠ 0`. It is used past `switch`,
/// where it has no cancellation; quadrature of the cosine transform below.
#[derive(Debug, Clone)]
pub(crate) struct ZetaProfile {
    nodes: Vec<(f64, f64)>,
    a: Vec<f64>,
    b: Vec<f64>,
    /// Coefficients of `τ^{-p}` in `(A²+B²)/2`, `(A²-B²)/2` and `AB`.
    mean: Vec<f64>,
    cos_part: Vec<f64>,
    sin_part: Vec<f64>,
    switch: f64,
}

impl ZetaProfile {
    pub fn new(z: &ZetaSolution) -> Self {
        let rule = GaussLegendre::new(40);
        let norm = FRAC_2_PI.sqrt();
        let mut nodes = Vec::with_capacity(4 * rule.len());
        for panel in 0..4 {
            let (lo, hi) = (panel as f64 / 8.0, (panel + 1) as f64 / 8.0);
            for (t, w) in rule.mapped(lo, hi) {
                nodes.push((t, norm * w * z.value(t)));
            }
        }
        let deg = z.degree() as usize;
        let mut a = vec![0.0; deg + 2];
        let mut b = vec![0.0; deg + 2];
        for k in z.m as usize..=deg {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 } * z.derivative(k as u32, 0.5);
            // cos(τ/2 - π(k+1)/2) = cos(τ/2) cos(π(k+1)/2) + sin(τ/2) sin(π(k+1)/2)
            match (k + 1) % 4 {
                0 => a[k + 1] = s,
                1 => b[k + 1] = s,
                2 => a[k + 1] = -s,
                _ => b[k + 1] = -s,
            }
        }
        let len = 2 * a.len();
        let (mut mean, mut cos_part, mut sin_part) =
            (vec![0.0; len], vec![0.0; len], vec![0.0; len]);
        for i in 0..a.len() {
            for j in 0..a.len() {
                mean[i + j] += 0.5 * (a[i] * a[j] + b[i] * b[j]);
                cos_part[i + j] += 0.5 * (a[i] * a[j] - b[i] * b[j]);
                sin_part[i + j] += a[i] * b[j];
            }
        }
        let mut p = Self {
            nodes,
            a,
            b,
            mean,
            cos_part,
            sin_part,
            switch: TAIL_START,
        };
        p.switch = p.find_switch();
        p
    }

    /// First `τ` where every term of the expansion is at most twice the leading one.
    fn find_switch(&self) -> f64 {
        let lead = self.a.iter().chain(&self.b).position(|c| *c != 0.0);
        let Some(_) = lead else { return TAIL_START };
        let mut tau = 8.0;
        while tau < TAIL_START {
            let terms: Vec<f64> = (0..self.a.len())
                .map(|p| (self.a[p].abs() + self.b[p].abs()) * tau.powi(-(p as i32)))
                .collect();
            let first = terms.iter().copied().find(|v| *v > 0.0).unwrap_or(0.0);
            let total: f64 = terms.iter().sum();
            if total <= 2.0 * first {
                return tau;
            }
            tau *= 1.25;
        }
        TAIL_START
    }

    pub fn zeta_hat(&self, tau: f64) -> f64 {
        let tau = tau.abs();
        if tau >= self.switch {
            let (mut aa, mut bb) = (0.0, 0.0);
            let inv = tau.recip();
            for p in (1..self.a.len()).rev() {
                aa = (aa + self.a[p]) * inv;
                bb = (bb + self.b[p]) * inv;
            }
            FRAC_2_PI.sqrt() * (aa * (0.5 * tau).cos() + bb * (0.5 * tau).sin())
        } else {
            self.nodes.iter().map(|(t, w)| w * (tau * t).cos()).sum()
        }
    }

    pub fn eval(&self, tau: f64) -> f64 {
        self.zeta_hat(tau).powi(2)
    }

    pub fn tail(&self, kappa: f64, t: f64, x: f64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for p in 0..self.mean.len() {
            let (mp, cp, sp) = (self.mean[p], self.cos_part[p], self.sin_part[p]);
            if mp == 0.0 && cp == 0.0 && sp == 0.0 {
                continue;
            }
            let q = p as f64 - kappa;
            let jt = power_exp_tail(q, t, x);
            let jp = power_exp_tail(q, t + 1.0, x);
            let jm = power_exp_tail(q, t - 1.0, x);
            // cos τ = (e^{iτ} + e^{-iτ})/2, sin τ = (e^{iτ} - e^{-iτ})/(2i)
            sum += mp * jt + 0.5 * cp * (jp + jm) + Complex64::new(0.0, -0.5) * sp * (jp - jm);
        }
        FRAC_2_PI * sum
    }
}

/// `γ(τ) = ∫_{-π/2}^{π/2} sinc^{2l}(τ/2l + s) ds`.
#[derive(Debug, Clone)]
pub(crate) struct GammaProfile {
    l: u32,
    s_nodes: Vec<(f64, f64)>,
    /// `sin^{2l} z = 4^{-l} [C(2l,l) + Σ_r (-1)^r C(2l,l-r) (e^{2irz} + e^{-2irz})]`
    harmonics: Vec<f64>,
}

impl GammaProfile {
    pub fn new(l: u32) -> Self {
        let rule = GaussLegendre::new(32);
        let mut s_nodes = Vec::with_capacity(2 * rule.len());
        s_nodes.extend(rule.mapped(-FRAC_PI_2, 0.0));
        s_nodes.extend(rule.mapped(0.0, FRAC_PI_2));
        let n = 2 * l as usize;
        let scale = 4f64.powi(-(l as i32));
        let harmonics = (0..=l as usize)
            .map(|r| {
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                sign * scale * binomial(n as f64, l as usize - r)
            })
            .collect();
        Self {
            l,
            s_nodes,
            harmonics,
        }
    }

    pub fn eval(&self, tau: f64) -> f64 {
        let two_l = 2.0 * self.l as f64;
        let z0 = tau.abs() / two_l;
        self.s_nodes
            .iter()
            .map(|(s, w)| w * sinc(z0 + s).powi(2 * self.l as i32))
            .sum()
    }

    /// `∫γ = 2lπ ∫ sinc^{2l}`.
    pub fn total_mass(&self) -> f64 {
        2.0 * self.l as f64 * PI * sinc_power_integral(2 * self.l)
    }

    pub fn tail(&self, kappa: f64, t: f64, x: f64) -> Complex64 {
        let two_l = 2.0 * self.l as f64;
        let omega = two_l * t;
        let mut total = Complex64::new(0.0, 0.0);
        for &(s, w) in &self.s_nodes {
            let z = x / two_l + s;
            // (z - s)^κ = Σ_j C(κ, j) (-s)^j z^{κ-j}
            let mut inner = Complex64::new(0.0, 0.0);
            for j in 0..60 {
                let coeff = binomial(kappa, j) * (-s).powi(j as i32);
                if coeff == 0.0 {
                    break;
                }
                let q = two_l - kappa + j as f64;
                let mut h = self.harmonics[0] * power_exp_tail(q, omega, z);
                for (r, c) in self.harmonics.iter().enumerate().skip(1) {
                    let w2 = 2.0 * r as f64;
                    h += *c * (power_exp_tail(q, omega + w2, z) + power_exp_tail(q, omega - w2, z));
                }
                let term = coeff * h;
                inner += term;
                if term.norm() <= 1e-17 * inner.norm() {
                    break;
                }
            }
            total += w * Complex64::from_polar(1.0, -omega * s) * inner;
        }
        two_l.powf(kappa + 1.0) * total
    }
}

/// `∫_R sinc^n` for even `n >= 2`.
pub(crate) fn sinc_power_integral(n: u32) -> f64 {
    let nf = n as f64;
    let mut sum = 0.0;
    for k in 0..=n / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binomial(nf, k as usize) * (nf - 2.0 * k as f64).powi(n as i32 - 1);
    }
    let fact: f64 = (1..n).fold(1.0, |acc, k| acc * k as f64);
    PI * sum / (2f64.powi(n as i32 - 1) * fact)
}
