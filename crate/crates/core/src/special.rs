//! Small special-function toolkit: `sinc`, the cosine/sine integrals, and the
//! power-times-exponential tail `∫_x^∞ τ^{-q} e^{iωτ} dτ` that closes every
//! truncated integral in the test-function tables.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `(Ci(x), Si(x))` for `x > 0`.
pub fn cos_sin_integrals(x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-16;
    const FPMIN: f64 = 1e-300;
    const MAXIT: usize = 200;
    let t = x.abs();
    if t == 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    let (ci, mut si) = if t > 2.0 {
        // Lentz continued fraction for E1(i t).
        let mut b = Complex64::new(1.0, t);
        let mut c = Complex64::new(1.0 / FPMIN, 0.0);
        let mut d = Complex64::new(1.0, 0.0) / b;
        let mut h = d;
        for i in 2..MAXIT {
            let a = -(((i - 1) * (i - 1)) as f64);
            b += Complex64::new(2.0, 0.0);
            d = Complex64::new(1.0, 0.0) / (d * a + b);
            c = b + Complex64::new(a, 0.0) / c;
            let del = c * d;
            h *= del;
            if (del.re - 1.0).abs() + del.im.abs() < EPS {
                break;
            }
        }
        h *= Complex64::new(t.cos(), -t.sin());
        (-h.re, FRAC_PI_2 + h.im)
    } else {
        let mut sum = 0.0;
        let mut sums = 0.0;
        let mut sumc = 0.0;
        let mut sign = 1.0;
        let mut fact = 1.0;
        let mut odd = true;
        for k in 1..MAXIT {
            let kf = k as f64;
            fact *= t / kf;
            let term = fact / kf;
            sum += sign * term;
            let err = term / sum.abs();
            if odd {
                sign = -sign;
                sums = sum;
                sum = sumc;
            } else {
                sumc = sum;
                sum = sums;
            }
            if err < EPS {
                break;
            }
            odd = !odd;
        }
        (sumc + t.ln() + EULER_GAMMA, sums)
    };
    if x < 0.0 {
        si = -si;
    }
    (ci, si)
}

/// `∫_x^∞ τ^{-q} e^{iωτ} dτ` for `x > 0`, `q > 1` (or `q > 0` when `ω ≠ 0`).
///
/// Large `ωx` uses the integration-by-parts expansion; small `ωx` walks the
/// exact upward recurrence from `E1(-iωx)`, which needs integer `q`.
pub fn power_exp_tail(q: f64, omega: f64, x: f64) -> Complex64 {
    debug_assert!(x > 0.0);
    if omega == 0.0 {
        return Complex64::new(x.powf(1.0 - q) / (q - 1.0), 0.0);
    }
    if omega < 0.0 {
        return power_exp_tail(q, -omega, x).conj();
    }
    let wx = omega * x;
    let integer_q = (q - q.round()).abs() < 1e-12 && q >= 1.0;
    if wx >= q + 30.0 || !integer_q {
        asymptotic_tail(q, omega, x)
    } else {
        recurrence_tail(q.round() as u32, omega, x)
    }
}

fn asymptotic_tail(q: f64, omega: f64, x: f64) -> Complex64 {
    let ratio = Complex64::new(0.0, -1.0 / (omega * x));
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last_mag = 1.0;
    for j in 0..200 {
        term *= ratio * (q + j as f64);
        let mag = term.norm();
        if mag > last_mag {
            // asymptotic series started diverging; stop at the smallest term
            break;
        }
        sum += term;
        last_mag = mag;
        if mag < 1e-18 * sum.norm() {
            break;
        }
    }
    let phase = Complex64::from_polar(1.0, omega * x);
    Complex64::new(0.0, 1.0 / omega) * phase * x.powf(-q) * sum
}

fn recurrence_tail(q: u32, omega: f64, x: f64) -> Complex64 {
    let (ci, si) = cos_sin_integrals(omega * x);
    let mut j = Complex64::new(-ci, FRAC_PI_2 - si);
    let phase = Complex64::from_polar(1.0, omega * x);
    for r in 2..=q {
        let rf = r as f64;
        j = phase * x.powf(1.0 - rf) / (rf - 1.0) + Complex64::new(0.0, omega / (rf - 1.0)) * j;
    }
    j
}

/// Generalized binomial coefficient `C(kappa, j)` for real `kappa`.
pub fn binomial(kappa: f64, j: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..j {
        c *= (kappa - i as f64) / (i as f64 + 1.0);
    }
    c
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `Γ(k/2)` for positive integers `k`.
pub fn gamma_half_integer(k: u32) -> f64 {
    assert!(k >= 1);
    if k % 2 == 0 {
        factorial(k / 2 - 1)
    } else {
        // Γ(1/2) = √π, Γ(x + 1) = x Γ(x)
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while (2.0 * x) < k as f64 {
            g *= x;
            x += 1.0;
        }
        g
    }
}
