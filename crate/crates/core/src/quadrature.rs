//! Gauss–Legendre rules and composite/adaptive integration on finite intervals.
//!
//! Every integrand in this crate is smooth away from a handful of known
//! breakpoints (jump locations, the origin), so a fixed-order rule applied on
//! bisected panels is enough. Panels are accepted when the one-panel and
//! two-half-panel estimates agree to the requested tolerance.

use crate::error::{Error, Result};

/// Panel tolerance used when callers do not supply one.
pub const PANEL_TOL: f64 = 1e-10;
/// Global target for composite integrals.
pub const GLOBAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule on [-1, 1]; exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone)]
pub struct Adaptive {
    rule: GaussLegendre,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: u32,
}

impl Default for Adaptive {
    fn default() -> Self {
        Self::new(PANEL_TOL, 1e-12)
    }
}

impl Adaptive {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            rule: GaussLegendre::new(16),
            abs_tol,
            rel_tol,
            max_depth: 100,
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> Result<Integral> {
        if a == b {
            return Ok(Integral {
                value: 0.0,
                error: 0.0,
            });
        }
        let whole = self.rule.integrate(a, b, &mut f);
        let mut out = Integral {
            value: 0.0,
            error: 0.0,
        };
        self.recurse(&mut f, a, b, whole, self.abs_tol, 0, &mut out)?;
        Ok(out)
    }

    /// Integrates over consecutive panels `[p_0, p_1], [p_1, p_2], ...`.
    pub fn integrate_breaks<F: FnMut(f64) -> f64>(
        &self,
        breaks: &[f64],
        mut f: F,
    ) -> Result<Integral> {
        let mut total = Integral {
            value: 0.0,
            error: 0.0,
        };
        for w in breaks.windows(2) {
            let part = self.integrate(w[0], w[1], &mut f)?;
            total.value += part.value;
            total.error += part.error;
        }
        Ok(total)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<F: FnMut(f64) -> f64>(
        &self,
        f: &mut F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
        out: &mut Integral,
    ) -> Result<()> {
        let mid = 0.5 * (a + b);
        let left = self.rule.integrate(a, mid, &mut *f);
        let right = self.rule.integrate(mid, b, &mut *f);
        let refined = left + right;
        let diff = (refined - whole).abs();
        if diff <= tol.max(self.rel_tol * refined.abs()) || mid == a || mid == b {
            out.value += refined;
            out.error += diff;
            return Ok(());
        }
        if depth >= self.max_depth {
            return Err(Error::Quadrature {
                a,
                b,
                estimate: diff,
            });
        }
        let half = (0.5 * tol).max(1e-3 * self.abs_tol);
        self.recurse(f, a, mid, left, half, depth + 1, out)?;
        self.recurse(f, mid, b, right, half, depth + 1, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(8);
        // degree 15 polynomial
        let v = rule.integrate(-1.0, 2.0, |x| x.powi(15) + 3.0 * x.powi(4));
        let exact = (2f64.powi(16) - 1.0) / 16.0 + 3.0 * (32.0 + 1.0) / 5.0;
        assert!((v - exact).abs() < 1e-10 * exact.abs());
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 40, 97] {
            let rule = GaussLegendre::new(n);
            let s: f64 = rule.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}: {s}");
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let q = Adaptive::new(1e-12, 1e-12);
        let v = q.integrate(0.0, 1.0, |x| x.powf(-0.5)).unwrap();
        assert!((v.value - 2.0).abs() < 1e-9, "{v:?}");
    }

    #[test]
    fn adaptive_oscillatory() {
        let q = Adaptive::default();
        let v = q.integrate(0.0, 100.0, |x| (3.0 * x).cos()).unwrap();
        assert!((v.value - (300f64).sin() / 3.0).abs() < 1e-10);
    }
}
