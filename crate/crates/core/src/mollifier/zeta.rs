//! First eigenfunction of `(-1)^m d^{2m}/dt^{2m}` on `[-1/2, 1/2]` with
//! clamped ends, by Rayleigh–Ritz on an even polynomial basis.
//!
//! Work happens on `u = 2t ∈ [-1, 1]` with basis
//! `φ_j(u) = (1 - u²)^m P_n^{(m)}(u)`, `n = m + 2j`, which satisfies every
//! boundary condition exactly and has `φ_j^{(m)} ∝ P_n`. After scaling the
//! stiffness matrix is the identity, so only the mass matrix is assembled.
//! A function of `t` and its `k`-th derivative pick up a factor `2^k`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::special::factorial;

pub const MAX_ORDER: u32 = 6;
/// Relative change in `ν̃_m` accepted between basis sizes.
pub const EIGEN_TOL: f64 = 1e-12;
const MIN_BASIS: usize = 2;
const MAX_BASIS: usize = 24;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZetaSolution {
    pub m: u32,
    /// `‖ζ^{(m)}‖² / ‖ζ‖²`.
    pub nu_tilde: f64,
    /// `ν̃_m^{1/2m}`.
    pub nu: f64,
    /// Coefficients of `φ_j`, `j = 0..coefficients.len()`.
    pub coefficients: Vec<f64>,
    /// `‖ζ^{(k)}‖²` for `k = 0..=m`.
    pub derivative_norms: Vec<f64>,
}

/// Upper bound `(4m+1)!(m!)² / ((2m+1)!(2m)!)` from the trial function `(1/4 - t²)^m`.
pub fn rayleigh_bound(m: u32) -> f64 {
    factorial(4 * m + 1) * factorial(m).powi(2) / (factorial(2 * m + 1) * factorial(2 * m))
}

/// `2m · 3^{1/2m}`, valid for `m >= 2`.
pub fn crude_nu_bound(m: u32) -> f64 {
    2.0 * m as f64 * 3f64.powf(1.0 / (2.0 * m as f64))
}

pub fn solve_zeta(m: u32) -> Result<ZetaSolution> {
    if m == 0 || m > MAX_ORDER {
        return Err(Error::ZetaOrder(m));
    }
    let mut previous: Option<f64> = None;
    let mut last = f64::NAN;
    for basis in MIN_BASIS..=MAX_BASIS {
        let (lambda, _) = galerkin(m, basis)?;
        let nu_tilde = 4f64.powi(m as i32) * lambda;
        if let Some(prev) = previous {
            if ((nu_tilde - prev) / nu_tilde).abs() < EIGEN_TOL {
                // eigenvectors converge only like the square root of the eigenvalue
                let (lambda, coeffs) = galerkin(m, basis + 2)?;
                return Ok(finish(m, 4f64.powi(m as i32) * lambda, coeffs));
            }
        }
        last = nu_tilde;
        previous = Some(nu_tilde);
    }
    let prev = previous.unwrap_or(f64::NAN);
    Err(Error::EigenNotConverged {
        m,
        basis: MAX_BASIS,
        last,
        previous: prev,
    })
}

fn finish(m: u32, nu_tilde: f64, mut coefficients: Vec<f64>) -> ZetaSolution {
    let mut z = ZetaSolution {
        m,
        nu_tilde,
        nu: nu_tilde.powf(1.0 / (2.0 * m as f64)),
        coefficients: coefficients.clone(),
        derivative_norms: Vec::new(),
    };
    let norm = z.norm_squared(0).sqrt();
    let sign = if z.value(0.0) < 0.0 { -1.0 } else { 1.0 };
    for c in &mut coefficients {
        *c *= sign / norm;
    }
    z.coefficients = coefficients;
    z.derivative_norms = (0..=m).map(|k| z.norm_squared(k)).collect();
    z
}

/// Smallest eigenvalue of `K c = λ M c` in the `u` variable, with `K = I`.
fn galerkin(m: u32, basis: usize) -> Result<(f64, Vec<f64>)> {
    let rule = GaussLegendre::new(2 * m as usize + 2 * basis + 4);
    let mut mass = DMatrix::<f64>::zeros(basis, basis);
    for (u, w) in rule.nodes().iter().zip(rule.weights()) {
        let table = BasisTable::new(m, basis, 0, *u);
        for i in 0..basis {
            for j in 0..=i {
                mass[(i, j)] += w * table.phi(i, 0) * table.phi(j, 0);
            }
        }
    }
    for i in 0..basis {
        for j in 0..i {
            mass[(j, i)] = mass[(i, j)];
        }
    }
    let eig = SymmetricEigen::new(mass);
    let (idx, top) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .ok_or_else(|| Error::Linalg("empty spectrum".into()))?;
    if !(top > 0.0) {
        return Err(Error::Linalg("mass matrix is not positive definite".into()));
    }
    let c: DVector<f64> = eig.eigenvectors.column(idx).into_owned();
    Ok((1.0 / top, c.iter().copied().collect()))
}

impl ZetaSolution {
    pub fn basis_size(&self) -> usize {
        self.coefficients.len()
    }

    pub fn value(&self, t: f64) -> f64 {
        self.derivative(0, t)
    }

    /// `ζ^{(k)}(t)`, zero outside `[-1/2, 1/2]`.
    pub fn derivative(&self, k: u32, t: f64) -> f64 {
        if t.abs() > 0.5 {
            return 0.0;
        }
        let table = BasisTable::new(self.m, self.basis_size(), k as usize, 2.0 * t);
        let s: f64 = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(j, c)| c * table.phi(j, k as usize))
            .sum();
        2f64.powi(k as i32) * s
    }

    /// Polynomial degree of `ζ` in `t`.
    pub fn degree(&self) -> u32 {
        2 * self.m + 2 * (self.basis_size() as u32 - 1)
    }

    /// `(t, ζ(t))` on `n` equispaced points of `[-1/2, 1/2]`.
    pub fn samples(&self, n: usize) -> Vec<(f64, f64)> {
        assert!(n >= 2);
        (0..n)
            .map(|i| {
                let t = -0.5 + i as f64 / (n - 1) as f64;
                (t, self.value(t))
            })
            .collect()
    }

    /// `‖ζ^{(k)}‖²` by Gauss–Legendre, exact for the polynomial.
    fn norm_squared(&self, k: u32) -> f64 {
        let rule = GaussLegendre::new(self.degree() as usize + 2);
        0.5 * rule.integrate(-1.0, 1.0, |u| self.derivative(k, 0.5 * u).powi(2))
    }
}

/// Derivatives of `φ_j` at one point, `j < basis`, orders `0..=rmax`.
struct BasisTable {
    values: Vec<Vec<f64>>,
}

impl BasisTable {
    fn new(m: u32, basis: usize, rmax: usize, u: f64) -> Self {
        let mu = m as usize;
        let nmax = mu + 2 * (basis - 1);
        let p = legendre_derivatives(nmax, mu + rmax, u);
        let w = weight_derivatives(m, rmax, u);
        let values = (0..basis)
            .map(|j| {
                let n = mu + 2 * j;
                let scale = stiffness_diagonal(m, n).sqrt().recip();
                (0..=rmax)
                    .map(|r| {
                        let mut binom = 1.0;
                        let mut s = 0.0;
                        for i in 0..=r.min(w.len() - 1) {
                            s += binom * w[i] * p[mu + r - i][n];
                            binom *= (r - i) as f64 / (i + 1) as f64;
                        }
                        scale * s
                    })
                    .collect()
            })
            .collect();
        Self { values }
    }

    fn phi(&self, j: usize, r: usize) -> f64 {
        self.values[j][r]
    }
}

/// `∫ (d^m/du^m [(1-u²)^m P_n^{(m)}])² du = ((n+m)!/(n-m)!)² · 2/(2n+1)`.
fn stiffness_diagonal(m: u32, n: usize) -> f64 {
    let ratio = ((n - m as usize + 1)..=(n + m as usize)).fold(1.0, |acc, k| acc * k as f64);
    ratio * ratio * 2.0 / (2 * n + 1) as f64
}

/// `table[r][n] = P_n^{(r)}(u)` for `n <= nmax`, `r <= rmax`.
fn legendre_derivatives(nmax: usize, rmax: usize, u: f64) -> Vec<Vec<f64>> {
    let mut table = vec![vec![0.0; nmax + 1]; rmax + 1];
    table[0][0] = 1.0;
    if nmax >= 1 {
        table[0][1] = u;
    }
    for n in 2..=nmax {
        let nf = n as f64;
        table[0][n] = ((2.0 * nf - 1.0) * u * table[0][n - 1] - (nf - 1.0) * table[0][n - 2]) / nf;
    }
    for r in 1..=rmax {
        if nmax >= 1 && r == 1 {
            table[r][1] = 1.0;
        }
        for n in 2..=nmax {
            table[r][n] = table[r][n - 2] + (2 * n - 1) as f64 * table[r - 1][n - 1];
        }
    }
    table
}

/// `d^i/du^i (1 - u²)^m` for `i = 0..=min(rmax, 2m)`.
fn weight_derivatives(m: u32, rmax: usize, u: f64) -> Vec<f64> {
    let m = m as usize;
    let top = rmax.min(2 * m);
    let mut out = vec![0.0; top + 1];
    let mut a = 1.0;
    for k in 0..=m {
        // a = C(m, k) (-1)^k, coefficient of u^{2k}
        let deg = 2 * k;
        for (i, slot) in out.iter_mut().enumerate() {
            if i > deg {
                break;
            }
            let falling = ((deg - i + 1)..=deg).fold(1.0, |acc, f| acc * f as f64);
            *slot += a * falling * u.powi((deg - i) as i32);
        }
        a *= -((m - k) as f64) / (k + 1) as f64;
    }
    out
}
