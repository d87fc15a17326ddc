use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::domain::{layer_data, unit_ball_constant, BoxDomain};
use super::spectrum::Spectrum;
use crate::error::{invalid, Result};
use crate::power::classify;
use crate::report::{BoundReport, BoundRow};

/// Constants entering the bounds in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxConstants {
    pub n: u32,
    pub c_n: f64,
    /// `ν_{m_n}` with `m_n` the least integer above `n/2`.
    pub nu: f64,
    pub c_n1: f64,
    pub c_n2: f64,
    pub c_n3: f64,
    pub c_n4: f64,
}

impl BoxConstants {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(invalid("dim", "must be positive"));
        }
        let nu = classify(n)?.nu;
        let c_n = unit_ball_constant(n);
        let nf = n as f64;
        let li_yau = (1.0 + 2.0 / nf).powf(nf / 2.0);
        Ok(Self {
            n,
            c_n,
            nu,
            c_n1: nf * c_n * 2.0 / PI * nu * nu,
            c_n2: nf * c_n * (2.0 / PI * nu * nu + nu),
            c_n3: li_yau * c_n,
            c_n4: li_yau * nf * nf * c_n * nu * nu,
        })
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    /// `(λ^{1/2} + ν/d)^{n-1}`.
    fn shifted(&self, lambda: f64, d: f64, power: i32) -> f64 {
        (lambda.sqrt() + self.nu / d).powi(power)
    }

    /// Pointwise bounds for `e(x, x; λ)` at distance `d` from the boundary.
    pub fn spectral_function_bounds(&self, d: f64, lambda: f64) -> (f64, f64) {
        let n = self.nf();
        let main = self.c_n * lambda.powf(n / 2.0);
        let a = self.shifted(lambda, d, self.n as i32 - 1) * n * self.c_n / d;
        let c = 2.0 / PI * self.nu * self.nu;
        (main - c * a, main + (c + self.nu) * a)
    }

    /// Bounds for `∫_0^λ e(x, x; μ) dμ`.
    pub fn spectral_integral_bounds(&self, d: f64, lambda: f64) -> (f64, f64) {
        let n = self.nf();
        let main = 2.0 * self.c_n * lambda.powf(n / 2.0 + 1.0) / (n + 2.0);
        let nu2 = self.nu * self.nu;
        let lower = main
            - 2.0 * n * self.c_n * nu2 * lambda.sqrt() / (d * d)
                * self.shifted(lambda, d, self.n as i32 - 1);
        let upper =
            main + (n + 1.0) * self.c_n * nu2 / (d * d) * self.shifted(lambda, d, self.n as i32);
        (lower, upper)
    }

    pub fn berezin(&self, volume: f64, lambda: f64) -> f64 {
        let n = self.nf();
        2.0 / (n + 2.0) * self.c_n * volume * lambda.powf(n / 2.0 + 1.0)
    }

    pub fn li_yau(&self, volume: f64, lambda: f64) -> f64 {
        self.c_n3 * volume * lambda.powf(self.nf() / 2.0)
    }

    /// `2(1+θ)^{n/2+1}/((n+2)θ) C_n |Ω| λ^{n/2}`.
    pub fn theta_bound(&self, theta: f64, volume: f64, lambda: f64) -> f64 {
        let n = self.nf();
        2.0 * (1.0 + theta).powf(n / 2.0 + 1.0) / ((n + 2.0) * theta)
            * self.c_n
            * volume
            * lambda.powf(n / 2.0)
    }
}

/// Minimizer of `(1+θ)^{n/2+1}/θ` over `θ > 0`, by bisection on the logarithmic derivative.
pub fn optimal_theta(n: u32) -> f64 {
    let a = n as f64 / 2.0 + 1.0;
    let slope = |t: f64| a / (1.0 + t) - 1.0 / t;
    let (mut lo, mut hi) = (1e-9f64, 1e9f64);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo * hi).sqrt()
}

/// Spectral function bounds at an interior point, with `δ = d(x)`.
pub fn spectral_bounds(
    spectrum: &Spectrum,
    consts: &BoxConstants,
    x: &[f64],
    lambda: f64,
) -> Result<BoundReport> {
    let d = spectrum.domain().dist_to_boundary(x)?;
    let e = spectrum.spectral_function(x, lambda)?;
    let ie = spectrum.spectral_integral(x, lambda)?;
    let (l2, u3) = consts.spectral_function_bounds(d, lambda);
    let (l4, u5) = consts.spectral_integral_bounds(d, lambda);
    Ok(BoundReport {
        rows: vec![
            BoundRow::new("spectral_function", lambda, e, "3.2")
                .lower(l2)
                .at(x),
            BoundRow::new("spectral_function", lambda, e, "3.3")
                .upper(u3)
                .at(x),
            BoundRow::new("spectral_riesz_mean", lambda, ie, "3.4")
                .lower(l4)
                .at(x),
            BoundRow::new("spectral_riesz_mean", lambda, ie, "3.5")
                .upper(u5)
                .at(x),
        ],
    })
}

/// Berezin and Li–Yau bounds and the `θ`-chain between them.
pub fn berezin_liyau(
    spectrum: &Spectrum,
    consts: &BoxConstants,
    lambda: f64,
    theta: Option<f64>,
) -> Result<BoundReport> {
    let theta = theta.unwrap_or_else(|| optimal_theta(consts.n));
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(invalid("theta", format!("must be positive, got {theta}")));
    }
    let vol = spectrum.domain().volume();
    let n = spectrum.counting(lambda)?;
    let riesz = spectrum.riesz_mean(lambda)?;
    let average = if lambda > 0.0 {
        spectrum.riesz_mean((1.0 + theta) * lambda)? / (theta * lambda)
    } else {
        0.0
    };
    Ok(BoundReport {
        rows: vec![
            BoundRow::new("riesz_mean", lambda, riesz, "3.6").upper(consts.berezin(vol, lambda)),
            BoundRow::new("counting", lambda, n, "3.7").upper(consts.li_yau(vol, lambda)),
            BoundRow::new("counting", lambda, n, "3.8").upper(average),
            BoundRow::new("theta_average", lambda, average, "3.8")
                .upper(consts.theta_bound(theta, vol, lambda)),
        ],
    })
}

/// Interior, boundary-layer and total counting bounds for a layer width `ε`.
pub fn counting_bounds(
    spectrum: &Spectrum,
    consts: &BoxConstants,
    lambda: f64,
    epsilon: f64,
) -> Result<BoundReport> {
    if !(lambda > 0.0) {
        return Err(invalid("lambda", format!("must be positive, got {lambda}")));
    }
    let domain = spectrum.domain();
    let layer = layer_data(domain, epsilon)?;
    let n = consts.nf();
    let half = lambda.powf(n / 2.0);
    let root = lambda.sqrt();
    let shifted = (root + consts.nu / epsilon).powi(consts.n as i32 - 1);
    let (i1, i2) = (layer.inverse_distance(1), layer.inverse_distance(2));
    let (vi, vb) = (layer.interior_volume, layer.boundary_volume);

    let total = spectrum.counting(lambda)?;
    let interior = spectrum.interior_count(lambda, epsilon)?;
    let boundary = total - interior;
    let boundary_riesz =
        spectrum.riesz_mean(lambda)? - spectrum.interior_riesz_mean(lambda, epsilon)?;

    let l12 = consts.c_n * vi * half - consts.c_n1 * shifted * i1;
    let u13 = consts.c_n * vi * half + consts.c_n2 * shifted * i1;
    let u14 = consts.c_n3 * vb * half + consts.c_n4 / root * shifted * i2;
    let u15 = 2.0 / (n + 2.0) * consts.c_n * vb * lambda.powf(n / 2.0 + 1.0)
        + 2.0 * n * consts.c_n * consts.nu * consts.nu * root * shifted * i2;
    let u16 = consts.c_n * vi * half
        + consts.c_n3 * vb * half
        + shifted * (consts.c_n2 * i1 + consts.c_n4 / root * i2);

    let r = epsilon * root;
    let growth = (1.0 + consts.nu / r).powi(consts.n as i32 - 1);
    let l18 = -consts.c_n * vb - vi * consts.c_n1 / r * growth;
    let u18 =
        (consts.c_n3 - consts.c_n) * vb + vi * (consts.c_n2 / r + consts.c_n4 / (r * r)) * growth;
    let normalized = total / half - consts.c_n * domain.volume();

    let rows = vec![
        BoundRow::new("interior_count", lambda, interior, "3.12").lower(l12),
        BoundRow::new("interior_count", lambda, interior, "3.13").upper(u13),
        BoundRow::new("boundary_count", lambda, boundary, "3.14").upper(u14),
        BoundRow::new("boundary_riesz_mean", lambda, boundary_riesz, "3.15").upper(u15),
        BoundRow::new("counting", lambda, total, "3.16").upper(u16),
        BoundRow::new("normalized_remainder", lambda, normalized, "3.18")
            .lower(l18)
            .upper(u18),
    ];
    Ok(BoundReport {
        rows: rows.into_iter().map(|r| r.epsilon(epsilon)).collect(),
    })
}

/// One line of a Weyl remainder scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub lambda: f64,
    pub count: f64,
    pub weyl_term: f64,
    pub epsilon: f64,
    pub interval_lower: f64,
    pub interval_upper: f64,
    pub interval_width: f64,
    pub riesz_mean: f64,
    /// `|λ^{-1}∫_0^λ N - 2/(n+2) C_n|Ω| λ^{n/2}|`.
    pub riesz_remainder: f64,
}

/// Scan with layer width `ε = λ^{-κ}`.
pub fn remainder_scan(
    spectrum: &Spectrum,
    consts: &BoxConstants,
    lambdas: &[f64],
    kappa: f64,
) -> Result<Vec<ScanRow>> {
    if !(kappa > 0.0 && kappa <= 0.5) {
        return Err(invalid(
            "kappa",
            format!("must lie in (0, 1/2], got {kappa}"),
        ));
    }
    let vol = spectrum.domain().volume();
    let n = consts.nf();
    lambdas
        .iter()
        .map(|&lambda| {
            let epsilon = lambda.powf(-kappa);
            let report = counting_bounds(spectrum, consts, lambda, epsilon)?;
            let row = report
                .find("normalized_remainder")
                .expect("counting bounds carry the normalized remainder");
            let (lo, hi) = (row.lower.unwrap_or(f64::NAN), row.upper.unwrap_or(f64::NAN));
            let riesz = spectrum.riesz_mean(lambda)?;
            Ok(ScanRow {
                lambda,
                count: spectrum.counting(lambda)?,
                weyl_term: consts.c_n * vol * lambda.powf(n / 2.0),
                epsilon,
                interval_lower: lo,
                interval_upper: hi,
                interval_width: hi - lo,
                riesz_mean: riesz,
                riesz_remainder: (riesz / lambda
                    - 2.0 / (n + 2.0) * consts.c_n * vol * lambda.powf(n / 2.0))
                .abs(),
            })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// `count` points geometrically spaced on `[lo, hi]`, nudged off exact eigenvalues.
pub fn lambda_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let offset = 1e-9;
    if count == 1 {
        return vec![hi - offset];
    }
    let ratio = (hi / lo).powf(1.0 / (count - 1) as f64);
    (0..count)
        .map(|i| {
            let v = if i + 1 == count {
                hi
            } else {
                lo * ratio.powi(i as i32)
            };
            v - offset * v.max(1.0)
        })
        .collect()
}

/// Convenience for domains given without a spectrum.
pub fn spectrum_for(domain: &BoxDomain, max_lambda: f64, theta: f64) -> Result<Spectrum> {
    Spectrum::new(domain.clone(), max_lambda * (1.0 + theta) * (1.0 + 1e-9))
}
