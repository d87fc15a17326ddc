//! Admissible test functions with their cumulative tables, kernels and moments.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use super::profile::{GammaProfile, Profile, ZetaProfile};
use super::zeta::ZetaSolution;
use crate::error::{invalid, Error, Result};
use crate::quadrature::{Adaptive, GaussLegendre};

pub const TAU_MAX: f64 = 200.0;
const FINE_STEP: f64 = 0.005;
const FINE_END: f64 = 20.0;
pub const BAND_ETA: f64 = 1e-3;
pub const BAND_TOL: f64 = 1e-6;
const BAND_T_MAX: f64 = 4.0;
const BAND_SAMPLES: usize = 400;
pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Construction {
    Zeta { solution: ZetaSolution },
    Gamma { l: u32, normalized: bool },
}

impl PartialEq for ZetaSolution {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.coefficients == other.coefficients
    }
}

/// Which member of the kernel family `ρ_δ`, `ρ_{δ,0}`, `ρ_{δ,1}`, `ρ_{δ,2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kernel {
    Density,
    K0,
    K1,
    K2,
}

impl Kernel {
    pub fn from_index(k: u8) -> Result<Self> {
        match k {
            0 => Ok(Kernel::K0),
            1 => Ok(Kernel::K1),
            2 => Ok(Kernel::K2),
            _ => Err(invalid(
                "k",
                format!("kernel index must be 0, 1 or 2, got {k}"),
            )),
        }
    }
}

/// `∫_0^τ ρ` and `∫_0^τ μρ(μ) dμ` on a graded grid, with cubic Hermite
/// interpolation using the exact slopes `ρ(τ)` and `τρ(τ)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CumulativeTable {
    pub grid: Vec<f64>,
    pub rho: Vec<f64>,
    pub cum0: Vec<f64>,
    pub cum1: Option<Vec<f64>>,
}

impl CumulativeTable {
    fn locate(&self, tau: f64) -> usize {
        let i = self.grid.partition_point(|g| *g <= tau);
        i.saturating_sub(1).min(self.grid.len() - 2)
    }

    fn hermite(&self, values: &[f64], slope: impl Fn(usize) -> f64, tau: f64) -> f64 {
        let i = self.locate(tau);
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        let s = (tau - x0) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * values[i] + h10 * h * slope(i) + h01 * values[i + 1] + h11 * h * slope(i + 1)
    }

    fn cum0(&self, tau: f64) -> f64 {
        self.hermite(&self.cum0, |i| self.rho[i], tau)
    }

    fn cum1(&self, tau: f64) -> Option<f64> {
        let c = self.cum1.as_ref()?;
        Some(self.hermite(c, |i| self.grid[i] * self.rho[i], tau))
    }
}

/// Numerical bound on `sup |ρ̂(t)|` for `1 + η ≤ t ≤ t_max`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BandLimitCertificate {
    pub eta: f64,
    pub t_max: f64,
    pub samples: usize,
    pub rho_hat_zero: f64,
    pub sup_density: f64,
    /// Same bound for `ρ̂_{1,0}`, when that kernel exists.
    pub sup_k0: Option<f64>,
    pub tolerance: f64,
}

impl BandLimitCertificate {
    pub fn passes(&self) -> bool {
        let limit = self.tolerance * self.rho_hat_zero;
        self.sup_density <= limit && self.sup_k0.is_none_or(|s| s <= limit)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Document {
    version: u32,
    construction: Construction,
    decay_order: u32,
    scale: f64,
    table: CumulativeTable,
    moments: Vec<f64>,
    certificate: BandLimitCertificate,
}

/// Even, non-negative `ρ` with `supp ρ̂ ⊂ [-1, 1]` and decay `⟨τ⟩^{-2m-2}`.
///
/// Immutable after construction apart from the memoized fractional moments.
#[derive(Debug)]
pub struct TestFunction {
    construction: Construction,
    decay_order: u32,
    scale: f64,
    profile: Profile,
    table: CumulativeTable,
    /// Quadrature values of `c_{ρ,κ}`, `κ = 0..=2m`.
    moments: Vec<f64>,
    certificate: BandLimitCertificate,
    fractional: RwLock<BTreeMap<u64, f64>>,
    fourier_nodes: OnceLock<Vec<(f64, f64)>>,
}

/// `γ` of the sinc-power construction, divided by its mass when `normalize`.
pub fn build_gamma(l: u32, normalize: bool) -> Result<TestFunction> {
    if l == 0 {
        return Err(Error::GammaOrder(l));
    }
    let profile = GammaProfile::new(l);
    let scale = if normalize {
        profile.total_mass().recip()
    } else {
        1.0
    };
    TestFunction::assemble(
        Construction::Gamma {
            l,
            normalized: normalize,
        },
        l - 1,
        scale,
        Profile::Gamma(profile),
    )
}

/// `ρ = ζ̂²`.
pub fn build_rho_from_zeta(z: &ZetaSolution) -> Result<TestFunction> {
    let profile = ZetaProfile::new(z);
    TestFunction::assemble(
        Construction::Zeta {
            solution: z.clone(),
        },
        z.m,
        1.0,
        Profile::Zeta(profile),
    )
}

fn graded_grid() -> Vec<f64> {
    let fine = (FINE_END / FINE_STEP).round() as usize;
    let mut grid: Vec<f64> = (0..=fine).map(|i| i as f64 * FINE_STEP).collect();
    let ratio = 1.0 + FINE_STEP / FINE_END;
    let mut tau = FINE_END;
    while tau < TAU_MAX {
        tau = (tau * ratio).min(TAU_MAX);
        if TAU_MAX - tau < 0.5 * FINE_STEP * tau / FINE_END {
            tau = TAU_MAX;
        }
        grid.push(tau);
    }
    grid
}

impl TestFunction {
    fn assemble(
        construction: Construction,
        decay_order: u32,
        scale: f64,
        profile: Profile,
    ) -> Result<Self> {
        let grid = graded_grid();
        let rho: Vec<f64> = grid.iter().map(|t| scale * profile.eval(*t)).collect();
        let rule = GaussLegendre::new(8);
        let top = 2 * decay_order as usize;
        let mut head = vec![0.0; top + 1];
        let mut cum0 = vec![0.0; grid.len()];
        let mut cum1 = vec![0.0; grid.len()];
        for i in 0..grid.len() - 1 {
            let (mut p0, mut p1) = (0.0, 0.0);
            for (x, w) in rule.mapped(grid[i], grid[i + 1]) {
                let v = w * scale * profile.eval(x);
                p0 += v;
                p1 += v * x;
                let mut xp = 1.0;
                for h in head.iter_mut() {
                    *h += v * xp;
                    xp *= x;
                }
            }
            cum0[i + 1] = cum0[i] + p0;
            cum1[i + 1] = cum1[i] + p1;
        }
        let moments: Vec<f64> = head
            .iter()
            .enumerate()
            .map(|(k, h)| 2.0 * (h + scale * profile.tail(k as f64, 0.0, TAU_MAX).re))
            .collect();
        let table = CumulativeTable {
            grid,
            rho,
            cum0,
            cum1: (decay_order > 0).then_some(cum1),
        };
        let mut rho = Self {
            construction,
            decay_order,
            scale,
            profile,
            table,
            moments,
            certificate: BandLimitCertificate {
                eta: BAND_ETA,
                t_max: BAND_T_MAX,
                samples: BAND_SAMPLES,
                rho_hat_zero: 0.0,
                sup_density: f64::NAN,
                sup_k0: None,
                tolerance: BAND_TOL,
            },
            fractional: RwLock::new(BTreeMap::new()),
            fourier_nodes: OnceLock::new(),
        };
        rho.certificate = rho.band_limit_scan(BAND_ETA, BAND_T_MAX, BAND_SAMPLES);
        Ok(rho)
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn decay_order(&self) -> u32 {
        self.decay_order
    }

    pub fn zeta(&self) -> Option<&ZetaSolution> {
        match &self.construction {
            Construction::Zeta { solution } => Some(solution),
            Construction::Gamma { .. } => None,
        }
    }

    pub fn table(&self) -> &CumulativeTable {
        &self.table
    }

    pub fn certificate(&self) -> &BandLimitCertificate {
        &self.certificate
    }

    /// `ρ(τ)`.
    pub fn density(&self, tau: f64) -> f64 {
        self.scale * self.profile.eval(tau)
    }

    /// `c_{ρ,0}` as computed, which is 1 up to quadrature error for normalized ρ.
    pub fn mass(&self) -> f64 {
        self.moments[0]
    }

    /// `c_{ρ,1}`; `None` when `m = 0` and the first moment diverges.
    pub fn c1(&self) -> Option<f64> {
        self.moments.get(1).copied()
    }

    fn c1_or_err(&self, k: u8) -> Result<f64> {
        self.c1().ok_or(Error::KernelNeedsDecay {
            k,
            m: self.decay_order,
        })
    }

    fn tail(&self, kappa: f64, x: f64) -> f64 {
        self.scale * self.profile.tail(kappa, 0.0, x).re
    }

    /// `∫_0^τ ρ` for `τ >= 0`.
    pub fn cumulative(&self, tau: f64) -> f64 {
        debug_assert!(tau >= 0.0);
        if tau <= TAU_MAX {
            self.table.cum0(tau)
        } else {
            0.5 * self.mass() - self.tail(0.0, tau)
        }
    }

    /// `∫_{-∞}^τ ρ`.
    pub fn distribution(&self, tau: f64) -> f64 {
        let half = 0.5 * self.mass();
        if tau >= 0.0 {
            half + self.cumulative(tau)
        } else {
            half - self.cumulative(-tau)
        }
    }

    /// `ρ_{1,1}`: odd, zero at the origin.
    pub fn rho11(&self, tau: f64) -> f64 {
        if tau == 0.0 {
            return 0.0;
        }
        let y = tau.abs();
        let v = if y <= TAU_MAX {
            0.5 * self.mass() - self.table.cum0(y)
        } else {
            self.tail(0.0, y)
        };
        v.copysign(tau)
    }

    /// `ρ_{1,0}(τ) = ∫_{|τ|}^∞ μρ(μ) dμ`.
    pub fn rho10(&self, tau: f64) -> Result<f64> {
        let c1 = self.c1_or_err(0)?;
        let y = tau.abs();
        Ok(if y <= TAU_MAX {
            0.5 * c1 - self.table.cum1(y).unwrap_or(0.0)
        } else {
            self.tail(1.0, y)
        })
    }

    /// `ρ_{1,2}(τ) = ρ_{1,0}(τ) - |τ| ρ_{1,1}(|τ|)`.
    pub fn rho12(&self, tau: f64) -> Result<f64> {
        self.c1_or_err(2)?;
        let y = tau.abs();
        Ok(self.rho10(y)? - y * self.rho11(y))
    }

    /// `ρ_δ(τ)` or `ρ_{δ,k}(τ) = δ^{1-k} ρ_{1,k}(δτ)`.
    pub fn kernel(&self, kernel: Kernel, delta: f64, tau: f64) -> Result<f64> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(invalid("delta", format!("must be positive, got {delta}")));
        }
        let y = delta * tau;
        match kernel {
            Kernel::Density => Ok(delta * self.density(y)),
            Kernel::K0 => Ok(delta * self.rho10(y)?),
            Kernel::K1 => Ok(self.rho11(y)),
            Kernel::K2 => Ok(self.rho12(y)? / delta),
        }
    }

    /// Upper end of the moment window, `2m + 1`.
    pub fn moment_limit(&self) -> f64 {
        2.0 * self.decay_order as f64 + 1.0
    }

    fn check_window(&self, kappa: f64) -> Result<()> {
        if kappa > -1.0 && kappa < self.moment_limit() {
            Ok(())
        } else {
            Err(Error::MomentWindow {
                kappa,
                upper: self.moment_limit(),
            })
        }
    }

    fn integer_index(&self, kappa: f64) -> Option<usize> {
        (kappa >= 0.0 && kappa.fract() == 0.0 && (kappa as usize) < self.moments.len())
            .then_some(kappa as usize)
    }

    /// `c_{ρ,κ} = ∫|μ|^κ ρ(μ) dμ`.
    ///
    /// Even orders of a `ζ̂²` construction come from the exact derivative norms.
    pub fn moment(&self, kappa: f64) -> Result<f64> {
        self.check_window(kappa)?;
        if let Some(k) = self.integer_index(kappa) {
            if let (Some(z), 0) = (self.zeta(), k % 2) {
                return Ok(z.derivative_norms[k / 2]);
            }
            return Ok(self.moments[k]);
        }
        self.fractional_moment(kappa)
    }

    /// `c_{ρ,κ}` from quadrature alone.
    pub fn moment_quadrature(&self, kappa: f64) -> Result<f64> {
        self.check_window(kappa)?;
        match self.integer_index(kappa) {
            Some(k) => Ok(self.moments[k]),
            None => self.fractional_moment(kappa),
        }
    }

    fn fractional_moment(&self, kappa: f64) -> Result<f64> {
        let key = kappa.to_bits();
        if let Some(v) = self
            .fractional
            .read()
            .expect("moment cache poisoned")
            .get(&key)
        {
            return Ok(*v);
        }
        let v = 2.0 * (self.integral_between(kappa, 0.0, TAU_MAX)? + self.tail(kappa, TAU_MAX));
        self.fractional
            .write()
            .expect("moment cache poisoned")
            .insert(key, v);
        Ok(v)
    }

    fn integral_between(&self, kappa: f64, a: f64, b: f64) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        let mut breaks = vec![a];
        let mut p = if a < 1.0 { 1.0 } else { a + 2.0 };
        while p < b {
            breaks.push(p);
            p += 2.0;
        }
        breaks.push(b);
        let q = Adaptive::new(1e-15, 1e-13);
        if a == 0.0 && kappa.fract() != 0.0 {
            // subtract ρ(0) on [0, 1] so the integrand vanishes at the origin
            let r0 = self.density(0.0);
            let near = q.integrate(0.0, breaks[1], |t| t.powf(kappa) * (self.density(t) - r0))?;
            let far = q.integrate_breaks(&breaks[1..], |t| t.powf(kappa) * self.density(t))?;
            return Ok(near.value + r0 * breaks[1].powf(kappa + 1.0) / (kappa + 1.0) + far.value);
        }
        Ok(
            q.integrate_breaks(&breaks, |t| t.powf(kappa) * self.density(t))?
                .value,
        )
    }

    /// `∫_x^∞ v^κ ρ(v) dv` for `x >= 0`, `κ` inside the moment window.
    pub fn upper_moment(&self, kappa: f64, x: f64) -> Result<f64> {
        self.check_window(kappa)?;
        let x = x.max(0.0);
        if x >= TAU_MAX {
            return Ok(self.tail(kappa, x));
        }
        Ok(self.integral_between(kappa, x, TAU_MAX)? + self.tail(kappa, TAU_MAX))
    }

    fn fourier_nodes(&self) -> &[(f64, f64)] {
        self.fourier_nodes.get_or_init(|| {
            let rule = GaussLegendre::new(12);
            let panels = (TAU_MAX / 0.25) as usize;
            let mut out = Vec::with_capacity(panels * rule.len());
            for i in 0..panels {
                let a = i as f64 * 0.25;
                for (x, w) in rule.mapped(a, a + 0.25) {
                    out.push((x, w * self.density(x)));
                }
            }
            out
        })
    }

    /// `ρ̂(t) = (2π)^{-1/2} ∫ e^{-itτ} ρ(τ) dτ`.
    pub fn fourier_transform(&self, t: f64) -> f64 {
        let head: f64 = self
            .fourier_nodes()
            .iter()
            .map(|(x, w)| w * (t * x).cos())
            .sum();
        let tail = self.scale * self.profile.tail(0.0, t, TAU_MAX).re;
        2.0 * (head + tail) / (2.0 * PI).sqrt()
    }

    /// `ρ̂_{1,0}(t) = (2π)^{-1/2} t^{-1} ∫ τ sin(tτ) ρ(τ) dτ`, `t ≠ 0`.
    pub fn fourier_transform_k0(&self, t: f64) -> Result<f64> {
        self.c1_or_err(0)?;
        let head: f64 = self
            .fourier_nodes()
            .iter()
            .map(|(x, w)| w * x * (t * x).sin())
            .sum();
        let tail = self.scale * self.profile.tail(1.0, t, TAU_MAX).im;
        Ok(2.0 * (head + tail) / (t * (2.0 * PI).sqrt()))
    }

    /// Scans `t ∈ [1 + η, t_max]` for the largest transform magnitude.
    pub fn band_limit_scan(&self, eta: f64, t_max: f64, samples: usize) -> BandLimitCertificate {
        let t0 = 1.0 + eta;
        let ts = (0..samples).map(|i| t0 + (t_max - t0) * i as f64 / (samples - 1) as f64);
        let mut sup_density: f64 = 0.0;
        let mut sup_k0: Option<f64> = self.c1().map(|_| 0.0);
        for t in ts {
            sup_density = sup_density.max(self.fourier_transform(t).abs());
            if let (Some(s), Ok(v)) = (sup_k0.as_mut(), self.fourier_transform_k0(t)) {
                *s = s.max(v.abs());
            }
        }
        BandLimitCertificate {
            eta,
            t_max,
            samples,
            rho_hat_zero: self.mass() / (2.0 * PI).sqrt(),
            sup_density,
            sup_k0,
            tolerance: BAND_TOL,
        }
    }

    /// Least-squares slope of `log max ρ` against `log τ` over windows in `[a, b]`.
    ///
    /// Window maxima are used because `ζ̂²` has zeros.
    pub fn decay_slope(&self, a: f64, b: f64) -> f64 {
        let width = match &self.construction {
            Construction::Zeta { .. } => 2.0 * PI,
            Construction::Gamma { l, .. } => 2.0 * PI * *l as f64,
        };
        let mut pts = Vec::new();
        let mut lo = a;
        while lo + width <= b {
            let (mut best_t, mut best) = (lo, 0.0);
            for i in 0..=256 {
                let t = lo + width * i as f64 / 256.0;
                let v = self.density(t);
                if v > best {
                    best = v;
                    best_t = t;
                }
            }
            pts.push((best_t.ln(), best.ln()));
            lo += width;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }

    /// `sup ρ(τ) ⟨τ⟩^{2m+2}` over the table grid.
    pub fn decay_constant(&self) -> f64 {
        let p = self.decay_order as f64 + 1.0;
        self.table
            .grid
            .iter()
            .zip(&self.table.rho)
            .map(|(t, r)| r * (1.0 + t * t).powf(p))
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = Document {
            version: DOCUMENT_VERSION,
            construction: self.construction.clone(),
            decay_order: self.decay_order,
            scale: self.scale,
            table: self.table.clone(),
            moments: self.moments.clone(),
            certificate: self.certificate.clone(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(s)?;
        if doc.version != DOCUMENT_VERSION {
            return Err(Error::DocumentVersion(doc.version));
        }
        let profile = match &doc.construction {
            Construction::Zeta { solution } => Profile::Zeta(ZetaProfile::new(solution)),
            Construction::Gamma { l, .. } => {
                if *l == 0 {
                    return Err(Error::GammaOrder(0));
                }
                Profile::Gamma(GammaProfile::new(*l))
            }
        };
        let n = doc.table.grid.len();
        if n < 2
            || doc.table.rho.len() != n
            || doc.table.cum0.len() != n
            || doc.table.cum1.as_ref().is_some_and(|c| c.len() != n)
            || doc.moments.len() != 2 * doc.decay_order as usize + 1
        {
            return Err(invalid("document", "table lengths are inconsistent"));
        }
        Ok(Self {
            construction: doc.construction,
            decay_order: doc.decay_order,
            scale: doc.scale,
            profile,
            table: doc.table,
            moments: doc.moments,
            certificate: doc.certificate,
            fractional: RwLock::new(BTreeMap::new()),
            fourier_nodes: OnceLock::new(),
        })
    }
}
