use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use fourier_tauber::laplace::remainder_scan as scan_remainders;
use fourier_tauber::laplace::{
    berezin_liyau, counting_bounds, lambda_grid, loglog_slope, optimal_theta, spectral_bounds,
    spectrum_for, BoxConstants, BoxDomain, ScanRow,
};
use fourier_tauber::mollifier::{certify, AxiomReport};
use fourier_tauber::tauber::{evaluate_function, EnsembleSpec, SuiteConfig, SuiteReport};
use fourier_tauber::{build_gamma, build_rho_from_zeta, solve_zeta, BoundReport, TestFunction};

use crate::args::{BuildArgs, LaplaceArgs, ScanArgs, Source, SuiteArgs, VerifyArgs};

fn num(v: f64) -> String {
    format!("{:.11e}", v + 0.0)
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn load_source(source: &Source) -> Result<TestFunction> {
    let rho = match source {
        Source::Zeta(m) => build_rho_from_zeta(&solve_zeta(*m)?)?,
        Source::Gamma { l, normalized } => build_gamma(*l, *normalized)?,
        Source::File(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            TestFunction::from_json(&text).with_context(|| format!("loading {}", p.display()))?
        }
    };
    Ok(rho)
}

fn print_certificate(source: &Source, rho: &TestFunction, report: &AxiomReport) {
    eprintln!("source {source}, decay order m = {}", rho.decay_order());
    if let Some(z) = rho.zeta() {
        eprintln!("nu = {:.9}, nu_tilde = {:.9}", z.nu, z.nu_tilde);
    }
    for c in &report.checks {
        let verdict = if c.passed { "pass" } else { "FAIL" };
        eprintln!(
            "  {:<28} {:>16.9e}  limit {:>16.9e}  {verdict}",
            c.name, c.value, c.limit
        );
    }
    let failed: Vec<_> = report.failures().map(|c| c.name).collect();
    if failed.is_empty() {
        eprintln!("all axioms hold");
    } else {
        eprintln!("failed: {}", failed.join(", "));
    }
}

pub fn build_testfn(args: &BuildArgs) -> Result<bool> {
    let rho = load_source(&args.source)?;
    let report = certify(&rho);
    print_certificate(&args.source, &rho, &report);
    let mut doc = rho.to_json()?;
    doc.push('\n');
    emit(args.output.as_deref(), doc.as_bytes())?;
    Ok(report.all_passed())
}

pub fn verify_testfn(args: &VerifyArgs) -> Result<bool> {
    let rho = load_source(&args.source)?;
    let report = certify(&rho);
    print_certificate(&args.source, &rho, &report);
    if let Some(p) = &args.json {
        let mut s = serde_json::to_string_pretty(&report)?;
        s.push('\n');
        emit(Some(p), s.as_bytes())?;
    }
    Ok(report.all_passed())
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

pub fn suite_config(args: &SuiteArgs) -> Result<SuiteConfig> {
    ensure!(args.tau_count > 0, "tau grid is empty");
    ensure!(!args.pairs.is_empty(), "no (T, delta) pairs given");
    for v in [
        args.tau_min,
        args.tau_max,
        args.location_min,
        args.location_max,
    ] {
        ensure!(v.is_finite(), "grid bounds must be finite");
    }
    ensure!(
        args.location_min < args.location_max,
        "location range [{}, {}] is empty",
        args.location_min,
        args.location_max
    );
    ensure!(args.max_weight > 0.0, "max weight must be positive");
    ensure!(args.max_jumps > 0, "max jumps must be positive");
    for p in &args.pairs {
        fourier_tauber::SmoothingParams::new(p.1, p.0, args.epsilon, 1.0)
            .with_context(|| format!("pair T = {}, delta = {}", p.0, p.1))?;
    }
    Ok(SuiteConfig {
        seed: args.seed,
        ensemble: EnsembleSpec {
            count: args.count,
            max_jumps: args.max_jumps,
            location_range: (args.location_min, args.location_max),
            max_weight: args.max_weight,
        },
        taus: linspace(args.tau_min, args.tau_max, args.tau_count),
        pairs: args.pairs.iter().map(|p| (p.0, p.1)).collect(),
        epsilon: args.epsilon,
        tolerance: args.tolerance,
    })
}

#[derive(Serialize)]
struct SuiteDocument<'a> {
    source: String,
    config: &'a SuiteConfig,
    total: SuiteReport,
    functions: &'a [SuiteReport],
}

const SUITE_HEADER: &str = "function,jumps,evaluations,max_identity_residual,identity_violations,\
sandwich_violations,signed_kernel_violations,corridor_violations,monotone_violations,\
worst_sandwich_margin,worst_corridor_margin";

pub fn tauber_suite(args: &SuiteArgs) -> Result<bool> {
    let config = suite_config(args)?;
    let rho = load_source(&args.source)?;
    let ensemble = config.ensemble();
    if ensemble.is_empty() {
        eprintln!("warning: empty ensemble, nothing to check");
    }
    let reports = ensemble
        .par_iter()
        .map(|f| evaluate_function(&rho, f, &config))
        .collect::<fourier_tauber::Result<Vec<_>>>()?;
    let total = reports.iter().fold(blank(), |acc, r| acc.merge(r));

    let mut csv = String::from(SUITE_HEADER);
    csv.push('\n');
    for (i, (f, r)) in ensemble.iter().zip(&reports).enumerate() {
        writeln!(
            csv,
            "{i},{},{},{},{},{},{},{},{},{},{}",
            f.jumps().len(),
            r.evaluations,
            num(r.max_identity_residual),
            r.identity_violations,
            r.sandwich_violations,
            r.signed_kernel_violations,
            r.corridor_violations,
            r.monotone_violations,
            num(r.worst_sandwich_margin),
            num(r.worst_corridor_margin),
        )?;
    }
    emit(args.output.as_deref(), csv.as_bytes())?;
    if let Some(p) = &args.json {
        let doc = SuiteDocument {
            source: args.source.to_string(),
            config: &config,
            total,
            functions: &reports,
        };
        let mut s = serde_json::to_string_pretty(&doc)?;
        s.push('\n');
        emit(Some(p), s.as_bytes())?;
    }

    eprintln!(
        "{} functions, {} evaluations; max identity residual {:.3e}",
        total.functions, total.evaluations, total.max_identity_residual
    );
    eprintln!(
        "violations: identity {}, sandwich {}, signed kernels {}, corridor {}, monotone {}",
        total.identity_violations,
        total.sandwich_violations,
        total.signed_kernel_violations,
        total.corridor_violations,
        total.monotone_violations
    );
    Ok(total.passed())
}

fn blank() -> SuiteReport {
    SuiteReport {
        worst_sandwich_margin: f64::INFINITY,
        worst_corridor_margin: f64::INFINITY,
        ..SuiteReport::default()
    }
}

pub fn load_domain(domain: Option<&Path>, sides: &[f64]) -> Result<BoxDomain> {
    match domain {
        Some(p) => {
            let text =
                fs::read_to_string(p).with_context(|| format!("reading domain {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing domain {}", p.display()))
        }
        None => Ok(BoxDomain::new(sides.to_vec()).context("invalid --sides")?),
    }
}

fn check_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    ensure!(count > 0, "lambda grid is empty");
    ensure!(
        lo > 0.0 && lo.is_finite() && hi.is_finite() && lo <= hi,
        "lambda range [{lo}, {hi}] must be finite, positive and ordered"
    );
    Ok(lambda_grid(lo, hi, count))
}

/// Every Laplace bound at every grid point, ordered by `λ`.
pub fn laplace_rows(args: &LaplaceArgs) -> Result<BoundReport> {
    let domain = load_domain(args.domain.as_deref(), &args.sides)?;
    let lambdas = check_grid(args.lambda_min, args.lambda_max, args.lambda_count)?;
    if args.epsilons.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        bail!("layer widths must be positive and finite");
    }
    ensure!(
        args.kappa > 0.0 && args.kappa <= 0.5,
        "kappa must lie in (0, 1/2]"
    );
    let consts = BoxConstants::new(domain.dim())?;
    let theta = args.theta.unwrap_or_else(|| optimal_theta(domain.dim()));
    ensure!(theta > 0.0 && theta.is_finite(), "theta must be positive");
    let spectrum = spectrum_for(&domain, args.lambda_max, theta)?;
    let points = domain.sample_points();

    let parts = lambdas
        .par_iter()
        .map(|&lambda| -> fourier_tauber::Result<BoundReport> {
            let mut report = BoundReport::default();
            for x in &points {
                report.extend(spectral_bounds(&spectrum, &consts, x, lambda)?);
            }
            report.extend(berezin_liyau(&spectrum, &consts, lambda, Some(theta))?);
            let scaled = lambda.powf(-args.kappa);
            for &eps in args.epsilons.iter().chain([&scaled]) {
                report.extend(counting_bounds(&spectrum, &consts, lambda, eps)?);
            }
            Ok(report)
        })
        .collect::<fourier_tauber::Result<Vec<_>>>()?;
    let mut report = BoundReport::default();
    for part in parts {
        report.extend(part);
    }
    Ok(report)
}

pub fn laplace_report(args: &LaplaceArgs) -> Result<bool> {
    let report = laplace_rows(args)?;
    emit(args.output.as_deref(), report.to_csv_string()?.as_bytes())?;
    if let Some(p) = &args.json {
        emit(Some(p), report.to_json()?.as_bytes())?;
    }
    let violations = report.violations();
    eprintln!(
        "{} rows, {} violations",
        report.rows.len(),
        violations.len()
    );
    for row in violations.iter().take(10) {
        eprintln!(
            "  {} ({}) at lambda = {:.6e}: exact {:.9e} outside [{:?}, {:?}]",
            row.quantity, row.paper_eq, row.lambda, row.exact, row.lower, row.upper
        );
    }
    Ok(violations.is_empty())
}

const SCAN_HEADER: &str = "lambda,count,weyl_term,epsilon,interval_lower,interval_upper,\
interval_width,riesz_mean,riesz_remainder";

#[derive(Serialize)]
struct ScanDocument<'a> {
    kappa: f64,
    riesz_remainder_slope: f64,
    rows: &'a [ScanRow],
}

pub struct Scan {
    pub dim: u32,
    pub rows: Vec<ScanRow>,
    /// Log-log slope of the Riesz remainder against `λ`.
    pub slope: f64,
}

pub fn scan_rows(args: &ScanArgs) -> Result<Scan> {
    let domain = load_domain(args.domain.as_deref(), &args.sides)?;
    let lambdas = check_grid(args.lambda_min, args.lambda_max, args.lambda_count)?;
    let consts = BoxConstants::new(domain.dim())?;
    let spectrum = spectrum_for(&domain, args.lambda_max, 0.0)?;
    let rows = scan_remainders(&spectrum, &consts, &lambdas, args.kappa)?;
    let slope = loglog_slope(
        &rows
            .iter()
            .map(|r| (r.lambda, r.riesz_remainder))
            .collect::<Vec<_>>(),
    );
    Ok(Scan {
        dim: domain.dim(),
        rows,
        slope,
    })
}

pub fn remainder_scan(args: &ScanArgs) -> Result<bool> {
    let Scan { dim, rows, slope } = scan_rows(args)?;
    let n = f64::from(dim);
    let mut csv = String::from(SCAN_HEADER);
    csv.push('\n');
    let mut violations = 0;
    for r in &rows {
        let normalized = (r.count - r.weyl_term) / r.lambda.powf(n / 2.0);
        let slack = 1e-9 * normalized.abs().max(1.0);
        if !(r.interval_lower - slack <= normalized && normalized <= r.interval_upper + slack) {
            violations += 1;
        }
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            num(r.lambda),
            num(r.count),
            num(r.weyl_term),
            num(r.epsilon),
            num(r.interval_lower),
            num(r.interval_upper),
            num(r.interval_width),
            num(r.riesz_mean),
            num(r.riesz_remainder),
        )?;
    }
    emit(args.output.as_deref(), csv.as_bytes())?;
    if let Some(p) = &args.json {
        let doc = ScanDocument {
            kappa: args.kappa,
            riesz_remainder_slope: slope,
            rows: &rows,
        };
        let mut s = serde_json::to_string_pretty(&doc)?;
        s.push('\n');
        emit(Some(p), s.as_bytes())?;
    }
    eprintln!(
        "{} rows, Riesz remainder log-log slope {slope:.4}, {violations} remainder violations",
        rows.len()
    );
    Ok(violations == 0)
}
