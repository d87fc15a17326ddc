use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "ftauber",
    version,
    about = "Fourier Tauberian bounds: test functions, suites and Laplace reports"
)]
pub struct Cli {
    /// JSON file whose fields override the command-line flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Build a test function, certify it and write the JSON document.
    BuildTestfn(BuildArgs),
    /// Certify an existing or freshly built test function.
    VerifyTestfn(VerifyArgs),
    /// Run the Tauberian inequality suite on a seeded step-function ensemble.
    TauberSuite(SuiteArgs),
    /// Tabulate every Laplace bound next to its exact value.
    LaplaceReport(LaplaceArgs),
    /// Weyl remainder scan with layer width λ^{-κ}.
    RemainderScan(ScanArgs),
}

/// `zeta:M`, `gamma:L`, `gamma:L:raw` or `file:PATH`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Source {
    Zeta(u32),
    Gamma { l: u32, normalized: bool },
    File(PathBuf),
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad =
            || format!("unrecognized source `{s}`; expected zeta:M, gamma:L[:raw] or file:PATH");
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "zeta" => rest.parse().map(Source::Zeta).map_err(|_| bad()),
            "gamma" => {
                let (l, normalized) = match rest.split_once(':') {
                    Some((l, "raw")) => (l, false),
                    Some(_) => return Err(bad()),
                    None => (rest, true),
                };
                let l = l.parse().map_err(|_| bad())?;
                Ok(Source::Gamma { l, normalized })
            }
            "file" if !rest.is_empty() => Ok(Source::File(PathBuf::from(rest))),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for Source {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Zeta(m) => write!(f, "zeta:{m}"),
            Source::Gamma {
                l,
                normalized: true,
            } => write!(f, "gamma:{l}"),
            Source::Gamma {
                l,
                normalized: false,
            } => write!(f, "gamma:{l}:raw"),
            Source::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl From<Source> for String {
    fn from(s: Source) -> String {
        s.to_string()
    }
}

/// `(T, δ)` written as `T:DELTA`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pair(pub f64, pub f64);

impl FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (t, d) = s
            .split_once(':')
            .ok_or_else(|| format!("expected T:DELTA, got `{s}`"))?;
        let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
        Ok(Pair(parse(t)?, parse(d)?))
    }
}

/// Side length, accepting `pi` and `Npi`.
pub fn parse_length(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some(k) = s.strip_suffix("pi") {
        let k = if k.is_empty() {
            1.0
        } else {
            k.parse::<f64>().map_err(|e| e.to_string())?
        };
        return Ok(k * PI);
    }
    s.parse::<f64>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildArgs {
    #[arg(long, default_value = "zeta:2")]
    pub source: Source,
    /// Where to write the test-function document (stdout if absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    #[arg(long)]
    pub source: Source,
    /// Where to write the axiom report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteArgs {
    #[arg(long, default_value = "zeta:1")]
    pub source: Source,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value_t = 20)]
    pub max_jumps: usize,
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    pub location_min: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub location_max: f64,
    #[arg(long, default_value_t = 2.0)]
    pub max_weight: f64,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 41)]
    pub tau_count: usize,
    /// Smoothing pairs `T:DELTA`; repeat the flag for several.
    #[arg(long = "pair", default_values = ["1:1", "2:1", "5:1"])]
    pub pairs: Vec<Pair>,
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    /// Per-function CSV table.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Aggregate report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaplaceArgs {
    /// Domain file `{"dim": n, "sides": [...]}`; overrides `--sides`.
    #[arg(long)]
    pub domain: Option<PathBuf>,
    /// Side lengths; `pi` and `2pi` are accepted.
    #[arg(long, value_delimiter = ',', value_parser = parse_length, default_values = ["1", "1"])]
    pub sides: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 1e4)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 50)]
    pub lambda_count: usize,
    /// Layer widths used at every λ, besides `λ^{-κ}`.
    #[arg(long = "epsilon", value_delimiter = ',', default_values = ["0.05", "0.2"])]
    pub epsilons: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub kappa: f64,
    /// θ in the averaged counting bound; the optimum `2/n` if absent.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanArgs {
    /// Domain file `{"dim": n, "sides": [...]}`; overrides `--sides`.
    #[arg(long)]
    pub domain: Option<PathBuf>,
    /// Side lengths; `pi` and `2pi` are accepted.
    #[arg(long, value_delimiter = ',', value_parser = parse_length, default_values = ["1", "1"])]
    pub sides: Vec<f64>,
    #[arg(long, default_value_t = 100.0)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 1e4)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 50)]
    pub lambda_count: usize,
    #[arg(long, default_value_t = 0.5)]
    pub kappa: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}
