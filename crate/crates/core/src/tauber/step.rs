use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Non-decreasing step function `F = base + Σ w_i H(τ - τ_i)` with
/// `F(τ_i) = F(τ_i - 0) + w_i/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    jumps: Vec<(f64, f64)>,
    base: f64,
    degree: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct JumpRecord {
    location: f64,
    weight: f64,
}

impl StepFunction {
    /// Sorts the jumps and merges coincident locations.
    pub fn new(mut jumps: Vec<(f64, f64)>, base: f64, degree: u32) -> Result<Self> {
        if !base.is_finite() {
            return Err(invalid("base", "must be finite"));
        }
        for &(x, w) in &jumps {
            if !x.is_finite() {
                return Err(invalid("location", format!("{x} is not finite")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(invalid("weight", format!("{w} at {x} is not positive")));
            }
        }
        jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(jumps.len());
        for (x, w) in jumps {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += w,
                _ => merged.push((x, w)),
            }
        }
        Ok(Self {
            jumps: merged,
            base,
            degree,
        })
    }

    pub fn zero() -> Self {
        Self {
            jumps: Vec::new(),
            base: 0.0,
            degree: 0,
        }
    }

    /// Unit jump at `x`.
    pub fn heaviside(x: f64) -> Self {
        Self {
            jumps: vec![(x, 1.0)],
            base: 0.0,
            degree: 0,
        }
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    /// Declared polynomial growth degree `n` in `|F(τ)| ≤ C(|τ|+1)^n`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn with_degree(mut self, degree: u32) -> Self {
        self.degree = degree;
        self
    }

    pub fn total_weight(&self) -> f64 {
        self.jumps.iter().map(|j| j.1).sum()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.jumps.iter().map(|&(x, w)| (x, factor * w)).collect(),
            factor * self.base,
            self.degree,
        )
    }

    pub fn eval(&self, tau: f64) -> f64 {
        let mut v = self.base;
        for &(x, w) in &self.jumps {
            if x < tau {
                v += w;
            } else if x == tau {
                v += 0.5 * w;
            } else {
                break;
            }
        }
        v
    }

    /// `∫_a^b F`, exact.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let mut v = self.base * (b - a);
        for &(x, w) in &self.jumps {
            v += w * ((b - x).max(0.0) - (a - x).max(0.0));
        }
        v
    }

    /// Absolute slack for comparisons against `F`.
    pub fn numeric_margin(&self) -> f64 {
        1e-10 * (self.total_weight() + self.base.abs())
    }

    /// Smallest `C` with `|F(τ)| ≤ C(|τ|+1)^n` on `samples` points of `[lo, hi]`.
    pub fn growth_constant(&self, lo: f64, hi: f64, samples: usize) -> f64 {
        let n = self.degree as i32;
        (0..samples)
            .map(|i| {
                let t = lo + (hi - lo) * i as f64 / (samples.max(2) - 1) as f64;
                self.eval(t).abs() / (t.abs() + 1.0).powi(n)
            })
            .fold(0.0, f64::max)
    }

    pub fn read_csv<R: Read>(reader: R, base: f64, degree: u32) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut jumps = Vec::new();
        for rec in rdr.deserialize() {
            let r: JumpRecord = rec?;
            jumps.push((r.location, r.weight));
        }
        Self::new(jumps, base, degree)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for &(location, weight) in &self.jumps {
            w.serialize(JumpRecord { location, weight })?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Ranges for the randomized ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub count: usize,
    pub max_jumps: usize,
    pub location_range: (f64, f64),
    pub max_weight: f64,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self {
            count: 200,
            max_jumps: 20,
            location_range: (-5.0, 5.0),
            max_weight: 2.0,
        }
    }
}

/// Deterministic step functions: 1 to `max_jumps` jumps, uniform locations,
/// weights in `(0, max_weight]`.
pub fn random_ensemble(seed: u64, spec: &EnsembleSpec) -> Vec<StepFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = spec.location_range;
    (0..spec.count)
        .map(|_| {
            let n = rng.gen_range(1..=spec.max_jumps.max(1));
            let jumps = (0..n)
                .map(|_| {
                    let x = rng.gen_range(lo..hi);
                    let w = spec.max_weight * (1.0 - rng.gen::<f64>());
                    (x, w)
                })
                .collect();
            StepFunction::new(jumps, 0.0, 0).expect("generated jumps are valid")
        })
        .collect()
}
