use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::special::gamma_half_integer;

/// `(2π)^{-n}` times the volume of the unit ball in `R^n`.
pub fn unit_ball_constant(n: u32) -> f64 {
    assert!(n >= 1, "dimension must be positive");
    PI.powf(n as f64 / 2.0) / gamma_half_integer(n + 2) / (2.0 * PI).powi(n as i32)
}

/// Axis-aligned box `(0, L_1) × … × (0, L_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBox", into = "RawBox")]
pub struct BoxDomain {
    sides: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawBox {
    dim: usize,
    sides: Vec<f64>,
}

impl TryFrom<RawBox> for BoxDomain {
    type Error = Error;

    fn try_from(raw: RawBox) -> Result<Self> {
        if raw.dim != raw.sides.len() {
            return Err(invalid(
                "dim",
                format!("{} does not match {} sides", raw.dim, raw.sides.len()),
            ));
        }
        BoxDomain::new(raw.sides)
    }
}

impl From<BoxDomain> for RawBox {
    fn from(b: BoxDomain) -> Self {
        RawBox {
            dim: b.sides.len(),
            sides: b.sides,
        }
    }
}

impl BoxDomain {
    pub fn new(sides: Vec<f64>) -> Result<Self> {
        if sides.is_empty() {
            return Err(invalid("sides", "need at least one side"));
        }
        if let Some(s) = sides.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return Err(invalid(
                "sides",
                format!("side lengths must be positive, got {s}"),
            ));
        }
        Ok(Self { sides })
    }

    /// `(0, π)`.
    pub fn interval_pi() -> Self {
        Self { sides: vec![PI] }
    }

    pub fn unit_cube(dim: usize) -> Self {
        Self {
            sides: vec![1.0; dim.max(1)],
        }
    }

    pub fn dim(&self) -> u32 {
        self.sides.len() as u32
    }

    pub fn sides(&self) -> &[f64] {
        &self.sides
    }

    pub fn volume(&self) -> f64 {
        self.sides.iter().product()
    }

    /// Half the shortest side, the largest value of `d(x)`.
    pub fn inradius(&self) -> f64 {
        0.5 * self.sides.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn check_interior(&self, x: &[f64]) -> Result<()> {
        let inside = x.len() == self.sides.len()
            && x.iter()
                .zip(&self.sides)
                .all(|(&xi, &l)| xi > 0.0 && xi < l);
        if inside {
            Ok(())
        } else {
            Err(Error::OutsideDomain(x.to_vec()))
        }
    }

    pub fn dist_to_boundary(&self, x: &[f64]) -> Result<f64> {
        self.check_interior(x)?;
        Ok(x.iter()
            .zip(&self.sides)
            .map(|(&xi, &l)| xi.min(l - xi))
            .fold(f64::INFINITY, f64::min))
    }

    /// `Π (L_i - 2s)` for `s` below the inradius, else 0: the volume of `{d > s}`.
    pub fn interior_volume(&self, s: f64) -> f64 {
        if s >= self.inradius() {
            return 0.0;
        }
        self.sides.iter().map(|l| l - 2.0 * s.max(0.0)).product()
    }

    pub fn boundary_volume(&self, s: f64) -> f64 {
        self.volume() - self.interior_volume(s)
    }

    /// Interior sub-box `{d(x) > ε}`, or `None` when it is empty.
    pub fn interior_box(&self, epsilon: f64) -> Option<Vec<(f64, f64)>> {
        (epsilon < self.inradius())
            .then(|| self.sides.iter().map(|&l| (epsilon, l - epsilon)).collect())
    }

    /// Nine interior points sweeping from near a face towards the centre.
    pub fn sample_points(&self) -> Vec<Vec<f64>> {
        (1..=9)
            .map(|k| {
                self.sides
                    .iter()
                    .enumerate()
                    .map(|(j, &l)| {
                        let f = if j == 0 {
                            k as f64 / 10.0
                        } else {
                            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                            0.5 + sign * 0.3 * (k as f64 - 5.0) / 4.0
                        };
                        f * l
                    })
                    .collect()
            })
            .collect()
    }
}

/// Boundary layer `{d ≤ ε}` and interior `{d > ε}` of a box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerData {
    pub epsilon: f64,
    pub boundary_volume: f64,
    pub interior_volume: f64,
    /// `∫_{d>ε} d(x)^{-j} dx` for `j = 1, 2`.
    pub inverse_distance: [f64; 2],
}

impl LayerData {
    pub fn inverse_distance(&self, j: u32) -> f64 {
        self.inverse_distance[j as usize - 1]
    }
}

pub fn layer_data(domain: &BoxDomain, epsilon: f64) -> Result<LayerData> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(invalid(
            "epsilon",
            format!("must be positive, got {epsilon}"),
        ));
    }
    Ok(LayerData {
        epsilon,
        boundary_volume: domain.boundary_volume(epsilon),
        interior_volume: domain.interior_volume(epsilon),
        inverse_distance: [
            inverse_distance_integral(domain, epsilon, 1),
            inverse_distance_integral(domain, epsilon, 2),
        ],
    })
}

/// `∫_ε^h s^{-j} q(s) ds` where `q = -d/ds Π(L_i - 2s)` is the area of the level set `{d = s}`.
fn inverse_distance_integral(domain: &BoxDomain, epsilon: f64, j: i32) -> f64 {
    let h = domain.inradius();
    if epsilon >= h {
        return 0.0;
    }
    // coefficients of Π(L_i - 2s) in increasing powers of s
    let mut p = vec![1.0];
    for &l in domain.sides() {
        let mut next = vec![0.0; p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            next[k] += c * l;
            next[k + 1] -= 2.0 * c;
        }
        p = next;
    }
    let mut total = 0.0;
    for (k, c) in p.iter().enumerate().skip(1) {
        let q = -(k as f64) * c;
        let e = k as i32 - 1 - j;
        total += q * if e == -1 {
            (h / epsilon).ln()
        } else {
            let e1 = (e + 1) as f64;
            (h.powf(e1) - epsilon.powf(e1)) / e1
        };
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_constants() {
        assert!((unit_ball_constant(1) - 1.0 / PI).abs() < 1e-15);
        assert!((unit_ball_constant(2) - 0.25 / PI).abs() < 1e-15);
        assert!((unit_ball_constant(3) - 1.0 / (6.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn distances() {
        let sq = BoxDomain::unit_cube(2);
        assert_eq!(sq.dist_to_boundary(&[0.5, 0.5]).unwrap(), 0.5);
        assert_eq!(sq.dist_to_boundary(&[0.1, 0.4]).unwrap(), 0.1);
        assert!(sq.dist_to_boundary(&[0.0, 0.4]).is_err());
        assert!(sq.dist_to_boundary(&[0.5]).is_err());
        let i = BoxDomain::interval_pi();
        assert_eq!(i.dist_to_boundary(&[PI / 2.0]).unwrap(), PI / 2.0);
        for x in sq.sample_points() {
            assert!(sq.check_interior(&x).is_ok());
        }
    }

    #[test]
    fn layers() {
        let sq = BoxDomain::unit_cube(2);
        let l = layer_data(&sq, 0.1).unwrap();
        assert!((l.boundary_volume - 0.36).abs() < 1e-15);
        assert!((l.boundary_volume + l.interior_volume - 1.0).abs() < 1e-15);
        let i = layer_data(&BoxDomain::interval_pi(), 0.3).unwrap();
        assert!((i.inverse_distance(1) - 2.0 * (PI / 0.6).ln()).abs() < 1e-13);
        let wide = layer_data(&sq, 0.7).unwrap();
        assert_eq!((wide.boundary_volume, wide.interior_volume), (1.0, 0.0));
        assert_eq!(wide.inverse_distance, [0.0, 0.0]);
    }

    #[test]
    fn domain_json() {
        let b: BoxDomain = serde_json::from_str(r#"{"dim": 2, "sides": [1.0, 2.0]}"#).unwrap();
        assert_eq!(b.volume(), 2.0);
        assert!(serde_json::from_str::<BoxDomain>(r#"{"dim": 3, "sides": [1.0]}"#).is_err());
        assert!(serde_json::from_str::<BoxDomain>(r#"{"dim": 1, "sides": [-1.0]}"#).is_err());
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"dim":2,"sides":[1.0,2.0]}"#);
    }
}
