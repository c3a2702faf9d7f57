//! Plancherel measure on the embedded spectrum.
//!
//! With K of total mass 1 and Lebesgue measure on H the measure is
//!
//! * flat_r1: dλ/π on λ ≥ 0 (inversion recovers the even part)
//! * e2: λ dλ / 2π
//! * u1_c: λ dλ / 2π on every type slice
//! * heis1: |λ| dλ / 4π² on every ray of the fan; the limit ray is null.
//!
//! The constants are frozen here and re-derived by the calibration test and
//! the `calibrate_plancherel` example.

use std::f64::consts::PI;

use crate::pairs::{eigenvalue_map, PairDescriptor, PairId, ParamRange, RangeRule, SpectrumParams, SpectrumPoint};
use crate::Error;

pub const PLANCHEREL_FLAT_R1: f64 = 1.0 / PI;
pub const PLANCHEREL_E2: f64 = 1.0 / (2.0 * PI);
pub const PLANCHEREL_U1C: f64 = 1.0 / (2.0 * PI);
pub const PLANCHEREL_HEIS1: f64 = 1.0 / (4.0 * PI * PI);

pub fn plancherel_constant(pair: PairId) -> f64 {
    match pair {
        PairId::FlatR1 => PLANCHEREL_FLAT_R1,
        PairId::E2 => PLANCHEREL_E2,
        PairId::U1C => PLANCHEREL_U1C,
        PairId::Heis1 => PLANCHEREL_HEIS1,
    }
}

/// Discretisation of the spectrum for inversion and Plancherel checks.
#[derive(Debug, Clone, PartialEq)]
pub struct PlancherelSpec {
    /// λ nodes; must be ≥ 0 except on heis1.
    pub lambda: ParamRange,
    /// Inclusive type range (u1_c).
    pub m: (i64, i64),
    /// Rays k = kmin..=kmax (heis1).
    pub kmin: u32,
    pub kmax: u32,
}

impl PlancherelSpec {
    pub fn new(lambda: ParamRange) -> Self {
        Self { lambda, m: (0, 0), kmin: 0, kmax: 0 }
    }

    pub fn types(mut self, lo: i64, hi: i64) -> Self {
        self.m = (lo, hi);
        self
    }

    pub fn rays(mut self, kmax: u32) -> Self {
        self.kmax = kmax;
        self
    }

    /// The next `kmax + 1` rays, used to estimate the fan truncation tail.
    pub fn tail(&self) -> Self {
        Self { kmin: self.kmax + 1, kmax: 2 * self.kmax + 1, ..self.clone() }
    }
}

/// Spectrum points with their Plancherel weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    pub points: Vec<SpectrumPoint>,
    pub weights: Vec<f64>,
}

impl SpectrumGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// λ nodes and weights; on heis1 a Gauss–Legendre range straddling 0 is
/// split there, since the density |λ| has a kink at 0.
fn lambda_rule(pair: &PairDescriptor, r: &ParamRange) -> Result<(Vec<f64>, Vec<f64>), Error> {
    if pair.id != PairId::Heis1 && r.min < 0.0 {
        return Err(Error::Domain(format!("lambda range must be >= 0 on {}", pair.id)));
    }
    if pair.id == PairId::Heis1 && r.rule == RangeRule::GaussLegendre && r.min < 0.0 && r.max > 0.0 {
        let left_n = ((r.n as f64) * (-r.min) / (r.max - r.min)).round().max(1.0) as usize;
        let right_n = r.n.saturating_sub(left_n).max(1);
        let (mut x, mut w) = ParamRange { min: r.min, max: 0.0, n: left_n, rule: r.rule }.nodes_and_weights()?;
        let (x2, w2) = ParamRange { min: 0.0, max: r.max, n: right_n, rule: r.rule }.nodes_and_weights()?;
        x.extend(x2);
        w.extend(w2);
        return Ok((x, w));
    }
    r.nodes_and_weights()
}

/// Spectrum grid carrying Plancherel weights.
pub fn plancherel_grid(pair: &PairDescriptor, spec: &PlancherelSpec) -> Result<SpectrumGrid, Error> {
    let (lam, wl) = lambda_rule(pair, &spec.lambda)?;
    let c = plancherel_constant(pair.id);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut push = |params: SpectrumParams, w: f64| -> Result<(), Error> {
        points.push(eigenvalue_map(pair, params)?);
        weights.push(w);
        Ok(())
    };
    match pair.id {
        PairId::FlatR1 => {
            for (&lambda, &w) in lam.iter().zip(&wl) {
                push(SpectrumParams::Radial { lambda }, c * w)?;
            }
        }
        PairId::E2 => {
            for (&lambda, &w) in lam.iter().zip(&wl) {
                push(SpectrumParams::Radial { lambda }, c * w * lambda)?;
            }
        }
        PairId::U1C => {
            for m in spec.m.0..=spec.m.1 {
                for (&lambda, &w) in lam.iter().zip(&wl) {
                    push(SpectrumParams::Typed { m, lambda }, c * w * lambda)?;
                }
            }
        }
        PairId::Heis1 => {
            for k in spec.kmin..=spec.kmax {
                for (&lambda, &w) in lam.iter().zip(&wl) {
                    push(SpectrumParams::Fan { lambda, k }, c * w * lambda.abs())?;
                }
            }
        }
    }
    Ok(SpectrumGrid { points, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_nonnegative_and_split_at_zero() {
        let h = PairId::Heis1.descriptor();
        let g = plancherel_grid(&h, &PlancherelSpec::new(ParamRange::uniform(-8.0, 8.0, 11).with_rule(RangeRule::GaussLegendre)).rays(2))
            .unwrap();
        assert_eq!(g.len(), 33);
        assert!(g.weights.iter().all(|w| *w >= 0.0));
        // Gauss–Legendre on each half: no node at 0, symmetric sums.
        let s: f64 = g.weights[..11].iter().sum();
        assert!((s - PLANCHEREL_HEIS1 * 64.0).abs() < 1e-12);

        let e2 = PairId::E2.descriptor();
        assert!(plancherel_grid(&e2, &PlancherelSpec::new(ParamRange::uniform(-1.0, 1.0, 3))).is_err());
    }
}
