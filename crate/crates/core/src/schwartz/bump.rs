//! Lattice interpolation h(t) = Σ_λ a(λ) η(t − λ) by a compactly supported
//! bump η with η(0) = 1.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::euclid::{euclid_seminorm, seminorm_table, EuclidAxis, EuclidFunction};
use crate::{Error, Report};

pub const DEFAULT_BUMP_RADIUS: f64 = 1.0 / 3.0;
/// Default grid subdivisions per lattice unit.
pub const DEFAULT_SUBDIVISION: u32 = 256;

/// Values on ℤ^r; absent points are zero.
pub type LatticeFunction = BTreeMap<Vec<i64>, Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpProfile {
    /// exp(1 − 1/(1 − |t/ρ|²)) inside the ball of radius ρ.
    ExpInverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    pub radius: f64,
    #[serde(default = "default_profile")]
    pub profile: BumpProfile,
}

fn default_profile() -> BumpProfile {
    BumpProfile::ExpInverse
}

impl Default for BumpSpec {
    fn default() -> Self {
        Self { radius: DEFAULT_BUMP_RADIUS, profile: BumpProfile::ExpInverse }
    }
}

impl BumpSpec {
    pub fn new(radius: f64) -> Result<Self, Error> {
        let s = Self { radius, profile: BumpProfile::ExpInverse };
        s.validate()?;
        Ok(s)
    }

    /// Translates by distinct lattice points must have disjoint supports.
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.radius > 0.0 && self.radius < 0.5) {
            return Err(Error::InvalidSpec(format!("bump radius must lie in (0, 1/2), got {}", self.radius)));
        }
        Ok(())
    }

    pub fn eta(&self, t: &[f64]) -> f64 {
        let s2: f64 = t.iter().map(|x| (x / self.radius).powi(2)).sum();
        match self.profile {
            BumpProfile::ExpInverse if s2 < 1.0 => (1.0 - 1.0 / (1.0 - s2)).exp(),
            BumpProfile::ExpInverse => 0.0,
        }
    }
}

/// Rank and bounding box of a lattice function.
fn support_box(a: &LatticeFunction) -> Result<(usize, Vec<i64>, Vec<i64>), Error> {
    let first = a.keys().next().ok_or_else(|| Error::Empty("lattice function has no points".into()))?;
    let r = first.len();
    if r == 0 || a.keys().any(|k| k.len() != r) {
        return Err(Error::Domain("lattice points must share a positive rank".into()));
    }
    let lo = (0..r).map(|d| a.keys().map(|k| k[d]).min().unwrap()).collect();
    let hi = (0..r).map(|d| a.keys().map(|k| k[d]).max().unwrap()).collect();
    Ok((r, lo, hi))
}

/// h on the box [lo − 1, hi + 1] with `sub` nodes per unit (a power of two,
/// so lattice points are nodes and h(λ) = a(λ) there bit for bit).
pub fn bump_interpolate(a: &LatticeFunction, spec: &BumpSpec, sub: u32) -> Result<EuclidFunction, Error> {
    spec.validate()?;
    let (_, lo, hi) = support_box(a)?;
    let axes = lo.iter().zip(&hi).map(|(&l, &h)| EuclidAxis::lattice(l - 1, h + 1, sub)).collect::<Result<Vec<_>, _>>()?;
    EuclidFunction::from_fn(axes, |t| {
        let near: Vec<i64> = t.iter().map(|x| x.round() as i64).collect();
        match a.get(&near) {
            Some(v) => {
                let off: Vec<f64> = t.iter().zip(&near).map(|(x, l)| x - *l as f64).collect();
                v * spec.eta(&off)
            }
            None => Complex64::new(0.0, 0.0),
        }
    })
}

/// η sampled on [−1, 1]^r.
pub fn bump_sample(spec: &BumpSpec, rank: usize, sub: u32) -> Result<EuclidFunction, Error> {
    spec.validate()?;
    let axes = vec![EuclidAxis::lattice(-1, 1, sub)?; rank];
    EuclidFunction::from_fn(axes, |t| Complex64::new(spec.eta(t), 0.0))
}

/// A_N = c·(1+ρ)^N ‖η‖_(N), with c = 1 the number of bump supports that can
/// meet at a point. On supp η(· − λ), 1 + |t| ≤ (1 + ρ)(1 + |λ|).
pub fn interpolation_constant(spec: &BumpSpec, rank: usize, n: u32, sub: u32) -> Result<f64, Error> {
    let overlap = 1.0;
    Ok(overlap * (1.0 + spec.radius).powi(n as i32) * euclid_seminorm(&bump_sample(spec, rank, sub)?, n)?)
}

/// sup_λ (1 + |λ|)^n |a(λ)|.
pub fn lattice_weighted_sup(a: &LatticeFunction, n: u32) -> f64 {
    a.iter()
        .map(|(k, v)| (1.0 + k.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt()).powi(n as i32) * v.norm())
        .fold(0.0, f64::max)
}

/// Exact agreement at lattice points and ‖h‖_(N) ≤ A_N sup (1+|λ|)^N |a(λ)|
/// for N = 0..=n_max.
pub fn verify_interpolation(a: &LatticeFunction, spec: &BumpSpec, n_max: u32, sub: u32) -> Result<Report, Error> {
    let h = bump_interpolate(a, spec, sub)?;
    let (rank, _, _) = support_box(a)?;
    let mismatches = a.iter().filter(|(k, v)| h.at(&k.iter().map(|&x| x as f64).collect::<Vec<_>>()) != Some(**v)).count();
    let mut parts = vec![Report::decided("lattice_agreement", "euclid", 0.0, mismatches as f64, mismatches == 0)];
    let norms = seminorm_table(&h, n_max, n_max)?;
    for n in 0..=n_max {
        let bound = interpolation_constant(spec, rank, n, sub)? * lattice_weighted_sup(a, n);
        let ratio = if bound > 0.0 { norms[n as usize] / bound } else { 0.0 };
        parts.push(
            Report::decided("interpolation_bound", "euclid", 1.0, ratio, norms[n as usize] <= bound)
                .with("n", n)
                .with("seminorm", norms[n as usize])
                .with("bound", bound),
        );
    }
    Ok(Report::all("interpolation", "euclid", 1.0, parts).with("points", a.len()).with("subdivision", sub))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta() -> LatticeFunction {
        [(vec![0], Complex64::new(1.0, 0.0))].into_iter().collect()
    }

    #[test]
    fn spec_validation() {
        assert!(BumpSpec::new(0.5).is_err());
        assert!(BumpSpec::new(0.0).is_err());
        assert_eq!(BumpSpec::default().eta(&[0.0]), 1.0);
        assert_eq!(BumpSpec::default().eta(&[0.34]), 0.0);
    }

    #[test]
    fn delta_gives_the_bump() {
        let s = BumpSpec::default();
        let h = bump_interpolate(&delta(), &s, 64).unwrap();
        assert_eq!(h.at(&[0.0]), Some(Complex64::new(1.0, 0.0)));
        assert_eq!(h.at(&[1.0]), Some(Complex64::new(0.0, 0.0)));
        assert_eq!(h.at(&[-1.0]), Some(Complex64::new(0.0, 0.0)));
        for i in 0..h.len() {
            assert_eq!(h.values[i].re, s.eta(&h.point(i)));
        }
    }

    #[test]
    fn gaussian_lattice_values() {
        let a: LatticeFunction = (-6..=6).map(|m: i64| (vec![m], Complex64::new((-(m * m) as f64).exp(), 0.0))).collect();
        let h = bump_interpolate(&a, &BumpSpec::default(), 64).unwrap();
        for (k, v) in &a {
            assert_eq!(h.at(&[k[0] as f64]), Some(*v));
        }
        assert_eq!(h.sup_norm(), 1.0);
        let r = verify_interpolation(&a, &BumpSpec::default(), 3, DEFAULT_SUBDIVISION).unwrap();
        assert!(r.pass, "{}", r.to_json());
    }

    #[test]
    fn rank_two() {
        let a: LatticeFunction = [(vec![0, 1], Complex64::new(2.0, 0.0)), (vec![-1, 0], Complex64::new(0.0, 1.0))].into_iter().collect();
        let h = bump_interpolate(&a, &BumpSpec::default(), 32).unwrap();
        assert_eq!(h.at(&[0.0, 1.0]), Some(Complex64::new(2.0, 0.0)));
        assert_eq!(h.at(&[-1.0, 0.0]), Some(Complex64::new(0.0, 1.0)));
        assert_eq!(h.at(&[0.0, 0.0]), Some(Complex64::new(0.0, 0.0)));
    }
}
