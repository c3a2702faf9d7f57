//! Group law of G = K⋉H in the charts used throughout.
//!
//! * flat_r1, e2: vector addition on H (K trivial resp. not carried)
//! * u1_c: (θ, z)(θ′, z′) = (θ+θ′, z + e^{iθ} z′)
//! * heis1: (z, t)(z′, t′) = (z+z′, t+t′+½ Im(z z̄′))

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::{PairDescriptor, PairId};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint {
    /// K-coordinates, one angle per torus factor, reduced to [0, 2π).
    pub theta: Vec<f64>,
    /// H-coordinates: x | (x, y) | (x, y, t).
    pub z: Vec<f64>,
}

pub(crate) fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl GroupPoint {
    pub fn new(pair: &PairDescriptor, theta: Vec<f64>, z: Vec<f64>) -> Result<Self, Error> {
        if theta.len() != pair.k_dim() || z.len() != pair.h_dim() {
            return Err(Error::Domain(format!(
                "group point for {} needs {} angle(s) and {} H-coordinate(s), got {} and {}",
                pair.id,
                pair.k_dim(),
                pair.h_dim(),
                theta.len(),
                z.len()
            )));
        }
        Ok(Self { theta: theta.into_iter().map(wrap_angle).collect(), z })
    }

    pub fn identity(pair: &PairDescriptor) -> Self {
        Self { theta: vec![0.0; pair.k_dim()], z: vec![0.0; pair.h_dim()] }
    }

    /// Point of H (θ = 0).
    pub fn in_h(pair: &PairDescriptor, z: Vec<f64>) -> Result<Self, Error> {
        Self::new(pair, vec![0.0; pair.k_dim()], z)
    }

    /// |z| of the planar part (first two H-coordinates, or |x| on ℝ).
    pub fn planar_norm(&self) -> f64 {
        match self.z.len() {
            1 => self.z[0].abs(),
            _ => self.z[0].hypot(self.z[1]),
        }
    }

    pub fn central(&self) -> f64 {
        self.z.get(2).copied().unwrap_or(0.0)
    }
}

/// Product `a · b`.
pub fn multiply(pair: &PairDescriptor, a: &GroupPoint, b: &GroupPoint) -> GroupPoint {
    match pair.id {
        PairId::FlatR1 | PairId::E2 => GroupPoint {
            theta: Vec::new(),
            z: a.z.iter().zip(&b.z).map(|(x, y)| x + y).collect(),
        },
        PairId::U1C => {
            let (s, c) = a.theta[0].sin_cos();
            let bx = c * b.z[0] - s * b.z[1];
            let by = s * b.z[0] + c * b.z[1];
            GroupPoint { theta: vec![wrap_angle(a.theta[0] + b.theta[0])], z: vec![a.z[0] + bx, a.z[1] + by] }
        }
        PairId::Heis1 => {
            // Im(z z̄′) = y x′ − x y′
            let twist = 0.5 * (a.z[1] * b.z[0] - a.z[0] * b.z[1]);
            GroupPoint { theta: Vec::new(), z: vec![a.z[0] + b.z[0], a.z[1] + b.z[1], a.z[2] + b.z[2] + twist] }
        }
    }
}

/// Inverse `a⁻¹`.
pub fn inverse(pair: &PairDescriptor, a: &GroupPoint) -> GroupPoint {
    match pair.id {
        PairId::FlatR1 | PairId::E2 | PairId::Heis1 => {
            GroupPoint { theta: Vec::new(), z: a.z.iter().map(|v| -v).collect() }
        }
        PairId::U1C => {
            let (s, c) = a.theta[0].sin_cos();
            // −e^{−iθ} z
            let x = -(c * a.z[0] + s * a.z[1]);
            let y = -(-s * a.z[0] + c * a.z[1]);
            GroupPoint { theta: vec![wrap_angle(-a.theta[0])], z: vec![x, y] }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &GroupPoint, b: &GroupPoint, tol: f64) -> bool {
        let ang = a.theta.iter().zip(&b.theta).all(|(x, y)| {
            let d = (x - y).rem_euclid(TAU);
            d.min(TAU - d) <= tol
        });
        ang && a.z.iter().zip(&b.z).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn inverse_and_identity() {
        for id in PairId::ALL {
            let p = id.descriptor();
            let th = vec![1.3; p.k_dim()];
            let z: Vec<f64> = (0..p.h_dim()).map(|i| 0.7 - 0.4 * i as f64).collect();
            let a = GroupPoint::new(&p, th, z).unwrap();
            let e = GroupPoint::identity(&p);
            assert!(close(&multiply(&p, &a, &inverse(&p, &a)), &e, 1e-14));
            assert!(close(&multiply(&p, &inverse(&p, &a), &a), &e, 1e-14));
            assert!(close(&multiply(&p, &a, &e), &a, 0.0));
        }
    }

    #[test]
    fn heisenberg_rational_points_associate_exactly() {
        let p = PairId::Heis1.descriptor();
        let a = GroupPoint::new(&p, vec![], vec![0.5, -1.25, 2.0]).unwrap();
        let b = GroupPoint::new(&p, vec![], vec![-0.75, 0.25, 1.5]).unwrap();
        let c = GroupPoint::new(&p, vec![], vec![1.0, 2.0, -0.5]).unwrap();
        let l = multiply(&p, &multiply(&p, &a, &b), &c);
        let r = multiply(&p, &a, &multiply(&p, &b, &c));
        assert_eq!(l, r);
    }

    #[test]
    fn wrong_dimension_rejected() {
        let p = PairId::Heis1.descriptor();
        assert!(GroupPoint::new(&p, vec![], vec![1.0, 2.0]).is_err());
    }
}
