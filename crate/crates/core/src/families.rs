//! Built-in test functions, grids and random samples.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::pairs::{wrap_angle, Axis, GroupPoint, PairDescriptor, PairId, SampledFunction, Symmetry};
use crate::Error;

/// Cartesian lattice used by the convolution checks: 2·half+1 nodes per
/// planar axis with the origin on the lattice.
pub fn lattice_axes(pair: PairId, half: usize, spacing: f64) -> Vec<Axis> {
    match pair {
        PairId::FlatR1 => vec![Axis::centered("x", half, spacing)],
        PairId::E2 => vec![Axis::centered("x", half, spacing), Axis::centered("y", half, spacing)],
        PairId::U1C => vec![Axis::circle(8), Axis::centered("x", half, spacing), Axis::centered("y", half, spacing)],
        PairId::Heis1 => {
            vec![Axis::centered("x", half, spacing), Axis::centered("y", half, spacing), Axis::centered("t", half, spacing)]
        }
    }
}

/// Quadrature grid for transforms: Gauss–Legendre in r (and t), radius `r`.
pub fn quadrature_axes(pair: PairId, r: f64, n: usize) -> Vec<Axis> {
    match pair {
        PairId::FlatR1 => vec![Axis::gauss("x", -r, r, 2 * n)],
        PairId::E2 => vec![Axis::gauss("r", 0.0, r, n)],
        PairId::U1C => vec![Axis::circle(16), Axis::gauss("r", 0.0, r, n)],
        PairId::Heis1 => vec![Axis::gauss("r", 0.0, r, n), Axis::gauss("t", -r, r, 2 * n)],
    }
}

/// u1_c grid for type decompositions up to |m| = max_type: 4·max_type + 8
/// nodes on the circle and Gauss–Legendre in r.
pub fn ktype_axes(max_type: u32, r: f64, nr: usize) -> Vec<Axis> {
    vec![Axis::circle(4 * max_type as usize + 8), Axis::gauss("r", 0.0, r, nr)]
}

/// e^{−a(|z|² + t²)/2}, bi-K-invariant on every pair.
pub fn gaussian(pair: PairId, axes: Vec<Axis>, a: f64) -> Result<SampledFunction, Error> {
    SampledFunction::from_fn(pair, Symmetry::BiKInvariant, axes, move |x| {
        let r2 = x.planar_norm().powi(2) + x.central().powi(2);
        Complex64::new((-0.5 * a * r2).exp(), 0.0)
    })
}

/// Random radial Gaussian mixture Σ cᵢ e^{−bᵢ(|z|² + t²)} with three terms,
/// cᵢ ∈ [−1, 1] and bᵢ ∈ [0.4, 1.5].
pub fn random_radial(pair: PairId, axes: Vec<Axis>, seed: u64) -> Result<SampledFunction, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(f64, f64)> = (0..3).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(0.4..1.5))).collect();
    SampledFunction::from_fn(pair, Symmetry::BiKInvariant, axes, move |x| {
        let r2 = x.planar_norm().powi(2) + x.central().powi(2);
        Complex64::new(terms.iter().map(|(c, b)| c * (-b * r2).exp()).sum(), 0.0)
    })
}

/// `n` random points with planar coordinates in [−radius, radius]², the
/// central coordinate in the same range and uniform angles.
pub fn random_points(pair: &PairDescriptor, n: usize, radius: f64, seed: u64) -> Vec<GroupPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| GroupPoint {
            theta: (0..pair.k_dim()).map(|_| rng.random_range(0.0..2.0 * PI)).collect(),
            z: (0..pair.h_dim()).map(|_| rng.random_range(-radius..radius)).collect(),
        })
        .collect()
}

/// Signed angle in (−π, π].
fn centred(theta: f64) -> f64 {
    let t = wrap_angle(theta);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// θ-profiles of K-central functions on u1_c.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaProfile {
    /// Wrapped Gaussian Σₙ e^{−(θ−2πn)²/2s²}: type coefficients ∝ e^{−s²m²/2}.
    Gaussian { s: f64 },
    /// |θ| on (−π, π]: type coefficients ∝ m⁻² on odd m.
    Abs,
    /// Σ c_m e^{imθ}.
    Types(Vec<(i64, Complex64)>),
}

impl ThetaProfile {
    pub fn eval(&self, theta: f64) -> Complex64 {
        match self {
            ThetaProfile::Gaussian { s } => {
                let t = centred(theta);
                let v: f64 = (-3..=3).map(|n| (-(t - 2.0 * PI * n as f64).powi(2) / (2.0 * s * s)).exp()).sum();
                Complex64::new(v, 0.0)
            }
            ThetaProfile::Abs => Complex64::new(centred(theta).abs(), 0.0),
            ThetaProfile::Types(c) => c.iter().map(|(m, a)| a * Complex64::from_polar(1.0, *m as f64 * theta)).sum(),
        }
    }
}

/// K-central function profile(θ)·e^{−a|z|²/2} on u1_c.
pub fn k_central(profile: ThetaProfile, axes: Vec<Axis>, a: f64) -> Result<SampledFunction, Error> {
    SampledFunction::from_fn(PairId::U1C, Symmetry::KCentral, axes, move |x| {
        profile.eval(x.theta[0]) * (-0.5 * a * x.planar_norm().powi(2)).exp()
    })
}

/// Pure type-m function e^{imθ} e^{−a|z|²/2} on u1_c.
pub fn pure_type(m: i64, axes: Vec<Axis>, a: f64) -> Result<SampledFunction, Error> {
    let f = k_central(ThetaProfile::Types(vec![(m, Complex64::new(1.0, 0.0))]), axes, a)?;
    Ok(f.with_symmetry(if m == 0 { Symmetry::BiKInvariant } else { Symmetry::KType(vec![m]) }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_draws_are_reproducible() {
        let p = PairId::Heis1.descriptor();
        assert_eq!(random_points(&p, 5, 2.0, 7), random_points(&p, 5, 2.0, 7));
        assert_ne!(random_points(&p, 5, 2.0, 7), random_points(&p, 5, 2.0, 8));
        let a = random_radial(PairId::E2, lattice_axes(PairId::E2, 4, 0.5), 3).unwrap();
        let b = random_radial(PairId::E2, lattice_axes(PairId::E2, 4, 0.5), 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn profiles() {
        let g = ThetaProfile::Gaussian { s: 1.0 };
        assert!((g.eval(0.0).re - 1.0).abs() < 1e-8);
        assert!((g.eval(0.3) - g.eval(2.0 * PI - 0.3)).norm() < 1e-14);
        assert!((ThetaProfile::Abs.eval(1.5 * PI).re - 0.5 * PI).abs() < 1e-14);
    }
}
