use num_complex::Complex64;

use super::{validate_params, GroupPoint, PairDescriptor, SpectrumParams, SpectrumPoint};
use crate::specfun::{j0, LaguerreSeq};
use crate::Error;

/// e^{−s/2} L_k(s).
#[inline]
pub(crate) fn laguerre_function(k: u32, s: f64) -> f64 {
    let l = LaguerreSeq::new(0.0, s).nth(k as usize).unwrap_or(0.0);
    l * (-0.5 * s).exp()
}

/// Value of the bounded spherical function `sigma` at `x`.
///
/// * flat_r1: e^{iλx}
/// * e2: J₀(λ‖v‖)
/// * u1_c: e^{imθ} J₀(λ|z|)
/// * heis1: e^{iλt} e^{−|λ||z|²/4} L_k(|λ||z|²/2), and J₀(η|z|) on the limit ray
pub fn spherical(pair: &PairDescriptor, sigma: &SpectrumPoint, x: &GroupPoint) -> Result<Complex64, Error> {
    validate_params(pair, &sigma.params)?;
    if x.z.len() != pair.h_dim() || x.theta.len() != pair.k_dim() {
        return Err(Error::Domain(format!("group point has wrong shape for {}", pair.id)));
    }
    Ok(spherical_params(&sigma.params, x))
}

/// Unchecked evaluation by parameters; `x` must have the pair's shape.
#[inline]
pub(crate) fn spherical_params(params: &SpectrumParams, x: &GroupPoint) -> Complex64 {
    match *params {
        SpectrumParams::Radial { lambda } => {
            if x.z.len() == 1 {
                Complex64::from_polar(1.0, lambda * x.z[0])
            } else {
                Complex64::new(j0(lambda * x.planar_norm()), 0.0)
            }
        }
        SpectrumParams::Typed { m, lambda } => {
            Complex64::from_polar(j0(lambda * x.planar_norm()), m as f64 * x.theta[0])
        }
        SpectrumParams::Fan { lambda, k } => {
            let r2 = x.z[0] * x.z[0] + x.z[1] * x.z[1];
            let s = 0.5 * lambda.abs() * r2;
            Complex64::from_polar(laguerre_function(k, s), lambda * x.z[2])
        }
        SpectrumParams::Ray { eta } => Complex64::new(j0(eta * x.planar_norm()), 0.0),
    }
}
