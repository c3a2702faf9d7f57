//! Parametrisation of bounded spherical functions and the eigenvalue map ι_D.

use serde::{Deserialize, Serialize};
use std::str::FromStr;

use super::{PairDescriptor, PairId};
use crate::specfun::{gauss_legendre, LAGUERRE_MAX_DEGREE};
use crate::Error;

/// Tolerance for recognising the ray index k from an embedded point.
const FAN_INDEX_TOL: f64 = 1e-6;

/// Parameters of a bounded spherical function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpectrumParams {
    /// flat_r1 and e2: frequency λ ≥ 0.
    Radial { lambda: f64 },
    /// u1_c: K-type m and radial frequency λ ≥ 0.
    Typed { m: i64, lambda: f64 },
    /// heis1 fan: central frequency λ and Laguerre index k.
    Fan { lambda: f64, k: u32 },
    /// heis1 limit ray λ = 0: J₀(η|z|).
    Ray { eta: f64 },
}

/// A point of the embedded spectrum together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub xi: Vec<f64>,
    pub params: SpectrumParams,
}

impl SpectrumPoint {
    /// The K-type index m (u1_c); 0 for pairs without K-coordinates.
    pub fn ktype(&self) -> i64 {
        match self.params {
            SpectrumParams::Typed { m, .. } => m,
            _ => 0,
        }
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<(), Error> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite and >= 0, got {v}")))
    }
}

/// Checks that `params` parametrise a bounded spherical function of `pair`.
pub fn validate_params(pair: &PairDescriptor, params: &SpectrumParams) -> Result<(), Error> {
    match (pair.id, params) {
        (PairId::FlatR1 | PairId::E2, SpectrumParams::Radial { lambda }) => check_nonneg("lambda", *lambda),
        (PairId::U1C, SpectrumParams::Typed { lambda, .. }) => check_nonneg("lambda", *lambda),
        (PairId::Heis1, SpectrumParams::Fan { lambda, k }) => {
            if !lambda.is_finite() {
                return Err(Error::Domain(format!("lambda must be finite, got {lambda}")));
            }
            if *k > LAGUERRE_MAX_DEGREE {
                return Err(Error::Domain(format!("Laguerre index {k} exceeds {LAGUERRE_MAX_DEGREE}")));
            }
            Ok(())
        }
        (PairId::Heis1, SpectrumParams::Ray { eta }) => check_nonneg("eta", *eta),
        (id, p) => Err(Error::Domain(format!("parameters {p:?} do not belong to pair {id}"))),
    }
}

/// ι_D: eigenvalues of the chosen generators on the spherical function.
pub fn eigenvalue_map(pair: &PairDescriptor, params: SpectrumParams) -> Result<SpectrumPoint, Error> {
    validate_params(pair, &params)?;
    let xi = match params {
        SpectrumParams::Radial { lambda } => vec![lambda * lambda],
        SpectrumParams::Typed { m, lambda } => vec![m as f64, lambda * lambda],
        SpectrumParams::Fan { lambda, k } => vec![lambda.abs() * (2 * k + 1) as f64, lambda],
        SpectrumParams::Ray { eta } => vec![eta * eta, 0.0],
    };
    Ok(SpectrumPoint { xi, params })
}

/// Inverse of [`eigenvalue_map`] on its image.
pub fn params_from_xi(pair: &PairDescriptor, xi: &[f64]) -> Result<SpectrumPoint, Error> {
    if xi.len() != pair.ell {
        return Err(Error::Domain(format!("pair {} embeds in R^{}, got {} coordinates", pair.id, pair.ell, xi.len())));
    }
    if xi.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite spectrum coordinate".into()));
    }
    let params = match pair.id {
        PairId::FlatR1 | PairId::E2 => {
            check_nonneg("xi_1", xi[0])?;
            SpectrumParams::Radial { lambda: xi[0].sqrt() }
        }
        PairId::U1C => {
            let m = xi[0].round();
            if (xi[0] - m).abs() > 1e-9 {
                return Err(Error::Domain(format!("xi_1 = {} is not an integer K-type", xi[0])));
            }
            check_nonneg("xi_2", xi[1])?;
            SpectrumParams::Typed { m: m as i64, lambda: xi[1].sqrt() }
        }
        PairId::Heis1 => {
            if xi[1] == 0.0 {
                check_nonneg("xi_1", xi[0])?;
                SpectrumParams::Ray { eta: xi[0].sqrt() }
            } else {
                let odd = xi[0] / xi[1].abs();
                let k = (odd - 1.0) / 2.0;
                let kr = k.round();
                if kr < 0.0 || (k - kr).abs() > FAN_INDEX_TOL {
                    return Err(Error::Domain(format!("({}, {}) is not on the Heisenberg fan", xi[0], xi[1])));
                }
                SpectrumParams::Fan { lambda: xi[1], k: kr as u32 }
            }
        }
    };
    eigenvalue_map(pair, params)
}

/// Discretisation rule attached to a parameter range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeRule {
    /// Inclusive linspace with trapezoid weights.
    #[default]
    Uniform,
    /// Cell midpoints with equal weights.
    Midpoint,
    /// Gauss–Legendre nodes and weights.
    GaussLegendre,
}

/// `min:max:n[:rule]` parameter range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub min: f64,
    pub max: f64,
    pub n: usize,
    #[serde(default)]
    pub rule: RangeRule,
}

impl ParamRange {
    pub fn uniform(min: f64, max: f64, n: usize) -> Self {
        Self { min, max, n, rule: RangeRule::Uniform }
    }

    pub fn with_rule(mut self, rule: RangeRule) -> Self {
        self.rule = rule;
        self
    }

    fn validate(&self) -> Result<(), Error> {
        if !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(Error::Domain(format!("invalid range {}:{}", self.min, self.max)));
        }
        if self.n > 1 && self.max == self.min {
            return Err(Error::Domain("degenerate range with n > 1".into()));
        }
        Ok(())
    }

    /// Nodes of the range.
    pub fn values(&self) -> Result<Vec<f64>, Error> {
        Ok(self.nodes_and_weights()?.0)
    }

    /// Nodes and quadrature weights of the range.
    pub fn nodes_and_weights(&self) -> Result<(Vec<f64>, Vec<f64>), Error> {
        self.validate()?;
        let n = self.n;
        if n == 0 {
            return Ok((Vec::new(), Vec::new()));
        }
        let len = self.max - self.min;
        match self.rule {
            RangeRule::Uniform => {
                if n == 1 {
                    return Ok((vec![self.min], vec![len]));
                }
                let h = len / (n - 1) as f64;
                let nodes = (0..n).map(|i| if i == n - 1 { self.max } else { self.min + i as f64 * h }).collect();
                let weights = (0..n).map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h }).collect();
                Ok((nodes, weights))
            }
            RangeRule::Midpoint => {
                let h = len / n as f64;
                Ok(((0..n).map(|i| self.min + (i as f64 + 0.5) * h).collect(), vec![h; n]))
            }
            RangeRule::GaussLegendre => {
                let rule = gauss_legendre(n, self.min, self.max)?;
                Ok((rule.nodes().to_vec(), rule.weights().to_vec()))
            }
        }
    }
}

impl FromStr for ParamRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Usage(format!("range '{s}' is not min:max:n[:uniform|mid|gl]"));
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let rule = match parts.get(3).map(|r| r.trim()) {
            None | Some("uniform") => RangeRule::Uniform,
            Some("mid") | Some("midpoint") => RangeRule::Midpoint,
            Some("gl") | Some("gauss") => RangeRule::GaussLegendre,
            Some(_) => return Err(bad()),
        };
        let r = ParamRange { min, max, n, rule };
        r.validate().map_err(|_| bad())?;
        Ok(r)
    }
}

/// Per-parameter bounds for [`spectrum_grid`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpectrumBounds {
    pub lambda: Option<ParamRange>,
    /// Inclusive K-type range (u1_c); defaults to {0}.
    pub m: Option<(i64, i64)>,
    /// Largest Laguerre index (heis1); defaults to 0.
    pub kmax: Option<u32>,
    /// Limit-ray parameters (heis1).
    pub eta: Option<ParamRange>,
}

/// Deterministic enumeration of spectrum points.
///
/// u1_c is enumerated type-major; heis1 ray-by-ray (k = 0..=kmax), followed by
/// the limit ray when `eta` is given.
pub fn spectrum_grid(pair: &PairDescriptor, bounds: &SpectrumBounds) -> Result<Vec<SpectrumPoint>, Error> {
    let lambdas = match &bounds.lambda {
        Some(r) => r.values()?,
        None => Vec::new(),
    };
    let mut out = Vec::new();
    match pair.id {
        PairId::FlatR1 | PairId::E2 => {
            for &lambda in &lambdas {
                out.push(eigenvalue_map(pair, SpectrumParams::Radial { lambda })?);
            }
        }
        PairId::U1C => {
            let (lo, hi) = bounds.m.unwrap_or((0, 0));
            for m in lo..=hi {
                for &lambda in &lambdas {
                    out.push(eigenvalue_map(pair, SpectrumParams::Typed { m, lambda })?);
                }
            }
        }
        PairId::Heis1 => {
            if !lambdas.is_empty() {
                for k in 0..=bounds.kmax.unwrap_or(0) {
                    for &lambda in &lambdas {
                        out.push(eigenvalue_map(pair, SpectrumParams::Fan { lambda, k })?);
                    }
                }
            }
            if let Some(eta) = &bounds.eta {
                for eta in eta.values()? {
                    out.push(eigenvalue_map(pair, SpectrumParams::Ray { eta })?);
                }
            }
        }
    }
    Ok(out)
}
