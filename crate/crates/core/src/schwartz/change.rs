//! Polynomial changes of generating system between embedded spectra.

use serde::{Deserialize, Serialize};

use super::decay::fit_line;
use crate::pairs::{PairDescriptor, PairId, SpectrumPoint};
use crate::{Error, Report};

/// Relative tolerance of the round trips Q∘P and P∘Q.
pub const ROUND_TRIP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coef: f64,
    pub powers: Vec<u32>,
}

/// ℝ^n → ℝ^k, one list of monomials per output coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyMap {
    pub inputs: usize,
    pub components: Vec<Vec<Monomial>>,
}

impl PolyMap {
    pub fn new(inputs: usize, components: Vec<Vec<Monomial>>) -> Result<Self, Error> {
        for m in components.iter().flatten() {
            if m.powers.len() != inputs {
                return Err(Error::Domain(format!("monomial has {} exponents for {inputs} inputs", m.powers.len())));
            }
        }
        Ok(Self { inputs, components })
    }

    pub fn identity(n: usize) -> Self {
        let comps = (0..n).map(|i| vec![Monomial { coef: 1.0, powers: (0..n).map(|j| (i == j) as u32).collect() }]).collect();
        Self { inputs: n, components: comps }
    }

    /// The coordinate projection onto the first `k` of `n` inputs.
    pub fn projection(n: usize, k: usize) -> Self {
        let mut p = Self::identity(n);
        p.components.truncate(k);
        p
    }

    pub fn outputs(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| c.iter().map(|m| m.coef * m.powers.iter().zip(x).map(|(&p, &x)| x.powi(p as i32)).product::<f64>()).sum())
            .collect()
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn rel_error(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&d) / norm(b).max(1.0)
}

/// The system D′ = D ∪ {D_a²}: P(ξ) = (ξ, ξ_a²) and Q drops the last
/// coordinate. D_a is the Laplacian on flat_r1 and e2, the sublaplacian on
/// heis1 and the radial Laplacian on u1_c.
pub fn augmented_system(pair: &PairDescriptor) -> (PolyMap, PolyMap) {
    let n = pair.ell;
    let a = match pair.id {
        PairId::U1C => 1,
        _ => 0,
    };
    let mut p = PolyMap::identity(n);
    p.components.push(vec![Monomial { coef: 1.0, powers: (0..n).map(|j| if j == a { 2 } else { 0 }).collect() }]);
    (p, PolyMap::projection(n + 1, n))
}

/// Integer exponent m ≥ 1 nearest to the fitted growth slope s (or to 1/s
/// when P contracts). Local slopes of ln(1+|ξ|^m) against ln(1+|ξ|)
/// overshoot m at moderate |ξ|, so a ceiling would over-count.
pub fn integer_exponent(s: f64) -> u32 {
    (s.max(1.0 / s).round() as u32).max(1)
}

/// Checks Q(P(ξ)) = ξ and P(Q(ξ′)) = ξ′ on the sample and fits the exponent
/// m of (1+|ξ|)^{1/m} ≲ 1 + |P(ξ)| ≲ (1+|ξ|)^m on its outer half.
pub fn change_of_generators(pair: &PairDescriptor, p: &PolyMap, q: &PolyMap, sample: &[SpectrumPoint]) -> Result<Report, Error> {
    if p.inputs != pair.ell || q.outputs() != pair.ell || q.inputs != p.outputs() {
        return Err(Error::Domain(format!(
            "P must map R^{} to R^k and Q back; got P: R^{} -> R^{}, Q: R^{} -> R^{}",
            pair.ell,
            p.inputs,
            p.outputs(),
            q.inputs,
            q.outputs()
        )));
    }
    if sample.is_empty() {
        return Err(Error::Empty("no spectrum points".into()));
    }
    let (mut qp, mut pq) = (0.0f64, 0.0f64);
    let mut growth: Vec<(f64, f64)> = Vec::new();
    for s in sample {
        let image = p.eval(&s.xi);
        qp = qp.max(rel_error(&q.eval(&image), &s.xi));
        pq = pq.max(rel_error(&p.eval(&q.eval(&image)), &image));
        growth.push((1.0 + norm(&s.xi), 1.0 + norm(&image)));
    }
    growth.sort_by(|a, b| a.0.total_cmp(&b.0));
    let outer: Vec<(f64, f64)> = growth[growth.len() / 2..].iter().map(|(a, b)| (a.ln(), b.ln())).collect();
    let slope = fit_line(&outer).map(|f| f.0).ok_or_else(|| Error::Domain("sample norms do not spread enough to fit a growth exponent".into()))?;
    let m = integer_exponent(slope);
    let lower = growth.iter().map(|(a, b)| b / a.powf(1.0 / m as f64)).fold(f64::INFINITY, f64::min);
    let upper = growth.iter().map(|(a, b)| b / a.powi(m as i32)).fold(0.0, f64::max);
    let parts = vec![
        Report::below("q_after_p", pair.id, ROUND_TRIP_TOL, qp),
        Report::below("p_after_q", pair.id, ROUND_TRIP_TOL, pq),
    ];
    Ok(Report::all("generators", pair.id, ROUND_TRIP_TOL, parts)
        .with("fitted_slope", slope)
        .with("exponent", m)
        .with("c_lower", lower)
        .with("c_upper", upper)
        .with("samples", sample.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::{eigenvalue_map, SpectrumParams};

    #[test]
    fn identity_has_exponent_one() {
        let e2 = PairId::E2.descriptor();
        let sample: Vec<SpectrumPoint> = (1..200).map(|i| eigenvalue_map(&e2, SpectrumParams::Radial { lambda: i as f64 }).unwrap()).collect();
        let r = change_of_generators(&e2, &PolyMap::identity(1), &PolyMap::identity(1), &sample).unwrap();
        assert!(r.pass);
        assert_eq!(r.details["exponent"], 1);
        assert_eq!(r.observed, 0.0);
    }

    #[test]
    fn squared_laplacian_has_exponent_two() {
        let e2 = PairId::E2.descriptor();
        let sample: Vec<SpectrumPoint> = (0..=100).map(|i| eigenvalue_map(&e2, SpectrumParams::Radial { lambda: 0.1 * i as f64 }).unwrap()).collect();
        let (p, q) = augmented_system(&e2);
        assert_eq!(p.eval(&[3.0]), vec![3.0, 9.0]);
        let r = change_of_generators(&e2, &p, &q, &sample).unwrap();
        assert!(r.pass);
        assert_eq!(r.details["exponent"], 2);
    }

    #[test]
    fn exponent_rounding() {
        assert_eq!(integer_exponent(1.0), 1);
        assert_eq!(integer_exponent(1.98), 2);
        assert_eq!(integer_exponent(0.5), 2);
        assert_eq!(integer_exponent(2.3), 2);
        assert_eq!(integer_exponent(2.6), 3);
        assert_eq!(integer_exponent(0.9), 1);
    }

    #[test]
    fn shape_mismatch() {
        let e2 = PairId::E2.descriptor();
        let s = vec![eigenvalue_map(&e2, SpectrumParams::Radial { lambda: 1.0 }).unwrap()];
        assert!(change_of_generators(&e2, &PolyMap::identity(2), &PolyMap::identity(1), &s).is_err());
    }
}
