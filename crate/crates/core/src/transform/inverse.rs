//! f(x) = Σ_σ ĝ(σ) φ_σ(x) β(σ).

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

use super::forward::HeisenbergSplit;
use super::SpectrumFunction;
use crate::pairs::{spherical_params, Axis, Grid, Layout, PairDescriptor, PairId, SampledFunction, SpectrumParams, Symmetry};
use crate::specfun::{j0, LaguerreSeq};
use crate::Error;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn output_symmetry(gh: &SpectrumFunction) -> Symmetry {
    if gh.pair != PairId::U1C {
        return Symmetry::BiKInvariant;
    }
    let types: BTreeSet<i64> = gh.points.iter().map(|p| p.ktype()).collect();
    match types.iter().collect::<Vec<_>>().as_slice() {
        [] | [0] => Symmetry::BiKInvariant,
        [m] => Symmetry::KType(vec![**m]),
        _ => Symmetry::KCentral,
    }
}

/// Largest ray index, after checking the rays 0..=kmax are all present.
fn fan_depth(gh: &SpectrumFunction) -> Result<Option<u32>, Error> {
    let ks: BTreeSet<u32> = gh
        .points
        .iter()
        .filter_map(|p| match p.params {
            SpectrumParams::Fan { k, .. } => Some(k),
            _ => None,
        })
        .collect();
    let Some(&kmax) = ks.iter().next_back() else { return Ok(None) };
    if ks.len() != kmax as usize + 1 {
        return Err(Error::Domain(format!("fan rays must cover k = 0..={kmax} without gaps")));
    }
    Ok(Some(kmax))
}

fn heisenberg(f: &SampledFunction, gh: &SpectrumFunction, beta: &[f64]) -> Vec<Complex64> {
    let sp = HeisenbergSplit::of(f);
    let nt = sp.t.len();
    // (λ, [coefficient per k]) and the limit-ray terms.
    let mut fans: BTreeMap<u64, Vec<Complex64>> = BTreeMap::new();
    let mut rays: Vec<(f64, Complex64)> = Vec::new();
    for ((p, v), b) in gh.points.iter().zip(&gh.values).zip(beta) {
        match p.params {
            SpectrumParams::Fan { lambda, k } => {
                let c = fans.entry(lambda.to_bits()).or_default();
                if c.len() <= k as usize {
                    c.resize(k as usize + 1, ZERO);
                }
                c[k as usize] += v * b;
            }
            SpectrumParams::Ray { eta } => rays.push((eta, v * b)),
            _ => unreachable!("validated heis1 point"),
        }
    }
    let fans: Vec<(f64, Vec<Complex64>)> = fans.into_iter().map(|(b, c)| (f64::from_bits(b), c)).collect();
    let mut values = vec![ZERO; f.grid.len()];
    values.par_chunks_mut(nt).enumerate().for_each(|(p, out)| {
        let r = sp.radius[p];
        for (lambda, coef) in &fans {
            let s = 0.5 * lambda.abs() * r * r;
            let scale = (-0.5 * s).exp();
            if scale == 0.0 {
                continue;
            }
            let radial: Complex64 = LaguerreSeq::new(0.0, s).zip(coef).map(|(l, c)| c * l).sum::<Complex64>() * scale;
            if radial == ZERO {
                continue;
            }
            for (o, &t) in out.iter_mut().zip(&sp.t) {
                *o += radial * Complex64::from_polar(1.0, lambda * t);
            }
        }
        let ray: Complex64 = rays.iter().map(|(eta, c)| c * j0(eta * r)).sum();
        if ray != ZERO {
            out.iter_mut().for_each(|o| *o += ray);
        }
    });
    values
}

/// u1_c on (θ, r): radial profile per type, then the θ characters.
fn circle_radial(grid: &Grid, gh: &SpectrumFunction, beta: &[f64]) -> Vec<Complex64> {
    let (th, r) = (grid.axis_nodes(0), grid.axis_nodes(1));
    let mut by_type: BTreeMap<i64, Vec<(f64, Complex64)>> = BTreeMap::new();
    for ((p, v), b) in gh.points.iter().zip(&gh.values).zip(beta) {
        if let SpectrumParams::Typed { m, lambda } = p.params {
            by_type.entry(m).or_default().push((lambda, v * b));
        }
    }
    let profiles: Vec<(i64, Vec<Complex64>)> = by_type
        .into_iter()
        .map(|(m, terms)| (m, r.par_iter().map(|&r| terms.iter().map(|(l, c)| c * j0(l * r)).sum()).collect()))
        .collect();
    let nr = r.len();
    let mut values = vec![ZERO; grid.len()];
    for (it, &t) in th.iter().enumerate() {
        for (m, prof) in &profiles {
            let e = Complex64::from_polar(1.0, *m as f64 * t);
            for ir in 0..nr {
                values[it * nr + ir] += e * prof[ir];
            }
        }
    }
    values
}

fn generic(pair: &PairDescriptor, grid: &Grid, gh: &SpectrumFunction, beta: &[f64]) -> Vec<Complex64> {
    let coef: Vec<(SpectrumParams, Complex64)> =
        gh.points.iter().zip(&gh.values).zip(beta).map(|((p, v), b)| (p.params, v * b)).filter(|(_, c)| *c != ZERO).collect();
    let flat = pair.id == PairId::FlatR1;
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.point(&grid.unravel(i));
            coef.iter()
                .map(|(p, c)| match (flat, p) {
                    // (φ(x) + φ(x⁻¹)) / 2 = cos λx
                    (true, SpectrumParams::Radial { lambda }) => c * (lambda * x.z[0]).cos(),
                    _ => c * spherical_params(p, &x),
                })
                .sum()
        })
        .collect()
}

/// Inverse spherical transform onto a grid with the given axes.
///
/// `gh` must carry Plancherel weights. On heis1 the fan is truncated at the
/// deepest ray present, which is reported in the result's warnings.
pub fn inverse_transform(pair: &PairDescriptor, gh: &SpectrumFunction, axes: Vec<Axis>) -> Result<SampledFunction, Error> {
    if gh.pair != pair.id {
        return Err(Error::Domain(format!("spectrum function belongs to {}, not {}", gh.pair, pair.id)));
    }
    let beta = gh.weights.as_ref().ok_or_else(|| Error::Weight("inversion needs Plancherel weights".into()))?;
    let grid = Grid::new(pair.id, axes)?;
    let kmax = if pair.id == PairId::Heis1 { fan_depth(gh)? } else { None };
    let values = match (pair.id, grid.layout()) {
        (PairId::Heis1, _) => {
            let probe = SampledFunction::new(pair.id, Symmetry::BiKInvariant, grid.clone(), vec![ZERO; grid.len()])?;
            heisenberg(&probe, gh, beta)
        }
        (PairId::U1C, Layout::CircleRadial) => circle_radial(&grid, gh, beta),
        _ => generic(pair, &grid, gh, beta),
    };
    let mut out = SampledFunction::new(pair.id, output_symmetry(gh), grid, values)?;
    if let Some(k) = kmax {
        out.warnings.push(format!("fan truncated at k_max = {k}"));
    }
    Ok(out)
}

/// ‖a − b‖₂ / ‖b‖₂ in the Haar measure of the shared grid.
pub fn relative_l2_error(a: &SampledFunction, b: &SampledFunction) -> Result<f64, Error> {
    let d = a.combine(Complex64::new(1.0, 0.0), b, Complex64::new(-1.0, 0.0))?;
    let nb = b.l2_norm();
    let nd = d.l2_norm();
    Ok(if nb == 0.0 {
        if nd == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        nd / nb
    })
}
