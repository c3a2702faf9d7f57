//! 𝒢f(φ) = ∫_G f(x) φ(x⁻¹) dx by quadrature on the sample grid.

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::{SpectrumFunction, SpectrumGrid};
use crate::pairs::{
    inverse, spherical_params, validate_params, GroupPoint, Layout, PairDescriptor, PairId, SampledFunction, SpectrumParams,
    SpectrumPoint, Symmetry,
};
use crate::specfun::{j0, LaguerreSeq};
use crate::Error;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) fn check_symmetry(pair: &PairDescriptor, f: &SampledFunction, points: &[SpectrumPoint]) -> Result<(), Error> {
    match &f.symmetry {
        Symmetry::BiKInvariant => {
            if let Some(p) = points.iter().find(|p| p.ktype() != 0) {
                return Err(Error::Type(format!("bi-K-invariant input has no type {} component", p.ktype())));
            }
        }
        Symmetry::KType(m) if pair.strong => {
            if let Some(p) = points.iter().find(|p| p.ktype() != m[0]) {
                return Err(Error::Type(format!("input of type {} evaluated at a type {} point", m[0], p.ktype())));
            }
        }
        Symmetry::KCentral if pair.strong => {}
        s => {
            return Err(Error::Type(format!("{} input needs a strong pair; {} is not strong", s.label(), pair.id)));
        }
    }
    Ok(())
}

pub(crate) fn boundary_warning(f: &SampledFunction) -> Option<String> {
    let sup = f.sup_norm();
    let b = f.boundary_max();
    (sup > 0.0 && b > 1e-12 * sup).then(|| {
        format!("truncation: boundary values reach {:.3e} of the sup at radius {}", b / sup, f.truncation)
    })
}

/// Nodes of a grid with their Haar weights.
pub(crate) struct Nodes {
    pub points: Vec<GroupPoint>,
    pub measure: Vec<f64>,
}

impl Nodes {
    pub fn of(f: &SampledFunction) -> Self {
        let g = &f.grid;
        let (points, measure) = (0..g.len())
            .map(|i| {
                let idx = g.unravel(i);
                (g.point(&idx), g.measure(&idx))
            })
            .unzip();
        Self { points, measure }
    }
}

/// Planar radius and measure of each planar node of a heis1 grid, with t
/// as the fastest axis.
pub(crate) struct HeisenbergSplit {
    pub radius: Vec<f64>,
    pub planar_measure: Vec<f64>,
    pub t: Vec<f64>,
    pub t_weight: Vec<f64>,
}

impl HeisenbergSplit {
    pub fn of(f: &SampledFunction) -> Self {
        let g = &f.grid;
        let t_axis = g.axes().len() - 1;
        let (radius, planar_measure) = match g.layout() {
            Layout::CentralRadial => g
                .axis_nodes(0)
                .iter()
                .zip(g.axis_weights(0))
                .map(|(&r, &w)| (r, 2.0 * PI * r * w))
                .unzip(),
            _ => {
                let (xs, ys) = (g.axis_nodes(0), g.axis_nodes(1));
                let (wx, wy) = (g.axis_weights(0), g.axis_weights(1));
                let mut r = Vec::with_capacity(xs.len() * ys.len());
                let mut m = Vec::with_capacity(xs.len() * ys.len());
                for (x, a) in xs.iter().zip(wx) {
                    for (y, b) in ys.iter().zip(wy) {
                        r.push(x.hypot(*y));
                        m.push(a * b);
                    }
                }
                (r, m)
            }
        };
        Self { radius, planar_measure, t: g.axis_nodes(t_axis).to_vec(), t_weight: g.axis_weights(t_axis).to_vec() }
    }
}

/// Groups point indices by the bit pattern of a key.
fn group_by<K: Fn(&SpectrumPoint) -> Option<u64>>(points: &[SpectrumPoint], key: K) -> BTreeMap<u64, Vec<usize>> {
    let mut map: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        if let Some(k) = key(p) {
            map.entry(k).or_default().push(i);
        }
    }
    map
}

fn generic(pair: &PairDescriptor, f: &SampledFunction, points: &[SpectrumPoint]) -> Vec<Complex64> {
    let nodes = Nodes::of(f);
    let inv: Vec<GroupPoint> = nodes.points.iter().map(|x| inverse(pair, x)).collect();
    points
        .par_iter()
        .map(|s| {
            inv.iter()
                .zip(&nodes.measure)
                .zip(&f.values)
                .filter(|(_, v)| **v != ZERO)
                .map(|((x, w), v)| v * spherical_params(&s.params, x) * *w)
                .sum()
        })
        .collect()
}

/// u1_c on (θ, r): Fourier coefficient in θ, then a Hankel sum per point.
fn circle_radial(f: &SampledFunction, points: &[SpectrumPoint]) -> Vec<Complex64> {
    let g = &f.grid;
    let (th, wth) = (g.axis_nodes(0), g.axis_weights(0));
    let (r, wr) = (g.axis_nodes(1), g.axis_weights(1));
    let nr = r.len();
    let lambda_of = |p: &SpectrumPoint| match p.params {
        SpectrumParams::Typed { lambda, .. } => lambda,
        _ => unreachable!("validated u1_c point"),
    };
    // J₀(λr) is shared by every type, so tabulate it once per distinct λ.
    let lambdas = group_by(points, |p| Some(lambda_of(p).to_bits()));
    let slot: BTreeMap<u64, usize> = lambdas.keys().enumerate().map(|(i, &k)| (k, i)).collect();
    let table: Vec<Vec<f64>> = lambdas.keys().collect::<Vec<_>>().par_iter().map(|&&k| r.iter().map(|&r| j0(f64::from_bits(k) * r)).collect()).collect();
    let mut out = vec![ZERO; points.len()];
    for (&m, idx) in group_by(points, |p| Some(p.ktype() as u64)).iter() {
        let m = m as i64;
        let coef: Vec<Complex64> = (0..nr)
            .map(|ir| {
                (0..th.len())
                    .map(|it| f.values[it * nr + ir] * Complex64::from_polar(wth[it] / (2.0 * PI), -(m as f64) * th[it]))
                    .sum::<Complex64>()
                    * (2.0 * PI * r[ir] * wr[ir])
            })
            .collect();
        for &i in idx {
            let j = &table[slot[&lambda_of(&points[i]).to_bits()]];
            out[i] = coef.iter().zip(j).map(|(c, j)| c * j).sum();
        }
    }
    out
}

/// heis1: t-Fourier sum per λ, then every ray at once by the Laguerre
/// recurrence.
fn heisenberg(f: &SampledFunction, points: &[SpectrumPoint]) -> Vec<Complex64> {
    let sp = HeisenbergSplit::of(f);
    let nt = sp.t.len();
    let np = sp.radius.len();
    let t_sum = |lambda: f64| -> Vec<Complex64> {
        let phase: Vec<Complex64> = sp.t.iter().zip(&sp.t_weight).map(|(&t, &w)| Complex64::from_polar(w, -lambda * t)).collect();
        (0..np)
            .map(|p| f.values[p * nt..(p + 1) * nt].iter().zip(&phase).map(|(v, e)| v * e).sum::<Complex64>() * sp.planar_measure[p])
            .collect()
    };
    let fans = group_by(points, |p| match p.params {
        SpectrumParams::Fan { lambda, .. } => Some(lambda.to_bits()),
        _ => None,
    });
    let results: Vec<Vec<(usize, Complex64)>> = fans
        .par_iter()
        .map(|(&bits, idx)| {
            let lambda = f64::from_bits(bits);
            let ks: Vec<u32> = idx
                .iter()
                .map(|&i| match points[i].params {
                    SpectrumParams::Fan { k, .. } => k,
                    _ => unreachable!(),
                })
                .collect();
            let kmax = *ks.iter().max().unwrap_or(&0) as usize;
            let tp = t_sum(lambda);
            let mut acc = vec![ZERO; kmax + 1];
            for (&t, &r) in tp.iter().zip(&sp.radius).take(np) {
                if t == ZERO {
                    continue;
                }
                let s = 0.5 * lambda.abs() * r * r;
                let scale = (-0.5 * s).exp();
                for (k, l) in LaguerreSeq::new(0.0, s).take(kmax + 1).enumerate() {
                    acc[k] += t * (l * scale);
                }
            }
            idx.iter().zip(&ks).map(|(&i, &k)| (i, acc[k as usize])).collect()
        })
        .collect();
    let mut out = vec![ZERO; points.len()];
    for (i, v) in results.into_iter().flatten() {
        out[i] = v;
    }
    let rays: Vec<usize> = (0..points.len()).filter(|&i| matches!(points[i].params, SpectrumParams::Ray { .. })).collect();
    if !rays.is_empty() {
        let t0 = t_sum(0.0);
        for i in rays {
            if let SpectrumParams::Ray { eta } = points[i].params {
                out[i] = t0.iter().zip(&sp.radius).map(|(v, &r)| v * j0(eta * r)).sum();
            }
        }
    }
    out
}

/// Spherical transform of `f` at `points`.
///
/// Bi-K-invariant input is accepted on every pair; on a strong pair a
/// K-type(m) input needs all points of type m, and K-central input is
/// transformed type by type.
pub fn spherical_transform(pair: &PairDescriptor, f: &SampledFunction, points: &[SpectrumPoint]) -> Result<SpectrumFunction, Error> {
    if f.pair != pair.id {
        return Err(Error::Domain(format!("function sampled on {}, transform requested on {}", f.pair, pair.id)));
    }
    for p in points {
        validate_params(pair, &p.params)?;
    }
    check_symmetry(pair, f, points)?;
    let values = match (pair.id, f.layout()) {
        (PairId::U1C, Layout::CircleRadial) => circle_radial(f, points),
        (PairId::Heis1, _) => heisenberg(f, points),
        _ => generic(pair, f, points),
    };
    let mut out = SpectrumFunction::new(pair.id, points.to_vec(), values, None)?;
    out.truncation = f.truncation;
    out.nodes = f.grid.len();
    out.warnings.extend(boundary_warning(f));
    Ok(out)
}

/// Transform on a weighted grid; the result can be inverted.
pub fn transform_on(pair: &PairDescriptor, f: &SampledFunction, grid: &SpectrumGrid) -> Result<SpectrumFunction, Error> {
    let mut out = spherical_transform(pair, f, &grid.points)?;
    out.weights = Some(grid.weights.clone());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::{eigenvalue_map, Axis};

    #[test]
    fn fast_paths_match_generic_sum() {
        let h = PairId::Heis1.descriptor();
        let f = SampledFunction::from_fn(
            PairId::Heis1,
            Symmetry::BiKInvariant,
            vec![Axis::gauss("r", 0.0, 6.0, 40), Axis::gauss("t", -6.0, 6.0, 30)],
            |x| Complex64::new((-0.5 * (x.planar_norm().powi(2) + x.z[2] * x.z[2]) + 0.3 * x.z[2]).exp(), 0.0),
        )
        .unwrap();
        let pts: Vec<_> = [
            SpectrumParams::Fan { lambda: 0.7, k: 0 },
            SpectrumParams::Fan { lambda: -1.3, k: 3 },
            SpectrumParams::Fan { lambda: 0.7, k: 5 },
            SpectrumParams::Ray { eta: 1.1 },
        ]
        .into_iter()
        .map(|p| eigenvalue_map(&h, p).unwrap())
        .collect();
        let fast = heisenberg(&f, &pts);
        let slow = generic(&h, &f, &pts);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()), "{a} vs {b}");
        }

        let u = PairId::U1C.descriptor();
        let f = SampledFunction::from_fn(PairId::U1C, Symmetry::KCentral, vec![Axis::circle(12), Axis::gauss("r", 0.0, 6.0, 40)], |x| {
            Complex64::new((-0.5 * x.planar_norm().powi(2) + x.theta[0].cos()).exp(), 0.0)
        })
        .unwrap();
        let pts: Vec<_> = [(0, 0.5), (1, 0.5), (-2, 2.0)]
            .into_iter()
            .map(|(m, lambda)| eigenvalue_map(&u, SpectrumParams::Typed { m, lambda }).unwrap())
            .collect();
        for (a, b) in circle_radial(&f, &pts).iter().zip(&generic(&u, &f, &pts)) {
            assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()), "{a} vs {b}");
        }
    }

    #[test]
    fn symmetry_preconditions() {
        let e2 = PairId::E2.descriptor();
        let f = SampledFunction::from_fn(PairId::E2, Symmetry::KCentral, vec![Axis::gauss("r", 0.0, 5.0, 20)], |_| Complex64::new(1.0, 0.0))
            .unwrap();
        let p = eigenvalue_map(&e2, SpectrumParams::Radial { lambda: 1.0 }).unwrap();
        assert!(matches!(spherical_transform(&e2, &f, &[p]), Err(Error::Type(_))));
        let u = PairId::U1C.descriptor();
        let f = SampledFunction::from_fn(PairId::U1C, Symmetry::KType(vec![2]), vec![Axis::circle(8), Axis::gauss("r", 0.0, 5.0, 20)], |_| {
            Complex64::new(1.0, 0.0)
        })
        .unwrap();
        let p = eigenvalue_map(&u, SpectrumParams::Typed { m: 1, lambda: 1.0 }).unwrap();
        assert!(matches!(spherical_transform(&u, &f, &[p]), Err(Error::Type(_))));
    }
}
