//! Decay of per-type transforms in the type parameter, the diagonal choice
//! of extensions, and the assembled extension to ℝ².

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::bump::{bump_interpolate, interpolation_constant, BumpSpec, LatticeFunction};
use super::euclid::{euclid_seminorm, seminorm_table, EuclidAxis, EuclidFunction};
use crate::ktype::{decompose, KTypeIndex};
use crate::pairs::{PairDescriptor, PairId, SampledFunction, SpectrumParams, SpectrumPoint};
use crate::transform::{spherical_transform, SpectrumFunction};
use crate::{Error, Report, Status};

/// Slack allowed on the fitted log-log slope.
pub const DECAY_MARGIN: f64 = 0.2;
/// Relative L² mass the type decomposition may leave out before a passing
/// fit is downgraded to inconclusive.
pub const TYPE_TAIL_LIMIT: f64 = 1e-8;
/// Types whose slice is below this fraction of the largest are dropped from the fit.
pub const TYPE_FLOOR: f64 = 1e-12;
/// Highest seminorm order tabulated per type.
pub const TABLE_ORDER: u32 = 3;
pub const MAX_DECAY_N: u32 = 3;
pub const MAX_DECAY_M: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecaySpec {
    /// Seminorm order N.
    pub n: u32,
    /// Required decay order M.
    pub m: u32,
    /// Types |m| ≤ max_types enter the decomposition.
    pub max_types: u32,
    /// ξ″ grid on [0, xi_max].
    pub xi_max: f64,
    pub xi_points: usize,
}

impl DecaySpec {
    pub fn new(n: u32, m: u32, max_types: u32) -> Self {
        Self { n, m, max_types, xi_max: 80.0, xi_points: 801 }
    }

    fn axis(&self) -> Result<EuclidAxis, Error> {
        if self.xi_points < 2 {
            return Err(Error::Grid("the xi'' grid needs at least two points".into()));
        }
        EuclidAxis::new(0.0, self.xi_max / (self.xi_points - 1) as f64, self.xi_points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeSeminorms {
    pub index: KTypeIndex,
    /// ‖g_τ‖_(N) for N = 0..=TABLE_ORDER.
    pub seminorms: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayConstant {
    pub m: u32,
    /// max_τ ‖g_τ‖_(N) (1 + |ξ′_τ|)^m over the tested types.
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeminormReport {
    pub check: String,
    pub pair: PairId,
    pub n: u32,
    pub m: u32,
    /// sup_τ ‖g_τ‖_(N).
    pub value: f64,
    pub per_type: Vec<TypeSeminorms>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub limit: f64,
    pub constants: Vec<DecayConstant>,
    /// Relative L² mass outside the decomposed types.
    pub type_tail: f64,
    pub status: Status,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl SeminormReport {
    pub fn summary(&self) -> String {
        let slope = self.slope.map_or("none".to_string(), |s| format!("{s:.3}"));
        format!(
            "{} on {}: N = {}, M = {}, fitted slope {} against limit {:.3} over {} types, status {:?}",
            self.check,
            self.pair,
            self.n,
            self.m,
            slope,
            self.limit,
            self.per_type.len(),
            self.status
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Columns m, xi_prime_norm, seminorm_N0..seminorm_N3.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut head = vec!["m".to_string(), "xi_prime_norm".to_string()];
        head.extend((0..=TABLE_ORDER).map(|n| format!("seminorm_N{n}")));
        w.write_record(&head).expect("in-memory write");
        for t in &self.per_type {
            let mut row = vec![t.index.m.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" "), format!("{:e}", t.index.xi_prime_norm())];
            row.extend(t.seminorms.iter().map(|s| format!("{s:e}")));
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 csv")
    }
}

/// Least-squares line through (x, y); None without two distinct x.
pub fn fit_line(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if points.len() < 2 || sxx <= 1e-12 * points.iter().map(|p| p.0 * p.0).sum::<f64>().max(1e-300) {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

fn check_orders(n: u32, m: u32) -> Result<(), Error> {
    if n > MAX_DECAY_N || m > MAX_DECAY_M {
        return Err(Error::Domain(format!("decay checks support N ≤ {MAX_DECAY_N} and M ≤ {MAX_DECAY_M}, got N = {n}, M = {m}")));
    }
    Ok(())
}

/// Per-type slices of a u1_c spectrum function on a common uniform ξ″ grid.
pub fn spectrum_slices(pair: &PairDescriptor, gh: &SpectrumFunction) -> Result<(EuclidAxis, BTreeMap<i64, Vec<Complex64>>), Error> {
    if pair.id != PairId::U1C || gh.pair != pair.id {
        return Err(Error::Unsupported(format!("per-type slices are implemented for u1_c, got {} / {}", pair.id, gh.pair)));
    }
    let mut by_type: BTreeMap<i64, Vec<(f64, Complex64)>> = BTreeMap::new();
    for (p, v) in gh.points.iter().zip(&gh.values) {
        by_type.entry(p.ktype()).or_default().push((p.xi[1], *v));
    }
    let Some(first) = by_type.values_mut().next() else {
        return Err(Error::Empty("spectrum function has no points".into()));
    };
    first.sort_by(|a, b| a.0.total_cmp(&b.0));
    let xs: Vec<f64> = first.iter().map(|p| p.0).collect();
    if xs.len() < 2 {
        return Err(Error::Grid("each type needs at least two xi'' samples".into()));
    }
    let step = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let tol = 1e-9 * xs[xs.len() - 1].abs().max(step);
    if !(step > 0.0) || xs.iter().enumerate().any(|(i, x)| (x - (xs[0] + i as f64 * step)).abs() > tol) {
        return Err(Error::Grid("xi'' samples must be uniformly spaced".into()));
    }
    let mut slices = BTreeMap::new();
    for (m, mut pts) in by_type {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts.len() != xs.len() || pts.iter().zip(&xs).any(|(p, x)| (p.0 - x).abs() > tol) {
            return Err(Error::Grid(format!("type {m} is sampled on a different xi'' grid")));
        }
        slices.insert(m, pts.into_iter().map(|p| p.1).collect());
    }
    Ok((EuclidAxis::new(xs[0], step, xs.len())?, slices))
}

/// Decay fit on per-type slices g_m(ξ″).
fn decay_from_slices(
    pair: &PairDescriptor,
    axis: EuclidAxis,
    slices: &BTreeMap<i64, Vec<Complex64>>,
    n: u32,
    m: u32,
    type_tail: f64,
) -> Result<SeminormReport, Error> {
    check_orders(n, m)?;
    let sup = |v: &[Complex64]| v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let top = slices.values().map(|v| sup(v)).fold(0.0, f64::max);
    let mut notes = Vec::new();
    let mut per_type = Vec::new();
    let mut dropped = 0;
    for (&mm, v) in slices {
        if sup(v) <= TYPE_FLOOR * top {
            dropped += 1;
            continue;
        }
        let u = EuclidFunction::new(vec![axis], v.clone())?;
        per_type.push(TypeSeminorms { index: KTypeIndex::new(pair, &[mm])?, seminorms: seminorm_table(&u, TABLE_ORDER, n)? });
    }
    if dropped > 0 {
        notes.push(format!("{dropped} types below {TYPE_FLOOR:e} of the largest slice left out of the fit"));
    }
    let value = per_type.iter().map(|t| t.seminorms[n as usize]).fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = per_type.iter().map(|t| ((1.0 + t.index.xi_prime_norm()).ln(), t.seminorms[n as usize].ln())).collect();
    let fit = fit_line(&pts);
    let limit = -(m as f64) + DECAY_MARGIN;
    let constants = (0..=m)
        .map(|mm| DecayConstant {
            m: mm,
            c: per_type.iter().map(|t| t.seminorms[n as usize] * (1.0 + t.index.xi_prime_norm()).powi(mm as i32)).fold(0.0, f64::max),
        })
        .collect();
    let (pass, status) = match fit {
        None => {
            notes.push("a single type magnitude is present; the decay condition holds by vacuity".into());
            (true, Status::Pass)
        }
        Some((s, _)) if s <= limit => {
            if type_tail > TYPE_TAIL_LIMIT {
                notes.push(format!("type tail {type_tail:.3e} exceeds {TYPE_TAIL_LIMIT:e}: the fit cannot certify decay"));
                (false, Status::Inconclusive)
            } else {
                (true, Status::Pass)
            }
        }
        Some(_) => {
            if type_tail > TYPE_TAIL_LIMIT {
                notes.push(format!("type tail {type_tail:.3e}: the input itself has slowly decaying types"));
            }
            (false, Status::Fail)
        }
    };
    Ok(SeminormReport {
        check: "decay".into(),
        pair: pair.id,
        n,
        m,
        value,
        per_type,
        slope: fit.map(|f| f.0),
        intercept: fit.map(|f| f.1),
        limit,
        constants,
        type_tail,
        status,
        pass,
        notes,
    })
}

/// Decay check on an already computed per-type spectrum function.
pub fn decay_from_spectrum(pair: &PairDescriptor, gh: &SpectrumFunction, n: u32, m: u32) -> Result<SeminormReport, Error> {
    let (axis, slices) = spectrum_slices(pair, gh)?;
    decay_from_slices(pair, axis, &slices, n, m, 0.0)
}

/// 𝒢_m f_m on the ξ″ grid of `spec` for every type |m| ≤ max_types whose
/// component is above the floor. Since the θ-quadrature of the transform
/// projects onto the type, 𝒢_m f_m is read off 𝒢f on the type-m slice.
pub fn type_spectrum(pair: &PairDescriptor, f: &SampledFunction, spec: &DecaySpec) -> Result<(SpectrumFunction, f64), Error> {
    let dec = decompose(pair, f, spec.max_types)?;
    let top = dec.components.iter().map(|c| c.l2_norm).fold(0.0, f64::max);
    let axis = spec.axis()?;
    let mut points = Vec::new();
    for c in dec.components.iter().filter(|c| c.l2_norm > TYPE_FLOOR * top) {
        for j in 0..axis.n {
            let xi2 = axis.node(j);
            points.push(SpectrumPoint { xi: vec![c.index.m[0] as f64, xi2], params: SpectrumParams::Typed { m: c.index.m[0], lambda: xi2.sqrt() } });
        }
    }
    if points.is_empty() {
        return Err(Error::Empty("function has no K-type above the floor".into()));
    }
    Ok((spherical_transform(pair, f, &points)?, dec.relative_tail()))
}

/// Decomposes f into types, transforms each, and fits
/// log ‖g_m‖_(N) against log(1 + |ξ′_m|). Passes iff the slope is at most
/// −M + [`DECAY_MARGIN`].
pub fn verify_decay(pair: &PairDescriptor, f: &SampledFunction, spec: &DecaySpec) -> Result<SeminormReport, Error> {
    check_orders(spec.n, spec.m)?;
    let (gh, tail) = type_spectrum(pair, f, spec)?;
    let (axis, slices) = spectrum_slices(pair, &gh)?;
    let mut r = decay_from_slices(pair, axis, &slices, spec.n, spec.m, tail)?;
    r.notes.extend(gh.warnings);
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalSelection {
    /// r_0 ≤ r_1 ≤ … ≤ r_{N_max}.
    pub thresholds: Vec<f64>,
    pub choice: Vec<(KTypeIndex, u32)>,
}

impl DiagonalSelection {
    /// Re-fits the selected family g_τ = g_τ^{N(τ)} for every M, N ≤ the
    /// given orders.
    pub fn verify(&self, tables: &[TypeSeminorms], m_max: u32, n_max: u32) -> Report {
        let mut parts = Vec::new();
        for n in 0..=n_max {
            let pts: Vec<(f64, f64)> = tables.iter().map(|t| ((1.0 + t.index.xi_prime_norm()).ln(), t.seminorms[n as usize].ln())).collect();
            let slope = fit_line(&pts).map(|f| f.0);
            for m in 0..=m_max {
                let limit = -(m as f64) + DECAY_MARGIN;
                let ok = slope.is_none_or(|s| s <= limit);
                parts.push(Report::decided("selected_decay", PairId::U1C, limit, slope.unwrap_or(f64::NEG_INFINITY), ok).with("n", n).with("m", m));
            }
        }
        Report::all("diagonal_selection", PairId::U1C, DECAY_MARGIN, parts).with("thresholds", &self.thresholds)
    }
}

/// The threshold radii r_N, the least radii beyond which
/// ‖g_τ‖_(N) ≤ |ξ′_τ|^{−N} in the data, and the induced choice N(τ).
pub fn diagonal_select(tables: &[TypeSeminorms], n_max: u32) -> Result<DiagonalSelection, Error> {
    if tables.is_empty() {
        return Err(Error::Empty("no seminorm tables to select from".into()));
    }
    if let Some(t) = tables.iter().find(|t| t.seminorms.len() <= n_max as usize) {
        return Err(Error::Domain(format!("type {:?} has no seminorm of order {n_max}", t.index.m)));
    }
    if tables.len() == 1 {
        return Ok(DiagonalSelection { thresholds: vec![0.0; n_max as usize + 1], choice: vec![(tables[0].index.clone(), n_max)] });
    }
    let thresholds: Vec<f64> = (0..=n_max)
        .map(|n| {
            tables
                .iter()
                .filter(|t| {
                    let r = t.index.xi_prime_norm();
                    let bound = if n == 0 { 1.0 } else { r.powi(-(n as i32)) };
                    t.seminorms[n as usize] > bound
                })
                .map(|t| t.index.xi_prime_norm())
                .fold(0.0, f64::max)
        })
        .collect();
    if thresholds.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Inconclusive(format!("threshold radii {thresholds:?} are not nondecreasing")));
    }
    let choice = tables
        .iter()
        .map(|t| {
            let r = t.index.xi_prime_norm();
            let n = (0..=n_max).rev().find(|&n| thresholds[n as usize] < r).unwrap_or(0);
            (t.index.clone(), n)
        })
        .collect();
    Ok(DiagonalSelection { thresholds, choice })
}

/// u(ξ′, ξ″) assembled from per-ξ″ lattice interpolations of m ↦ g_m(ξ″).
#[derive(Debug, Clone)]
pub struct Extension {
    pub function: EuclidFunction,
    pub decay: SeminormReport,
}

/// Extends a u1_c per-type spectrum function to ℝ². Refuses input whose
/// decay report at (N, M) = (2, 3) does not pass.
pub fn schwartz_extend(pair: &PairDescriptor, gh: &SpectrumFunction, spec: &BumpSpec, sub: u32) -> Result<Extension, Error> {
    spec.validate()?;
    let (axis, slices) = spectrum_slices(pair, gh)?;
    let decay = decay_from_slices(pair, axis, &slices, 2, 3, 0.0)?;
    if !decay.pass {
        return Err(Error::DecayPrecondition(Box::new(decay)));
    }
    let (lo, hi) = (*slices.keys().next().unwrap(), *slices.keys().next_back().unwrap());
    let xi1 = EuclidAxis::lattice(lo - 1, hi + 1, sub)?;
    let mut values = vec![Complex64::new(0.0, 0.0); xi1.n * axis.n];
    for j in 0..axis.n {
        let a: LatticeFunction = slices.iter().map(|(&m, v)| (vec![m], v[j])).collect();
        let h = bump_interpolate(&a, spec, sub)?;
        for i in 0..xi1.n {
            values[i * axis.n + j] = h.values[i];
        }
    }
    Ok(Extension { function: EuclidFunction::new(vec![xi1, axis], values)?, decay })
}

/// u|_{Σ_D} = gh at every sample, and ‖u‖_(2) ≤ A₂ max_m (1+|m|)² ‖g_m‖_(2).
pub fn verify_extension(pair: &PairDescriptor, gh: &SpectrumFunction, spec: &BumpSpec, sub: u32) -> Result<Report, Error> {
    let ext = schwartz_extend(pair, gh, spec, sub)?;
    let u = &ext.function;
    let mismatches = gh.points.iter().zip(&gh.values).filter(|(p, v)| u.at(&p.xi) != Some(**v)).count();
    let n = 2;
    let lhs = euclid_seminorm(u, n)?;
    let (axis, slices) = spectrum_slices(pair, gh)?;
    let mut rhs = 0.0f64;
    for (&m, v) in &slices {
        let g = euclid_seminorm(&EuclidFunction::new(vec![axis], v.clone())?, n)?;
        rhs = rhs.max((1.0 + m.abs() as f64).powi(n as i32) * g);
    }
    let a_n = interpolation_constant(spec, 1, n, sub)?;
    let bound = a_n * rhs;
    let parts = vec![
        Report::decided("extension_restriction", pair.id, 0.0, mismatches as f64, mismatches == 0).with("samples", gh.len()),
        Report::decided("extension_bound", pair.id, 1.0, if bound > 0.0 { lhs / bound } else { 0.0 }, lhs <= bound)
            .with("seminorm", lhs)
            .with("bound", bound)
            .with("a_n", a_n),
    ];
    Ok(Report::all("extension", pair.id, 0.0, parts).with("decay_slope", ext.decay.slope))
}
