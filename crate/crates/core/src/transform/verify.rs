//! Verification checks built on the transform and the convolution oracle.

use num_complex::Complex64;

use super::{hermitian_eigenvalues, inverse_transform, plancherel_grid, relative_l2_error, spherical_transform, transform_on, PlancherelSpec};
use crate::pairs::{
    apply_generator_with, group_convolve, inverse, multiply, spherical_params, validate_params, Axis, FdAccuracy, GroupPoint,
    PairDescriptor, PairId, SampledFunction, SpectrumPoint, Symmetry,
};
use crate::{Error, Report};

/// Largest Gram matrix built by [`verify_positive_definite`].
pub const MAX_GRAM_POINTS: usize = 200;
/// Stencil order used by [`verify_eigen`].
pub const EIGEN_ACCURACY: FdAccuracy = FdAccuracy::Fourth;
/// Coarsest finite-difference step accepted by [`verify_eigen`].
const MAX_EIGEN_STEP: f64 = 1e-2;

fn relative(diff: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / scale
    }
}

/// Compares ‖f‖₂ with (Σ β |𝒢f|²)^{1/2}.
pub fn verify_plancherel(pair: &PairDescriptor, f: &SampledFunction, spec: &PlancherelSpec, tol: f64) -> Result<Report, Error> {
    let grid = plancherel_grid(pair, spec)?;
    let gh = transform_on(pair, f, &grid)?;
    let lhs = f.l2_norm();
    let rhs = gh.weighted_norm()?;
    let mut r = Report::below("plancherel", pair.id, tol, relative((lhs - rhs).abs(), lhs))
        .with("l2_norm", lhs)
        .with("spectral_norm", rhs)
        .with("ratio", if lhs > 0.0 { rhs / lhs } else { f64::NAN })
        .with("truncation", f.truncation)
        .with("grid_nodes", f.grid.len())
        .with("spectrum_points", grid.len());
    if pair.id == PairId::Heis1 {
        let tail = transform_on(pair, f, &plancherel_grid(pair, &spec.tail())?)?.weighted_norm()?.powi(2);
        r = r
            .with("k_max", spec.kmax)
            .with("tail_estimate", tail)
            .with("tail_fraction", if rhs > 0.0 { tail / (rhs * rhs) } else { 0.0 });
    }
    for w in gh.warnings {
        r = r.note(w);
    }
    Ok(r)
}

/// Relative L² error of inverse ∘ forward on the grid of `f`.
pub fn verify_round_trip(pair: &PairDescriptor, f: &SampledFunction, spec: &PlancherelSpec, tol: f64) -> Result<Report, Error> {
    let grid = plancherel_grid(pair, spec)?;
    let gh = transform_on(pair, f, &grid)?;
    let back = inverse_transform(pair, &gh, f.grid.axes().to_vec())?;
    let err = relative_l2_error(&back, f)?;
    let mut r = Report::below("round_trip", pair.id, tol, err)
        .with("truncation", f.truncation)
        .with("grid_nodes", f.grid.len())
        .with("spectrum_points", grid.len());
    if pair.id == PairId::Heis1 {
        r = r.with("k_max", spec.kmax);
    }
    for w in back.warnings.into_iter().chain(gh.warnings) {
        r = r.note(w);
    }
    Ok(r)
}

fn check_algebra_inputs(pair: &PairDescriptor, f: &SampledFunction, g: &SampledFunction) -> Result<(), Error> {
    match (&f.symmetry, &g.symmetry) {
        (Symmetry::BiKInvariant, Symmetry::BiKInvariant) => Ok(()),
        (Symmetry::KCentral, Symmetry::KCentral) if pair.strong => Ok(()),
        (Symmetry::KType(a), Symmetry::KType(b)) if pair.strong && a == b => Ok(()),
        (a, b) => Err(Error::Type(format!("operands tagged {} and {} do not lie in a commutative algebra", a.label(), b.label()))),
    }
}

/// ‖f∗g − g∗f‖∞ / ‖f∗g‖∞.
pub fn verify_commutativity(pair: &PairDescriptor, f: &SampledFunction, g: &SampledFunction, tol: f64) -> Result<Report, Error> {
    check_algebra_inputs(pair, f, g)?;
    let fg = group_convolve(pair, f, g)?;
    let gf = group_convolve(pair, g, f)?;
    let diff = fg.values.iter().zip(&gf.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let mut r = Report::below("commutativity", pair.id, tol, relative(diff, fg.sup_norm()))
        .with("sup_fg", fg.sup_norm())
        .with("sup_difference", diff)
        .with("grid_nodes", f.grid.len());
    for w in fg.warnings {
        r = r.note(w);
    }
    Ok(r)
}

/// max |𝒢(f∗g) − 𝒢f·𝒢g| / max |𝒢f·𝒢g| over `points`.
pub fn verify_multiplicativity(
    pair: &PairDescriptor,
    f: &SampledFunction,
    g: &SampledFunction,
    points: &[SpectrumPoint],
    tol: f64,
) -> Result<Report, Error> {
    check_algebra_inputs(pair, f, g)?;
    let fg = group_convolve(pair, f, g)?;
    let a = spherical_transform(pair, &fg, points)?;
    let (bf, bg) = (spherical_transform(pair, f, points)?, spherical_transform(pair, g, points)?);
    let prod: Vec<Complex64> = bf.values.iter().zip(&bg.values).map(|(x, y)| x * y).collect();
    let diff = a.values.iter().zip(&prod).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let scale = prod.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut r = Report::below("multiplicativity", pair.id, tol, relative(diff, scale))
        .with("max_product", scale)
        .with("spectrum_points", points.len())
        .with("grid_nodes", f.grid.len());
    for w in fg.warnings {
        r = r.note(w);
    }
    Ok(r)
}

/// Smallest eigenvalue of the Gram matrix φ(xᵢ⁻¹ xⱼ).
pub fn verify_positive_definite(pair: &PairDescriptor, sigma: &SpectrumPoint, points: &[GroupPoint], tol: f64) -> Result<Report, Error> {
    validate_params(pair, &sigma.params)?;
    let n = points.len();
    if n == 0 || n > MAX_GRAM_POINTS {
        return Err(Error::Domain(format!("need 1..={MAX_GRAM_POINTS} points, got {n}")));
    }
    for p in points {
        if p.z.len() != pair.h_dim() || p.theta.len() != pair.k_dim() {
            return Err(Error::Domain(format!("group point has wrong shape for {}", pair.id)));
        }
    }
    let inv: Vec<GroupPoint> = points.iter().map(|p| inverse(pair, p)).collect();
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = spherical_params(&sigma.params, &multiply(pair, &inv[i], &points[j]));
        }
    }
    let ev = hermitian_eigenvalues(&m, n);
    let (lo, hi) = (ev[0], ev[n - 1]);
    Ok(Report::decided("posdef", pair.id, tol, lo, lo >= -tol)
        .with("min_eigenvalue", lo)
        .with("max_eigenvalue", hi)
        .with("points", n)
        .with("xi", &sigma.xi))
}

/// Patch centres for [`verify_eigen`]; the identity comes first.
pub fn eigen_centers(pair: &PairDescriptor) -> Vec<GroupPoint> {
    let z: Vec<Vec<f64>> = match pair.id {
        PairId::FlatR1 => vec![vec![0.0], vec![0.9], vec![-2.3]],
        PairId::E2 | PairId::U1C => vec![vec![0.0, 0.0], vec![0.6, -0.3], vec![1.7, 1.1], vec![-2.4, 0.8]],
        PairId::Heis1 => vec![vec![0.0, 0.0, 0.0], vec![0.5, -0.3, 0.4], vec![1.2, 0.9, -1.1], vec![-2.0, 1.4, 2.5]],
    };
    z.into_iter().map(|z| GroupPoint { theta: vec![0.0; pair.k_dim()], z }).collect()
}

/// Axes of a stencil patch around `c` for generator `j`; only the axes the
/// generator differentiates get a full patch.
fn patch_axes(pair: &PairDescriptor, j: usize, c: &GroupPoint, h: f64, half: usize) -> Vec<Axis> {
    let around = |name: &str, x: f64| Axis::uniform(name, x - half as f64 * h, x + half as f64 * h, 2 * half + 1);
    let single = |name: &str, x: f64| Axis::uniform(name, x, x, 1);
    match (pair.id, j) {
        (PairId::FlatR1, _) => vec![around("x", c.z[0])],
        (PairId::E2, _) => vec![around("x", c.z[0]), around("y", c.z[1])],
        (PairId::U1C, 1) => vec![Axis::circle((2.0 * std::f64::consts::PI / h).ceil() as usize), single("x", c.z[0]), single("y", c.z[1])],
        (PairId::U1C, _) => vec![Axis::circle(3), around("x", c.z[0]), around("y", c.z[1])],
        (PairId::Heis1, 1) => vec![around("x", c.z[0]), around("y", c.z[1]), around("t", c.z[2])],
        (PairId::Heis1, _) => vec![single("x", c.z[0]), single("y", c.z[1]), around("t", c.z[2])],
    }
}

/// Relative interior residual ‖(D_j − ξ_j)φ‖∞ / ‖φ‖∞ for every generator,
/// sampled on stencil patches around [`eigen_centers`].
pub fn verify_eigen(pair: &PairDescriptor, sigma: &SpectrumPoint, step: f64, tol: f64) -> Result<Report, Error> {
    validate_params(pair, &sigma.params)?;
    if !(step > 0.0) || step > MAX_EIGEN_STEP {
        return Err(Error::Resolution(format!("step {step} is coarser than the limit {MAX_EIGEN_STEP}")));
    }
    let half = match EIGEN_ACCURACY {
        FdAccuracy::Second => 2,
        FdAccuracy::Fourth => 4,
    };
    let mut parts = Vec::new();
    for j in 1..=pair.ell {
        let (mut num, mut den) = (0.0f64, 0.0f64);
        for c in eigen_centers(pair) {
            let phi = SampledFunction::from_fn(pair.id, Symmetry::BiKInvariant, patch_axes(pair, j, &c, step, half), |x| {
                spherical_params(&sigma.params, x)
            })?;
            let d = apply_generator_with(pair, j, &phi, step, EIGEN_ACCURACY)?;
            for i in 0..phi.values.len() {
                if d.interior[i] {
                    num = num.max((d.function.values[i] - sigma.xi[j - 1] * phi.values[i]).norm());
                    den = den.max(phi.values[i].norm());
                }
            }
        }
        parts.push(
            Report::below("eigen", pair.id, tol, relative(num, den))
                .with("generator", pair.generator_names[j - 1])
                .with("eigenvalue", sigma.xi[j - 1])
                .with("step", step),
        );
    }
    Ok(Report::all("eigen", pair.id, tol, parts).with("xi", &sigma.xi))
}
