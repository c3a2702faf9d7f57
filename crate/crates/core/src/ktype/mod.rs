//! K-types for the torus K of a strong pair: projections, decomposition
//! and the scalar A/S realization of the per-type algebra.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::pairs::{group_convolve, is_c4_symmetric, Layout, PairDescriptor, SampledFunction, Symmetry};
use crate::{Error, Report};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Relative tolerance of the quarter-turn test for K-centrality on Cartesian grids.
const CENTRAL_TOL: f64 = 1e-9;

/// A K-type m ∈ ℤ^r and its embedding coordinates ξ′.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KTypeIndex {
    pub m: Vec<i64>,
    pub xi_prime: Vec<f64>,
}

impl KTypeIndex {
    pub fn new(pair: &PairDescriptor, m: &[i64]) -> Result<Self, Error> {
        Ok(KTypeIndex { m: m.to_vec(), xi_prime: xi_prime_map(pair, m)? })
    }

    /// |μ_τ|² = Σ m_j².
    pub fn norm_sq(&self) -> i64 {
        self.m.iter().map(|m| m * m).sum()
    }

    pub fn xi_prime_norm(&self) -> f64 {
        self.xi_prime.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

fn require_strong(pair: &PairDescriptor) -> Result<(), Error> {
    if !pair.strong {
        return Err(Error::Unsupported(format!("{} is not a strong Gelfand pair; K-types need K-central algebras", pair.id)));
    }
    Ok(())
}

/// ξ′ for type m: the eigenvalues of −i∂_{θ_j} on e^{im·θ}.
pub fn xi_prime_map(pair: &PairDescriptor, m: &[i64]) -> Result<Vec<f64>, Error> {
    require_strong(pair)?;
    if m.len() != pair.k_dim() {
        return Err(Error::Domain(format!("{} has K of rank {}, got a type of length {}", pair.id, pair.k_dim(), m.len())));
    }
    Ok(m.iter().map(|&m| m as f64).collect())
}

/// Checks C(1+|m|²) ≤ 1 + |ξ′| + |m|² ≤ C′(1+|m|²)^d over |m| ≤ max_m and
/// reports the tightest constants seen.
pub fn xi_prime_inequality(pair: &PairDescriptor, max_m: i64, d: u32) -> Result<Report, Error> {
    require_strong(pair)?;
    if pair.k_dim() != 1 {
        return Err(Error::Unsupported("enumeration is implemented for rank-one K".into()));
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for m in -max_m..=max_m {
        let t = KTypeIndex::new(pair, &[m])?;
        let base = 1.0 + t.norm_sq() as f64;
        let mid = 1.0 + t.xi_prime_norm() + t.norm_sq() as f64;
        lo = lo.min(mid / base);
        hi = hi.max(mid / base.powi(d as i32));
    }
    let ok = lo > 0.0 && hi.is_finite();
    Ok(Report::decided("xi_prime_inequality", pair.id, 0.0, lo, ok)
        .with("c_lower", lo)
        .with("c_upper", hi)
        .with("d", d)
        .with("max_m", max_m))
}

/// Type of a tagged function, if it is a single type.
fn tagged_type(f: &SampledFunction) -> Option<Vec<i64>> {
    match &f.symmetry {
        Symmetry::BiKInvariant => Some(vec![0; f.descriptor().k_dim()]),
        Symmetry::KType(m) => Some(m.clone()),
        Symmetry::KCentral => None,
    }
}

/// Checks the preconditions shared by the projections and returns
/// (nθ, number of z-nodes per θ-slice).
fn circle_shape(pair: &PairDescriptor, f: &SampledFunction) -> Result<(usize, usize), Error> {
    require_strong(pair)?;
    if f.pair != pair.id {
        return Err(Error::Domain(format!("function belongs to {}, not {}", f.pair, pair.id)));
    }
    if !f.layout().has_circle() {
        return Err(Error::Grid(format!("K-types need a theta axis, got layout {:?}", f.layout())));
    }
    if f.layout() == Layout::CirclePlane && !is_c4_symmetric(f, CENTRAL_TOL)? {
        return Err(Error::Type("function is not K-central: a theta slice is not quarter-turn invariant".into()));
    }
    let n = f.grid.axes()[0].n;
    Ok((n, f.grid.len() / n))
}

fn check_alias(n: usize, m: i64) -> Result<(), Error> {
    if 2 * m.unsigned_abs() as usize + 1 > n {
        return Err(Error::Grid(format!("{n} theta nodes cannot resolve type {m}; need at least {}", 2 * m.abs() + 1)));
    }
    Ok(())
}

fn type_symmetry(m: i64) -> Symmetry {
    if m == 0 {
        Symmetry::BiKInvariant
    } else {
        Symmetry::KType(vec![m])
    }
}

/// e^{imθ}·(1/n)Σ_k f(θ_k, z)e^{−imθ_k}: the trapezoid rule on the torus,
/// exact for trigonometric polynomials of degree < n − |m|.
fn project_values(f: &SampledFunction, n: usize, stride: usize, m: i64) -> Vec<Complex64> {
    let th = f.grid.axis_nodes(0);
    let e: Vec<Complex64> = th.iter().map(|&t| Complex64::from_polar(1.0, m as f64 * t)).collect();
    let mut out = vec![ZERO; f.values.len()];
    for j in 0..stride {
        let c: Complex64 = (0..n).map(|k| f.values[k * stride + j] * e[k].conj()).sum::<Complex64>() / n as f64;
        for k in 0..n {
            out[k * stride + j] = e[k] * c;
        }
    }
    out
}

/// f_m(x) = ∫_K f(xk⁻¹) e^{im·θ(k)} dk on the sampled θ-circle.
pub fn project_ktype(pair: &PairDescriptor, f: &SampledFunction, m: &[i64]) -> Result<SampledFunction, Error> {
    let (n, stride) = circle_shape(pair, f)?;
    xi_prime_map(pair, m)?;
    check_alias(n, m[0])?;
    let mut out = f.with_values(project_values(f, n, stride, m[0])).with_symmetry(type_symmetry(m[0]));
    out.warnings = f.warnings.clone();
    Ok(out)
}

/// One type of a decomposition.
#[derive(Debug, Clone)]
pub struct TypeComponent {
    pub index: KTypeIndex,
    pub function: SampledFunction,
    pub l2_norm: f64,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub max_type: i64,
    pub components: Vec<TypeComponent>,
    /// ‖f − Σ f_m‖₂.
    pub tail_norm: f64,
    pub l2_norm: f64,
}

impl Decomposition {
    pub fn relative_tail(&self) -> f64 {
        if self.l2_norm == 0.0 {
            0.0
        } else {
            self.tail_norm / self.l2_norm
        }
    }

    /// Sum of the retained components.
    pub fn partial_sum(&self) -> Option<SampledFunction> {
        let mut it = self.components.iter();
        let first = it.next()?.function.clone();
        let one = Complex64::new(1.0, 0.0);
        Some(it.fold(first, |acc, c| acc.combine(one, &c.function, one).expect("components share a grid")).with_symmetry(Symmetry::KCentral))
    }

    /// Types at the truncation edge that still carry mass above `rel` of ‖f‖₂.
    pub fn tail_flag(&self, c: &TypeComponent, rel: f64) -> bool {
        c.index.m.iter().any(|m| m.abs() == self.max_type) && c.l2_norm > rel * self.l2_norm
    }

    /// Index CSV with columns m, l2_norm, tail_flag.
    pub fn index_csv(&self, rel: f64) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["m", "l2_norm", "tail_flag"]).expect("in-memory write");
        for c in &self.components {
            let m = c.index.m.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ");
            w.write_record([m, format!("{:e}", c.l2_norm), self.tail_flag(c, rel).to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 csv")
    }
}

/// All types with |m|∞ ≤ max_type, plus the L² norm of the remainder.
pub fn decompose(pair: &PairDescriptor, f: &SampledFunction, max_type: u32) -> Result<Decomposition, Error> {
    let (n, stride) = circle_shape(pair, f)?;
    let max_type = max_type as i64;
    check_alias(n, max_type)?;
    let mut components: Vec<TypeComponent> = (-max_type..=max_type)
        .into_par_iter()
        .map(|m| {
            let g = f.with_values(project_values(f, n, stride, m)).with_symmetry(type_symmetry(m));
            let l2_norm = g.l2_norm();
            Ok(TypeComponent { index: KTypeIndex::new(pair, &[m])?, function: g, l2_norm })
        })
        .collect::<Result<_, Error>>()?;
    components.sort_by_key(|c| (c.index.m[0].abs(), c.index.m[0]));
    let mut rest = f.values.clone();
    for c in &components {
        for (r, v) in rest.iter_mut().zip(&c.function.values) {
            *r -= v;
        }
    }
    let tail_norm = f.with_values(rest).l2_norm();
    Ok(Decomposition { max_type, components, tail_norm, l2_norm: f.l2_norm() })
}

/// ‖f_m ∗ g_m′‖∞ / (‖f_m‖∞‖g_m′‖∞) for two functions of different types.
pub fn verify_type_orthogonality(pair: &PairDescriptor, f: &SampledFunction, g: &SampledFunction, tol: f64) -> Result<Report, Error> {
    require_strong(pair)?;
    let (Some(a), Some(b)) = (tagged_type(f), tagged_type(g)) else {
        return Err(Error::Type("both operands must be tagged with a single K-type".into()));
    };
    if a == b {
        return Ok(Report::not_applicable("ktype_orthogonality", pair.id, "operands have the same K-type").with("m", &a));
    }
    let fg = group_convolve(pair, f, g)?;
    let scale = f.sup_norm() * g.sup_norm();
    let observed = if scale == 0.0 { 0.0 } else { fg.sup_norm() / scale };
    let mut r = Report::below("ktype_orthogonality", pair.id, tol, observed).with("m", &a).with("m_prime", &b).with("sup_convolution", fg.sup_norm());
    for w in fg.warnings {
        r = r.note(w);
    }
    Ok(r)
}

/// A_m f(x) = ∫_K f(xk) e^{−im·θ(k)} dk; scalar since d_τ = 1.
pub fn a_map(pair: &PairDescriptor, f: &SampledFunction, m: &[i64]) -> Result<SampledFunction, Error> {
    // xk shifts θ forward, so this is the same quadrature as the projection.
    project_ktype(pair, f, m)
}

/// S_m F = d_τ tr F, the identity on scalars.
pub fn s_map(f: &SampledFunction) -> SampledFunction {
    f.clone()
}

/// Left and right K-translation of `a` on the grid: values at k_{φ₁} x k_{φ₂}
/// with φ₁ = s₁·Δθ, φ₂ = s₂·Δθ. On Cartesian grids φ₁ must be a quarter turn.
fn translated(a: &SampledFunction, s1: usize, s2: usize) -> Result<Vec<Complex64>, Error> {
    let n = a.grid.axes()[0].n;
    let stride = a.grid.len() / n;
    let rot: Vec<usize> = match a.layout() {
        Layout::CircleRadial => (0..stride).collect(),
        Layout::CirclePlane => {
            let ny = a.grid.axes()[2].n;
            let last = ny - 1;
            // (x_i, y_j) ↦ (−y_j, x_i) = (x_{last−j}, y_i)
            (0..stride).map(|p| (last - p % ny) * ny + p / ny).collect()
        }
        l => return Err(Error::Grid(format!("no K-action on layout {l:?}"))),
    };
    let mut out = vec![ZERO; a.values.len()];
    for k in 0..n {
        let kk = (k + s1 + s2) % n;
        for p in 0..stride {
            out[k * stride + p] = a.values[kk * stride + rot[p]];
        }
    }
    Ok(out)
}

/// S_m A_m f = f on type-m input (A_m f ≡ 0 otherwise) and the scalar
/// equivariance A_m f(k₁xk₂) = τ(k₂⁻¹)A_m f(x)τ(k₁⁻¹) with τ(k_φ) = e^{−imφ}.
pub fn scalar_a_s_roundtrip(pair: &PairDescriptor, f: &SampledFunction, m: &[i64], tol: f64) -> Result<Report, Error> {
    let a = a_map(pair, f, m)?;
    let sup = f.sup_norm();
    let rel = |d: f64| if sup == 0.0 { d } else { d / sup };
    let matches = tagged_type(f).as_deref() == Some(m);
    let first = if matches {
        let back = s_map(&a);
        let d = back.values.iter().zip(&f.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        Report::below("a_s_roundtrip", pair.id, tol, rel(d))
    } else {
        Report::below("a_type_mismatch", pair.id, tol, rel(a.sup_norm())).note("input is not of the requested type; A_m f must vanish")
    };
    let n = f.grid.axes()[0].n;
    let (s1, s2) = match f.layout() {
        Layout::CirclePlane if n.is_multiple_of(4) => (n / 4, 1),
        Layout::CirclePlane => {
            return Ok(Report::all("a_s", pair.id, tol, vec![first]).note("equivariance skipped: theta nodes do not contain a quarter turn"))
        }
        _ => (1, 1),
    };
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let phase = Complex64::from_polar(1.0, m[0] as f64 * (s1 + s2) as f64 * step);
    let moved = translated(&a, s1, s2)?;
    let d = moved.iter().zip(&a.values).map(|(x, y)| (x - phase * y).norm()).fold(0.0, f64::max);
    let eq = Report::below("equivariance", pair.id, tol, rel(d)).with("phi_left", s1 as f64 * step).with("phi_right", s2 as f64 * step);
    Ok(Report::all("a_s", pair.id, tol, vec![first, eq]).with("m", m))
}
