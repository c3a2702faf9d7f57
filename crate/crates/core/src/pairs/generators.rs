//! Finite-difference application of the generators D_j and of the
//! left-invariant frame.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{AxisKind, Grid, Layout, PairDescriptor, SampledFunction};
use crate::Error;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Accuracy order of the central stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FdAccuracy {
    #[default]
    Second,
    Fourth,
}

impl FdAccuracy {
    fn coefficients(self, deriv: u8) -> &'static [f64] {
        match (self, deriv) {
            (FdAccuracy::Second, 1) => &[-0.5, 0.0, 0.5],
            (FdAccuracy::Second, _) => &[1.0, -2.0, 1.0],
            (FdAccuracy::Fourth, 1) => &[1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0],
            (FdAccuracy::Fourth, _) => &[-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0],
        }
    }
}

/// Result of a finite-difference operator; `interior[i]` is false where the
/// stencil left the grid and the value is meaningless (set to 0).
#[derive(Debug, Clone)]
pub struct GeneratorOutput {
    pub function: SampledFunction,
    pub interior: Vec<bool>,
}

impl GeneratorOutput {
    pub fn interior_count(&self) -> usize {
        self.interior.iter().filter(|&&b| b).count()
    }
}

/// Values with a validity mask.
#[derive(Debug, Clone)]
pub(crate) struct Field {
    pub values: Vec<Complex64>,
    pub valid: Vec<bool>,
}

impl Field {
    pub fn from_function(f: &SampledFunction) -> Self {
        Self { values: f.values.clone(), valid: vec![true; f.values.len()] }
    }

    fn zip_with(&self, other: &Field, op: impl Fn(Complex64, Complex64) -> Complex64) -> Field {
        Field {
            values: self.values.iter().zip(&other.values).map(|(a, b)| op(*a, *b)).collect(),
            valid: self.valid.iter().zip(&other.valid).map(|(a, b)| *a && *b).collect(),
        }
    }

    /// Multiply pointwise by a real coordinate function.
    fn scale_by(&self, grid: &Grid, coef: impl Fn(&[usize]) -> f64 + Sync) -> Field {
        let values = self
            .values
            .par_iter()
            .enumerate()
            .map(|(i, v)| v * coef(&grid.unravel(i)))
            .collect();
        Field { values, valid: self.valid.clone() }
    }

    fn map(&self, op: impl Fn(Complex64) -> Complex64) -> Field {
        Field { values: self.values.iter().map(|v| op(*v)).collect(), valid: self.valid.clone() }
    }
}

type Trig = fn(f64) -> f64;

/// Spacing of `axis` after checking it is equispaced.
fn spacing(grid: &Grid, axis: usize) -> Result<f64, Error> {
    let a = &grid.axes()[axis];
    a.spacing().ok_or_else(|| Error::Grid(format!("axis '{}' is not equispaced", a.name)))
}

/// Central difference of order `deriv` (1 or 2) along `axis` with a stride
/// of `stride` nodes.
pub(crate) fn diff(grid: &Grid, src: &Field, axis: usize, deriv: u8, stride: usize, acc: FdAccuracy) -> Result<Field, Error> {
    let h = spacing(grid, axis)? * stride as f64;
    let coefs = acc.coefficients(deriv);
    let half = (coefs.len() / 2) as isize;
    let ax = &grid.axes()[axis];
    let n = ax.n as isize;
    let periodic = ax.kind == AxisKind::Periodic;
    let step = grid.strides()[axis] as isize;
    let scale = h.powi(deriv as i32);
    let stride = stride as isize;

    let (values, valid): (Vec<_>, Vec<_>) = (0..src.values.len())
        .into_par_iter()
        .map(|flat| {
            let i = (flat as isize / step) % n;
            let mut sum = Complex64::new(0.0, 0.0);
            for (c, &w) in coefs.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let mut j = i + (c as isize - half) * stride;
                if periodic {
                    j = j.rem_euclid(n);
                } else if j < 0 || j >= n {
                    return (Complex64::new(0.0, 0.0), false);
                }
                let nb = (flat as isize + (j - i) * step) as usize;
                if !src.valid[nb] {
                    return (Complex64::new(0.0, 0.0), false);
                }
                sum += src.values[nb] * w;
            }
            (sum / scale, true)
        })
        .unzip();
    Ok(Field { values, valid })
}

fn check_resolution(grid: &Grid, axes: &[usize], step: f64) -> Result<(), Error> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    for &a in axes {
        let h = spacing(grid, a)?;
        if h > step * (1.0 + 1e-9) {
            return Err(Error::Resolution(format!(
                "axis '{}' has spacing {h:.3e} coarser than the requested step {step:.3e}",
                grid.axes()[a].name
            )));
        }
    }
    Ok(())
}

fn coord(grid: &Grid, axis: usize) -> impl Fn(&[usize]) -> f64 + Sync + '_ {
    move |idx: &[usize]| grid.axis_nodes(axis)[idx[axis]]
}

/// −(f_rr + f_r / r), invalid at r = 0.
fn radial_laplacian(grid: &Grid, f: &Field, r_axis: usize, acc: FdAccuracy) -> Result<Field, Error> {
    let frr = diff(grid, f, r_axis, 2, 1, acc)?;
    let fr = diff(grid, f, r_axis, 1, 1, acc)?;
    let mut out = frr.zip_with(&fr.scale_by(grid, |idx| 1.0 / grid.axis_nodes(r_axis)[idx[r_axis]]), |a, b| -(a + b));
    for (i, ok) in out.valid.iter_mut().enumerate() {
        if grid.axis_nodes(r_axis)[grid.unravel(i)[r_axis]] <= 0.0 {
            *ok = false;
        }
    }
    Ok(out)
}

fn planar_laplacian(grid: &Grid, f: &Field, x: usize, y: usize, acc: FdAccuracy) -> Result<Field, Error> {
    let fxx = diff(grid, f, x, 2, 1, acc)?;
    let fyy = diff(grid, f, y, 2, 1, acc)?;
    Ok(fxx.zip_with(&fyy, |a, b| -(a + b)))
}

/// Applies D_j (1-based) with second-order central differences.
///
/// The finite-difference step is the grid spacing, which must not exceed
/// `step`. Generators per pair: flat_r1 and e2 −Δ; u1_c −i∂_θ, −Δ_z; heis1
/// the sublaplacian −(X² + Y²) and −i∂_t.
pub fn apply_generator(pair: &PairDescriptor, j: usize, f: &SampledFunction, step: f64) -> Result<GeneratorOutput, Error> {
    apply_generator_with(pair, j, f, step, FdAccuracy::Second)
}

pub fn apply_generator_with(
    pair: &PairDescriptor,
    j: usize,
    f: &SampledFunction,
    step: f64,
    acc: FdAccuracy,
) -> Result<GeneratorOutput, Error> {
    if f.pair != pair.id {
        return Err(Error::Domain(format!("function belongs to {}, not {}", f.pair, pair.id)));
    }
    if j == 0 || j > pair.ell {
        return Err(Error::Domain(format!("generator index {j} outside 1..={}", pair.ell)));
    }
    let grid = &f.grid;
    let src = Field::from_function(f);
    let layout = grid.layout();
    let out = match (layout, j) {
        (Layout::Line, 1) => {
            check_resolution(grid, &[0], step)?;
            diff(grid, &src, 0, 2, 1, acc)?.map(|v| -v)
        }
        (Layout::Radial, 1) | (Layout::CircleRadial, 2) => {
            let r = if layout == Layout::Radial { 0 } else { 1 };
            check_resolution(grid, &[r], step)?;
            radial_laplacian(grid, &src, r, acc)?
        }
        (Layout::Plane, 1) => {
            check_resolution(grid, &[0, 1], step)?;
            planar_laplacian(grid, &src, 0, 1, acc)?
        }
        (Layout::CirclePlane, 2) => {
            check_resolution(grid, &[1, 2], step)?;
            planar_laplacian(grid, &src, 1, 2, acc)?
        }
        (Layout::CircleRadial | Layout::CirclePlane, 1) => {
            check_resolution(grid, &[0], step)?;
            diff(grid, &src, 0, 1, 1, acc)?.map(|v| -I * v)
        }
        (Layout::Heisenberg, 1) => {
            check_resolution(grid, &[0, 1, 2], step)?;
            let fxx = diff(grid, &src, 0, 2, 1, acc)?;
            let fyy = diff(grid, &src, 1, 2, 1, acc)?;
            let ft = diff(grid, &src, 2, 1, 1, acc)?;
            let fxt = diff(grid, &ft, 0, 1, 1, acc)?;
            let fyt = diff(grid, &ft, 1, 1, 1, acc)?;
            let ftt = diff(grid, &src, 2, 2, 1, acc)?;
            // X² + Y² = Δ_z + y ∂x∂t − x ∂y∂t + |z|²/4 ∂t²
            let (x, y) = (coord(grid, 0), coord(grid, 1));
            fxx.zip_with(&fyy, |a, b| a + b)
                .zip_with(&fxt.scale_by(grid, &y), |a, b| a + b)
                .zip_with(&fyt.scale_by(grid, &x), |a, b| a - b)
                .zip_with(&ftt.scale_by(grid, |i| 0.25 * (x(i) * x(i) + y(i) * y(i))), |a, b| -(a + b))
        }
        (Layout::CentralRadial, 1) => {
            check_resolution(grid, &[0, 1], step)?;
            let lap = radial_laplacian(grid, &src, 0, acc)?;
            let ftt = diff(grid, &src, 1, 2, 1, acc)?;
            let r = coord(grid, 0);
            lap.zip_with(&ftt.scale_by(grid, |i| 0.25 * r(i) * r(i)), |a, b| a - b)
        }
        (Layout::Heisenberg | Layout::CentralRadial, 2) => {
            let t = if layout == Layout::Heisenberg { 2 } else { 1 };
            check_resolution(grid, &[t], step)?;
            diff(grid, &src, t, 1, 1, acc)?.map(|v| -I * v)
        }
        _ => return Err(Error::Unsupported(format!("generator {j} on layout {layout:?}"))),
    };
    finish(f, out)
}

fn finish(f: &SampledFunction, out: Field) -> Result<GeneratorOutput, Error> {
    if !out.valid.iter().any(|&v| v) {
        return Err(Error::Resolution("grid has no interior nodes for this stencil".into()));
    }
    let mut function = f.with_values(out.values);
    function.symmetry = f.symmetry.clone();
    Ok(GeneratorOutput { function, interior: out.valid })
}

/// Number of left-invariant frame fields on a layout (0 if unsupported).
pub fn frame_len(layout: Layout) -> usize {
    match layout {
        Layout::Line => 1,
        Layout::Plane => 2,
        Layout::CirclePlane | Layout::Heisenberg => 3,
        _ => 0,
    }
}

/// One frame field: ∂x | ∂x, ∂y | ∂θ, X, Y | X, Y, ∂t. On u1_c,
/// X = cos θ ∂x + sin θ ∂y and Y = −sin θ ∂x + cos θ ∂y.
pub(crate) fn frame_apply(grid: &Grid, src: &Field, field: usize, stride: usize, acc: FdAccuracy) -> Result<Field, Error> {
    let layout = grid.layout();
    if field >= frame_len(layout) {
        return Err(Error::Unsupported(format!("frame field {field} on layout {layout:?}")));
    }
    match layout {
        Layout::Heisenberg if field < 2 => {
            let d = diff(grid, src, field, 1, stride, acc)?;
            let dt = diff(grid, src, 2, 1, stride, acc)?;
            let (x, y) = (coord(grid, 0), coord(grid, 1));
            Ok(if field == 0 {
                d.zip_with(&dt.scale_by(grid, |i| 0.5 * y(i)), |a, b| a + b)
            } else {
                d.zip_with(&dt.scale_by(grid, |i| 0.5 * x(i)), |a, b| a - b)
            })
        }
        Layout::CirclePlane if field > 0 => {
            let dx = diff(grid, src, 1, 1, stride, acc)?;
            let dy = diff(grid, src, 2, 1, stride, acc)?;
            let th = coord(grid, 0);
            let (a, b): (Trig, Trig) = if field == 1 { (f64::cos, f64::sin) } else { (|t| -t.sin(), f64::cos) };
            Ok(dx.scale_by(grid, |i| a(th(i))).zip_with(&dy.scale_by(grid, |i| b(th(i))), |p, q| p + q))
        }
        _ => diff(grid, src, field, 1, stride, acc),
    }
}

/// Applies one left-invariant frame field with a stride of `stride` nodes.
pub fn frame_derivative(f: &SampledFunction, field: usize, stride: usize) -> Result<GeneratorOutput, Error> {
    finish(f, frame_apply(&f.grid, &Field::from_function(f), field, stride, FdAccuracy::Second)?)
}
