//! Direct group convolution (f ∗ g)(x) = ∫_G f(xy⁻¹) g(y) dy on lattice grids.
//!
//! For right-K-invariant functions sampled on H the group integral reduces to
//! planar convolutions:
//!
//! * flat_r1: ordinary convolution on ℝ.
//! * e2: f ∗_ℝ² ḡ where ḡ is the K-average of g. The average is taken over
//!   the quarter turns, which map the lattice to itself; this is exact for
//!   radial g and still detects non-radial f.
//! * u1_c (K-central inputs): circular convolution in θ times planar
//!   convolution in z.
//! * heis1: twisted convolution, f(u−v, s−τ−½Im(u v̄)) g(v, τ), evaluated by
//!   a DFT along t with the t-grid treated as periodic.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use super::{Layout, PairDescriptor, SampledFunction, Symmetry};
use crate::Error;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Relative boundary size above which a truncation warning is attached.
const TRUNCATION_WARN: f64 = 1e-12;

/// Planar lattice geometry: sizes and the index of the origin.
#[derive(Debug, Clone, Copy)]
struct Lattice {
    nx: usize,
    ny: usize,
    cx: usize,
    cy: usize,
}

fn origin_index(f: &SampledFunction, axis: usize) -> Result<usize, Error> {
    let a = &f.grid.axes()[axis];
    let h = a
        .spacing()
        .ok_or_else(|| Error::Grid(format!("convolution needs a uniform '{}' axis", a.name)))?;
    let c = -a.min / h;
    let ci = c.round();
    if (c - ci).abs() > 1e-9 || ci < 0.0 || ci >= a.n as f64 {
        return Err(Error::Grid(format!("axis '{}': the origin must be a grid node", a.name)));
    }
    Ok(ci as usize)
}

/// out[u][k] = Σ_v f[u − v][k] · g[v][k] · phase(u, v)[k], channels last.
fn lattice_convolve<P>(lat: Lattice, nk: usize, f: &[Complex64], g: &[Complex64], phase: Option<P>) -> Vec<Complex64>
where
    P: Fn(usize, usize, &mut [Complex64]) + Sync,
{
    let Lattice { nx, ny, cx, cy } = lat;
    let mut out = vec![ZERO; nx * ny * nk];
    out.par_chunks_mut(nk).enumerate().for_each(|(u, acc)| {
        let (ux, uy) = (u / ny, u % ny);
        let mut ph = vec![Complex64::new(1.0, 0.0); nk];
        for vx in 0..nx {
            let sx = ux as isize - vx as isize + cx as isize;
            if sx < 0 || sx >= nx as isize {
                continue;
            }
            for vy in 0..ny {
                let sy = uy as isize - vy as isize + cy as isize;
                if sy < 0 || sy >= ny as isize {
                    continue;
                }
                let fs = &f[(sx as usize * ny + sy as usize) * nk..][..nk];
                let v = vx * ny + vy;
                let gs = &g[v * nk..][..nk];
                match &phase {
                    Some(p) => {
                        p(u, v, &mut ph);
                        for k in 0..nk {
                            acc[k] += fs[k] * gs[k] * ph[k];
                        }
                    }
                    None => {
                        for k in 0..nk {
                            acc[k] += fs[k] * gs[k];
                        }
                    }
                }
            }
        }
    });
    out
}

/// Planar measure weights w_x w_y, flattened.
fn planar_weights(f: &SampledFunction, x: usize, y: usize) -> Vec<f64> {
    let (wx, wy) = (f.grid.axis_weights(x), f.grid.axis_weights(y));
    wx.iter().flat_map(|a| wy.iter().map(move |b| a * b)).collect()
}

/// Quarter-turn average on a square grid symmetric about the origin.
fn c4_average(vals: &[Complex64], n: usize) -> Vec<Complex64> {
    let m = n - 1;
    let mut out = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = 0.25 * (vals[i * n + j] + vals[(m - j) * n + i] + vals[(m - i) * n + m - j] + vals[j * n + m - i]);
        }
    }
    out
}

fn square_symmetric(f: &SampledFunction, x: usize, y: usize) -> Result<usize, Error> {
    let (ax, ay) = (&f.grid.axes()[x], &f.grid.axes()[y]);
    let sym = |a: &super::Axis| (a.min + a.max).abs() <= 1e-12 * a.max.abs().max(1.0);
    if ax.n != ay.n || ax.min != ay.min || ax.max != ay.max || !sym(ax) || ax.kind != super::AxisKind::Uniform {
        return Err(Error::Grid("K-averaging needs identical uniform x and y axes symmetric about 0".into()));
    }
    Ok(ax.n)
}

/// Whether every planar slice is invariant under quarter turns, to a
/// relative tolerance. This is the lattice form of K-centrality.
pub fn is_c4_symmetric(f: &SampledFunction, rel_tol: f64) -> Result<bool, Error> {
    let (x, slices) = match f.layout() {
        Layout::Plane => (0, 1),
        Layout::CirclePlane => (1, f.grid.axes()[0].n),
        Layout::Radial | Layout::CircleRadial => return Ok(true),
        l => return Err(Error::Unsupported(format!("quarter-turn check on layout {l:?}"))),
    };
    let n = square_symmetric(f, x, x + 1)?;
    let tol = rel_tol * f.sup_norm();
    for s in 0..slices {
        let slice = &f.values[s * n * n..][..n * n];
        let avg = c4_average(slice, n);
        if slice.iter().zip(&avg).any(|(a, b)| (a - b).norm() > tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn truncation_warnings(f: &SampledFunction, g: &SampledFunction) -> Vec<String> {
    let mut w = Vec::new();
    for (name, h) in [("f", f), ("g", g)] {
        let sup = h.sup_norm();
        let b = h.boundary_max();
        if sup > 0.0 && b > TRUNCATION_WARN * sup {
            w.push(format!(
                "truncation: {name} reaches {:.3e} of its sup on the boundary (radius {})",
                b / sup,
                h.truncation
            ));
        }
    }
    w
}

fn dft_along(data: &mut [Complex64], n: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    fft.process(data);
}

/// Group convolution f ∗ g on a shared Cartesian grid.
pub fn group_convolve(pair: &PairDescriptor, f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction, Error> {
    if f.pair != pair.id || g.pair != pair.id {
        return Err(Error::Grid(format!("operands must be sampled on {}", pair.id)));
    }
    if !f.same_grid(g) {
        return Err(Error::Grid("operands are sampled on different grids".into()));
    }
    let layout = f.layout();
    let values = match layout {
        Layout::Line => {
            let lat = Lattice { nx: f.grid.axes()[0].n, ny: 1, cx: origin_index(f, 0)?, cy: 0 };
            let gw: Vec<_> = g.values.iter().zip(f.grid.axis_weights(0)).map(|(v, w)| v * w).collect();
            lattice_convolve::<fn(usize, usize, &mut [Complex64])>(lat, 1, &f.values, &gw, None)
        }
        Layout::Plane => {
            let n = square_symmetric(f, 0, 1)?;
            let lat = Lattice { nx: n, ny: n, cx: origin_index(f, 0)?, cy: origin_index(f, 1)? };
            let w = planar_weights(f, 0, 1);
            let gw: Vec<_> = c4_average(&g.values, n).iter().zip(&w).map(|(v, w)| v * w).collect();
            lattice_convolve::<fn(usize, usize, &mut [Complex64])>(lat, 1, &f.values, &gw, None)
        }
        Layout::CirclePlane => circle_plane(f, g)?,
        Layout::Heisenberg => heisenberg(f, g)?,
        l => return Err(Error::Unsupported(format!("convolution needs a Cartesian grid, got layout {l:?}"))),
    };
    let symmetry = match (&f.symmetry, &g.symmetry) {
        (Symmetry::BiKInvariant, Symmetry::BiKInvariant) => Symmetry::BiKInvariant,
        (Symmetry::KType(a), Symmetry::KType(b)) if a == b => Symmetry::KType(a.clone()),
        (Symmetry::BiKInvariant, s) | (s, Symmetry::BiKInvariant) if layout == Layout::CirclePlane => s.clone(),
        _ => Symmetry::KCentral,
    };
    let mut out = f.with_values(values).with_symmetry(symmetry);
    out.warnings = truncation_warnings(f, g);
    Ok(out)
}

fn circle_plane(f: &SampledFunction, g: &SampledFunction) -> Result<Vec<Complex64>, Error> {
    for (name, h) in [("f", f), ("g", g)] {
        if !is_c4_symmetric(h, 1e-9)? {
            return Err(Error::Type(format!("{name} is not K-central (slices are not rotation invariant)")));
        }
    }
    let nt = f.grid.axes()[0].n;
    let n = square_symmetric(f, 1, 2)?;
    let lat = Lattice { nx: n, ny: n, cx: origin_index(f, 1)?, cy: origin_index(f, 2)? };
    let w = planar_weights(f, 1, 2);
    // θ-major → channels last, then DFT along θ per planar node.
    let modes = |h: &SampledFunction, weighted: bool| {
        let mut out = vec![ZERO; n * n * nt];
        for it in 0..nt {
            for p in 0..n * n {
                let s = if weighted { w[p] } else { 1.0 };
                out[p * nt + it] = h.values[it * n * n + p] * s;
            }
        }
        out.chunks_mut(nt).for_each(|c| dft_along(c, nt, false));
        out
    };
    let (fm, gm) = (modes(f, false), modes(g, true));
    let mut conv = lattice_convolve::<fn(usize, usize, &mut [Complex64])>(lat, nt, &fm, &gm, None);
    let scale = 1.0 / (nt * nt) as f64;
    let mut values = vec![ZERO; n * n * nt];
    for (p, c) in conv.chunks_mut(nt).enumerate() {
        dft_along(c, nt, true);
        for it in 0..nt {
            values[it * n * n + p] = c[it] * scale;
        }
    }
    Ok(values)
}

fn heisenberg(f: &SampledFunction, g: &SampledFunction) -> Result<Vec<Complex64>, Error> {
    let (ax, ay, at) = (&f.grid.axes()[0], &f.grid.axes()[1], &f.grid.axes()[2]);
    let lat = Lattice { nx: ax.n, ny: ay.n, cx: origin_index(f, 0)?, cy: origin_index(f, 1)? };
    let nt = at.n;
    let ht = at
        .spacing()
        .ok_or_else(|| Error::Grid("convolution needs a uniform 't' axis".into()))?;
    let omega = 2.0 * PI / (nt as f64 * ht);
    let w = planar_weights(f, 0, 1);
    let mut fm = f.values.clone();
    fm.chunks_mut(nt).for_each(|c| dft_along(c, nt, false));
    let mut gm: Vec<_> = g.values.iter().enumerate().map(|(i, v)| v * w[i / nt]).collect();
    gm.chunks_mut(nt).for_each(|c| dft_along(c, nt, false));

    let (xs, ys) = (f.grid.axis_nodes(0), f.grid.axis_nodes(1));
    let ny = ay.n;
    let t0 = at.min;
    // Channels use signed frequencies in (−n/2, n/2]; on an even grid the
    // Nyquist channel gets the one-sided phase.
    let phase = |u: usize, v: usize, out: &mut [Complex64]| {
        let (ux, uy) = (xs[u / ny], ys[u % ny]);
        let (vx, vy) = (xs[v / ny], ys[v % ny]);
        let delta = 0.5 * (uy * vx - ux * vy);
        let base = Complex64::from_polar(1.0, -omega * (t0 + delta));
        let mut p = Complex64::new(1.0, 0.0);
        out[0] = p;
        for k in 1..=nt / 2 {
            p *= base;
            out[k] = p;
            if nt - k > nt / 2 {
                out[nt - k] = p.conj();
            }
        }
    };
    let mut conv = lattice_convolve(lat, nt, &fm, &gm, Some(phase));
    let scale = ht / nt as f64;
    conv.chunks_mut(nt).for_each(|c| {
        dft_along(c, nt, true);
        c.iter_mut().for_each(|v| *v *= scale);
    });
    Ok(conv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::{Axis, PairId};

    fn gauss(s: f64) -> impl Fn(&crate::pairs::GroupPoint) -> Complex64 + Sync {
        move |p| Complex64::new((-0.5 * s * p.planar_norm().powi(2)).exp(), 0.0)
    }

    #[test]
    fn line_gaussians() {
        let p = PairId::FlatR1.descriptor();
        let f = SampledFunction::from_fn(PairId::FlatR1, Symmetry::BiKInvariant, vec![Axis::centered("x", 200, 0.05)], gauss(1.0))
            .unwrap();
        let c = group_convolve(&p, &f, &f).unwrap();
        // e^{−x²/2} ∗ e^{−x²/2} = √π e^{−x²/4}
        for (i, &x) in c.grid.axis_nodes(0).iter().enumerate().step_by(23) {
            assert!((c.values[i].re - PI.sqrt() * (-0.25 * x * x).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn heisenberg_central_functions_convolve_classically() {
        // Functions of t alone are central: the twist integrates out.
        let p = PairId::Heis1.descriptor();
        let axes = || vec![Axis::centered("x", 20, 0.4), Axis::centered("y", 20, 0.4), Axis::centered("t", 20, 0.4)];
        let f = SampledFunction::from_fn(PairId::Heis1, Symmetry::BiKInvariant, axes(), |x| {
            Complex64::new((-0.5 * (x.planar_norm().powi(2) + x.z[2] * x.z[2])).exp(), 0.0)
        })
        .unwrap();
        let a = group_convolve(&p, &f, &f).unwrap();
        let b = group_convolve(&p, &f, &f.with_values(f.values.clone())).unwrap();
        assert_eq!(a.values, b.values);
        // At the identity the twist vanishes on the diagonal: (f∗f)(0) = ∫ f(−v,−τ) f(v,τ) = ‖f‖² for even f.
        let centre = a.grid.ravel(&[20, 20, 20]);
        assert!((a.values[centre].re - PI.powf(1.5)).abs() < 1e-6, "{}", a.values[centre]);
    }

    #[test]
    fn u1c_rejects_non_central_input() {
        let p = PairId::U1C.descriptor();
        let axes = || vec![Axis::circle(8), Axis::centered("x", 6, 0.5), Axis::centered("y", 6, 0.5)];
        let f = SampledFunction::from_fn(PairId::U1C, Symmetry::KCentral, axes(), |x| Complex64::new((-(x.z[0] - 1.0).powi(2)).exp(), 0.0))
            .unwrap();
        assert!(matches!(group_convolve(&p, &f, &f), Err(Error::Type(_))));
    }

    #[test]
    fn origin_must_be_on_lattice() {
        let p = PairId::FlatR1.descriptor();
        let f = SampledFunction::from_fn(PairId::FlatR1, Symmetry::BiKInvariant, vec![Axis::uniform("x", -1.05, 1.0, 40)], gauss(1.0))
            .unwrap();
        assert!(matches!(group_convolve(&p, &f, &f), Err(Error::Grid(_))));
    }
}
