//! Functions on uniform grids in ℝ^d and their Schwartz seminorms
//! ‖u‖_(N) = sup_ξ sup_{|α|≤N} (1+|ξ|)^N |∂^α u(ξ)|.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Share of the seminorm the Richardson error estimate may reach before the
/// grid is declared too coarse.
pub const RESOLUTION_SHARE: f64 = 0.1;
/// Highest derivative order the stencils support.
pub const MAX_ORDER: u32 = 4;

/// Nodes min + i·step, i = 0..n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclidAxis {
    pub min: f64,
    pub step: f64,
    pub n: usize,
}

impl EuclidAxis {
    pub fn new(min: f64, step: f64, n: usize) -> Result<Self, Error> {
        if !(step > 0.0 && step.is_finite() && min.is_finite()) || n == 0 {
            return Err(Error::Grid(format!("bad axis: min {min}, step {step}, n {n}")));
        }
        Ok(Self { min, step, n })
    }

    /// Integer range [lo, hi] subdivided `sub` times per unit. `sub` must be a
    /// power of two so that every integer is hit exactly.
    pub fn lattice(lo: i64, hi: i64, sub: u32) -> Result<Self, Error> {
        if !sub.is_power_of_two() {
            return Err(Error::InvalidSpec(format!("subdivision {sub} is not a power of two")));
        }
        if hi < lo {
            return Err(Error::Grid(format!("empty lattice range [{lo}, {hi}]")));
        }
        Self::new(lo as f64, 1.0 / sub as f64, (hi - lo) as usize * sub as usize + 1)
    }

    pub fn node(&self, i: usize) -> f64 {
        self.min + i as f64 * self.step
    }

    pub fn max(&self) -> f64 {
        self.node(self.n - 1)
    }
}

/// Complex values on a row-major product grid (last axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EuclidFunction {
    pub axes: Vec<EuclidAxis>,
    pub values: Vec<Complex64>,
}

impl EuclidFunction {
    pub fn new(axes: Vec<EuclidAxis>, values: Vec<Complex64>) -> Result<Self, Error> {
        let n: usize = axes.iter().map(|a| a.n).product();
        if axes.is_empty() || n != values.len() {
            return Err(Error::Grid(format!("{} values for a grid of {n} nodes", values.len())));
        }
        Ok(Self { axes, values })
    }

    pub fn from_fn(axes: Vec<EuclidAxis>, f: impl Fn(&[f64]) -> Complex64 + Sync) -> Result<Self, Error> {
        let n: usize = axes.iter().map(|a| a.n).product();
        let probe = Self { axes, values: Vec::new() };
        let values = (0..n).into_par_iter().map(|i| f(&probe.point(i))).collect();
        Self::new(probe.axes, values)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dim()];
        for a in (0..self.dim().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.axes[a + 1].n;
        }
        s
    }

    pub fn index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = flat % self.axes[a].n;
            flat /= self.axes[a].n;
        }
        idx
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.index(flat).iter().zip(&self.axes).map(|(&i, a)| a.node(i)).collect()
    }

    /// Value at the node nearest to `x`, if `x` is a node to within 1e-12 of the step.
    pub fn at(&self, x: &[f64]) -> Option<Complex64> {
        let mut flat = 0;
        for ((a, &x), s) in self.axes.iter().zip(x).zip(self.strides()) {
            let i = ((x - a.min) / a.step).round();
            if i < 0.0 || i as usize >= a.n || (a.node(i as usize) - x).abs() > 1e-12 * a.step {
                return None;
            }
            flat += i as usize * s;
        }
        Some(self.values[flat])
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// CSV with columns xi_1..xi_d, value_re, value_im.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut head: Vec<String> = (1..=self.dim()).map(|i| format!("xi_{i}")).collect();
        head.extend(["value_re".into(), "value_im".into()]);
        w.write_record(&head).expect("in-memory write");
        for (i, v) in self.values.iter().enumerate() {
            let mut row: Vec<String> = self.point(i).iter().map(|x| format!("{x:e}")).collect();
            row.extend([format!("{:e}", v.re), format!("{:e}", v.im)]);
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 csv")
    }
}

/// Second-order central stencil for the k-th derivative, offsets −half..=half.
fn central(k: u32) -> &'static [f64] {
    match k {
        1 => &[-0.5, 0.0, 0.5],
        2 => &[1.0, -2.0, 1.0],
        3 => &[-0.5, 1.0, 0.0, -1.0, 0.5],
        4 => &[1.0, -4.0, 6.0, -4.0, 1.0],
        _ => unreachable!("derivative order checked by caller"),
    }
}

/// Second-order forward stencil, offsets 0, 1, 2, …
fn forward(k: u32) -> &'static [f64] {
    match k {
        1 => &[-1.5, 2.0, -0.5],
        2 => &[2.0, -5.0, 4.0, -1.0],
        3 => &[-2.5, 9.0, -12.0, 7.0, -1.5],
        4 => &[3.0, -14.0, 26.0, -24.0, 11.0, -2.0],
        _ => unreachable!("derivative order checked by caller"),
    }
}

/// k-th derivative along `axis` with nodes `stride` apart; one-sided near
/// the ends of the axis.
fn derivative(u: &EuclidFunction, values: &[Complex64], axis: usize, k: u32, stride: usize) -> Result<Vec<Complex64>, Error> {
    if k == 0 {
        return Ok(values.to_vec());
    }
    let a = u.axes[axis];
    let (c, f) = (central(k), forward(k));
    if a.n < (f.len() - 1) * stride + 1 {
        return Err(Error::Grid(format!("axis {axis} has {} nodes, too few for a derivative of order {k}", a.n)));
    }
    let step = u.strides()[axis];
    let half = c.len() / 2;
    let scale = (a.step * stride as f64).powi(k as i32);
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok((0..values.len())
        .into_par_iter()
        .map(|flat| {
            let i = (flat / step) % a.n;
            let base = flat - i * step;
            let at = |j: usize| values[base + j * step];
            let sum: Complex64 = if i >= half * stride && i + half * stride < a.n {
                c.iter().enumerate().map(|(o, w)| at(i + o * stride - half * stride) * w).sum()
            } else if i < half * stride {
                f.iter().enumerate().map(|(o, w)| at(i + o * stride) * w).sum()
            } else {
                f.iter().enumerate().map(|(o, w)| at(i - o * stride) * (w * sign)).sum()
            };
            sum / scale
        })
        .collect())
}

/// Multi-indices of R^d with |α| ≤ n.
pub(crate) fn multi_indices(d: usize, n: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                let used: u32 = p.iter().sum();
                (0..=n - used).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out
}

fn apply(u: &EuclidFunction, alpha: &[u32], stride: usize) -> Result<Vec<Complex64>, Error> {
    let mut v = u.values.clone();
    for (axis, &k) in alpha.iter().enumerate() {
        v = derivative(u, &v, axis, k, stride)?;
    }
    Ok(v)
}

/// Seminorms for N = 0..=n_max. Orders up to `checked` must pass the
/// Richardson resolution test: the estimated discretization error of the
/// weighted derivatives stays below [`RESOLUTION_SHARE`] of the seminorm.
pub(crate) fn seminorm_table(u: &EuclidFunction, n_max: u32, checked: u32) -> Result<Vec<f64>, Error> {
    if n_max > MAX_ORDER {
        return Err(Error::Domain(format!("seminorm order {n_max} exceeds {MAX_ORDER}")));
    }
    let radius: Vec<f64> = (0..u.len()).map(|i| u.point(i).iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let mut value = vec![0.0f64; n_max as usize + 1];
    let mut error = vec![0.0f64; n_max as usize + 1];
    for alpha in multi_indices(u.dim(), n_max) {
        let order: u32 = alpha.iter().sum();
        let d = apply(u, &alpha, 1)?;
        let coarse = if order > 0 && order <= checked { Some(apply(u, &alpha, 2)?) } else { None };
        for n in order..=n_max {
            let mut v = 0.0f64;
            let mut e = 0.0f64;
            for i in 0..d.len() {
                let w = (1.0 + radius[i]).powi(n as i32);
                v = v.max(w * d[i].norm());
                if let Some(c) = &coarse {
                    e = e.max(w * (d[i] - c[i]).norm() / 3.0);
                }
            }
            value[n as usize] = value[n as usize].max(v);
            error[n as usize] = error[n as usize].max(e);
        }
    }
    for n in 1..=checked.min(n_max) as usize {
        if error[n] > RESOLUTION_SHARE * value[n] {
            return Err(Error::Resolution(format!(
                "order-{n} seminorm {:.3e} carries an estimated discretization error {:.3e}; refine the grid",
                value[n], error[n]
            )));
        }
    }
    Ok(value)
}

/// ‖u‖_(N) by second-order finite differences on the grid of `u`.
pub fn euclid_seminorm(u: &EuclidFunction, n: u32) -> Result<f64, Error> {
    Ok(seminorm_table(u, n, n)?[n as usize])
}

/// ‖u‖_(0), …, ‖u‖_(n_max).
pub fn euclid_seminorms(u: &EuclidFunction, n_max: u32) -> Result<Vec<f64>, Error> {
    seminorm_table(u, n_max, n_max)
}
