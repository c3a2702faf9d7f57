//! Schwartz seminorms on G: sup_x sup_{|α|≤N} w(x)^N |X^α f(x)| along the
//! left-invariant frame.

use crate::pairs::{frame_apply, frame_len, FdAccuracy, Field, GroupPoint, PairDescriptor, PairId, SampledFunction};
use crate::Error;

use super::euclid::{MAX_ORDER, RESOLUTION_SHARE};

/// 1 + ‖v‖ on the Euclidean pairs, 1 + (|z|⁴ + t²)^{1/4} on heis1.
pub fn weight(pair: PairId, x: &GroupPoint) -> f64 {
    match pair {
        PairId::Heis1 => {
            let z2 = x.z[0] * x.z[0] + x.z[1] * x.z[1];
            1.0 + (z2 * z2 + x.z[2] * x.z[2]).powf(0.25)
        }
        _ => 1.0 + x.planar_norm(),
    }
}

/// Walks every word X_{i₁}⋯X_{i_k}, k ≤ n_max, depth first.
struct Walk<'a> {
    f: &'a SampledFunction,
    weights: Vec<f64>,
    fields: usize,
    n_max: u32,
    value: Vec<f64>,
    error: Vec<f64>,
}

impl Walk<'_> {
    fn record(&mut self, order: u32, fine: &Field, coarse: Option<&Field>) {
        for n in order..=self.n_max {
            let (mut v, mut e) = (0.0f64, 0.0f64);
            for i in 0..fine.values.len() {
                if !fine.valid[i] {
                    continue;
                }
                let w = self.weights[i].powi(n as i32);
                v = v.max(w * fine.values[i].norm());
                if let Some(c) = coarse {
                    if c.valid[i] {
                        e = e.max(w * (fine.values[i] - c.values[i]).norm() / 3.0);
                    }
                }
            }
            self.value[n as usize] = self.value[n as usize].max(v);
            self.error[n as usize] = self.error[n as usize].max(e);
        }
    }

    fn descend(&mut self, order: u32, fine: &Field, coarse: &Field) -> Result<(), Error> {
        self.record(order, fine, (order > 0).then_some(coarse));
        if order == self.n_max {
            return Ok(());
        }
        for j in 0..self.fields {
            let a = frame_apply(&self.f.grid, fine, j, 1, FdAccuracy::Second)?;
            let b = frame_apply(&self.f.grid, coarse, j, 2, FdAccuracy::Second)?;
            if !a.valid.iter().any(|&v| v) {
                return Err(Error::Resolution(format!("grid too small for derivatives of order {}", order + 1)));
            }
            self.descend(order + 1, &a, &b)?;
        }
        Ok(())
    }
}

/// ‖f‖_(N) with X^α realized by second-order central differences along the
/// frame. Every differentiated axis must have spacing at most `step`; a
/// Richardson estimate of the discretization error above 10% of the value
/// is a resolution error.
pub fn group_seminorm(pair: &PairDescriptor, f: &SampledFunction, n: u32, step: f64) -> Result<f64, Error> {
    if f.pair != pair.id {
        return Err(Error::Domain(format!("function belongs to {}, not {}", f.pair, pair.id)));
    }
    if n > MAX_ORDER {
        return Err(Error::Domain(format!("seminorm order {n} exceeds {MAX_ORDER}")));
    }
    let fields = frame_len(f.layout());
    if fields == 0 {
        return Err(Error::Unsupported(format!("seminorms need a Cartesian grid, got layout {:?}", f.layout())));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    if n > 0 {
        for a in f.grid.axes() {
            let h = a.spacing().ok_or_else(|| Error::Grid(format!("axis '{}' is not equispaced", a.name)))?;
            if h > step * (1.0 + 1e-9) {
                return Err(Error::Resolution(format!("axis '{}' has spacing {h}, coarser than the step {step}", a.name)));
            }
        }
    }
    let weights = (0..f.grid.len()).map(|i| weight(f.pair, &f.grid.point(&f.grid.unravel(i)))).collect();
    let mut walk = Walk { f, weights, fields, n_max: n, value: vec![0.0; n as usize + 1], error: vec![0.0; n as usize + 1] };
    let start = Field::from_function(f);
    walk.descend(0, &start, &start)?;
    for k in 1..=n as usize {
        if walk.error[k] > RESOLUTION_SHARE * walk.value[k] {
            return Err(Error::Resolution(format!(
                "order-{k} seminorm {:.3e} carries an estimated discretization error {:.3e}; refine the grid",
                walk.value[k], walk.error[k]
            )));
        }
    }
    Ok(walk.value[n as usize])
}
