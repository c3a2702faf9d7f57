//! Structured grids on G and functions sampled on them.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use super::{GroupPoint, PairDescriptor, PairId};
use crate::specfun::gauss_legendre;
use crate::Error;

/// Node placement along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisKind {
    /// Inclusive linspace, trapezoid weights.
    Uniform,
    /// n equispaced nodes on [min, max), equal weights.
    Periodic,
    /// Gauss–Legendre nodes on (min, max).
    GaussLegendre,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub n: usize,
    pub kind: AxisKind,
}

impl Axis {
    pub fn uniform(name: &str, min: f64, max: f64, n: usize) -> Self {
        Self { name: name.into(), min, max, n, kind: AxisKind::Uniform }
    }

    /// θ ∈ [0, 2π) with n nodes.
    pub fn circle(n: usize) -> Self {
        Self { name: "theta".into(), min: 0.0, max: TAU, n, kind: AxisKind::Periodic }
    }

    pub fn gauss(name: &str, min: f64, max: f64, n: usize) -> Self {
        Self { name: name.into(), min, max, n, kind: AxisKind::GaussLegendre }
    }

    /// Uniform axis symmetric about 0 with the given spacing and 2·half+1 nodes.
    pub fn centered(name: &str, half: usize, spacing: f64) -> Self {
        let ext = half as f64 * spacing;
        Self::uniform(name, -ext, ext, 2 * half + 1)
    }

    /// Node spacing for uniform/periodic axes.
    pub fn spacing(&self) -> Option<f64> {
        match self.kind {
            AxisKind::Uniform if self.n > 1 => Some((self.max - self.min) / (self.n - 1) as f64),
            AxisKind::Periodic if self.n > 0 => Some((self.max - self.min) / self.n as f64),
            _ => None,
        }
    }

    fn nodes_and_weights(&self) -> Result<(Vec<f64>, Vec<f64>), Error> {
        let n = self.n;
        match self.kind {
            AxisKind::Uniform => {
                if n == 1 {
                    return Ok((vec![self.min], vec![1.0]));
                }
                let h = (self.max - self.min) / (n - 1) as f64;
                let nodes = (0..n).map(|i| self.min + i as f64 * h).collect();
                let weights = (0..n).map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h }).collect();
                Ok((nodes, weights))
            }
            AxisKind::Periodic => {
                let h = (self.max - self.min) / n as f64;
                Ok(((0..n).map(|i| self.min + i as f64 * h).collect(), vec![h; n]))
            }
            AxisKind::GaussLegendre => {
                let r = gauss_legendre(n, self.min, self.max)?;
                Ok((r.nodes().to_vec(), r.weights().to_vec()))
            }
        }
    }
}

/// Chart layout of a grid; fixed by the pair and the number of axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// flat_r1: x
    Line,
    /// e2 radial profile: r
    Radial,
    /// e2 on H = ℝ²: x, y
    Plane,
    /// u1_c K-central profile: θ, r
    CircleRadial,
    /// u1_c: θ, x, y
    CirclePlane,
    /// heis1 radial-in-z profile: r, t
    CentralRadial,
    /// heis1 on H₁: x, y, t
    Heisenberg,
}

impl Layout {
    pub fn detect(pair: PairId, axes: usize) -> Result<Self, Error> {
        Ok(match (pair, axes) {
            (PairId::FlatR1, 1) => Layout::Line,
            (PairId::E2, 1) => Layout::Radial,
            (PairId::E2, 2) => Layout::Plane,
            (PairId::U1C, 2) => Layout::CircleRadial,
            (PairId::U1C, 3) => Layout::CirclePlane,
            (PairId::Heis1, 2) => Layout::CentralRadial,
            (PairId::Heis1, 3) => Layout::Heisenberg,
            _ => return Err(Error::Grid(format!("pair {pair} has no layout with {axes} axes"))),
        })
    }

    pub fn axis_names(self) -> &'static [&'static str] {
        match self {
            Layout::Line => &["x"],
            Layout::Radial => &["r"],
            Layout::Plane => &["x", "y"],
            Layout::CircleRadial => &["theta", "r"],
            Layout::CirclePlane => &["theta", "x", "y"],
            Layout::CentralRadial => &["r", "t"],
            Layout::Heisenberg => &["x", "y", "t"],
        }
    }

    pub fn has_circle(self) -> bool {
        matches!(self, Layout::CircleRadial | Layout::CirclePlane)
    }

    /// Grids that sample H directly in Cartesian coordinates.
    pub fn is_cartesian(self) -> bool {
        matches!(self, Layout::Line | Layout::Plane | Layout::CirclePlane | Layout::Heisenberg)
    }
}

/// A validated grid with cached nodes and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
    layout: Layout,
    nodes: Vec<Vec<f64>>,
    weights: Vec<Vec<f64>>,
}

impl Grid {
    pub fn new(pair: PairId, axes: Vec<Axis>) -> Result<Self, Error> {
        let layout = Layout::detect(pair, axes.len())?;
        let mut nodes = Vec::with_capacity(axes.len());
        let mut weights = Vec::with_capacity(axes.len());
        for (i, (axis, want)) in axes.iter().zip(layout.axis_names()).enumerate() {
            let at = |msg: String| Error::Grid(format!("grid[{i}] ({want}): {msg}"));
            if axis.name != *want {
                return Err(at(format!("axis name '{}' does not match layout", axis.name)));
            }
            if axis.n == 0 {
                return Err(at("n must be positive".into()));
            }
            if !axis.min.is_finite() || !axis.max.is_finite() || axis.max < axis.min || (axis.n > 1 && axis.max == axis.min) {
                return Err(at(format!("invalid range [{}, {}]", axis.min, axis.max)));
            }
            if *want == "theta" {
                if axis.kind != AxisKind::Periodic || axis.min != 0.0 || (axis.max - TAU).abs() > 1e-12 {
                    return Err(at("theta axis must be periodic on [0, 2pi)".into()));
                }
            } else if axis.kind == AxisKind::Periodic {
                return Err(at("only theta may be periodic".into()));
            }
            if *want == "r" && axis.min < 0.0 {
                return Err(at("radius must be >= 0".into()));
            }
            let (n, w) = axis.nodes_and_weights()?;
            nodes.push(n);
            weights.push(w);
        }
        Ok(Self { axes, layout, nodes, weights })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.n).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn axis_nodes(&self, axis: usize) -> &[f64] {
        &self.nodes[axis]
    }

    pub fn axis_weights(&self, axis: usize) -> &[f64] {
        &self.weights[axis]
    }

    /// Row-major multi-index of a flat index.
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for a in (0..self.axes.len()).rev() {
            idx[a] = flat % self.axes[a].n;
            flat /= self.axes[a].n;
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.axes).fold(0, |acc, (&i, a)| acc * a.n + i)
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.axes.len()];
        for a in (0..self.axes.len().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.axes[a + 1].n;
        }
        s
    }

    /// Group point represented by a node; radial layouts use z = (r, 0).
    pub fn point(&self, idx: &[usize]) -> GroupPoint {
        let c = |a: usize| self.nodes[a][idx[a]];
        match self.layout {
            Layout::Line => GroupPoint { theta: vec![], z: vec![c(0)] },
            Layout::Radial => GroupPoint { theta: vec![], z: vec![c(0), 0.0] },
            Layout::Plane => GroupPoint { theta: vec![], z: vec![c(0), c(1)] },
            Layout::CircleRadial => GroupPoint { theta: vec![c(0)], z: vec![c(1), 0.0] },
            Layout::CirclePlane => GroupPoint { theta: vec![c(0)], z: vec![c(1), c(2)] },
            Layout::CentralRadial => GroupPoint { theta: vec![], z: vec![c(0), 0.0, c(1)] },
            Layout::Heisenberg => GroupPoint { theta: vec![], z: vec![c(0), c(1), c(2)] },
        }
    }

    /// Haar measure carried by a node (K has mass 1, H Lebesgue).
    pub fn measure(&self, idx: &[usize]) -> f64 {
        let w = |a: usize| self.weights[a][idx[a]];
        let c = |a: usize| self.nodes[a][idx[a]];
        match self.layout {
            Layout::Line => w(0),
            Layout::Radial => 2.0 * PI * c(0) * w(0),
            Layout::Plane => w(0) * w(1),
            Layout::CircleRadial => w(0) / TAU * 2.0 * PI * c(1) * w(1),
            Layout::CirclePlane => w(0) / TAU * w(1) * w(2),
            Layout::CentralRadial => 2.0 * PI * c(0) * w(0) * w(1),
            Layout::Heisenberg => w(0) * w(1) * w(2),
        }
    }

    /// Whether a node lies on the truncation boundary.
    pub fn on_boundary(&self, idx: &[usize]) -> bool {
        self.axes.iter().zip(idx).any(|(a, &i)| match a.kind {
            AxisKind::Periodic => false,
            _ if a.name == "r" => i == a.n - 1,
            _ => i == 0 || i == a.n - 1,
        })
    }

    /// Largest |coordinate| over the grid, the truncation radius it realises.
    pub fn radius(&self) -> f64 {
        self.axes
            .iter()
            .filter(|a| a.kind != AxisKind::Periodic)
            .map(|a| a.min.abs().max(a.max.abs()))
            .fold(0.0, f64::max)
    }
}

/// Symmetry tag of a sampled function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Symmetry {
    BiKInvariant,
    KCentral,
    KType(Vec<i64>),
}

impl Symmetry {
    pub fn label(&self) -> &'static str {
        match self {
            Symmetry::BiKInvariant => "bi-K-invariant",
            Symmetry::KCentral => "K-central",
            Symmetry::KType(_) => "K-type",
        }
    }
}

/// A function on G (or on H for right-K-invariant lifts) sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub pair: PairId,
    pub symmetry: Symmetry,
    pub grid: Grid,
    pub values: Vec<Complex64>,
    pub truncation: f64,
    pub warnings: Vec<String>,
}

impl SampledFunction {
    pub fn new(pair: PairId, symmetry: Symmetry, grid: Grid, values: Vec<Complex64>) -> Result<Self, Error> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!("values: expected {} samples, got {}", grid.len(), values.len())));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Grid("values: non-finite sample".into()));
        }
        let truncation = grid.radius();
        Ok(Self { pair, symmetry, grid, values, truncation, warnings: Vec::new() })
    }

    /// Sample `f` at every node (in parallel).
    pub fn from_fn<F>(pair: PairId, symmetry: Symmetry, axes: Vec<Axis>, f: F) -> Result<Self, Error>
    where
        F: Fn(&GroupPoint) -> Complex64 + Sync,
    {
        let grid = Grid::new(pair, axes)?;
        let values = (0..grid.len()).into_par_iter().map(|i| f(&grid.point(&grid.unravel(i)))).collect();
        Self::new(pair, symmetry, grid, values)
    }

    pub fn descriptor(&self) -> PairDescriptor {
        self.pair.descriptor()
    }

    pub fn layout(&self) -> Layout {
        self.grid.layout()
    }

    pub fn with_values(&self, values: Vec<Complex64>) -> Self {
        Self { values, warnings: Vec::new(), ..self.clone() }
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn same_grid(&self, other: &SampledFunction) -> bool {
        self.pair == other.pair && self.grid.axes() == other.grid.axes()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// L² norm with respect to the Haar measure.
    pub fn l2_norm(&self) -> f64 {
        (0..self.values.len())
            .map(|i| self.grid.measure(&self.grid.unravel(i)) * self.values[i].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest |value| on the truncation boundary.
    pub fn boundary_max(&self) -> f64 {
        (0..self.values.len())
            .filter(|&i| self.grid.on_boundary(&self.grid.unravel(i)))
            .map(|i| self.values[i].norm())
            .fold(0.0, f64::max)
    }

    /// Pointwise a·self + b·other on a shared grid.
    pub fn combine(&self, a: Complex64, other: &SampledFunction, b: Complex64) -> Result<Self, Error> {
        if !self.same_grid(other) {
            return Err(Error::Grid("combine: grids differ".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Ok(self.with_values(values))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct AxisDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    min: f64,
    max: f64,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<AxisKind>,
}

/// On-disk JSON shape of a [`SampledFunction`].
#[derive(Debug, Serialize, Deserialize)]
pub struct SampledFunctionDoc {
    pair: PairId,
    symmetry: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ktype: Option<Vec<i64>>,
    grid: Vec<AxisDoc>,
    values_re: Vec<f64>,
    values_im: Vec<f64>,
    truncation: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

impl SampledFunctionDoc {
    /// Validate and convert; errors name the offending field.
    pub fn into_function(self) -> Result<SampledFunction, Error> {
        let layout = Layout::detect(self.pair, self.grid.len()).map_err(|e| Error::Grid(format!("grid: {e}")))?;
        let axes = self
            .grid
            .into_iter()
            .zip(layout.axis_names())
            .map(|(a, name)| Axis {
                name: a.name.unwrap_or_else(|| name.to_string()),
                min: a.min,
                max: a.max,
                n: a.n,
                kind: a.kind.unwrap_or(if *name == "theta" { AxisKind::Periodic } else { AxisKind::Uniform }),
            })
            .collect();
        let grid = Grid::new(self.pair, axes)?;
        let symmetry = match (self.symmetry.as_str(), self.ktype) {
            ("bi-K-invariant", _) => Symmetry::BiKInvariant,
            ("K-central", _) => Symmetry::KCentral,
            ("K-type", Some(m)) => Symmetry::KType(m),
            ("K-type", None) => return Err(Error::Grid("ktype: required when symmetry is K-type".into())),
            (other, _) => return Err(Error::Grid(format!("symmetry: unknown tag '{other}'"))),
        };
        if let Symmetry::KType(m) = &symmetry {
            if m.len() != self.pair.descriptor().r {
                return Err(Error::Grid(format!("ktype: expected {} entries", self.pair.descriptor().r)));
            }
        }
        if self.values_re.len() != grid.len() {
            return Err(Error::Grid(format!("values_re: expected {} samples, got {}", grid.len(), self.values_re.len())));
        }
        if self.values_im.len() != grid.len() {
            return Err(Error::Grid(format!("values_im: expected {} samples, got {}", grid.len(), self.values_im.len())));
        }
        let values = self.values_re.iter().zip(&self.values_im).map(|(&re, &im)| Complex64::new(re, im)).collect();
        let mut f = SampledFunction::new(self.pair, symmetry, grid, values)?;
        if self.truncation.is_finite() && self.truncation > 0.0 {
            f.truncation = self.truncation;
        }
        f.warnings = self.warnings;
        Ok(f)
    }
}

impl From<&SampledFunction> for SampledFunctionDoc {
    fn from(f: &SampledFunction) -> Self {
        Self {
            pair: f.pair,
            symmetry: f.symmetry.label().to_string(),
            ktype: match &f.symmetry {
                Symmetry::KType(m) => Some(m.clone()),
                _ => None,
            },
            grid: f
                .grid
                .axes()
                .iter()
                .map(|a| AxisDoc { name: Some(a.name.clone()), min: a.min, max: a.max, n: a.n, kind: Some(a.kind) })
                .collect(),
            values_re: f.values.iter().map(|v| v.re).collect(),
            values_im: f.values.iter().map(|v| v.im).collect(),
            truncation: f.truncation,
            warnings: f.warnings.clone(),
        }
    }
}

impl SampledFunction {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SampledFunctionDoc::from(self)).expect("sampled function serialises")
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        let doc: SampledFunctionDoc = serde_json::from_str(s).map_err(|e| Error::Grid(format!("json: {e}")))?;
        doc.into_function()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_plane() -> SampledFunction {
        SampledFunction::from_fn(
            PairId::E2,
            Symmetry::BiKInvariant,
            vec![Axis::centered("x", 40, 0.2), Axis::centered("y", 40, 0.2)],
            |p| Complex64::new((-0.5 * p.planar_norm().powi(2)).exp(), 0.0),
        )
        .unwrap()
    }

    #[test]
    fn measure_integrates_gaussian() {
        // ∫ e^{-|v|²} dv over ℝ² equals π; the L² norm squared of e^{-|v|²/2}.
        let f = gaussian_plane();
        assert!((f.l2_norm().powi(2) - PI).abs() < 1e-10);

        let radial = SampledFunction::from_fn(PairId::E2, Symmetry::BiKInvariant, vec![Axis::gauss("r", 0.0, 10.0, 200)], |p| {
            Complex64::new((-0.5 * p.planar_norm().powi(2)).exp(), 0.0)
        })
        .unwrap();
        assert!((radial.l2_norm().powi(2) - PI).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let f = gaussian_plane();
        let back = SampledFunction::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn json_validation_names_fields() {
        let bad = r#"{"pair":"e2","symmetry":"bi-K-invariant","grid":[{"min":0,"max":1,"n":3}],
                     "values_re":[1,2],"values_im":[0,0,0],"truncation":1}"#;
        let err = SampledFunction::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("values_re"), "{err}");
        let bad = r#"{"pair":"e2","symmetry":"round","grid":[{"min":0,"max":1,"n":2}],
                     "values_re":[1,2],"values_im":[0,0],"truncation":1}"#;
        assert!(SampledFunction::from_json(bad).unwrap_err().to_string().contains("symmetry"));
    }

    #[test]
    fn layout_validation() {
        assert!(Grid::new(PairId::U1C, vec![Axis::uniform("theta", 0.0, 1.0, 4), Axis::uniform("r", 0.0, 1.0, 4)]).is_err());
        assert!(Grid::new(PairId::FlatR1, vec![Axis::uniform("x", 0.0, 1.0, 4), Axis::uniform("y", 0.0, 1.0, 4)]).is_err());
        let g = Grid::new(PairId::Heis1, vec![Axis::centered("x", 2, 0.5), Axis::centered("y", 3, 0.5), Axis::centered("t", 1, 1.0)]).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.ravel(&g.unravel(i)), i);
        }
    }
}
