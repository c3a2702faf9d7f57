//! Spherical transform, inversion, Plancherel measure and the verification
//! suite for the algebraic identities of the transform.

mod forward;
mod inverse;
mod jacobi;
mod plancherel;
mod verify;

use num_complex::Complex64;

use crate::pairs::{params_from_xi, PairId, SpectrumPoint};
use crate::Error;

pub use forward::{spherical_transform, transform_on};
pub use inverse::{inverse_transform, relative_l2_error};
pub use jacobi::{hermitian_eigenvalues, symmetric_eigenvalues};
pub use plancherel::{
    plancherel_constant, plancherel_grid, PlancherelSpec, SpectrumGrid, PLANCHEREL_E2, PLANCHEREL_FLAT_R1,
    PLANCHEREL_HEIS1, PLANCHEREL_U1C,
};
pub use verify::{
    eigen_centers, verify_commutativity, verify_eigen, verify_multiplicativity, verify_plancherel,
    verify_positive_definite, verify_round_trip, EIGEN_ACCURACY, MAX_GRAM_POINTS,
};

/// Values of a transform on spectrum points, optionally carrying the
/// Plancherel weights needed for inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumFunction {
    pub pair: PairId,
    pub points: Vec<SpectrumPoint>,
    pub values: Vec<Complex64>,
    pub weights: Option<Vec<f64>>,
    /// Truncation radius of the sampled input (0 if unknown).
    pub truncation: f64,
    /// Number of quadrature nodes used.
    pub nodes: usize,
    pub warnings: Vec<String>,
}

impl SpectrumFunction {
    pub fn new(pair: PairId, points: Vec<SpectrumPoint>, values: Vec<Complex64>, weights: Option<Vec<f64>>) -> Result<Self, Error> {
        if values.len() != points.len() {
            return Err(Error::Domain(format!("{} values for {} spectrum points", values.len(), points.len())));
        }
        if let Some(w) = &weights {
            if w.len() != points.len() {
                return Err(Error::Weight(format!("{} weights for {} spectrum points", w.len(), points.len())));
            }
            if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(Error::Weight("Plancherel weights must be finite and >= 0".into()));
            }
        }
        Ok(Self { pair, points, values, weights, truncation: 0.0, nodes: 0, warnings: Vec::new() })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Weighted ℓ² norm (Σ β |ĝ|²)^{1/2}.
    pub fn weighted_norm(&self) -> Result<f64, Error> {
        let w = self.weights.as_ref().ok_or_else(|| Error::Weight("spectrum function carries no Plancherel weights".into()))?;
        Ok(self.values.iter().zip(w).map(|(v, b)| b * v.norm_sqr()).sum::<f64>().sqrt())
    }

    /// CSV with columns xi_1..xi_ell, value_re, value_im, weight.
    pub fn to_csv(&self) -> String {
        let ell = self.pair.descriptor().ell;
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = (1..=ell).map(|i| format!("xi_{i}")).collect();
        header.extend(["value_re", "value_im", "weight"].map(String::from));
        w.write_record(&header).expect("in-memory csv");
        for (i, p) in self.points.iter().enumerate() {
            let mut row: Vec<String> = p.xi.iter().map(|x| x.to_string()).collect();
            row.push(self.values[i].re.to_string());
            row.push(self.values[i].im.to_string());
            row.push(self.weights.as_ref().map(|w| w[i].to_string()).unwrap_or_default());
            w.write_record(&row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
    }

    /// Parses the format written by [`to_csv`](Self::to_csv). Parameters are
    /// recovered from the ξ columns.
    pub fn from_csv(pair: PairId, text: &str) -> Result<Self, Error> {
        let desc = pair.descriptor();
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| Error::Grid(format!("csv header: {e}")))?.clone();
        let col = |name: &str| {
            header
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::Grid(format!("csv: missing column '{name}'")))
        };
        let xi_cols = (1..=desc.ell).map(|i| col(&format!("xi_{i}"))).collect::<Result<Vec<_>, _>>()?;
        let (re, im, wt) = (col("value_re")?, col("value_im")?, col("weight").ok());
        let (mut points, mut values, mut weights) = (Vec::new(), Vec::new(), Vec::new());
        let mut all_weighted = wt.is_some();
        for (line, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| Error::Grid(format!("csv row {}: {e}", line + 1)))?;
            let num = |c: usize, name: &str| -> Result<f64, Error> {
                rec.get(c)
                    .unwrap_or("")
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Grid(format!("csv row {}: column '{name}' is not a number", line + 1)))
            };
            let xi = xi_cols.iter().enumerate().map(|(i, &c)| num(c, &format!("xi_{}", i + 1))).collect::<Result<Vec<_>, _>>()?;
            points.push(params_from_xi(&desc, &xi).map_err(|e| Error::Grid(format!("csv row {}: {e}", line + 1)))?);
            values.push(Complex64::new(num(re, "value_re")?, num(im, "value_im")?));
            match wt.map(|c| rec.get(c).unwrap_or("").trim()) {
                Some(s) if !s.is_empty() => weights.push(num(wt.unwrap(), "weight")?),
                _ => all_weighted = false,
            }
        }
        Self::new(pair, points, values, all_weighted.then_some(weights))
    }
}
