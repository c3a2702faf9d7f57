//! Gauss–Legendre rules and plain weighted-sum integration.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::SpecFunError;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Nodes and positive weights on a closed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    interval: (f64, f64),
}

/// Failure of the integrand at one node.
#[derive(Debug, thiserror::Error)]
#[error("integrand failed at node {index} (x = {x}): {source}")]
pub struct IntegrationError<E: std::error::Error + 'static> {
    pub index: usize,
    pub x: f64,
    #[source]
    pub source: E,
}

impl QuadratureRule {
    /// Build a rule from raw parts. Nodes must be strictly increasing inside
    /// `[a, b]` and weights non-negative.
    pub fn from_parts(nodes: Vec<f64>, weights: Vec<f64>, a: f64, b: f64) -> Result<Self, SpecFunError> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(SpecFunError::InvalidRule("node and weight counts differ or are zero".into()));
        }
        if !(a < b) {
            return Err(SpecFunError::InvalidInterval { a, b });
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(SpecFunError::InvalidRule("nodes are not strictly increasing".into()));
        }
        if nodes.iter().any(|&x| x < a || x > b) || weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(SpecFunError::InvalidRule("node outside interval or negative weight".into()));
        }
        Ok(Self { nodes, weights, interval: (a, b) })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ wᵢ f(xᵢ) for a fallible complex integrand.
    pub fn integrate<E, F>(&self, mut f: F) -> Result<Complex64, IntegrationError<E>>
    where
        E: std::error::Error + 'static,
        F: FnMut(f64) -> Result<Complex64, E>,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        for (index, (&x, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = f(x).map_err(|source| IntegrationError { index, x, source })?;
            acc += v * w;
        }
        Ok(acc)
    }

    /// Σ wᵢ f(xᵢ) for an infallible real integrand.
    pub fn integrate_real<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Legendre P_n and its derivative at `x` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// n-point Gauss–Legendre rule on `[a, b]`.
///
/// Roots of P_n are found by Newton iteration from the Tricomi-style
/// initial guess; weights are 2 / ((1 − x²) P_n'(x)²) scaled to the interval.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<QuadratureRule, SpecFunError> {
    if n == 0 {
        return Err(SpecFunError::InvalidRule("gauss_legendre needs n >= 1".into()));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(SpecFunError::InvalidInterval { a, b });
    }
    let mut ref_nodes = vec![0.0; n];
    let mut ref_weights = vec![0.0; n];
    let half = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..half {
        // i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= NEWTON_TOL * x.abs().max(1.0) {
                converged = true;
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        if !converged {
            return Err(SpecFunError::NoConvergence { index: i });
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ref_nodes[n - 1 - i] = x;
        ref_nodes[i] = -x;
        ref_weights[n - 1 - i] = w;
        ref_weights[i] = w;
    }
    if n % 2 == 1 {
        ref_nodes[n / 2] = 0.0;
    }
    let mid = 0.5 * (a + b);
    let half_len = 0.5 * (b - a);
    let nodes = ref_nodes.iter().map(|&x| mid + half_len * x).collect();
    let weights = ref_weights.iter().map(|&w| half_len * w).collect();
    QuadratureRule::from_parts(nodes, weights, a, b)
}

/// Composite Gauss–Legendre: `panels` equal panels of `n` nodes each.
pub fn composite_gauss_legendre(n: usize, panels: usize, a: f64, b: f64) -> Result<QuadratureRule, SpecFunError> {
    if panels == 0 {
        return Err(SpecFunError::InvalidRule("need at least one panel".into()));
    }
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(n * panels);
    let mut weights = Vec::with_capacity(n * panels);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let rule = gauss_legendre(n, lo, lo + h)?;
        nodes.extend_from_slice(rule.nodes());
        weights.extend_from_slice(rule.weights());
    }
    QuadratureRule::from_parts(nodes, weights, a, b)
}
