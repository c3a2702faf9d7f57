use super::SpecFunError;

pub const MAX_DEGREE: u32 = 256;

/// Generalized Laguerre polynomial L_k^{(alpha)}(x) via
/// (k+1) L_{k+1} = (2k+1+α−x) L_k − (k+α) L_{k−1}.
pub fn laguerre(k: u32, alpha: f64, x: f64) -> Result<f64, SpecFunError> {
    if k > MAX_DEGREE {
        return Err(SpecFunError::UnsupportedOrder { order: k, max: MAX_DEGREE });
    }
    if !(alpha >= 0.0) || !(x >= 0.0) || !x.is_finite() {
        return Err(SpecFunError::Domain(format!("laguerre: need alpha >= 0 and finite x >= 0, got alpha={alpha}, x={x}")));
    }
    Ok(LaguerreSeq::new(alpha, x).nth(k as usize).unwrap_or(0.0))
}

/// Iterator over L_0^{(α)}(x), L_1^{(α)}(x), …
#[derive(Debug, Clone)]
pub struct LaguerreSeq {
    alpha: f64,
    x: f64,
    k: u32,
    prev: f64,
    cur: f64,
}

impl LaguerreSeq {
    pub fn new(alpha: f64, x: f64) -> Self {
        Self { alpha, x, k: 0, prev: 0.0, cur: 1.0 }
    }
}

impl Iterator for LaguerreSeq {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.cur;
        let k = self.k as f64;
        let next = if self.k == 0 {
            1.0 + self.alpha - self.x
        } else {
            ((2.0 * k + 1.0 + self.alpha - self.x) * self.cur - (k + self.alpha) * self.prev) / (k + 1.0)
        };
        self.prev = self.cur;
        self.cur = next;
        self.k += 1;
        Some(out)
    }
}

/// Laguerre functions e^{−s/2} L_k(s) for k = 0..=kmax (α = 0).
///
/// These are bounded by 1 on s ≥ 0; the scale factor is applied once so the
/// recurrence itself stays polynomial.
pub fn laguerre_functions(kmax: u32, s: f64) -> Vec<f64> {
    let scale = (-0.5 * s).exp();
    LaguerreSeq::new(0.0, s).take(kmax as usize + 1).map(|l| l * scale).collect()
}
