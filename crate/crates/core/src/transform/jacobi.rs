//! Cyclic Jacobi eigenvalues for small dense symmetric and Hermitian matrices.

use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) of the symmetric n×n matrix `a` (row-major).
pub fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n, "matrix is not n×n");
    let scale: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i * n + j].powi(2)).sum();
        if off.sqrt() <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues (ascending) of a Hermitian matrix via its real embedding
/// [[A, −B], [B, A]], whose spectrum is that of A + iB doubled.
pub fn hermitian_eigenvalues(m: &[Complex64], n: usize) -> Vec<f64> {
    assert_eq!(m.len(), n * n, "matrix is not n×n");
    let nn = 2 * n;
    let mut a = vec![0.0; nn * nn];
    for i in 0..n {
        for j in 0..n {
            let z = m[i * n + j];
            a[i * nn + j] = z.re;
            a[(i + n) * nn + j + n] = z.re;
            a[i * nn + j + n] = -z.im;
            a[(i + n) * nn + j] = z.im;
        }
    }
    symmetric_eigenvalues(a, nn).into_iter().step_by(2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let ev = symmetric_eigenvalues(vec![2.0, 1.0, 1.0, 2.0], 2);
        assert!((ev[0] - 1.0).abs() < 1e-15 && (ev[1] - 3.0).abs() < 1e-15);
        // [[1, i], [−i, 1]] has eigenvalues 0 and 2.
        let i = Complex64::new(0.0, 1.0);
        let ev = hermitian_eigenvalues(&[Complex64::new(1.0, 0.0), i, -i, Complex64::new(1.0, 0.0)], 2);
        assert!(ev[0].abs() < 1e-15 && (ev[1] - 2.0).abs() < 1e-15);
    }
}
