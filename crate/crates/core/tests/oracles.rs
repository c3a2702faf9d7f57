//! Library values against independent oracles computed here.

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use gelfand_core::families::{gaussian, quadrature_axes};
use gelfand_core::pairs::{eigenvalue_map, spectrum_grid, spherical, GroupPoint, PairId, ParamRange, SpectrumBounds, SpectrumParams};
use gelfand_core::transform::{plancherel_constant, spherical_transform, PLANCHEREL_E2, PLANCHEREL_FLAT_R1, PLANCHEREL_HEIS1, PLANCHEREL_U1C};
use gelfand_core::Complex64;

/// J₀ by its integral representation; the rectangle rule is spectrally
/// accurate on the π-periodic integrand.
fn j0(x: f64) -> f64 {
    let n = 600;
    (0..n).map(|i| (x * (PI * i as f64 / n as f64).sin()).cos()).sum::<f64>() / n as f64
}

/// Composite Simpson on [a, b] with 2n panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / (2 * n) as f64;
    let s: f64 = (0..=2 * n).map(|i| if i == 0 || i == 2 * n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h)).sum();
    s * h / 3.0
}

fn laguerre_explicit(k: u32, s: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => 1.0 - s,
        2 => 1.0 - 2.0 * s + 0.5 * s * s,
        3 => 1.0 - 3.0 * s + 1.5 * s * s - s * s * s / 6.0,
        _ => unreachable!(),
    }
}

/// Heisenberg transform of e^{−(|z|²+t²)/2} on ray k:
/// √(2π) e^{−λ²/2} · π (1/2 − |λ|/4)^k / (1/2 + |λ|/4)^{k+1}.
fn heis_gaussian_transform(lambda: f64, k: u32) -> f64 {
    let (a, b) = (0.5 - 0.25 * lambda.abs(), 0.5 + 0.25 * lambda.abs());
    (2.0 * PI).sqrt() * (-0.5 * lambda * lambda).exp() * PI * a.powi(k as i32) / b.powi(k as i32 + 1)
}

#[test]
fn e2_and_u1c_spherical_functions_are_bessel() {
    for (lambda, r) in [(0.5, 1.0), (1.7, 3.2), (4.0, 7.5), (9.0, 2.2)] {
        let e2 = PairId::E2.descriptor();
        let s = eigenvalue_map(&e2, SpectrumParams::Radial { lambda }).unwrap();
        let x = GroupPoint::in_h(&e2, vec![r * 0.6, r * 0.8]).unwrap();
        assert_abs_diff_eq!(spherical(&e2, &s, &x).unwrap().re, j0(lambda * r), epsilon = 1e-13);

        let u = PairId::U1C.descriptor();
        let s = eigenvalue_map(&u, SpectrumParams::Typed { m: 3, lambda }).unwrap();
        let x = GroupPoint::new(&u, vec![0.4], vec![r * 0.8, -r * 0.6]).unwrap();
        let v = spherical(&u, &s, &x).unwrap();
        let expect = Complex64::from_polar(j0(lambda * r), 1.2);
        assert_abs_diff_eq!((v - expect).norm(), 0.0, epsilon = 1e-13);
    }
}

#[test]
fn heisenberg_spherical_functions_are_laguerre() {
    let h = PairId::Heis1.descriptor();
    for k in 0..=3 {
        for (lambda, x, y, t) in [(0.7, 0.3, -1.1, 0.5), (-2.0, 1.4, 0.2, -3.0), (3.5, -0.6, 0.9, 1.0)] {
            let s = eigenvalue_map(&h, SpectrumParams::Fan { lambda, k }).unwrap();
            let p = GroupPoint::in_h(&h, vec![x, y, t]).unwrap();
            let arg = 0.5 * f64::abs(lambda) * (x * x + y * y);
            let expect = Complex64::from_polar((-0.5 * arg).exp() * laguerre_explicit(k, arg), lambda * t);
            assert_abs_diff_eq!((spherical(&h, &s, &p).unwrap() - expect).norm(), 0.0, epsilon = 1e-14);
        }
    }
}

#[test]
fn fan_rays_converge_to_the_limit_ray() {
    // λ(2k+1) = η² fixed, k → ∞: e^{−s/2}L_k(s) → J₀(η|z|).
    let h = PairId::Heis1.descriptor();
    let (eta, r) = (1.3, 2.0);
    let p = GroupPoint::in_h(&h, vec![r, 0.0, 0.0]).unwrap();
    let gap = |k: u32| {
        let lambda = eta * eta / (2 * k + 1) as f64;
        (spherical(&h, &eigenvalue_map(&h, SpectrumParams::Fan { lambda, k }).unwrap(), &p).unwrap().re - j0(eta * r)).abs()
    };
    let (g10, g100, g250) = (gap(10), gap(100), gap(250));
    assert!(g100 < g10 && g250 < g100, "{g10} {g100} {g250}");
    assert!(g250 < 2e-3);
}

#[test]
fn flat_gaussian_transform() {
    let pair = PairId::FlatR1.descriptor();
    let f = gaussian(PairId::FlatR1, quadrature_axes(PairId::FlatR1, 12.0, 200), 1.0).unwrap();
    let pts = spectrum_grid(&pair, &SpectrumBounds { lambda: Some(ParamRange::uniform(0.0, 5.0, 11)), ..Default::default() }).unwrap();
    let g = spherical_transform(&pair, &f, &pts).unwrap();
    for (p, v) in pts.iter().zip(&g.values) {
        let lambda = p.xi[0].sqrt();
        let oracle = simpson(|x| (-0.5 * x * x).exp() * (lambda * x).cos(), -12.0, 12.0, 2000);
        assert_abs_diff_eq!(v.re, oracle, epsilon = 1e-10);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
    }
}

#[test]
fn heisenberg_gaussian_transform() {
    // The closed form against a direct quadrature in u = |z|².
    for (lambda, k) in [(0.5, 0u32), (-1.5, 2), (3.0, 3)] {
        let s = |u: f64| 0.5 * f64::abs(lambda) * u;
        let radial = PI * simpson(|u| (-0.5 * u).exp() * (-0.5 * s(u)).exp() * laguerre_explicit(k, s(u)), 0.0, 80.0, 40000);
        let t_part = (2.0 * PI).sqrt() * (-0.5 * lambda * lambda).exp();
        assert_abs_diff_eq!(t_part * radial, heis_gaussian_transform(lambda, k), epsilon = 1e-10);
    }
    let pair = PairId::Heis1.descriptor();
    let f = gaussian(PairId::Heis1, quadrature_axes(PairId::Heis1, 10.0, 80), 1.0).unwrap();
    let pts = spectrum_grid(&pair, &SpectrumBounds { lambda: Some(ParamRange::uniform(-3.0, 3.0, 7)), kmax: Some(5), ..Default::default() }).unwrap();
    let g = spherical_transform(&pair, &f, &pts).unwrap();
    for (p, v) in pts.iter().zip(&g.values) {
        let SpectrumParams::Fan { lambda, k } = p.params else { unreachable!() };
        assert_abs_diff_eq!(v.re, heis_gaussian_transform(lambda, k), epsilon = 1e-8);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-8);
    }
}

#[test]
fn plancherel_constants_from_gaussian_norms() {
    // ‖f‖² on the group against ∫|𝒢f|² on the spectrum, all in closed form.
    // flat_r1: √π = c ∫₀^∞ 2π e^{−λ²} dλ = c π^{3/2}
    let flat = PI.sqrt() / simpson(|l| 2.0 * PI * (-l * l).exp(), 0.0, 12.0, 2000);
    // e2, u1_c: π = c ∫₀^∞ 4π² e^{−λ²} λ dλ
    let e2 = PI / simpson(|l| 4.0 * PI * PI * (-l * l).exp() * l, 0.0, 12.0, 2000);
    // heis1: π^{3/2} = c ∫ |λ| Σ_k |𝒢f(λ,k)|² dλ, summing over k term by term
    let summed = |l: f64| {
        let l = l.max(1e-4);
        let ratio = ((0.5 - 0.25 * l) / (0.5 + 0.25 * l)).powi(2);
        let mut term = heis_gaussian_transform(l, 0).powi(2);
        let mut sum = 0.0;
        while term > 1e-18 * sum || sum == 0.0 {
            sum += term;
            term *= ratio;
        }
        l * sum
    };
    let heis_spec = 2.0 * simpson(summed, 0.0, 12.0, 1500);
    let heis = PI.powf(1.5) / heis_spec;
    assert_abs_diff_eq!(flat, PLANCHEREL_FLAT_R1, epsilon = 1e-12);
    assert_abs_diff_eq!(e2, PLANCHEREL_E2, epsilon = 1e-12);
    assert_abs_diff_eq!(e2, PLANCHEREL_U1C, epsilon = 1e-12);
    assert_abs_diff_eq!(heis, PLANCHEREL_HEIS1, epsilon = 1e-6 * PLANCHEREL_HEIS1);
    assert_eq!(plancherel_constant(PairId::Heis1), 1.0 / (4.0 * PI * PI));
}
