//! Structural invariants as properties over random inputs.

use approx::assert_abs_diff_eq;
use gelfand_core::families::{gaussian, ktype_axes, lattice_axes, random_radial};
use gelfand_core::ktype::project_ktype;
use gelfand_core::pairs::{
    eigenvalue_map, inverse, multiply, params_from_xi, spectrum_grid, spherical, GroupPoint, PairId, ParamRange, SampledFunction, SpectrumBounds,
    SpectrumParams, Symmetry,
};
use gelfand_core::schwartz::{
    bump_interpolate, change_of_generators, euclid_seminorms, BumpSpec, EuclidAxis, EuclidFunction, LatticeFunction, Monomial, PolyMap,
};
use gelfand_core::transform::{verify_commutativity, SpectrumFunction};
use gelfand_core::{Complex64, Report, Status};
use proptest::prelude::*;

fn pair_id() -> impl Strategy<Value = PairId> {
    prop_oneof![Just(PairId::FlatR1), Just(PairId::E2), Just(PairId::U1C), Just(PairId::Heis1)]
}

fn params(id: PairId) -> BoxedStrategy<SpectrumParams> {
    match id {
        PairId::FlatR1 | PairId::E2 => (0.0..20.0f64).prop_map(|lambda| SpectrumParams::Radial { lambda }).boxed(),
        PairId::U1C => (-12i64..=12, 0.0..20.0f64).prop_map(|(m, lambda)| SpectrumParams::Typed { m, lambda }).boxed(),
        PairId::Heis1 => prop_oneof![
            (prop_oneof![-8.0..-1e-3f64, 1e-3..8.0f64], 0u32..60).prop_map(|(lambda, k)| SpectrumParams::Fan { lambda, k }),
            (0.0..10.0f64).prop_map(|eta| SpectrumParams::Ray { eta }),
        ]
        .boxed(),
    }
}

/// (K-dimension, H-dimension)
fn dims(id: PairId) -> (usize, usize) {
    match id {
        PairId::FlatR1 => (0, 1),
        PairId::E2 => (0, 2),
        PairId::U1C => (1, 2),
        PairId::Heis1 => (0, 3),
    }
}

fn point(id: PairId) -> impl Strategy<Value = GroupPoint> {
    (0.0..std::f64::consts::TAU, prop::collection::vec(-6.0..6.0f64, 3)).prop_map(move |(theta, z)| {
        let (k, h) = dims(id);
        GroupPoint::new(&id.descriptor(), vec![theta; k], z[..h].to_vec()).unwrap()
    })
}

fn spherical_case() -> impl Strategy<Value = (PairId, SpectrumParams, GroupPoint, GroupPoint)> {
    pair_id().prop_flat_map(|id| (Just(id), params(id), point(id), point(id)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn spherical_functions_are_normalized_and_bounded((id, p, x, _) in spherical_case()) {
        let pair = id.descriptor();
        let s = eigenvalue_map(&pair, p).unwrap();
        let at_e = spherical(&pair, &s, &GroupPoint::identity(&pair)).unwrap();
        prop_assert!((at_e - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(spherical(&pair, &s, &x).unwrap().norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn spherical_functions_are_hermitian((id, p, x, _) in spherical_case()) {
        let pair = id.descriptor();
        let s = eigenvalue_map(&pair, p).unwrap();
        let a = spherical(&pair, &s, &x).unwrap();
        let b = spherical(&pair, &s, &inverse(&pair, &x)).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-11);
    }

    #[test]
    fn group_law_is_associative((id, _, x, y) in spherical_case(), w in prop::collection::vec(-3.0..3.0f64, 3)) {
        let pair = id.descriptor();
        let (k, h) = dims(id);
        let v = GroupPoint::new(&pair, vec![w[0].abs(); k], w[..h].to_vec()).unwrap();
        let l = multiply(&pair, &multiply(&pair, &x, &y), &v);
        let r = multiply(&pair, &x, &multiply(&pair, &y, &v));
        for (a, b) in l.z.iter().zip(&r.z) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        let e = multiply(&pair, &x, &inverse(&pair, &x));
        prop_assert!(e.z.iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn parameters_are_recovered_from_the_embedding((id, p, _, _) in spherical_case()) {
        let pair = id.descriptor();
        let s = eigenvalue_map(&pair, p).unwrap();
        let back = params_from_xi(&pair, &s.xi).unwrap();
        match (p, back.params) {
            (SpectrumParams::Radial { lambda: a }, SpectrumParams::Radial { lambda: b }) => prop_assert!((a - b).abs() < 1e-12 * (1.0 + a)),
            (SpectrumParams::Typed { m: ma, lambda: a }, SpectrumParams::Typed { m: mb, lambda: b }) => {
                prop_assert_eq!(ma, mb);
                prop_assert!((a - b).abs() < 1e-12 * (1.0 + a));
            }
            (SpectrumParams::Fan { lambda: a, k: ka }, SpectrumParams::Fan { lambda: b, k: kb }) => {
                prop_assert_eq!(ka, kb);
                prop_assert!((a - b).abs() < 1e-12);
            }
            (SpectrumParams::Ray { eta: a }, SpectrumParams::Ray { eta: b }) => prop_assert!((a - b).abs() < 1e-12 * (1.0 + a)),
            (a, b) => prop_assert!(false, "{a:?} came back as {b:?}"),
        }
    }

    #[test]
    fn u1c_spherical_functions_factor(m in -10i64..=10, lambda in 0.0..15.0f64, theta in 0.0..std::f64::consts::TAU, x in -5.0..5.0f64, y in -5.0..5.0f64) {
        let pair = PairId::U1C.descriptor();
        let s = eigenvalue_map(&pair, SpectrumParams::Typed { m, lambda }).unwrap();
        let full = spherical(&pair, &s, &GroupPoint::new(&pair, vec![theta], vec![x, y]).unwrap()).unwrap();
        let radial = spherical(&pair, &s, &GroupPoint::new(&pair, vec![0.0], vec![x, y]).unwrap()).unwrap();
        prop_assert!((full - Complex64::from_polar(1.0, m as f64 * theta) * radial).norm() < 1e-12);
    }

    #[test]
    fn bump_interpolation_is_exact_on_the_lattice(values in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 1..8), lo in -4i64..4) {
        let a: LatticeFunction = values.iter().enumerate().map(|(i, &(re, im))| (vec![lo + i as i64], Complex64::new(re, im))).collect();
        let h = bump_interpolate(&a, &BumpSpec::default(), 16).unwrap();
        for (l, v) in &a {
            let t = [l[0] as f64];
            prop_assert!((h.at(&t).unwrap() - v).norm() < 1e-12);
            // the bump radius is below 1/2, so midpoints are outside every support
            if let Some(mid) = h.at(&[t[0] + 0.5]) {
                prop_assert!(mid.norm() < 1e-14);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn type_projection_is_idempotent_and_orthogonal(coef in prop::collection::vec(-2.0..2.0f64, 7), m in -3i64..=3, other in -3i64..=3) {
        let pair = PairId::U1C.descriptor();
        let f = SampledFunction::from_fn(PairId::U1C, Symmetry::KCentral, ktype_axes(4, 6.0, 16), |x| {
            let radial = (-0.5 * x.planar_norm().powi(2)).exp();
            (-3i64..=3).map(|j| Complex64::from_polar(coef[(j + 3) as usize] * radial, j as f64 * x.theta[0])).sum()
        })
        .unwrap();
        let p = project_ktype(&pair, &f, &[m]).unwrap();
        let pp = project_ktype(&pair, &p, &[m]).unwrap();
        prop_assert!(p.values.iter().zip(&pp.values).all(|(a, b)| (a - b).norm() < 1e-12));
        let expect = coef[(m + 3) as usize].abs() * f.with_values(f.values.iter().map(|_| Complex64::new(1.0, 0.0)).collect()).l2_norm();
        prop_assert!(p.l2_norm() <= expect + 1e-9);
        if other != m {
            let cross = project_ktype(&pair, &p.clone().with_symmetry(Symmetry::KCentral), &[other]).unwrap();
            prop_assert!(cross.sup_norm() < 1e-12);
        }
    }

    #[test]
    fn euclid_seminorms_grow_with_order(a in 0.4..2.0f64, shift in -1.0..1.0f64) {
        let axis = EuclidAxis::new(-14.0, 1.0 / 64.0, 14 * 128 + 1).unwrap();
        let u = EuclidFunction::from_fn(vec![axis], |t| Complex64::new((-0.5 * a * (t[0] - shift).powi(2)).exp(), 0.0)).unwrap();
        let s = euclid_seminorms(&u, 3).unwrap();
        prop_assert!((s[0] - 1.0).abs() < 1e-3);
        prop_assert!(s.windows(2).all(|w| w[0] <= w[1]), "{s:?}");
    }

    #[test]
    fn triangular_changes_of_generators_pass(c in -2.0..2.0f64, d in 0.5..3.0f64) {
        // P(ξ) = (dξ₁, ξ₂ + cξ₁²) with inverse Q(η) = (η₁/d, η₂ − c(η₁/d)²)
        let pair = PairId::Heis1.descriptor();
        let mono = |coef: f64, powers: [u32; 2]| Monomial { coef, powers: powers.to_vec() };
        let p = PolyMap::new(2, vec![vec![mono(d, [1, 0])], vec![mono(1.0, [0, 1]), mono(c, [2, 0])]]).unwrap();
        let q = PolyMap::new(2, vec![vec![mono(1.0 / d, [1, 0])], vec![mono(1.0, [0, 1]), mono(-c / (d * d), [2, 0])]]).unwrap();
        let sample = spectrum_grid(&pair, &SpectrumBounds { lambda: Some(ParamRange::uniform(-2.0, 2.0, 9)), kmax: Some(4), ..Default::default() }).unwrap();
        let r = change_of_generators(&pair, &p, &q, &sample).unwrap();
        prop_assert_eq!(r.status, Status::Pass, "{}", r.to_json());
    }

    #[test]
    fn reports_survive_json(observed in 0.0..1.0f64, tol in 1e-12..1.0f64, pass in any::<bool>()) {
        let r = Report::decided("posdef", PairId::E2, tol, observed, pass).with("seed", 7u64).note("random case");
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn spectrum_csv_round_trip(vals in prop::collection::vec((-1e3..1e3f64, -1e3..1e3f64, 1e-6..10.0f64), 1..12)) {
        let pair = PairId::Heis1.descriptor();
        let points: Vec<_> = (0..vals.len())
            .map(|i| eigenvalue_map(&pair, SpectrumParams::Fan { lambda: 0.25 * (i as f64 + 1.0), k: i as u32 }).unwrap())
            .collect();
        let values = vals.iter().map(|&(re, im, _)| Complex64::new(re, im)).collect();
        let weights = vals.iter().map(|v| v.2).collect();
        let g = SpectrumFunction::new(PairId::Heis1, points, values, Some(weights)).unwrap();
        let back = SpectrumFunction::from_csv(PairId::Heis1, &g.to_csv()).unwrap();
        prop_assert_eq!(back.values, g.values);
        prop_assert_eq!(back.weights, g.weights);
        for (a, b) in back.points.iter().zip(&g.points) {
            prop_assert_eq!(&a.xi, &b.xi);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn bi_invariant_convolution_commutes(seed in any::<u64>(), id in prop_oneof![Just(PairId::E2), Just(PairId::Heis1)]) {
        let pair = id.descriptor();
        let (half, spacing) = if id == PairId::E2 { (32, 6.0 / 32.0) } else { (10, 0.6) };
        let f = random_radial(id, lattice_axes(id, half, spacing), seed).unwrap();
        let g = random_radial(id, lattice_axes(id, half, spacing), seed.wrapping_add(1)).unwrap();
        let r = verify_commutativity(&pair, &f, &g, 1e-3).unwrap();
        prop_assert_eq!(r.status, Status::Pass, "{}", r.to_json());
    }
}

#[test]
fn sampled_function_json_round_trip() {
    let f = gaussian(PairId::Heis1, lattice_axes(PairId::Heis1, 4, 0.5), 0.7).unwrap();
    let back = SampledFunction::from_json(&f.to_json()).unwrap();
    assert!(back.same_grid(&f));
    for (a, b) in back.values.iter().zip(&f.values) {
        assert_abs_diff_eq!(a.re, b.re, epsilon = 0.0);
        assert_abs_diff_eq!(a.im, b.im, epsilon = 0.0);
    }
}
