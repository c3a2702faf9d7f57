use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gelfand_core::families::{gaussian, k_central, ktype_axes, quadrature_axes, ThetaProfile};
use gelfand_core::pairs::PairId;
use gelfand_core::schwartz::{type_spectrum, DecaySpec};
use gelfand_core::Complex64;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gelfand"));
    c.env_remove("GELFAND_CONFIG");
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read(p: impl AsRef<Path>) -> String {
    std::fs::read_to_string(p).expect("artifact exists")
}

fn meta(p: impl AsRef<Path>) -> Value {
    let mut s = p.as_ref().as_os_str().to_owned();
    s.push(".meta.json");
    serde_json::from_str(&read(PathBuf::from(s))).unwrap()
}

/// Rows of a CSV as header-keyed string maps.
fn rows(text: &str) -> Vec<std::collections::HashMap<String, String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let h = r.headers().unwrap().clone();
    r.records().map(|rec| h.iter().map(String::from).zip(rec.unwrap().iter().map(String::from)).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

/// J₀(x) = (1/π)∫₀^π cos(x sin τ) dτ; the trapezoid rule is spectrally
/// accurate on this periodic integrand.
fn j0(x: f64) -> f64 {
    let n = 400;
    (0..n).map(|i| (x * (PI * i as f64 / n as f64).sin()).cos()).sum::<f64>() / n as f64
}

#[test]
fn spectrum_e2_squares_lambda() {
    let d = tempfile::tempdir().unwrap();
    let o = run(d.path(), &["spectrum", "--pair", "e2", "--lambda", "0:4:5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let xi: Vec<f64> = rows(&read(d.path().join("spectrum_e2.csv"))).iter().map(|r| num(&r["xi_1"])).collect();
    assert_eq!(xi, vec![0.0, 1.0, 4.0, 9.0, 16.0]);
}

#[test]
fn spectrum_heis1_has_fan_and_limit_ray() {
    let d = tempfile::tempdir().unwrap();
    let o = run(d.path(), &["spectrum", "--pair", "heis1", "--kmax", "2", "--lambda", "-1:1:3"]);
    assert_eq!(code(&o), 0);
    let r = rows(&read(d.path().join("spectrum_heis1.csv")));
    let fan: Vec<_> = r.iter().filter(|r| r["family"] == "fan").collect();
    let ray: Vec<_> = r.iter().filter(|r| r["family"] == "ray").collect();
    assert_eq!(fan.len(), 9);
    assert!(!ray.is_empty());
    for f in &fan {
        let k = num(&f["k"]);
        assert!((num(&f["xi_1"]) - num(&f["xi_2"]).abs() * (2.0 * k + 1.0)).abs() < 1e-12);
    }
    for q in &ray {
        assert_eq!(num(&q["xi_2"]), 0.0);
        assert!((num(&q["xi_1"]) - num(&q["eta"]).powi(2)).abs() < 1e-12);
    }
}

#[test]
fn unknown_pair_is_a_usage_error() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(d.path(), &["spectrum", "--pair", "bogus"])), 2);
    assert_eq!(code(&run(d.path(), &["verify", "nonsense", "--pair", "e2"])), 2);
    assert_eq!(code(&run(d.path(), &["spectrum"])), 2);
}

#[test]
fn identical_runs_give_identical_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [a.path(), b.path()] {
        assert_eq!(code(&run(d, &["spectrum", "--pair", "heis1", "--kmax", "3", "--seed", "11"])), 0);
        assert_eq!(code(&run(d, &["verify", "posdef", "--pair", "u1_c", "--points", "20", "--seed", "11"])), 0);
    }
    for f in ["spectrum_heis1.csv", "spectrum_heis1.csv.meta.json", "verify_posdef_u1_c.json", "verify_posdef_u1_c.json.meta.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    assert_eq!(meta(a.path().join("spectrum_heis1.csv"))["seed"], 11);
    let report: Value = serde_json::from_str(&read(a.path().join("verify_posdef_u1_c.json"))).unwrap();
    assert_eq!(report["details"]["seed"], 11);
}

#[test]
fn different_seeds_change_random_samples() {
    let d = tempfile::tempdir().unwrap();
    let a = run(d.path(), &["verify", "posdef", "--pair", "e2", "--points", "10", "--seed", "1"]);
    let b = run(d.path(), &["verify", "posdef", "--pair", "e2", "--points", "10", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

fn write_function(dir: &Path, name: &str, f: &gelfand_core::pairs::SampledFunction) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, f.to_json()).unwrap();
    p
}

#[test]
fn gaussian_transform_on_e2() {
    let d = tempfile::tempdir().unwrap();
    let f = gaussian(PairId::E2, quadrature_axes(PairId::E2, 12.0, 200), 1.0).unwrap();
    write_function(d.path(), "g.json", &f);
    let o = run(d.path(), &["transform", "g.json", "--lambda", "0:6:25"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&read(d.path().join("g.spectrum.csv")));
    assert_eq!(r.len(), 25);
    for row in &r {
        let lambda = num(&row["xi_1"]).sqrt();
        // independent radial quadrature of 2π ∫ e^{−r²/2} J₀(λr) r dr
        // (composite Simpson on [0, 12])
        let (n, h) = (2400, 0.005);
        let g = |r: f64| 2.0 * PI * (-0.5 * r * r).exp() * j0(lambda * r) * r;
        let oracle: f64 = (0..=n).map(|i| if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h)).sum::<f64>() * h / 3.0;
        assert!((oracle - 2.0 * PI * (-0.5 * lambda * lambda).exp()).abs() < 1e-8);
        assert!((num(&row["value_re"]) - oracle).abs() < 1e-6, "lambda {lambda}");
        assert!(num(&row["value_im"]).abs() < 1e-12);
    }
    let m = meta(d.path().join("g.spectrum.csv"));
    assert_eq!(m["truncation"], 12.0);
    assert_eq!(m["grid_nodes"], 200);
}

#[test]
fn zero_function_has_zero_transform() {
    let d = tempfile::tempdir().unwrap();
    let f = gaussian(PairId::Heis1, quadrature_axes(PairId::Heis1, 4.0, 16), 1.0).unwrap();
    let zero = f.with_values(vec![Complex64::new(0.0, 0.0); f.values.len()]);
    write_function(d.path(), "z.json", &zero);
    assert_eq!(code(&run(d.path(), &["transform", "z.json", "--lambda", "-2:2:5:gl", "--kmax", "3"])), 0);
    let r = rows(&read(d.path().join("z.spectrum.csv")));
    assert_eq!(r.len(), 20);
    assert!(r.iter().all(|row| num(&row["value_re"]) == 0.0 && num(&row["value_im"]) == 0.0));
}

#[test]
fn transform_then_invert_round_trip() {
    let d = tempfile::tempdir().unwrap();
    let f = gaussian(PairId::E2, quadrature_axes(PairId::E2, 12.0, 200), 1.0).unwrap();
    write_function(d.path(), "g.json", &f);
    assert_eq!(code(&run(d.path(), &["transform", "g.json"])), 0);
    let o = run(d.path(), &["invert", "g.spectrum.csv", "--pair", "e2", "--reference", "g.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let err = meta(d.path().join("g.spectrum.inverse.json"))["relative_l2_error"].as_f64().unwrap();
    assert!(err < 1e-5, "{err}");
    let back = gelfand_core::pairs::SampledFunction::from_json(&read(d.path().join("g.spectrum.inverse.json"))).unwrap();
    assert!(back.same_grid(&f));
}

#[test]
fn schema_violation_names_the_field() {
    let d = tempfile::tempdir().unwrap();
    let f = gaussian(PairId::E2, quadrature_axes(PairId::E2, 4.0, 16), 1.0).unwrap();
    let mut v: Value = serde_json::from_str(&f.to_json()).unwrap();
    v["grid"][0]["n"] = Value::String("many".into());
    std::fs::write(d.path().join("bad.json"), v.to_string()).unwrap();
    let o = run(d.path(), &["transform", "bad.json"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("grid[0].n"), "{}", String::from_utf8_lossy(&o.stderr));

    let mut v: Value = serde_json::from_str(&f.to_json()).unwrap();
    v["values_im"].as_array_mut().unwrap().pop();
    std::fs::write(d.path().join("short.json"), v.to_string()).unwrap();
    let o = run(d.path(), &["transform", "short.json"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("values_im"));

    std::fs::write(d.path().join("bad.csv"), "xi_1,value_re\n1,2\n").unwrap();
    assert_eq!(code(&run(d.path(), &["invert", "bad.csv", "--pair", "e2"])), 3);
    assert_eq!(code(&run(d.path(), &["transform", "missing.json"])), 3);
}

#[test]
fn invert_needs_weights() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("nw.csv"), "xi_1,value_re,value_im,weight\n1,1,0,\n4,0.5,0,\n").unwrap();
    assert_eq!(code(&run(d.path(), &["invert", "nw.csv", "--pair", "e2"])), 3);
}

#[test]
fn verify_examples() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(d.path(), &["verify", "posdef", "--pair", "heis1", "--points", "50", "--tol", "1e-8"])), 0);
    let o = run(d.path(), &["verify", "decay", "--pair", "u1_c", "--N", "2", "--M", "3"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["status"], "pass");
    assert!(d.path().join("verify_decay_u1_c.csv").exists());
    assert_eq!(code(&run(d.path(), &["verify", "eigen", "--pair", "e2", "--step", "1"])), 4);
}

#[test]
fn verify_failures_and_inapplicable_checks() {
    let d = tempfile::tempdir().unwrap();
    let o = run(d.path(), &["verify", "decay", "--pair", "u1_c", "--profile", "abs", "--M", "4"]);
    assert_eq!(code(&o), 1);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["pass"], false);
    assert_eq!(code(&run(d.path(), &["verify", "decay", "--pair", "e2"])), 2);
    assert_eq!(code(&run(d.path(), &["verify", "ktype-orthogonality", "--pair", "heis1"])), 2);
    assert_eq!(code(&run(d.path(), &["verify", "ktype-orthogonality", "--pair", "u1_c", "--m", "2:2"])), 2);
    assert_eq!(code(&run(d.path(), &["verify", "ktype-orthogonality", "--pair", "u1_c"])), 0);
    // an impossible tolerance fails rather than erroring
    assert_eq!(code(&run(d.path(), &["verify", "commutativity", "--pair", "e2", "--tol", "1e-300"])), 1);
}

#[test]
fn config_file_layering() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("run.conf"), "# spectrum settings\npair = e2\nlambda = 0:2:3\nseed = 5\n").unwrap();
    assert_eq!(code(&run(d.path(), &["spectrum", "--config", "run.conf"])), 0);
    assert_eq!(rows(&read(d.path().join("spectrum_e2.csv"))).len(), 3);
    assert_eq!(meta(d.path().join("spectrum_e2.csv"))["seed"], 5);

    assert_eq!(code(&run(d.path(), &["spectrum", "--config", "run.conf", "--lambda", "0:2:4"])), 0);
    assert_eq!(rows(&read(d.path().join("spectrum_e2.csv"))).len(), 4);

    let o = bin().current_dir(d.path()).env("GELFAND_CONFIG", "run.conf").args(["spectrum", "--out", "env.csv"]).output().unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&read(d.path().join("env.csv"))).len(), 3);
}

#[test]
fn config_validation() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("bad.conf"), "pair = e2\ncolour = blue\n").unwrap();
    assert_eq!(code(&run(d.path(), &["spectrum", "--config", "bad.conf"])), 2);
    std::fs::write(d.path().join("tol.conf"), "pair = e2\ntol.posdef = 0\n").unwrap();
    assert_eq!(code(&run(d.path(), &["verify", "posdef", "--config", "tol.conf"])), 2);
    assert_eq!(code(&run(d.path(), &["verify", "posdef", "--pair", "e2", "--tol", "-1"])), 2);
    assert_eq!(code(&run(d.path(), &["verify", "plancherel", "--pair", "e2", "--nodes", "4"])), 2);
    assert_eq!(code(&run(d.path(), &["spectrum", "--pair", "e2", "--lambda", "0:4"])), 2);
    assert_eq!(code(&run(d.path(), &["spectrum", "--config", "absent.conf"])), 2);
}

#[test]
fn per_check_tolerance_from_file() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("t.conf"), "pair = e2\ntol = 1e-300\ntol.commutativity = 1e-3\n").unwrap();
    assert_eq!(code(&run(d.path(), &["verify", "commutativity", "--config", "t.conf"])), 0);
    assert_eq!(code(&run(d.path(), &["verify", "commutativity", "--config", "t.conf", "--tol", "1e-300"])), 1);
}

#[test]
fn decompose_writes_types_and_index() {
    let d = tempfile::tempdir().unwrap();
    let f = k_central(ThetaProfile::Gaussian { s: 1.0 }, ktype_axes(8, 6.0, 24), 1.0).unwrap();
    write_function(d.path(), "kc.json", &f);
    let o = run(d.path(), &["decompose", "kc.json", "--max-types", "8"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let idx = rows(&read(d.path().join("kc.index.csv")));
    assert_eq!(idx.len(), 17);
    let sum: Vec<_> = idx.iter().map(|r| num(&r["l2_norm"])).collect();
    assert!(sum[0] > sum[16]);
    let m3 = gelfand_core::pairs::SampledFunction::from_json(&read(d.path().join("kc.m3.json"))).unwrap();
    assert_eq!(m3.symmetry, gelfand_core::pairs::Symmetry::KType(vec![3]));
    assert!(meta(d.path().join("kc.index.csv"))["relative_tail"].as_f64().unwrap() < 1e-8);
}

#[test]
fn interpolate_lattice_csv() {
    let d = tempfile::tempdir().unwrap();
    let mut text = String::from("l_1,value_re,value_im\n");
    for m in -4i64..=4 {
        text += &format!("{m},{},0\n", (-((m * m) as f64) / 2.0).exp());
    }
    std::fs::write(d.path().join("a.csv"), text).unwrap();
    let o = run(d.path(), &["interpolate", "a.csv", "--N", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = meta(d.path().join("a.interp.csv"));
    assert_eq!(m["report"]["status"], "pass");
    assert!(d.path().join("a.interp.csv").exists());

    std::fs::write(d.path().join("dup.csv"), "l_1,value_re,value_im\n0,1,0\n0,2,0\n").unwrap();
    assert_eq!(code(&run(d.path(), &["interpolate", "dup.csv"])), 3);
    assert_eq!(code(&run(d.path(), &["interpolate", "a.csv", "--bump-radius", "0.6"])), 2);
}

#[test]
fn extend_u1c_transform() {
    let d = tempfile::tempdir().unwrap();
    let pair = PairId::U1C.descriptor();
    let f = k_central(ThetaProfile::Gaussian { s: 1.0 }, ktype_axes(6, 10.0, 48), 1.0).unwrap();
    let spec = DecaySpec { xi_max: 20.0, xi_points: 81, ..DecaySpec::new(2, 3, 6) };
    let (gh, _) = type_spectrum(&pair, &f, &spec).unwrap();
    std::fs::write(d.path().join("gh.csv"), gh.to_csv()).unwrap();
    let o = run(d.path(), &["extend", "gh.csv", "--pair", "u1_c", "--subdivision", "64"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(meta(d.path().join("gh.extension.csv"))["report"]["status"], "pass");

    // no decay across types: refused
    let flat = gelfand_core::transform::SpectrumFunction::new(PairId::U1C, gh.points.clone(), vec![Complex64::new(1.0, 0.0); gh.len()], None).unwrap();
    std::fs::write(d.path().join("flat.csv"), flat.to_csv()).unwrap();
    assert_eq!(code(&run(d.path(), &["extend", "flat.csv", "--pair", "u1_c", "--subdivision", "64"])), 1);
}

#[test]
fn help_describes_every_verb() {
    let o = bin().arg("--help").output().unwrap();
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout).to_string();
    for verb in ["spectrum", "transform", "invert", "verify", "decompose", "interpolate", "extend"] {
        assert!(text.contains(verb), "{verb}");
        let sub = bin().args([verb, "--help"]).output().unwrap();
        assert_eq!(code(&sub), 0);
        assert!(sub.stdout.len() > 200, "{verb}");
    }
}
