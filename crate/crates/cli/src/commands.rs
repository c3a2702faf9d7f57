//! The seven verbs.

use std::path::{Path, PathBuf};

use gelfand_core::families::{gaussian, k_central, ktype_axes, lattice_axes, pure_type, quadrature_axes, random_points, random_radial, ThetaProfile};
use gelfand_core::ktype::{decompose, verify_type_orthogonality};
use gelfand_core::pairs::{spectrum_grid, PairDescriptor, PairId, ParamRange, RangeRule, SampledFunction, SpectrumBounds, SpectrumParams, SpectrumPoint, Symmetry};
use gelfand_core::schwartz::{
    augmented_system, bump_interpolate, change_of_generators, schwartz_extend, verify_decay, verify_extension, verify_interpolation, BumpSpec,
    DecaySpec, DEFAULT_SUBDIVISION,
};
use gelfand_core::transform::{
    inverse_transform, plancherel_grid, relative_l2_error, transform_on, verify_commutativity, verify_eigen, verify_multiplicativity,
    verify_plancherel, verify_positive_definite, verify_round_trip, PlancherelSpec,
};
use gelfand_core::{Report, Status};
use serde_json::{json, Map, Value};

use crate::config::{Profile, RunConfig};
use crate::exit::{CliError, Exit};
use crate::output::{emit, metadata, read_function, read_lattice, read_spectrum, stem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    Plancherel,
    Multiplicativity,
    Commutativity,
    Posdef,
    Eigen,
    KtypeOrthogonality,
    Decay,
    Generators,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Plancherel => "plancherel",
            Check::Multiplicativity => "multiplicativity",
            Check::Commutativity => "commutativity",
            Check::Posdef => "posdef",
            Check::Eigen => "eigen",
            Check::KtypeOrthogonality => "ktype-orthogonality",
            Check::Decay => "decay",
            Check::Generators => "generators",
        }
    }
}

/// What a verb did: its verdict and the lines for stdout.
pub struct Outcome {
    pub exit: Exit,
    pub stdout: String,
}

impl Outcome {
    fn wrote(paths: &[PathBuf]) -> Self {
        let stdout = paths.iter().map(|p| format!("wrote {}\n", p.display())).collect();
        Self { exit: Exit::Pass, stdout }
    }
}

fn artifact(cfg: &RunConfig, default_name: &str) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| cfg.out_dir.join(default_name))
}

fn range(min: f64, max: f64, n: usize) -> ParamRange {
    ParamRange::uniform(min, max, n)
}

fn gl(min: f64, max: f64, n: usize) -> ParamRange {
    ParamRange::uniform(min, max, n).with_rule(RangeRule::GaussLegendre)
}

fn extra(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// An input file's pair must agree with `--pair` when both are given.
fn agree(cfg: &RunConfig, found: PairId) -> Result<PairId, CliError> {
    match cfg.pair {
        Some(p) if p != found => Err(CliError::usage(format!("--pair {p} conflicts with the input, which belongs to {found}"))),
        _ => Ok(found),
    }
}

fn bounds(cfg: &RunConfig, lambda: ParamRange, m: (i64, i64), kmax: u32) -> SpectrumBounds {
    SpectrumBounds { lambda: Some(cfg.lambda.unwrap_or(lambda)), m: Some(cfg.m.unwrap_or(m)), kmax: Some(cfg.kmax.unwrap_or(kmax)), eta: cfg.eta }
}

fn spectrum_csv(pair: &PairDescriptor, points: &[SpectrumPoint]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head: Vec<String> = (1..=pair.ell).map(|i| format!("xi_{i}")).collect();
    head.extend(["family", "lambda", "m", "k", "eta"].map(String::from));
    w.write_record(&head).expect("in-memory csv");
    for p in points {
        let mut row: Vec<String> = p.xi.iter().map(|x| x.to_string()).collect();
        let (family, lambda, m, k, eta) = match p.params {
            SpectrumParams::Radial { lambda } => ("radial", Some(lambda), None, None, None),
            SpectrumParams::Typed { m, lambda } => ("typed", Some(lambda), Some(m), None, None),
            SpectrumParams::Fan { lambda, k } => ("fan", Some(lambda), None, Some(k), None),
            SpectrumParams::Ray { eta } => ("ray", None, None, None, Some(eta)),
        };
        row.push(family.into());
        row.push(lambda.map(|v| v.to_string()).unwrap_or_default());
        row.push(m.map(|v| v.to_string()).unwrap_or_default());
        row.push(k.map(|v| v.to_string()).unwrap_or_default());
        row.push(eta.map(|v| v.to_string()).unwrap_or_default());
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

pub fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let id = cfg.require_pair()?;
    let pair = id.descriptor();
    let lambda = if id == PairId::Heis1 { range(-1.0, 1.0, 3) } else { range(0.0, 4.0, 5) };
    let mut b = bounds(cfg, lambda, (0, 0), 2);
    if id == PairId::Heis1 && b.eta.is_none() {
        // The limit ray, out to the largest first coordinate on the fan.
        let l = b.lambda.unwrap();
        let reach = ((2 * b.kmax.unwrap() + 1) as f64 * l.min.abs().max(l.max.abs())).sqrt();
        b.eta = Some(if reach > 0.0 { range(0.0, reach, l.n.max(2)) } else { range(0.0, 0.0, 1) });
    }
    let points = spectrum_grid(&pair, &b)?;
    let path = artifact(cfg, &format!("spectrum_{id}.csv"));
    let meta = metadata(
        "spectrum",
        Some(id),
        cfg,
        extra(vec![
            ("rows", json!(points.len())),
            ("lambda", json!(b.lambda)),
            ("m", json!(b.m)),
            ("kmax", json!(b.kmax)),
            ("eta", json!(b.eta)),
        ]),
    );
    Ok(Outcome::wrote(&[emit(&path, spectrum_csv(&pair, &points).as_bytes(), &meta)?]))
}

fn plancherel_spec(cfg: &RunConfig, id: PairId, types: (i64, i64)) -> PlancherelSpec {
    let lambda = cfg.lambda.unwrap_or(if id == PairId::Heis1 { gl(-8.0, 8.0, 160) } else { gl(0.0, 12.0, 200) });
    let (lo, hi) = cfg.m.unwrap_or(types);
    PlancherelSpec::new(lambda).types(lo, hi).rays(cfg.kmax.unwrap_or(40))
}

fn default_types(f: &SampledFunction) -> (i64, i64) {
    match &f.symmetry {
        Symmetry::BiKInvariant => (0, 0),
        Symmetry::KCentral => (-8, 8),
        Symmetry::KType(m) => (m[0], m[0]),
    }
}

pub fn transform(cfg: &RunConfig, input: &Path) -> Result<Outcome, CliError> {
    let f = read_function(input)?;
    let id = agree(cfg, f.pair)?;
    let pair = id.descriptor();
    let spec = plancherel_spec(cfg, id, default_types(&f));
    let gh = transform_on(&pair, &f, &plancherel_grid(&pair, &spec)?)?;
    let path = artifact(cfg, &format!("{}.spectrum.csv", stem(input)));
    let meta = metadata(
        "transform",
        Some(id),
        cfg,
        extra(vec![
            ("input", json!(input.display().to_string())),
            ("truncation", json!(f.truncation)),
            ("grid_nodes", json!(f.grid.len())),
            ("grid_shape", json!(f.grid.shape())),
            ("spectrum_points", json!(gh.len())),
            ("lambda", json!(spec.lambda)),
            ("m", json!(spec.m)),
            ("kmax", json!(spec.kmax)),
            ("warnings", json!(gh.warnings)),
        ]),
    );
    Ok(Outcome::wrote(&[emit(&path, gh.to_csv().as_bytes(), &meta)?]))
}

pub fn invert(cfg: &RunConfig, input: &Path) -> Result<Outcome, CliError> {
    let id = cfg.require_pair()?;
    let pair = id.descriptor();
    let gh = read_spectrum(input, id)?;
    let reference = cfg.reference.as_deref().map(read_function).transpose()?;
    if let Some(r) = &reference {
        agree(cfg, r.pair)?;
    }
    let (radius, nodes) = (cfg.radius.unwrap_or(12.0), cfg.nodes.unwrap_or(200));
    let axes = match &reference {
        Some(r) => r.grid.axes().to_vec(),
        None => quadrature_axes(id, radius, nodes),
    };
    let f = inverse_transform(&pair, &gh, axes)?;
    let mut info = vec![
        ("input", json!(input.display().to_string())),
        ("spectrum_points", json!(gh.len())),
        ("grid_nodes", json!(f.grid.len())),
        ("grid_shape", json!(f.grid.shape())),
        ("truncation", json!(f.truncation)),
        ("warnings", json!(f.warnings)),
    ];
    if let Some(r) = &reference {
        info.push(("relative_l2_error", json!(relative_l2_error(&f, r)?)));
    } else {
        info.push(("radius", json!(radius)));
        info.push(("nodes", json!(nodes)));
    }
    let path = artifact(cfg, &format!("{}.inverse.json", stem(input)));
    let meta = metadata("invert", Some(id), cfg, extra(info));
    Ok(Outcome::wrote(&[emit(&path, (f.to_json() + "\n").as_bytes(), &meta)?]))
}

/// Writes the report and maps its status to the exit code.
fn finish(cfg: &RunConfig, name: &str, id: PairId, report: Value, status: Status) -> Result<Outcome, CliError> {
    let path = artifact(cfg, &format!("verify_{name}_{id}.json"));
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let meta = metadata("verify", Some(id), cfg, extra(vec![("check", json!(name)), ("status", json!(status))]));
    emit(&path, text.as_bytes(), &meta)?;
    Ok(Outcome { exit: Exit::of_status(status), stdout: text })
}

fn with_seed(r: Report, cfg: &RunConfig) -> Report {
    r.with("seed", cfg.seed)
}

/// Default half-width of the convolution lattice.
fn lattice_half(id: PairId) -> usize {
    match id {
        PairId::FlatR1 => 64,
        PairId::E2 => 32,
        PairId::U1C | PairId::Heis1 => 10,
    }
}

fn sigma_sample(cfg: &RunConfig, id: PairId, check: Check) -> Result<Vec<SpectrumPoint>, CliError> {
    let heis = id == PairId::Heis1;
    let b = match check {
        Check::Posdef => match id {
            PairId::U1C => bounds(cfg, range(0.0, 4.0, 4), (-2, 2), 0),
            PairId::Heis1 => bounds(cfg, range(-4.0, 4.0, 5), (0, 0), 3),
            _ => bounds(cfg, range(0.0, 4.0, 20), (0, 0), 0),
        },
        Check::Eigen => match id {
            PairId::U1C => bounds(cfg, range(0.0, 4.0, 5), (-8, 8), 0),
            PairId::Heis1 => bounds(cfg, range(-4.0, 4.0, 9), (0, 0), 10),
            _ => bounds(cfg, range(0.0, 4.0, 9), (0, 0), 0),
        },
        Check::Generators => match id {
            PairId::U1C => bounds(cfg, range(0.0, 10.0, 21), (-4, 4), 0),
            PairId::Heis1 => bounds(cfg, range(-4.0, 4.0, 17), (0, 0), 10),
            _ => bounds(cfg, range(0.0, 10.0, 101), (0, 0), 0),
        },
        _ => bounds(cfg, if heis { range(-3.0, 3.0, 7) } else { range(0.0, 3.0, 7) }, (0, 0), 2),
    };
    Ok(spectrum_grid(&id.descriptor(), &b)?)
}

pub fn verify(cfg: &RunConfig, check: Check) -> Result<Outcome, CliError> {
    let id = cfg.require_pair()?;
    let pair = id.descriptor();
    let name = check.name();
    let report = match check {
        Check::Plancherel => {
            let (radius, nodes) = match id {
                PairId::Heis1 => (cfg.radius.unwrap_or(8.0), cfg.nodes.unwrap_or(48)),
                _ => (cfg.radius.unwrap_or(12.0), cfg.nodes.unwrap_or(200)),
            };
            let tol = cfg.tolerance(name, if id == PairId::Heis1 { 1e-3 } else { 1e-5 });
            let f = gaussian(id, quadrature_axes(id, radius, nodes), 1.0)?;
            let spec = plancherel_spec(cfg, id, (0, 0));
            let parts = vec![verify_plancherel(&pair, &f, &spec, tol)?, verify_round_trip(&pair, &f, &spec, tol)?];
            Report::all("plancherel", id, tol, parts).with("radius", radius).with("nodes", nodes)
        }
        Check::Multiplicativity | Check::Commutativity => {
            let half = cfg.half.unwrap_or(lattice_half(id));
            let spacing = cfg.spacing.unwrap_or(6.0 / half as f64);
            let f = random_radial(id, lattice_axes(id, half, spacing), cfg.seed)?;
            let g = random_radial(id, lattice_axes(id, half, spacing), cfg.seed.wrapping_add(1))?;
            let tol = cfg.tolerance(name, 1e-3);
            let r = if check == Check::Commutativity {
                verify_commutativity(&pair, &f, &g, tol)?
            } else {
                verify_multiplicativity(&pair, &f, &g, &sigma_sample(cfg, id, check)?, tol)?
            };
            r.with("half", half).with("spacing", spacing)
        }
        Check::Posdef => {
            let tol = cfg.tolerance(name, 1e-8);
            let n = cfg.points.unwrap_or(50);
            let pts = random_points(&pair, n, cfg.radius.unwrap_or(3.0), cfg.seed);
            let parts = sigma_sample(cfg, id, check)?
                .iter()
                .map(|s| verify_positive_definite(&pair, s, &pts, tol))
                .collect::<Result<Vec<_>, _>>()?;
            Report::all("posdef", id, tol, parts)
        }
        Check::Eigen => {
            let tol = cfg.tolerance(name, 1e-3);
            let step = cfg.step.unwrap_or(1e-3);
            let parts = sigma_sample(cfg, id, check)?.iter().map(|s| verify_eigen(&pair, s, step, tol)).collect::<Result<Vec<_>, _>>()?;
            Report::all("eigen", id, tol, parts).with("step", step)
        }
        Check::KtypeOrthogonality => {
            let tol = cfg.tolerance(name, 1e-10);
            if id != PairId::U1C {
                return Err(CliError::usage(format!("ktype-orthogonality needs a strong pair; {id} is not one")));
            }
            let (a, b) = cfg.m.unwrap_or((1, 2));
            let axes = lattice_axes(id, cfg.half.unwrap_or(8), cfg.spacing.unwrap_or(0.75));
            verify_type_orthogonality(&pair, &pure_type(a, axes.clone(), 1.0)?, &pure_type(b, axes, 1.0)?, tol)?
        }
        Check::Decay => {
            if id != PairId::U1C {
                return Err(CliError::usage(format!("decay is checked per K-type and needs a strong pair; {id} is not one")));
            }
            let spec = DecaySpec::new(cfg.n.unwrap_or(2), cfg.m_order.unwrap_or(3), cfg.max_types.unwrap_or(64));
            let profile = match cfg.profile {
                Profile::Gaussian => ThetaProfile::Gaussian { s: 1.0 },
                Profile::Abs => ThetaProfile::Abs,
            };
            let axes = ktype_axes(spec.max_types, cfg.radius.unwrap_or(10.0), cfg.nodes.unwrap_or(64));
            let r = verify_decay(&pair, &k_central(profile, axes, 1.0)?, &spec)?;
            let csv_path = artifact(cfg, &format!("verify_decay_{id}.json")).with_extension("csv");
            let meta = metadata("verify", Some(id), cfg, extra(vec![("check", json!(name)), ("status", json!(r.status))]));
            emit(&csv_path, r.to_csv().as_bytes(), &meta)?;
            let mut v = serde_json::to_value(&r).expect("report serializes");
            v["seed"] = json!(cfg.seed);
            return finish(cfg, name, id, v, r.status);
        }
        Check::Generators => {
            let (p, q) = augmented_system(&pair);
            change_of_generators(&pair, &p, &q, &sigma_sample(cfg, id, check)?)?
        }
    };
    let report = with_seed(report, cfg);
    let status = report.status;
    finish(cfg, name, id, serde_json::to_value(&report).expect("report serializes"), status)
}

pub fn decompose_cmd(cfg: &RunConfig, input: &Path) -> Result<Outcome, CliError> {
    let f = read_function(input)?;
    let id = agree(cfg, f.pair)?;
    let pair = id.descriptor();
    let max_types = cfg.max_types.unwrap_or(16);
    let rel = cfg.tolerance("decompose", 1e-8);
    let dec = decompose(&pair, &f, max_types)?;
    let index = artifact(cfg, &format!("{}.index.csv", stem(input)));
    let dir = index.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut written = Vec::new();
    for c in &dec.components {
        let path = dir.join(format!("{}.m{}.json", stem(input), c.index.m[0]));
        let meta = metadata(
            "decompose",
            Some(id),
            cfg,
            extra(vec![("m", json!(c.index.m)), ("l2_norm", json!(c.l2_norm)), ("tail_flag", json!(dec.tail_flag(c, rel)))]),
        );
        written.push(emit(&path, (c.function.to_json() + "\n").as_bytes(), &meta)?);
    }
    let meta = metadata(
        "decompose",
        Some(id),
        cfg,
        extra(vec![
            ("input", json!(input.display().to_string())),
            ("max_type", json!(max_types)),
            ("l2_norm", json!(dec.l2_norm)),
            ("tail_norm", json!(dec.tail_norm)),
            ("relative_tail", json!(dec.relative_tail())),
            ("tail_flag_threshold", json!(rel)),
            ("types", json!(written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>())),
        ]),
    );
    written.insert(0, emit(&index, dec.index_csv(rel).as_bytes(), &meta)?);
    Ok(Outcome::wrote(&written))
}

fn bump(cfg: &RunConfig) -> Result<(BumpSpec, u32), CliError> {
    let spec = match cfg.bump_radius {
        Some(r) => BumpSpec::new(r)?,
        None => BumpSpec::default(),
    };
    Ok((spec, cfg.subdivision.unwrap_or(DEFAULT_SUBDIVISION)))
}

pub fn interpolate(cfg: &RunConfig, input: &Path) -> Result<Outcome, CliError> {
    let a = read_lattice(input)?;
    let (spec, sub) = bump(cfg)?;
    let n_max = cfg.n.unwrap_or(3);
    let h = bump_interpolate(&a, &spec, sub)?;
    let report = verify_interpolation(&a, &spec, n_max, sub)?.with("seed", cfg.seed);
    let path = artifact(cfg, &format!("{}.interp.csv", stem(input)));
    let meta = metadata(
        "interpolate",
        cfg.pair,
        cfg,
        extra(vec![
            ("input", json!(input.display().to_string())),
            ("bump_radius", json!(spec.radius)),
            ("subdivision", json!(sub)),
            ("report", serde_json::to_value(&report).expect("report serializes")),
        ]),
    );
    let path = emit(&path, h.to_csv().as_bytes(), &meta)?;
    Ok(Outcome { exit: Exit::of_status(report.status), ..Outcome::wrote(&[path]) })
}

pub fn extend(cfg: &RunConfig, input: &Path) -> Result<Outcome, CliError> {
    let id = cfg.require_pair()?;
    let pair = id.descriptor();
    let gh = read_spectrum(input, id)?;
    let (spec, sub) = bump(cfg)?;
    let ext = schwartz_extend(&pair, &gh, &spec, sub)?;
    let report = verify_extension(&pair, &gh, &spec, sub)?.with("seed", cfg.seed);
    let path = artifact(cfg, &format!("{}.extension.csv", stem(input)));
    let meta = metadata(
        "extend",
        Some(id),
        cfg,
        extra(vec![
            ("input", json!(input.display().to_string())),
            ("bump_radius", json!(spec.radius)),
            ("subdivision", json!(sub)),
            ("decay", serde_json::to_value(&ext.decay).expect("report serializes")),
            ("report", serde_json::to_value(&report).expect("report serializes")),
        ]),
    );
    let path = emit(&path, ext.function.to_csv().as_bytes(), &meta)?;
    Ok(Outcome { exit: Exit::of_status(report.status), ..Outcome::wrote(&[path]) })
}
