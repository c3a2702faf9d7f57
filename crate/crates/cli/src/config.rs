//! Run configuration: defaults < key = value file < command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gelfand_core::pairs::{PairId, ParamRange};

use crate::exit::CliError;

/// Environment variable naming the config file when `--config` is absent.
pub const CONFIG_ENV: &str = "GELFAND_CONFIG";

/// Keys accepted in config files and as flags.
pub const KEYS: &[&str] = &[
    "pair",
    "seed",
    "out",
    "out_dir",
    "lambda",
    "m",
    "kmax",
    "eta",
    "nodes",
    "radius",
    "half",
    "spacing",
    "points",
    "step",
    "N",
    "M",
    "max_types",
    "profile",
    "bump_radius",
    "subdivision",
    "tol",
    "reference",
];

/// Checks with their own `tol.<check>` key.
pub const CHECKS: &[&str] = &[
    "plancherel",
    "multiplicativity",
    "commutativity",
    "posdef",
    "eigen",
    "ktype-orthogonality",
    "decay",
    "generators",
    "decompose",
];

pub const MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Gaussian,
    Abs,
}

/// Resolved settings. Unset options fall back to per-verb defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub pair: Option<PairId>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub lambda: Option<ParamRange>,
    pub m: Option<(i64, i64)>,
    pub kmax: Option<u32>,
    pub eta: Option<ParamRange>,
    pub nodes: Option<usize>,
    pub radius: Option<f64>,
    pub half: Option<usize>,
    pub spacing: Option<f64>,
    pub points: Option<usize>,
    pub step: Option<f64>,
    pub n: Option<u32>,
    pub m_order: Option<u32>,
    pub max_types: Option<u32>,
    pub profile: Profile,
    pub bump_radius: Option<f64>,
    pub subdivision: Option<u32>,
    pub reference: Option<PathBuf>,
    tol_flag: Option<f64>,
    tol_file: Option<f64>,
    tol_checks: BTreeMap<String, f64>,
    /// Every key that was set, as text; echoed into metadata.
    pub settings: BTreeMap<String, String>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str, origin: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("{origin}:{}: expected 'key = value'", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        let known = KEYS.contains(&k) || k.strip_prefix("tol.").is_some_and(|c| CHECKS.contains(&c));
        if !known {
            return Err(CliError::usage(format!("{origin}:{}: unknown key '{k}'", i + 1)));
        }
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

pub fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text, &path.display().to_string())
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::usage(format!("{key}: cannot parse '{v}'")))
}

fn parse_range(key: &str, v: &str) -> Result<ParamRange, CliError> {
    v.parse::<ParamRange>().map_err(|e| CliError::usage(format!("{key}: {e}")))
}

/// `lo:hi` or a single integer.
fn parse_type_range(v: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::usage(format!("m: expected 'lo:hi' or an integer, got '{v}'"));
    let (lo, hi) = match v.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let m = v.trim().parse().map_err(|_| bad())?;
            (m, m)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::usage(format!("{key} must be positive, got {v}")))
    }
}

fn node_count(key: &str, v: usize) -> Result<usize, CliError> {
    if v >= MIN_NODES {
        Ok(v)
    } else {
        Err(CliError::usage(format!("{key} must be at least {MIN_NODES}, got {v}")))
    }
}

impl RunConfig {
    /// Flags win over file values.
    pub fn resolve(file: BTreeMap<String, String>, flags: BTreeMap<String, String>) -> Result<Self, CliError> {
        let mut tol_checks = BTreeMap::new();
        for (k, v) in &file {
            if let Some(check) = k.strip_prefix("tol.") {
                tol_checks.insert(check.to_string(), positive(k, parse(k, v)?)?);
            }
        }
        let tol_file = file.get("tol").map(|v| parse("tol", v).and_then(|t| positive("tol", t))).transpose()?;
        let tol_flag = flags.get("tol").map(|v| parse("tol", v).and_then(|t| positive("tol", t))).transpose()?;
        let mut settings = file;
        settings.extend(flags);
        let get = |k: &str| settings.get(k).map(String::as_str);

        let mut cfg = RunConfig {
            pair: get("pair").map(|v| v.parse::<PairId>().map_err(|e| CliError::usage(e.to_string()))).transpose()?,
            seed: get("seed").map(|v| parse("seed", v)).transpose()?.unwrap_or(0),
            out: get("out").map(PathBuf::from),
            out_dir: get("out_dir").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".")),
            lambda: get("lambda").map(|v| parse_range("lambda", v)).transpose()?,
            m: get("m").map(parse_type_range).transpose()?,
            kmax: get("kmax").map(|v| parse("kmax", v)).transpose()?,
            eta: get("eta").map(|v| parse_range("eta", v)).transpose()?,
            nodes: get("nodes").map(|v| parse("nodes", v).and_then(|n| node_count("nodes", n))).transpose()?,
            radius: get("radius").map(|v| parse("radius", v).and_then(|r| positive("radius", r))).transpose()?,
            half: get("half").map(|v| parse("half", v)).transpose()?,
            spacing: get("spacing").map(|v| parse("spacing", v).and_then(|r| positive("spacing", r))).transpose()?,
            points: get("points").map(|v| parse("points", v)).transpose()?,
            step: get("step").map(|v| parse("step", v).and_then(|r| positive("step", r))).transpose()?,
            n: get("N").map(|v| parse("N", v)).transpose()?,
            m_order: get("M").map(|v| parse("M", v)).transpose()?,
            max_types: get("max_types").map(|v| parse("max_types", v)).transpose()?,
            profile: match get("profile") {
                None | Some("gaussian") => Profile::Gaussian,
                Some("abs") => Profile::Abs,
                Some(o) => return Err(CliError::usage(format!("profile: expected 'gaussian' or 'abs', got '{o}'"))),
            },
            bump_radius: get("bump_radius").map(|v| parse("bump_radius", v).and_then(|r| positive("bump_radius", r))).transpose()?,
            subdivision: get("subdivision")
                .map(|v| parse::<u32>("subdivision", v).and_then(|n| node_count("subdivision", n as usize).map(|n| n as u32)))
                .transpose()?,
            reference: get("reference").map(PathBuf::from),
            tol_flag,
            tol_file,
            tol_checks,
            settings: BTreeMap::new(),
        };
        cfg.settings = settings;
        if let Some(r) = cfg.lambda {
            if r.n == 0 {
                return Err(CliError::usage("lambda: the range needs at least one node"));
            }
        }
        Ok(cfg)
    }

    /// `--tol` from the command line, then `tol.<check>`, then `tol`, then the default.
    pub fn tolerance(&self, check: &str, default: f64) -> f64 {
        self.tol_flag.or_else(|| self.tol_checks.get(check).copied()).or(self.tol_file).unwrap_or(default)
    }

    pub fn require_pair(&self) -> Result<PairId, CliError> {
        self.pair.ok_or_else(|| CliError::usage("--pair is required"))
    }
}
