//! Atomic artifact writes, `.meta.json` sidecars and input readers.

use std::io::Write;
use std::path::{Path, PathBuf};

use gelfand_core::pairs::{PairId, SampledFunction, SampledFunctionDoc};
use gelfand_core::schwartz::LatticeFunction;
use gelfand_core::transform::SpectrumFunction;
use gelfand_core::Complex64;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::exit::CliError;

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
    let fail = |e: std::io::Error| CliError::input(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

pub fn meta_path(artifact: &Path) -> PathBuf {
    let mut s = artifact.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Sidecar metadata. Only run inputs go in, so equal runs give equal bytes.
pub fn metadata(verb: &str, pair: Option<PairId>, cfg: &RunConfig, extra: Map<String, Value>) -> Value {
    let mut m = Map::new();
    m.insert("tool".into(), json!("gelfand"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("verb".into(), json!(verb));
    m.insert("pair".into(), json!(pair.map(|p| p.as_str())));
    m.insert("seed".into(), json!(cfg.seed));
    m.insert("settings".into(), json!(cfg.settings));
    m.extend(extra);
    Value::Object(m)
}

/// Writes the artifact and its sidecar; returns the artifact path.
pub fn emit(path: &Path, bytes: &[u8], meta: &Value) -> Result<PathBuf, CliError> {
    write_atomic(path, bytes)?;
    let text = serde_json::to_string_pretty(meta).expect("metadata serializes") + "\n";
    write_atomic(&meta_path(path), text.as_bytes())?;
    Ok(path.to_path_buf())
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

/// Reads a SampledFunction JSON file; schema errors name the field path.
pub fn read_function(path: &Path) -> Result<SampledFunction, CliError> {
    let text = read_text(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let doc: SampledFunctionDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        CliError::input(format!("{}: schema violation at '{at}': {}", path.display(), e.inner()))
    })?;
    doc.into_function().map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn read_spectrum(path: &Path, pair: PairId) -> Result<SpectrumFunction, CliError> {
    SpectrumFunction::from_csv(pair, &read_text(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// CSV with columns l_1..l_r, value_re, value_im.
pub fn read_lattice(path: &Path) -> Result<LatticeFunction, CliError> {
    let text = read_text(path)?;
    let bad = |msg: String| CliError::input(format!("{}: {msg}", path.display()));
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| bad(format!("csv header: {e}")))?.clone();
    let col = |name: &str| header.iter().position(|h| h.trim() == name).ok_or_else(|| bad(format!("missing column '{name}'")));
    let mut lcols = Vec::new();
    while let Ok(c) = col(&format!("l_{}", lcols.len() + 1)) {
        lcols.push(c);
    }
    if lcols.is_empty() {
        return Err(bad("missing column 'l_1'".into()));
    }
    let (re, im) = (col("value_re")?, col("value_im")?);
    let mut out = LatticeFunction::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(format!("row {}: {e}", line + 1)))?;
        let mut key = Vec::with_capacity(lcols.len());
        for (i, &c) in lcols.iter().enumerate() {
            let v = rec.get(c).unwrap_or("").trim().parse::<i64>();
            key.push(v.map_err(|_| bad(format!("row {}: column 'l_{}' is not an integer", line + 1, i + 1)))?);
        }
        let num = |c: usize, name: &str| {
            rec.get(c).unwrap_or("").trim().parse::<f64>().map_err(|_| bad(format!("row {}: column '{name}' is not a number", line + 1)))
        };
        if out.insert(key, Complex64::new(num(re, "value_re")?, num(im, "value_im")?)).is_some() {
            return Err(bad(format!("row {}: repeated lattice point", line + 1)));
        }
    }
    Ok(out)
}

/// Stem of an input path, used to name derived artifacts.
pub fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into())
}
