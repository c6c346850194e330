//! JSON file formats for fans, divisors, instances and corpora.
//!
//! Files are read leniently (ray order is free, coefficients follow the file's
//! ray order) and written canonically: rays sorted, cones sorted, compact JSON
//! followed by a newline. Parsing then writing a canonical file reproduces it.

use std::path::{Path, PathBuf};

use divisors::TorusDivisor;
use exact_core::{fmt_rat, int, parse_rat, IntVec, Rat};
use fan::{fmt_vec, validate, Fan};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::instance::{Instance, Mode, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    /// Syntax or shape errors reported by the JSON reader, with line and column.
    #[error("{origin}: {message}")]
    Json { origin: String, message: String },
    #[error("{origin}: field `{field}`: {message}")]
    Field { origin: String, field: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DivisorFile {
    fan: Value,
    coeffs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub q: String,
    pub m: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    fan: Value,
    #[serde(rename = "B")]
    b: Vec<String>,
    #[serde(rename = "D")]
    d: Vec<String>,
    mode: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<WitnessFile>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorpusFile {
    instances: Vec<Value>,
}

/// Where a document came from, for diagnostics and for resolving relative fan paths.
#[derive(Debug, Clone, Default)]
pub struct Origin {
    pub name: String,
    pub dir: Option<PathBuf>,
}

impl Origin {
    pub fn inline(name: &str) -> Origin {
        Origin { name: name.to_string(), dir: None }
    }

    pub fn file(path: &Path) -> Origin {
        Origin { name: path.display().to_string(), dir: path.parent().map(Path::to_path_buf) }
    }

    fn field(&self, field: impl Into<String>, message: impl Into<String>) -> FormatError {
        FormatError::Field { origin: self.name.clone(), field: field.into(), message: message.into() }
    }
}

fn from_str<T: for<'de> Deserialize<'de>>(text: &str, origin: &Origin) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Json { origin: origin.name.clone(), message: e.to_string() })
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value, origin: &Origin, field: &str) -> Result<T, FormatError> {
    serde_json::from_value(v).map_err(|e| origin.field(field, e.to_string()))
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path)
        .map_err(|e| FormatError::Io { path: path.display().to_string(), message: e.to_string() })
}

/// A parsed fan plus `perm[file index] = canonical index` for its rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedFan {
    pub fan: Fan,
    pub perm: Vec<usize>,
}

impl ParsedFan {
    /// Reorders per-ray data given in file order into canonical order.
    fn reorder<T: Clone + Default>(&self, values: Vec<T>) -> Vec<T> {
        let mut out = vec![T::default(); values.len()];
        for (old, v) in values.into_iter().enumerate() {
            out[self.perm[old]] = v;
        }
        out
    }
}

fn fan_from_file(file: FanFile, origin: &Origin, prefix: &str) -> Result<ParsedFan, FormatError> {
    let f = |s: String| if prefix.is_empty() { s } else { format!("{prefix}.{s}") };
    if file.rank == 0 {
        return Err(origin.field(f("rank".into()), "rank must be positive"));
    }
    let mut rays: Vec<IntVec> = Vec::with_capacity(file.rays.len());
    for (i, r) in file.rays.iter().enumerate() {
        if r.len() != file.rank {
            return Err(
                origin.field(f(format!("rays[{i}]")), format!("has length {}, expected {}", r.len(), file.rank))
            );
        }
        let v: IntVec = r.iter().map(|&x| int(x)).collect();
        if exact_core::primitive(&v).ok().as_ref() != Some(&v) {
            return Err(origin.field(f(format!("rays[{i}]")), format!("ray {} is not primitive", fmt_vec(&v))));
        }
        if rays.contains(&v) {
            return Err(origin.field(f(format!("rays[{i}]")), format!("ray {} is listed twice", fmt_vec(&v))));
        }
        rays.push(v);
    }
    for (k, c) in file.max_cones.iter().enumerate() {
        if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
            return Err(origin.field(f(format!("max_cones[{k}]")), format!("ray index {bad} out of range")));
        }
    }
    let (fan, perm) = Fan::new_with_permutation(file.rank, rays, file.max_cones)
        .map_err(|e| origin.field(f("max_cones".into()), e.to_string()))?;
    if let Err(defects) = validate(&fan) {
        return Err(origin.field(f("max_cones".into()), format!("not a fan: {}", defects[0])));
    }
    Ok(ParsedFan { fan, perm })
}

/// Parses a fan file.
pub fn parse_fan(text: &str, origin: &Origin) -> Result<ParsedFan, FormatError> {
    fan_from_file(from_str(text, origin)?, origin, "")
}

/// A fan given inline or as a path relative to the including document.
fn fan_ref(v: Value, origin: &Origin) -> Result<ParsedFan, FormatError> {
    match v {
        Value::String(p) => {
            let path = match &origin.dir {
                Some(d) => d.join(&p),
                None => PathBuf::from(&p),
            };
            let text = read_file(&path)?;
            parse_fan(&text, &Origin::file(&path))
        }
        Value::Object(_) => fan_from_file(from_value(v, origin, "fan")?, origin, "fan"),
        _ => Err(origin.field("fan", "expected a path or an inline fan object")),
    }
}

fn coeffs(values: &[String], pf: &ParsedFan, origin: &Origin, field: &str) -> Result<TorusDivisor, FormatError> {
    if values.len() != pf.fan.rays().len() {
        return Err(
            origin.field(field, format!("has {} entries, the fan has {} rays", values.len(), pf.fan.rays().len()))
        );
    }
    let mut parsed: Vec<Rat> = Vec::with_capacity(values.len());
    for (i, s) in values.iter().enumerate() {
        parsed.push(parse_rat(s).map_err(|e| origin.field(format!("{field}[{i}]"), e.to_string()))?);
    }
    Ok(TorusDivisor::new(pf.reorder(parsed)))
}

/// Parses a divisor file into its fan and divisor (coefficients in canonical ray order).
pub fn parse_divisor(text: &str, origin: &Origin) -> Result<(Fan, TorusDivisor), FormatError> {
    let file: DivisorFile = from_str(text, origin)?;
    let pf = fan_ref(file.fan, origin)?;
    let d = coeffs(&file.coeffs, &pf, origin, "coeffs")?;
    Ok((pf.fan, d))
}

fn instance_from_value(v: Value, origin: &Origin, index: Option<usize>) -> Result<Instance, FormatError> {
    let file: InstanceFile = match index {
        None => from_value(v, origin, "instance")?,
        Some(i) => from_value(v, origin, &format!("instances[{i}]"))?,
    };
    let pf = fan_ref(file.fan, origin)?;
    let b = coeffs(&file.b, &pf, origin, "B")?;
    let d = coeffs(&file.d, &pf, origin, "D")?;
    let mode = match file.mode {
        1 => Mode::Hyp1,
        2 => Mode::Hyp2,
        other => return Err(origin.field("mode", format!("expected 1 or 2, got {other}"))),
    };
    let mut witness = Vec::new();
    for (j, w) in file.witness.unwrap_or_default().into_iter().enumerate() {
        let q = parse_rat(&w.q).map_err(|e| origin.field(format!("witness[{j}].q"), e.to_string()))?;
        if w.m.len() != pf.fan.rank() {
            return Err(origin.field(format!("witness[{j}].m"), format!("expected {} entries", pf.fan.rank())));
        }
        witness.push(Witness { q, m: w.m.iter().map(|&x| int(x)).collect() });
    }
    let label = file.label.unwrap_or_else(|| match index {
        Some(i) => format!("{}#{i}", origin.name),
        None => origin.name.clone(),
    });
    Ok(Instance { label, x: pf.fan, b, d, mode, witness })
}

pub fn parse_instance(text: &str, origin: &Origin) -> Result<Instance, FormatError> {
    let v: Value = from_str(text, origin)?;
    instance_from_value(v, origin, None)
}

/// A corpus file: `{"instances": [instance, ...]}`.
pub fn parse_corpus(text: &str, origin: &Origin) -> Result<Vec<Instance>, FormatError> {
    let file: CorpusFile = from_str(text, origin)?;
    file.instances.into_iter().enumerate().map(|(i, v)| instance_from_value(v, origin, Some(i))).collect()
}

fn small(x: &exact_core::Int) -> i64 {
    x.to_i64().expect("coordinate fits in 64 bits")
}

pub fn fan_file(f: &Fan) -> FanFile {
    FanFile {
        rank: f.rank(),
        rays: f.rays().iter().map(|u| u.iter().map(small).collect()).collect(),
        max_cones: f.max_cones().to_vec(),
    }
}

fn coeff_strings(d: &TorusDivisor) -> Vec<String> {
    d.coeffs.iter().map(fmt_rat).collect()
}

fn to_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serialisable");
    s.push('\n');
    s
}

pub fn write_fan(f: &Fan) -> String {
    to_line(&fan_file(f))
}

pub fn write_divisor(f: &Fan, d: &TorusDivisor) -> String {
    to_line(&DivisorFile { fan: serde_json::to_value(fan_file(f)).unwrap(), coeffs: coeff_strings(d) })
}

fn instance_file(inst: &Instance) -> InstanceFile {
    InstanceFile {
        label: Some(inst.label.clone()),
        fan: serde_json::to_value(fan_file(&inst.x)).unwrap(),
        b: coeff_strings(&inst.b),
        d: coeff_strings(&inst.d),
        mode: match inst.mode {
            Mode::Hyp1 => 1,
            Mode::Hyp2 => 2,
        },
        witness: match inst.mode {
            Mode::Hyp1 => Some(
                inst.witness
                    .iter()
                    .map(|w| WitnessFile { q: fmt_rat(&w.q), m: w.m.iter().map(small).collect() })
                    .collect(),
            ),
            Mode::Hyp2 => None,
        },
    }
}

pub fn write_instance(inst: &Instance) -> String {
    to_line(&instance_file(inst))
}

/// One instance per line inside the `instances` array.
pub fn write_corpus(instances: &[Instance]) -> String {
    let lines: Vec<String> =
        instances.iter().map(|i| serde_json::to_string(&instance_file(i)).expect("serialisable")).collect();
    if lines.is_empty() {
        return "{\"instances\":[]}\n".into();
    }
    format!("{{\"instances\":[\n{}\n]}}\n", lines.join(",\n"))
}
