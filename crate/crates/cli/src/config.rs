//! Parsing of parameter JSON into evaluation points.

use std::path::Path;

use reflectice::{Kind, ParamPoint, Partition, Scalar, SymParams};
use serde_json::{Map, Value};

/// A CLI failure with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input; exit code 2.
    Config(String),
    /// A well-formed input violating a precondition; exit code 3.
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Precondition(m) => m,
        }
    }
}

impl From<reflectice::Error> for CliError {
    fn from(e: reflectice::Error) -> Self {
        match e {
            reflectice::Error::Parse(_) => CliError::Config(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn config<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

/// `--params` is either a path to a JSON file or inline JSON.
pub fn load_params(arg: Option<&str>) -> CliResult<Map<String, Value>> {
    let Some(arg) = arg else {
        return Ok(Map::new());
    };
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Config(format!("cannot read {arg}: {e}")))?
    };
    match serde_json::from_str::<Value>(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => config("parameters must be a JSON object"),
        Err(e) => config(format!("invalid parameter JSON: {e}")),
    }
}

fn scalar(map: &Map<String, Value>, key: &str) -> CliResult<Option<Scalar>> {
    match map.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|e| CliError::Config(format!("field {key:?}: {e}"))),
    }
}

fn scalars(map: &Map<String, Value>, key: &str) -> CliResult<Option<Vec<Scalar>>> {
    match map.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|e| CliError::Config(format!("field {key:?}: {e}"))),
    }
}

fn require<T>(value: Option<T>, key: &str, kind: Kind) -> CliResult<T> {
    value.ok_or_else(|| CliError::Config(format!("type {kind} parameters need {key:?}")))
}

/// Site arrays of length `m + 1`; type II also accepts length `m`
/// (indices 1..=m) with index 0 filled by zero.
fn site_array(map: &Map<String, Value>, key: &str, kind: Kind, m: usize) -> CliResult<Vec<Scalar>> {
    match scalars(map, key)? {
        None => Ok(ParamPoint::zeros(m)),
        Some(v) if v.len() == m + 1 => Ok(v),
        Some(mut v) if kind == Kind::II && v.len() == m => {
            v.insert(0, Scalar::zero());
            Ok(v)
        }
        Some(v) => Err(CliError::Precondition(format!("{key} has length {}, expected {}", v.len(), m + 1))),
    }
}

fn reject(map: &Map<String, Value>, keys: &[&str], kind: Kind) -> CliResult<()> {
    for key in keys {
        if map.contains_key(*key) {
            return config(format!("type {kind} parameters must not supply {key:?}"));
        }
    }
    Ok(())
}

/// Build a point with `m` sites; the spectral list fixes `N`.
pub fn param_point(map: &Map<String, Value>, kind: Kind, m: usize) -> CliResult<ParamPoint> {
    let alpha = site_array(map, "alpha", kind, m)?;
    let gamma = site_array(map, "gamma", kind, m)?;
    let point = match kind {
        Kind::I => {
            reject(map, &["u", "w"], kind)?;
            let t = require(scalar(map, "t")?, "t", kind)?;
            let z = require(scalars(map, "z")?, "z", kind)?;
            ParamPoint::type_one(t, z, alpha, gamma)?
        }
        Kind::II => {
            reject(map, &["t", "z"], kind)?;
            let u = require(scalar(map, "u")?, "u", kind)?;
            let w = require(scalars(map, "w")?, "w", kind)?;
            ParamPoint::type_two(u, w, alpha, gamma)?
        }
    };
    Ok(point)
}

/// Parameters of `sp_λ` (base 0) or `o^±_λ` (base 1) with top index at
/// least `λ₁ + N`; missing arrays are zero of exactly that length.
pub fn sym_params(map: &Map<String, Value>, base: usize, lambda: &Partition) -> CliResult<SymParams> {
    let top = lambda.parts().first().copied().unwrap_or(0) + lambda.len();
    let alpha = scalars(map, "alpha")?;
    let gamma = scalars(map, "gamma")?;
    let len = |v: &Option<Vec<Scalar>>| v.as_ref().map(Vec::len);
    let n = len(&alpha).or(len(&gamma)).unwrap_or(top + 1 - base);
    let alpha = alpha.unwrap_or_else(|| vec![Scalar::zero(); n]);
    let gamma = gamma.unwrap_or_else(|| vec![Scalar::zero(); n]);
    Ok(SymParams::new(alpha, gamma, base)?)
}

pub fn spectral_list(map: &Map<String, Value>, key: &str) -> CliResult<Vec<Scalar>> {
    scalars(map, key)?.ok_or_else(|| CliError::Config(format!("parameters need {key:?}")))
}

pub fn required_scalar(map: &Map<String, Value>, key: &str) -> CliResult<Scalar> {
    scalar(map, key)?.ok_or_else(|| CliError::Config(format!("parameters need {key:?}")))
}

/// A comma-separated integer list flag.
#[derive(Clone, Debug)]
pub struct IntList(pub Vec<usize>);

/// Parse `a,b,c` into integers.
pub fn int_list(s: &str) -> Result<IntList, String> {
    if s.trim().is_empty() {
        return Ok(IntList(Vec::new()));
    }
    s.split(',').map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}"))).collect::<Result<_, _>>().map(IntList)
}
