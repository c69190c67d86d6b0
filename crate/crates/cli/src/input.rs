use std::fmt;
use std::path::{Path, PathBuf};

use hzpos::{BlowupModel, DivisorClass, Position};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent input; names the offending field.
    Input { field: String, message: String },
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn input(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Input {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input { field, message } => write!(f, "invalid input in field `{field}`: {message}"),
            CliError::Io { path, source } => write!(f, "I/O error on {path}: {source}"),
        }
    }
}

impl std::error::Error for CliError {}

/// A line bundle on a blow-up model, as read from flags or a JSON file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub e: u64,
    pub r: usize,
    pub position: Position,
    #[serde(with = "hzpos::int_serde::one")]
    pub a: BigInt,
    #[serde(with = "hzpos::int_serde::one")]
    pub b: BigInt,
    #[serde(with = "hzpos::int_serde::seq")]
    pub m: Vec<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
}

impl BundleSpec {
    pub fn model(&self) -> BlowupModel {
        BlowupModel::new(self.e, self.r, self.position)
    }

    pub fn class(&self) -> DivisorClass {
        DivisorClass::new(self.a.clone(), self.b.clone(), self.m.clone())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.m.len() != self.r {
            return Err(CliError::input(
                "m",
                format!("expected r = {} multiplicities, found {}", self.r, self.m.len()),
            ));
        }
        Ok(())
    }

    pub fn from_json_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let spec: BundleSpec = serde_json::from_str(&text).map_err(|e| json_field_error(&e))?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Best effort at naming the field a serde error is about.
fn json_field_error(err: &serde_json::Error) -> CliError {
    let text = err.to_string();
    let field = ["missing field `", "unknown field `", "duplicate field `"]
        .iter()
        .find_map(|p| {
            let start = text.find(p)? + p.len();
            let len = text[start..].find('`')?;
            Some(text[start..start + len].to_string())
        })
        .unwrap_or_else(|| "json".to_string());
    CliError::input(field, text)
}

/// Raw bundle flags before validation.
#[derive(Debug, Clone, Default)]
pub struct BundleFlags {
    pub e: Option<u64>,
    pub r: Option<usize>,
    pub position: Option<String>,
    pub a: Option<BigInt>,
    pub b: Option<BigInt>,
    pub m: Option<String>,
    pub m_uniform: Option<BigInt>,
    pub k: Option<u32>,
    pub json: Option<PathBuf>,
}

impl BundleFlags {
    pub fn resolve(&self) -> Result<BundleSpec, CliError> {
        if let Some(path) = &self.json {
            let mut spec = BundleSpec::from_json_file(path)?;
            if self.k.is_some() {
                spec.k = self.k;
            }
            return Ok(spec);
        }
        let e = self.e.ok_or_else(|| CliError::input("e", "required"))?;
        let r = self.r.ok_or_else(|| CliError::input("r", "required"))?;
        let position = parse_position(self.position.as_deref())?;
        let a = self.a.clone().ok_or_else(|| CliError::input("a", "required"))?;
        let b = self.b.clone().ok_or_else(|| CliError::input("b", "required"))?;
        let m = multiplicities(self.m.as_deref(), self.m_uniform.as_ref(), r)?;
        let spec = BundleSpec {
            e,
            r,
            position,
            a,
            b,
            m,
            k: self.k,
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn parse_position(s: Option<&str>) -> Result<Position, CliError> {
    match s {
        None => Ok(Position::VeryGeneral),
        Some(s) => s.parse().map_err(|_| {
            CliError::input(
                "position",
                format!("unknown position {s:?} (expected arbitrary, off_ce_distinct_fibers or very_general)"),
            )
        }),
    }
}

/// Comma-separated integers; `field` names the flag in diagnostics.
pub fn parse_csv(s: &str, field: &str) -> Result<Vec<BigInt>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| CliError::input(field, format!("not an integer: {:?}", t.trim())))
        })
        .collect()
}

/// `--m` and `--m-uniform` are mutually exclusive; neither means all zero.
pub fn multiplicities(csv: Option<&str>, uniform: Option<&BigInt>, r: usize) -> Result<Vec<BigInt>, CliError> {
    match (csv, uniform) {
        (Some(_), Some(_)) => Err(CliError::input("m", "give either --m or --m-uniform, not both")),
        (Some(s), None) => parse_csv(s, "m"),
        (None, Some(v)) => Ok(vec![v.clone(); r]),
        (None, None) => Ok(vec![BigInt::from(0); r]),
    }
}
