//! Serializable records shared by the command-line front end and the examples.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::BigRat;
use crate::limits::Limits;
use crate::moments::EnsembleParams;

pub const SCHEMA_VERSION: u32 = 1;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// An exact rational as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&BigRat> for RationalJson {
    fn from(q: &BigRat) -> Self {
        RationalJson {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalJson> for BigRat {
    type Error = crate::error::Error;

    fn try_from(r: &RationalJson) -> crate::error::Result<BigRat> {
        let parse = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|_| crate::error::Error::invalid(format!("not an integer: {s:?}")))
        };
        let den = parse(&r.den)?;
        if den == BigInt::from(0) {
            return Err(crate::error::Error::invalid("zero denominator"));
        }
        Ok(BigRat::new(parse(&r.num)?, den))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything needed to rerun a command and get the same output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub seed: Option<u64>,
    pub limits: Limits,
    pub workers: Option<usize>,
    pub output: Option<String>,
    pub format: Format,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, format: Format, limits: Limits) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
            limits,
            workers: None,
            output: None,
            format,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.parameters.insert(key.to_string(), v);
        self
    }
}

/// A report with its manifest attached.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema_version: u32,
    pub manifest: RunManifest,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(manifest: RunManifest, result: T) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            manifest,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// One exact central moment.
#[derive(Debug, Clone, Serialize)]
pub struct MomentRecord {
    pub params: EnsembleParams,
    pub k: u32,
    pub method: String,
    pub value: RationalJson,
    pub value_f64: f64,
    /// `value / Var^{k/2}`.
    pub normalized: f64,
    pub wall_time_ms: u64,
}
