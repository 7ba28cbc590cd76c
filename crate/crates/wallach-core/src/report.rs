//! Report envelopes and serialization helpers shared by the library and the
//! command-line tool.
//!
//! Every JSON document the tool emits is wrapped in an [`Envelope`] carrying
//! the schema tag, the command that produced it, the arithmetic mode, and the
//! seed when randomness was involved. Rational scalars serialize as exact
//! strings (`"3/4"`, `"-2"`), never as floats, so reports round-trip without
//! loss and byte-identical reruns are possible.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Schema tag stamped on every JSON report.
pub const SCHEMA: &str = "gw/1";

/// Arithmetic mode of a session: exact rational or floating point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::InvalidInput(format!(
                "unknown mode `{other}` (expected `exact` or `float`)"
            ))),
        }
    }
}

/// Wrapper around every emitted JSON payload.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema: String,
    pub command: String,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub payload: T,
}

impl<T> Envelope<T> {
    pub fn new(command: &str, mode: Mode, payload: T) -> Self {
        Envelope {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            mode,
            seed: None,
            tolerance: None,
            payload,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }
}

/// Pretty JSON with a trailing newline; field order follows struct order, so
/// output is deterministic.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Serde adapter: a rational scalar as an exact string.
pub mod rat_string {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scalar::{parse_rat, Rat};

    pub fn serialize<S: Serializer>(value: &Rat, ser: S) -> std::result::Result<S::Ok, S::Error> {
        value.to_string().serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        parse_rat(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid rational `{s}`")))
    }
}

/// Serde adapter: three rational scalars as an array of exact strings.
pub mod rat_vec3_string {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scalar::{parse_rat, Rat};

    pub fn serialize<S: Serializer>(
        value: &[Rat; 3],
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = value.iter().map(|r| r.to_string()).collect();
        strings.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<[Rat; 3], D::Error> {
        let strings = Vec::<String>::deserialize(de)?;
        if strings.len() != 3 {
            return Err(serde::de::Error::custom(format!(
                "expected 3 components, got {}",
                strings.len()
            )));
        }
        let mut out = Vec::with_capacity(3);
        for s in &strings {
            out.push(
                parse_rat(s)
                    .ok_or_else(|| serde::de::Error::custom(format!("invalid rational `{s}`")))?,
            );
        }
        Ok([out[0].clone(), out[1].clone(), out[2].clone()])
    }
}

/// Serde adapter: an optional rational scalar as an exact string.
pub mod rat_opt_string {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scalar::{parse_rat, Rat};

    pub fn serialize<S: Serializer>(
        value: &Option<Rat>,
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        value.as_ref().map(|r| r.to_string()).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Option<Rat>, D::Error> {
        let s = Option::<String>::deserialize(de)?;
        match s {
            None => Ok(None),
            Some(s) => parse_rat(&s)
                .map(Some)
                .ok_or_else(|| serde::de::Error::custom(format!("invalid rational `{s}`"))),
        }
    }
}
