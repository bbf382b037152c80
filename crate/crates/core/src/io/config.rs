//! Versioned JSON family configurations.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::rational::RationalFamilySpec;
use crate::torus::TorusFamilySpec;
use crate::C64;

/// Schema version written to and required from every document.
pub const SCHEMA_VERSION: u64 = 1;

/// The two-critical-point rational family `z + 2/z − 1/(3z³)` moved to
/// critical values `(2, −1 + i)`.
pub const RATIONAL_EXAMPLE: &str = include_str!("../../configs/rational_example.json");

/// The torus family of `℘² − 4℘` with its four critical values moved by
/// `(i, −i, −1, 1)`.
pub const TORUS_EXAMPLE: &str = include_str!("../../configs/torus_example.json");

/// A family configuration of either kind.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyConfig {
    Rational(RationalFamilySpec),
    Torus(TorusFamilySpec),
}

impl FamilyConfig {
    fn tag(&self) -> &'static str {
        match self {
            FamilyConfig::Rational(_) => "rational",
            FamilyConfig::Torus(_) => "torus",
        }
    }
}

/// Reads and validates a family configuration file.
pub fn load_family_config(path: &std::path::Path) -> Result<FamilyConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::IoError(format!("{}: {e}", path.display())))?;
    parse_family_config(&text)
}

/// Parses and validates a family configuration document.
pub fn parse_family_config(text: &str) -> Result<FamilyConfig> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    let Value::Object(mut obj) = value else {
        return Err(Error::SchemaError("top level must be a JSON object".into()));
    };
    check_version(&mut obj)?;
    let family = match obj.remove("family") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(Error::SchemaError("\"family\" must be a string".into())),
        None => return Err(Error::SchemaError("missing field \"family\"".into())),
    };
    let body = Value::Object(obj);
    let schema = |e: serde_json::Error| Error::SchemaError(e.to_string());
    let cfg = match family.as_str() {
        "rational" => {
            let spec: RationalFamilySpec = serde_json::from_value(body).map_err(schema)?;
            spec.validate()?;
            FamilyConfig::Rational(spec)
        }
        "torus" => {
            let spec: TorusFamilySpec = serde_json::from_value(body).map_err(schema)?;
            spec.validate()?;
            FamilyConfig::Torus(spec)
        }
        other => {
            return Err(Error::SchemaError(format!(
                "unknown family \"{other}\", expected \"rational\" or \"torus\""
            )))
        }
    };
    Ok(cfg)
}

pub(crate) fn check_version(obj: &mut Map<String, Value>) -> Result<()> {
    match obj.remove("v") {
        Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA_VERSION) => Ok(()),
        Some(other) => Err(Error::SchemaError(format!(
            "unsupported schema version {other}, expected {SCHEMA_VERSION}"
        ))),
        None => Err(Error::SchemaError("missing schema version field \"v\"".into())),
    }
}

/// A lattice and optional evaluation points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub omega1: C64,
    pub omega2: C64,
    #[serde(default)]
    pub points: Vec<C64>,
}

/// Three branch points in any order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangleInput {
    pub a1: C64,
    pub a2: C64,
    pub a3: C64,
}

/// Parses a versioned document into `T`, rejecting unknown fields.
pub fn parse_versioned<T: DeserializeOwned>(text: &str) -> Result<T> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    let Value::Object(mut obj) = value else {
        return Err(Error::SchemaError("top level must be a JSON object".into()));
    };
    check_version(&mut obj)?;
    serde_json::from_value(Value::Object(obj)).map_err(|e| Error::SchemaError(e.to_string()))
}

/// Reads a file and parses it with [`parse_versioned`].
pub fn load_versioned<T: DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::IoError(format!("{}: {e}", path.display())))?;
    parse_versioned(&text)
}

/// Serializes a configuration in the form accepted by [`parse_family_config`].
pub fn family_config_json(cfg: &FamilyConfig) -> Result<String> {
    let body = match cfg {
        FamilyConfig::Rational(s) => serde_json::to_value(s),
        FamilyConfig::Torus(s) => serde_json::to_value(s),
    }
    .map_err(|e| Error::SchemaError(e.to_string()))?;
    let Value::Object(fields) = body else {
        unreachable!("family specs serialize to objects")
    };
    let mut obj = Map::new();
    obj.insert("v".into(), Value::from(SCHEMA_VERSION));
    obj.insert("family".into(), Value::from(cfg.tag()));
    obj.extend(fields);
    serde_json::to_string_pretty(&Value::Object(obj)).map_err(|e| Error::SchemaError(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_examples_load() {
        let FamilyConfig::Rational(r) = parse_family_config(RATIONAL_EXAMPLE).unwrap() else {
            panic!("expected a rational family")
        };
        assert_eq!((r.m.clone(), r.n.clone()), (vec![3, 3], vec![3]));
        let FamilyConfig::Torus(t) = parse_family_config(TORUS_EXAMPLE).unwrap() else {
            panic!("expected a torus family")
        };
        assert_eq!(t.n, 4);
    }

    #[test]
    fn error_kinds() {
        assert_eq!(parse_family_config("{").unwrap_err().name(), "ParseError");
        assert_eq!(parse_family_config("[]").unwrap_err().name(), "SchemaError");
        let no_v = RATIONAL_EXAMPLE.replacen("\"v\": 1,", "", 1);
        assert_eq!(parse_family_config(&no_v).unwrap_err().name(), "SchemaError");
        let extra = RATIONAL_EXAMPLE.replacen("\"v\": 1,", "\"v\": 1, \"colour\": 3,", 1);
        assert_eq!(parse_family_config(&extra).unwrap_err().name(), "SchemaError");
        let v2 = RATIONAL_EXAMPLE.replacen("\"v\": 1,", "\"v\": 2,", 1);
        assert_eq!(parse_family_config(&v2).unwrap_err().name(), "SchemaError");
    }

    #[test]
    fn gauge_violation_is_named() {
        let FamilyConfig::Rational(mut r) = parse_family_config(RATIONAL_EXAMPLE).unwrap() else {
            panic!()
        };
        r.a0[0].re += 0.05;
        let text = family_config_json(&FamilyConfig::Rational(r)).unwrap();
        let err = parse_family_config(&text).unwrap_err();
        assert_eq!(err.name(), "ValidationError");
        assert!(err.to_string().contains("normalization"));
    }

    #[test]
    fn lattice_config_parses() {
        let cfg: LatticeConfig =
            parse_versioned(r#"{"v": 1, "omega1": [1, 0], "omega2": [0, 1], "points": [[0.1, 0.2]]}"#).unwrap();
        assert_eq!(cfg.points.len(), 1);
        let bad = parse_versioned::<LatticeConfig>(r#"{"v": 1, "omega1": [1, 0]}"#).unwrap_err();
        assert_eq!(bad.name(), "SchemaError");
    }

    #[test]
    fn round_trip() {
        for text in [RATIONAL_EXAMPLE, TORUS_EXAMPLE] {
            let cfg = parse_family_config(text).unwrap();
            let again = parse_family_config(&family_config_json(&cfg).unwrap()).unwrap();
            assert_eq!(cfg, again);
        }
    }
}
