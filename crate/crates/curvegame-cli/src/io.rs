//! Strict JSON input parsing (duplicate keys rejected) and deterministic
//! numeric formatting for reports.

use serde::de::{Error as DeError, MapAccess, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer};
use std::fmt;
use std::fs;
use std::path::Path;
use thiserror::Error;

/// Command failures mapped onto the exit-code contract.
#[derive(Debug, Error)]
pub enum CliError {
    /// Exit 1: unreadable or structurally invalid input file.
    #[error("{0}")]
    Malformed(String),
    /// Exit 2: readable input that fails semantic validation.
    #[error("{0}")]
    Validation(String),
    /// Exit 3: dynamics hit the iteration cap.
    #[error("{0}")]
    NonConvergence(String),
    /// Exit 4: oracle disagreed with the analytic solver.
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Malformed(_) => 1,
            CliError::Validation(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }
}

pub fn validation(err: impl fmt::Display) -> CliError {
    CliError::Validation(err.to_string())
}

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::Malformed(msg.into())
}

/// JSON value whose deserializer rejects duplicate object keys, which
/// serde_json would otherwise resolve silently (last key wins).
#[derive(Debug, Clone)]
pub enum Json {
    Null,
    Bool(#[allow(dead_code)] bool),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    fn kind(&self) -> &'static str {
        match self {
            Json::Null => "null",
            Json::Bool(_) => "boolean",
            Json::Num(_) => "number",
            Json::Str(_) => "string",
            Json::Arr(_) => "array",
            Json::Obj(_) => "object",
        }
    }

    fn as_num(&self) -> Option<f64> {
        match self {
            Json::Num(x) => Some(*x),
            _ => None,
        }
    }
}

impl<'de> Deserialize<'de> for Json {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct JsonVisitor;

        impl<'de> Visitor<'de> for JsonVisitor {
            type Value = Json;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("any JSON value")
            }

            fn visit_bool<E>(self, v: bool) -> Result<Json, E> {
                Ok(Json::Bool(v))
            }

            fn visit_i64<E>(self, v: i64) -> Result<Json, E> {
                Ok(Json::Num(v as f64))
            }

            fn visit_u64<E>(self, v: u64) -> Result<Json, E> {
                Ok(Json::Num(v as f64))
            }

            fn visit_f64<E>(self, v: f64) -> Result<Json, E> {
                Ok(Json::Num(v))
            }

            fn visit_str<E: DeError>(self, v: &str) -> Result<Json, E> {
                Ok(Json::Str(v.to_owned()))
            }

            fn visit_unit<E>(self) -> Result<Json, E> {
                Ok(Json::Null)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Json, A::Error> {
                let mut items = Vec::new();
                while let Some(item) = seq.next_element::<Json>()? {
                    items.push(item);
                }
                Ok(Json::Arr(items))
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Json, A::Error> {
                let mut entries: Vec<(String, Json)> = Vec::new();
                while let Some(key) = map.next_key::<String>()? {
                    if entries.iter().any(|(k, _)| *k == key) {
                        return Err(A::Error::custom(format!("duplicate key {key:?}")));
                    }
                    let value = map.next_value::<Json>()?;
                    entries.push((key, value));
                }
                Ok(Json::Obj(entries))
            }
        }

        deserializer.deserialize_any(JsonVisitor)
    }
}

fn parse_json(text: &str) -> Result<Json, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value =
        Json::deserialize(&mut de).map_err(|e| malformed(format!("invalid JSON: {e}")))?;
    de.end()
        .map_err(|e| malformed(format!("trailing content after JSON document: {e}")))?;
    Ok(value)
}

/// A parsed instance file: abilities, target mean, optional label.
#[derive(Debug, Clone)]
pub struct Instance {
    pub alpha: Vec<f64>,
    pub m: f64,
    pub label: Option<String>,
}

fn instance_from(value: &Json) -> Result<Instance, CliError> {
    let entries = match value {
        Json::Obj(entries) => entries,
        other => return Err(malformed(format!("instance must be an object, got {}", other.kind()))),
    };
    let mut m = None;
    let mut alpha = None;
    let mut label = None;
    for (key, val) in entries {
        match key.as_str() {
            "m" => {
                m = Some(val.as_num().ok_or_else(|| {
                    malformed(format!("field \"m\" must be a number, got {}", val.kind()))
                })?)
            }
            "alpha" => {
                let items = match val {
                    Json::Arr(items) => items,
                    other => {
                        return Err(malformed(format!(
                            "field \"alpha\" must be an array, got {}",
                            other.kind()
                        )))
                    }
                };
                let mut parsed = Vec::with_capacity(items.len());
                for item in items {
                    parsed.push(item.as_num().ok_or_else(|| {
                        malformed(format!(
                            "field \"alpha\" must contain numbers, got {}",
                            item.kind()
                        ))
                    })?);
                }
                alpha = Some(parsed);
            }
            "label" => {
                label = Some(match val {
                    Json::Str(s) => s.clone(),
                    other => {
                        return Err(malformed(format!(
                            "field \"label\" must be a string, got {}",
                            other.kind()
                        )))
                    }
                })
            }
            other => return Err(malformed(format!("unknown instance field {other:?}"))),
        }
    }
    Ok(Instance {
        alpha: alpha.ok_or_else(|| malformed("instance is missing field \"alpha\""))?,
        m: m.ok_or_else(|| malformed("instance is missing field \"m\""))?,
        label,
    })
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    instance_from(&parse_json(&text)?)
}

/// One sweep axis: which parameter varies and over what half-open range.
#[derive(Debug, Clone)]
pub struct Axis {
    pub kind: AxisKind,
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Alpha(usize),
    M,
}

impl Axis {
    pub fn name(&self) -> String {
        match self.kind {
            AxisKind::Alpha(i) => format!("alpha{i}"),
            AxisKind::M => "m".to_owned(),
        }
    }

    /// Grid values: `lo`, `lo + step`, … strictly below `hi`.
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut i = 0u64;
        loop {
            let v = self.lo + (i as f64) * self.step;
            if v >= self.hi - 1e-12 {
                return out;
            }
            out.push(v);
            i += 1;
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub axes: [Axis; 2],
    pub fixed: Instance,
}

fn axis_from(value: &Json) -> Result<Axis, CliError> {
    let entries = match value {
        Json::Obj(entries) => entries,
        other => return Err(malformed(format!("axis must be an object, got {}", other.kind()))),
    };
    let mut kind = None;
    let mut index = None;
    let mut lo = None;
    let mut hi = None;
    let mut step = None;
    for (key, val) in entries {
        match key.as_str() {
            "kind" => {
                kind = Some(match val {
                    Json::Str(s) if s == "alpha" => "alpha",
                    Json::Str(s) if s == "m" => "m",
                    other => {
                        return Err(malformed(format!(
                            "axis kind must be \"alpha\" or \"m\", got {:?}",
                            other
                        )))
                    }
                })
            }
            "index" => {
                let x = val.as_num().ok_or_else(|| malformed("axis index must be a number"))?;
                if x < 0.0 || x.fract() != 0.0 {
                    return Err(malformed(format!("axis index must be a nonnegative integer, got {x}")));
                }
                index = Some(x as usize);
            }
            "lo" => lo = Some(val.as_num().ok_or_else(|| malformed("axis lo must be a number"))?),
            "hi" => hi = Some(val.as_num().ok_or_else(|| malformed("axis hi must be a number"))?),
            "step" => {
                step = Some(val.as_num().ok_or_else(|| malformed("axis step must be a number"))?)
            }
            other => return Err(malformed(format!("unknown axis field {other:?}"))),
        }
    }
    let kind = match (kind.ok_or_else(|| malformed("axis is missing field \"kind\""))?, index) {
        ("alpha", Some(i)) => AxisKind::Alpha(i),
        ("alpha", None) => return Err(malformed("alpha axis requires field \"index\"")),
        ("m", None) => AxisKind::M,
        ("m", Some(_)) => return Err(malformed("m axis must not carry field \"index\"")),
        _ => unreachable!(),
    };
    Ok(Axis {
        kind,
        lo: lo.ok_or_else(|| malformed("axis is missing field \"lo\""))?,
        hi: hi.ok_or_else(|| malformed("axis is missing field \"hi\""))?,
        step: step.ok_or_else(|| malformed("axis is missing field \"step\""))?,
    })
}

pub fn read_sweep(path: &Path) -> Result<Sweep, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    let value = parse_json(&text)?;
    let entries = match &value {
        Json::Obj(entries) => entries,
        other => return Err(malformed(format!("sweep spec must be an object, got {}", other.kind()))),
    };
    let mut axes = None;
    let mut fixed = None;
    for (key, val) in entries {
        match key.as_str() {
            "axes" => {
                let items = match val {
                    Json::Arr(items) if items.len() == 2 => items,
                    Json::Arr(items) => {
                        return Err(malformed(format!("expected exactly 2 axes, got {}", items.len())))
                    }
                    other => {
                        return Err(malformed(format!("field \"axes\" must be an array, got {}", other.kind())))
                    }
                };
                axes = Some([axis_from(&items[0])?, axis_from(&items[1])?]);
            }
            "fixed" => fixed = Some(instance_from(val)?),
            other => return Err(malformed(format!("unknown sweep field {other:?}"))),
        }
    }
    let sweep = Sweep {
        axes: axes.ok_or_else(|| malformed("sweep spec is missing field \"axes\""))?,
        fixed: fixed.ok_or_else(|| malformed("sweep spec is missing field \"fixed\""))?,
    };
    for axis in &sweep.axes {
        if !(axis.step > 0.0) {
            return Err(validation(format!("axis {} step must be positive, got {}", axis.name(), axis.step)));
        }
        if !(axis.lo > 0.0 && axis.lo < axis.hi && axis.hi <= 1.0) {
            return Err(validation(format!(
                "axis {} range [{}, {}) must satisfy 0 < lo < hi <= 1",
                axis.name(),
                axis.lo,
                axis.hi
            )));
        }
        if let AxisKind::Alpha(i) = axis.kind {
            if i >= sweep.fixed.alpha.len() {
                return Err(validation(format!(
                    "axis alpha{} is out of range for {} players",
                    i,
                    sweep.fixed.alpha.len()
                )));
            }
        }
    }
    if sweep.axes[0].kind == sweep.axes[1].kind {
        return Err(validation("the two sweep axes must target distinct parameters"));
    }
    Ok(sweep)
}

/// Formats a finite number with 12 significant digits, deterministically.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Renders a slice as a JSON array of 12-significant-digit numbers.
pub fn num_array(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|&x| sig12(x)).collect();
    format!("[{}]", items.join(","))
}

/// Escapes a string for embedding in JSON output.
pub fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}
