//! Textual map descriptions: named presets and JSON specs.
//!
//! Presets: `tent:s=X`, `tent:golden`, `golden-core`, `golden-restriction`,
//! `double-tent`, `nucleus:depth=N`, `two-sided:depth=N`, `circle:a|b|c`.
//!
//! JSON: `{"kind":"tent","s":"3/2"}`, `{"kind":"nucleus","depth":2}`,
//! `{"kind":"circle","variant":"c"}`, other kinds by preset name, or an explicit
//! `{"breakpoints":[...],"values":[...]}` with exact scalar strings.

use std::fmt;

use serde_json::{json, Value};

use crate::scalar::Scalar;

use super::families::{nucleus_family_at, two_sided_at};
use super::{
    double_tent, golden_core, golden_restriction, make_tent, IntervalMap, MapError, PLMap, SmoothKind, SmoothMap1D,
};

#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    Tent(Scalar),
    GoldenCore,
    GoldenRestriction,
    DoubleTent,
    Nucleus(usize),
    TwoSided(usize),
    Circle(SmoothKind),
    Explicit { points: Vec<Scalar>, values: Vec<Scalar> },
}

/// A constructed map of either kind.
#[derive(Debug, Clone)]
pub enum AnyMap {
    Pl(PLMap),
    Smooth(SmoothMap1D),
}

impl AnyMap {
    pub fn as_pl(&self) -> Option<&PLMap> {
        match self {
            AnyMap::Pl(m) => Some(m),
            AnyMap::Smooth(_) => None,
        }
    }

    pub fn as_interval_map(&self) -> &dyn IntervalMap {
        match self {
            AnyMap::Pl(m) => m,
            AnyMap::Smooth(m) => m,
        }
    }
}

fn spec_err(msg: impl Into<String>) -> MapError {
    MapError::Spec(msg.into())
}

fn circle_kind(tag: &str) -> Result<SmoothKind, MapError> {
    match tag {
        "a" => Ok(SmoothKind::Cube),
        "b" => Ok(SmoothKind::PiecewiseCubic),
        "c" => Ok(SmoothKind::LogOscillation),
        _ => Err(spec_err(format!("unknown circle map {tag:?}"))),
    }
}

fn circle_tag(k: SmoothKind) -> &'static str {
    match k {
        SmoothKind::Cube => "a",
        SmoothKind::PiecewiseCubic => "b",
        SmoothKind::LogOscillation => "c",
    }
}

fn parse_depth(s: &str) -> Result<usize, MapError> {
    s.strip_prefix("depth=")
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| spec_err(format!("expected depth=N, got {s:?}")))
}

fn scalar(s: &str) -> Result<Scalar, MapError> {
    if s == "golden" {
        return Ok(Scalar::golden());
    }
    s.parse().map_err(MapError::from)
}

impl MapSpec {
    /// Parse a preset name or a JSON object.
    pub fn parse(text: &str) -> Result<MapSpec, MapError> {
        let t = text.trim();
        if t.starts_with('{') {
            let v: Value = serde_json::from_str(t).map_err(|e| spec_err(e.to_string()))?;
            return MapSpec::from_json(&v);
        }
        let (name, arg) = t.split_once(':').unwrap_or((t, ""));
        match name {
            "tent" if arg == "golden" => Ok(MapSpec::Tent(Scalar::golden())),
            "tent" => {
                let s = arg.strip_prefix("s=").ok_or_else(|| spec_err("expected tent:s=X"))?;
                Ok(MapSpec::Tent(scalar(s)?))
            }
            "golden-core" => Ok(MapSpec::GoldenCore),
            "golden-restriction" => Ok(MapSpec::GoldenRestriction),
            "double-tent" => Ok(MapSpec::DoubleTent),
            "nucleus" => Ok(MapSpec::Nucleus(parse_depth(arg)?)),
            "two-sided" => Ok(MapSpec::TwoSided(parse_depth(arg)?)),
            "circle" => Ok(MapSpec::Circle(circle_kind(arg)?)),
            _ => Err(spec_err(format!("unknown map {t:?}"))),
        }
    }

    fn from_json(v: &Value) -> Result<MapSpec, MapError> {
        let obj = v.as_object().ok_or_else(|| spec_err("map spec must be an object"))?;
        if let (Some(b), Some(vals)) = (obj.get("breakpoints"), obj.get("values")) {
            let list = |x: &Value| -> Result<Vec<Scalar>, MapError> {
                x.as_array()
                    .ok_or_else(|| spec_err("breakpoints and values must be arrays"))?
                    .iter()
                    .map(|e| match e {
                        Value::String(s) => scalar(s),
                        Value::Number(n) => scalar(&n.to_string()),
                        _ => Err(spec_err("scalars must be strings")),
                    })
                    .collect()
            };
            return Ok(MapSpec::Explicit { points: list(b)?, values: list(vals)? });
        }
        let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| spec_err("missing \"kind\""))?;
        let depth = || -> Result<usize, MapError> {
            obj.get("depth").and_then(Value::as_u64).map(|d| d as usize).ok_or_else(|| spec_err("missing \"depth\""))
        };
        match kind {
            "tent" => {
                let s = obj.get("s").and_then(Value::as_str).ok_or_else(|| spec_err("missing \"s\""))?;
                Ok(MapSpec::Tent(scalar(s)?))
            }
            "golden-core" => Ok(MapSpec::GoldenCore),
            "golden-restriction" => Ok(MapSpec::GoldenRestriction),
            "double-tent" => Ok(MapSpec::DoubleTent),
            "nucleus" => Ok(MapSpec::Nucleus(depth()?)),
            "two-sided" => Ok(MapSpec::TwoSided(depth()?)),
            "circle" => {
                let t = obj.get("variant").and_then(Value::as_str).ok_or_else(|| spec_err("missing \"variant\""))?;
                Ok(MapSpec::Circle(circle_kind(t)?))
            }
            other => Err(spec_err(format!("unknown kind {other:?}"))),
        }
    }

    /// Canonical single-line JSON.
    pub fn to_json(&self) -> String {
        let v = match self {
            MapSpec::Tent(s) => json!({"kind": "tent", "s": s.to_string()}),
            MapSpec::GoldenCore => json!({"kind": "golden-core"}),
            MapSpec::GoldenRestriction => json!({"kind": "golden-restriction"}),
            MapSpec::DoubleTent => json!({"kind": "double-tent"}),
            MapSpec::Nucleus(d) => json!({"kind": "nucleus", "depth": d}),
            MapSpec::TwoSided(d) => json!({"kind": "two-sided", "depth": d}),
            MapSpec::Circle(k) => json!({"kind": "circle", "variant": circle_tag(*k)}),
            MapSpec::Explicit { points, values } => json!({
                "breakpoints": points.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "values": values.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
        };
        v.to_string()
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self, MapSpec::Circle(_))
    }

    /// Construct the map; `prec` sets the working precision of enclosure-valued maps.
    pub fn build(&self, prec: u32) -> Result<AnyMap, MapError> {
        Ok(match self {
            MapSpec::Tent(s) => AnyMap::Pl(make_tent(s)?),
            MapSpec::GoldenCore => AnyMap::Pl(golden_core()),
            MapSpec::GoldenRestriction => AnyMap::Pl(golden_restriction()),
            MapSpec::DoubleTent => AnyMap::Pl(double_tent()),
            MapSpec::Nucleus(d) => AnyMap::Pl(nucleus_family_at(*d, prec)?),
            MapSpec::TwoSided(d) => AnyMap::Pl(two_sided_at(*d, prec)?),
            MapSpec::Circle(k) => AnyMap::Smooth(SmoothMap1D::with_prec(*k, prec)),
            MapSpec::Explicit { points, values } => AnyMap::Pl(PLMap::new(points.clone(), values.clone())?),
        })
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}
