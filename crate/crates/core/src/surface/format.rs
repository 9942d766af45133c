//! JSON surface documents.
//!
//! ```text
//! {
//!   "pants": [0],
//!   "gluings": [
//!     {"curve": 0, "ends": [[0, 0], [0, 1]], "length": 2.0000000000000000, "twist": 0.29999999999999999}
//!   ],
//!   "boundaries": [
//!     {"curve": 1, "end": [0, 2], "length": 1.5000000000000000}
//!   ]
//! }
//! ```
//!
//! Canonical output keeps the key order above, sorts pants and curves by id,
//! and writes every float with 17 significant digits.

use std::fmt::Write as _;

use serde_json::{Map, Value};
use thiserror::Error;

use super::graph::{
    validate, BoundaryLeg, FnCoordinates, Gluing, InteriorCoord, PantsGraph, Slot, Surface,
};
use super::SurfaceError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error(transparent)]
    Invalid(#[from] SurfaceError),
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Schema {
        field: field.into(),
        message: message.into(),
    }
}

fn object<'a>(
    v: &'a Value,
    field: &str,
    keys: &[&str],
) -> Result<&'a Map<String, Value>, FormatError> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema(field, "expected an object"))?;
    for k in obj.keys() {
        if !keys.contains(&k.as_str()) {
            return Err(schema(format!("{field}.{k}"), "unknown field"));
        }
    }
    for k in keys {
        if !obj.contains_key(*k) {
            return Err(schema(format!("{field}.{k}"), "missing field"));
        }
    }
    Ok(obj)
}

fn array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array()
        .ok_or_else(|| schema(field, "expected an array"))
}

fn id(v: &Value, field: &str) -> Result<u32, FormatError> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| schema(field, "expected a non-negative integer id"))
}

fn number(v: &Value, field: &str) -> Result<f64, FormatError> {
    v.as_f64().ok_or_else(|| schema(field, "expected a number"))
}

fn slot(v: &Value, field: &str) -> Result<Slot, FormatError> {
    let pair = array(v, field)?;
    if pair.len() != 2 {
        return Err(schema(field, "expected [pants, slot]"));
    }
    let s = id(&pair[1], &format!("{field}[1]"))?;
    if s > 2 {
        return Err(schema(format!("{field}[1]"), "slot must be 0, 1 or 2"));
    }
    Ok(Slot::new(id(&pair[0], &format!("{field}[0]"))?, s as u8))
}

pub fn parse_surface(text: &str) -> Result<Surface, FormatError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| FormatError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let top = object(&doc, "$", &["pants", "gluings", "boundaries"])?;
    let mut graph = PantsGraph::default();
    let mut coords = FnCoordinates::default();
    for (k, p) in array(&top["pants"], "pants")?.iter().enumerate() {
        graph.pants.push(id(p, &format!("pants[{k}]"))?);
    }
    for (k, g) in array(&top["gluings"], "gluings")?.iter().enumerate() {
        let f = format!("gluings[{k}]");
        let o = object(g, &f, &["curve", "ends", "length", "twist"])?;
        let curve = id(&o["curve"], &format!("{f}.curve"))?;
        let ends = array(&o["ends"], &format!("{f}.ends"))?;
        if ends.len() != 2 {
            return Err(schema(format!("{f}.ends"), "expected two ends"));
        }
        graph.gluings.push(Gluing {
            curve,
            ends: [
                slot(&ends[0], &format!("{f}.ends[0]"))?,
                slot(&ends[1], &format!("{f}.ends[1]"))?,
            ],
        });
        let c = InteriorCoord {
            length: number(&o["length"], &format!("{f}.length"))?,
            twist: number(&o["twist"], &format!("{f}.twist"))?,
        };
        if coords.interior.insert(curve, c).is_some() {
            return Err(schema(format!("{f}.curve"), "duplicate curve id"));
        }
    }
    for (k, b) in array(&top["boundaries"], "boundaries")?.iter().enumerate() {
        let f = format!("boundaries[{k}]");
        let o = object(b, &f, &["curve", "end", "length"])?;
        let curve = id(&o["curve"], &format!("{f}.curve"))?;
        graph.boundaries.push(BoundaryLeg {
            curve,
            end: slot(&o["end"], &format!("{f}.end"))?,
        });
        let length = number(&o["length"], &format!("{f}.length"))?;
        if coords.boundary.insert(curve, length).is_some() || coords.interior.contains_key(&curve) {
            return Err(schema(format!("{f}.curve"), "duplicate curve id"));
        }
    }
    Ok(validate(graph, coords)?)
}

/// Decimal with 17 significant digits, e.g. `1.5000000000000000` or
/// `2.5000000000000000e-7` when the exponent is outside `[-5, 16]`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0.0000000000000000"
        } else {
            "0.0000000000000000"
        }
        .to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..=16).contains(&exp) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}.0", digits, "0".repeat(point as usize - digits.len()))
    } else {
        format!(
            "{}.{}",
            &digits[..point as usize],
            &digits[point as usize..]
        )
    };
    format!("{sign}{body}")
}

pub fn serialize_surface(surface: &Surface) -> String {
    let graph = surface.graph();
    let coords = surface.coords();
    let mut pants = graph.pants.clone();
    pants.sort();
    let mut gluings = graph.gluings.clone();
    gluings.sort_by_key(|g| g.curve);
    let mut legs = graph.boundaries.clone();
    legs.sort_by_key(|b| b.curve);

    let mut out = String::from("{\n  \"pants\": [");
    out.push_str(
        &pants
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(", "),
    );
    out.push_str("],\n  \"gluings\": [");
    for (k, g) in gluings.iter().enumerate() {
        let c = coords.interior[&g.curve];
        let _ = write!(
            out,
            "{}\n    {{\"curve\": {}, \"ends\": [[{}, {}], [{}, {}]], \"length\": {}, \"twist\": {}}}",
            if k == 0 { "" } else { "," },
            g.curve,
            g.ends[0].pants,
            g.ends[0].slot,
            g.ends[1].pants,
            g.ends[1].slot,
            format_float(c.length),
            format_float(c.twist)
        );
    }
    out.push_str(if gluings.is_empty() {
        "],\n"
    } else {
        "\n  ],\n"
    });
    out.push_str("  \"boundaries\": [");
    for (k, b) in legs.iter().enumerate() {
        let _ = write!(
            out,
            "{}\n    {{\"curve\": {}, \"end\": [{}, {}], \"length\": {}}}",
            if k == 0 { "" } else { "," },
            b.curve,
            b.end.pants,
            b.end.slot,
            format_float(coords.boundary[&b.curve])
        );
    }
    out.push_str(if legs.is_empty() {
        "]\n}\n"
    } else {
        "\n  ]\n}\n"
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TORUS: &str = r#"{
  "pants": [0],
  "gluings": [
    {"curve": 0, "ends": [[0, 0], [0, 1]], "length": 2.0000000000000000, "twist": 0.29999999999999999}
  ],
  "boundaries": [
    {"curve": 1, "end": [0, 2], "length": 1.5000000000000000}
  ]
}
"#;

    #[test]
    fn torus_fixture_roundtrips_bytewise() {
        let s = parse_surface(TORUS).unwrap();
        assert_eq!(serialize_surface(&s), TORUS);
        assert_eq!(s.coords().interior[&0].twist, 0.3);
    }

    #[test]
    fn non_canonical_input_canonicalizes() {
        let messy = r#"{"boundaries":[{"length":1.5,"end":[0,2],"curve":1}],
            "pants":[0],"gluings":[{"twist":0.3,"length":2,"curve":0,"ends":[[0,0],[0,1]]}]}"#;
        let s = parse_surface(messy).unwrap();
        let canon = serialize_surface(&s);
        assert_eq!(canon, TORUS);
        assert_eq!(serialize_surface(&parse_surface(&canon).unwrap()), canon);
    }

    #[test]
    fn missing_twist_names_the_field() {
        let bad = TORUS.replace(", \"twist\": 0.29999999999999999", "");
        match parse_surface(&bad) {
            Err(FormatError::Schema { field, .. }) => assert_eq!(field, "gluings[0].twist"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_position() {
        match parse_surface("{\n  \"pants\": [0,,]\n}") {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_graph_is_reported() {
        let bad = TORUS.replace("\"end\": [0, 2]", "\"end\": [0, 1]");
        assert!(matches!(
            parse_surface(&bad),
            Err(FormatError::Invalid(SurfaceError::MalformedGraph(_)))
        ));
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(1.5), "1.5000000000000000");
        assert_eq!(format_float(0.3), "0.29999999999999999");
        assert_eq!(format_float(-12.25), "-12.250000000000000");
        assert_eq!(format_float(2.5e-7), "2.4999999999999999e-7");
        assert_eq!(format_float(0.0), "0.0000000000000000");
        for x in [std::f64::consts::PI, 1e-5, 123456.789, 49.999999999] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }
}
