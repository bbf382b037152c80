//! CSV, JSON and SVG writers for trajectories, sheet fields and scalar results.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine as _;
use serde_json::{json, Map, Value};

use super::config::SCHEMA_VERSION;
use crate::error::{Error, Result};
use crate::nuttall::SheetField;
use crate::rational::{RationalFamilySpec, RationalFamilyState};
use crate::torus::TorusFamilyState;
use crate::C64;

/// Fill colors of `S₀, S₁, S₂` in SVG output.
pub const SHEET_COLORS: [&str; 3] = ["#e8e4d8", "#7fa7d9", "#d9825b"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => Err(Error::InvalidArgument(format!("unknown format \"{s}\", expected csv, json or svg"))),
        }
    }
}

/// Rows of complex values indexed by a real parameter (usually `t`).
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub kind: String,
    /// Name of the leading real column.
    pub index: String,
    pub columns: Vec<String>,
    pub rows: Vec<(f64, Vec<C64>)>,
}

impl Table {
    /// Columns `a_1..a_M, b_1..b_N`.
    pub fn from_rational(spec: &RationalFamilySpec, states: &[RationalFamilyState]) -> Table {
        let columns = (1..=spec.m.len())
            .map(|k| format!("a_{k}"))
            .chain((1..=spec.n.len()).map(|k| format!("b_{k}")))
            .collect();
        let rows = states
            .iter()
            .map(|s| (s.t, s.a.iter().chain(&s.b).copied().collect()))
            .collect();
        Table {
            kind: "rational-trajectory".into(),
            index: "t".into(),
            columns,
            rows,
        }
    }

    /// Columns `a_0..a_n, c, omega2`.
    pub fn from_torus(n: usize, states: &[TorusFamilyState]) -> Table {
        let columns = (0..=n)
            .map(|k| format!("a_{k}"))
            .chain(["c".to_string(), "omega2".to_string()])
            .collect();
        let rows = states
            .iter()
            .map(|s| {
                let mut v = s.a.clone();
                v.push(s.c);
                v.push(s.omega2);
                (s.t, v)
            })
            .collect();
        Table {
            kind: "torus-trajectory".into(),
            index: "t".into(),
            columns,
            rows,
        }
    }
}

/// Something the CLI can write.
#[derive(Clone, Copy, Debug)]
pub enum Output<'a> {
    Table(&'a Table),
    Field(&'a SheetField),
    Scalars {
        kind: &'a str,
        values: &'a Map<String, Value>,
    },
}

fn num(x: f64) -> String {
    format!("{x:.14e}")
}

/// Header `t,re(a_1),im(a_1),...` and one row per checkpoint, 15 significant digits.
pub fn table_csv(table: &Table) -> String {
    let mut out = table.index.clone();
    for c in &table.columns {
        let _ = write!(out, ",re({c}),im({c})");
    }
    out.push('\n');
    for (t, vals) in &table.rows {
        out.push_str(&num(*t));
        for v in vals {
            let _ = write!(out, ",{},{}", num(v.re), num(v.im));
        }
        out.push('\n');
    }
    out
}

pub fn table_json(table: &Table) -> Value {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|(t, vals)| {
            let mut row = Map::new();
            row.insert(table.index.clone(), json!(t));
            row.insert("values".into(), json!(vals.iter().map(|v| [v.re, v.im]).collect::<Vec<_>>()));
            Value::Object(row)
        })
        .collect();
    json!({ "v": SCHEMA_VERSION, "kind": table.kind, "index": table.index, "columns": table.columns, "rows": rows })
}

pub fn field_json(field: &SheetField) -> Value {
    let contours: Vec<Value> = field
        .contours
        .iter()
        .map(|c| {
            let lines: Vec<Vec<[f64; 2]>> = c
                .polylines
                .iter()
                .map(|l| l.iter().map(|p| [p.re, p.im]).collect())
                .collect();
            json!({ "pair": [c.pair.0, c.pair.1], "polylines": lines })
        })
        .collect();
    json!({
        "v": SCHEMA_VERSION,
        "kind": "sheet-field",
        "alpha": [field.alpha.re, field.alpha.im],
        "grid": field.grid,
        "labels": B64.encode(&field.labels),
        "ties": B64.encode(&field.ties),
        "contours": contours,
    })
}

/// One row per node: `i,j,x,y,label`.
pub fn field_csv(field: &SheetField) -> String {
    let g = &field.grid;
    let mut out = String::from("i,j,x,y,label\n");
    for j in 0..g.ny {
        for i in 0..g.nx {
            let z = g.node(i, j);
            let _ = writeln!(out, "{i},{j},{},{},{}", num(z.re), num(z.im), field.label(i, j));
        }
    }
    out
}

/// Sheet regions as row runs of rectangles plus one polyline per contour
/// piece, in grid coordinates (the y axis is flipped by a group transform).
pub fn field_svg(field: &SheetField) -> String {
    let g = &field.grid;
    let (w, h) = (g.xmax - g.xmin, g.ymax - g.ymin);
    let (dx, dy) = (g.dx(), g.dy());
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}" width="{}" height="{}">"#,
        g.xmin, g.ymin, w, h, g.nx, g.ny
    );
    let _ = writeln!(out, r#"<g transform="matrix(1 0 0 -1 0 {:.6})">"#, g.ymin + g.ymax);
    for (s, color) in SHEET_COLORS.iter().enumerate() {
        let _ = writeln!(out, r#"<g class="sheet-{s}" fill="{color}" stroke="none">"#);
        for j in 0..g.ny {
            let mut i = 0;
            while i < g.nx {
                if field.label(i, j) as usize != s {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < g.nx && field.label(i, j) as usize == s {
                    i += 1;
                }
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}"/>"#,
                    g.xmin + start as f64 * dx,
                    g.ymin + j as f64 * dy,
                    (i - start) as f64 * dx,
                    dy
                );
            }
        }
        out.push_str("</g>\n");
    }
    for c in &field.contours {
        let _ = writeln!(
            out,
            r#"<g class="gamma-{}{}" fill="none" stroke="black" stroke-width="1" vector-effect="non-scaling-stroke">"#,
            c.pair.0, c.pair.1
        );
        for line in &c.polylines {
            let pts: Vec<String> = line.iter().map(|p| format!("{:.6},{:.6}", p.re, p.im)).collect();
            let _ = writeln!(out, r#"<polyline points="{}"/>"#, pts.join(" "));
        }
        out.push_str("</g>\n");
    }
    out.push_str("</g>\n</svg>\n");
    out
}

pub fn scalars_json(kind: &str, values: &Map<String, Value>) -> Value {
    let mut obj = Map::new();
    obj.insert("v".into(), Value::from(SCHEMA_VERSION));
    obj.insert("kind".into(), Value::from(kind));
    obj.extend(values.clone());
    Value::Object(obj)
}

/// `name,value` rows; nested values are written as compact JSON.
pub fn scalars_csv(values: &Map<String, Value>) -> String {
    let mut out = String::from("name,value\n");
    for (k, v) in values {
        let cell = match v {
            Value::Number(n) => n.as_f64().map(num).unwrap_or_else(|| n.to_string()),
            Value::String(s) => s.clone(),
            other => format!("\"{}\"", other.to_string().replace('"', "\"\"")),
        };
        let _ = writeln!(out, "{k},{cell}");
    }
    out
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Renders an output in the requested format.
pub fn render(output: &Output, format: Format) -> Result<String> {
    match (output, format) {
        (Output::Table(t), Format::Csv) => Ok(table_csv(t)),
        (Output::Table(t), Format::Json) => Ok(pretty(&table_json(t))),
        (Output::Field(f), Format::Csv) => Ok(field_csv(f)),
        (Output::Field(f), Format::Json) => Ok(pretty(&field_json(f))),
        (Output::Field(f), Format::Svg) => Ok(field_svg(f)),
        (Output::Scalars { values, .. }, Format::Csv) => Ok(scalars_csv(values)),
        (Output::Scalars { kind, values }, Format::Json) => Ok(pretty(&scalars_json(kind, values))),
        (_, Format::Svg) => Err(Error::InvalidArgument(
            "SVG output is only available for sheet fields".into(),
        )),
    }
}

/// Renders and writes an output to `path`.
pub fn emit(output: &Output, format: Format, path: &Path) -> Result<()> {
    let text = render(output, format)?;
    std::fs::write(path, text).map_err(|e| Error::IoError(format!("{}: {e}", path.display())))
}
