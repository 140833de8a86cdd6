//! JSON loaders for polynomials and node sequences, and atomic report
//! writers.
//!
//! Floats leave this module with 17 significant digits; rationals as exact
//! `p/q` strings.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::goncharov::NodeSequence;
use crate::numeric::{parse_scalar, render_f64, to_float, GaussianRational, Scalar};
use crate::poly::Poly;

/// A parsed value plus the normalisations applied on the way in.
#[derive(Clone, Debug, PartialEq)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

/// Polynomial as read from disk: exact only if every coefficient was exact.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoly {
    Exact(Poly<GaussianRational>),
    Float(Poly<Complex64>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyNodes {
    Exact(NodeSequence<GaussianRational>),
    Float(NodeSequence<Complex64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Wire form `{"coeffs": [...]}`, ascending.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyDocument {
    pub coeffs: Vec<Scalar>,
}

impl PolyDocument {
    pub fn from_exact(f: &Poly<GaussianRational>) -> Self {
        PolyDocument {
            coeffs: f.coeffs().iter().cloned().map(Scalar::Exact).collect(),
        }
    }

    pub fn from_float(f: &Poly<Complex64>) -> Self {
        PolyDocument {
            coeffs: f.coeffs().iter().map(|z| Scalar::Float(*z)).collect(),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    }
}

fn schema(field: impl Into<String>, detail: impl Into<String>) -> Error {
    Error::Schema {
        field: field.into(),
        detail: detail.into(),
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| schema("<document>", e.to_string()))
}

/// Scalars of `doc[key]`, each an object with string `re` and optional string `im`.
fn scalar_list(doc: &Value, key: &str) -> Result<Vec<Scalar>> {
    let obj = doc.as_object().ok_or_else(|| schema("<document>", "expected a JSON object"))?;
    let items = obj
        .get(key)
        .ok_or_else(|| schema(key, "missing"))?
        .as_array()
        .ok_or_else(|| schema(key, "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let field = format!("{key}[{i}]");
            let rec = item
                .as_object()
                .ok_or_else(|| schema(&field, "expected an object with `re` and `im`"))?;
            for part in ["re", "im"] {
                match rec.get(part) {
                    None if part == "im" => {}
                    None => return Err(schema(format!("{field}.{part}"), "missing")),
                    Some(Value::String(_)) => {}
                    Some(_) => return Err(schema(format!("{field}.{part}"), "expected a string")),
                }
            }
            parse_scalar(&item.to_string())
        })
        .collect()
}

/// All-exact lists stay exact; anything else is converted to binary64.
fn split_exact(xs: Vec<Scalar>, what: &str, warnings: &mut Vec<String>) -> Result<std::result::Result<Vec<GaussianRational>, Vec<Complex64>>> {
    if xs.iter().all(Scalar::is_exact) {
        return Ok(Ok(xs.into_iter().map(|x| x.as_exact().cloned().expect("exact")).collect()));
    }
    if xs.iter().any(Scalar::is_exact) {
        warnings.push(format!("{what} mix exact and float entries; all promoted to float"));
    }
    Ok(Err(xs.iter().map(to_float).collect::<Result<_>>()?))
}

pub fn parse_poly_value(doc: &Value) -> Result<Loaded<AnyPoly>> {
    let coeffs = scalar_list(doc, "coeffs")?;
    let mut warnings = Vec::new();
    let trailing = coeffs.iter().rev().take_while(|c| c.modulus() == 0.0).count();
    if trailing > 0 && trailing < coeffs.len() {
        warnings.push(format!("trimmed {trailing} zero leading coefficient(s)"));
    }
    let value = match split_exact(coeffs, "coefficients", &mut warnings)? {
        Ok(q) => AnyPoly::Exact(Poly::new(q)),
        Err(z) => AnyPoly::Float(Poly::new(z)),
    };
    Ok(Loaded { value, warnings })
}

pub fn load_poly_json(path: impl AsRef<Path>) -> Result<Loaded<AnyPoly>> {
    parse_poly_value(&read_json(path.as_ref())?)
}

pub fn parse_nodes_value(doc: &Value) -> Result<Loaded<AnyNodes>> {
    let nodes = scalar_list(doc, "nodes")?;
    if nodes.is_empty() {
        return Err(schema("nodes", "at least one node is required"));
    }
    let mut warnings = Vec::new();
    let value = match split_exact(nodes, "nodes", &mut warnings)? {
        Ok(q) => AnyNodes::Exact(NodeSequence::new(q)?),
        Err(z) => AnyNodes::Float(NodeSequence::new(z)?),
    };
    Ok(Loaded { value, warnings })
}

pub fn load_nodes_json(path: impl AsRef<Path>) -> Result<Loaded<AnyNodes>> {
    parse_nodes_value(&read_json(path.as_ref())?)
}

/// JSON formatter printing every f64 as `d.dddddddddddddddde±x`.
struct SeventeenDigits(serde_json::ser::PrettyFormatter<'static>);

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, x: f64) -> std::io::Result<()> {
        w.write_all(render_f64(x).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, x: f32) -> std::io::Result<()> {
        self.write_f64(w, x as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_string<R: Serialize + ?Sized>(report: &R) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits(Default::default()));
    report
        .serialize(&mut ser)
        .map_err(|e| schema("<report>", e.to_string()))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => i.to_string(),
            (_, Some(u), _) => u.to_string(),
            (_, _, Some(x)) => render_f64(x),
            _ => n.to_string(),
        },
        Value::Bool(b) => b.to_string(),
        nested => serde_json::to_string(nested).unwrap_or_default(),
    }
}

/// Rows are the array elements (or the single object); nested values are
/// embedded as compact JSON.
pub fn to_csv_string<R: Serialize + ?Sized>(report: &R) -> Result<String> {
    let value = serde_json::to_value(report).map_err(|e| schema("<report>", e.to_string()))?;
    let rows: Vec<Value> = match value {
        Value::Array(rows) => rows,
        other => vec![other],
    };
    let mut header: Vec<String> = Vec::new();
    for r in &rows {
        let obj = r.as_object().ok_or_else(|| schema("<report>", "CSV rows must be objects"))?;
        for k in obj.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| schema("<report>", e.to_string());
    w.write_record(&header).map_err(csv_err)?;
    for r in &rows {
        let obj = r.as_object().expect("checked above");
        w.write_record(header.iter().map(|k| obj.get(k).map(csv_cell).unwrap_or_default()))
            .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| schema("<report>", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv emits UTF-8"))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: impl AsRef<Path>, contents: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(path, e))?;
    tmp.write_all(contents).map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

pub fn write_report<R: Serialize + ?Sized>(report: &R, path: impl AsRef<Path>, format: Format) -> Result<()> {
    let text = match format {
        Format::Json => to_json_string(report)?,
        Format::Csv => to_csv_string(report)?,
    };
    write_atomic(path, text.as_bytes())
}
