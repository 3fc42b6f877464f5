//! File formats: hypergraph JSON, point samples (CSV or JSON) and reports.
//!
//! Hypergraph files look like `{"vertices": [0, 1], "edges": [[1, 0]]}`, or
//! carry `"directed_edges"` instead of `"edges"`. `vertices` may be omitted,
//! in which case the support of the edges is used.
//!
//! Point files are either CSV rows `id,x_1,...,x_d` with exact decimal
//! coordinates, or JSON `{"distance_matrix": [[...]]}` /
//! `{"circle_angles": [...]}` with optional `"ids"` and `"tolerance"`.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{DirectedHyperedge, Edge, Hyperdigraph, Hyperedge, Hypergraph, VertexId};
use crate::metric::{Metric, MetricPointSample, DEFAULT_CIRCLE_TOLERANCE};

pub const REPORT_SCHEMA: &str = "embedhom.report/1";

#[derive(Clone, PartialEq, Debug)]
pub enum AnyHypergraph {
    Undirected(Hypergraph),
    Directed(Hyperdigraph),
}

impl AnyHypergraph {
    pub fn is_directed(&self) -> bool {
        matches!(self, AnyHypergraph::Directed(_))
    }
}

/// A parsed value with the warnings raised while canonicalizing it.
#[derive(Clone, PartialEq, Debug)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphFile {
    vertices: Option<Vec<VertexId>>,
    edges: Option<Vec<Vec<VertexId>>>,
    directed_edges: Option<Vec<Vec<VertexId>>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    }
}

pub fn parse_hypergraph(text: &str) -> Result<Parsed<AnyHypergraph>> {
    let file: HypergraphFile = serde_json::from_str(text).map_err(json_error)?;
    match (file.edges, file.directed_edges) {
        (Some(_), Some(_)) => Err(Error::parse("top level", "give either \"edges\" or \"directed_edges\", not both")),
        (Some(lists), None) => {
            let p = build::<Hyperedge>(file.vertices, lists, "edges")?;
            Ok(Parsed {
                value: AnyHypergraph::Undirected(p.value),
                warnings: p.warnings,
            })
        }
        (None, Some(lists)) => {
            let p = build::<DirectedHyperedge>(file.vertices, lists, "directed_edges")?;
            Ok(Parsed {
                value: AnyHypergraph::Directed(p.value),
                warnings: p.warnings,
            })
        }
        (None, None) => Ok(Parsed {
            value: AnyHypergraph::Undirected(Hypergraph::new(file.vertices.unwrap_or_default(), [])?),
            warnings: Vec::new(),
        }),
    }
}

fn build<E: Edge>(vertices: Option<Vec<VertexId>>, lists: Vec<Vec<VertexId>>, field: &str) -> Result<Parsed<Hypergraph<E>>> {
    let mut warnings = Vec::new();
    let declared: Option<BTreeSet<VertexId>> = vertices.map(|v| {
        let set: BTreeSet<_> = v.iter().copied().collect();
        if set.len() != v.len() {
            warnings.push("duplicate entries in \"vertices\" were removed".to_string());
        }
        set
    });
    let mut edges = BTreeSet::new();
    for (i, list) in lists.into_iter().enumerate() {
        let location = format!("{field}[{i}]");
        if let Some(set) = &declared {
            if let Some(v) = list.iter().find(|v| !set.contains(v)) {
                return Err(Error::parse(location, format!("vertex {v} is not in \"vertices\"")));
            }
        }
        let e = E::from_vertices(list).map_err(|e| Error::parse(location.clone(), e.to_string()))?;
        if !edges.insert(e.clone()) {
            warnings.push(format!("{location}: duplicate edge {e} was dropped"));
        }
    }
    let h = match declared {
        Some(set) => Hypergraph::new(set, edges)?,
        None => Hypergraph::from_edges(edges),
    };
    Ok(Parsed { value: h, warnings })
}

pub fn read_hypergraph(path: &Path) -> Result<Parsed<AnyHypergraph>> {
    parse_hypergraph(&std::fs::read_to_string(path)?)
}

/// Canonical JSON for a hypergraph: sorted vertices, edges in canonical order.
pub fn hypergraph_json<E: Edge>(h: &Hypergraph<E>) -> serde_json::Value {
    let key = if E::DIRECTED { "directed_edges" } else { "edges" };
    let edges: Vec<&[VertexId]> = h.edges().iter().map(|e| e.vertices()).collect();
    serde_json::json!({ "vertices": h.vertex_set(), key: edges })
}

pub fn any_hypergraph_json(h: &AnyHypergraph) -> serde_json::Value {
    match h {
        AnyHypergraph::Undirected(h) => hypergraph_json(h),
        AnyHypergraph::Directed(h) => hypergraph_json(h),
    }
}

/// Exact value of a decimal literal such as `-1.25`, `3e-2` or `7/4`.
pub fn parse_exact_decimal(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| BigRational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], t[k + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(all);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -q } else { q })
}

/// CSV rows `id,x_1,...,x_d`. A first row whose id is not an integer is a header.
pub fn parse_points_csv(text: &str) -> Result<MetricPointSample> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut ids = Vec::new();
    let mut points = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(format!("line {line}"), e.to_string())
        })?;
        let line = record.position().map_or(k as u64 + 1, |p| p.line());
        let first = record.get(0).unwrap_or("");
        let id = match first.parse::<VertexId>() {
            Ok(id) => id,
            Err(_) if k == 0 => continue,
            Err(_) => return Err(Error::parse(format!("line {line}, column 1"), format!("invalid point id {first:?}"))),
        };
        if record.len() < 2 {
            return Err(Error::parse(format!("line {line}"), "a point needs at least one coordinate"));
        }
        let coords = record
            .iter()
            .enumerate()
            .skip(1)
            .map(|(c, field)| {
                parse_exact_decimal(field).ok_or_else(|| {
                    Error::parse(format!("line {line}, column {}", c + 1), format!("invalid coordinate {field:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ids.push(id);
        points.push(coords);
    }
    MetricPointSample::new(ids, Metric::Euclidean(points), 0.0)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsFile {
    ids: Option<Vec<VertexId>>,
    distance_matrix: Option<Vec<Vec<f64>>>,
    circle_angles: Option<Vec<f64>>,
    tolerance: Option<f64>,
}

pub fn parse_points_json(text: &str) -> Result<MetricPointSample> {
    let file: PointsFile = serde_json::from_str(text).map_err(json_error)?;
    let (metric, default_tol) = match (file.distance_matrix, file.circle_angles) {
        (Some(m), None) => (Metric::Matrix(m), 0.0),
        (None, Some(a)) => (Metric::Circle(a), DEFAULT_CIRCLE_TOLERANCE),
        _ => {
            return Err(Error::parse(
                "top level",
                "give exactly one of \"distance_matrix\" or \"circle_angles\"",
            ))
        }
    };
    let n = match &metric {
        Metric::Matrix(m) => m.len(),
        Metric::Circle(a) => a.len(),
        Metric::Euclidean(p) => p.len(),
    };
    let ids = file.ids.unwrap_or_else(|| (0..n as VertexId).collect());
    MetricPointSample::new(ids, metric, file.tolerance.unwrap_or(default_tol))
}

/// Reads a point file, choosing the format by extension (`.csv` or JSON).
pub fn read_points(path: &Path) -> Result<MetricPointSample> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        parse_points_csv(&text)
    } else {
        parse_points_json(&text)
    }
}

/// Output of one command.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub args: serde_json::Value,
    pub result: serde_json::Value,
    pub warnings: Vec<String>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(command: &str, args: serde_json::Value, result: serde_json::Value, warnings: Vec<String>) -> Self {
        Report {
            schema: REPORT_SCHEMA.to_string(),
            command: command.to_string(),
            args,
            result,
            warnings,
            elapsed_ms: 0.0,
        }
    }

    /// Pretty JSON of everything except timing, for determinism checks.
    pub fn payload_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("elapsed_ms");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn emit_report(report: &Report, path: &Path) -> Result<()> {
    let mut text = report.to_json();
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
