//! Browser bindings. Every export takes and returns plain strings (JSON or
//! CSV) so the page needs no bundler.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use embedhom::automorphism::{group_report, DEFAULT_VERTEX_CAP};
use embedhom::chain::verify_quasi_iso_theta;
use embedhom::hypergraph::Edge;
use embedhom::io::{parse_hypergraph, parse_points_csv, parse_points_json, AnyHypergraph};
use embedhom::linalg::Rational;
use embedhom::metric::MetricPointSample;
use embedhom::persistence::{build_filtration, emptiness_threshold, persistent_betti, EmbeddedKind};

fn parse_angles(text: &str) -> Result<Vec<f64>, String> {
    text.split([',', ' ', '\n'])
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("not a number: {s:?}")))
        .collect()
}

/// Hard-sphere hypergraph of a circle sample at one radius, with the
/// Betti numbers of its infimum and supremum complexes.
///
/// `angles` is a comma-separated list in radians; a single integer `k`
/// stands for `k` equally spaced points.
pub fn circle_explorer_json(angles: &str, radius: f64, n_max: usize) -> Result<String, String> {
    let trimmed = angles.trim();
    let sample = match trimmed.parse::<usize>() {
        Ok(k) => MetricPointSample::equally_spaced_circle(k),
        Err(_) => MetricPointSample::circle(parse_angles(trimmed)?),
    }
    .map_err(|e| e.to_string())?;
    if !(radius >= 0.0) {
        return Err("radius must be a non-negative number".into());
    }
    let h = sample.hard_sphere(radius, n_max).map_err(|e| e.to_string())?;
    let report = verify_quasi_iso_theta::<Rational, _>(&h).map_err(|e| e.to_string())?;
    let grades: Vec<usize> = (1..=n_max).map(|n| h.grade(n).count()).collect();
    let thresholds: Vec<Value> = (1..=n_max)
        .map(|n| {
            let t = emptiness_threshold(&sample, n).unwrap_or(f64::INFINITY);
            if t.is_finite() { json!(t) } else { Value::Null }
        })
        .collect();
    let edges: Vec<Vec<u32>> = h.edges().iter().filter(|e| e.cardinality() >= 2).map(|e| e.vertices().to_vec()).collect();
    let v = json!({
        "points": sample.len(),
        "radius": radius,
        "edges_per_size": grades,
        "emptiness_thresholds": thresholds,
        "betti_inf": report.betti_inf,
        "betti_sup": report.betti_sup,
        "is_iso": report.is_iso,
        "edges": edges,
    });
    Ok(v.to_string())
}

/// Persistent Betti table of the hard-sphere filtration of a point sample
/// given as CSV (`id,x,y,...`) or JSON (`distance_matrix` / `circle_angles`).
pub fn persistence_json(points: &str, n_max: usize, max_degree: usize, sup: bool) -> Result<String, String> {
    let sample = if points.trim_start().starts_with('{') {
        parse_points_json(points)
    } else {
        parse_points_csv(points)
    }
    .map_err(|e| e.to_string())?;
    if sample.len() > 12 {
        return Err("the demo is limited to 12 points".into());
    }
    let steps = build_filtration(&sample, n_max).map_err(|e| e.to_string())?;
    let kind = if sup { EmbeddedKind::Sup } else { EmbeddedKind::Inf };
    let table = persistent_betti::<Rational>(&steps, max_degree, kind, true).map_err(|e| e.to_string())?;
    let v = json!({
        "steps": steps,
        "csv": table.to_csv().map_err(|e| e.to_string())?,
        "barcode": table.barcode().map_err(|e| e.to_string())?,
    });
    Ok(v.to_string())
}

/// Group orders and automorphism generators of a hypergraph in JSON form.
pub fn automorphisms_json(hypergraph: &str) -> Result<String, String> {
    let parsed = parse_hypergraph(hypergraph).map_err(|e| e.to_string())?;
    let report = match &parsed.value {
        AnyHypergraph::Undirected(h) => group_report(h, DEFAULT_VERTEX_CAP),
        AnyHypergraph::Directed(h) => group_report(h, DEFAULT_VERTEX_CAP),
    }
    .map_err(|e| e.to_string())?;
    let v = json!({ "report": report, "warnings": parsed.warnings });
    Ok(v.to_string())
}

#[wasm_bindgen]
pub fn circle_explorer(angles: &str, radius: f64, n_max: usize) -> Result<String, JsError> {
    circle_explorer_json(angles, radius, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn persistence(points: &str, n_max: usize, max_degree: usize, sup: bool) -> Result<String, JsError> {
    persistence_json(points, n_max, max_degree, sup).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn automorphisms(hypergraph: &str) -> Result<String, JsError> {
    automorphisms_json(hypergraph).map_err(|e| JsError::new(&e))
}
