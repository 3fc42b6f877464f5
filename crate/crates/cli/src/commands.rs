use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::process::ExitCode;
use std::str::FromStr;

use clap::ValueEnum;
use serde_json::{json, Value};

use embedhom::automorphism::{aut_isom, group_report, isom_group};
use embedhom::bundle::{embedding_dimension_bound, n_embed_reference, order_bound, SpaceDescriptor};
use embedhom::chain::{self, ambient_complex, betti, four_term_sequence, quasi_iso_between, AmbientMode};
use embedhom::hypergraph::{Edge, Hypergraph};
use embedhom::io::{any_hypergraph_json, hypergraph_json, read_hypergraph, read_points, AnyHypergraph};
use embedhom::linalg::{is_prime, Field, Fp, Rational};
use embedhom::metric::MetricPointSample;
use embedhom::persistence::{build_filtration, persistent_betti, EmbeddedKind};
use embedhom::verify::{self, SuiteSizes};
use embedhom::Error;

use crate::{AmbientChoice, ClosureOp, Global, HomologyKind, Kind, Space};

pub type Output = (Value, Value, Vec<String>);

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Config(String),
    /// A checked identity failed; carries a counterexample.
    Theorem { message: String, counterexample: Value },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn report(&self) -> ExitCode {
        match self {
            CliError::Lib(e) => {
                eprintln!("error: {e}");
                match e {
                    Error::Cap { .. } => ExitCode::from(3),
                    Error::Invariant(_) => ExitCode::from(4),
                    _ => ExitCode::from(2),
                }
            }
            CliError::Config(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            CliError::Theorem { message, counterexample } => {
                eprintln!("check failed: {message}");
                eprintln!("{}", serde_json::to_string_pretty(counterexample).expect("json value"));
                ExitCode::from(4)
            }
        }
    }
}

pub const SUPPORTED_PRIMES: [u64; 7] = [2, 3, 5, 7, 11, 13, 101];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Q,
    Fp(u64),
}

impl FromStr for FieldChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldChoice::Q);
        }
        let p = t
            .strip_prefix("Z/")
            .or_else(|| t.strip_prefix("z/"))
            .ok_or_else(|| format!("expected Q or Z/p, got {t:?}"))?;
        let p: u64 = p.parse().map_err(|_| format!("bad modulus in {t:?}"))?;
        if !is_prime(p) {
            return Err(format!("{p} is not prime"));
        }
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(format!("Z/{p} is not built in; supported primes are {SUPPORTED_PRIMES:?}"));
        }
        Ok(FieldChoice::Fp(p))
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Q => write!(f, "Q"),
            FieldChoice::Fp(p) => write!(f, "Z/{p}"),
        }
    }
}

macro_rules! with_field {
    ($choice:expr, $F:ident => $body:expr) => {
        match $choice {
            FieldChoice::Q => {
                type $F = Rational;
                $body
            }
            FieldChoice::Fp(2) => {
                type $F = Fp<2>;
                $body
            }
            FieldChoice::Fp(3) => {
                type $F = Fp<3>;
                $body
            }
            FieldChoice::Fp(5) => {
                type $F = Fp<5>;
                $body
            }
            FieldChoice::Fp(7) => {
                type $F = Fp<7>;
                $body
            }
            FieldChoice::Fp(11) => {
                type $F = Fp<11>;
                $body
            }
            FieldChoice::Fp(13) => {
                type $F = Fp<13>;
                $body
            }
            FieldChoice::Fp(101) => {
                type $F = Fp<101>;
                $body
            }
            FieldChoice::Fp(p) => unreachable!("Z/{p} rejected while parsing"),
        }
    };
}

macro_rules! with_edges {
    ($any:expr, $h:ident => $body:expr) => {
        match $any {
            AnyHypergraph::Undirected($h) => $body,
            AnyHypergraph::Directed($h) => $body,
        }
    };
}

fn name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn with_path(path: &Path, e: Error) -> CliError {
    match e {
        Error::Io(io) => CliError::Config(format!("cannot read {}: {io}", path.display())),
        Error::Parse { location, message } => CliError::Lib(Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        }),
        other => CliError::Lib(other),
    }
}

fn load(input: &Path) -> Result<(AnyHypergraph, Vec<String>), CliError> {
    let parsed = read_hypergraph(input).map_err(|e| with_path(input, e))?;
    Ok((parsed.value, parsed.warnings))
}

fn load_points(path: &Path) -> Result<MetricPointSample, CliError> {
    read_points(path).map_err(|e| with_path(path, e))
}

/// Greedily drops edges while `fails` keeps holding.
fn minimize<E: Edge>(h: &Hypergraph<E>, fails: impl Fn(&Hypergraph<E>) -> bool) -> Hypergraph<E> {
    let mut cur = h.clone();
    loop {
        let smaller = cur.edges().iter().find_map(|e| {
            let rest = cur.edges().iter().filter(|f| *f != e).cloned();
            let cand = Hypergraph::new(cur.vertex_set().iter().copied(), rest).ok()?;
            fails(&cand).then_some(cand)
        });
        match smaller {
            Some(c) => cur = c,
            None => return cur,
        }
    }
}

fn theorem<E: Edge>(message: &str, h: &Hypergraph<E>, fails: impl Fn(&Hypergraph<E>) -> bool, detail: Value) -> CliError {
    let small = minimize(h, fails);
    CliError::Theorem {
        message: message.to_string(),
        counterexample: json!({ "hypergraph": hypergraph_json(&small), "detail": detail }),
    }
}

pub fn closure(input: &Path, op: ClosureOp, ambient: Option<&[u32]>) -> Result<Output, CliError> {
    let (any, warnings) = load(input)?;
    let args = json!({ "input": input, "op": name(op) });
    let out = match (&any, op) {
        (_, ClosureOp::Delta) => with_edges!(&any, h => hypergraph_json(&h.delta_closure())),
        (_, ClosureOp::Lower) => with_edges!(&any, h => hypergraph_json(&h.lower_associated())),
        (_, ClosureOp::Max) => with_edges!(&any, h => hypergraph_json(&h.max_min_edges().0)),
        (_, ClosureOp::Min) => with_edges!(&any, h => hypergraph_json(&h.max_min_edges().1)),
        (AnyHypergraph::Undirected(h), ClosureOp::Upper | ClosureOp::LowerUpper) => {
            let amb: BTreeSet<u32> = match ambient {
                Some(a) => a.iter().copied().collect(),
                None => h.vertex_set().clone(),
            };
            let g = if op == ClosureOp::Upper {
                h.associated_independence(&amb)?
            } else {
                h.lower_associated_independence(&amb)?
            };
            hypergraph_json(&g)
        }
        (AnyHypergraph::Directed(_), _) => {
            return Err(CliError::Config("superset closures are defined for undirected hypergraphs only".into()))
        }
    };
    let edge_count = out[if any.is_directed() { "directed_edges" } else { "edges" }].as_array().map_or(0, Vec::len);
    Ok((args, json!({ "hypergraph": out, "edge_count": edge_count }), warnings))
}

fn export_matrices<F: Field, E: Edge>(c: &chain::EmbeddedComplex<F, E>, dir: &Path) -> Result<Vec<String>, Error> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |file: String, text: String| -> Result<(), Error> {
        std::fs::write(dir.join(&file), text)?;
        written.push(file);
        Ok(())
    };
    for n in 0..c.num_degrees() {
        let labels: String = c.labels().labels(n).iter().map(|e| format!("{e}\n")).collect();
        put(format!("labels_{n}.txt"), labels)?;
        if let Some(space) = c.space(n) {
            put(format!("basis_{n}.txt"), space.basis_matrix().to_coordinate_text())?;
        }
        if n >= 1 {
            put(format!("boundary_{n}.txt"), c.complex().boundary(n).to_coordinate_text())?;
        }
    }
    Ok(written)
}

fn homology_impl<F: Field, E: Edge>(h: &Hypergraph<E>, kind: HomologyKind, export: Option<&Path>) -> Result<Value, CliError> {
    let amb = ambient_complex::<F, E>(h, &AmbientMode::Closure, 0)?;
    let inf = amb.inf_in(h)?;
    let sup = amb.sup_in(h)?;
    let target = match kind {
        HomologyKind::Inf => &inf,
        HomologyKind::Sup => &sup,
        HomologyKind::Ambient => &amb,
    };
    let summary = betti(target.complex())?;
    let q = quasi_iso_between(&inf, &sup)?;
    let exported = match export {
        Some(dir) => Some(export_matrices(target, dir)?),
        None => None,
    };
    let result = json!({
        "field": summary.field,
        "kind": name(kind),
        "directed": E::DIRECTED,
        "betti": summary.betti,
        "dims": target.dims(),
        "inf_sup_iso": q.is_iso,
        "betti_inf": q.betti_inf,
        "betti_sup": q.betti_sup,
        "induced_ranks": q.induced_ranks,
        "exported": exported,
    });
    if !q.is_iso {
        let fails = |g: &Hypergraph<E>| chain::verify_quasi_iso_theta::<F, E>(g).is_ok_and(|r| !r.is_iso);
        return Err(theorem("Inf -> Sup is not a quasi-isomorphism", h, fails, result));
    }
    Ok(result)
}

pub fn homology(
    g: &Global,
    input: &Path,
    kind: HomologyKind,
    directed: bool,
    export: Option<&Path>,
) -> Result<Output, CliError> {
    let (any, warnings) = load(input)?;
    if directed && !any.is_directed() {
        return Err(CliError::Config("--directed given but the file has no directed_edges".into()));
    }
    let args = json!({ "input": input, "kind": name(kind), "field": g.field.to_string() });
    let result = with_field!(g.field, F => with_edges!(&any, h => homology_impl::<F, _>(h, kind, export)?));
    Ok((args, result, warnings))
}

fn quasi_impl<F: Field, E: Edge>(h: &Hypergraph<E>) -> Result<Value, CliError> {
    let r = chain::verify_quasi_iso_theta::<F, E>(h)?;
    let v = json!({ "field": F::descriptor(), "report": r });
    if !r.is_iso {
        let fails = |g: &Hypergraph<E>| chain::verify_quasi_iso_theta::<F, E>(g).is_ok_and(|r| !r.is_iso);
        return Err(theorem("Inf -> Sup is not a quasi-isomorphism", h, fails, v));
    }
    Ok(v)
}

pub fn quasi_check(g: &Global, input: &Path) -> Result<Output, CliError> {
    let (any, warnings) = load(input)?;
    let args = json!({ "input": input, "field": g.field.to_string() });
    let result = with_field!(g.field, F => with_edges!(&any, h => quasi_impl::<F, _>(h)?));
    Ok((args, result, warnings))
}

fn four_term_impl<F: Field, E: Edge>(h: &Hypergraph<E>) -> Result<Value, CliError> {
    let ok = |g: &Hypergraph<E>| {
        four_term_sequence::<F, E>(g).map(|r| r.chain_maps && r.surjective.iter().all(|&s| s))
    };
    let r = four_term_sequence::<F, E>(h)?;
    let v = json!({ "field": F::descriptor(), "report": r });
    if !ok(h)? {
        return Err(theorem("four-term sequence maps are not surjective chain maps", h, |g| ok(g).is_ok_and(|b| !b), v));
    }
    Ok(v)
}

pub fn four_term(g: &Global, input: &Path) -> Result<Output, CliError> {
    let (any, warnings) = load(input)?;
    let args = json!({ "input": input, "field": g.field.to_string() });
    let result = with_field!(g.field, F => with_edges!(&any, h => four_term_impl::<F, _>(h)?));
    Ok((args, result, warnings))
}

fn quotient_impl<F: Field, E: Edge>(h: &Hypergraph<E>, mode: &AmbientMode, cap: usize) -> Result<Value, CliError> {
    let run = |g: &Hypergraph<E>| -> Result<_, Error> {
        let amb = ambient_complex::<F, E>(g, mode, cap)?;
        chain::quotient_check(&amb, g)
    };
    let r = run(h)?;
    let v = json!({ "field": F::descriptor(), "report": r });
    if !(r.surjective && r.is_quasi_iso) {
        let fails = |g: &Hypergraph<E>| run(g).is_ok_and(|r| !(r.surjective && r.is_quasi_iso));
        return Err(theorem("C/Inf -> C/Sup is not a surjective quasi-isomorphism", h, fails, v));
    }
    Ok(v)
}

pub fn quotient_check(
    g: &Global,
    input: &Path,
    ambient: AmbientChoice,
    max_degree: Option<usize>,
) -> Result<Output, CliError> {
    let (any, warnings) = load(input)?;
    let vertices = with_edges!(&any, h => h.vertex_set().clone());
    let mode = match ambient {
        AmbientChoice::Closure => AmbientMode::Closure,
        AmbientChoice::Full => AmbientMode::FullSimplex {
            max_degree: max_degree.unwrap_or(vertices.len().saturating_sub(1)),
            vertices,
        },
    };
    let args = json!({ "input": input, "ambient": name(ambient), "max_degree": max_degree, "field": g.field.to_string() });
    let cap = g.ambient_cap as usize;
    let result = with_field!(g.field, F => with_edges!(&any, h => quotient_impl::<F, _>(h, &mode, cap)?));
    Ok((args, result, warnings))
}

#[allow(clippy::too_many_arguments)]
pub fn persist(
    g: &Global,
    points: &Path,
    n_max: usize,
    max_degree: usize,
    kind: Kind,
    all_pairs: bool,
    csv: Option<&Path>,
    barcode: Option<&Path>,
) -> Result<Output, CliError> {
    let sample = load_points(points)?;
    let steps = build_filtration(&sample, n_max)?;
    let ek = match kind {
        Kind::Inf => EmbeddedKind::Inf,
        Kind::Sup => EmbeddedKind::Sup,
    };
    let table = with_field!(g.field, F => persistent_betti::<F>(&steps, max_degree, ek, all_pairs)?);
    let args = json!({
        "points": points, "n_max": n_max, "max_degree": max_degree,
        "kind": name(kind), "all_pairs": all_pairs, "field": g.field.to_string(),
    });
    if let Some((d, i, j, k)) = table.composition_violation() {
        return Err(CliError::Theorem {
            message: format!("rank({i},{k}) exceeds min(rank({i},{j}), rank({j},{k})) in degree {d}"),
            counterexample: json!({ "points": points, "steps": steps }),
        });
    }
    if barcode.is_some() && !all_pairs {
        return Err(CliError::Config("--barcode needs the all-pairs table; drop --consecutive".into()));
    }
    let bars: Option<Vec<Value>> = if all_pairs {
        Some(
            table
                .barcode()?
                .into_iter()
                .map(|b| {
                    let born = &steps[b.birth_step];
                    json!({
                        "degree": b.degree,
                        "birth_step": b.birth_step,
                        "death_step": b.death_step,
                        "birth_radius_interval": [born.lower, born.upper],
                        "death_radius_interval": b.death_step.map(|d| json!([steps[d].lower, steps[d].upper])),
                    })
                })
                .collect(),
        )
    } else {
        None
    };
    let barcode_json = json!({ "kind": name(kind), "field": g.field.to_string(), "steps": steps, "bars": bars });
    if let Some(p) = csv {
        std::fs::write(p, table.to_csv()?).map_err(Error::from)?;
    }
    if let Some(p) = barcode {
        let text = serde_json::to_string_pretty(&barcode_json).expect("json value") + "\n";
        std::fs::write(p, text).map_err(Error::from)?;
    }
    let result = json!({
        "metric": sample.metric().kind(),
        "steps": steps,
        "table": table,
        "csv": if csv.is_some() { Value::Null } else { Value::from(table.to_csv()?) },
        "barcode": bars,
    });
    Ok((args, result, Vec::new()))
}

pub fn aut(g: &Global, input: &Path) -> Result<Output, CliError> {
    let (any, warnings) = load(input)?;
    let cap = g.vertex_cap as usize;
    let args = json!({ "input": input, "vertex_cap": cap });
    let r = with_edges!(&any, h => group_report(h, cap)?);
    if !r.consistent() {
        return Err(CliError::Theorem {
            message: "group orders or normality checks are inconsistent".into(),
            counterexample: json!({ "hypergraph": any_hypergraph_json(&any), "report": r }),
        });
    }
    Ok((args, serde_json::to_value(&r).expect("report serializes"), warnings))
}

pub fn isom(g: &Global, points: &Path, hypergraph: Option<&Path>) -> Result<Output, CliError> {
    let sample = load_points(points)?;
    let cap = g.vertex_cap as usize;
    let group = isom_group(&sample, cap)?;
    let mut result = json!({
        "isom_order": group.order(),
        "generators": group.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "ids": sample.ids(),
    });
    let mut warnings = Vec::new();
    if let Some(path) = hypergraph {
        let (any, w) = load(path)?;
        warnings.extend(w);
        let AnyHypergraph::Undirected(h) = any else {
            return Err(CliError::Config("isom takes an undirected hypergraph".into()));
        };
        let r = aut_isom(&h, &sample, cap)?;
        if r.normal == Some(false) {
            return Err(CliError::Theorem {
                message: "Stab ∩ Isom is not normal in Homeo ∩ Isom".into(),
                counterexample: json!({ "hypergraph": hypergraph_json(&h), "report": r }),
            });
        }
        result["hypergraph"] = serde_json::to_value(r).expect("report serializes");
    }
    let args = json!({ "points": points, "hypergraph": hypergraph, "vertex_cap": cap });
    Ok((args, result, warnings))
}

fn need(v: Option<u64>, flag: &str, space: Space) -> Result<u64, CliError> {
    v.ok_or_else(|| CliError::Config(format!("--space {} needs --{flag}", name(space))))
}

pub fn bundle_order(
    space: Space,
    n: u64,
    m: Option<u64>,
    genus: Option<u64>,
    k: Option<u64>,
    n_embed: Option<u64>,
) -> Result<Output, CliError> {
    let mut warnings = Vec::new();
    let mut embed = |m: u64| -> Result<u64, CliError> {
        if let Some(e) = n_embed {
            return Ok(e);
        }
        let e = n_embed_reference(m).ok_or_else(|| {
            CliError::Config(format!("no reference embedding dimension for RP^{m}; pass --n-embed"))
        })?;
        warnings.push(format!("using reference embedding dimension {e} for RP^{m}"));
        Ok(e)
    };
    let descriptor = match space {
        Space::Surface => SpaceDescriptor::Surface { genus: need(genus, "genus", space)? },
        Space::Euclidean => SpaceDescriptor::Euclidean { m: need(m, "m", space)? },
        Space::Sphere => SpaceDescriptor::Sphere { m: need(m, "m", space)? },
        Space::Rp => {
            let m = need(m, "m", space)?;
            SpaceDescriptor::RealProjective { m, n_embed: embed(m)? }
        }
        Space::RpTimesR => {
            let m = need(m, "m", space)?;
            SpaceDescriptor::RealProjectiveTimesEuclidean { m, k: need(k, "k", space)?, n_embed: embed(m)? }
        }
    };
    let bound = order_bound(descriptor, n)?;
    warnings.extend(bound.warning.clone());
    let value = serde_json::to_value(&bound).expect("bound serializes");
    let args = json!({ "space": descriptor, "n": n });
    Ok((args, json!({ "divides": value["divides"] }), warnings))
}

pub fn embed_bound(t: u64, k: u64) -> Result<Output, CliError> {
    let bound = embedding_dimension_bound(t, k)?;
    Ok((json!({ "t": t, "k": k }), json!({ "bound": bound }), Vec::new()))
}

pub fn selftest(seed: u64, quick: bool) -> Result<Output, CliError> {
    let sizes = if quick { SuiteSizes::QUICK } else { SuiteSizes::FULL };
    let report = verify::selftest(seed, sizes);
    let value = serde_json::to_value(&report).expect("report serializes");
    if !report.passed() {
        return Err(CliError::Theorem {
            message: "selftest suites reported failures".into(),
            counterexample: value,
        });
    }
    Ok((json!({ "seed": seed, "quick": quick }), value, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use embedhom::hypergraph::Hyperedge;

    #[test]
    fn minimize_keeps_only_the_culprit() {
        let h = Hypergraph::from_lists([vec![0, 1], vec![1, 2], vec![0, 1, 2]]);
        let culprit = Hyperedge::new([1, 2]).unwrap();
        let small = minimize(&h, |g| g.contains(&culprit));
        assert_eq!(small.edges().iter().collect::<Vec<_>>(), vec![&culprit]);
    }

    #[test]
    fn field_parsing() {
        assert_eq!("Q".parse::<FieldChoice>().unwrap(), FieldChoice::Q);
        assert_eq!("Z/7".parse::<FieldChoice>().unwrap(), FieldChoice::Fp(7));
        assert!("Z/9".parse::<FieldChoice>().is_err());
        assert!("Z/17".parse::<FieldChoice>().is_err());
        assert!("R".parse::<FieldChoice>().is_err());
    }

    #[test]
    fn theorem_failures_exit_four() {
        let e = CliError::Theorem { message: "x".into(), counterexample: Value::Null };
        assert_eq!(e.report(), ExitCode::from(4));
    }
}
