//! Seeded random instances and the randomized check suites behind `selftest`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automorphism::{group_report, pi_surjection_check, DEFAULT_VERTEX_CAP};
use crate::bundle::sheet_count_check;
use crate::chain::{
    ambient_complex, four_term_sequence, hodge_laplacian, inf_complex, quotient_check, sup_complex,
    verify_quasi_iso_theta, AmbientMode, DeltaSet, EmbeddedComplex, GradedBasis,
};
use crate::error::Result;
use crate::hypergraph::{DirectedHyperedge, Edge, Hyperdigraph, Hyperedge, Hypergraph, VertexId};
use crate::linalg::Rational;
use crate::metric::MetricPointSample;
use crate::persistence::{build_filtration, persistent_betti, EmbeddedKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_edge<E: Edge>(rng: &mut impl Rng, n_vertices: usize, max_card: usize) -> E {
    let k = rng.random_range(1..=max_card.min(n_vertices));
    let mut vs: Vec<VertexId> = (0..n_vertices as VertexId).collect();
    vs.shuffle(rng);
    vs.truncate(k);
    E::from_vertices(vs).expect("distinct vertices")
}

/// `edge_count` random edges (before deduplication) on `0..n_vertices`.
pub fn random_edges<E: Edge>(rng: &mut impl Rng, n_vertices: usize, max_card: usize, edge_count: usize) -> Hypergraph<E> {
    let edges: Vec<E> = (0..edge_count).map(|_| random_edge(rng, n_vertices, max_card)).collect();
    Hypergraph::new(0..n_vertices as VertexId, edges).expect("edges on the vertex set")
}

/// A random hypergraph with `|V|` in `[3, 8]`, edges of at most 5 vertices
/// and an edge count drawn to vary the density.
pub fn random_hypergraph(rng: &mut impl Rng) -> Hypergraph<Hyperedge> {
    let n = rng.random_range(3..=8);
    let count = rng.random_range(1..=3 * n);
    random_edges(rng, n, 5, count)
}

pub fn random_hyperdigraph(rng: &mut impl Rng) -> Hyperdigraph {
    let n = rng.random_range(3..=8);
    let count = rng.random_range(1..=3 * n);
    random_edges::<DirectedHyperedge>(rng, n, 5, count)
}

/// Face closure of a random hypergraph.
pub fn random_simplicial_complex(rng: &mut impl Rng) -> Hypergraph<Hyperedge> {
    let n = rng.random_range(3..=7);
    let count = rng.random_range(1..=n);
    random_edges::<Hyperedge>(rng, n, 4, count).delta_closure()
}

/// `n` random angles on the unit circle.
pub fn random_circle(rng: &mut impl Rng, n: usize) -> Result<MetricPointSample> {
    MetricPointSample::circle((0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect())
}

/// `n` distinct points with small integer coordinates in the plane.
pub fn random_planar(rng: &mut impl Rng, n: usize) -> Result<MetricPointSample> {
    let mut seen = BTreeSet::new();
    while seen.len() < n {
        seen.insert((rng.random_range(0..8i64), rng.random_range(0..8i64)));
    }
    let mut pts: Vec<(i64, i64)> = seen.into_iter().collect();
    pts.shuffle(rng);
    MetricPointSample::euclidean(
        pts.into_iter()
            .map(|(x, y)| vec![Rational::from_integer(x.into()), Rational::from_integer(y.into())])
            .collect(),
    )
}

/// Outcome of one randomized suite.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Description of the first failing instance.
    pub counterexample: Option<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult {
            name: name.to_string(),
            cases: 0,
            failures: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: Result<bool>, describe: impl FnOnce() -> String) {
        self.cases += 1;
        let ok = match ok {
            Ok(b) => b,
            Err(e) => {
                self.note(format!("{} (error: {e})", describe()));
                self.failures += 1;
                return;
            }
        };
        if !ok {
            self.failures += 1;
            self.note(describe());
        }
    }

    fn note(&mut self, s: String) {
        if self.counterexample.is_none() {
            self.counterexample = Some(s);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

/// Instance counts per suite.
#[derive(Clone, Copy, Debug)]
pub struct SuiteSizes {
    pub hypergraphs: usize,
    pub hyperdigraphs: usize,
    pub simplicial: usize,
    pub quotients: usize,
    pub coverings: usize,
    pub samples: usize,
    pub laplacians: usize,
    pub fuzz_elements: usize,
}

impl SuiteSizes {
    pub const FULL: SuiteSizes = SuiteSizes {
        hypergraphs: 200,
        hyperdigraphs: 100,
        simplicial: 50,
        quotients: 30,
        coverings: 50,
        samples: 20,
        laplacians: 50,
        fuzz_elements: 1000,
    };

    pub const QUICK: SuiteSizes = SuiteSizes {
        hypergraphs: 20,
        hyperdigraphs: 10,
        simplicial: 10,
        quotients: 5,
        coverings: 10,
        samples: 5,
        laplacians: 10,
        fuzz_elements: 200,
    };
}

pub fn quasi_iso_suite(seed: u64, hypergraphs: usize, hyperdigraphs: usize) -> SuiteResult {
    let mut r = rng(seed);
    let mut s = SuiteResult::new("quasi_isomorphism");
    for _ in 0..hypergraphs {
        let h = random_hypergraph(&mut r);
        s.record(verify_quasi_iso_theta::<Rational, _>(&h).map(|q| q.is_iso), || h.to_string());
    }
    for _ in 0..hyperdigraphs {
        let h = random_hyperdigraph(&mut r);
        s.record(verify_quasi_iso_theta::<Rational, _>(&h).map(|q| q.is_iso), || h.to_string());
    }
    s
}

/// Inf, Sup and the ambient chains agree and the four-term maps are identities.
pub fn simplicial_identity_check(h: &Hypergraph) -> Result<bool> {
    let amb = ambient_complex::<Rational, _>(h, &AmbientMode::Closure, 0)?;
    let inf = inf_complex::<Rational, _>(h)?;
    let sup = sup_complex::<Rational, _>(h)?;
    let four = four_term_sequence::<Rational, _>(h)?;
    Ok(inf.same_representation(&amb) && sup.same_representation(&amb) && four.all_identity && four.chain_maps)
}

pub fn simplicial_suite(seed: u64, count: usize) -> SuiteResult {
    let mut r = rng(seed);
    let mut s = SuiteResult::new("simplicial_identity");
    for _ in 0..count {
        let h = random_simplicial_complex(&mut r);
        s.record(simplicial_identity_check(&h), || h.to_string());
    }
    s
}

/// `C/Inf -> C/Sup` inside the full simplex on the vertex set.
pub fn quotient_instance_check(h: &Hypergraph) -> Result<bool> {
    let max_degree = h.max_cardinality().saturating_sub(1) + 1;
    let mode = AmbientMode::FullSimplex {
        vertices: h.vertex_set().clone(),
        max_degree: max_degree.min(h.vertex_set().len().saturating_sub(1)),
    };
    let amb = ambient_complex::<Rational, _>(h, &mode, 16)?;
    let q = quotient_check(&amb, h)?;
    Ok(q.surjective && q.is_quasi_iso && q.betti_mod_inf == q.betti_mod_sup)
}

pub fn quotient_suite(seed: u64, count: usize) -> SuiteResult {
    let mut r = rng(seed);
    let mut s = SuiteResult::new("quotient_quasi_isomorphism");
    for _ in 0..count {
        let n = r.random_range(3..=6);
        let edges = r.random_range(1..=2 * n);
        let h: Hypergraph = random_edges(&mut r, n, 4, edges);
        s.record(quotient_instance_check(&h), || h.to_string());
    }
    s
}

pub fn covering_instance_check(h: &Hypergraph) -> Result<bool> {
    let lifted = h.lift();
    let mut ok = lifted.is_sigma_invariant() && sheet_count_check(&lifted)? && lifted.project() == *h;
    if h.vertex_set().len() <= 5 {
        ok &= pi_surjection_check(&lifted, DEFAULT_VERTEX_CAP)?;
    }
    Ok(ok)
}

pub fn covering_suite(seed: u64, count: usize) -> SuiteResult {
    let mut r = rng(seed);
    let mut s = SuiteResult::new("covering_sheets");
    for _ in 0..count {
        let n = r.random_range(3..=6);
        let edges = r.random_range(1..=2 * n);
        let h: Hypergraph = random_edges(&mut r, n, 4, edges);
        s.record(covering_instance_check(&h), || h.to_string());
    }
    s
}

/// Level-`n` hard-sphere hypergraphs vanish at every radius `>= pi / n`.
pub fn circle_emptiness_check(sample: &MetricPointSample) -> Result<bool> {
    for n in 1..=5usize.min(sample.len()) {
        let threshold = PI / n as f64;
        for r in [threshold, threshold * 1.5, threshold + 1e-12] {
            let h = sample.hard_sphere(r, n)?;
            if n >= 2 && h.grade(n).next().is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn circle_suite(seed: u64, count: usize) -> SuiteResult {
    let mut r = rng(seed);
    let mut s = SuiteResult::new("circle_emptiness");
    s.record(
        MetricPointSample::equally_spaced_circle(12).and_then(|c| {
            let below = c.hard_sphere(PI / 3.0 - 1e-6, 3)?.grade(3).count() > 0;
            let at = c.hard_sphere(PI / 3.0, 3)?.grade(3).count() == 0;
            Ok(below && at)
        }),
        || "12 equally spaced points".into(),
    );
    for _ in 0..count {
        let n = r.random_range(2..=9);
        let sample = match random_circle(&mut r, n) {
            Ok(x) => x,
            Err(_) => continue,
        };
        s.record(circle_emptiness_check(&sample), || format!("{:?}", sample.metric()));
    }
    s
}

pub fn persistence_instance_check(sample: &MetricPointSample) -> Result<bool> {
    let steps = build_filtration(sample, 3)?;
    let table = persistent_betti::<Rational>(&steps, 1, EmbeddedKind::Inf, true)?;
    Ok(table.composition_violation().is_none())
}

pub fn persistence_suite(seed: u64, count: usize) -> SuiteResult {
    let mut r = rng(seed);
    let mut s = SuiteResult::new("persistence_monotonicity");
    for _ in 0..count {
        let sample = random_planar(&mut r, 5);
        match sample {
            Ok(p) => s.record(persistence_instance_check(&p), || format!("{:?}", p.metric())),
            Err(e) => s.record(Err(e), || "sample".into()),
        }
    }
    s
}

/// Harmonic rank equals the Betti number in every degree of Inf and Sup.
pub fn laplacian_instance_check<E: Edge>(h: &Hypergraph<E>) -> Result<bool> {
    for c in [inf_complex::<Rational, E>(h)?, sup_complex::<Rational, E>(h)?] {
        let betti = c.complex().betti_numbers();
        for (n, b) in betti.iter().enumerate() {
            if hodge_laplacian(c.complex(), n).1 != *b {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn laplacian_suite(seed: u64, count: usize) -> SuiteResult {
    let mut r = rng(seed);
    let mut s = SuiteResult::new("laplacian_betti");
    for _ in 0..count {
        let n = r.random_range(3..=7);
        let edges = r.random_range(1..=3 * n);
        let h: Hypergraph = random_edges(&mut r, n, 4, edges);
        s.record(laplacian_instance_check(&h), || h.to_string());
    }
    s
}

/// Face-closed bases built from random edges, checked for the Δ-identity.
/// Returns the number of basis elements examined.
pub fn delta_identity_fuzz(seed: u64, min_elements: usize) -> (SuiteResult, usize) {
    let mut r = rng(seed);
    let mut s = SuiteResult::new("delta_identity");
    let mut total = 0;
    while total < min_elements {
        let n = r.random_range(3..=7);
        let edges = r.random_range(1..=n);
        if r.random_bool(0.5) {
            let h: Hypergraph = random_edges(&mut r, n, 5, edges);
            let basis = GradedBasis::from_hypergraph(&h.delta_closure());
            total += basis.total();
            s.record(DeltaSet::from_basis(&basis).map(|d| d.satisfies_delta_identity()), || h.to_string());
        } else {
            let h: Hyperdigraph = random_edges(&mut r, n, 5, edges);
            let basis = GradedBasis::from_hypergraph(&h.delta_closure());
            total += basis.total();
            s.record(DeltaSet::from_basis(&basis).map(|d| d.satisfies_delta_identity()), || h.to_string());
        }
    }
    (s, total)
}

/// Betti numbers of Inf and Sup agree between the closure ambient and the
/// full simplex on a larger vertex set.
pub fn ambient_independence_check(h: &Hypergraph) -> Result<bool> {
    let mut vertices = h.vertex_set().clone();
    let extra = vertices.last().map_or(0, |v| v + 1);
    vertices.insert(extra);
    let max_degree = h.max_cardinality().max(1);
    let mode = AmbientMode::FullSimplex { vertices, max_degree };
    let closure = ambient_complex::<Rational, _>(h, &AmbientMode::Closure, 0)?;
    let full = ambient_complex::<Rational, _>(h, &mode, 16)?;
    let pairs: [(EmbeddedComplex<Rational, Hyperedge>, EmbeddedComplex<Rational, Hyperedge>); 2] =
        [(closure.inf_in(h)?, full.inf_in(h)?), (closure.sup_in(h)?, full.sup_in(h)?)];
    Ok(pairs.iter().all(|(a, b)| {
        crate::chain::trim_zeros(a.complex().betti_numbers()) == crate::chain::trim_zeros(b.complex().betti_numbers())
    }))
}

pub fn ambient_suite(seed: u64, count: usize) -> SuiteResult {
    let mut r = rng(seed);
    let mut s = SuiteResult::new("ambient_independence");
    for _ in 0..count {
        let n = r.random_range(3..=6);
        let edges = r.random_range(1..=2 * n);
        let h: Hypergraph = random_edges(&mut r, n, 4, edges);
        s.record(ambient_independence_check(&h), || h.to_string());
    }
    s
}

/// The four group tables on `{0, 1, 2, 3}` as `(hypergraph, (|Homeo|, |Stab|, |Aut|))`.
pub fn group_table_fixtures() -> Vec<(Hypergraph, (usize, usize, usize))> {
    let on4 = |lists: &[&[VertexId]]| {
        Hypergraph::from_lists(lists.iter().map(|l| l.to_vec()))
            .with_vertex_set(0..4)
            .expect("fixture vertices")
    };
    vec![
        (on4(&[&[1, 2], &[0, 2], &[0, 1], &[0, 1, 2]]), (6, 1, 6)),
        (on4(&[&[0, 1], &[2, 3]]), (8, 4, 2)),
        (on4(&[&[0, 1]]), (4, 4, 1)),
        (on4(&[&[0, 1, 2], &[1, 2, 3]]), (4, 2, 2)),
    ]
}

pub fn group_table_suite() -> SuiteResult {
    let mut s = SuiteResult::new("group_tables");
    for (h, expected) in group_table_fixtures() {
        s.record(
            group_report(&h, DEFAULT_VERTEX_CAP)
                .map(|r| r.consistent() && (r.homeo_order, r.stab_order, r.aut_order) == expected),
            || h.to_string(),
        );
    }
    s
}

/// Runs every suite; each suite gets its own seed derived from `seed`.
pub fn selftest(seed: u64, sizes: SuiteSizes) -> SelftestReport {
    let sub = |k: u64| seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k);
    let suites = vec![
        group_table_suite(),
        quasi_iso_suite(sub(1), sizes.hypergraphs, sizes.hyperdigraphs),
        simplicial_suite(sub(2), sizes.simplicial),
        quotient_suite(sub(3), sizes.quotients),
        covering_suite(sub(4), sizes.coverings),
        circle_suite(sub(5), sizes.samples),
        persistence_suite(sub(6), sizes.samples),
        laplacian_suite(sub(7), sizes.laplacians),
        delta_identity_fuzz(sub(8), sizes.fuzz_elements).0,
        ambient_suite(sub(9), sizes.simplicial),
    ];
    SelftestReport { seed, suites }
}
