//! Finite metric point samples and hard-sphere hypergraphs.
//!
//! Three metric kinds are supported: Euclidean coordinates with exact
//! rational entries, an explicit symmetric distance matrix, and arc length
//! on the unit circle. The triangle inequality is not checked, so a
//! distance matrix may hold any symmetric dissimilarity.
//!
//! All comparisons go through *distance classes*: the distinct pairwise
//! distances in increasing order. Euclidean classes are exact (compared as
//! squared rationals); floating classes merge values closer than the
//! sample's tolerance.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, Hypergraph, VertexId};

/// Default tolerance for arc-length comparisons on the circle.
pub const DEFAULT_CIRCLE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, PartialEq, Debug)]
pub enum Metric {
    /// One exact coordinate vector per point.
    Euclidean(Vec<Vec<BigRational>>),
    /// Symmetric matrix with zero diagonal and positive off-diagonal entries.
    Matrix(Vec<Vec<f64>>),
    /// Angles in radians on the unit circle.
    Circle(Vec<f64>),
}

impl Metric {
    pub fn kind(&self) -> &'static str {
        match self {
            Metric::Euclidean(_) => "euclidean",
            Metric::Matrix(_) => "distance_matrix",
            Metric::Circle(_) => "circle",
        }
    }

    fn len(&self) -> usize {
        match self {
            Metric::Euclidean(p) => p.len(),
            Metric::Matrix(m) => m.len(),
            Metric::Circle(a) => a.len(),
        }
    }
}

/// Exact comparison key for a pairwise distance.
#[derive(Clone, PartialEq, Debug)]
enum DistanceKey {
    Squared(BigRational),
    Float(f64),
}

#[derive(Clone, PartialEq, Debug)]
pub struct MetricPointSample {
    ids: Vec<VertexId>,
    metric: Metric,
    tolerance: f64,
    /// `class[i][j]`: 1-based distance class of the pair, 0 on the diagonal.
    class: Vec<Vec<usize>>,
    /// Representative distance of each class, increasing.
    class_distance: Vec<f64>,
    /// Exact half-distance of each class, for Euclidean samples.
    class_exact: Vec<Option<String>>,
}

impl MetricPointSample {
    /// Validates the sample. `ids` must be distinct; tolerance applies to
    /// floating metrics only.
    pub fn new(ids: Vec<VertexId>, metric: Metric, tolerance: f64) -> Result<Self> {
        if ids.len() != metric.len() {
            return Err(Error::domain(format!("{} ids for {} points", ids.len(), metric.len())));
        }
        if ids.iter().collect::<BTreeSet<_>>().len() != ids.len() {
            return Err(Error::domain("point ids must be distinct"));
        }
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(Error::domain("tolerance must be a non-negative finite number"));
        }
        validate(&metric)?;
        let mut sample = MetricPointSample {
            ids,
            metric,
            tolerance,
            class: Vec::new(),
            class_distance: Vec::new(),
            class_exact: Vec::new(),
        };
        sample.classify()?;
        Ok(sample)
    }

    /// Points `0..n` with the metric's default tolerance.
    pub fn with_default_ids(metric: Metric) -> Result<Self> {
        let tol = match metric {
            Metric::Circle(_) => DEFAULT_CIRCLE_TOLERANCE,
            _ => 0.0,
        };
        let ids = (0..metric.len() as VertexId).collect();
        Self::new(ids, metric, tol)
    }

    pub fn euclidean(points: Vec<Vec<BigRational>>) -> Result<Self> {
        Self::with_default_ids(Metric::Euclidean(points))
    }

    pub fn matrix(m: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_default_ids(Metric::Matrix(m))
    }

    pub fn circle(angles: Vec<f64>) -> Result<Self> {
        Self::with_default_ids(Metric::Circle(angles))
    }

    /// `n` equally spaced points on the unit circle, starting at angle 0.
    pub fn equally_spaced_circle(n: usize) -> Result<Self> {
        Self::circle((0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect())
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    fn key(&self, i: usize, j: usize) -> DistanceKey {
        match &self.metric {
            Metric::Euclidean(p) => DistanceKey::Squared(
                p[i].iter()
                    .zip(&p[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .fold(BigRational::zero(), |s, x| s + x),
            ),
            Metric::Matrix(m) => DistanceKey::Float(m[i][j]),
            Metric::Circle(a) => DistanceKey::Float(arc(a[i], a[j])),
        }
    }

    /// Distance between the points at positions `i` and `j`, as a float.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match self.key(i, j) {
            DistanceKey::Squared(q) => q.to_f64().unwrap_or(f64::INFINITY).sqrt(),
            DistanceKey::Float(d) => d,
        }
    }

    fn classify(&mut self) -> Result<()> {
        let n = self.len();
        let mut pairs: Vec<(usize, usize, DistanceKey)> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j, self.key(i, j)));
            }
        }
        pairs.sort_by(|a, b| cmp_key(&a.2, &b.2));
        self.class = vec![vec![0; n]; n];
        self.class_distance.clear();
        self.class_exact.clear();
        let mut prev: Option<DistanceKey> = None;
        for (i, j, k) in pairs {
            let same = match (&prev, &k) {
                (Some(DistanceKey::Squared(a)), DistanceKey::Squared(b)) => a == b,
                (Some(DistanceKey::Float(a)), DistanceKey::Float(b)) => b - a <= self.tolerance,
                _ => false,
            };
            if !same {
                self.class_distance.push(match &k {
                    DistanceKey::Squared(q) => q.to_f64().unwrap_or(f64::INFINITY).sqrt(),
                    DistanceKey::Float(d) => *d,
                });
                self.class_exact.push(match &k {
                    DistanceKey::Squared(q) => Some(half_root_text(q)),
                    DistanceKey::Float(_) => None,
                });
                prev = Some(k);
            }
            let c = self.class_distance.len();
            self.class[i][j] = c;
            self.class[j][i] = c;
        }
        if let Some((i, j)) = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| {
            matches!(self.key(i, j), DistanceKey::Float(d) if d <= self.tolerance)
        }) {
            return Err(Error::domain(format!(
                "points {} and {} coincide within tolerance",
                self.ids[i], self.ids[j]
            )));
        }
        Ok(())
    }

    /// 1-based distance class of a pair of positions; 0 when `i == j`.
    pub fn distance_class(&self, i: usize, j: usize) -> usize {
        self.class[i][j]
    }

    pub fn num_classes(&self) -> usize {
        self.class_distance.len()
    }

    /// Whether the pair at positions `i`, `j` is farther apart than `2r`.
    pub fn separated(&self, i: usize, j: usize, r: f64) -> bool {
        match self.key(i, j) {
            DistanceKey::Squared(d2) => {
                let r = BigRational::from_float(r).expect("finite radius");
                d2 > BigRational::from_integer(4.into()) * &r * &r
            }
            DistanceKey::Float(d) => d > 2.0 * r + self.tolerance,
        }
    }

    /// Sorted distinct values `d(p, q) / 2` over pairs of distinct points.
    pub fn critical_radii(&self) -> Result<Vec<f64>> {
        if self.len() < 2 {
            return Err(Error::domain("critical radii need at least two points"));
        }
        Ok(self.class_distance.iter().map(|d| d / 2.0).collect())
    }

    /// Exact text of the critical radius of class `c` (1-based), when known.
    pub fn critical_radius_exact(&self, c: usize) -> Option<&str> {
        self.class_exact.get(c.checked_sub(1)?)?.as_deref()
    }

    /// Hypergraph whose edges are the cliques (up to `n_max` vertices) of the
    /// graph on positions `i, j` with `adjacent(i, j)`. Singletons always appear.
    pub(crate) fn clique_hypergraph(&self, n_max: usize, adjacent: impl Fn(usize, usize) -> bool) -> Hypergraph {
        let n = self.len();
        let adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i != j && adjacent(i, j)).collect()).collect();
        let mut edges = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        fn extend(
            adj: &[Vec<bool>],
            n_max: usize,
            start: usize,
            stack: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            for v in start..adj.len() {
                if stack.iter().all(|&u| adj[u][v]) {
                    stack.push(v);
                    out.push(stack.clone());
                    if stack.len() < n_max {
                        extend(adj, n_max, v + 1, stack, out);
                    }
                    stack.pop();
                }
            }
        }
        if n_max >= 1 {
            extend(&adj, n_max, 0, &mut stack, &mut edges);
        }
        let edges = edges
            .into_iter()
            .map(|c| Hyperedge::new(c.into_iter().map(|i| self.ids[i])).expect("distinct ids"));
        Hypergraph::new(self.ids.iter().copied(), edges).expect("edges use sample ids")
    }

    /// Hypergraph of all subsets of at most `n_max` points whose pairwise
    /// distances all exceed `2r`.
    pub fn hard_sphere(&self, r: f64, n_max: usize) -> Result<Hypergraph> {
        if n_max < 1 {
            return Err(Error::domain("n_max must be at least 1"));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::domain("radius must be a non-negative finite number"));
        }
        Ok(self.clique_hypergraph(n_max, |i, j| self.separated(i, j, r)))
    }

    /// Hard-sphere hypergraph at any radius strictly between the critical
    /// radii of classes `level - 1` and `level`: pairs of class `>= level` stay.
    pub fn hard_sphere_at_level(&self, level: usize, n_max: usize) -> Hypergraph {
        self.clique_hypergraph(n_max, |i, j| self.class[i][j] >= level)
    }

    /// Distance classes preserved by the position permutation `p`.
    pub fn preserves_distances(&self, p: &[usize]) -> bool {
        let n = self.len();
        (0..n).all(|i| (i + 1..n).all(|j| self.class[i][j] == self.class[p[i]][p[j]]))
    }
}

fn cmp_key(a: &DistanceKey, b: &DistanceKey) -> std::cmp::Ordering {
    match (a, b) {
        (DistanceKey::Squared(x), DistanceKey::Squared(y)) => x.cmp(y),
        (DistanceKey::Float(x), DistanceKey::Float(y)) => x.total_cmp(y),
        _ => unreachable!("one metric per sample"),
    }
}

/// `sqrt(q) / 2` as text, rational when `q` is a rational square.
fn half_root_text(q: &BigRational) -> String {
    let quarter = q / BigRational::from_integer(4.into());
    let (n, d) = (quarter.numer().sqrt(), quarter.denom().sqrt());
    if &n * &n == *quarter.numer() && &d * &d == *quarter.denom() {
        crate::linalg::rational_text(&BigRational::new(n, d))
    } else {
        format!("sqrt({})", crate::linalg::rational_text(&quarter))
    }
}

/// Arc length between two angles on the unit circle.
pub fn arc(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn validate(metric: &Metric) -> Result<()> {
    match metric {
        Metric::Euclidean(points) => {
            if let Some(first) = points.first() {
                if let Some(k) = points.iter().position(|p| p.len() != first.len()) {
                    return Err(Error::domain(format!("point {k} has a different dimension")));
                }
            }
            for i in 0..points.len() {
                for j in i + 1..points.len() {
                    if points[i] == points[j] {
                        return Err(Error::domain(format!("points {i} and {j} coincide")));
                    }
                }
            }
        }
        Metric::Matrix(m) => {
            let n = m.len();
            for (i, row) in m.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::domain(format!("distance matrix row {i} has {} entries, expected {n}", row.len())));
                }
                for (j, &d) in row.iter().enumerate() {
                    if !d.is_finite() {
                        return Err(Error::domain(format!("distance ({i},{j}) is not finite")));
                    }
                    if i == j && d != 0.0 {
                        return Err(Error::domain(format!("diagonal entry {i} is nonzero")));
                    }
                    if i != j && d <= 0.0 {
                        return Err(Error::domain(format!("distance ({i},{j}) must be positive")));
                    }
                    if m[j][i] != d {
                        return Err(Error::domain(format!("distance matrix is not symmetric at ({i},{j})")));
                    }
                }
            }
        }
        Metric::Circle(a) => {
            if let Some(i) = a.iter().position(|x| !x.is_finite()) {
                return Err(Error::domain(format!("angle {i} is not finite")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn line(xs: &[i64]) -> MetricPointSample {
        MetricPointSample::euclidean(xs.iter().map(|&x| vec![rat(x)]).collect()).unwrap()
    }

    #[test]
    fn zero_radius_gives_complete_graph() {
        let h = line(&[0, 1, 3, 7]).hard_sphere(0.0, 2).unwrap();
        assert_eq!(h.grade(1).count(), 4);
        assert_eq!(h.grade(2).count(), 6);
    }

    #[test]
    fn twelve_circle_points_have_no_triples_at_third_pi() {
        let s = MetricPointSample::equally_spaced_circle(12).unwrap();
        assert_eq!(s.hard_sphere(PI / 3.0, 3).unwrap().grade(3).count(), 0);
        assert!(s.hard_sphere(PI / 3.0 - 1e-6, 3).unwrap().grade(3).count() > 0);
    }

    #[test]
    fn equilateral_pairs_just_below_threshold() {
        let m = vec![vec![0.0, 2.0, 2.0], vec![2.0, 0.0, 2.0], vec![2.0, 2.0, 0.0]];
        let s = MetricPointSample::matrix(m).unwrap();
        assert_eq!(s.hard_sphere(1.0 - 1e-12, 3).unwrap().grade(2).count(), 3);
        assert_eq!(s.hard_sphere(1.0, 3).unwrap().grade(2).count(), 0);
        assert_eq!(s.critical_radii().unwrap(), vec![1.0]);
    }

    #[test]
    fn critical_radii_examples() {
        assert_eq!(line(&[0, 2]).critical_radii().unwrap(), vec![1.0]);
        let s = line(&[0, 1, 3]);
        assert_eq!(s.critical_radii().unwrap(), vec![0.5, 1.0, 1.5]);
        assert_eq!(s.critical_radius_exact(1), Some("1/2"));
        let diag = MetricPointSample::euclidean(vec![vec![rat(0), rat(0)], vec![rat(1), rat(1)]]).unwrap();
        assert_eq!(diag.critical_radius_exact(1), Some("sqrt(1/2)"));
        assert!(line(&[0]).critical_radii().is_err());
    }

    #[test]
    fn boundary_radius_excludes_the_edge() {
        let s = line(&[0, 2]);
        assert_eq!(s.hard_sphere(1.0, 2).unwrap().grade(2).count(), 0);
        assert!(s.hard_sphere(1.0, 0).is_err());
    }

    #[test]
    fn invalid_samples_are_rejected() {
        assert!(MetricPointSample::matrix(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(MetricPointSample::circle(vec![0.0, 2.0 * PI]).is_err());
        assert!(MetricPointSample::euclidean(vec![vec![rat(1)], vec![rat(1)]]).is_err());
    }

    #[test]
    fn levels_match_direct_evaluation() {
        let s = line(&[0, 1, 3, 4]);
        let radii = s.critical_radii().unwrap();
        for (k, w) in radii.windows(2).enumerate() {
            let mid = (w[0] + w[1]) / 2.0;
            assert_eq!(s.hard_sphere(mid, 4).unwrap(), s.hard_sphere_at_level(k + 2, 4));
        }
    }
}
