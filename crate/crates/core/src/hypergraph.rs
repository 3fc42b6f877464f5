//! Hyperedges, hypergraphs and their closure operators.
//!
//! Vertices are plain integers and their integer order is the total order
//! used to orient unordered hyperedges. Directed hyperedges keep the order
//! they were given in. Both kinds store their vertices as a sequence, so the
//! face map "drop the vertex at position `i`" and the sub-edge relation
//! "is a subsequence of" are shared: for a sorted sequence, subsequences are
//! exactly the subsets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::Hash;

use itertools::Itertools;

use crate::error::{Error, Result};

pub type VertexId = u32;

/// Largest ambient vertex set accepted by the superset-closure operators.
pub const MAX_INDEPENDENCE_AMBIENT: usize = 20;

/// Common behaviour of unordered and directed hyperedges.
pub trait Edge: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const DIRECTED: bool;

    /// Validates and canonicalizes a vertex sequence.
    fn from_vertices(vertices: Vec<VertexId>) -> Result<Self>;

    fn vertices(&self) -> &[VertexId];

    /// Builds an edge from a sequence already known to be valid and canonical.
    fn from_canonical(vertices: Vec<VertexId>) -> Self;

    /// Image under a vertex bijection.
    fn map_bijective(&self, f: impl Fn(VertexId) -> VertexId) -> Self;

    /// Every edge on exactly `k` of the given (sorted, distinct) vertices.
    fn all_of_cardinality(vertices: &[VertexId], k: usize) -> Vec<Self>;

    fn cardinality(&self) -> usize {
        self.vertices().len()
    }

    /// Chain degree: an edge on `n` vertices sits in degree `n - 1`.
    fn degree(&self) -> usize {
        self.cardinality() - 1
    }

    /// Face map `i`: drop the vertex at position `i`. `None` for singletons.
    fn face(&self, i: usize) -> Option<Self> {
        let v = self.vertices();
        if v.len() < 2 || i >= v.len() {
            return None;
        }
        let mut w = v.to_vec();
        w.remove(i);
        Some(Self::from_canonical(w))
    }

    /// All nonempty subsequences, including the edge itself.
    fn sub_edges(&self) -> Vec<Self> {
        let v = self.vertices();
        let n = v.len();
        (1u64..(1u64 << n))
            .map(|mask| {
                Self::from_canonical((0..n).filter(|&i| mask >> i & 1 == 1).map(|i| v[i]).collect())
            })
            .collect()
    }

    fn is_sub_edge_of(&self, other: &Self) -> bool {
        let mut it = other.vertices().iter();
        self.vertices().iter().all(|x| it.any(|y| y == x))
    }
}

/// An unordered hyperedge: a nonempty set of vertices, stored sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Hyperedge(Vec<VertexId>);

impl Hyperedge {
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        Self::from_vertices(vertices.into_iter().collect())
    }
}

impl Edge for Hyperedge {
    const DIRECTED: bool = false;

    fn from_vertices(mut vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::domain("hyperedge must be nonempty"));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain(format!("hyperedge {vertices:?} repeats a vertex")));
        }
        Ok(Hyperedge(vertices))
    }

    fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    fn from_canonical(vertices: Vec<VertexId>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Hyperedge(vertices)
    }

    fn map_bijective(&self, f: impl Fn(VertexId) -> VertexId) -> Self {
        let mut v: Vec<_> = self.0.iter().map(|&x| f(x)).collect();
        v.sort_unstable();
        Hyperedge(v)
    }

    fn all_of_cardinality(vertices: &[VertexId], k: usize) -> Vec<Self> {
        vertices.iter().copied().combinations(k).map(Hyperedge).collect()
    }
}

impl fmt::Display for Hyperedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// A directed hyperedge: a nonempty sequence of pairwise distinct vertices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DirectedHyperedge(Vec<VertexId>);

impl DirectedHyperedge {
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        Self::from_vertices(vertices.into_iter().collect())
    }

    /// Permutes coordinates: position `i` of the result holds position `s[i]` of `self`.
    pub fn permute_positions(&self, s: &[usize]) -> Result<Self> {
        let n = self.0.len();
        if s.len() != n || !is_permutation(s) {
            return Err(Error::domain(format!("{s:?} is not a permutation of 0..{n}")));
        }
        Ok(DirectedHyperedge(s.iter().map(|&i| self.0[i]).collect()))
    }

    /// The unordered edge on the same vertices.
    pub fn underlying(&self) -> Hyperedge {
        let mut v = self.0.clone();
        v.sort_unstable();
        Hyperedge(v)
    }
}

pub(crate) fn is_permutation(s: &[usize]) -> bool {
    let mut seen = vec![false; s.len()];
    s.iter().all(|&i| i < seen.len() && !std::mem::replace(&mut seen[i], true))
}

impl Edge for DirectedHyperedge {
    const DIRECTED: bool = true;

    fn from_vertices(vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::domain("directed hyperedge must be nonempty"));
        }
        if vertices.iter().duplicates().next().is_some() {
            return Err(Error::domain(format!("directed hyperedge {vertices:?} repeats a vertex")));
        }
        Ok(DirectedHyperedge(vertices))
    }

    fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    fn from_canonical(vertices: Vec<VertexId>) -> Self {
        DirectedHyperedge(vertices)
    }

    fn map_bijective(&self, f: impl Fn(VertexId) -> VertexId) -> Self {
        DirectedHyperedge(self.0.iter().map(|&x| f(x)).collect())
    }

    fn all_of_cardinality(vertices: &[VertexId], k: usize) -> Vec<Self> {
        vertices.iter().copied().permutations(k).map(DirectedHyperedge).collect()
    }
}

impl fmt::Display for DirectedHyperedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// A finite set of hyperedges over a finite vertex set.
///
/// `Hypergraph<Hyperedge>` is an ordinary hypergraph and
/// `Hypergraph<DirectedHyperedge>` (aliased [`Hyperdigraph`]) a hyperdigraph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypergraph<E: Edge = Hyperedge> {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<E>,
}

pub type Hyperdigraph = Hypergraph<DirectedHyperedge>;

impl<E: Edge> Default for Hypergraph<E> {
    fn default() -> Self {
        Hypergraph {
            vertices: BTreeSet::new(),
            edges: BTreeSet::new(),
        }
    }
}

impl<E: Edge> Hypergraph<E> {
    /// Errors if an edge uses a vertex outside `vertices`.
    pub fn new(vertices: impl IntoIterator<Item = VertexId>, edges: impl IntoIterator<Item = E>) -> Result<Self> {
        let vertices: BTreeSet<_> = vertices.into_iter().collect();
        let edges: BTreeSet<E> = edges.into_iter().collect();
        for e in &edges {
            if let Some(v) = e.vertices().iter().find(|v| !vertices.contains(v)) {
                return Err(Error::domain(format!("edge {e} uses vertex {v} outside the vertex set")));
            }
        }
        Ok(Hypergraph { vertices, edges })
    }

    /// Hypergraph whose vertex set is the support of `edges`.
    pub fn from_edges(edges: impl IntoIterator<Item = E>) -> Self {
        let edges: BTreeSet<E> = edges.into_iter().collect();
        let vertices = edges.iter().flat_map(|e| e.vertices().iter().copied()).collect();
        Hypergraph { vertices, edges }
    }

    /// Convenience constructor from raw vertex lists; panics on invalid edges.
    pub fn from_lists<I, J>(lists: I) -> Self
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = VertexId>,
    {
        Self::from_edges(
            lists
                .into_iter()
                .map(|l| E::from_vertices(l.into_iter().collect()).expect("invalid edge")),
        )
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<E> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.edges.contains(e)
    }

    /// Vertices that occur in some edge.
    pub fn support(&self) -> BTreeSet<VertexId> {
        self.edges.iter().flat_map(|e| e.vertices().iter().copied()).collect()
    }

    pub fn max_cardinality(&self) -> usize {
        self.edges.iter().map(E::cardinality).max().unwrap_or(0)
    }

    /// Edges on exactly `n` vertices, in canonical order.
    pub fn grade(&self, n: usize) -> impl Iterator<Item = &E> + '_ {
        self.edges.iter().filter(move |e| e.cardinality() == n)
    }

    /// Edges grouped by cardinality.
    pub fn graded(&self) -> BTreeMap<usize, Vec<&E>> {
        let mut out: BTreeMap<usize, Vec<&E>> = BTreeMap::new();
        for e in &self.edges {
            out.entry(e.cardinality()).or_default().push(e);
        }
        out
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.edges.is_subset(&other.edges)
    }

    pub fn with_vertex_set(&self, vertices: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        Self::new(vertices, self.edges.iter().cloned())
    }

    /// Every edge on the given vertices with at most `max_cardinality`
    /// vertices: all subsets, or all injective words for directed edges.
    pub fn full_simplex(vertices: &BTreeSet<VertexId>, max_cardinality: usize) -> Self {
        let vs: Vec<_> = vertices.iter().copied().collect();
        let edges = (1..=max_cardinality.min(vs.len()))
            .flat_map(|k| E::all_of_cardinality(&vs, k))
            .collect();
        Hypergraph {
            vertices: vertices.clone(),
            edges,
        }
    }

    fn same_vertices(&self, edges: BTreeSet<E>) -> Self {
        Hypergraph {
            vertices: self.vertices.clone(),
            edges,
        }
    }

    /// Smallest face-closed hypergraph containing `self`: every nonempty
    /// subset (subsequence, for directed edges) of every edge.
    pub fn delta_closure(&self) -> Self {
        let mut out = BTreeSet::new();
        for e in &self.edges {
            if out.contains(e) {
                continue;
            }
            out.extend(e.sub_edges());
        }
        self.same_vertices(out)
    }

    /// Largest face-closed hypergraph contained in `self`.
    pub fn lower_associated(&self) -> Self {
        self.same_vertices(
            self.edges
                .iter()
                .filter(|e| e.sub_edges().iter().all(|s| self.edges.contains(s)))
                .cloned()
                .collect(),
        )
    }

    /// True iff the hypergraph is closed under taking faces.
    pub fn is_simplicial(&self) -> bool {
        self.edges
            .iter()
            .all(|e| (0..e.cardinality()).filter_map(|i| e.face(i)).all(|f| self.edges.contains(&f)))
    }

    /// Maximal and minimal edges with respect to strict inclusion
    /// (strict subsequence, for directed edges).
    pub fn max_min_edges(&self) -> (Self, Self) {
        let strictly_below = |a: &E, b: &E| a.cardinality() < b.cardinality() && a.is_sub_edge_of(b);
        let max = self
            .edges
            .iter()
            .filter(|e| !self.edges.iter().any(|f| strictly_below(e, f)))
            .cloned()
            .collect();
        let min = self
            .edges
            .iter()
            .filter(|e| !self.edges.iter().any(|f| strictly_below(f, e)))
            .cloned()
            .collect();
        (self.same_vertices(max), self.same_vertices(min))
    }
}

impl Hypergraph<Hyperedge> {
    /// Every ordering of every edge.
    pub fn lift(&self) -> Hyperdigraph {
        let edges = self
            .edges
            .iter()
            .flat_map(|e| {
                let k = e.cardinality();
                e.vertices()
                    .iter()
                    .copied()
                    .permutations(k)
                    .map(DirectedHyperedge::from_canonical)
            })
            .collect();
        Hypergraph {
            vertices: self.vertices.clone(),
            edges,
        }
    }

    /// Image under a total vertex map. Edges collapse when `f` identifies
    /// vertices, so an `n`-edge may land in a lower grade.
    pub fn vertex_map_image(&self, f: &BTreeMap<VertexId, VertexId>) -> Result<Self> {
        if let Some(v) = self.support().into_iter().find(|v| !f.contains_key(v)) {
            return Err(Error::domain(format!("vertex map undefined on vertex {v}")));
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Hyperedge::new(e.vertices().iter().map(|v| f[v]).collect::<BTreeSet<_>>()))
            .collect::<Result<BTreeSet<_>>>()?;
        let vertices = self
            .vertices
            .iter()
            .map(|v| f.get(v).copied().unwrap_or(*v))
            .chain(edges.iter().flat_map(|e| e.vertices().iter().copied()))
            .collect();
        Ok(Hypergraph { vertices, edges })
    }

    fn check_ambient(&self, ambient: &BTreeSet<VertexId>) -> Result<Vec<VertexId>> {
        if let Some(v) = self.support().into_iter().find(|v| !ambient.contains(v)) {
            return Err(Error::domain(format!("vertex {v} is outside the ambient vertex set")));
        }
        if ambient.len() > MAX_INDEPENDENCE_AMBIENT {
            return Err(Error::Cap {
                what: "ambient vertex count",
                got: ambient.len(),
                cap: MAX_INDEPENDENCE_AMBIENT,
            });
        }
        Ok(ambient.iter().copied().collect())
    }

    /// Smallest superset-closed hypergraph (within `ambient`) containing `self`.
    pub fn associated_independence(&self, ambient: &BTreeSet<VertexId>) -> Result<Self> {
        let amb = self.check_ambient(ambient)?;
        let mut out = BTreeSet::new();
        for e in &self.edges {
            out.extend(supersets_within(e, &amb));
        }
        Ok(Hypergraph {
            vertices: ambient.clone(),
            edges: out,
        })
    }

    /// Largest superset-closed hypergraph (within `ambient`) contained in `self`.
    pub fn lower_associated_independence(&self, ambient: &BTreeSet<VertexId>) -> Result<Self> {
        let amb = self.check_ambient(ambient)?;
        let edges = self
            .edges
            .iter()
            .filter(|e| supersets_within(e, &amb).iter().all(|s| self.edges.contains(s)))
            .cloned()
            .collect();
        Ok(Hypergraph {
            vertices: ambient.clone(),
            edges,
        })
    }
}

fn supersets_within(e: &Hyperedge, ambient: &[VertexId]) -> Vec<Hyperedge> {
    let rest: Vec<_> = ambient.iter().copied().filter(|v| !e.0.contains(v)).collect();
    (0u64..(1u64 << rest.len()))
        .map(|mask| {
            let mut v = e.0.clone();
            v.extend((0..rest.len()).filter(|&i| mask >> i & 1 == 1).map(|i| rest[i]));
            v.sort_unstable();
            Hyperedge(v)
        })
        .collect()
}

impl Hyperdigraph {
    /// Forget the order of every directed edge.
    pub fn project(&self) -> Hypergraph<Hyperedge> {
        Hypergraph {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().map(DirectedHyperedge::underlying).collect(),
        }
    }

    /// True iff every reordering of every edge is present.
    pub fn is_sigma_invariant(&self) -> bool {
        self.edges.iter().all(|e| {
            e.vertices()
                .iter()
                .copied()
                .permutations(e.cardinality())
                .all(|p| self.edges.contains(&DirectedHyperedge(p)))
        })
    }
}

impl<E: Edge> fmt::Display for Hypergraph<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.edges.iter().join(", "))
    }
}
