//! Chain complexes built from hyperedge face maps, and the infimum and
//! supremum subcomplexes of a hypergraph's chain span.
//!
//! A hyperedge on `n + 1` vertices sits in degree `n`. The boundary of an
//! edge is the alternating sum of its faces, `sum_i (-1)^i face_i`, where
//! `face_i` drops the vertex at position `i` (sorted position for unordered
//! edges, sequence position for directed ones).
//!
//! Two representations are used. [`ChainComplex`] is an abstract complex:
//! dimensions and boundary matrices in some chosen bases. [`EmbeddedComplex`]
//! additionally remembers, per degree, a subspace of the span of a set of
//! hyperedge labels together with the label-level boundary, so that
//! subcomplexes living in different ambients can be compared and mapped.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{DirectedHyperedge, Edge, Hyperdigraph, Hypergraph, VertexId};
use crate::linalg::{Field, SparseMatrix, SparseVec, Subspace};

/// Default cap on the vertex count of a full-simplex ambient.
pub const DEFAULT_FULL_SIMPLEX_CAP: usize = 16;

/// Hard cap on the number of labels any materialized ambient may hold.
pub const MAX_AMBIENT_LABELS: usize = 200_000;

/// Per-degree ordered hyperedge labels.
#[derive(Clone, PartialEq, Debug)]
pub struct GradedBasis<E: Edge> {
    degrees: Vec<Vec<E>>,
    index: Vec<HashMap<E, usize>>,
}

impl<E: Edge> GradedBasis<E> {
    pub fn from_hypergraph(h: &Hypergraph<E>) -> Self {
        Self::from_edges(h.edges().iter().cloned())
    }

    /// Labels are sorted within each degree; duplicates are dropped.
    pub fn from_edges(edges: impl IntoIterator<Item = E>) -> Self {
        let mut by_degree: Vec<BTreeSet<E>> = Vec::new();
        for e in edges {
            let d = e.degree();
            if by_degree.len() <= d {
                by_degree.resize_with(d + 1, BTreeSet::new);
            }
            by_degree[d].insert(e);
        }
        Self::from_degrees(by_degree.into_iter().map(|s| s.into_iter().collect()).collect())
    }

    /// Uses the given per-degree orders as they are.
    pub fn from_degrees(degrees: Vec<Vec<E>>) -> Self {
        let index = degrees
            .iter()
            .map(|d| d.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect())
            .collect();
        GradedBasis { degrees, index }
    }

    /// Number of degrees, i.e. one more than the top degree.
    pub fn num_degrees(&self) -> usize {
        self.degrees.len()
    }

    pub fn labels(&self, n: usize) -> &[E] {
        self.degrees.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, n: usize) -> usize {
        self.labels(n).len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.degrees.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, n: usize, e: &E) -> Option<usize> {
        self.index.get(n).and_then(|m| m.get(e).copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &E)> + '_ {
        self.degrees.iter().enumerate().flat_map(|(n, d)| d.iter().map(move |e| (n, e)))
    }

    /// Reversed grading: degree `k` of the result is degree `top - k` here.
    pub fn reversed(&self, top: usize) -> Self {
        Self::from_degrees((0..=top).rev().map(|n| self.labels(n).to_vec()).collect())
    }
}

/// What [`boundary_matrix`] does with a face missing from the basis.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MissingFaces {
    /// Append missing faces to the codomain labels.
    Extend,
    /// Fail with a domain error.
    Reject,
}

/// Matrix of the alternating face sum from degree `n` to degree `n - 1`.
///
/// Returns the matrix together with the codomain labels, which equal
/// `basis.labels(n - 1)` unless faces were appended under
/// [`MissingFaces::Extend`].
pub fn boundary_matrix<F: Field, E: Edge>(
    basis: &GradedBasis<E>,
    n: usize,
    missing: MissingFaces,
) -> Result<(SparseMatrix<F>, Vec<E>)> {
    if n == 0 {
        return Err(Error::domain("boundary is defined from degree 1 upward"));
    }
    let mut extra: BTreeSet<E> = BTreeSet::new();
    for e in basis.labels(n) {
        for face in (0..=n).filter_map(|i| e.face(i)) {
            if basis.index_of(n - 1, &face).is_none() {
                if missing == MissingFaces::Reject {
                    return Err(Error::domain(format!("face {face} of {e} is not in the basis")));
                }
                extra.insert(face);
            }
        }
    }
    let base = basis.dim(n - 1);
    let extra_index: HashMap<&E, usize> = extra.iter().enumerate().map(|(k, f)| (f, base + k)).collect();
    let cols = basis
        .labels(n)
        .iter()
        .map(|e| {
            SparseVec::from_pairs((0..=n).map(|i| {
                let face = e.face(i).expect("edge of positive degree has faces");
                let row = basis.index_of(n - 1, &face).unwrap_or_else(|| extra_index[&face]);
                (row, F::from_i64(if i % 2 == 0 { 1 } else { -1 }))
            }))
        })
        .collect();
    let mut codomain = basis.labels(n - 1).to_vec();
    codomain.extend(extra);
    Ok((SparseMatrix::from_columns(codomain.len(), cols), codomain))
}

/// Explicit face tables of a graded basis that is closed under faces.
///
/// `faces[n][k][i]` is the index, in degree `n - 1`, of face `i` of the
/// `k`-th label of degree `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeltaSet {
    counts: Vec<usize>,
    faces: Vec<Vec<Vec<usize>>>,
}

impl DeltaSet {
    pub fn from_basis<E: Edge>(basis: &GradedBasis<E>) -> Result<Self> {
        let counts = basis.dims();
        let mut faces = vec![Vec::new()];
        for n in 1..basis.num_degrees() {
            let table = basis
                .labels(n)
                .iter()
                .map(|e| {
                    (0..=n)
                        .map(|i| {
                            let f = e.face(i).expect("positive degree");
                            basis
                                .index_of(n - 1, &f)
                                .ok_or_else(|| Error::domain(format!("face {f} of {e} is not in the basis")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            faces.push(table);
        }
        Ok(DeltaSet { counts, faces })
    }

    pub fn num_degrees(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, n: usize) -> usize {
        self.counts.get(n).copied().unwrap_or(0)
    }

    pub fn face(&self, n: usize, k: usize, i: usize) -> usize {
        self.faces[n][k][i]
    }

    /// Overrides one face map entry; used to build non-Δ fixtures.
    pub fn set_face(&mut self, n: usize, k: usize, i: usize, target: usize) {
        assert!(target < self.count(n - 1));
        self.faces[n][k][i] = target;
    }

    /// Checks `face_i face_j = face_{j-1} face_i` for all `i < j` on every element.
    pub fn satisfies_delta_identity(&self) -> bool {
        (2..self.num_degrees()).all(|n| {
            (0..self.count(n)).all(|k| {
                (0..=n).all(|j| {
                    (0..j).all(|i| {
                        let lhs = self.face(n - 1, self.face(n, k, j), i);
                        let rhs = self.face(n - 1, self.face(n, k, i), j - 1);
                        lhs == rhs
                    })
                })
            })
        })
    }

    pub fn boundary<F: Field>(&self, n: usize) -> SparseMatrix<F> {
        if n == 0 || n >= self.num_degrees() {
            return SparseMatrix::zeros(self.count(n.wrapping_sub(1)), self.count(n));
        }
        let cols = self.faces[n]
            .iter()
            .map(|fs| {
                SparseVec::from_pairs(
                    fs.iter()
                        .enumerate()
                        .map(|(i, &r)| (r, F::from_i64(if i % 2 == 0 { 1 } else { -1 }))),
                )
            })
            .collect();
        SparseMatrix::from_columns(self.count(n - 1), cols)
    }
}

/// Δ-identity check on the face maps of a face-closed basis.
pub fn delta_identity_check<E: Edge>(basis: &GradedBasis<E>) -> Result<bool> {
    Ok(DeltaSet::from_basis(basis)?.satisfies_delta_identity())
}

/// An abstract finite chain complex over `F`.
///
/// `boundaries[n]` maps degree `n` to degree `n - 1`; `boundaries[0]` is the
/// empty `0 x dim_0` matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct ChainComplex<F: Field> {
    dims: Vec<usize>,
    boundaries: Vec<SparseMatrix<F>>,
}

impl<F: Field> ChainComplex<F> {
    /// `boundaries` holds the maps for degrees `1..dims.len()`.
    /// Fails if shapes disagree or a composite of consecutive boundaries is nonzero.
    pub fn new(dims: Vec<usize>, boundaries: Vec<SparseMatrix<F>>) -> Result<Self> {
        if boundaries.len() + 1 != dims.len().max(1) {
            return Err(Error::invariant(format!(
                "{} boundary maps for {} degrees",
                boundaries.len(),
                dims.len()
            )));
        }
        let mut all = Vec::with_capacity(dims.len());
        if let Some(&d0) = dims.first() {
            all.push(SparseMatrix::zeros(0, d0));
        }
        for (k, b) in boundaries.into_iter().enumerate() {
            let n = k + 1;
            if b.nrows() != dims[n - 1] || b.ncols() != dims[n] {
                return Err(Error::invariant(format!(
                    "boundary in degree {n} is {}x{}, expected {}x{}",
                    b.nrows(),
                    b.ncols(),
                    dims[n - 1],
                    dims[n]
                )));
            }
            all.push(b);
        }
        let c = ChainComplex { dims, boundaries: all };
        c.check_square_zero()?;
        Ok(c)
    }

    pub fn zero() -> Self {
        ChainComplex {
            dims: Vec::new(),
            boundaries: Vec::new(),
        }
    }

    pub fn num_degrees(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    /// Boundary out of degree `n`; an empty matrix outside the stored range.
    pub fn boundary(&self, n: usize) -> SparseMatrix<F> {
        match self.boundaries.get(n) {
            Some(b) => b.clone(),
            None => SparseMatrix::zeros(self.dim(n.wrapping_sub(1)), self.dim(n)),
        }
    }

    fn boundary_ref(&self, n: usize) -> Option<&SparseMatrix<F>> {
        self.boundaries.get(n)
    }

    /// Errors with the first nonzero entry of some `B_n B_{n+1}` as certificate.
    pub fn check_square_zero(&self) -> Result<()> {
        for n in 1..self.num_degrees().saturating_sub(1) {
            let prod = self.boundaries[n].mul(&self.boundaries[n + 1]);
            if let Some((i, j, x)) = prod.entries().into_iter().next() {
                return Err(Error::invariant(format!(
                    "boundary squares to nonzero: (B_{n} B_{}) has entry {x} at row {i}, column {j}",
                    n + 1
                )));
            }
        }
        Ok(())
    }

    pub fn boundary_rank(&self, n: usize) -> usize {
        if n == 0 {
            return 0;
        }
        self.boundary_ref(n).map_or(0, SparseMatrix::rank)
    }

    /// `betti_n = dim_n - rank B_n - rank B_{n+1}`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=self.num_degrees()).map(|n| self.boundary_rank(n)).collect();
        (0..self.num_degrees())
            .map(|n| self.dims[n] - ranks[n] - ranks[n + 1])
            .collect()
    }

    /// Basis of the cycles in degree `n`.
    pub fn cycles(&self, n: usize) -> Vec<SparseVec<F>> {
        if n == 0 {
            return (0..self.dim(0)).map(SparseVec::unit).collect();
        }
        self.boundary_ref(n).map_or_else(Vec::new, SparseMatrix::kernel)
    }
}

/// Betti numbers plus the coefficient field they were computed over.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct HomologySummary {
    pub field: String,
    pub betti: BTreeMap<usize, usize>,
}

impl HomologySummary {
    /// Betti numbers as a dense vector with trailing zeros removed.
    pub fn to_vec(&self) -> Vec<usize> {
        trim_zeros(self.betti.values().copied().collect())
    }
}

pub(crate) fn trim_zeros(mut v: Vec<usize>) -> Vec<usize> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Homology of a complex; rejects ill-formed complexes.
pub fn betti<F: Field>(c: &ChainComplex<F>) -> Result<HomologySummary> {
    c.check_square_zero()?;
    Ok(HomologySummary {
        field: F::descriptor(),
        betti: c.betti_numbers().into_iter().enumerate().collect(),
    })
}

/// Rank of the map on `H_n` induced by a chain map whose degree-`n`
/// component is `map` (a `target.dim(n) x source.dim(n)` matrix).
pub fn induced_homology_rank<F: Field>(
    map: &SparseMatrix<F>,
    source: &ChainComplex<F>,
    target: &ChainComplex<F>,
    n: usize,
) -> usize {
    let boundaries = target.boundary(n + 1);
    if source.dim(n) == 0 || target.dim(n) == 0 {
        return 0;
    }
    let images: Vec<SparseVec<F>> = source.cycles(n).iter().map(|z| map.mul_vec(z)).collect();
    let images = SparseMatrix::from_columns(target.dim(n), images);
    images.hstack(&boundaries).rank() - boundaries.rank()
}

/// Checks `f_{n-1} B_n = B'_n f_n` for every degree.
pub fn is_chain_map<F: Field>(maps: &[SparseMatrix<F>], source: &ChainComplex<F>, target: &ChainComplex<F>) -> bool {
    (1..maps.len()).all(|n| maps[n - 1].mul(&source.boundary(n)) == target.boundary(n).mul(&maps[n]))
}

/// How to choose the ambient complex for a hypergraph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AmbientMode {
    /// Chains on the face closure of the hypergraph.
    Closure,
    /// Chains on every edge over `vertices` with at most `max_degree + 1` vertices.
    FullSimplex {
        vertices: BTreeSet<VertexId>,
        max_degree: usize,
    },
}

/// A chain complex embedded degreewise in the span of hyperedge labels.
#[derive(Clone, PartialEq, Debug)]
pub struct EmbeddedComplex<F: Field, E: Edge> {
    labels: GradedBasis<E>,
    /// Label-level boundaries; index 0 is the empty matrix.
    label_boundaries: Vec<SparseMatrix<F>>,
    spaces: Vec<Subspace<F>>,
    complex: ChainComplex<F>,
}

impl<F: Field, E: Edge> EmbeddedComplex<F, E> {
    /// The full chain complex on a face-closed set of labels.
    pub fn from_closed_labels(labels: GradedBasis<E>) -> Result<Self> {
        let ds = DeltaSet::from_basis(&labels)?;
        let label_boundaries: Vec<SparseMatrix<F>> = (0..labels.num_degrees())
            .map(|n| if n == 0 { SparseMatrix::zeros(0, labels.dim(0)) } else { ds.boundary(n) })
            .collect();
        let spaces = labels.dims().into_iter().map(Subspace::full).collect();
        let complex = ChainComplex::new(labels.dims(), label_boundaries.get(1..).unwrap_or_default().to_vec())?;
        Ok(EmbeddedComplex {
            labels,
            label_boundaries,
            spaces,
            complex,
        })
    }

    pub fn labels(&self) -> &GradedBasis<E> {
        &self.labels
    }

    pub fn complex(&self) -> &ChainComplex<F> {
        &self.complex
    }

    pub fn space(&self, n: usize) -> Option<&Subspace<F>> {
        self.spaces.get(n)
    }

    pub fn spaces(&self) -> &[Subspace<F>] {
        &self.spaces
    }

    pub fn num_degrees(&self) -> usize {
        self.labels.num_degrees()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }

    pub fn label_boundary(&self, n: usize) -> &SparseMatrix<F> {
        &self.label_boundaries[n]
    }

    /// True when every degree is the full label span.
    pub fn is_full(&self) -> bool {
        self.spaces.iter().all(|s| s.dim() == s.ambient_dim())
    }

    /// Identical labels, subspaces and boundary matrices.
    pub fn same_representation(&self, other: &Self) -> bool {
        self == other
    }

    /// The subcomplex carried by the given label-coordinate subspaces.
    /// Requires a full ambient. Errors if a boundary leaves the subspaces.
    pub fn subcomplex(&self, spaces: Vec<Subspace<F>>) -> Result<Self> {
        if !self.is_full() {
            return Err(Error::domain("subcomplexes are taken inside a full label complex"));
        }
        if spaces.len() != self.num_degrees() {
            return Err(Error::domain("one subspace per degree is required"));
        }
        let mut boundaries = Vec::new();
        for n in 1..spaces.len() {
            let cols = spaces[n]
                .basis()
                .iter()
                .map(|g| {
                    let image = self.label_boundaries[n].mul_vec(g);
                    spaces[n - 1].coordinates(&image).ok_or_else(|| {
                        Error::invariant(format!(
                            "boundary of a degree-{n} generator leaves the degree-{} subspace",
                            n - 1
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            boundaries.push(SparseMatrix::from_columns(spaces[n - 1].dim(), cols));
        }
        let dims = spaces.iter().map(Subspace::dim).collect();
        let complex = ChainComplex::new(dims, boundaries)?;
        Ok(EmbeddedComplex {
            labels: self.labels.clone(),
            label_boundaries: self.label_boundaries.clone(),
            spaces,
            complex,
        })
    }

    /// Label indices of the edges of `h` in each degree.
    fn coordinate_sets(&self, h: &Hypergraph<E>) -> Result<Vec<Vec<usize>>> {
        let mut out = vec![Vec::new(); self.num_degrees()];
        for e in h.edges() {
            let n = e.degree();
            let i = self
                .labels
                .index_of(n, e)
                .ok_or_else(|| Error::domain(format!("edge {e} is not a label of the ambient complex")))?;
            out[n].push(i);
        }
        Ok(out)
    }

    /// Infimum complex of the coordinate subspaces `d`:
    /// degree `n` is `{x in D_n : B x in D_{n-1}}`.
    pub fn inf_of_coordinates(&self, d: &[Vec<usize>]) -> Result<Self> {
        let mut spaces = Vec::with_capacity(self.num_degrees());
        for n in 0..self.num_degrees() {
            let cols = &d[n];
            let dim = self.labels.dim(n);
            if n == 0 {
                spaces.push(Subspace::coordinate(dim, cols.iter().copied()));
                continue;
            }
            let allowed: BTreeSet<usize> = d[n - 1].iter().copied().collect();
            let restricted: Vec<SparseVec<F>> = cols
                .iter()
                .map(|&c| self.label_boundaries[n].column(c).remap(|r| (!allowed.contains(&r)).then_some(r)))
                .collect();
            let m = SparseMatrix::from_columns(self.labels.dim(n - 1), restricted);
            let kernel = m.kernel().into_iter().map(|k| k.remap(|i| Some(cols[i])));
            spaces.push(Subspace::span(dim, kernel));
        }
        self.subcomplex(spaces)
    }

    /// Supremum complex of the coordinate subspaces `d`:
    /// degree `n` is `D_n + B D_{n+1}`.
    pub fn sup_of_coordinates(&self, d: &[Vec<usize>]) -> Result<Self> {
        let top = self.num_degrees();
        let spaces = (0..top)
            .map(|n| {
                let units = d[n].iter().map(|&c| SparseVec::unit(c));
                let bounds: Vec<SparseVec<F>> = if n + 1 < top {
                    d[n + 1].iter().map(|&c| self.label_boundaries[n + 1].column(c).clone()).collect()
                } else {
                    Vec::new()
                };
                Subspace::span(self.labels.dim(n), units.chain(bounds))
            })
            .collect();
        self.subcomplex(spaces)
    }

    /// Infimum complex of `h` inside this (full) ambient.
    pub fn inf_in(&self, h: &Hypergraph<E>) -> Result<Self> {
        let d = self.coordinate_sets(h)?;
        self.inf_of_coordinates(&d)
    }

    /// Supremum complex of `h` inside this (full) ambient.
    pub fn sup_in(&self, h: &Hypergraph<E>) -> Result<Self> {
        let d = self.coordinate_sets(h)?;
        self.sup_of_coordinates(&d)
    }

    /// Cochain complex of a full ambient, regraded so that it is again a
    /// chain complex: degree `k` of the result holds the cochains of degree
    /// `top - k`, and its boundary is the transposed label boundary.
    pub fn dual(&self, top: usize) -> Result<Self> {
        if !self.is_full() {
            return Err(Error::domain("only full label complexes are dualized"));
        }
        if top + 1 < self.num_degrees() {
            return Err(Error::domain("dual grading must cover every degree"));
        }
        let labels = self.labels.reversed(top);
        let mut label_boundaries = vec![SparseMatrix::zeros(0, labels.dim(0))];
        for k in 1..=top {
            let n = top - k;
            // coboundary C^n -> C^{n+1}, i.e. degree k -> k - 1 after regrading
            let b = match self.label_boundaries.get(n + 1) {
                Some(b) => b.transpose(),
                None => SparseMatrix::zeros(self.labels.dim(n + 1), self.labels.dim(n)),
            };
            label_boundaries.push(b);
        }
        let spaces: Vec<Subspace<F>> = labels.dims().into_iter().map(Subspace::full).collect();
        let complex = ChainComplex::new(labels.dims(), label_boundaries.get(1..).unwrap_or_default().to_vec())?;
        Ok(EmbeddedComplex {
            labels,
            label_boundaries,
            spaces,
            complex,
        })
    }

    /// Degree-`n` generators of `self` expressed in the basis of `target`,
    /// matching labels by value. Errors if a generator is not in `target`.
    pub fn inclusion_into(&self, target: &Self) -> Result<Vec<SparseMatrix<F>>> {
        (0..self.num_degrees())
            .map(|n| {
                let cols = self.spaces[n]
                    .basis()
                    .iter()
                    .map(|g| {
                        let moved = relabel(g, self.labels.labels(n), &target.labels, n)?;
                        let tspace = target
                            .spaces
                            .get(n)
                            .ok_or_else(|| Error::domain(format!("target has no degree {n}")))?;
                        tspace
                            .coordinates(&moved)
                            .ok_or_else(|| Error::domain(format!("degree-{n} chain is not contained in the target")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SparseMatrix::from_columns(target.complex.dim(n), cols))
            })
            .collect()
    }
}

fn relabel<F: Field, E: Edge>(v: &SparseVec<F>, from: &[E], to: &GradedBasis<E>, n: usize) -> Result<SparseVec<F>> {
    let pairs = v
        .iter()
        .map(|(i, x)| {
            to.index_of(n, &from[i])
                .map(|j| (j, x.clone()))
                .ok_or_else(|| Error::domain(format!("label {} missing from target", from[i])))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseVec::from_pairs(pairs))
}

/// Chain complex of a hypergraph's ambient, either its face closure or a
/// full simplex on a vertex set. `cap` bounds the full-simplex vertex count.
pub fn ambient_complex<F: Field, E: Edge>(h: &Hypergraph<E>, mode: &AmbientMode, cap: usize) -> Result<EmbeddedComplex<F, E>> {
    match mode {
        AmbientMode::Closure => EmbeddedComplex::from_closed_labels(GradedBasis::from_hypergraph(&h.delta_closure())),
        AmbientMode::FullSimplex { vertices, max_degree } => {
            if vertices.len() > cap {
                return Err(Error::Cap {
                    what: "full-simplex vertex count",
                    got: vertices.len(),
                    cap,
                });
            }
            if let Some(v) = h.support().into_iter().find(|v| !vertices.contains(v)) {
                return Err(Error::domain(format!("vertex {v} is outside the full-simplex vertex set")));
            }
            let count = full_simplex_size::<E>(vertices.len(), max_degree + 1);
            if count > MAX_AMBIENT_LABELS {
                return Err(Error::Cap {
                    what: "ambient label count",
                    got: count,
                    cap: MAX_AMBIENT_LABELS,
                });
            }
            let full = Hypergraph::<E>::full_simplex(vertices, max_degree + 1);
            EmbeddedComplex::from_closed_labels(GradedBasis::from_hypergraph(&full))
        }
    }
}

fn full_simplex_size<E: Edge>(n: usize, max_card: usize) -> usize {
    let mut total = 0usize;
    for k in 1..=max_card.min(n) {
        // n!/(n-k)! words, divided by k! for sets
        let mut words = 1usize;
        for i in 0..k {
            words = words.saturating_mul(n - i);
        }
        if !E::DIRECTED {
            words /= (1..=k).product::<usize>();
        }
        total = total.saturating_add(words);
    }
    total
}

/// Infimum complex of `h` computed in its closure ambient.
pub fn inf_complex<F: Field, E: Edge>(h: &Hypergraph<E>) -> Result<EmbeddedComplex<F, E>> {
    ambient_complex::<F, E>(h, &AmbientMode::Closure, 0)?.inf_in(h)
}

/// Supremum complex of `h` computed in its closure ambient.
pub fn sup_complex<F: Field, E: Edge>(h: &Hypergraph<E>) -> Result<EmbeddedComplex<F, E>> {
    ambient_complex::<F, E>(h, &AmbientMode::Closure, 0)?.sup_in(h)
}

/// Outcome of checking that the inclusion of the infimum complex into the
/// supremum complex induces isomorphisms on homology.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct QuasiIsoReport {
    pub betti_inf: Vec<usize>,
    pub betti_sup: Vec<usize>,
    /// Rank of `H_n(Inf) -> H_n(Sup)` per degree.
    pub induced_ranks: Vec<usize>,
    pub is_iso: bool,
}

pub fn verify_quasi_iso_theta<F: Field, E: Edge>(h: &Hypergraph<E>) -> Result<QuasiIsoReport> {
    let inf = inf_complex::<F, E>(h)?;
    let sup = sup_complex::<F, E>(h)?;
    quasi_iso_between(&inf, &sup)
}

/// Inclusion-induced homology comparison of two embedded complexes.
pub fn quasi_iso_between<F: Field, E: Edge>(
    inf: &EmbeddedComplex<F, E>,
    sup: &EmbeddedComplex<F, E>,
) -> Result<QuasiIsoReport> {
    let maps = inf.inclusion_into(sup)?;
    if !is_chain_map(&maps, inf.complex(), sup.complex()) {
        return Err(Error::invariant("inclusion does not commute with the boundary"));
    }
    let betti_inf = inf.complex().betti_numbers();
    let betti_sup = sup.complex().betti_numbers();
    let induced_ranks: Vec<usize> = (0..inf.num_degrees())
        .map(|n| induced_homology_rank(&maps[n], inf.complex(), sup.complex(), n))
        .collect();
    let is_iso = betti_inf == betti_sup && induced_ranks == betti_inf;
    Ok(QuasiIsoReport {
        betti_inf,
        betti_sup,
        induced_ranks,
        is_iso,
    })
}

/// Quotient of a complex by a subcomplex, with coset representatives taken
/// as the ambient basis vectors off the pivots of the subspace.
#[derive(Clone, PartialEq, Debug)]
pub struct QuotientComplex<F: Field> {
    complex: ChainComplex<F>,
    /// Subcomplex in ambient-basis coordinates, per degree.
    sub: Vec<Subspace<F>>,
    /// Ambient-basis indices of the coset representatives, per degree.
    reps: Vec<Vec<usize>>,
}

impl<F: Field> QuotientComplex<F> {
    pub fn complex(&self) -> &ChainComplex<F> {
        &self.complex
    }

    pub fn representatives(&self, n: usize) -> &[usize] {
        &self.reps[n]
    }

    /// Class of an ambient-basis vector in the quotient basis.
    pub fn class_of(&self, n: usize, v: &SparseVec<F>) -> SparseVec<F> {
        let r = self.sub[n].reduce(v);
        let pos: HashMap<usize, usize> = self.reps[n].iter().enumerate().map(|(k, &i)| (i, k)).collect();
        r.remap(|i| pos.get(&i).copied())
    }

    /// Matrices of the projection from the ambient onto the quotient.
    pub fn projection(&self) -> Vec<SparseMatrix<F>> {
        (0..self.sub.len())
            .map(|n| {
                let cols = (0..self.sub[n].ambient_dim())
                    .map(|i| self.class_of(n, &SparseVec::unit(i)))
                    .collect();
                SparseMatrix::from_columns(self.reps[n].len(), cols)
            })
            .collect()
    }

    /// The natural map `ambient/self.sub -> ambient/other.sub`, defined when
    /// `self.sub` lies inside `other.sub` degreewise.
    pub fn map_to(&self, other: &QuotientComplex<F>) -> Result<Vec<SparseMatrix<F>>> {
        if self.sub.len() != other.sub.len() {
            return Err(Error::domain("quotients of different ambients"));
        }
        (0..self.sub.len())
            .map(|n| {
                if !self.sub[n].is_subspace_of(&other.sub[n]) {
                    return Err(Error::domain(format!("degree {n}: source subspace is not inside target subspace")));
                }
                let cols = self.reps[n].iter().map(|&i| other.class_of(n, &SparseVec::unit(i))).collect();
                Ok(SparseMatrix::from_columns(other.reps[n].len(), cols))
            })
            .collect()
    }
}

/// `ambient / sub`, where `sub` is a subcomplex of `ambient` over the same labels.
pub fn quotient_complex<F: Field, E: Edge>(
    ambient: &EmbeddedComplex<F, E>,
    sub: &EmbeddedComplex<F, E>,
) -> Result<QuotientComplex<F>> {
    if ambient.labels() != sub.labels() {
        return Err(Error::domain("quotient requires a subcomplex over the same labels"));
    }
    let top = ambient.num_degrees();
    let mut subs = Vec::with_capacity(top);
    for n in 0..top {
        let aspace = &ambient.spaces[n];
        let coords = sub.spaces[n]
            .basis()
            .iter()
            .map(|g| {
                aspace
                    .coordinates(g)
                    .ok_or_else(|| Error::domain(format!("degree {n}: subcomplex is not inside the ambient")))
            })
            .collect::<Result<Vec<_>>>()?;
        subs.push(Subspace::span(aspace.dim(), coords));
    }
    // closed under the ambient boundary
    for n in 1..top {
        let b = ambient.complex().boundary(n);
        if let Some(g) = subs[n].basis().iter().find(|g| !subs[n - 1].contains(&b.mul_vec(g))) {
            return Err(Error::domain(format!(
                "not a subcomplex: boundary of a degree-{n} generator ({} terms) leaves degree {}",
                g.nnz(),
                n - 1
            )));
        }
    }
    let reps: Vec<Vec<usize>> = subs.iter().map(Subspace::complement_axes).collect();
    let mut q = QuotientComplex {
        complex: ChainComplex::zero(),
        sub: subs,
        reps,
    };
    let mut boundaries = Vec::new();
    for n in 1..top {
        let b = ambient.complex().boundary(n);
        let cols = q.reps[n].iter().map(|&i| q.class_of(n - 1, b.column(i))).collect();
        boundaries.push(SparseMatrix::from_columns(q.reps[n - 1].len(), cols));
    }
    q.complex = ChainComplex::new(q.reps.iter().map(Vec::len).collect(), boundaries)?;
    Ok(q)
}

/// Comparison of `C/Inf` and `C/Sup` inside a chosen ambient `C`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct QuotientReport {
    pub dims_mod_inf: Vec<usize>,
    pub dims_mod_sup: Vec<usize>,
    pub betti_mod_inf: Vec<usize>,
    pub betti_mod_sup: Vec<usize>,
    pub induced_ranks: Vec<usize>,
    pub surjective: bool,
    pub is_quasi_iso: bool,
}

/// Builds both quotients of `ambient` and checks the natural surjection
/// `C/Inf -> C/Sup` is a quasi-isomorphism.
pub fn quotient_check<F: Field, E: Edge>(ambient: &EmbeddedComplex<F, E>, h: &Hypergraph<E>) -> Result<QuotientReport> {
    let inf = ambient.inf_in(h)?;
    let sup = ambient.sup_in(h)?;
    let q_inf = quotient_complex(ambient, &inf)?;
    let q_sup = quotient_complex(ambient, &sup)?;
    let maps = q_inf.map_to(&q_sup)?;
    if !is_chain_map(&maps, q_inf.complex(), q_sup.complex()) {
        return Err(Error::invariant("quotient map does not commute with the boundary"));
    }
    let surjective = maps.iter().all(|m| m.rank() == m.nrows());
    let betti_mod_inf = q_inf.complex().betti_numbers();
    let betti_mod_sup = q_sup.complex().betti_numbers();
    let induced_ranks: Vec<usize> = (0..maps.len())
        .map(|n| induced_homology_rank(&maps[n], q_inf.complex(), q_sup.complex(), n))
        .collect();
    let is_quasi_iso = betti_mod_inf == betti_mod_sup && induced_ranks == betti_mod_inf;
    Ok(QuotientReport {
        dims_mod_inf: q_inf.complex().dims().to_vec(),
        dims_mod_sup: q_sup.complex().dims().to_vec(),
        betti_mod_inf,
        betti_mod_sup,
        induced_ranks,
        surjective,
        is_quasi_iso,
    })
}

/// The four stages `cochains(closure) -> Sup-quotient -> Inf-quotient ->
/// cochains(lower-associated)` of a hypergraph, per original degree.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FourTermReport {
    pub dims_closure: Vec<usize>,
    pub dims_sup: Vec<usize>,
    pub dims_inf: Vec<usize>,
    pub dims_lower: Vec<usize>,
    /// Surjectivity of the three maps, in order.
    pub surjective: [bool; 3],
    pub chain_maps: bool,
    pub all_identity: bool,
}

pub fn four_term_sequence<F: Field, E: Edge>(h: &Hypergraph<E>) -> Result<FourTermReport> {
    let closure = h.delta_closure();
    let lower = h.lower_associated();
    let ambient: EmbeddedComplex<F, E> = EmbeddedComplex::from_closed_labels(GradedBasis::from_hypergraph(&closure))?;
    let nd = ambient.num_degrees();
    if nd == 0 {
        return Ok(FourTermReport {
            dims_closure: vec![],
            dims_sup: vec![],
            dims_inf: vec![],
            dims_lower: vec![],
            surjective: [true; 3],
            chain_maps: true,
            all_identity: true,
        });
    }
    let top = nd - 1;
    let co = ambient.dual(top)?;
    // cochains vanishing on the edges of h, in regraded degrees
    let ann: Vec<Vec<usize>> = (0..nd)
        .map(|k| {
            let n = top - k;
            co.labels()
                .labels(k)
                .iter()
                .enumerate()
                .filter(|(_, e)| !h.contains(e))
                .map(|(i, _)| i)
                .inspect(|_| debug_assert!(n < nd))
                .collect()
        })
        .collect();
    let inf_co = co.inf_of_coordinates(&ann)?;
    let sup_co = co.sup_of_coordinates(&ann)?;
    let zero = co.subcomplex(co.labels().dims().into_iter().map(Subspace::zero).collect())?;
    let whole = quotient_complex(&co, &zero)?;
    let sup_stage = quotient_complex(&co, &inf_co)?;
    let inf_stage = quotient_complex(&co, &sup_co)?;

    let lower_amb: EmbeddedComplex<F, E> = EmbeddedComplex::from_closed_labels(GradedBasis::from_hypergraph(&lower))?;
    let lower_co = lower_amb.dual(top)?;

    let first = whole.map_to(&sup_stage)?;
    let second = sup_stage.map_to(&inf_stage)?;
    let third = restriction_maps(&co, &inf_stage, &lower_co)?;

    let surjective = [
        first.iter().all(|m| m.rank() == m.nrows()),
        second.iter().all(|m| m.rank() == m.nrows()),
        third.iter().all(|m| m.rank() == m.nrows()),
    ];
    let chain_maps = is_chain_map(&first, whole.complex(), sup_stage.complex())
        && is_chain_map(&second, sup_stage.complex(), inf_stage.complex())
        && is_chain_map(&third, inf_stage.complex(), lower_co.complex());

    let regrade = |dims: &[usize]| -> Vec<usize> { (0..nd).map(|n| dims.get(top - n).copied().unwrap_or(0)).collect() };
    let dims_closure = regrade(whole.complex().dims());
    let dims_sup = regrade(sup_stage.complex().dims());
    let dims_inf = regrade(inf_stage.complex().dims());
    let dims_lower = regrade(lower_co.complex().dims());
    let all_identity = dims_closure == dims_sup && dims_sup == dims_inf && dims_inf == dims_lower;
    Ok(FourTermReport {
        dims_closure,
        dims_sup,
        dims_inf,
        dims_lower,
        surjective,
        chain_maps,
        all_identity,
    })
}

/// Restriction of cochains on the closure to cochains on the lower-associated
/// complex, descended to the quotient by the supremum cochain subcomplex.
fn restriction_maps<F: Field, E: Edge>(
    co: &EmbeddedComplex<F, E>,
    inf_stage: &QuotientComplex<F>,
    lower_co: &EmbeddedComplex<F, E>,
) -> Result<Vec<SparseMatrix<F>>> {
    (0..co.num_degrees())
        .map(|k| {
            let from = co.labels().labels(k);
            let restrict = |v: &SparseVec<F>| -> SparseVec<F> { v.remap(|i| lower_co.labels().index_of(k, &from[i])) };
            if inf_stage.sub[k].basis().iter().any(|g| !restrict(g).is_zero()) {
                return Err(Error::invariant(format!(
                    "regraded degree {k}: quotient does not descend to the lower-associated cochains"
                )));
            }
            let cols = inf_stage.reps[k].iter().map(|&i| restrict(&SparseVec::unit(i))).collect();
            Ok(SparseMatrix::from_columns(lower_co.labels().dim(k), cols))
        })
        .collect()
}

/// Hodge Laplacian `B_n^T B_n + B_{n+1} B_{n+1}^T` in the declared basis,
/// together with the dimension of its kernel.
pub fn hodge_laplacian<F: Field>(c: &ChainComplex<F>, n: usize) -> (SparseMatrix<F>, usize) {
    let d = c.dim(n);
    if d == 0 {
        return (SparseMatrix::zeros(0, 0), 0);
    }
    let down = c.boundary(n);
    let up = c.boundary(n + 1);
    let lap = down.transpose().mul(&down).add(&up.mul(&up.transpose()));
    let harmonic = d - lap.rank();
    (lap, harmonic)
}

/// Coordinate permutation on a chain of directed edges: the coefficient of
/// `e` moves to `e` reordered by `s` (no sign).
pub fn sigma_action<F: Field>(
    chain: &BTreeMap<DirectedHyperedge, F>,
    s: &[usize],
) -> Result<BTreeMap<DirectedHyperedge, F>> {
    let mut out: BTreeMap<DirectedHyperedge, F> = BTreeMap::new();
    for (e, x) in chain {
        let image = e.permute_positions(s)?;
        let entry = out.entry(image).or_insert_with(F::zero);
        *entry = entry.add(x);
    }
    out.retain(|_, x| !x.is_zero());
    Ok(out)
}

/// Dimension of the subspace of the span of the `n`-vertex edges of `h`
/// fixed by every coordinate permutation. `h` must be Σ-invariant.
pub fn invariant_dimension<F: Field>(h: &Hyperdigraph, n: usize) -> Result<usize> {
    if !h.is_sigma_invariant() {
        return Err(Error::domain("hyperdigraph is not invariant under coordinate permutations"));
    }
    let labels: Vec<&DirectedHyperedge> = h.grade(n).collect();
    let m = labels.len();
    if n < 2 || m == 0 {
        return Ok(m);
    }
    let index: HashMap<&DirectedHyperedge, usize> = labels.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    // stack (P_t - I) over the adjacent transpositions t, which generate the group
    let mut rows = 0;
    let mut triplets = Vec::new();
    for t in 0..n - 1 {
        let mut s: Vec<usize> = (0..n).collect();
        s.swap(t, t + 1);
        for (j, e) in labels.iter().enumerate() {
            let k = index[&e.permute_positions(&s)?];
            triplets.push((rows + k, j, F::one()));
            triplets.push((rows + j, j, F::one().neg()));
        }
        rows += m;
    }
    let stacked = SparseMatrix::from_triplets(rows, m, triplets);
    Ok(m - stacked.rank())
}
