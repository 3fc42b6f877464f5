//! Exact sparse linear algebra over a field.
//!
//! Everything here is exact: the default scalar is an arbitrary-precision
//! rational, and prime fields are available for speed. Vectors are sparse
//! maps from coordinate index to a nonzero scalar, matrices are stored by
//! column, and subspaces keep a canonical reduced row echelon basis so that
//! two equal subspaces always compare equal.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational numbers, the default coefficient field.
pub type Rational = BigRational;

/// A commutative field with exact arithmetic.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
    fn from_i64(value: i64) -> Self;
    /// Short name used in reports, e.g. `Q` or `Z/7`.
    fn descriptor() -> String;

    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv())
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }
    fn descriptor() -> String {
        "Q".to_string()
    }
}

/// Integers modulo a prime `P`. The caller is responsible for `P` being prime;
/// [`is_prime`] is provided for validation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(value: u64) -> Self {
        Fp(value % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut exp: u64) -> Self {
        let mut base = self.0 as u128;
        let mut acc: u128 = 1;
        let modulus = P as u128;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % modulus;
            }
            base = base * base % modulus;
            exp >>= 1;
        }
        Fp(acc as u64)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        Fp(((self.0 as u128 + rhs.0 as u128) % P as u128) as u64)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Fp(((self.0 as u128 + P as u128 - rhs.0 as u128) % P as u128) as u64)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
    fn neg(&self) -> Self {
        if self.0 == 0 {
            *self
        } else {
            Fp(P - self.0)
        }
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        // Fermat: a^(p-2) = a^-1
        self.pow(P - 2)
    }
    fn from_i64(value: i64) -> Self {
        Fp(value.rem_euclid(P as i64) as u64)
    }
    fn descriptor() -> String {
        format!("Z/{P}")
    }
}

/// Trial-division primality test, adequate for the moduli used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Formats a rational the way reports print it (`3`, `-1/2`).
pub fn rational_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Absolute value of a rational, used by tolerance checks in tests.
pub fn rational_abs(q: &BigRational) -> BigRational {
    q.abs()
}

/// A sparse vector: coordinate index to nonzero scalar.
#[derive(Clone, PartialEq, Debug)]
pub struct SparseVec<F: Field> {
    entries: BTreeMap<usize, F>,
}

impl<F: Field> Default for SparseVec<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> SparseVec<F> {
    pub fn new() -> Self {
        SparseVec {
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(index: usize) -> Self {
        let mut v = Self::new();
        v.entries.insert(index, F::one());
        v
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, F)>) -> Self {
        let mut v = Self::new();
        for (i, x) in pairs {
            v.add_at(i, &x);
        }
        v
    }

    pub fn from_dense(values: &[F]) -> Self {
        Self::from_pairs(values.iter().cloned().enumerate())
    }

    pub fn to_dense(&self, len: usize) -> Vec<F> {
        let mut out = vec![F::zero(); len];
        for (&i, x) in &self.entries {
            out[i] = x.clone();
        }
        out
    }

    pub fn get(&self, index: usize) -> F {
        self.entries.get(&index).cloned().unwrap_or_else(F::zero)
    }

    pub fn get_ref(&self, index: usize) -> Option<&F> {
        self.entries.get(&index)
    }

    pub fn set(&mut self, index: usize, value: F) {
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
    }

    pub fn add_at(&mut self, index: usize, value: &F) {
        if value.is_zero() {
            return;
        }
        match self.entries.get_mut(&index) {
            Some(x) => {
                let sum = x.add(value);
                if sum.is_zero() {
                    self.entries.remove(&index);
                } else {
                    *x = sum;
                }
            }
            None => {
                self.entries.insert(index, value.clone());
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &F)> + '_ {
        self.entries.iter().map(|(&i, x)| (i, x))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<(usize, &F)> {
        self.entries.iter().next().map(|(&i, x)| (i, x))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn scaled(&self, factor: &F) -> Self {
        if factor.is_zero() {
            return Self::new();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(&i, x)| (i, x.mul(factor)))
                .collect(),
        }
    }

    /// `self += factor * other`
    pub fn axpy(&mut self, factor: &F, other: &SparseVec<F>) {
        if factor.is_zero() {
            return;
        }
        for (&i, x) in &other.entries {
            self.add_at(i, &x.mul(factor));
        }
    }

    /// Keeps only coordinates for which `keep` returns a new index.
    pub fn remap(&self, mut keep: impl FnMut(usize) -> Option<usize>) -> Self {
        Self::from_pairs(
            self.entries
                .iter()
                .filter_map(|(&i, x)| keep(i).map(|j| (j, x.clone()))),
        )
    }

    pub fn dot(&self, other: &SparseVec<F>) -> F {
        let mut acc = F::zero();
        for (&i, x) in &self.entries {
            if let Some(y) = other.entries.get(&i) {
                acc = acc.add(&x.mul(y));
            }
        }
        acc
    }
}

/// A column-major sparse matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct SparseMatrix<F: Field> {
    nrows: usize,
    cols: Vec<SparseVec<F>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            cols: vec![SparseVec::new(); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_columns(n, (0..n).map(SparseVec::unit).collect())
    }

    /// Panics if a column has an entry outside `0..nrows`.
    pub fn from_columns(nrows: usize, cols: Vec<SparseVec<F>>) -> Self {
        for c in &cols {
            if let Some(m) = c.max_index() {
                assert!(m < nrows, "row index {m} out of range for {nrows} rows");
            }
        }
        SparseMatrix { nrows, cols }
    }

    pub fn from_triplets(nrows: usize, ncols: usize, triplets: impl IntoIterator<Item = (usize, usize, F)>) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for (i, j, x) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i},{j}) out of range");
            m.cols[j].add_at(i, &x);
        }
        m
    }

    pub fn from_dense_rows(rows: &[Vec<F>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_triplets(
            nrows,
            ncols,
            rows.iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, x)| (i, j, x.clone()))),
        )
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<F>> {
        let mut out = vec![vec![F::zero(); self.ncols()]; self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c.iter() {
                out[i][j] = x.clone();
            }
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, row: usize, col: usize) -> F {
        self.cols[col].get(row)
    }

    pub fn column(&self, col: usize) -> &SparseVec<F> {
        &self.cols[col]
    }

    pub fn columns(&self) -> &[SparseVec<F>] {
        &self.cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    /// Nonzero entries as `(row, col, value)`, ordered by row then column.
    pub fn entries(&self) -> Vec<(usize, usize, F)> {
        let mut out: Vec<_> = self
            .cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, x)| (i, j, x.clone())))
            .collect();
        out.sort_by_key(|&(i, j, _)| (i, j));
        out
    }

    pub fn mul_vec(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut out = SparseVec::new();
        for (j, x) in v.iter() {
            out.axpy(x, &self.cols[j]);
        }
        out
    }

    pub fn mul(&self, rhs: &SparseMatrix<F>) -> SparseMatrix<F> {
        assert_eq!(self.ncols(), rhs.nrows, "dimension mismatch in product");
        SparseMatrix {
            nrows: self.nrows,
            cols: rhs.cols.iter().map(|c| self.mul_vec(c)).collect(),
        }
    }

    pub fn add(&self, rhs: &SparseMatrix<F>) -> SparseMatrix<F> {
        assert_eq!((self.nrows, self.ncols()), (rhs.nrows, rhs.ncols()));
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.axpy(&F::one(), b);
                c
            })
            .collect();
        SparseMatrix { nrows: self.nrows, cols }
    }

    pub fn transpose(&self) -> SparseMatrix<F> {
        Self::from_triplets(
            self.ncols(),
            self.nrows,
            self.cols
                .iter()
                .enumerate()
                .flat_map(|(j, c)| c.iter().map(move |(i, x)| (j, i, x.clone()))),
        )
    }

    /// Rank by sparse elimination, processing the sparsest columns first.
    pub fn rank(&self) -> usize {
        let mut order: Vec<usize> = (0..self.ncols()).collect();
        order.sort_by_key(|&j| self.cols[j].nnz());
        let mut ech = Echelon::new();
        order
            .into_iter()
            .filter(|&j| ech.insert(self.cols[j].clone(), None).is_none())
            .count()
    }

    /// Basis of the null space, one vector per dependent column.
    pub fn kernel(&self) -> Vec<SparseVec<F>> {
        let mut ech = Echelon::new();
        let mut out = Vec::new();
        for (j, c) in self.cols.iter().enumerate() {
            if let Some(dep) = ech.insert(c.clone(), Some(SparseVec::unit(j))) {
                out.push(dep);
            }
        }
        out
    }

    /// Coordinate text: one `row col value` line per nonzero entry.
    pub fn to_coordinate_text(&self) -> String {
        let mut s = format!("% {} {} {}\n", self.nrows, self.ncols(), self.nnz());
        for (i, j, x) in self.entries() {
            s.push_str(&format!("{i} {j} {x}\n"));
        }
        s
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &SparseMatrix<F>) -> SparseMatrix<F> {
        assert_eq!(self.nrows, rhs.nrows);
        let mut cols = self.cols.clone();
        cols.extend(rhs.cols.iter().cloned());
        SparseMatrix { nrows: self.nrows, cols }
    }
}

/// Row echelon form keyed by leading index, optionally tracking how each
/// stored row was combined from the inputs.
struct Echelon<F: Field> {
    rows: HashMap<usize, (SparseVec<F>, Option<SparseVec<F>>)>,
}

impl<F: Field> Echelon<F> {
    fn new() -> Self {
        Echelon { rows: HashMap::new() }
    }

    /// Returns the combination history when `v` is dependent on earlier rows.
    fn insert(&mut self, mut v: SparseVec<F>, mut hist: Option<SparseVec<F>>) -> Option<SparseVec<F>> {
        loop {
            let Some((lead, coeff)) = v.leading().map(|(i, x)| (i, x.clone())) else {
                return Some(hist.unwrap_or_else(SparseVec::new));
            };
            match self.rows.get(&lead) {
                Some((row, row_hist)) => {
                    let factor = coeff.div(&row.get(lead)).neg();
                    v.axpy(&factor, row);
                    if let (Some(h), Some(rh)) = (hist.as_mut(), row_hist.as_ref()) {
                        h.axpy(&factor, rh);
                    }
                }
                None => {
                    self.rows.insert(lead, (v, hist));
                    return None;
                }
            }
        }
    }
}

/// A subspace of `F^n` with a canonical reduced row echelon basis.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace<F: Field> {
    ambient_dim: usize,
    /// Basis rows, sorted by pivot; each row is 1 at its pivot and 0 at the others'.
    rows: Vec<SparseVec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::coordinate(ambient_dim, 0..ambient_dim)
    }

    /// Span of the given coordinate axes.
    pub fn coordinate(ambient_dim: usize, axes: impl IntoIterator<Item = usize>) -> Self {
        let mut pivots: Vec<usize> = axes.into_iter().collect();
        pivots.sort_unstable();
        pivots.dedup();
        assert!(pivots.last().is_none_or(|&p| p < ambient_dim));
        Subspace {
            ambient_dim,
            rows: pivots.iter().map(|&p| SparseVec::unit(p)).collect(),
            pivots,
        }
    }

    pub fn span(ambient_dim: usize, generators: impl IntoIterator<Item = SparseVec<F>>) -> Self {
        let mut s = Self::zero(ambient_dim);
        for g in generators {
            s.insert(g);
        }
        s
    }

    /// Adds a generator; returns whether the dimension grew.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        if let Some(m) = v.max_index() {
            assert!(m < self.ambient_dim, "vector index {m} outside ambient dimension {}", self.ambient_dim);
        }
        let mut r = self.reduce(&v);
        let Some((p, lead)) = r.leading().map(|(i, x)| (i, x.clone())) else {
            return false;
        };
        r = r.scaled(&lead.inv());
        for row in &mut self.rows {
            let c = row.get(p);
            if !c.is_zero() {
                row.axpy(&c.neg(), &r);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        true
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after removing its pivot components; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut r = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = r.get(p);
            if !c.is_zero() {
                r.axpy(&c.neg(), row);
            }
        }
        r
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coefficients of `v` in the basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &SparseVec<F>) -> Option<SparseVec<F>> {
        if !self.contains(v) {
            return None;
        }
        Some(SparseVec::from_pairs(
            self.pivots.iter().enumerate().map(|(k, &p)| (k, v.get(p))),
        ))
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>) -> bool {
        self.ambient_dim == other.ambient_dim && self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }

    /// Ambient coordinates that are not pivots; their unit vectors span a complement.
    pub fn complement_axes(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.ambient_dim - self.dim());
        let mut it = self.pivots.iter().peekable();
        for i in 0..self.ambient_dim {
            if it.peek() == Some(&&i) {
                it.next();
            } else {
                out.push(i);
            }
        }
        out
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn basis_matrix(&self) -> SparseMatrix<F> {
        SparseMatrix::from_columns(self.ambient_dim, self.rows.clone())
    }
}
