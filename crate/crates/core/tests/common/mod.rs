//! Dense exact-rational oracle, written without the library's linear algebra.
//!
//! Chains are indexed by vertex sequences; a sorted sequence stands for an
//! unordered edge. Face `i` drops position `i` with sign `(-1)^i`.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;
pub type Label = Vec<u32>;

fn q(n: i64) -> Q {
    BigRational::from_integer(n.into())
}

/// Rank of the matrix whose columns are `cols`, by Gaussian elimination.
pub fn rank(cols: &[Vec<Q>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Q>> = cols.to_vec();
    let nrows = m[0].len();
    let mut r = 0;
    for row in 0..nrows {
        let Some(p) = (r..m.len()).find(|&c| !m[c][row].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r].clone();
        for c in 0..m.len() {
            if c != r && !m[c][row].is_zero() {
                let f = &m[c][row] / &pivot[row];
                for (x, y) in m[c].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Basis of `{ c : sum_j c_j cols[j] = 0 }`.
pub fn kernel(cols: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let ncols = cols.len();
    if ncols == 0 {
        return Vec::new();
    }
    let nrows = cols[0].len();
    // rows of the matrix, reduced to RREF
    let mut a: Vec<Vec<Q>> = (0..nrows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Q::one() / &a[r][col];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[r].clone();
        for i in 0..nrows {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

/// All labels indexed by degree, with a position lookup.
pub struct Ambient {
    pub labels: Vec<Vec<Label>>,
    index: Vec<BTreeMap<Label, usize>>,
}

impl Ambient {
    pub fn new(labels: impl IntoIterator<Item = Label>) -> Self {
        let mut by_degree: Vec<BTreeSet<Label>> = Vec::new();
        for l in labels {
            let d = l.len() - 1;
            if by_degree.len() <= d {
                by_degree.resize(d + 1, BTreeSet::new());
            }
            by_degree[d].insert(l);
        }
        let labels: Vec<Vec<Label>> = by_degree.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = labels
            .iter()
            .map(|ls| ls.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect())
            .collect();
        Ambient { labels, index }
    }

    /// Every nonempty subsequence of every edge.
    pub fn closure_of(edges: &[Label]) -> Self {
        let mut all = BTreeSet::new();
        for e in edges {
            for mask in 1u32..(1 << e.len()) {
                all.insert((0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect::<Label>());
            }
        }
        Ambient::new(all)
    }

    /// Every sorted subset of `vertices` with at most `max_card` elements.
    pub fn full_simplex(vertices: &[u32], max_card: usize) -> Self {
        let n = vertices.len();
        let all = (1u32..(1 << n))
            .filter(|m| (m.count_ones() as usize) <= max_card)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| vertices[i]).collect::<Label>());
        Ambient::new(all)
    }

    pub fn degrees(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, Vec::len)
    }

    pub fn unit(&self, l: &Label) -> Vec<Q> {
        let n = l.len() - 1;
        let mut v = vec![Q::zero(); self.dim(n)];
        v[self.index[n][l]] = Q::one();
        v
    }

    /// Boundary of a label, as a vector in degree `n - 1`.
    pub fn boundary_of_label(&self, l: &Label) -> Vec<Q> {
        let n = l.len() - 1;
        let mut v = vec![Q::zero(); self.dim(n.wrapping_sub(1))];
        if n == 0 {
            return v;
        }
        for i in 0..l.len() {
            let mut f = l.clone();
            f.remove(i);
            let sign = if i % 2 == 0 { q(1) } else { q(-1) };
            v[self.index[n - 1][&f]] += sign;
        }
        v
    }

    /// Boundary of a chain in degree `n`.
    pub fn boundary(&self, n: usize, x: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); if n == 0 { 0 } else { self.dim(n - 1) }];
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                for (o, b) in out.iter_mut().zip(self.boundary_of_label(&self.labels[n][i])) {
                    *o += c * b;
                }
            }
        }
        out
    }
}

fn trim(mut v: Vec<usize>) -> Vec<usize> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Betti numbers of all chains on a face-closed label set.
pub fn full_betti(amb: &Ambient) -> Vec<usize> {
    let r: Vec<usize> = (0..=amb.degrees())
        .map(|n| {
            if n == 0 || n >= amb.degrees() {
                0
            } else {
                rank(&amb.labels[n].iter().map(|l| amb.boundary_of_label(l)).collect::<Vec<_>>())
            }
        })
        .collect();
    trim((0..amb.degrees()).map(|n| amb.dim(n) - r[n] - r[n + 1]).collect())
}

/// Simplicial homology of the face closure of `simplices`.
pub fn simplicial_betti(simplices: &[Label]) -> Vec<usize> {
    full_betti(&Ambient::closure_of(simplices))
}

/// Subspaces of an ambient, one spanning list per degree.
pub type Spans = Vec<Vec<Vec<Q>>>;

/// The Inf and Sup subcomplexes of the edge set `h` inside `amb`.
pub fn inf_sup_spans(amb: &Ambient, h: &[Label]) -> (Spans, Spans) {
    let hs: BTreeSet<&Label> = h.iter().collect();
    let d: Vec<Vec<&Label>> = (0..amb.degrees())
        .map(|n| amb.labels[n].iter().filter(|l| hs.contains(l)).collect())
        .collect();
    let mut inf = Vec::new();
    let mut sup = Vec::new();
    for n in 0..amb.degrees() {
        // coordinates of boundaries outside D_{n-1}
        let outside: Vec<usize> = if n == 0 {
            Vec::new()
        } else {
            (0..amb.dim(n - 1)).filter(|&i| !hs.contains(&amb.labels[n - 1][i])).collect()
        };
        let cols: Vec<Vec<Q>> = d[n]
            .iter()
            .map(|l| {
                let b = amb.boundary_of_label(l);
                outside.iter().map(|&i| b[i].clone()).collect()
            })
            .collect();
        let inf_n = if outside.is_empty() {
            d[n].iter().map(|l| amb.unit(l)).collect()
        } else {
            kernel(&cols)
                .into_iter()
                .map(|c| {
                    let mut v = vec![Q::zero(); amb.dim(n)];
                    for (k, l) in d[n].iter().enumerate() {
                        for (x, y) in v.iter_mut().zip(amb.unit(l)) {
                            *x += &c[k] * y;
                        }
                    }
                    v
                })
                .collect()
        };
        inf.push(inf_n);
        let mut sup_n: Vec<Vec<Q>> = d[n].iter().map(|l| amb.unit(l)).collect();
        if n + 1 < amb.degrees() {
            sup_n.extend(d[n + 1].iter().map(|l| amb.boundary_of_label(l)));
        }
        sup.push(sup_n);
    }
    (inf, sup)
}

/// Betti numbers of a subcomplex given by spanning sets.
pub fn sub_betti(amb: &Ambient, s: &Spans) -> Vec<usize> {
    let dims: Vec<usize> = s.iter().map(|g| rank(g)).collect();
    let bd: Vec<usize> = (0..=s.len())
        .map(|n| {
            if n == 0 || n >= s.len() {
                0
            } else {
                rank(&s[n].iter().map(|x| amb.boundary(n, x)).collect::<Vec<_>>())
            }
        })
        .collect();
    trim((0..s.len()).map(|n| dims[n] - bd[n] - bd[n + 1]).collect())
}

/// Betti numbers of the quotient of all chains by a subcomplex.
pub fn quotient_betti(amb: &Ambient, s: &Spans) -> Vec<usize> {
    let dim_s: Vec<usize> = s.iter().map(|g| rank(g)).collect();
    // rank of the boundary C_n -> C_{n-1}/S_{n-1}
    let r = |n: usize| {
        if n == 0 || n >= amb.degrees() {
            return 0;
        }
        let mut cols = s[n - 1].clone();
        cols.extend(amb.labels[n].iter().map(|l| amb.boundary_of_label(l)));
        rank(&cols) - dim_s[n - 1]
    };
    trim((0..amb.degrees()).map(|n| amb.dim(n) - dim_s[n] - r(n) - r(n + 1)).collect())
}

/// Inf and Sup Betti numbers of `h` computed in its closure.
pub fn embedded_betti(h: &[Label]) -> (Vec<usize>, Vec<usize>) {
    let amb = Ambient::closure_of(h);
    let (inf, sup) = inf_sup_spans(&amb, h);
    (sub_betti(&amb, &inf), sub_betti(&amb, &sup))
}

pub fn trimmed(v: Vec<usize>) -> Vec<usize> {
    trim(v)
}
