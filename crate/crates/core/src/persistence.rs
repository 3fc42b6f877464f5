//! Hard-sphere filtrations and persistent embedded homology.
//!
//! The hard-sphere hypergraph only changes when `2r` crosses a pairwise
//! distance, so a filtration has one step per open interval between
//! consecutive critical radii. Steps are listed by decreasing radius, which
//! makes the hypergraphs increase along the list.
//!
//! Persistent Betti numbers are computed pairwise: for steps `i <= j`, the
//! rank of the map `H_n(step i) -> H_n(step j)` induced by the inclusion of
//! infimum (or supremum) chains.

use std::fmt::Write as _;

use serde::Serialize;

use crate::chain::{EmbeddedComplex, GradedBasis, induced_homology_rank, is_chain_map};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::linalg::Field;
use crate::metric::{Metric, MetricPointSample};

/// Which embedded complex to take at each step.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddedKind {
    Inf,
    Sup,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct FiltrationStep {
    /// Open radius interval on which the hypergraph is constant; `None` is `+inf`.
    pub lower: f64,
    pub upper: Option<f64>,
    pub lower_exact: Option<String>,
    pub upper_exact: Option<String>,
    pub r_representative: f64,
    #[serde(skip)]
    pub hypergraph: Hypergraph,
}

/// One step per interval between consecutive critical radii, by decreasing radius.
pub fn build_filtration(sample: &MetricPointSample, n_max: usize) -> Result<Vec<FiltrationStep>> {
    if sample.is_empty() {
        return Err(Error::domain("a filtration needs at least one point"));
    }
    if n_max < 1 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    let radii = if sample.len() >= 2 { sample.critical_radii()? } else { Vec::new() };
    let k = radii.len();
    let steps = (1..=k + 1)
        .rev()
        .map(|level| {
            // pairs of class >= level survive on (radii[level-2], radii[level-1])
            let lower = if level >= 2 { radii[level - 2] } else { 0.0 };
            let upper = radii.get(level - 1).copied();
            let r_representative = match upper {
                Some(u) => (lower + u) / 2.0,
                None if k == 0 => 1.0,
                None => 2.0 * lower,
            };
            FiltrationStep {
                lower,
                upper,
                lower_exact: if level >= 2 {
                    sample.critical_radius_exact(level - 1).map(str::to_owned)
                } else {
                    Some("0".into())
                },
                upper_exact: sample.critical_radius_exact(level).map(str::to_owned),
                r_representative,
                hypergraph: sample.hard_sphere_at_level(level, n_max),
            }
        })
        .collect();
    Ok(steps)
}

/// Rank of one induced map in a persistence table.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct PersistenceEntry {
    pub degree: usize,
    pub step_i: usize,
    pub step_j: usize,
    pub r_i: f64,
    pub r_j: f64,
    pub beta_i: usize,
    pub beta_j: usize,
    pub rank: usize,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct PersistentBettiTable {
    pub kind: EmbeddedKind,
    pub num_steps: usize,
    pub max_degree: usize,
    pub all_pairs: bool,
    pub entries: Vec<PersistenceEntry>,
}

impl PersistentBettiTable {
    pub fn rank(&self, degree: usize, i: usize, j: usize) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| e.degree == degree && e.step_i == i && e.step_j == j)
            .map(|e| e.rank)
    }

    pub fn betti(&self, degree: usize, i: usize) -> Option<usize> {
        self.rank(degree, i, i)
    }

    /// Checks `rank(i, k) <= min(rank(i, j), rank(j, k))` for all `i <= j <= k`
    /// present in the table. Returns the first violation.
    pub fn composition_violation(&self) -> Option<(usize, usize, usize, usize)> {
        for d in 0..=self.max_degree {
            for i in 0..self.num_steps {
                for j in i..self.num_steps {
                    for k in j..self.num_steps {
                        if let (Some(ik), Some(ij), Some(jk)) =
                            (self.rank(d, i, k), self.rank(d, i, j), self.rank(d, j, k))
                        {
                            if ik > ij.min(jk) {
                                return Some((d, i, j, k));
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// CSV with header `degree,r_i,r_j,beta_i,beta_j,rank`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["degree", "r_i", "r_j", "beta_i", "beta_j", "rank"])
            .map_err(csv_error)?;
        for e in &self.entries {
            w.write_record([
                e.degree.to_string(),
                e.r_i.to_string(),
                e.r_j.to_string(),
                e.beta_i.to_string(),
                e.beta_j.to_string(),
                e.rank.to_string(),
            ])
            .map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Bars from inclusion-exclusion over all-pairs ranks. `death_step` is
    /// `None` for bars alive at the last step.
    pub fn barcode(&self) -> Result<Vec<Bar>> {
        if !self.all_pairs {
            return Err(Error::domain("barcodes need the all-pairs table"));
        }
        let m = self.num_steps;
        let mut bars = Vec::new();
        for d in 0..=self.max_degree {
            let r = |i: isize, j: usize| -> isize {
                if i < 0 || j >= m || (i as usize) > j {
                    0
                } else {
                    self.rank(d, i as usize, j).unwrap_or(0) as isize
                }
            };
            for b in 0..m {
                for death in b + 1..=m {
                    let bi = b as isize;
                    let mu = r(bi, death - 1) - r(bi, death) - r(bi - 1, death - 1) + r(bi - 1, death);
                    if mu < 0 {
                        return Err(Error::invariant(format!(
                            "negative bar multiplicity in degree {d} for steps [{b}, {death})"
                        )));
                    }
                    for _ in 0..mu {
                        bars.push(Bar {
                            degree: d,
                            birth_step: b,
                            death_step: (death < m).then_some(death),
                        });
                    }
                }
            }
        }
        Ok(bars)
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::invariant(format!("csv output failed: {e}"))
}

/// A bar: a class born at `birth_step` that dies entering `death_step`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Bar {
    pub degree: usize,
    pub birth_step: usize,
    pub death_step: Option<usize>,
}

/// Persistent Betti numbers of a nested filtration.
///
/// Every step is embedded in the closure of the last (largest) step, so the
/// inclusion maps are label lookups. With `all_pairs` false only the pairs
/// `(i, i)` and `(i, i + 1)` are computed.
pub fn persistent_betti<F: Field>(
    steps: &[FiltrationStep],
    max_degree: usize,
    kind: EmbeddedKind,
    all_pairs: bool,
) -> Result<PersistentBettiTable> {
    for (i, w) in steps.windows(2).enumerate() {
        if !w[0].hypergraph.is_subset_of(&w[1].hypergraph) {
            return Err(Error::domain(format!("filtration is not nested between steps {i} and {}", i + 1)));
        }
    }
    let complexes = match steps.last() {
        Some(last) => {
            let ambient: EmbeddedComplex<F, _> =
                EmbeddedComplex::from_closed_labels(GradedBasis::from_hypergraph(&last.hypergraph.delta_closure()))?;
            steps
                .iter()
                .map(|s| match kind {
                    EmbeddedKind::Inf => ambient.inf_in(&s.hypergraph),
                    EmbeddedKind::Sup => ambient.sup_in(&s.hypergraph),
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => Vec::new(),
    };
    let mut entries = Vec::new();
    for i in 0..steps.len() {
        let last_j = if all_pairs { steps.len() } else { (i + 2).min(steps.len()) };
        for j in i..last_j {
            let maps = complexes[i].inclusion_into(&complexes[j])?;
            if !is_chain_map(&maps, complexes[i].complex(), complexes[j].complex()) {
                return Err(Error::invariant(format!("inclusion of step {i} into step {j} is not a chain map")));
            }
            let (ci, cj) = (complexes[i].complex(), complexes[j].complex());
            let (bi, bj) = (ci.betti_numbers(), cj.betti_numbers());
            for degree in 0..=max_degree {
                let rank = maps.get(degree).map_or(0, |m| induced_homology_rank(m, ci, cj, degree));
                entries.push(PersistenceEntry {
                    degree,
                    step_i: i,
                    step_j: j,
                    r_i: steps[i].r_representative,
                    r_j: steps[j].r_representative,
                    beta_i: bi.get(degree).copied().unwrap_or(0),
                    beta_j: bj.get(degree).copied().unwrap_or(0),
                    rank,
                });
            }
        }
    }
    entries.sort_by_key(|e| (e.degree, e.step_i, e.step_j));
    Ok(PersistentBettiTable {
        kind,
        num_steps: steps.len(),
        max_degree,
        all_pairs,
        entries,
    })
}

/// Least radius at which the level-`n` hard-sphere hypergraph of a circle
/// sample is empty. `+inf` for `n = 1`; `0` when there are fewer than `n` points.
pub fn emptiness_threshold(sample: &MetricPointSample, n: usize) -> Result<f64> {
    if !matches!(sample.metric(), Metric::Circle(_)) {
        return Err(Error::domain(format!(
            "emptiness threshold is defined for circle samples, got {}",
            sample.metric().kind()
        )));
    }
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if n == 1 {
        return Ok(f64::INFINITY);
    }
    if sample.len() < n {
        return Ok(0.0);
    }
    let radii = sample.critical_radii()?;
    // the level-n set is nonempty below radii[level-1] iff pairs of class >= level hold an n-clique
    for level in (1..=radii.len()).rev() {
        if sample.hard_sphere_at_level(level, n).grade(n).next().is_some() {
            return Ok(radii[level - 1]);
        }
    }
    Ok(0.0)
}

/// Plain-text rendering of a filtration, one line per step.
pub fn describe_filtration(steps: &[FiltrationStep]) -> String {
    let mut out = String::new();
    for (i, s) in steps.iter().enumerate() {
        let upper = s.upper.map_or("inf".to_string(), |u| u.to_string());
        let _ = writeln!(out, "step {i}: r in ({}, {upper}), {} edges", s.lower, s.hypergraph.len());
    }
    out
}
