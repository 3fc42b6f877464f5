//! Vertex permutation groups of hypergraphs.
//!
//! `Homeo(h)` is the group of vertex bijections mapping every edge of `h` to
//! an edge of `h`; `Stab(h)` the subgroup fixing every edge; `Aut(h)` the
//! group of edge permutations induced by `Homeo(h)`, which is isomorphic to
//! the quotient `Homeo / Stab`.
//!
//! Groups are enumerated explicitly by backtracking over vertex bijections,
//! so vertex sets are capped (10 by default).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hyperdigraph, Hyperedge, Hypergraph, VertexId};
use crate::metric::MetricPointSample;

pub const DEFAULT_VERTEX_CAP: usize = 10;

/// Groups up to this order get full closure and normality checks.
pub const CHECKED_GROUP_ORDER: usize = 5000;

/// A bijection of `0..n`, stored as its image sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Permutation(Box<[u8]>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        if images.len() > u8::MAX as usize {
            return Err(Error::domain("permutations act on at most 255 points"));
        }
        if !crate::hypergraph::is_permutation(&images) {
            return Err(Error::domain(format!("{images:?} is not a permutation")));
        }
        Ok(Permutation(images.into_iter().map(|i| i as u8).collect()))
    }

    fn from_images(images: &[usize]) -> Self {
        Permutation(images.iter().map(|&i| i as u8).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation(inv.into())
    }

    /// Disjoint cycles of length at least two.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut i = self.apply(start);
            while i != start {
                seen[i] = true;
                cycle.push(i);
                i = self.apply(i);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, i) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A finite group of permutations given by its full element list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermutationGroup {
    degree: usize,
    elements: BTreeSet<Permutation>,
}

impl PermutationGroup {
    /// Wraps an element set; the caller guarantees it is a group.
    pub fn from_elements(degree: usize, elements: impl IntoIterator<Item = Permutation>) -> Self {
        PermutationGroup {
            degree,
            elements: elements.into_iter().collect(),
        }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_elements(degree, [Permutation::identity(degree)])
    }

    /// Closure of the given generators under composition.
    pub fn generated_by(degree: usize, generators: &[Permutation]) -> Self {
        let mut elements: BTreeSet<Permutation> = [Permutation::identity(degree)].into_iter().collect();
        let mut frontier: Vec<Permutation> = elements.iter().cloned().collect();
        while let Some(g) = frontier.pop() {
            for s in generators {
                let h = s.compose(&g);
                if elements.insert(h.clone()) {
                    frontier.push(h);
                }
            }
        }
        PermutationGroup { degree, elements }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Permutation> + '_ {
        self.elements.iter()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.elements.is_subset(&other.elements)
    }

    pub fn intersection(&self, other: &PermutationGroup) -> PermutationGroup {
        PermutationGroup {
            degree: self.degree,
            elements: self.elements.intersection(&other.elements).cloned().collect(),
        }
    }

    /// Identity, inverses and closure. `None` if the group is too large to check.
    pub fn verify_group(&self) -> Option<bool> {
        if self.order() > CHECKED_GROUP_ORDER {
            return None;
        }
        Some(
            self.contains(&Permutation::identity(self.degree))
                && self.elements.iter().all(|g| {
                    self.contains(&g.inverse()) && self.elements.iter().all(|h| self.contains(&g.compose(h)))
                }),
        )
    }

    /// `g s g^-1 ∈ self` for all `g` in `group`, `s` in `self`. `None` when too large.
    pub fn is_normal_in(&self, group: &PermutationGroup) -> Option<bool> {
        if self.order().saturating_mul(group.order()) > CHECKED_GROUP_ORDER * CHECKED_GROUP_ORDER {
            return None;
        }
        Some(
            self.is_subgroup_of(group)
                && group.elements.iter().all(|g| {
                    let gi = g.inverse();
                    self.elements.iter().all(|s| self.contains(&g.compose(&s.compose(&gi))))
                }),
        )
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<Permutation> {
        let mut gens = Vec::new();
        let mut span = PermutationGroup::trivial(self.degree);
        for g in &self.elements {
            if !span.contains(g) {
                gens.push(g.clone());
                span = PermutationGroup::generated_by(self.degree, &gens);
                if span.order() == self.order() {
                    break;
                }
            }
        }
        gens
    }
}

fn cap_check(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::Cap {
            what: "vertex count for group enumeration",
            got: n,
            cap,
        });
    }
    Ok(())
}

/// Backtracking search for bijections of `0..n`. `profile` must be preserved;
/// `partial_ok(images, k)` is asked after position `k` is assigned.
fn search(n: usize, profile: &[u64], mut partial_ok: impl FnMut(&[usize], usize) -> bool) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut images = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        k: usize,
        images: &mut Vec<usize>,
        used: &mut Vec<bool>,
        profile: &[u64],
        ok: &mut dyn FnMut(&[usize], usize) -> bool,
        out: &mut Vec<Permutation>,
    ) {
        let n = images.len();
        if k == n {
            out.push(Permutation::from_images(images));
            return;
        }
        for v in 0..n {
            if used[v] || profile[v] != profile[k] {
                continue;
            }
            images[k] = v;
            used[v] = true;
            if ok(images, k) {
                rec(k + 1, images, used, profile, ok, out);
            }
            used[v] = false;
            images[k] = usize::MAX;
        }
    }
    rec(0, &mut images, &mut used, profile, &mut partial_ok, &mut out);
    out
}

/// Edges of `h` as position sequences over its sorted vertex list.
struct Indexed<E: Edge> {
    vertices: Vec<VertexId>,
    edges: Vec<E>,
    edge_index: HashMap<E, usize>,
    positions: Vec<Vec<usize>>,
}

impl<E: Edge> Indexed<E> {
    fn new(h: &Hypergraph<E>) -> Self {
        let vertices: Vec<VertexId> = h.vertex_set().iter().copied().collect();
        let pos: HashMap<VertexId, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<E> = h.edges().iter().cloned().collect();
        let positions = edges.iter().map(|e| e.vertices().iter().map(|v| pos[v]).collect()).collect();
        let edge_index = edges.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Indexed {
            vertices,
            edges,
            edge_index,
            positions,
        }
    }

    fn image(&self, p: &Permutation, e: usize) -> E {
        let vs = self.positions[e].iter().map(|&i| self.vertices[p.apply(i)]).collect();
        E::from_vertices(vs).expect("bijection keeps vertices distinct")
    }

    /// Hash of the edge incidences of each vertex, invariant under Homeo.
    fn profile(&self) -> Vec<u64> {
        let mut counts: Vec<BTreeMap<(usize, usize), u64>> = vec![BTreeMap::new(); self.vertices.len()];
        for p in &self.positions {
            for (k, &v) in p.iter().enumerate() {
                let slot = if E::DIRECTED { k } else { 0 };
                *counts[v].entry((p.len(), slot)).or_default() += 1;
            }
        }
        counts
            .into_iter()
            .map(|c| {
                use std::hash::{Hash, Hasher};
                let mut s = std::collections::hash_map::DefaultHasher::new();
                c.hash(&mut s);
                s.finish()
            })
            .collect()
    }

    /// Edge indices grouped by the largest vertex position they use.
    fn by_last_position(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (i, p) in self.positions.iter().enumerate() {
            if let Some(&m) = p.iter().max() {
                out[m].push(i);
            }
        }
        out
    }

    fn homeo(&self) -> PermutationGroup {
        let n = self.vertices.len();
        let profile = self.profile();
        let closing = self.by_last_position();
        let set: HashSet<&E> = self.edges.iter().collect();
        let elements = search(n, &profile, |images, k| {
            closing[k].iter().all(|&e| {
                let vs = self.positions[e].iter().map(|&i| self.vertices[images[i]]).collect();
                E::from_vertices(vs).is_ok_and(|img| set.contains(&img))
            })
        });
        PermutationGroup::from_elements(n, elements)
    }

    fn edge_permutation(&self, p: &Permutation) -> Permutation {
        let images: Vec<usize> = (0..self.edges.len()).map(|e| self.edge_index[&self.image(p, e)]).collect();
        Permutation::from_images(&images)
    }
}

/// Vertex bijections mapping edges of `h` into `h`, over the sorted vertex set.
pub fn homeo_group<E: Edge>(h: &Hypergraph<E>, cap: usize) -> Result<PermutationGroup> {
    cap_check(h.vertex_set().len(), cap)?;
    Ok(Indexed::new(h).homeo())
}

/// Elements of `Homeo(h)` fixing every edge.
pub fn stab_group<E: Edge>(h: &Hypergraph<E>, cap: usize) -> Result<PermutationGroup> {
    cap_check(h.vertex_set().len(), cap)?;
    let ix = Indexed::new(h);
    let homeo = ix.homeo();
    Ok(stab_within(&ix, &homeo))
}

fn stab_within<E: Edge>(ix: &Indexed<E>, homeo: &PermutationGroup) -> PermutationGroup {
    PermutationGroup::from_elements(
        homeo.degree(),
        homeo
            .elements()
            .filter(|p| (0..ix.edges.len()).all(|e| ix.image(p, e) == ix.edges[e]))
            .cloned(),
    )
}

/// The edge permutation group induced by `Homeo(h)`.
#[derive(Clone, Debug)]
pub struct AutGroup<E: Edge> {
    pub edges: Vec<E>,
    pub group: PermutationGroup,
    /// One vertex permutation per element, keyed by the edge permutation.
    pub representatives: BTreeMap<Permutation, Permutation>,
}

impl<E: Edge> AutGroup<E> {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Generators written as cycles on edges.
    pub fn generator_cycles(&self) -> Vec<String> {
        self.group
            .generators()
            .iter()
            .map(|g| {
                g.cycles()
                    .iter()
                    .map(|c| format!("({})", c.iter().map(|&i| self.edges[i].to_string()).collect::<Vec<_>>().join(" ")))
                    .collect::<String>()
            })
            .collect()
    }
}

fn aut_from<E: Edge>(ix: &Indexed<E>, homeo: &PermutationGroup) -> AutGroup<E> {
    let mut representatives = BTreeMap::new();
    for p in homeo.elements() {
        representatives.entry(ix.edge_permutation(p)).or_insert_with(|| p.clone());
    }
    AutGroup {
        edges: ix.edges.clone(),
        group: PermutationGroup::from_elements(ix.edges.len(), representatives.keys().cloned()),
        representatives,
    }
}

pub fn aut_group<E: Edge>(h: &Hypergraph<E>, cap: usize) -> Result<AutGroup<E>> {
    cap_check(h.vertex_set().len(), cap)?;
    let ix = Indexed::new(h);
    Ok(aut_from(&ix, &ix.homeo()))
}

/// Orders and checks of `Homeo`, `Stab` and `Aut` for one hypergraph.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GroupReport {
    pub homeo_order: usize,
    pub stab_order: usize,
    pub aut_order: usize,
    pub aut_generators: Vec<String>,
    pub stab_normal: Option<bool>,
    pub homeo_is_group: Option<bool>,
    pub faithful: bool,
}

impl GroupReport {
    /// Whether every check that ran passed, including `|Aut| |Stab| = |Homeo|`.
    pub fn consistent(&self) -> bool {
        self.aut_order * self.stab_order == self.homeo_order
            && self.stab_normal != Some(false)
            && self.homeo_is_group != Some(false)
            && self.faithful
    }
}

pub fn group_report<E: Edge>(h: &Hypergraph<E>, cap: usize) -> Result<GroupReport> {
    cap_check(h.vertex_set().len(), cap)?;
    let ix = Indexed::new(h);
    let homeo = ix.homeo();
    let stab = stab_within(&ix, &homeo);
    let aut = aut_from(&ix, &homeo);
    // faithful: only the identity edge permutation comes from Stab
    let faithful = stab.elements().all(|s| ix.edge_permutation(s).is_identity());
    Ok(GroupReport {
        homeo_order: homeo.order(),
        stab_order: stab.order(),
        aut_order: aut.order(),
        aut_generators: aut.generator_cycles(),
        stab_normal: stab.is_normal_in(&homeo),
        homeo_is_group: homeo.verify_group(),
        faithful,
    })
}

/// Whether every element of `Aut(project(hd))` is induced by `Aut(hd)`.
pub fn pi_surjection_check(hd: &Hyperdigraph, cap: usize) -> Result<bool> {
    if !hd.is_sigma_invariant() {
        return Err(Error::domain("hyperdigraph is not invariant under coordinate permutations"));
    }
    cap_check(hd.vertex_set().len(), cap)?;
    let h = hd.project();
    let dix = Indexed::new(hd);
    let uix = Indexed::new(&h);
    let directed = aut_from(&dix, &dix.homeo());
    let undirected = aut_from(&uix, &uix.homeo());
    // both use the same sorted vertex list, so representatives act on h directly
    let images: BTreeSet<Permutation> = directed
        .representatives
        .values()
        .map(|p| uix.edge_permutation(p))
        .collect();
    let onto = undirected.group.elements().all(|g| images.contains(g));
    Ok(onto)
}

/// Comparison of the vertex permutation groups of `h` and its closures.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SubgroupReport {
    pub homeo_orders: BTreeMap<String, usize>,
    pub aut_orders: BTreeMap<String, usize>,
    /// `Homeo(max h) = Homeo(closure h)`.
    pub max_equals_closure: bool,
    /// `Homeo(min h) = Homeo(superset closure h)`.
    pub min_equals_co_closure: bool,
    /// `Homeo(h)` lies in the intersection of the four closure groups.
    pub contained_in_intersection: bool,
}

impl SubgroupReport {
    pub fn holds(&self) -> bool {
        self.max_equals_closure && self.min_equals_co_closure && self.contained_in_intersection
    }
}

pub fn subgroup_identities(h: &Hypergraph<Hyperedge>, ambient: &BTreeSet<VertexId>, cap: usize) -> Result<SubgroupReport> {
    cap_check(ambient.len(), cap)?;
    let on_ambient = |g: &Hypergraph| g.with_vertex_set(ambient.iter().copied());
    let base = on_ambient(h)?;
    let (max, min) = base.max_min_edges();
    let variants: Vec<(&str, Hypergraph)> = vec![
        ("h", base.clone()),
        ("max", on_ambient(&max)?),
        ("min", on_ambient(&min)?),
        ("closure", on_ambient(&base.delta_closure())?),
        ("lower", on_ambient(&base.lower_associated())?),
        ("co_closure", base.associated_independence(ambient)?),
        ("co_lower", base.lower_associated_independence(ambient)?),
    ];
    let mut homeo = BTreeMap::new();
    let mut aut_orders = BTreeMap::new();
    for (name, g) in &variants {
        let ix = Indexed::new(g);
        let group = ix.homeo();
        aut_orders.insert(name.to_string(), aut_from(&ix, &group).order());
        homeo.insert(name.to_string(), group);
    }
    let inter = ["closure", "co_closure", "lower", "co_lower"]
        .iter()
        .map(|k| homeo[*k].clone())
        .reduce(|a, b| a.intersection(&b))
        .expect("four groups");
    Ok(SubgroupReport {
        max_equals_closure: homeo["max"] == homeo["closure"],
        min_equals_co_closure: homeo["min"] == homeo["co_closure"],
        contained_in_intersection: homeo["h"].is_subgroup_of(&inter),
        homeo_orders: homeo.iter().map(|(k, g)| (k.clone(), g.order())).collect(),
        aut_orders,
    })
}

/// Bijections of the sample preserving every pairwise distance, over the
/// sorted id list.
pub fn isom_group(sample: &MetricPointSample, cap: usize) -> Result<PermutationGroup> {
    let n = sample.len();
    cap_check(n, cap)?;
    // position in sorted id order -> position in the sample
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| sample.ids()[i]);
    let class = |a: usize, b: usize| sample.distance_class(order[a], order[b]);
    let profile: Vec<u64> = (0..n)
        .map(|i| {
            let mut c: Vec<usize> = (0..n).filter(|&j| j != i).map(|j| class(i, j)).collect();
            c.sort_unstable();
            use std::hash::{Hash, Hasher};
            let mut s = std::collections::hash_map::DefaultHasher::new();
            c.hash(&mut s);
            s.finish()
        })
        .collect();
    let elements = search(n, &profile, |images, k| (0..k).all(|j| class(j, k) == class(images[j], images[k])));
    Ok(PermutationGroup::from_elements(n, elements))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AutIsomReport {
    pub isom_order: usize,
    pub homeo_isom_order: usize,
    pub stab_isom_order: usize,
    pub aut_isom_order: usize,
    /// `Stab ∩ Isom` is normal in `Homeo ∩ Isom`.
    pub normal: Option<bool>,
}

/// Isometric automorphisms of a hypergraph on the sample's points.
pub fn aut_isom(h: &Hypergraph<Hyperedge>, sample: &MetricPointSample, cap: usize) -> Result<AutIsomReport> {
    let ids: BTreeSet<VertexId> = sample.ids().iter().copied().collect();
    let h = h.with_vertex_set(ids)?;
    let isom = isom_group(sample, cap)?;
    let ix = Indexed::new(&h);
    let homeo = ix.homeo().intersection(&isom);
    let stab = stab_within(&ix, &homeo);
    let aut = aut_from(&ix, &homeo);
    Ok(AutIsomReport {
        isom_order: isom.order(),
        homeo_isom_order: homeo.order(),
        stab_isom_order: stab.order(),
        aut_isom_order: aut.order(),
        normal: stab.is_normal_in(&homeo),
    })
}
