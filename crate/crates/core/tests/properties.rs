mod common;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use embedhom::automorphism::{aut_isom, group_report, homeo_group, stab_group, DEFAULT_VERTEX_CAP};
use embedhom::bundle::{a_coeff, order_bound, rho, SpaceDescriptor};
use embedhom::chain::{
    ambient_complex, hodge_laplacian, inf_complex, invariant_dimension, quotient_check, sup_complex,
    verify_quasi_iso_theta, AmbientMode,
};
use embedhom::hypergraph::{DirectedHyperedge, Edge, Hyperdigraph, Hyperedge, Hypergraph, VertexId};
use embedhom::io::{any_hypergraph_json, parse_hypergraph, AnyHypergraph, Report};
use embedhom::linalg::{Fp, Rational};
use embedhom::metric::MetricPointSample;
use embedhom::persistence::{build_filtration, persistent_betti, EmbeddedKind};

fn edge_lists(max_vertex: u32, max_card: usize, max_edges: usize) -> impl Strategy<Value = Vec<Vec<VertexId>>> {
    prop::collection::vec(
        prop::collection::btree_set(0..max_vertex, 1..=max_card).prop_map(|s| s.into_iter().collect()),
        1..=max_edges,
    )
}

fn hypergraph(max_vertex: u32, max_card: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    edge_lists(max_vertex, max_card, max_edges).prop_map(move |l| {
        Hypergraph::from_lists(l).with_vertex_set(0..max_vertex).unwrap()
    })
}

fn hyperdigraph(max_vertex: u32, max_card: usize, max_edges: usize) -> impl Strategy<Value = Hyperdigraph> {
    prop::collection::vec(
        prop::collection::btree_set(0..max_vertex, 1..=max_card)
            .prop_flat_map(|s| Just(s.into_iter().collect::<Vec<_>>()).prop_shuffle()),
        1..=max_edges,
    )
    .prop_map(move |l| Hyperdigraph::from_lists(l).with_vertex_set(0..max_vertex).unwrap())
}

fn union<E: Edge>(a: &Hypergraph<E>, b: &Hypergraph<E>) -> Hypergraph<E> {
    Hypergraph::new(
        a.vertex_set().union(b.vertex_set()).copied(),
        a.edges().iter().chain(b.edges()).cloned(),
    )
    .unwrap()
}

fn trim(mut v: Vec<usize>) -> Vec<usize> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn labels<E: Edge>(h: &Hypergraph<E>) -> Vec<Vec<VertexId>> {
    h.edges().iter().map(|e| e.vertices().to_vec()).collect()
}

fn small_circle() -> impl Strategy<Value = MetricPointSample> {
    prop::collection::vec(0.0..std::f64::consts::TAU, 2..=6)
        .prop_filter_map("distinct angles", |a| MetricPointSample::circle(a).ok())
}

fn small_planar() -> impl Strategy<Value = MetricPointSample> {
    prop::collection::btree_set((0i64..6, 0i64..6), 2..=5).prop_map(|pts| {
        MetricPointSample::euclidean(
            pts.into_iter()
                .map(|(x, y)| vec![BigRational::from_integer(x.into()), BigRational::from_integer(y.into())])
                .collect(),
        )
        .unwrap()
    })
}

#[test]
fn oracle_smoke() {
    assert_eq!(common::simplicial_betti(&[vec![0, 1], vec![1, 2], vec![0, 2]]), vec![1, 1]);
    assert_eq!(common::simplicial_betti(&[vec![0, 1, 2]]), vec![1]);
    assert_eq!(common::embedded_betti(&[vec![0, 1], vec![1, 2], vec![0, 2]]), (vec![0, 1], vec![0, 1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_a_closure_operator(a in hypergraph(6, 4, 6), b in hypergraph(6, 4, 6)) {
        let ca = a.delta_closure();
        prop_assert!(a.is_subset_of(&ca));
        prop_assert_eq!(ca.delta_closure(), ca.clone());
        prop_assert!(ca.is_simplicial());
        let ab = union(&a, &b);
        prop_assert!(ca.is_subset_of(&ab.delta_closure()));
    }

    #[test]
    fn lower_associated_is_an_interior(a in hypergraph(6, 4, 10), b in hypergraph(6, 4, 10)) {
        let la = a.lower_associated();
        prop_assert!(la.is_subset_of(&a));
        prop_assert_eq!(la.lower_associated(), la.clone());
        prop_assert!(la.is_simplicial());
        let ab = union(&a, &b);
        prop_assert!(la.is_subset_of(&ab.lower_associated()));
    }

    #[test]
    fn directed_closure_operators(a in hyperdigraph(5, 4, 6)) {
        let ca = a.delta_closure();
        prop_assert!(a.is_subset_of(&ca) && ca.delta_closure() == ca && ca.is_simplicial());
        let la = a.lower_associated();
        prop_assert!(la.is_subset_of(&a) && la.lower_associated() == la);
    }

    #[test]
    fn max_min_identities(h in hypergraph(5, 4, 8)) {
        let ambient: BTreeSet<VertexId> = (0..5).collect();
        let (max_h, min_h) = h.max_min_edges();
        let closure = h.delta_closure();
        let edges = |g: &Hypergraph| g.edges().clone();
        prop_assert_eq!(edges(&max_h), edges(&closure.max_min_edges().0));
        prop_assert_eq!(edges(&closure), edges(&max_h.delta_closure()));
        let up = h.associated_independence(&ambient).unwrap();
        prop_assert_eq!(edges(&min_h), edges(&up.max_min_edges().1));
        prop_assert_eq!(edges(&up), edges(&min_h.associated_independence(&ambient).unwrap()));
        let down = h.lower_associated_independence(&ambient).unwrap();
        prop_assert!(down.is_subset_of(&h.with_vertex_set(0..5).unwrap()));
        prop_assert!(up.edges().is_superset(h.edges()));
    }

    #[test]
    fn face_closures_ignore_the_vertex_set(h in hypergraph(5, 4, 8), extra in 5u32..9) {
        let wider = h.with_vertex_set(0..=extra).unwrap();
        prop_assert_eq!(h.delta_closure().edges().clone(), wider.delta_closure().edges().clone());
        prop_assert_eq!(h.lower_associated().edges().clone(), wider.lower_associated().edges().clone());
    }

    #[test]
    fn lift_projects_back(h in hypergraph(6, 4, 8)) {
        let lifted = h.lift();
        prop_assert!(lifted.is_sigma_invariant());
        prop_assert_eq!(lifted.project(), h.clone());
        for n in 1..=4usize {
            let f: usize = (1..=n).product();
            prop_assert_eq!(lifted.grade(n).count(), f * h.grade(n).count());
        }
    }

    #[test]
    fn hard_spheres_shrink_with_radius(s in small_circle(), r1 in 0.0f64..2.0, r2 in 0.0f64..2.0) {
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let big = s.hard_sphere(hi, 4).unwrap();
        let small = s.hard_sphere(lo, 4).unwrap();
        prop_assert!(big.is_subset_of(&small));
        prop_assert!(small.lift().is_sigma_invariant());
    }

    #[test]
    fn filtration_nests_and_lifts(s in small_planar()) {
        let steps = build_filtration(&s, 3).unwrap();
        for w in steps.windows(2) {
            prop_assert!(w[0].hypergraph.is_subset_of(&w[1].hypergraph));
        }
        for st in &steps {
            prop_assert_eq!(st.hypergraph.lift().project(), st.hypergraph.clone());
            let (oi, os) = common::embedded_betti(&labels(&st.hypergraph));
            prop_assert_eq!(oi, os);
        }
    }

    #[test]
    fn inf_span_sup_nest(h in hypergraph(6, 4, 8)) {
        let amb = ambient_complex::<Rational, _>(&h, &AmbientMode::Closure, 0).unwrap();
        let inf = amb.inf_in(&h).unwrap();
        let sup = amb.sup_in(&h).unwrap();
        for n in 0..amb.num_degrees() {
            let labels = amb.labels().labels(n);
            let span = embedhom::linalg::Subspace::coordinate(
                labels.len(),
                labels.iter().enumerate().filter(|(_, e)| h.contains(e)).map(|(i, _)| i),
            );
            prop_assert!(inf.space(n).unwrap().is_subspace_of(&span));
            prop_assert!(span.is_subspace_of(sup.space(n).unwrap()));
        }
        prop_assert!(inf.complex().check_square_zero().is_ok());
        prop_assert!(sup.complex().check_square_zero().is_ok());
    }

    #[test]
    fn inf_and_sup_are_quasi_isomorphic(h in hypergraph(6, 4, 10), d in hyperdigraph(5, 3, 8)) {
        let r = verify_quasi_iso_theta::<Rational, _>(&h).unwrap();
        prop_assert!(r.is_iso, "{:?}", r);
        let (oi, os) = common::embedded_betti(&labels(&h));
        prop_assert_eq!(trim(r.betti_inf.clone()), oi);
        prop_assert_eq!(trim(r.betti_sup.clone()), os);
        let rd = verify_quasi_iso_theta::<Rational, _>(&d).unwrap();
        prop_assert!(rd.is_iso, "{:?}", rd);
        // the same holds over a prime field
        let r2 = verify_quasi_iso_theta::<Fp<2>, _>(&h).unwrap();
        prop_assert!(r2.is_iso);
    }

    #[test]
    fn simplicial_inputs_are_their_own_inf_and_sup(h in hypergraph(6, 4, 5)) {
        let c = h.delta_closure();
        let amb = ambient_complex::<Rational, _>(&c, &AmbientMode::Closure, 0).unwrap();
        prop_assert!(amb.inf_in(&c).unwrap().same_representation(&amb));
        prop_assert!(amb.sup_in(&c).unwrap().same_representation(&amb));
    }

    #[test]
    fn betti_numbers_ignore_the_ambient(h in hypergraph(5, 3, 8)) {
        let mode = AmbientMode::FullSimplex { vertices: (0..6).collect(), max_degree: 3 };
        let full = ambient_complex::<Rational, _>(&h, &mode, 16).unwrap();
        let closure = ambient_complex::<Rational, _>(&h, &AmbientMode::Closure, 0).unwrap();
        prop_assert_eq!(
            trim(full.inf_in(&h).unwrap().complex().betti_numbers()),
            trim(closure.inf_in(&h).unwrap().complex().betti_numbers())
        );
        prop_assert_eq!(
            trim(full.sup_in(&h).unwrap().complex().betti_numbers()),
            trim(closure.sup_in(&h).unwrap().complex().betti_numbers())
        );
    }

    #[test]
    fn quotients_by_inf_and_sup_agree(h in hypergraph(5, 3, 8)) {
        let mode = AmbientMode::FullSimplex { vertices: (0..5).collect(), max_degree: 4 };
        let amb = ambient_complex::<Rational, _>(&h, &mode, 16).unwrap();
        let q = quotient_check(&amb, &h).unwrap();
        prop_assert!(q.surjective && q.is_quasi_iso, "{:?}", q);
    }

    #[test]
    fn harmonic_rank_is_betti(h in hypergraph(6, 4, 10)) {
        for c in [inf_complex::<Rational, _>(&h).unwrap(), sup_complex::<Rational, _>(&h).unwrap()] {
            for (n, b) in c.complex().betti_numbers().into_iter().enumerate() {
                prop_assert_eq!(hodge_laplacian(c.complex(), n).1, b);
            }
        }
    }

    #[test]
    fn invariant_dimension_of_a_lift(h in hypergraph(5, 4, 6)) {
        let lifted = h.lift();
        for n in 1..=4usize {
            prop_assert_eq!(invariant_dimension::<Rational>(&lifted, n).unwrap(), h.grade(n).count());
        }
    }

    #[test]
    fn group_orders_and_normality(h in hypergraph(5, 3, 6)) {
        let r = group_report(&h, DEFAULT_VERTEX_CAP).unwrap();
        prop_assert_eq!(r.aut_order * r.stab_order, r.homeo_order);
        prop_assert_eq!(r.stab_normal, Some(true));
        prop_assert!(r.faithful && r.consistent());
    }

    #[test]
    fn lift_groups_sit_inside_base_groups(h in hypergraph(4, 3, 5)) {
        let lifted = h.lift();
        let (hs, hh) = (stab_group(&h, 10).unwrap(), homeo_group(&h, 10).unwrap());
        let (ls, lh) = (stab_group(&lifted, 10).unwrap(), homeo_group(&lifted, 10).unwrap());
        prop_assert!(ls.is_subgroup_of(&hs));
        prop_assert_eq!(ls.is_normal_in(&hs), Some(true));
        prop_assert!(lh.is_subgroup_of(&hh));
    }

    #[test]
    fn isometric_stabilizer_is_normal(h in hypergraph(5, 3, 5), pts in small_planar()) {
        let ids: BTreeSet<VertexId> = pts.ids().iter().copied().collect();
        let restricted = Hypergraph::new(
            ids.iter().copied(),
            h.edges().iter().filter(|e| e.vertices().iter().all(|v| ids.contains(v))).cloned(),
        ).unwrap();
        let r = aut_isom(&restricted, &pts, DEFAULT_VERTEX_CAP).unwrap();
        prop_assert_eq!(r.normal, Some(true));
        prop_assert_eq!(r.aut_isom_order * r.stab_isom_order, r.homeo_isom_order);
    }

    #[test]
    fn persistence_ranks_compose(s in small_planar()) {
        let steps = build_filtration(&s, 3).unwrap();
        for kind in [EmbeddedKind::Inf, EmbeddedKind::Sup] {
            let t = persistent_betti::<Rational>(&steps, 2, kind, true).unwrap();
            prop_assert_eq!(t.composition_violation(), None);
        }
    }

    #[test]
    fn hypergraph_json_round_trips(h in hypergraph(6, 4, 8), d in hyperdigraph(5, 3, 6)) {
        for any in [AnyHypergraph::Undirected(h), AnyHypergraph::Directed(d)] {
            let text = any_hypergraph_json(&any).to_string();
            let once = parse_hypergraph(&text).unwrap();
            prop_assert_eq!(&once.value, &any);
            let again = parse_hypergraph(&any_hypergraph_json(&once.value).to_string()).unwrap();
            prop_assert_eq!(again.value, once.value);
        }
    }

    #[test]
    fn report_payload_is_deterministic(h in hypergraph(5, 3, 6)) {
        let run = || {
            let r = verify_quasi_iso_theta::<Rational, _>(&h).unwrap();
            Report::new("quasi-check", serde_json::json!({}), serde_json::to_value(r).unwrap(), vec![])
        };
        prop_assert_eq!(run().payload_json(), run().payload_json());
    }
}

#[test]
fn complete_uniform_stabilizers() {
    for v in 1..=5u32 {
        for n in 1..=v as usize {
            let vs: BTreeSet<VertexId> = (0..v).collect();
            let h = Hypergraph::<Hyperedge>::full_simplex(&vs, n);
            let uniform = Hypergraph::new(0..v, h.grade(n).cloned()).unwrap();
            let expected = if v as usize == n { (1..=n).product() } else { 1 };
            assert_eq!(stab_group(&uniform, 10).unwrap().order(), expected, "|V| = {v}, n = {n}");
        }
    }
}

#[test]
fn directed_groups_on_a_sigma_invariant_triangle() {
    let d: Hyperdigraph = Hypergraph::from_lists([vec![0, 1, 2]]).lift();
    assert_eq!(stab_group(&d, 10).unwrap().order(), 1);
    assert_eq!(homeo_group(&d, 10).unwrap().order(), 6);
    let single = Hyperdigraph::from_lists([vec![0u32, 1]]);
    assert!(DirectedHyperedge::new([0, 0]).is_err());
    assert_eq!(homeo_group(&single, 10).unwrap().order(), 1);
}

#[test]
fn rho_periodicity_and_monotonicity() {
    for k in 0..200 {
        assert_eq!(rho(k + 8), rho(k) + 4);
        assert!(rho(k + 1) >= rho(k));
    }
}

#[test]
fn a_coeff_divisibility_grid() {
    for m in 1..=12 {
        for n in 1..=12 {
            let a = a_coeff(m, n).unwrap();
            for m2 in m..=12 {
                for n2 in n..=12 {
                    let b = a_coeff(m2, n2).unwrap();
                    assert!((&b % &a).is_zero(), "a({m},{n}) does not divide a({m2},{n2})");
                }
            }
        }
    }
}

#[test]
fn line_bundles_are_trivial_and_large_arguments_are_exact() {
    for n in 1..=64 {
        assert_eq!(order_bound(SpaceDescriptor::Euclidean { m: 1 }, n).unwrap().divides, BigUint::from(1u32));
    }
    let big = a_coeff(64, 64).unwrap();
    // 2^rho(63) times odd primes up to 61, each to the 31st power
    assert_eq!(big.trailing_zeros(), Some(rho(63)));
    assert!(big.bits() > 64);
}

#[test]
fn sigma_action_permutes_basis_chains() {
    let d: Hyperdigraph = Hypergraph::from_lists([vec![0, 1, 2]]).lift();
    let chain: BTreeMap<DirectedHyperedge, Rational> = d
        .edges()
        .iter()
        .map(|e| (e.clone(), BigRational::from_integer(1.into())))
        .collect();
    let image = embedhom::chain::sigma_action(&chain, &[1, 2, 0]).unwrap();
    assert_eq!(image, chain);
}
