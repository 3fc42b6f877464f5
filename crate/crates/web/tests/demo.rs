use serde_json::Value;

use embedhom_web::{automorphisms_json, circle_explorer_json, persistence_json};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn twelve_gon_triangles_vanish_at_pi_over_three() {
    let below = parse(circle_explorer_json("12", std::f64::consts::FRAC_PI_3 - 1e-6, 3).unwrap());
    assert!(below["edges_per_size"][2].as_u64().unwrap() > 0);
    assert_eq!(below["is_iso"], true);
    let at = parse(circle_explorer_json("12", std::f64::consts::FRAC_PI_3, 3).unwrap());
    assert_eq!(at["edges_per_size"][2], 0);
    assert_eq!(at["betti_inf"], at["betti_sup"]);
}

#[test]
fn explicit_angles_and_bad_input() {
    let v = parse(circle_explorer_json("0, 1.5, 3.0", 0.2, 2).unwrap());
    assert_eq!(v["points"], 3);
    assert!(circle_explorer_json("0, x", 0.2, 2).is_err());
    assert!(circle_explorer_json("4", -1.0, 2).is_err());
}

#[test]
fn equilateral_persistence() {
    let v = parse(persistence_json(r#"{"distance_matrix":[[0,2,2],[2,0,2],[2,2,0]]}"#, 2, 1, false).unwrap());
    let csv = v["csv"].as_str().unwrap();
    assert!(csv.lines().any(|l| l == "0,2,0.5,3,1,1"));
    let square = parse(persistence_json("0,0,0\n1,1,0\n2,1,1\n3,0,1\n", 2, 1, true).unwrap());
    assert!(square["steps"].as_array().unwrap().len() >= 2);
}

#[test]
fn group_report_for_two_disjoint_edges() {
    let v = parse(automorphisms_json(r#"{"vertices":[0,1,2,3],"edges":[[0,1],[2,3]]}"#).unwrap());
    assert_eq!(v["report"]["homeo_order"], 8);
    assert_eq!(v["report"]["stab_order"], 4);
    assert_eq!(v["report"]["aut_order"], 2);
    assert!(automorphisms_json("{").is_err());
}
