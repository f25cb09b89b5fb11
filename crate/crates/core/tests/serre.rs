use lagbgg::exact_linalg::int;
use lagbgg::gradedcat::{GradedOperator, MultiGradedSpace};
use lagbgg::serre::*;
use lagbgg::sl2::{complete_sl2, Sl2Action, Weights};

// defining representation of sl_{r+1}, one line per basis vector, degree (h1, -h2, h3, ...)
fn defining(degrees: &[Vec<i64>]) -> MultiGradedSpace {
    MultiGradedSpace::from_dims(degrees[0].len(), degrees.iter().map(|d| (d.clone(), 1)))
}

fn unit_map(space: &MultiGradedSpace, from: &[i64], to: &[i64]) -> GradedOperator {
    let mut op = GradedOperator::zero(space, space);
    op.add_entry(&from.to_vec(), 0, &to.to_vec(), 0, &int(1));
    op
}

fn action(space: &MultiGradedSpace, from: &[i64], to: &[i64], axis: usize) -> Sl2Action {
    complete_sl2(&unit_map(space, from, to), &Weights::axis(space.axes(), axis)).unwrap()
}

fn sl3_pair() -> (Sl2Action, Sl2Action) {
    let (v1, v2, v3) = (vec![1, 0], vec![-1, -1], vec![0, 1]);
    let space = defining(&[v1.clone(), v2.clone(), v3.clone()]);
    (action(&space, &v2, &v1, 0), action(&space, &v2, &v3, 1))
}

#[test]
fn sl3_defining_representation() {
    let (a, b) = sl3_pair();
    let sys = build_sl3(&a, &b).unwrap();
    let report = check_serre(&sys, &CartanMatrix::a2()).unwrap();
    assert!(report.all_pass(), "{}", report.to_json());
    assert_eq!(report.checks.len(), 17);
    assert!(check_reflection_identity(&sys).unwrap());
}

#[test]
fn sl4_defining_representation() {
    let (v1, v2, v3, v4) = (vec![1, 0, 0], vec![-1, -1, 0], vec![0, 1, 1], vec![0, 0, -1]);
    let space = defining(&[v1.clone(), v2.clone(), v3.clone(), v4.clone()]);
    let (a, b, c) = (action(&space, &v2, &v1, 0), action(&space, &v2, &v3, 1), action(&space, &v4, &v3, 2));
    let sys = build_sl4(&a, &b, &c).unwrap();
    let report = check_serre(&sys, &CartanMatrix::a3()).unwrap();
    assert!(report.all_pass(), "{}", report.to_json());
    assert!(check_reflection_identity(&sys).unwrap());
}

#[test]
fn corrupted_generator_yields_witness() {
    let (a, b) = sl3_pair();
    let mut sys = build_sl3(&a, &b).unwrap();
    sys.e[1] = sys.e[1].scale(&int(2));
    let report = check_serre(&sys, &CartanMatrix::a2()).unwrap();
    let failed: Vec<_> = report.failures().map(|c| c.relation.as_str()).collect();
    assert_eq!(failed, vec!["[e2, f2] = h2"]);
    let w = report.failures().next().unwrap().witness.clone().unwrap();
    assert!(!w.difference.is_empty());
    assert!(report.to_json().contains("witness"));
}

#[test]
fn commuting_pair_is_rejected() {
    // two sl2 copies on disjoint lines: X_2 does not move the first weight
    let space = MultiGradedSpace::from_dims(2, [(vec![1, 0], 1), (vec![-1, 0], 1), (vec![0, 1], 1), (vec![0, -1], 1)]);
    let a = action(&space, &[-1, 0], &[1, 0], 0);
    let b = action(&space, &[0, -1], &[0, 1], 1);
    assert!(matches!(build_sl3(&a, &b), Err(SerreError::Precondition(_))));
}

#[test]
fn group_elements_are_distinct_and_closed() {
    let g = weyl_orbit(&tri_reflections()).unwrap();
    for row in &g.table {
        let mut r = row.clone();
        r.sort();
        assert_eq!(r, (0..g.order()).collect::<Vec<_>>());
    }
    let swap = LatticeMap::linear(vec![vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, -1]]);
    assert!(g.elements.contains(&swap));
    let hex = weyl_orbit(&hexagon_reflections()).unwrap();
    assert!(hex.elements.contains(&LatticeMap::linear(vec![vec![0, 1], vec![1, 0]])));
}
