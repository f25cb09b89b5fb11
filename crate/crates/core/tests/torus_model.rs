use lagbgg::torus_model::*;

fn models() -> Vec<TorusFibration> {
    (1..=2).map(|n| TorusFibration::build(n).unwrap()).collect()
}

#[test]
fn betti_and_hodge_counts() {
    let t = TorusFibration::build(2).unwrap();
    let b2: usize = t.forms().space().dim_where(|_| true);
    assert_eq!(b2, 256);
    let deg2 = (0..256u32).filter(|b| b.count_ones() == 2).count();
    assert_eq!(deg2, 28);
    let h = hodge_numbers(1);
    assert_eq!(h[&(1, 1)], 4);
    assert_eq!(h[&(0, 2)], 1);
}

#[test]
fn hexagon_suite() {
    for t in models() {
        let rep = check_hexagon(&t).unwrap();
        assert!(rep.all_pass(), "n = {}: {rep:?}", t.n());
    }
    let table = hexagon_table(&TorusFibration::build(1).unwrap()).unwrap();
    assert_eq!(table.len(), 7);
    assert_eq!(hexagon_table(&TorusFibration::build(2).unwrap()).unwrap().len(), 19);
}

#[test]
fn g_complex_outside_the_band_is_exact() {
    let t = TorusFibration::build(1).unwrap();
    // i - k = n + 1
    assert!(t.g_complex(1, -1).unwrap().is_exact());
    assert!(t.g_complex(2, 1).unwrap().is_exact());
}

#[test]
fn top_summand_is_the_canonical_bundle() {
    for t in models() {
        let n = t.n() as i64;
        let p = t.perverse_summand(n);
        assert_eq!(p.dim(-n), 1);
        assert_eq!(p.space().total_dim(), 1);
        // G_{n,k} in degree m: rank C(n, n + m - n) of Ω_B^{m}... read off the form model
        for k in 0..=n {
            assert_eq!(t.g_profile(n, k).unwrap(), t.g_profile_from_forms(n, k));
        }
    }
}

#[test]
fn tri_graded_suite() {
    for t in models() {
        let rep = check_tri_graded(&t).unwrap();
        assert!(rep.all_pass(), "n = {}: {rep:?}", t.n());
    }
}

#[test]
fn dodecahedron_vertices_and_attainment() {
    for n in 1..=2 {
        assert_eq!(dodecahedron_vertices(n).len(), 14);
        let c = TorusFibration::product(n).unwrap().tri_grading();
        assert!(check_dodecahedron(&c));
        assert!(!attained_vertices(&c).is_empty());
    }
    let mut c = TorusFibration::build(1).unwrap().tri_grading();
    c.space.set_dim(vec![2, 0, 0], 1);
    assert!(!check_dodecahedron(&c));
}

#[test]
fn equivalence_and_symplectic_hl() {
    for t in models() {
        let r = check_equivalence_abc(&t).unwrap();
        assert!(r.a && r.b && r.c, "n = {}: {r:?}", t.n());
        assert!(check_symplectic_hl(&t));
    }
}

#[test]
fn matsushita() {
    assert_eq!(matsushita_dims(&TorusFibration::build(1).unwrap()), vec![1, 1]);
    assert_eq!(matsushita_dims(&TorusFibration::build(2).unwrap()), vec![1, 2, 1]);
    assert_eq!(matsushita_dims(&TorusFibration::build(3).unwrap()), vec![1, 3, 3, 1]);
    assert_eq!(lowest_piece_ranks(&TorusFibration::build(2).unwrap()), vec![1, 2, 1]);
    for t in models() {
        assert!(check_generation(&t));
    }
}

#[test]
fn component_vanishing() {
    for t in models() {
        let rep = check_components(&t).unwrap();
        assert!(rep.all_pass(), "n = {}: {rep:?}", t.n());
    }
}

#[test]
fn weil_chain() {
    for t in models() {
        for b in 1..=t.n() {
            let beta = t.forms().base_form(b);
            let rep = weil_chain_conjugation(&t, &beta).unwrap();
            assert!(rep.all_pass(), "n = {}, b = {b}: {rep:?}", t.n());
            assert!(xi_is_tangent(&t, &beta).unwrap());
        }
        let rep = weil_chain_conjugation(&t, &t.forms().zero_form()).unwrap();
        assert!(rep.all_pass());
    }
}

#[test]
fn serre_on_the_model() {
    for t in models() {
        let (rep, refl) = serre_sl3(&t).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_json());
        assert!(refl);
        let rep4 = serre_sl4(&t).unwrap();
        assert!(rep4.all_pass(), "{}", rep4.to_json());
        assert_eq!(lowering_operators_commute(&t).unwrap(), (true, true));
    }
}

#[test]
fn shen_yin() {
    for t in models() {
        let n = t.n() as i64;
        for i in -n..=n {
            for k in -n..=n {
                for j in -2 * n..=2 * n {
                    assert_eq!(t.hypercohomology_dim(i, k, j).unwrap(), t.hypercohomology_dim(k, i, j).unwrap());
                }
            }
        }
    }
}
