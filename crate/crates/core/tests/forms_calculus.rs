use lagbgg::exact_linalg::int;
use lagbgg::forms_calculus::*;
use lagbgg::multilinear::ExtElement;
use proptest::prelude::*;

#[test]
fn sigma_is_nondegenerate() {
    for n in 1..=3 {
        let fs = FormSpace::holomorphic(n);
        let sigma = fs.sigma();
        let top = (0..n).fold(fs.one(), |acc, _| sigma.wedge(&acc));
        assert!(!top.is_zero());
        // σ^k: degree n-k -> n+k is invertible
        let op = fs.wedge_operator(&sigma);
        for k in 0..=n {
            let m = op.pow(k).block_or_zero(&[(n - k) as i64, 0], &[(n + k) as i64, 0]);
            assert!(m.is_isomorphism(), "n = {n}, k = {k}");
        }
    }
    let fs = FormSpace::new(1);
    let omega = fs.omega();
    assert!((0..3).fold(fs.one(), |acc, _| omega.wedge(&acc)).is_zero());
}

#[test]
fn sigma_wedge_one() {
    let fs = FormSpace::new(1);
    assert_eq!(wedge_class(&fs, TwoFormClass::Sigma, &fs.one()), fs.generator(1).wedge(&fs.generator(2)));
}

#[test]
fn v_of_beta_in_two_dimensions() {
    let fs = FormSpace::new(2);
    let xi = v_of_beta(&fs, &fs.base_form(2)).unwrap();
    assert_eq!(xi, ConstantVectorField::basis(2, 4, int(-1)));
    assert!(v_of_beta(&fs, &fs.zero_form()).unwrap().is_zero());
    // ξ ⌟ π*(dt_j) = 0
    for j in 1..=2 {
        assert!(contract_vf(&xi, &fs.base_form(j)).is_zero());
    }
}

#[test]
fn i_of_omega_contracts_sigma_to_omega() {
    for n in 1..=2 {
        let fs = FormSpace::new(n);
        let io = i_of(&fs, &fs.omega()).unwrap();
        assert_eq!(contract_tvalued(&fs, &io, &fs.sigma()), fs.omega());
        assert!(contract_tvalued(&fs, &TValuedForm01::zero(n), &fs.omega()).is_zero());
    }
}

#[test]
fn big_theta_in_one_dimension() {
    // hand expansion: i(ω) = -∂_2 ⊗ dz̄_1 + ∂_1 ⊗ dz̄_2, so i(ω) ⌟ ω = 2 dz̄_1 ∧ dz̄_2
    let fs = FormSpace::new(1);
    let expected = fs.generator(3).wedge(&fs.generator(4)).scale(&int(-2));
    assert_eq!(big_theta(&fs), expected);
}

#[test]
fn commutator_with_full_omega_is_nonzero() {
    let fs = FormSpace::new(1);
    let c = lefschetz_commutator(&fs, &fs.omega()).unwrap();
    assert!(!c.is_zero());
    assert!(lefschetz_commutator(&fs, &fs.pullback_lambda()).unwrap().is_zero());
}

#[test]
fn weil_formulas() {
    for n in 1..=3 {
        let rep = verify_weil_formulas(n).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
    }
    assert!(verify_weil_formulas(4).is_err());
}

#[test]
fn weil_exchanges_and_commutators_n1() {
    assert!(verify_weil_exchange_sigma(1).unwrap().all_pass());
    assert!(verify_weil_exchange_omega(1).unwrap().all_pass());
    assert!(verify_commutators(1).unwrap().all_pass());
}

#[test]
fn primitive_exchange_case() {
    // ξ ⌟ w_σ(1) = ξ ⌟ σ = π*β = w_σ(π*β ∧ 1)
    let fs = FormSpace::new(1);
    let w = lagbgg::sl2::weil_element(&sigma_action(&fs).unwrap());
    let beta = fs.base_form(1);
    let xi = v_of_beta(&fs, &beta).unwrap();
    assert_eq!(fs.apply(&w.w, &fs.one()), fs.sigma());
    assert_eq!(contract_vf(&xi, &fs.apply(&w.w, &fs.one())), beta);
    assert_eq!(fs.apply(&w.w, &beta), beta);
}

fn form_strategy(gens: usize) -> impl Strategy<Value = ExtElement> {
    proptest::collection::vec((0u32..(1 << gens), -3i64..=3), 0..8).prop_map(move |terms| {
        ExtElement::from_terms(
            gens,
            terms.into_iter().map(|(b, c)| (lagbgg::multilinear::SubsetIndex::from_bits(b), int(c))),
        )
    })
}

proptest! {
    #[test]
    fn contraction_squares_to_zero(a in form_strategy(8), c in proptest::collection::vec(-2i64..=2, 4)) {
        let x = ConstantVectorField { coeffs: c.into_iter().map(int).collect() };
        prop_assert!(contract_vf(&x, &contract_vf(&x, &a)).is_zero());
    }

    #[test]
    fn contraction_is_a_graded_derivation(a in form_strategy(8), b in form_strategy(8), j in 1usize..=4) {
        let x = ConstantVectorField::basis(2, j, int(1));
        let lhs = contract_vf(&x, &a.wedge(&b));
        // on homogeneous pieces of a: x⌟(a∧b) = (x⌟a)∧b + (−1)^{|a|} a∧(x⌟b)
        let mut rhs = ExtElement::zero(8);
        for (s, c) in a.terms() {
            let e = ExtElement::from_terms(8, [(*s, c.clone())]);
            let sign = if s.len() % 2 == 0 { 1 } else { -1 };
            rhs = rhs.add(&contract_vf(&x, &e).wedge(&b)).add(&e.wedge(&contract_vf(&x, &b)).scale(&int(sign)));
        }
        prop_assert_eq!(lhs, rhs);
    }
}
