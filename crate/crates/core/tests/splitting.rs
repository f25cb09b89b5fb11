use lagbgg::gradedcat::sample::{random_abelian_instance, random_complex, random_derived_instance};
use lagbgg::gradedcat::{split_abelian, split_derived, GradedOperator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn abelian_splittings() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let (f, g, h) = random_abelian_instance(&mut rng, 3);
        let s = split_abelian(&f, &g, &h).unwrap();
        assert_eq!(s.projection.compose(&g).compose(&s.section), GradedOperator::identity(&s.coker));
        // dim C = dim A + dim coker
        assert_eq!(f.target().total_dim(), f.source().total_dim() + s.coker.total_dim());
    }
}

#[test]
fn derived_splittings() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let (f, g, h) = random_derived_instance(&mut rng, 2);
        let s = split_derived(&f, &g, &h).unwrap();
        assert!(s.b_to_cone_d.is_quasi_iso());
        assert!(s.a_cone_to_c.is_quasi_iso());
        assert!(s.cone_model.is_quasi_iso());
    }
}

#[test]
fn random_complexes_are_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let c = random_complex(&mut rng, 4, 4);
        let d = c.differential();
        assert!(d.compose(d).is_zero());
    }
}
