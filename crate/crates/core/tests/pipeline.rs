use qdiff::expr::parse_scalar;
use qdiff::moment::TorusData;
use qdiff::reduction::{
    candidate_etas, cover_fiber_points, reduced_endomorphism_algebra, slot_with_root, weight_space,
};
use qdiff::root_of_unity::{build_irrep, commutant_dimension, generated_algebra_dimension};
use qdiff::scalars::FieldDescriptor;

#[test]
fn two_slot_rep_reduces_over_every_candidate_character() {
    let f = FieldDescriptor::cyclotomic(3).unwrap();
    let s = |t: &str| parse_scalar(t, &f).unwrap();
    let roots = vec![s("2"), s("1+zeta")];
    let slots = vec![
        slot_with_root(&s("2"), &[s("1"), s("1")], &roots[0]).unwrap(),
        slot_with_root(&s("3"), &[s("-1"), s("2")], &roots[1]).unwrap(),
    ];
    let rep = build_irrep(&slots, &f).unwrap();
    assert_eq!(rep.dim(), 9);
    assert_eq!(commutant_dimension(&rep), 1);
    assert_eq!(generated_algebra_dimension(&f, &rep.generators()).unwrap(), 81);

    let torus = TorusData::new(vec![vec![1], vec![1]]).unwrap();
    let etas = candidate_etas(&roots, &torus).unwrap();
    assert_eq!(etas.len(), 3);
    let mut total = 0;
    for eta in &etas {
        let ws = weight_space(&rep, &torus, eta).unwrap();
        assert_eq!(ws.dim(), 3);
        let cover = cover_fiber_points(&roots, &torus, eta, 1000).unwrap();
        assert_eq!(cover.points.len(), ws.dim());
        let red = reduced_endomorphism_algebra(&rep, &torus, eta).unwrap();
        assert!(red.iso_verified, "{}", red.report);
        assert_eq!(red.dimension, 9);
        total += ws.dim();
    }
    assert_eq!(total, rep.dim());
}

#[test]
fn incompatible_character_has_no_weight_vectors_and_no_cover_points() {
    let f = FieldDescriptor::cyclotomic(3).unwrap();
    let s = |t: &str| parse_scalar(t, &f).unwrap();
    let roots = vec![s("2")];
    let rep = build_irrep(&[slot_with_root(&s("2"), &[s("1"), s("1")], &roots[0]).unwrap()], &f).unwrap();
    let torus = TorusData::new(vec![vec![1]]).unwrap();
    let eta = vec![s("5")];
    assert_eq!(weight_space(&rep, &torus, &eta).unwrap().dim(), 0);
    assert!(cover_fiber_points(&roots, &torus, &eta, 1000)
        .unwrap()
        .points
        .is_empty());
    assert!(reduced_endomorphism_algebra(&rep, &torus, &eta).is_err());
}
