use affine_tl::algebra::{Algebra, AlgebraSpec};
use affine_tl::cellular::*;
use affine_tl::scalars::{Field, Poly};
use std::sync::Arc;

fn datum(spec: AlgebraSpec) -> CellDatum {
    CellDatum::build(Arc::new(Algebra::with_cache(&spec, None).unwrap())).unwrap()
}

#[test]
fn jones3_weights() {
    let f = Field::parse("Q(zeta 3)", None).unwrap();
    let cd = datum(AlgebraSpec::jones(&f, 3, f.one()).unwrap());
    let w: Vec<String> = cd.weights().iter().map(|w| w.to_string()).collect();
    assert_eq!(w, ["(1,1)", "(3,1)", "(3,2)", "(3,3)"]);
    // deg f^(t,j) = t - j
    for l in &cd.layers {
        assert_eq!(l.poly.degree(), Some(l.weight.t - l.weight.j));
    }
}

#[test]
fn plus_weights_put_larger_c_first() {
    let f = Field::parse("Q(zeta 4)", None).unwrap();
    let cd = datum(AlgebraSpec::dn_plus(&f, 4, 1, f.one()).unwrap());
    let w = cd.weights();
    assert_eq!(w.len(), 12);
    assert_eq!(w[0], Weight::plus(1, 2, 1));
    assert_eq!(w[6], Weight::plus(0, 2, 1));
    assert!(w.windows(2).all(|p| p[0] < p[1]));
}

#[test]
fn c_coordinates_round_trip() {
    let f = Field::parse("GF(3)", None).unwrap();
    let cd = datum(AlgebraSpec::jones(&f, 3, f.one()).unwrap());
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
    for _ in 0..20 {
        let v: Vec<_> = (0..cd.dim()).map(|_| f.random(&mut rng)).collect();
        assert_eq!(cd.from_c(&cd.to_c(&v)), v);
    }
}

#[test]
fn cell_axioms_small_cases() {
    let z3 = Field::parse("Q(zeta 3)", None).unwrap();
    let z4 = Field::parse("Q(zeta 4)", None).unwrap();
    let q = Field::rationals();
    let cases = vec![
        AlgebraSpec::jones(&z3, 3, z3.one()).unwrap(),
        AlgebraSpec::dn_q(&z4, 4, z4.one()).unwrap(),
        AlgebraSpec::jones(&q, 4, q.one()).unwrap(),
        AlgebraSpec::gamma(&z3, 3, z3.one()).unwrap(),
        AlgebraSpec::dn_j(&z4, 4, Poly::monomial(&z4, 2)).unwrap(),
        AlgebraSpec::dn_plus(&z4, 4, 0, z4.one()).unwrap(),
        AlgebraSpec::dn_plus(&z4, 4, 1, z4.one()).unwrap(),
    ];
    for spec in cases {
        let cd = datum(spec.clone());
        let r = verify_cell_axiom(&cd, None).unwrap();
        assert!(r.passed(), "{}: {:?}", spec.key(), &r.failures[..r.failures.len().min(5)]);
    }
}

#[test]
fn sampled_cell_axioms_n5() {
    let f = Field::parse("Q(zeta 15)", None).unwrap();
    let cd = datum(AlgebraSpec::jones(&f, 5, f.one()).unwrap());
    let r = verify_cell_axiom(&cd, Some((500, 11))).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
}

#[test]
fn chain_idempotency() {
    let z3 = Field::parse("Q(zeta 3)", None).unwrap();
    let chain = cell_chain(&datum(AlgebraSpec::jones(&z3, 3, z3.one()).unwrap())).unwrap();
    assert!(chain.quasi_hereditary() && chain.consistent());
    assert_eq!(chain.layers.last().unwrap().ideal_dim, 12);

    let f3 = Field::parse("GF(3)", None).unwrap();
    let chain = cell_chain(&datum(AlgebraSpec::jones(&f3, 3, f3.one()).unwrap())).unwrap();
    assert!(!chain.quasi_hereditary() && chain.consistent());
    let nil: Vec<String> = chain.layers.iter().filter(|l| !l.idempotent).map(|l| l.weight.to_string()).collect();
    assert_eq!(nil, ["(3,1)", "(3,2)"]);
}

#[test]
fn unsplit_sector_is_rejected_or_opaque() {
    let f = Field::rationals();
    let spec = AlgebraSpec::dn_j(&f, 4, Poly::monomial(&f, 1)).unwrap();
    let a = Arc::new(Algebra::with_cache(&spec, None).unwrap());
    assert!(matches!(CellDatum::build(a.clone()), Err(affine_tl::Error::RootsNotInField(_))));
    let cd = CellDatum::build_lenient(a).unwrap();
    assert_eq!(cd.layers.iter().filter(|l| l.opaque).count(), 1);
}

#[test]
fn plus_poset() {
    let p = dn_plus_weight_poset(4, 2);
    assert_eq!(p.weights.len(), 18);
    assert!(p.minimal().iter().all(|w| w.c == Some(2)));
    let up = p.up_set(&Weight::plus(0, 2, 1));
    assert_eq!(up.len(), 6);
    assert!(up.iter().all(|w| w.c == Some(0)));
    // the up-set of a c = 1 weight is finite and includes every c = 0 weight
    assert_eq!(p.up_set(&Weight::plus(1, 4, 3)).len(), 2 + 6);
}
