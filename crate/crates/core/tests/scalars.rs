use affine_tl::linalg::Matrix;
use affine_tl::scalars::*;
use affine_tl::Error;
use proptest::prelude::*;
use rand::SeedableRng;

fn fields() -> Vec<Field> {
    vec![
        Field::rationals(),
        Field::parse("Q(zeta 5)", None).unwrap(),
        Field::parse("Q(zeta 12)", Some("zeta")).unwrap(),
        Field::parse("GF(7)", None).unwrap(),
        Field::parse("GF(3^2)", None).unwrap(),
        Field::parse("GF(2^3)", Some("a")).unwrap(),
        Field::parse("Q(v)", None).unwrap(),
    ]
}

#[test]
fn field_axioms_on_random_triples() {
    for f in fields() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let trials = if matches!(f.kind(), FieldKind::RationalFunctions) { 200 } else { 1000 };
        for _ in 0..trials {
            let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
            assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)), "{}", f.label());
            assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)), "{}", f.label());
            assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)), "{}", f.label());
            if !f.is_zero(&a) {
                assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())), "{}", f.label());
            }
        }
    }
}

#[test]
fn delta_values() {
    let q = Field::rationals();
    assert_eq!(q.delta(), q.from_i64(2));
    assert!(matches!(Field::parse("GF(2)", None), Err(Error::DeltaZero)));
    let qv = Field::parse("Q(v)", None).unwrap();
    let v = qv.v();
    assert_eq!(qv.delta(), qv.add(&v, &qv.inv(&v).unwrap()));
    assert!(!qv.is_zero(&qv.delta()));
    // v = i gives delta = 0
    assert!(matches!(Field::parse("Q(zeta 4)", Some("zeta")), Err(Error::DeltaZero)));
    assert!(matches!(Field::parse("GF(4)", None), Err(Error::BadModulus(_)) | Err(Error::Parse(_))));
}

#[test]
fn roots_examples() {
    let f3 = Field::parse("GF(3)", None).unwrap();
    let rd = roots_of_xt_minus_q(&f3, 3, &f3.one()).unwrap();
    assert_eq!(rd.roots, vec![(f3.one(), 3)]);
    assert_eq!((rd.m(), rd.s()), (1, Some(3)));

    let z3 = Field::parse("Q(zeta 3)", None).unwrap();
    let rd = roots_of_xt_minus_q(&z3, 3, &z3.one()).unwrap();
    assert_eq!(rd.m(), 3);
    assert!(rd.roots.iter().all(|r| r.1 == 1));
    let z = z3.gen_zeta().unwrap();
    for r in [z3.one(), z.clone(), z3.mul(&z, &z)] {
        assert_eq!(rd.multiplicity(&r), 1);
    }

    let q = Field::rationals();
    assert!(matches!(roots_of_xt_minus_q(&q, 4, &q.one()), Err(Error::RootsNotInField(_))));
}

fn check_idempotents(f: &Field, rd: &RootData) {
    let qs = block_idempotents(f, rd);
    let m = &rd.modulus;
    let mut sum = Poly::zero();
    for (i, qi) in qs.iter().enumerate() {
        sum = sum.add(f, qi);
        for (j, qj) in qs.iter().enumerate() {
            let p = qi.mulmod(f, qj, m);
            if i == j {
                assert_eq!(p, qi.rem(f, m));
            } else {
                assert!(p.is_zero());
            }
        }
    }
    assert_eq!(sum.rem(f, m), Poly::one(f));
    // g basis: t cosets, linearly independent
    let mut rows = vec![];
    for i in 0..rd.m() {
        let g = g_basis(f, rd, i).unwrap();
        assert_eq!(g.len(), rd.roots[i].1);
        // X g^(0) = r g^(0) modulo the span of the higher g^(c)
        let lin = Poly::linear(f, &rd.roots[i].0);
        let d = lin.mulmod(f, &g[0], m);
        assert_eq!(d, if g.len() > 1 { g[1].clone() } else { Poly::zero() });
        for p in g {
            rows.push((0..rd.t()).map(|k| p.coeff(f, k)).collect());
        }
    }
    assert_eq!(rows.len(), rd.t());
    assert_eq!(Matrix::from_rows(rows, rd.t()).rank(f), rd.t());
}

#[test]
fn block_idempotents_and_g_basis() {
    let q = Field::rationals();
    let rd = roots_of_xt_minus_q(&q, 2, &q.one()).unwrap();
    assert_eq!(block_idempotents(&q, &rd).len(), 2);
    check_idempotents(&q, &rd);
    let f3 = Field::parse("GF(3)", None).unwrap();
    let rd = roots_of_xt_minus_q(&f3, 3, &f3.one()).unwrap();
    assert_eq!(block_idempotents(&f3, &rd), vec![Poly::one(&f3)]);
    let lin = Poly::linear(&f3, &f3.one());
    assert_eq!(g_basis(&f3, &rd, 0).unwrap(), vec![Poly::one(&f3), lin.clone(), lin.pow(&f3, 2)]);
    assert!(matches!(g_basis(&f3, &rd, 1), Err(Error::IndexOutOfRange(_))));
    for (field, t, q) in [("Q(zeta 12)", 6, 1), ("Q(zeta 8)", 4, -1), ("GF(5)", 4, 1), ("GF(5)", 10, 1), ("GF(3^2)", 6, 1), ("Q(zeta 3)", 3, 8)] {
        let f = Field::parse(field, None).unwrap();
        let rd = roots_of_xt_minus_q(&f, t, &f.from_i64(q)).unwrap();
        // all multiplicities equal and t = m s
        assert_eq!(rd.m() * rd.s().unwrap(), t, "{field} {t}");
        let mut prod = Poly::one(&f);
        for (r, s) in &rd.roots {
            prod = prod.mul(&f, &Poly::linear(&f, r).pow(&f, *s));
        }
        assert_eq!(prod, Poly::xt_minus(&f, t, &f.from_i64(q)));
        check_idempotents(&f, &rd);
    }
}

#[test]
fn single_root_is_one_block() {
    let q = Field::rationals();
    let rd = roots_of_xt_minus_q(&q, 1, &q.from_i64(5)).unwrap();
    assert_eq!(block_idempotents(&q, &rd), vec![Poly::one(&q)]);
    assert_eq!(g_basis(&q, &rd, 0).unwrap(), vec![Poly::one(&q)]);
}

#[test]
fn cell_polynomials() {
    let z3 = Field::parse("Q(zeta 3)", None).unwrap();
    let z = z3.gen_zeta().unwrap();
    let z2 = z3.mul(&z, &z);
    let list = vec![z3.one(), z.clone(), z2.clone()];
    assert_eq!(cell_polynomial(&z3, &list, 2).unwrap(), Poly::linear(&z3, &z2));
    assert_eq!(cell_polynomial(&z3, &list, 3).unwrap(), Poly::one(&z3));
    assert_eq!(cell_polynomial(&z3, &list, 0).unwrap(), Poly::one(&z3));
    assert_eq!(cell_polynomial(&z3, &list, 1).unwrap(), Poly::linear(&z3, &z).mul(&z3, &Poly::linear(&z3, &z2)));
    assert!(cell_polynomial(&z3, &list, 4).is_err());
}

/// Least k with t' | p^k - 1, so GF(p^k) holds the t'-th roots of unity.
fn splitting_degree(p: u64, t: u64) -> u32 {
    (1..).find(|&k| (p.pow(k) - 1) % t == 0).unwrap()
}

#[test]
fn separability_sweep() {
    for p in [2u64, 3, 5] {
        for t in 1..=6u64 {
            let mut tp = t;
            while tp % p == 0 {
                tp /= p;
            }
            // in characteristic 2, v = 1 gives delta = 0: use a larger field with v = a
            let mut k = splitting_degree(p, tp);
            let v = if p == 2 {
                k = k.max(2);
                Some("a")
            } else {
                None
            };
            let f = Field::parse(&format!("GF({p}^{k})"), v).unwrap();
            let rd = roots_of_xt_minus_q(&f, t as usize, &f.one()).unwrap();
            let s = rd.s().unwrap();
            assert_eq!(s > 1, t % p == 0, "p={p} t={t}");
            assert_eq!(rd.is_separable(), t % p != 0);
        }
    }
}

#[test]
fn json_round_trip() {
    for f in fields() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = f.random(&mut rng);
            assert_eq!(f.from_json(&f.to_json(&a)).unwrap(), a);
        }
    }
}

#[test]
fn expressions() {
    let z3 = Field::parse("Q(zeta 3)", None).unwrap();
    let a = affine_tl::scalars::expr::parse_scalar(&z3, "zeta^2 + zeta + 1").unwrap();
    assert!(z3.is_zero(&a));
    let p = affine_tl::scalars::expr::parse_poly(&z3, "X^3 - 1").unwrap();
    assert_eq!(p, Poly::xt_minus(&z3, 3, &z3.one()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gf_inverse_and_pow(a in 1i64..49, e in -6i64..6) {
        let f = Field::parse("GF(7^2)", None).unwrap();
        let x = f.from_i64(a);
        prop_assume!(!f.is_zero(&x));
        let y = f.pow(&x, e).unwrap();
        prop_assert_eq!(f.mul(&y, &f.pow(&x, -e).unwrap()), f.one());
    }

    #[test]
    fn poly_divrem(a in proptest::collection::vec(-9i64..9, 1..7), b in proptest::collection::vec(-9i64..9, 1..4)) {
        let f = Field::rationals();
        let pa = Poly::new(&f, a.iter().map(|&x| f.from_i64(x)).collect());
        let pb = Poly::new(&f, b.iter().map(|&x| f.from_i64(x)).collect());
        prop_assume!(!pb.is_zero());
        let (q, r) = pa.divrem(&f, &pb).unwrap();
        prop_assert_eq!(q.mul(&f, &pb).add(&f, &r), pa);
        prop_assert!(r.is_zero() || r.degree() < pb.degree());
    }
}
