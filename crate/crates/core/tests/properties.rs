use affine_tl::algebra::*;
use affine_tl::cellular::CellDatum;
use affine_tl::diagrams::{enumerate_lifted, AffineDiagram, Generator};
use affine_tl::homext::{ext_table, hom_space, standard_layers};
use affine_tl::linalg::Subspace;
use affine_tl::repmod::*;
use affine_tl::scalars::{Field, Poly, Scalar};
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};

fn gen_word(n: usize) -> impl Strategy<Value = Vec<Generator>> {
    proptest::collection::vec(
        prop_oneof![Just(Generator::U), Just(Generator::UInverse), (1..=n).prop_map(Generator::E)],
        0..7,
    )
}

fn word(n: usize, w: &[Generator]) -> AffineDiagram {
    w.iter().fold(AffineDiagram::identity(n), |d, &g| {
        let g = match g {
            Generator::E(i) => Generator::E((i - 1) % n + 1),
            g => g,
        };
        AffineDiagram::compose(&d, &AffineDiagram::generator(n, g).unwrap()).unwrap().1
    })
}

fn jones3() -> &'static Algebra {
    static A: OnceLock<Algebra> = OnceLock::new();
    A.get_or_init(|| {
        let f = Field::parse("GF(5)", None).unwrap();
        Algebra::with_cache(&AlgebraSpec::jones(&f, 3, f.from_i64(2)).unwrap(), None).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normalize_is_idempotent_and_matches_table(a in gen_word(3), b in gen_word(3), c1 in 1i64..5, c2 in 1i64..5) {
        let alg = jones3();
        let f = alg.field();
        let spec = &alg.spec;
        let raw = vec![(f.from_i64(c1), word(3, &a)), (f.from_i64(c2), word(3, &b))];
        let x = normalize(spec, &raw).unwrap();
        let back: Vec<(Scalar, AffineDiagram)> = x.terms.iter().map(|(d, s)| (s.clone(), d.clone())).collect();
        prop_assert_eq!(normalize(spec, &back).unwrap(), x.clone());
        let y = normalize(spec, &[(f.one(), word(3, &b))]).unwrap();
        let direct = alg.from_element(&multiply(&x, &y).unwrap()).unwrap();
        prop_assert_eq!(direct, alg.mul(&alg.from_element(&x).unwrap(), &alg.from_element(&y).unwrap()));
    }

    #[test]
    fn through_strings_form_ideals(n in 3usize..=6, a in gen_word(6), b in gen_word(6)) {
        let (x, y) = (word(n, &a), word(n, &b));
        let (_, p) = AffineDiagram::compose(&x, &y).unwrap();
        prop_assert!(p.t() <= x.t().min(y.t()));
    }

    #[test]
    fn star_reverses_products_in_the_algebra(i in 0usize..12, j in 0usize..12) {
        let alg = jones3();
        let (x, y) = (alg.fd.unit_vector(i), alg.fd.unit_vector(j));
        prop_assert_eq!(alg.star_vec(&alg.mul(&x, &y)).unwrap(), alg.mul(&alg.star_vec(&y).unwrap(), &alg.star_vec(&x).unwrap()));
    }
}

#[test]
fn zero_sector_dies_in_omega_q_for_q_not_one() {
    let f = Field::rationals();
    let spec = AlgebraSpec::new(4, Family::Dn, Quotient::ModOmega(f.from_i64(2)), &f).unwrap();
    let lifted = enumerate_lifted(4).unwrap();
    for p1 in &lifted {
        for p2 in &lifted {
            let d = AffineDiagram::from_zero_triple(p1, p2, 1).unwrap();
            assert!(normalize(&spec, &[(f.one(), d)]).unwrap().is_zero());
        }
    }
}

#[test]
fn oriented_and_jones_dimensions() {
    let f = Field::parse("Q(v)", None).unwrap();
    for n in [3, 5] {
        let q = f.from_i64(3);
        let j = AlgebraSpec::jones(&f, n, q.clone()).unwrap().layout().unwrap().dim;
        let o = AlgebraSpec::on_q(&f, n, q.clone()).unwrap().layout().unwrap().dim;
        assert_eq!(j, o, "n={n}");
        // the top layer I_n / I_{n-2} of J_q(n) is replaced by the identity
        let g = AlgebraSpec::gamma(&f, n, q).unwrap().layout().unwrap().dim;
        assert_eq!(g, j - n + 1, "n={n}");
    }
}

fn data() -> Vec<CellDatum> {
    let z3 = Field::parse("Q(zeta 3)", None).unwrap();
    let f3 = Field::parse("GF(3)", None).unwrap();
    let z4 = Field::parse("Q(zeta 4)", None).unwrap();
    let z5 = Field::parse("Q(zeta 15)", None).unwrap();
    [
        AlgebraSpec::jones(&z3, 3, z3.one()).unwrap(),
        AlgebraSpec::jones(&f3, 3, f3.one()).unwrap(),
        AlgebraSpec::gamma(&z3, 3, z3.one()).unwrap(),
        AlgebraSpec::dn_q(&z4, 4, z4.one()).unwrap(),
        AlgebraSpec::jones(&z5, 5, z5.one()).unwrap(),
    ]
    .iter()
    .map(|s| CellDatum::build(Arc::new(Algebra::with_cache(s, None).unwrap())).unwrap())
    .collect()
}

#[test]
fn star_fixes_the_cell_basis() {
    for cd in data() {
        for li in 0..cd.layers.len() {
            let h = cd.m_size(li);
            for s in 0..h {
                for t in 0..h {
                    let c = cd.c_vector(li, s, t).unwrap();
                    assert_eq!(cd.alg.star_vec(&c).unwrap(), cd.c_vector(li, t, s).unwrap(), "{}", cd.alg.spec.key());
                }
            }
        }
    }
}

#[test]
fn standard_modules_and_gram_forms() {
    for cd in data() {
        let f = cd.field().clone();
        let n = cd.alg.n();
        for li in 0..cd.layers.len() {
            let w = standard_module_at(&cd, li, 0).unwrap().module;
            assert!(w.check_relations(n).is_empty());
            let g = gram_matrix(&cd, li).unwrap();
            assert_eq!(g.matrix, g.matrix.transpose(), "{}", cd.alg.spec.key());
            // the radical is invariant
            let rad = g.matrix.nullspace(&f);
            let s = Subspace::span(&f, w.dim, rad.clone());
            for m in &w.gens {
                for v in &rad {
                    assert!(s.contains(&f, &m.mul_vec(&f, v)));
                }
            }
        }
        // Hom(W(i), W(k)) = 0 for i < k among pairwise distinct standard modules
        let layers = standard_layers(&cd);
        let mods: Vec<Module> = layers.iter().map(|&li| standard_module_at(&cd, li, 0).unwrap().module).collect();
        for a in 0..mods.len() {
            for b in a + 1..mods.len() {
                assert_eq!(hom_space(&mods[a], &mods[b]).unwrap().dim(), 0, "{}", cd.alg.spec.key());
            }
        }
    }
}

#[test]
fn relabelling_keeps_the_standard_modules() {
    let z3 = Field::parse("Q(zeta 3)", None).unwrap();
    let alg = Arc::new(Algebra::with_cache(&AlgebraSpec::jones(&z3, 3, z3.one()).unwrap(), None).unwrap());
    let a = CellDatum::build(alg.clone()).unwrap();
    let lists: Vec<Option<Vec<Scalar>>> = a.roots.iter().map(|l| l.as_ref().map(|v| v.iter().rev().cloned().collect())).collect();
    let b = CellDatum::with_labelling(alg, lists).unwrap();
    for la in standard_layers(&a) {
        let l = &a.layers[la];
        let wa = standard_module_at(&a, la, 0).unwrap().module;
        let wb = standard_module_for_root(&b, l.weight.t, l.root.as_ref().unwrap()).unwrap().module;
        assert!(affine_tl::homext::find_isomorphism(&wa, &wb, 1).unwrap().is_some());
        assert_eq!(gram_matrix(&a, la).unwrap().rank, gram_matrix(&b, b.layer_for_root(l.weight.t, l.root.as_ref().unwrap()).unwrap()).unwrap().rank);
    }
}

#[test]
fn filtrations_and_local_endomorphisms() {
    let f3 = Field::parse("GF(3)", None).unwrap();
    let alg = Algebra::with_cache(&AlgebraSpec::jones(&f3, 3, f3.one()).unwrap(), None).unwrap();
    let pd = primary_decomposition(&alg, 3, 0).unwrap();
    for fm in &pd.summands {
        assert!(fm.chain_is_invariant());
        let top = fm.layer(0).unwrap();
        for (d, w) in fm.witnesses.iter().enumerate() {
            let l = fm.layer(d).unwrap();
            assert_eq!(w.rank(&f3), top.dim);
            for (gl, gt) in l.gens.iter().zip(&top.gens) {
                assert_eq!(gt.mul(&f3, w), w.mul(&f3, gl));
            }
        }
        // End(Q) = K[X]/(X - r)^s: dimension s and no idempotent besides 0 and 1
        let s = fm.chain.len() - 1;
        let end = hom_space(&fm.module, &fm.module).unwrap();
        assert_eq!(end.dim(), s);
        for e in &end.basis {
            let sq = e.mul(&f3, e);
            if sq == *e {
                assert!(e.rank(&f3) == 0 || e.rank(&f3) == fm.module.dim);
            }
        }
        let b = block_decompose(&fm.module, 3).unwrap();
        assert_eq!(b.iter().map(|x| x.basis.len()).sum::<usize>(), fm.module.dim);
    }
}

#[test]
fn methods_agree_on_more_algebras() {
    let f3 = Field::parse("GF(3)", None).unwrap();
    for spec in [AlgebraSpec::gamma(&f3, 3, f3.one()).unwrap(), AlgebraSpec::dn_j(&f3, 4, Poly::linear(&f3, &f3.one()).pow(&f3, 2)).unwrap()] {
        let cd = CellDatum::build_lenient(Arc::new(Algebra::with_cache(&spec, None).unwrap())).unwrap();
        for r in ext_table(&cd).unwrap() {
            assert!(r.agree() && r.witness_ok, "{}: {} {} {:?} {}", spec.key(), r.lambda, r.mu, r.standard, r.cocycle);
        }
    }
}
