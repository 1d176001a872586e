use affine_tl::diagrams::{enumerate_lifted, AffineDiagram, End, Generator, LiftedMatching, Triple};
use affine_tl::involutions::{enumerate_annular, AnnularInvolution};
use proptest::prelude::*;

fn g(n: usize, w: Generator) -> AffineDiagram {
    AffineDiagram::generator(n, w).unwrap()
}

fn mul(a: &AffineDiagram, b: &AffineDiagram) -> (u32, AffineDiagram) {
    AffineDiagram::compose(a, b).unwrap()
}

fn word(n: usize, letters: &[Generator]) -> (u32, AffineDiagram) {
    let mut loops = 0;
    let mut d = AffineDiagram::identity(n);
    for &l in letters {
        let (x, c) = mul(&d, &g(n, l));
        loops += x;
        d = c;
    }
    (loops, d)
}

#[test]
fn generators_are_valid() {
    for n in 3..=7 {
        let mut all = vec![Generator::Identity, Generator::U, Generator::UInverse];
        all.extend((1..=n).map(Generator::E));
        for w in all {
            let d = g(n, w);
            d.validate().unwrap();
        }
    }
    assert!(AffineDiagram::generator(4, Generator::E(5)).is_err());
    assert!(AffineDiagram::generator(2, Generator::U).is_err());
}

#[test]
fn identity_and_u_triples() {
    let e = AnnularInvolution::identity(4);
    assert_eq!(g(4, Generator::Identity).to_triple(), Triple::Through(e.clone(), e.clone(), 0));
    assert_eq!(g(4, Generator::U).to_triple(), Triple::Through(e.clone(), e.clone(), 1));
    let (_, u2) = mul(&g(4, Generator::U), &g(4, Generator::U));
    assert_eq!(u2.to_triple(), Triple::Through(e.clone(), e, 2));
}

#[test]
fn e2_for_n5() {
    let d = g(5, Generator::E(2));
    let s = AnnularInvolution::from_pairs(5, &[(2, 3)]).unwrap();
    assert_eq!(d.t(), 3);
    assert_eq!(d.to_triple(), Triple::Through(s.clone(), s, 0));
}

#[test]
fn winding_calibration() {
    for n in 3..=6 {
        assert_eq!(g(n, Generator::Identity).winding_number().unwrap(), 0);
        assert_eq!(g(n, Generator::U).winding_number().unwrap(), 1);
        assert_eq!(g(n, Generator::UInverse).winding_number().unwrap(), -1);
        let (_, un) = word(n, &vec![Generator::U; n]);
        assert_eq!(un.winding_number().unwrap(), n as i64);
    }
}

#[test]
fn relations_hold() {
    use Generator::*;
    for n in 3..=6 {
        let id = AffineDiagram::identity(n);
        for i in 1..=n {
            let ip = i % n + 1;
            assert_eq!(word(n, &[E(i), E(i)]), (1, g(n, E(i))));
            assert_eq!(word(n, &[E(i), E(ip), E(i)]), (0, g(n, E(i))));
            assert_eq!(word(n, &[E(ip), E(i), E(ip)]), (0, g(n, E(ip))));
            for j in 1..=n {
                let adjacent = j == i || j == ip || i == j % n + 1;
                if !adjacent {
                    assert_eq!(word(n, &[E(i), E(j)]), word(n, &[E(j), E(i)]));
                }
            }
            assert_eq!(word(n, &[U, E(i), UInverse]), (0, g(n, E(ip))));
        }
        assert_eq!(word(n, &[U, UInverse]), (0, id.clone()));
        assert_eq!(word(n, &[UInverse, U]), (0, id));
        let mut lhs = vec![];
        for _ in 0..n - 1 {
            lhs.extend([U, E(1)]);
        }
        let mut rhs = vec![U; n];
        rhs.extend([U, E(1)]);
        assert_eq!(word(n, &lhs), word(n, &rhs));
    }
}

#[test]
fn un_is_central() {
    use Generator::*;
    for n in 3..=6 {
        let un = vec![U; n];
        let mut gens = vec![U, UInverse];
        gens.extend((1..=n).map(E));
        for x in gens {
            let mut a = un.clone();
            a.push(x);
            let mut b = vec![x];
            b.extend(un.iter().cloned());
            assert_eq!(word(n, &a), word(n, &b));
        }
    }
}

#[test]
fn parity_examples() {
    for n in 3..=6 {
        assert!(g(n, Generator::Identity).parity_is_even());
        assert!(!g(n, Generator::U).parity_is_even());
        let (_, u2) = word(n, &[Generator::U, Generator::U]);
        assert!(u2.parity_is_even());
        for i in 1..=n {
            assert!(g(n, Generator::E(i)).parity_is_even());
            assert!(g(n, Generator::E(i)).is_tl());
        }
        assert!(!g(n, Generator::U).is_tl());
    }
}

#[test]
fn lifted_matching_counts() {
    assert_eq!(enumerate_lifted(4).unwrap().len(), 6);
    assert_eq!(enumerate_lifted(6).unwrap().len(), 20);
    assert!(enumerate_lifted(5).is_err());
    for m in enumerate_lifted(6).unwrap() {
        assert_eq!(m.star().star(), m);
        assert!(enumerate_lifted(6).unwrap().contains(&m.star()));
        assert!(enumerate_lifted(6).unwrap().contains(&m.rotate()));
    }
    assert!(LiftedMatching::new(vec![3, 4, 1, 2]).is_err());
}

#[test]
fn zero_sector_loops_and_bands() {
    // [P, Q, 0] [Q', P', 0]: gluing two matchings gives loops or bands
    let ms = enumerate_lifted(4).unwrap();
    for a in &ms {
        for b in &ms {
            let x = AffineDiagram::from_zero_triple(a, a, 0).unwrap();
            let y = AffineDiagram::from_zero_triple(b, b, 0).unwrap();
            let (loops, c) = mul(&x, &y);
            match c.to_triple() {
                Triple::Zero(p1, p2, k) => {
                    assert_eq!(&p1, a);
                    assert_eq!(&p2, b);
                    // two arcs per row: every closed component is a loop or a band
                    assert!(loops + k >= 1 && loops + k <= 2);
                }
                _ => panic!(),
            }
        }
    }
}

#[test]
fn star_examples() {
    for n in 3..=6 {
        // conjugation by i -> n+1-i sends the arc {i, i+1} to {n-i, n+1-i}
        for i in 1..=n {
            let j = if i == n { n } else { n - i };
            assert_eq!(g(n, Generator::E(i)).star(), g(n, Generator::E(j)));
        }
        let u = g(n, Generator::U);
        assert_eq!(u.star().star(), u);
    }
}

#[test]
fn ends_are_checked() {
    // crossing arcs
    let top = vec![End::Top(3), End::Top(4), End::Top(1), End::Top(2)];
    let bottom = vec![End::Bottom(2), End::Bottom(1), End::Bottom(4), End::Bottom(3)];
    assert!(AffineDiagram::from_ends(4, top, bottom, 0).is_err());
}

fn all_diagrams(n: usize, wmax: i64) -> Vec<AffineDiagram> {
    let mut out = vec![];
    let mut t = n;
    loop {
        let inv = enumerate_annular(n, t).unwrap();
        for s1 in &inv {
            for s2 in &inv {
                for w in -wmax..=wmax {
                    out.push(AffineDiagram::from_triple(s1, s2, w).unwrap());
                }
            }
        }
        if t < 3 {
            break;
        }
        t -= 2;
    }
    out
}

#[test]
fn triple_round_trip() {
    for n in 3..=5 {
        let mut t = n;
        loop {
            let inv = enumerate_annular(n, t).unwrap();
            let mut seen = std::collections::HashSet::new();
            for s1 in &inv {
                for s2 in &inv {
                    for w in -2 * (t as i64)..=2 * (t as i64) {
                        let d = AffineDiagram::from_triple(s1, s2, w).unwrap();
                        d.validate().unwrap();
                        assert_eq!(d.to_triple(), Triple::Through(s1.clone(), s2.clone(), w));
                        assert!(seen.insert(d));
                    }
                }
            }
            if t < 3 {
                break;
            }
            t -= 2;
        }
    }
}

#[test]
fn star_on_triples() {
    for n in 3..=5 {
        for d in all_diagrams(n, 3) {
            match d.to_triple() {
                Triple::Through(s1, s2, w) => {
                    assert_eq!(d.star().to_triple(), Triple::Through(s2.star(), s1.star(), w));
                }
                _ => unreachable!(),
            }
        }
    }
}

#[test]
fn parity_is_constant_and_flips_with_w() {
    for n in 3..=6 {
        for d in all_diagrams(n, 3) {
            let c0 = d.crossings_at(0) % 2;
            for i in 1..=n as i64 {
                assert_eq!(d.crossings_at(i) % 2, c0);
            }
            if let Triple::Through(s1, s2, w) = d.to_triple() {
                let e = AffineDiagram::from_triple(&s1, &s2, w + 1).unwrap();
                assert_ne!(e.parity_is_even(), d.parity_is_even());
            }
            let (_, ud) = mul(&g(n, Generator::U), &d);
            assert_ne!(ud.parity_is_even(), d.parity_is_even());
        }
    }
}

fn gen_word(n: usize) -> impl Strategy<Value = Vec<Generator>> {
    let letter = (0..n + 2).prop_map(move |k| match k {
        0 => Generator::U,
        1 => Generator::UInverse,
        k => Generator::E(k - 1),
    });
    prop::collection::vec(letter, 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn associativity(n in 3usize..=5, a in gen_word(5), b in gen_word(5), c in gen_word(5)) {
        let fix = |w: Vec<Generator>| -> Vec<Generator> { w.into_iter().map(|l| match l { Generator::E(i) => Generator::E((i - 1) % n + 1), x => x }).collect() };
        let (_, da) = word(n, &fix(a));
        let (_, db) = word(n, &fix(b));
        let (_, dc) = word(n, &fix(c));
        let (x1, ab) = mul(&da, &db);
        let (x2, ab_c) = mul(&ab, &dc);
        let (y1, bc) = mul(&db, &dc);
        let (y2, a_bc) = mul(&da, &bc);
        prop_assert_eq!(&ab_c, &a_bc);
        prop_assert_eq!(x1 + x2, y1 + y2);
    }

    #[test]
    fn words_round_trip(n in 3usize..=6, w in gen_word(6)) {
        let w: Vec<Generator> = w.into_iter().map(|l| match l { Generator::E(i) => Generator::E((i - 1) % n + 1), x => x }).collect();
        let (_, d) = word(n, &w);
        d.validate().unwrap();
        prop_assert_eq!(AffineDiagram::from_any_triple(&d.to_triple()).unwrap(), d.clone());
        prop_assert_eq!(AffineDiagram::from_json(&d.to_json()).unwrap(), d.clone());
        prop_assert_eq!(d.star().star(), d.clone());
    }

    #[test]
    fn star_reverses_products(n in 3usize..=5, a in gen_word(5), b in gen_word(5)) {
        let fix = |w: Vec<Generator>| -> Vec<Generator> { w.into_iter().map(|l| match l { Generator::E(i) => Generator::E((i - 1) % n + 1), x => x }).collect() };
        let (_, da) = word(n, &fix(a));
        let (_, db) = word(n, &fix(b));
        let (x, ab) = mul(&da, &db);
        let (y, ba) = mul(&db.star(), &da.star());
        prop_assert_eq!(x, y);
        prop_assert_eq!(ab.star(), ba);
    }

    #[test]
    fn parity_adds(n in 3usize..=5, a in gen_word(5), b in gen_word(5)) {
        let fix = |w: Vec<Generator>| -> Vec<Generator> { w.into_iter().map(|l| match l { Generator::E(i) => Generator::E((i - 1) % n + 1), x => x }).collect() };
        let (_, da) = word(n, &fix(a));
        let (_, db) = word(n, &fix(b));
        let (_, ab) = mul(&da, &db);
        prop_assert_eq!(ab.parity_is_even(), da.parity_is_even() == db.parity_is_even());
    }
}
