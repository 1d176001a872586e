use affine_tl::diagrams::AffineDiagram;
use affine_tl::involutions::*;

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All involutions of {1..n} as 1-based partner arrays.
fn all_involutions(n: usize) -> Vec<Vec<usize>> {
    fn go(p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(i) = p.iter().position(|&x| x == 0) else {
            out.push(p.clone());
            return;
        };
        p[i] = i + 1;
        go(p, out);
        for j in i + 1..p.len() {
            if p[j] == 0 {
                p[i] = j + 1;
                p[j] = i + 1;
                go(p, out);
                p[j] = 0;
            }
        }
        p[i] = 0;
    }
    let mut out = vec![];
    go(&mut vec![0; n], &mut out);
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 1..=8 {
        let all = all_involutions(n);
        for t in (1..=n).filter(|t| (n - t) % 2 == 0) {
            let brute = all
                .iter()
                .filter(|p| (0..n).filter(|&i| p[i] == i + 1).count() == t)
                .filter(|p| is_annular(p).unwrap())
                .count();
            let listed = enumerate_annular(n, t).unwrap();
            assert_eq!(listed.len(), brute, "n={n} t={t}");
            // independent count: choose the (n - t)/2 left ends
            assert_eq!(brute, binom(n, (n - t) / 2), "n={n} t={t}");
            assert!(listed.iter().all(|s| s.t() == t && s.n() == n));
        }
    }
}

#[test]
fn examples() {
    // (1 2) with 3 fixed: through-strings may not pass an arc with fixed points on both sides
    assert!(AnnularInvolution::from_pairs(3, &[(1, 2)]).is_ok());
    assert!(AnnularInvolution::from_pairs(4, &[(1, 3)]).is_err());
    assert!(AnnularInvolution::from_pairs(4, &[(1, 3), (2, 4)]).is_err());
    assert!(AnnularInvolution::from_pairs(4, &[(1, 4)]).is_ok());
    assert!(AnnularInvolution::from_partners(&[2, 1, 4]).is_err());
    assert_eq!(AnnularInvolution::identity(4).t(), 4);
}

#[test]
fn star_is_an_involution() {
    for n in 1..=7 {
        for t in (1..=n).filter(|t| (n - t) % 2 == 0) {
            let list = enumerate_annular(n, t).unwrap();
            for s in &list {
                assert_eq!(s.star().star(), *s);
                assert!(list.contains(&s.star()));
                assert!(list.contains(&s.rotate()));
            }
        }
    }
}

#[test]
fn parity_flips_with_winding() {
    for n in 3..=6 {
        for t in (1..=n).filter(|t| (n - t) % 2 == 0) {
            let list = enumerate_annular(n, t).unwrap();
            for a in &list {
                for b in &list {
                    let r = r_offset(a, b).unwrap() as i64;
                    for w in -3..=3 {
                        let d = AffineDiagram::from_triple(a, b, w).unwrap();
                        assert_eq!(d.parity_is_even(), (w - r) % 2 == 0, "n={n} t={t} w={w}");
                    }
                }
            }
        }
    }
}
