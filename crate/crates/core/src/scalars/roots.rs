use super::ring::{self, QQ};
use super::{rational_roots, Field, Poly, Scalar};
use crate::error::{Error, Result};

/// A monic polynomial that splits over the field, with its distinct roots in
/// the canonical order and their multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootData {
    pub modulus: Poly,
    pub roots: Vec<(Scalar, usize)>,
    /// set when the modulus is X^t - q
    pub q: Option<Scalar>,
}

impl RootData {
    pub fn of_poly(f: &Field, p: &Poly) -> Result<RootData> {
        let lc = p.coeffs().last().ok_or(Error::BadModulus("zero polynomial".into()))?;
        let p = p.scale(f, &f.inv(lc)?);
        let roots = roots_of_poly(f, &p)?;
        Ok(RootData { modulus: p, roots, q: None })
    }

    pub fn t(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }
    pub fn m(&self) -> usize {
        self.roots.len()
    }
    /// Common multiplicity, if all roots share one.
    pub fn s(&self) -> Option<usize> {
        let s = self.roots.first()?.1;
        self.roots.iter().all(|r| r.1 == s).then_some(s)
    }
    pub fn multiplicity(&self, r: &Scalar) -> usize {
        self.roots.iter().find(|x| &x.0 == r).map(|x| x.1).unwrap_or(0)
    }
    pub fn index_of(&self, r: &Scalar) -> Option<usize> {
        self.roots.iter().position(|x| &x.0 == r)
    }
    /// Roots with multiplicity, each root's copies consecutive.
    pub fn ordered_roots(&self) -> Vec<Scalar> {
        let mut out = vec![];
        for (r, s) in &self.roots {
            for _ in 0..*s {
                out.push(r.clone());
            }
        }
        out
    }
    pub fn is_separable(&self) -> bool {
        self.roots.iter().all(|r| r.1 == 1)
    }
}

fn candidates(f: &Field, p: &Poly) -> Vec<Scalar> {
    if let Some(all) = f.elements() {
        return all;
    }
    let mut out = vec![f.zero()];
    let bound = 2 * p.coeffs().iter().map(|c| f.v_degree(c)).max().unwrap_or(0) + 1;
    for mu in f.root_units(bound) {
        let comps = f.rational_components(p.rescale(f, &mu).coeffs());
        let mut g: Vec<num_rational::BigRational> = vec![];
        for c in &comps {
            g = ring::gcd(&QQ, &g, c);
        }
        for c in rational_roots(&g) {
            if let Ok(c) = f.from_rational(&c) {
                out.push(f.mul(&mu, &c));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Distinct roots with multiplicities; fails unless the polynomial splits.
pub fn roots_of_poly(f: &Field, p: &Poly) -> Result<Vec<(Scalar, usize)>> {
    let deg = p.degree().ok_or(Error::BadModulus("zero polynomial".into()))?;
    let mut out = vec![];
    let mut total = 0;
    for r in candidates(f, p) {
        let lin = Poly::linear(f, &r);
        let mut rest = p.clone();
        let mut mult = 0;
        loop {
            let (q, rem) = rest.divrem(f, &lin)?;
            if !rem.is_zero() || rest.degree() == Some(0) {
                break;
            }
            mult += 1;
            rest = q;
        }
        if mult > 0 {
            total += mult;
            out.push((r, mult));
        }
    }
    if total != deg {
        return Err(Error::RootsNotInField(format!("{} over {}", p.to_string_in(f, "X"), f.label())));
    }
    Ok(out)
}

pub fn roots_of_xt_minus_q(f: &Field, t: usize, q: &Scalar) -> Result<RootData> {
    if t == 0 {
        return Err(Error::IndexOutOfRange("t must be positive".into()));
    }
    let modulus = Poly::xt_minus(f, t, q);
    let roots = roots_of_poly(f, &modulus)?;
    Ok(RootData { modulus, roots, q: Some(q.clone()) })
}

/// q_i = prod_{j != i} (X - r_j)^{s_j} * d_i, reduced modulo the modulus.
pub fn block_idempotents(f: &Field, rd: &RootData) -> Vec<Poly> {
    let g = &rd.modulus;
    rd.roots
        .iter()
        .enumerate()
        .map(|(i, (ri, si))| {
            let mut others = Poly::one(f);
            for (j, (rj, sj)) in rd.roots.iter().enumerate() {
                if j != i {
                    others = others.mul(f, &Poly::linear(f, rj).pow(f, *sj));
                }
            }
            let local = Poly::linear(f, ri).pow(f, *si);
            let (one, d, _) = others.ext_gcd(f, &local);
            debug_assert_eq!(one, Poly::one(f));
            others.mul(f, &d).rem(f, g)
        })
        .collect()
}

/// g_i^{(c)} = (X - r_i)^c q_i for c < s_i (root index i is 0-based).
pub fn g_basis(f: &Field, rd: &RootData, i: usize) -> Result<Vec<Poly>> {
    let (ri, si) = rd.roots.get(i).ok_or_else(|| Error::IndexOutOfRange(format!("root index {i}")))?;
    let qi = block_idempotents(f, rd).swap_remove(i);
    let lin = Poly::linear(f, ri);
    let mut out = vec![];
    let mut cur = qi;
    for _ in 0..*si {
        out.push(cur.clone());
        cur = cur.mulmod(f, &lin, &rd.modulus);
    }
    Ok(out)
}

/// prod_{i > j} (X - rho_i) for the ordered root list rho_1..rho_t, with the
/// convention f^(t,0) = 1.
pub fn cell_polynomial(f: &Field, list: &[Scalar], j: usize) -> Result<Poly> {
    if j > list.len() {
        return Err(Error::IndexOutOfRange(format!("j = {j} > {}", list.len())));
    }
    if j == 0 {
        return Ok(Poly::one(f));
    }
    let mut out = Poly::one(f);
    for r in &list[j..] {
        out = out.mul(f, &Poly::linear(f, r));
    }
    Ok(out)
}
