//! Cell data for the finite quotients: weights, the cell basis
//! C(lambda, S, T) = f_lambda(S, T*), the cell chain, and checks of the
//! cellular axioms.

use crate::algebra::{Algebra, Family, Quotient};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalars::{cell_polynomial, roots_of_poly, Field, Poly, Scalar};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use std::cmp::{Ordering, Reverse};
use std::fmt;
use std::sync::Arc;

/// (t, j), (c, t, j) for the positive truncations, or (0, i) for the t = 0
/// sector of D_n[J]. Ordered by (-c, t, j).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub c: Option<usize>,
    pub t: usize,
    pub j: usize,
}

impl Weight {
    pub fn new(t: usize, j: usize) -> Weight {
        Weight { c: None, t, j }
    }
    pub fn plus(c: usize, t: usize, j: usize) -> Weight {
        Weight { c: Some(c), t, j }
    }
    fn key(&self) -> (Reverse<usize>, usize, usize) {
        (Reverse(self.c.unwrap_or(0)), self.t, self.j)
    }
}

impl Ord for Weight {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key().cmp(&o.key())
    }
}
impl PartialOrd for Weight {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.c {
            Some(c) => write!(f, "({c},{},{})", self.t, self.j),
            None => write!(f, "({},{})", self.t, self.j),
        }
    }
}

/// One layer of the cell chain: position `pos` (1-based) of a sector.
#[derive(Clone, Debug)]
pub struct Layer {
    pub weight: Weight,
    pub sector: usize,
    pub pos: usize,
    /// f_pos = prod_{i > pos} (X - rho_i)
    pub poly: Poly,
    pub root: Option<Scalar>,
    /// the whole sector, left unsplit because its modulus has no roots in the field
    pub opaque: bool,
}

pub struct CellDatum {
    pub alg: Arc<Algebra>,
    /// sorted by weight
    pub layers: Vec<Layer>,
    /// per sector: ordered root list (None when opaque)
    pub roots: Vec<Option<Vec<Scalar>>>,
    /// per sector, per position - 1: layer index
    layer_at: Vec<Vec<usize>>,
}

fn sector_list(alg: &Algebra, si: usize) -> Result<Vec<Scalar>> {
    let f = alg.field();
    let s = &alg.layout.sectors[si];
    if s.identity_only {
        return Ok(vec![f.one()]);
    }
    if let Quotient::PlusTruncation { q, .. } = &alg.spec.quotient {
        let base = Poly::xt_minus(f, s.t, q);
        let copy = flatten(roots_of_poly(f, &base)?);
        let copies = s.len() / s.t;
        return Ok((0..copies).flat_map(|_| copy.clone()).collect());
    }
    Ok(flatten(roots_of_poly(f, &s.modulus)?))
}

fn flatten(r: Vec<(Scalar, usize)>) -> Vec<Scalar> {
    r.into_iter().flat_map(|(x, m)| std::iter::repeat(x).take(m)).collect()
}

impl CellDatum {
    /// Canonical root labelling for every sector; fails if some modulus does not split.
    pub fn build(alg: Arc<Algebra>) -> Result<CellDatum> {
        let n = alg.layout.sectors.len();
        let mut lists = vec![];
        for si in 0..n {
            lists.push(Some(sector_list(&alg, si)?));
        }
        CellDatum::with_labelling(alg, lists)
    }

    /// As `build`, but sectors whose modulus does not split stay opaque.
    pub fn build_lenient(alg: Arc<Algebra>) -> Result<CellDatum> {
        let n = alg.layout.sectors.len();
        let mut lists = vec![];
        for si in 0..n {
            lists.push(match sector_list(&alg, si) {
                Ok(l) => Some(l),
                Err(Error::RootsNotInField(_)) => None,
                Err(e) => return Err(e),
            });
        }
        CellDatum::with_labelling(alg, lists)
    }

    /// Uses the given root order per sector (None = opaque). Each list must
    /// list the roots of the sector modulus with multiplicity.
    pub fn with_labelling(alg: Arc<Algebra>, lists: Vec<Option<Vec<Scalar>>>) -> Result<CellDatum> {
        let f = alg.field().clone();
        let plus_c = match &alg.spec.quotient {
            Quotient::PlusTruncation { c, .. } => Some(*c),
            _ => None,
        };
        if lists.len() != alg.layout.sectors.len() {
            return Err(Error::SizeMismatch("one root list per sector".into()));
        }
        let mut layers = vec![];
        for (si, (s, list)) in alg.layout.sectors.iter().zip(&lists).enumerate() {
            let Some(list) = list else {
                layers.push(Layer { weight: Weight::new(s.t, 0), sector: si, pos: 0, poly: Poly::one(&f), root: None, opaque: true });
                continue;
            };
            if list.len() != s.len() {
                return Err(Error::SizeMismatch(format!("sector t = {} needs {} roots", s.t, s.len())));
            }
            if !s.identity_only {
                let mut prod = Poly::one(&f);
                for r in list {
                    prod = prod.mul(&f, &Poly::linear(&f, r));
                }
                if prod != s.modulus {
                    return Err(Error::NotARoot(format!("labelling of sector t = {} does not match its modulus", s.t)));
                }
            }
            for p in 1..=list.len() {
                let weight = match plus_c {
                    Some(c) => Weight::plus(c - (p - 1) / s.t, s.t, (p - 1) % s.t + 1),
                    None => Weight::new(s.t, p),
                };
                let poly = cell_polynomial(&f, list, p)?;
                layers.push(Layer { weight, sector: si, pos: p, poly, root: Some(list[p - 1].clone()), opaque: false });
            }
        }
        layers.sort_by(|a, b| a.weight.cmp(&b.weight).then(a.pos.cmp(&b.pos)));
        let mut layer_at: Vec<Vec<usize>> = alg.layout.sectors.iter().map(|s| vec![usize::MAX; s.len().max(1)]).collect();
        for (li, l) in layers.iter().enumerate() {
            if l.opaque {
                layer_at[l.sector].iter_mut().for_each(|x| *x = li);
            } else {
                layer_at[l.sector][l.pos - 1] = li;
            }
        }
        Ok(CellDatum { alg, layers, roots: lists, layer_at })
    }

    pub fn field(&self) -> &Field {
        self.alg.field()
    }
    pub fn dim(&self) -> usize {
        self.alg.dim()
    }
    pub fn weights(&self) -> Vec<Weight> {
        self.layers.iter().map(|l| l.weight.clone()).collect()
    }
    pub fn layer_index(&self, w: &Weight) -> Result<usize> {
        self.layers.iter().position(|l| &l.weight == w && !l.opaque).ok_or_else(|| Error::WeightNotFound(format!("{w}")))
    }
    /// Number of half-diagrams indexing the layer, |M(lambda)|.
    pub fn m_size(&self, li: usize) -> usize {
        self.alg.layout.sectors[self.layers[li].sector].h()
    }
    /// Position in C-coordinates of C(lambda, S, T) (half indices).
    pub fn c_index(&self, li: usize, s: usize, t: usize) -> usize {
        let l = &self.layers[li];
        let sec = &self.alg.layout.sectors[l.sector];
        sec.idx(s, sec.star[t], l.pos.max(1) - 1)
    }
    /// (layer, S, T) of a C-coordinate.
    pub fn c_label(&self, idx: usize) -> (usize, usize, usize) {
        let (si, i1, i2, k) = self.alg.locate(idx);
        let sec = &self.alg.layout.sectors[si];
        (self.layer_at[si][k], i1, sec.star[i2])
    }

    /// C(lambda, S, T) as an algebra vector.
    pub fn c_vector(&self, li: usize, s: usize, t: usize) -> Result<Vector> {
        let l = &self.layers[li];
        if l.opaque {
            return Err(Error::RootsNotInField(format!("sector t = {} is unsplit", l.weight.t)));
        }
        let sec = &self.alg.layout.sectors[l.sector];
        self.alg.substitute(l.sector, s, sec.star[t], &l.poly)
    }

    /// Algebra coordinates -> C-coordinates.
    pub fn to_c(&self, v: &[Scalar]) -> Vector {
        let f = self.field();
        let mut out = v.to_vec();
        for (si, sec) in self.alg.layout.sectors.iter().enumerate() {
            let Some(list) = &self.roots[si] else { continue };
            let len = sec.len();
            for i1 in 0..sec.h() {
                for i2 in 0..sec.h() {
                    let base = sec.idx(i1, i2, 0);
                    let mut g: Vec<Scalar> = v[base..base + len].to_vec();
                    if g.iter().all(|x| f.is_zero(x)) {
                        continue;
                    }
                    // peel off f_1 (degree len-1) down to f_len = 1
                    for p in 1..=len {
                        let d = len - p;
                        let b = g[d].clone();
                        out[base + p - 1] = b.clone();
                        if f.is_zero(&b) {
                            continue;
                        }
                        let fp = cell_polynomial(f, list, p).unwrap();
                        for (k, c) in fp.coeffs().iter().enumerate() {
                            g[k] = f.sub(&g[k], &f.mul(&b, c));
                        }
                    }
                }
            }
        }
        out
    }

    /// C-coordinates -> algebra coordinates.
    pub fn from_c(&self, c: &[Scalar]) -> Vector {
        let f = self.field();
        let mut out = c.to_vec();
        for (si, sec) in self.alg.layout.sectors.iter().enumerate() {
            let Some(list) = &self.roots[si] else { continue };
            let len = sec.len();
            for i1 in 0..sec.h() {
                for i2 in 0..sec.h() {
                    let base = sec.idx(i1, i2, 0);
                    let mut g = vec![f.zero(); len];
                    for p in 1..=len {
                        let b = &c[base + p - 1];
                        if f.is_zero(b) {
                            continue;
                        }
                        let fp = cell_polynomial(f, list, p).unwrap();
                        for (k, x) in fp.coeffs().iter().enumerate() {
                            g[k] = f.add(&g[k], &f.mul(b, x));
                        }
                    }
                    out[base..base + len].clone_from_slice(&g);
                }
            }
        }
        out
    }

    /// Gram matrix of the layer: phi(T, U) is the coefficient of C(S, V) in
    /// C(S, T) C(U, V), with S = V the first half-diagram.
    pub fn gram(&self, li: usize) -> Result<Matrix> {
        let h = self.m_size(li);
        let f = self.field();
        let rows: Result<Vec<Vector>> = (0..h)
            .into_par_iter()
            .map(|t| {
                let a = self.c_vector(li, 0, t)?;
                let mut row = vec![];
                for u in 0..h {
                    let b = self.c_vector(li, u, 0)?;
                    let c = self.to_c(&self.alg.mul(&a, &b));
                    row.push(c[self.c_index(li, 0, 0)].clone());
                }
                Ok(row)
            })
            .collect();
        let _ = f;
        Ok(Matrix::from_rows(rows?, h))
    }

    /// The layer whose standard module is labelled (t, alpha): the last
    /// occurrence of alpha in the sector's root list.
    pub fn layer_for_root(&self, t: usize, alpha: &Scalar) -> Result<usize> {
        self.layers
            .iter()
            .enumerate()
            .filter(|(_, l)| l.weight.t == t && !l.opaque && l.root.as_ref() == Some(alpha))
            .max_by_key(|(_, l)| l.pos)
            .map(|(i, _)| i)
            .ok_or_else(|| Error::WeightNotFound(format!("no layer for root {} at t = {t}", self.field().fmt(alpha))))
    }

    /// Multiplicity of the layer's root in its sector list.
    pub fn root_multiplicity(&self, li: usize) -> usize {
        let l = &self.layers[li];
        match (&self.roots[l.sector], &l.root) {
            (Some(list), Some(r)) => list.iter().filter(|x| *x == r).count(),
            _ => 0,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = self.field();
        serde_json::json!({
            "spec": self.alg.spec.key(),
            "dimension": self.dim(),
            "weights": self.layers.iter().enumerate().map(|(li, l)| serde_json::json!({
                "weight": l.weight.to_string(),
                "root": l.root.as_ref().map(|r| f.fmt(r)),
                "m_size": self.m_size(li),
                "c_terms": l.poly.coeffs().iter().filter(|c| !f.is_zero(c)).count(),
                "opaque": l.opaque,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Result of checking the cell axioms.
#[derive(Clone, Debug, Default)]
pub struct CellReport {
    pub checked: usize,
    pub basis_rank: usize,
    pub dim: usize,
    pub failures: Vec<String>,
}

impl CellReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.basis_rank == self.dim
    }
}

/// Checks that the C-vectors form a basis, that star sends C(l,S,T) to
/// C(l,T,S), and that for every generator a:
/// a C(l,S,T) = sum_S' r_a(S',S) C(l,S',T) modulo lower layers, with the
/// coefficients r_a independent of T. `samples` = Some((k, seed)) checks k
/// random (a, l, S) triples against every T instead of all of them.
pub fn verify_cell_axiom(cd: &CellDatum, samples: Option<(usize, u64)>) -> Result<CellReport> {
    let f = cd.field();
    let alg = &cd.alg;
    let mut rep = CellReport { dim: cd.dim(), ..Default::default() };
    if cd.layers.iter().any(|l| l.opaque) {
        rep.failures.push("cell datum has unsplit sectors".into());
        return Ok(rep);
    }
    let mut all = vec![];
    for li in 0..cd.layers.len() {
        for s in 0..cd.m_size(li) {
            for t in 0..cd.m_size(li) {
                all.push(cd.c_vector(li, s, t)?);
            }
        }
    }
    rep.basis_rank = Matrix::from_rows(all, cd.dim()).rank(f);
    for li in 0..cd.layers.len() {
        for s in 0..cd.m_size(li) {
            for t in 0..cd.m_size(li) {
                let lhs = alg.star_vec(&cd.c_vector(li, s, t)?)?;
                if lhs != cd.c_vector(li, t, s)? {
                    rep.failures.push(format!("star C{}({s},{t}) != C({t},{s})", cd.layers[li].weight));
                }
            }
        }
    }
    let gens: Vec<&(String, Vector)> = alg.fd.gens.iter().collect();
    let mut jobs: Vec<(usize, usize, usize)> = vec![];
    for g in 0..gens.len() {
        for li in 0..cd.layers.len() {
            for s in 0..cd.m_size(li) {
                jobs.push((g, li, s));
            }
        }
    }
    if let Some((k, seed)) = samples {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        jobs = (0..k).map(|_| jobs[rng.gen_range(0..jobs.len())]).collect();
    }
    let results: Vec<Result<Vec<String>>> = jobs
        .par_iter()
        .map(|&(g, li, s)| {
            let mut fails = vec![];
            let h = cd.m_size(li);
            let w = &cd.layers[li].weight;
            let mut reference: Option<Vec<Scalar>> = None;
            for t in 0..h {
                let c = cd.to_c(&alg.mul(&gens[g].1, &cd.c_vector(li, s, t)?));
                let mut coeffs = vec![f.zero(); h];
                for (idx, x) in c.iter().enumerate() {
                    if f.is_zero(x) {
                        continue;
                    }
                    let (lj, s2, t2) = cd.c_label(idx);
                    match cd.layers[lj].weight.cmp(w) {
                        Ordering::Less => {}
                        Ordering::Greater => fails.push(format!("{} C{w}({s},{t}) reaches higher weight {}", gens[g].0, cd.layers[lj].weight)),
                        Ordering::Equal if lj != li => fails.push(format!("{} C{w}: equal weights in distinct layers", gens[g].0)),
                        Ordering::Equal if t2 != t => fails.push(format!("{} C{w}({s},{t}) changes the right index", gens[g].0)),
                        Ordering::Equal => coeffs[s2] = x.clone(),
                    }
                }
                match &reference {
                    None => reference = Some(coeffs),
                    Some(r) if *r != coeffs => fails.push(format!("{} C{w}({s},_): coefficients depend on T (T = {t})", gens[g].0)),
                    _ => {}
                }
            }
            Ok(fails)
        })
        .collect();
    for r in results {
        rep.failures.extend(r?);
        rep.checked += 1;
    }
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct ChainLayer {
    pub weight: Weight,
    pub root: Option<Scalar>,
    /// dimension of the ideal generated by this layer and all lower ones
    pub ideal_dim: usize,
    /// phi_lambda != 0
    pub idempotent: bool,
    /// J_lambda^2 not inside J_{<lambda}, tested on products
    pub idempotent_by_products: bool,
}

pub struct CellChain {
    pub layers: Vec<ChainLayer>,
}

impl CellChain {
    pub fn quasi_hereditary(&self) -> bool {
        self.layers.iter().all(|l| l.idempotent)
    }
    /// The two idempotency tests agree on every layer.
    pub fn consistent(&self) -> bool {
        self.layers.iter().all(|l| l.idempotent == l.idempotent_by_products)
    }
}

/// Basis of J_lambda (all layers up to and including li), in algebra coordinates.
pub fn ideal_basis(cd: &CellDatum, li: usize) -> Result<Vec<Vector>> {
    let mut out = vec![];
    for lj in 0..=li {
        for s in 0..cd.m_size(lj) {
            for t in 0..cd.m_size(lj) {
                out.push(cd.c_vector(lj, s, t)?);
            }
        }
    }
    Ok(out)
}

pub fn cell_chain(cd: &CellDatum) -> Result<CellChain> {
    let f = cd.field();
    let mut layers = vec![];
    let mut ideal_dim = 0;
    for li in 0..cd.layers.len() {
        let l = &cd.layers[li];
        if l.opaque {
            return Err(Error::RootsNotInField(format!("sector t = {} is unsplit", l.weight.t)));
        }
        let h = cd.m_size(li);
        ideal_dim += h * h;
        let idempotent = !cd.gram(li)?.is_zero(f);
        // independent test: look for a product of two layer elements with a
        // nonzero component in the layer itself
        let mut found = false;
        'outer: for s in 0..h {
            for t in 0..h {
                let a = cd.c_vector(li, s, t)?;
                for u in 0..h {
                    let c = cd.to_c(&cd.alg.mul(&a, &cd.c_vector(li, u, (s + u) % h)?));
                    if (0..h).flat_map(|x| (0..h).map(move |y| (x, y))).any(|(x, y)| !f.is_zero(&c[cd.c_index(li, x, y)])) {
                        found = true;
                        break 'outer;
                    }
                }
            }
        }
        layers.push(ChainLayer { weight: l.weight.clone(), root: l.root.clone(), ideal_dim, idempotent, idempotent_by_products: found });
    }
    Ok(CellChain { layers })
}

/// The (c, t, j) poset of the positive algebra up to c_max.
pub struct WeightPoset {
    pub n: usize,
    pub c_max: usize,
    pub weights: Vec<Weight>,
}

impl WeightPoset {
    /// All weights at or above w; finite because only c' <= c can occur.
    pub fn up_set(&self, w: &Weight) -> Vec<Weight> {
        let c0 = w.c.unwrap_or(0);
        let mut out = vec![];
        for c in 0..=c0 {
            for t in (1..=self.n).filter(|t| (self.n - t) % 2 == 0) {
                for j in 1..=t {
                    let x = Weight::plus(c, t, j);
                    if x >= *w {
                        out.push(x);
                    }
                }
            }
        }
        out.sort();
        out
    }
    pub fn minimal(&self) -> Vec<Weight> {
        self.weights.first().map(|m| self.weights.iter().filter(|w| *w == m).cloned().collect()).unwrap_or_default()
    }
}

pub fn dn_plus_weight_poset(n: usize, c_max: usize) -> WeightPoset {
    let mut weights = vec![];
    for c in 0..=c_max {
        for t in (1..=n).filter(|t| (n - t) % 2 == 0) {
            for j in 1..=t {
                weights.push(Weight::plus(c, t, j));
            }
        }
    }
    weights.sort();
    WeightPoset { n, c_max, weights }
}

/// Convenience: the family tag of an algebra's cell datum.
pub fn family_of(cd: &CellDatum) -> Family {
    cd.alg.spec.family
}
