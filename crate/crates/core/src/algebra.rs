//! Linear combinations of diagrams, the finite quotients of D_n, and their
//! structure constants.
//!
//! Every quotient handled here has the same shape: the diagrams with t
//! through-strings and fixed halves (S1, S2) form a copy of K[X^{+-1}] via
//! X^k -> [S1, S2, offset + step*k], and the quotient reduces that copy modulo
//! a polynomial. A sector may also be dropped entirely.

use crate::diagrams::{enumerate_lifted, AffineDiagram, Generator, LiftedMatching, Triple};
use crate::error::{Error, Result};
use crate::involutions::{enumerate_annular, r_offset, AnnularInvolution};
use crate::linalg::{axpy, Echelon, Matrix, Vector};
use crate::scalars::{Field, Poly, Scalar};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

pub const CACHE_ENV: &str = "AFFINE_TL_CACHE_DIR";
const CACHE_VERSION: &str = "atl-structure-constants-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Dn,
    Tl,
    On,
    DnPlus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quotient {
    None,
    ModOmega(Scalar),
    ModOmegaPlusI0(Scalar),
    /// D_n / (omega(1) + U_J) with J = (f)
    ModOmega1PlusUJ(Poly),
    PlusTruncation { c: usize, q: Scalar },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub n: usize,
    pub family: Family,
    pub quotient: Quotient,
    pub field: Field,
}

/// A half-diagram: an annular involution (t > 0) or a lifted matching (t = 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Half {
    Inv(AnnularInvolution),
    Lift(LiftedMatching),
}

impl Half {
    pub fn star(&self) -> Half {
        match self {
            Half::Inv(s) => Half::Inv(s.star()),
            Half::Lift(p) => Half::Lift(p.star()),
        }
    }
    /// S^u: i -> S(i-1)+1.
    pub fn rotate(&self) -> Half {
        match self {
            Half::Inv(s) => Half::Inv(s.rotate()),
            Half::Lift(p) => Half::Lift(p.rotate()),
        }
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Half::Inv(s) => write!(f, "{s}"),
            Half::Lift(p) => write!(f, "{p}"),
        }
    }
}

/// The diagram [h1, h2, w] (w counts bands when t = 0).
pub fn diagram_of(h1: &Half, h2: &Half, w: i64) -> Result<AffineDiagram> {
    match (h1, h2) {
        (Half::Inv(a), Half::Inv(b)) => AffineDiagram::from_triple(a, b, w),
        (Half::Lift(a), Half::Lift(b)) => {
            if w < 0 {
                return Err(Error::IndexOutOfRange(format!("negative band count {w}")));
            }
            AffineDiagram::from_zero_triple(a, b, w as u32)
        }
        _ => Err(Error::MismatchedT(1, 0)),
    }
}

/// Splits a diagram into (t, top half, bottom half, winding or band count).
pub fn halves_of(d: &AffineDiagram) -> (usize, Half, Half, i64) {
    match d.to_triple() {
        Triple::Through(a, b, w) => (a.t(), Half::Inv(a), Half::Inv(b), w),
        Triple::Zero(a, b, k) => (0, Half::Lift(a), Half::Lift(b), k as i64),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Offset {
    Zero,
    /// r(S1, S2)
    Parity,
    /// n*t, the first positive winding
    Positive,
}

/// One through-string sector of a quotient.
#[derive(Clone, Debug)]
pub struct Sector {
    pub t: usize,
    pub modulus: Poly,
    pub step: i64,
    pub offset: Offset,
    /// only the identity survives (the top sector of the Temperley-Lieb quotient)
    pub identity_only: bool,
    pub halves: Vec<Half>,
    pub star: Vec<usize>,
    index: HashMap<Half, usize>,
    offsets: Vec<i64>,
    pub base: usize,
}

impl Sector {
    fn new(n: usize, t: usize, modulus: Poly, step: i64, offset: Offset) -> Result<Sector> {
        let halves: Vec<Half> = if t == 0 {
            enumerate_lifted(n)?.into_iter().map(Half::Lift).collect()
        } else {
            enumerate_annular(n, t)?.into_iter().map(Half::Inv).collect()
        };
        let index: HashMap<Half, usize> = halves.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect();
        let star = halves.iter().map(|h| index[&h.star()]).collect();
        let h = halves.len();
        let mut offsets = vec![0; h * h];
        for i in 0..h {
            for j in 0..h {
                offsets[i * h + j] = match (offset, &halves[i], &halves[j]) {
                    (Offset::Zero, _, _) => 0,
                    (Offset::Positive, _, _) => (n * t) as i64,
                    (Offset::Parity, Half::Inv(a), Half::Inv(b)) => r_offset(a, b)? as i64,
                    (Offset::Parity, _, _) => 0,
                };
            }
        }
        Ok(Sector { t, modulus, step, offset, identity_only: false, halves, star, index, offsets, base: 0 })
    }

    pub fn h(&self) -> usize {
        self.halves.len()
    }
    /// Window length: the degree of the modulus.
    pub fn len(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn size(&self) -> usize {
        self.h() * self.h() * self.len()
    }
    pub fn index_of(&self, h: &Half) -> Option<usize> {
        self.index.get(h).copied()
    }
    pub fn offset(&self, i1: usize, i2: usize) -> i64 {
        self.offsets[i1 * self.h() + i2]
    }
    /// Global basis index of (i1, i2, k).
    pub fn idx(&self, i1: usize, i2: usize, k: usize) -> usize {
        self.base + (i1 * self.h() + i2) * self.len() + k
    }
    /// The winding (or band count) carried by window position k.
    pub fn w_of(&self, i1: usize, i2: usize, k: usize) -> i64 {
        self.offset(i1, i2) + self.step * k as i64
    }
    pub fn diagram(&self, i1: usize, i2: usize, k: usize) -> Result<AffineDiagram> {
        diagram_of(&self.halves[i1], &self.halves[i2], self.w_of(i1, i2, k))
    }

    /// Position of [h1, h2, w] on the X-axis of its block.
    fn exponent(&self, i1: usize, i2: usize, w: i64) -> Result<i64> {
        let d = w - self.offset(i1, i2);
        if d.rem_euclid(self.step) != 0 {
            return Err(Error::ParityViolation(format!("winding {w} is off the window of sector t = {}", self.t)));
        }
        Ok(d / self.step)
    }

    /// Coefficients of X^k reduced modulo the sector polynomial.
    fn reduce_power(&self, f: &Field, k: i64) -> Result<Vec<Scalar>> {
        if self.identity_only {
            if k != 0 {
                return Err(Error::SpecMismatch(format!("t = {} sector holds only the identity", self.t)));
            }
            return Ok(vec![f.one()]);
        }
        let p = Poly::x_pow_mod(f, k, &self.modulus)?;
        let mut c = p.coeffs().to_vec();
        c.resize(self.len(), f.zero());
        Ok(c)
    }
}

/// What happens to the t = 0 diagrams.
#[derive(Clone, Debug)]
pub enum ZeroRule {
    Killed,
    /// kept as they are (infinite dimensional)
    Free,
    /// reduced modulo f via X^k -> [P1, P2, k]
    Reduce,
}

#[derive(Clone, Debug)]
pub struct Layout {
    pub sectors: Vec<Sector>,
    pub zero: ZeroRule,
    /// sector index by t
    by_t: HashMap<usize, usize>,
    pub finite: bool,
    pub dim: usize,
}

impl Layout {
    pub fn sector_for(&self, t: usize) -> Option<&Sector> {
        self.by_t.get(&t).map(|&i| &self.sectors[i])
    }
    pub fn sector_index(&self, t: usize) -> Option<usize> {
        self.by_t.get(&t).copied()
    }
}

fn sector_ts(n: usize) -> Vec<usize> {
    (1..=n).filter(|t| (n - t) % 2 == 0).collect()
}

impl AlgebraSpec {
    pub fn new(n: usize, family: Family, quotient: Quotient, field: &Field) -> Result<AlgebraSpec> {
        let spec = AlgebraSpec { n, family, quotient, field: field.clone() };
        spec.validate()?;
        Ok(spec)
    }

    /// D_n with no quotient.
    pub fn dn(field: &Field, n: usize) -> Result<AlgebraSpec> {
        AlgebraSpec::new(n, Family::Dn, Quotient::None, field)
    }
    /// D_n(q): D_n/omega(q) for n odd, D_n/(omega(q) + I_0) for n even.
    pub fn dn_q(field: &Field, n: usize, q: Scalar) -> Result<AlgebraSpec> {
        let quot = if n % 2 == 1 { Quotient::ModOmega(q) } else { Quotient::ModOmegaPlusI0(q) };
        AlgebraSpec::new(n, Family::Dn, quot, field)
    }
    /// The q-Jones algebra J_q(n): D_n(q) for n odd, the oriented quotient for n even.
    pub fn jones(field: &Field, n: usize, q: Scalar) -> Result<AlgebraSpec> {
        if n % 2 == 1 {
            AlgebraSpec::dn_q(field, n, q)
        } else {
            AlgebraSpec::new(n, Family::On, Quotient::ModOmegaPlusI0(q), field)
        }
    }
    /// O_n(q) = O_n/(omega(q) cap O_n), n odd.
    pub fn on_q(field: &Field, n: usize, q: Scalar) -> Result<AlgebraSpec> {
        AlgebraSpec::new(n, Family::On, Quotient::ModOmega(q), field)
    }
    /// Gamma_n(q), the image of the affine Temperley-Lieb algebra in J_q(n).
    pub fn gamma(field: &Field, n: usize, q: Scalar) -> Result<AlgebraSpec> {
        let quot = if n % 2 == 1 { Quotient::ModOmega(q) } else { Quotient::ModOmegaPlusI0(q) };
        AlgebraSpec::new(n, Family::Tl, quot, field)
    }
    /// D_n[J] for J = (f).
    pub fn dn_j(field: &Field, n: usize, f: Poly) -> Result<AlgebraSpec> {
        AlgebraSpec::new(n, Family::Dn, Quotient::ModOmega1PlusUJ(f), field)
    }
    /// D_n^+ / I_n^+(c).
    pub fn dn_plus(field: &Field, n: usize, c: usize, q: Scalar) -> Result<AlgebraSpec> {
        AlgebraSpec::new(n, Family::DnPlus, Quotient::PlusTruncation { c, q }, field)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 3 {
            return Err(Error::BadIndex(format!("n = {n} < 3")));
        }
        let f = &self.field;
        let even = n % 2 == 0;
        let bad = |m: &str| Err(Error::SpecMismatch(m.to_string()));
        match (&self.family, &self.quotient) {
            (Family::DnPlus, Quotient::PlusTruncation { q, .. }) => {
                if f.is_zero(q) {
                    return bad("q must be invertible");
                }
            }
            (Family::DnPlus, _) | (_, Quotient::PlusTruncation { .. }) => {
                return bad("the positive truncation needs the D_n^+ family");
            }
            (_, Quotient::None) => {}
            (Family::Dn, Quotient::ModOmega(q)) => {
                if f.is_zero(q) {
                    return bad("q must be invertible");
                }
            }
            (Family::Dn, Quotient::ModOmegaPlusI0(q)) | (Family::On, Quotient::ModOmegaPlusI0(q)) | (Family::Tl, Quotient::ModOmegaPlusI0(q)) => {
                if !even {
                    return bad("omega(q) + I_0 is used for even n");
                }
                if f.is_zero(q) {
                    return bad("q must be invertible");
                }
            }
            (Family::On, Quotient::ModOmega(q)) | (Family::Tl, Quotient::ModOmega(q)) => {
                if even {
                    return bad("omega(q) alone is used for odd n in this family");
                }
                if f.is_zero(q) {
                    return bad("q must be invertible");
                }
            }
            (Family::Dn, Quotient::ModOmega1PlusUJ(p)) => {
                if !even {
                    return Err(Error::OddN);
                }
                if p.degree().unwrap_or(0) == 0 {
                    return bad("f must be nonconstant");
                }
            }
            (_, Quotient::ModOmega1PlusUJ(_)) => return bad("U_J quotients are built over D_n"),
        }
        Ok(())
    }

    /// The monic generator of J for D_n[J].
    fn monic_f(&self) -> Option<Poly> {
        match &self.quotient {
            Quotient::ModOmega1PlusUJ(p) => {
                let lc = p.coeffs().last().unwrap().clone();
                Some(p.scale(&self.field, &self.field.inv(&lc).unwrap()))
            }
            _ => None,
        }
    }

    pub fn layout(&self) -> Result<Layout> {
        let f = &self.field;
        let n = self.n;
        let mut sectors = vec![];
        let mut zero = ZeroRule::Killed;
        let mut finite = true;
        let xt = |t: usize, q: &Scalar| Poly::xt_minus(f, t, q);
        match (&self.family, &self.quotient) {
            (_, Quotient::None) => {
                finite = false;
                zero = ZeroRule::Free;
            }
            (Family::Dn, Quotient::ModOmega(q)) | (Family::Dn, Quotient::ModOmegaPlusI0(q)) => {
                for t in sector_ts(n) {
                    sectors.push(Sector::new(n, t, xt(t, q), 1, Offset::Zero)?);
                }
                if n % 2 == 0 && matches!(self.quotient, Quotient::ModOmega(_)) && f.is_one(q) {
                    // u^n acts trivially on I_0, so omega(1) misses it
                    zero = ZeroRule::Free;
                    finite = false;
                }
            }
            (Family::On, Quotient::ModOmega(q)) => {
                let q2 = f.mul(q, q);
                for t in sector_ts(n) {
                    sectors.push(Sector::new(n, t, xt(t, &q2), 2, Offset::Parity)?);
                }
            }
            (Family::On, Quotient::ModOmegaPlusI0(q)) => {
                for t in sector_ts(n) {
                    sectors.push(Sector::new(n, t, xt(t / 2, q), 2, Offset::Parity)?);
                }
            }
            (Family::Tl, Quotient::ModOmega(q)) | (Family::Tl, Quotient::ModOmegaPlusI0(q)) => {
                let odd = n % 2 == 1;
                for t in sector_ts(n) {
                    if t == n {
                        let mut s = Sector::new(n, t, Poly::linear(f, &f.one()), 2, Offset::Parity)?;
                        s.identity_only = true;
                        sectors.push(s);
                    } else if odd {
                        sectors.push(Sector::new(n, t, xt(t, &f.mul(q, q)), 2, Offset::Parity)?);
                    } else {
                        sectors.push(Sector::new(n, t, xt(t / 2, q), 2, Offset::Parity)?);
                    }
                }
            }
            (Family::Dn, Quotient::ModOmega1PlusUJ(_)) => {
                sectors.push(Sector::new(n, 0, self.monic_f().unwrap(), 1, Offset::Zero)?);
                zero = ZeroRule::Reduce;
                for t in sector_ts(n) {
                    sectors.push(Sector::new(n, t, xt(t, &f.one()), 1, Offset::Zero)?);
                }
            }
            (Family::DnPlus, Quotient::PlusTruncation { c, q }) => {
                for t in sector_ts(n) {
                    sectors.push(Sector::new(n, t, xt(t, q).pow(f, c + 1), 1, Offset::Positive)?);
                }
            }
            _ => return Err(Error::SpecMismatch("unsupported family/quotient pair".into())),
        }
        let mut base = 0;
        let mut by_t = HashMap::new();
        for (i, s) in sectors.iter_mut().enumerate() {
            s.base = base;
            base += s.size();
            by_t.insert(s.t, i);
        }
        Ok(Layout { sectors, zero, by_t, finite, dim: base })
    }

    /// Whether a diagram lies in the family's subalgebra of D_n.
    pub fn admits(&self, d: &AffineDiagram) -> bool {
        match self.family {
            Family::Dn | Family::DnPlus => true,
            Family::On => membership(d, Family::On),
            Family::Tl => membership(d, Family::Tl),
        }
    }

    /// A stable text key for caching and display.
    pub fn key(&self) -> String {
        let f = &self.field;
        let quot = match &self.quotient {
            Quotient::None => "none".to_string(),
            Quotient::ModOmega(q) => format!("omega(q={})", f.fmt(q)),
            Quotient::ModOmegaPlusI0(q) => format!("omega+I0(q={})", f.fmt(q)),
            Quotient::ModOmega1PlusUJ(p) => format!("omega1+UJ(f={})", p.to_string_in(f, "X")),
            Quotient::PlusTruncation { c, q } => format!("plus(c={c},q={})", f.fmt(q)),
        };
        format!("n={};family={:?};quotient={};field={}", self.n, self.family, quot, f.label())
    }

    /// The generator list used for modules: u, u^-1, E_1..E_n (or u^2, u^-2, E_i
    /// for the oriented family, or only E_i for Temperley-Lieb).
    pub fn generator_diagrams(&self) -> Vec<(String, AffineDiagram)> {
        let n = self.n;
        let g = |w| AffineDiagram::generator(n, w).unwrap();
        let mut out = vec![];
        match self.family {
            Family::Dn | Family::DnPlus => {
                out.push(("u".to_string(), g(Generator::U)));
                out.push(("u^-1".to_string(), g(Generator::UInverse)));
            }
            Family::On => {
                let u2 = AffineDiagram::compose(&g(Generator::U), &g(Generator::U)).unwrap().1;
                let ui2 = AffineDiagram::compose(&g(Generator::UInverse), &g(Generator::UInverse)).unwrap().1;
                out.push(("u^2".to_string(), u2));
                out.push(("u^-2".to_string(), ui2));
            }
            Family::Tl => {}
        }
        for i in 1..=n {
            out.push((format!("E{i}"), g(Generator::E(i))));
        }
        out
    }

    /// Indices into `generator_diagrams` of a generating set used by
    /// presentations (u^-1 and u^-2 are polynomials in u, u^2 in a finite quotient).
    pub fn minimal_generators(&self) -> Vec<usize> {
        match self.family {
            Family::Dn | Family::DnPlus => vec![0, 2],
            Family::On => vec![0, 2, 3],
            Family::Tl => (0..self.n).collect(),
        }
    }
}

/// TL: the identity, or a diagram with a horizontal edge and the even
/// intersection property. O_n: the even intersection property.
pub fn membership(d: &AffineDiagram, family: Family) -> bool {
    match family {
        Family::Tl => d.is_tl(),
        Family::On => d.parity_is_even(),
        Family::Dn => true,
        Family::DnPlus => d.t() > 0 && (d.is_positive().unwrap_or(false) || *d == AffineDiagram::identity(d.n())),
    }
}

fn delta_pow(f: &Field, x: u32) -> Scalar {
    f.pow(&f.delta(), x as i64).unwrap()
}

/// Reduces one diagram into sparse basis coordinates of a finite layout.
fn reduce_diagram(f: &Field, layout: &Layout, d: &AffineDiagram) -> Result<Vec<(usize, Scalar)>> {
    let (t, h1, h2, w) = halves_of(d);
    let Some(s) = layout.sector_for(t) else { return Ok(vec![]) };
    let (i1, i2) = (s.index_of(&h1).unwrap(), s.index_of(&h2).unwrap());
    let k = s.exponent(i1, i2, w)?;
    let c = s.reduce_power(f, k)?;
    Ok(c.into_iter().enumerate().filter(|(_, x)| !f.is_zero(x)).map(|(j, x)| (s.idx(i1, i2, j), x)).collect())
}

/// Finite formal sum of diagrams in a given algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub spec: AlgebraSpec,
    pub terms: BTreeMap<AffineDiagram, Scalar>,
}

impl AlgebraElement {
    pub fn zero(spec: &AlgebraSpec) -> AlgebraElement {
        AlgebraElement { spec: spec.clone(), terms: BTreeMap::new() }
    }
    pub fn diagram(spec: &AlgebraSpec, d: AffineDiagram) -> Result<AlgebraElement> {
        normalize(spec, &[(spec.field.one(), d)])
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn add(&self, o: &AlgebraElement) -> Result<AlgebraElement> {
        if self.spec != o.spec {
            return Err(Error::SpecMismatch("adding elements of different algebras".into()));
        }
        let f = &self.spec.field;
        let mut terms = self.terms.clone();
        for (d, c) in &o.terms {
            let e = terms.entry(d.clone()).or_insert_with(|| f.zero());
            *e = f.add(e, c);
        }
        terms.retain(|_, c| !f.is_zero(c));
        Ok(AlgebraElement { spec: self.spec.clone(), terms })
    }
    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        let f = &self.spec.field;
        let mut terms: BTreeMap<_, _> = self.terms.iter().map(|(d, x)| (d.clone(), f.mul(x, c))).collect();
        terms.retain(|_, c| !f.is_zero(c));
        AlgebraElement { spec: self.spec.clone(), terms }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = &self.spec.field;
        serde_json::json!({
            "spec": self.spec.key(),
            "terms": self.terms.iter().map(|(d, c)| serde_json::json!({"diagram": d.to_json(), "coeff": f.to_json(c)})).collect::<Vec<_>>(),
        })
    }
    pub fn from_json(spec: &AlgebraSpec, v: &serde_json::Value) -> Result<AlgebraElement> {
        let bad = || Error::Parse("element JSON needs a `terms` list".into());
        let mut raw = vec![];
        for t in v.get("terms").and_then(|x| x.as_array()).ok_or_else(bad)? {
            let d = AffineDiagram::from_json(t.get("diagram").ok_or_else(bad)?)?;
            let c = spec.field.from_json(t.get("coeff").ok_or_else(bad)?)?;
            raw.push((c, d));
        }
        normalize(spec, &raw)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(fm, "0");
        }
        let f = &self.spec.field;
        let parts: Vec<String> = self.terms.iter().map(|(d, c)| format!("({})*{d}", f.fmt(c))).collect();
        write!(fm, "{}", parts.join(" + "))
    }
}

/// Rewrites a raw sum of scaled diagrams into the quotient's canonical basis.
pub fn normalize(spec: &AlgebraSpec, raw: &[(Scalar, AffineDiagram)]) -> Result<AlgebraElement> {
    let f = &spec.field;
    let layout = spec.layout()?;
    let mut terms: BTreeMap<AffineDiagram, Scalar> = BTreeMap::new();
    let mut push = |d: AffineDiagram, c: Scalar| {
        let e = terms.entry(d).or_insert_with(|| f.zero());
        *e = f.add(e, &c);
    };
    for (c, d) in raw {
        if d.n() != spec.n {
            return Err(Error::SizeMismatch(format!("n = {} in an algebra with n = {}", d.n(), spec.n)));
        }
        if !spec.admits(d) {
            return Err(Error::SpecMismatch(format!("{d} is not in the {:?} family", spec.family)));
        }
        let t = d.t();
        match layout.sector_for(t) {
            Some(s) => {
                let (_, h1, h2, w) = halves_of(d);
                let (i1, i2) = (s.index_of(&h1).unwrap(), s.index_of(&h2).unwrap());
                let k = s.exponent(i1, i2, w)?;
                for (j, x) in s.reduce_power(f, k)?.into_iter().enumerate() {
                    if !f.is_zero(&x) {
                        push(s.diagram(i1, i2, j)?, f.mul(c, &x));
                    }
                }
            }
            None => {
                let keep = if t == 0 { matches!(layout.zero, ZeroRule::Free) } else { !layout.finite && layout.sectors.is_empty() };
                if keep {
                    push(d.clone(), c.clone());
                }
            }
        }
    }
    terms.retain(|_, c| !f.is_zero(c));
    Ok(AlgebraElement { spec: spec.clone(), terms })
}

/// Bilinear extension of composition followed by normalization.
pub fn multiply(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    if a.spec != b.spec {
        return Err(Error::SpecMismatch("multiplying elements of different algebras".into()));
    }
    let f = &a.spec.field;
    let mut raw = vec![];
    for (da, ca) in &a.terms {
        for (db, cb) in &b.terms {
            let (x, d) = AffineDiagram::compose(da, db)?;
            raw.push((f.mul(&f.mul(ca, cb), &delta_pow(f, x)), d));
        }
    }
    normalize(&a.spec, &raw)
}

/// A presentation of a finite-dimensional algebra read off from its
/// structure constants: words in the generators spanning the algebra
/// (closed under prefixes) and the relations b*g = sum c_i b_i.
#[derive(Clone, Debug)]
pub struct Presentation {
    /// indices into the algebra's generator list
    pub gens: Vec<usize>,
    /// word i = word parent * gens[g]; word 0 is the empty word
    pub parent: Vec<Option<(usize, usize)>>,
    pub relations: Vec<(usize, usize, Vec<(usize, Scalar)>)>,
    /// column i: the basis element e_i in word coordinates
    pub express: Matrix,
}

impl Presentation {
    pub fn len(&self) -> usize {
        self.parent.len()
    }
    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
    /// Generator positions spelling out word i.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![];
        while let Some((p, g)) = self.parent[i] {
            out.push(g);
            i = p;
        }
        out.reverse();
        out
    }
    /// Images of all words under a representation given on the generators.
    pub fn word_images(&self, f: &Field, dim: usize, gens: &[Matrix]) -> Vec<Matrix> {
        let mut out: Vec<Matrix> = Vec::with_capacity(self.len());
        for p in &self.parent {
            let m = match p {
                None => Matrix::identity(f, dim),
                Some((b, g)) => out[*b].mul(f, &gens[self.gens[*g]]),
            };
            out.push(m);
        }
        out
    }
}

/// A finite-dimensional algebra given by structure constants on a basis.
pub struct FdAlgebra {
    pub field: Field,
    pub dim: usize,
    table: Vec<Vec<(u32, Scalar)>>,
    pub unit: Vector,
    pub gens: Vec<(String, Vector)>,
    pub minimal: Vec<usize>,
    pres: OnceLock<Presentation>,
}

impl FdAlgebra {
    /// `table[i * dim + j]` is the sparse product of basis elements i and j.
    pub fn new(
        field: &Field,
        dim: usize,
        table: Vec<Vec<(u32, Scalar)>>,
        unit: Vector,
        gens: Vec<(String, Vector)>,
        minimal: Vec<usize>,
    ) -> FdAlgebra {
        assert_eq!(table.len(), dim * dim);
        FdAlgebra { field: field.clone(), dim, table, unit, gens, minimal, pres: OnceLock::new() }
    }

    pub fn product_basis(&self, i: usize, j: usize) -> &[(u32, Scalar)] {
        &self.table[i * self.dim + j]
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim];
        let ys: Vec<(usize, &Scalar)> = y.iter().enumerate().filter(|(_, c)| !f.is_zero(c)).collect();
        for (i, a) in x.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for &(j, b) in &ys {
                let ab = f.mul(a, b);
                for (k, c) in self.product_basis(i, j) {
                    let k = *k as usize;
                    out[k] = f.add(&out[k], &f.mul(&ab, c));
                }
            }
        }
        out
    }

    pub fn unit_vector(&self, i: usize) -> Vector {
        crate::linalg::unit(&self.field, self.dim, i)
    }

    /// Matrix of left multiplication by x.
    pub fn left_matrix(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(x, &self.unit_vector(j))).collect();
        Matrix::from_cols(&self.field, &cols, self.dim)
    }

    pub fn presentation(&self) -> &Presentation {
        self.pres.get_or_init(|| self.build_presentation())
    }

    fn build_presentation(&self) -> Presentation {
        let f = &self.field;
        let mut ech = Echelon::tracked(self.dim);
        let mut images: Vec<Vector> = vec![self.unit.clone()];
        let mut parent = vec![None];
        ech.insert(f, self.unit.clone());
        let mut relations = vec![];
        let mut i = 0;
        while i < images.len() {
            for (gp, &g) in self.minimal.iter().enumerate() {
                let v = self.mul(&images[i], &self.gens[g].1);
                if ech.insert(f, v.clone()) {
                    images.push(v);
                    parent.push(Some((i, gp)));
                } else {
                    let c = ech.express(f, v).unwrap();
                    let sparse = c.into_iter().enumerate().filter(|(_, x)| !f.is_zero(x)).collect();
                    relations.push((i, gp, sparse));
                }
            }
            i += 1;
        }
        assert_eq!(images.len(), self.dim, "the generators do not generate the algebra");
        let cols: Vec<Vector> = (0..self.dim).map(|j| ech.express(f, self.unit_vector(j)).unwrap()).collect();
        Presentation { gens: self.minimal.clone(), parent, relations, express: Matrix::from_cols(f, &cols, self.dim) }
    }

    /// (xy)z = x(yz) on basis triples; exhaustive when `samples` is None.
    pub fn check_associative(&self, samples: Option<(usize, u64)>) -> bool {
        use rand::{Rng, SeedableRng};
        let d = self.dim;
        let triples: Vec<(usize, usize, usize)> = match samples {
            None => (0..d).flat_map(|a| (0..d).flat_map(move |b| (0..d).map(move |c| (a, b, c)))).collect(),
            Some((k, seed)) => {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                (0..k).map(|_| (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d))).collect()
            }
        };
        triples.par_iter().all(|&(a, b, c)| {
            let (ea, eb, ec) = (self.unit_vector(a), self.unit_vector(b), self.unit_vector(c));
            self.mul(&self.mul(&ea, &eb), &ec) == self.mul(&ea, &self.mul(&eb, &ec))
        })
    }
}

/// A finite quotient of D_n with its diagram basis.
pub struct Algebra {
    pub spec: AlgebraSpec,
    pub layout: Layout,
    pub basis: Vec<AffineDiagram>,
    index: HashMap<AffineDiagram, usize>,
    pub fd: FdAlgebra,
}

impl Algebra {
    /// Builds the algebra, reading or writing the structure-constant cache in
    /// the directory named by the environment variable, if set.
    pub fn new(spec: &AlgebraSpec) -> Result<Algebra> {
        let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
        Algebra::with_cache(spec, dir.as_deref())
    }

    pub fn with_cache(spec: &AlgebraSpec, cache: Option<&Path>) -> Result<Algebra> {
        let f = &spec.field;
        let layout = spec.layout()?;
        if !layout.finite {
            return Err(Error::InfiniteDimensional);
        }
        let mut basis = Vec::with_capacity(layout.dim);
        for s in &layout.sectors {
            for i1 in 0..s.h() {
                for i2 in 0..s.h() {
                    for k in 0..s.len() {
                        basis.push(s.diagram(i1, i2, k)?);
                    }
                }
            }
        }
        let index: HashMap<AffineDiagram, usize> = basis.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let d = basis.len();
        let key = cache_key(spec, &basis);
        let cached = cache.and_then(|dir| read_cache(f, &dir.join(&key), d));
        let table = match cached {
            Some(t) => t,
            None => {
                let rows: Result<Vec<Vec<Vec<(u32, Scalar)>>>> = (0..d)
                    .into_par_iter()
                    .map(|i| {
                        (0..d)
                            .map(|j| {
                                let (x, c) = AffineDiagram::compose(&basis[i], &basis[j])?;
                                let s = delta_pow(f, x);
                                Ok(reduce_diagram(f, &layout, &c)?.into_iter().map(|(k, v)| (k as u32, f.mul(&v, &s))).collect())
                            })
                            .collect()
                    })
                    .collect();
                let table: Vec<Vec<(u32, Scalar)>> = rows?.into_iter().flatten().collect();
                if let Some(dir) = cache {
                    // a failed cache write only costs a recomputation next time
                    let _ = write_cache(f, dir, &key, &table);
                }
                table
            }
        };
        let vec_of = |dg: &AffineDiagram| -> Result<Vector> {
            let mut v = vec![f.zero(); d];
            for (k, c) in reduce_diagram(f, &layout, dg)? {
                v[k] = f.add(&v[k], &c);
            }
            Ok(v)
        };
        let unit = vec_of(&AffineDiagram::identity(spec.n))?;
        let gens = spec
            .generator_diagrams()
            .into_iter()
            .map(|(name, g)| Ok((name, vec_of(&g)?)))
            .collect::<Result<Vec<_>>>()?;
        let fd = FdAlgebra::new(f, d, table, unit, gens, spec.minimal_generators());
        Ok(Algebra { spec: spec.clone(), layout, basis, index, fd })
    }

    pub fn field(&self) -> &Field {
        &self.spec.field
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn n(&self) -> usize {
        self.spec.n
    }
    pub fn index_of(&self, d: &AffineDiagram) -> Option<usize> {
        self.index.get(d).copied()
    }

    /// (sector index, i1, i2, k) of basis element i.
    pub fn locate(&self, i: usize) -> (usize, usize, usize, usize) {
        for (si, s) in self.layout.sectors.iter().enumerate() {
            if i >= s.base && i < s.base + s.size() {
                let r = i - s.base;
                let k = r % s.len();
                let pair = r / s.len();
                return (si, pair / s.h(), pair % s.h(), k);
            }
        }
        panic!("basis index {i} out of range");
    }

    /// Coordinates of an arbitrary diagram of D_n in this quotient.
    pub fn vector_of(&self, d: &AffineDiagram) -> Result<Vector> {
        let f = self.field();
        if d.n() != self.n() {
            return Err(Error::SizeMismatch(format!("n = {} vs {}", d.n(), self.n())));
        }
        if !self.spec.admits(d) {
            return Err(Error::SpecMismatch(format!("{d} is not in the {:?} family", self.spec.family)));
        }
        let mut v = vec![f.zero(); self.dim()];
        for (k, c) in reduce_diagram(f, &self.layout, d)? {
            v[k] = f.add(&v[k], &c);
        }
        Ok(v)
    }

    pub fn to_element(&self, v: &[Scalar]) -> AlgebraElement {
        let f = self.field();
        let terms = v.iter().enumerate().filter(|(_, c)| !f.is_zero(c)).map(|(i, c)| (self.basis[i].clone(), c.clone())).collect();
        AlgebraElement { spec: self.spec.clone(), terms }
    }

    pub fn from_element(&self, e: &AlgebraElement) -> Result<Vector> {
        if e.spec != self.spec {
            return Err(Error::SpecMismatch("element of another algebra".into()));
        }
        let f = self.field();
        let mut v = vec![f.zero(); self.dim()];
        for (d, c) in &e.terms {
            let i = self.index_of(d).ok_or_else(|| Error::SpecMismatch(format!("{d} is not a basis diagram")))?;
            v[i] = f.add(&v[i], c);
        }
        Ok(v)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        self.fd.mul(x, y)
    }

    /// The anti-involution on coordinates.
    pub fn star_vec(&self, x: &[Scalar]) -> Result<Vector> {
        let f = self.field();
        let mut out = vec![f.zero(); self.dim()];
        for (i, c) in x.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let v = self.vector_of(&self.basis[i].star())?;
            axpy(f, &mut out, c, &v);
        }
        Ok(out)
    }

    /// Multiplication by X inside every block: [S1, S2, w] -> [S1, S2, w + step].
    pub fn tau_vec(&self, x: &[Scalar]) -> Result<Vector> {
        let f = self.field();
        let mut out = vec![f.zero(); self.dim()];
        for (i, c) in x.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let (si, i1, i2, k) = self.locate(i);
            let s = &self.layout.sectors[si];
            let p = s.reduce_power(f, k as i64 + 1)?;
            for (j, y) in p.iter().enumerate() {
                if !f.is_zero(y) {
                    let idx = s.idx(i1, i2, j);
                    out[idx] = f.add(&out[idx], &f.mul(c, y));
                }
            }
        }
        Ok(out)
    }

    /// g(h1, h2): X^k -> [h1, h2, offset + step k], reduced in the quotient.
    pub fn substitute(&self, si: usize, i1: usize, i2: usize, g: &Poly) -> Result<Vector> {
        let f = self.field();
        let s = &self.layout.sectors[si];
        let r = g.rem(f, &s.modulus);
        let mut v = vec![f.zero(); self.dim()];
        for (k, c) in r.coeffs().iter().enumerate() {
            v[s.idx(i1, i2, k)] = c.clone();
        }
        Ok(v)
    }

    /// The generator vector with the given name.
    pub fn generator(&self, name: &str) -> Option<&Vector> {
        self.fd.gens.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

fn cache_key(spec: &AlgebraSpec, basis: &[AffineDiagram]) -> String {
    let mut h = Sha256::new();
    h.update(CACHE_VERSION.as_bytes());
    h.update(spec.key().as_bytes());
    for d in basis {
        h.update(d.to_string().as_bytes());
        h.update(b";");
    }
    format!("{}.atlsc", hex::encode(h.finalize()))
}

// Cache layout: magic, u64 dimension, then per product a u32 term count and
// per term a u32 index plus a length-prefixed UTF-8 scalar in JSON form.
const MAGIC: &[u8; 8] = b"ATLSC\x00\x01\x00";

fn write_cache(f: &Field, dir: &Path, key: &str, table: &[Vec<(u32, Scalar)>]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    std::fs::create_dir_all(dir).map_err(io)?;
    let d = (table.len() as f64).sqrt().round() as u64;
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&d.to_le_bytes());
    for row in table {
        buf.extend_from_slice(&(row.len() as u32).to_le_bytes());
        for (k, c) in row {
            buf.extend_from_slice(&k.to_le_bytes());
            let s = f.to_json(c).to_string();
            buf.extend_from_slice(&(s.len() as u32).to_le_bytes());
            buf.extend_from_slice(s.as_bytes());
        }
    }
    // write-then-rename keeps concurrent readers from seeing partial files
    let tmp = dir.join(format!("{key}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, &buf).map_err(io)?;
    std::fs::rename(&tmp, dir.join(key)).map_err(io)?;
    Ok(())
}

fn read_cache(f: &Field, path: &Path, d: usize) -> Option<Vec<Vec<(u32, Scalar)>>> {
    let buf = std::fs::read(path).ok()?;
    let mut pos = 0;
    let mut take = |n: usize| -> Option<&[u8]> {
        let s = buf.get(pos..pos + n)?;
        pos += n;
        Some(s)
    };
    if take(8)? != MAGIC {
        return None;
    }
    let dim = u64::from_le_bytes(take(8)?.try_into().ok()?) as usize;
    if dim != d {
        return None;
    }
    let mut table = Vec::with_capacity(d * d);
    for _ in 0..d * d {
        let cnt = u32::from_le_bytes(take(4)?.try_into().ok()?);
        let mut row = Vec::with_capacity(cnt as usize);
        for _ in 0..cnt {
            let k = u32::from_le_bytes(take(4)?.try_into().ok()?);
            let len = u32::from_le_bytes(take(4)?.try_into().ok()?) as usize;
            let s = std::str::from_utf8(take(len)?).ok()?;
            let v: serde_json::Value = serde_json::from_str(s).ok()?;
            row.push((k, f.from_json(&v).ok()?));
        }
        table.push(row);
    }
    Some(table)
}

/// Outcome of checking the defining relations of D_n.
#[derive(Clone, Debug, Default)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks relations (1)-(5), u u^-1 = 1 and the centrality of u^n as diagram
/// identities, using `compose` for multiplication.
pub fn check_relations_with<C>(n: usize, compose: C) -> Result<RelationReport>
where
    C: Fn(&AffineDiagram, &AffineDiagram) -> Result<(u32, AffineDiagram)>,
{
    let g = |w| AffineDiagram::generator(n, w);
    let e = |i: usize| g(Generator::E((i - 1) % n + 1));
    let prod = |ds: &[AffineDiagram]| -> Result<(u32, AffineDiagram)> {
        let mut acc = (0u32, AffineDiagram::identity(n));
        for d in ds {
            let (x, c) = compose(&acc.1, d)?;
            acc = (acc.0 + x, c);
        }
        Ok(acc)
    };
    let mut rep = RelationReport::default();
    let mut check = |name: String, lhs: (u32, AffineDiagram), rhs: (u32, AffineDiagram)| {
        rep.checked += 1;
        if lhs != rhs {
            rep.failures.push(format!("{name}: {}*d^{} vs {}*d^{}", lhs.1, lhs.0, rhs.1, rhs.0));
        }
    };
    let (u, ui) = (g(Generator::U)?, g(Generator::UInverse)?);
    let id = AffineDiagram::identity(n);
    check("u u^-1 = 1".into(), prod(&[u.clone(), ui.clone()])?, (0, id.clone()));
    check("u^-1 u = 1".into(), prod(&[ui.clone(), u.clone()])?, (0, id.clone()));
    for i in 1..=n {
        check(format!("E{i}^2 = d E{i}"), prod(&[e(i)?, e(i)?])?, (1, e(i)?));
        for j in 1..=n {
            let adjacent = (i % n + 1) == j || (j % n + 1) == i;
            if i != j && !adjacent {
                check(format!("E{i} E{j} = E{j} E{i}"), prod(&[e(i)?, e(j)?])?, prod(&[e(j)?, e(i)?])?);
            }
        }
        check(format!("E{i} E{} E{i} = E{i}", i % n + 1), prod(&[e(i)?, e(i + 1)?, e(i)?])?, (0, e(i)?));
        check(format!("E{i} E{} E{i} = E{i}", (i + n - 2) % n + 1), prod(&[e(i)?, e(i + n - 1)?, e(i)?])?, (0, e(i)?));
        check(format!("u E{i} u^-1 = E{}", i % n + 1), prod(&[u.clone(), e(i)?, ui.clone()])?, (0, e(i + 1)?));
    }
    let ue1 = prod(&[u.clone(), e(1)?])?.1;
    let lhs = prod(&vec![ue1.clone(); n - 1])?;
    let mut rhs_words = vec![u.clone(); n];
    rhs_words.push(ue1);
    check("(u E1)^(n-1) = u^n (u E1)".into(), lhs, prod(&rhs_words)?);
    let un = prod(&vec![u.clone(); n])?.1;
    for (name, x) in [("u".to_string(), u.clone()), ("u^-1".to_string(), ui.clone())].into_iter().chain((1..=n).map(|i| (format!("E{i}"), e(i).unwrap()))) {
        check(format!("u^n {name} = {name} u^n"), prod(&[un.clone(), x.clone()])?, prod(&[x, un.clone()])?);
    }
    Ok(rep)
}

pub fn check_relations(n: usize) -> Result<RelationReport> {
    check_relations_with(n, AffineDiagram::compose)
}

/// Basis of D_n/I_0-positive data and U_J bookkeeping for the t = 0 sector.
pub struct UJ {
    pub n: usize,
    pub f: Poly,
    pub field: Field,
    pub halves: Vec<LiftedMatching>,
}

impl UJ {
    pub fn new(field: &Field, n: usize, f: Poly) -> Result<UJ> {
        if n % 2 != 0 {
            return Err(Error::OddN);
        }
        if f.degree().unwrap_or(0) == 0 {
            return Err(Error::SpecMismatch("f must be nonconstant".into()));
        }
        let lc = f.coeffs().last().unwrap().clone();
        let f = f.scale(field, &field.inv(&lc)?);
        Ok(UJ { n, f, field: field.clone(), halves: enumerate_lifted(n)? })
    }

    /// g(S, T) in D_n: X^k -> [S, T, k].
    pub fn substitute(&self, g: &Poly, s: &LiftedMatching, t: &LiftedMatching) -> Result<AlgebraElement> {
        let spec = AlgebraSpec::dn(&self.field, self.n)?;
        let mut raw = vec![];
        for (k, c) in g.coeffs().iter().enumerate() {
            if !self.field.is_zero(c) {
                raw.push((c.clone(), AffineDiagram::from_zero_triple(s, t, k as u32)?));
            }
        }
        normalize(&spec, &raw)
    }

    /// Spanning elements X^m f(S, T) for m < m_max.
    pub fn spanning_set(&self, m_max: usize) -> Result<Vec<AlgebraElement>> {
        let mut out = vec![];
        for s in &self.halves {
            for t in &self.halves {
                for m in 0..m_max {
                    out.push(self.substitute(&Poly::monomial(&self.field, m).mul(&self.field, &self.f), s, t)?);
                }
            }
        }
        Ok(out)
    }

    /// Membership in U_J: every t = 0 block polynomial is divisible by f, and
    /// nothing outside the t = 0 sector occurs.
    pub fn contains(&self, e: &AlgebraElement) -> Result<bool> {
        let fl = &self.field;
        let mut blocks: BTreeMap<(LiftedMatching, LiftedMatching), Vec<Scalar>> = BTreeMap::new();
        for (d, c) in &e.terms {
            match d.to_triple() {
                Triple::Zero(p1, p2, k) => {
                    let v = blocks.entry((p1, p2)).or_default();
                    if v.len() <= k as usize {
                        v.resize(k as usize + 1, fl.zero());
                    }
                    v[k as usize] = fl.add(&v[k as usize], c);
                }
                Triple::Through(..) => return Ok(false),
            }
        }
        Ok(blocks.into_values().all(|v| Poly::new(fl, v).rem(fl, &self.f).is_zero()))
    }
}

/// The image of an element of D_n/I_0 in D_n^+/I_n^+(c).
pub fn plus_truncation_map(a: &AlgebraElement, c: usize, q: &Scalar) -> Result<AlgebraElement> {
    let spec = AlgebraSpec::dn_plus(&a.spec.field, a.spec.n, c, q.clone())?;
    let raw: Vec<(Scalar, AffineDiagram)> = a.terms.iter().map(|(d, x)| (x.clone(), d.clone())).collect();
    normalize(&spec, &raw)
}
