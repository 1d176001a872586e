//! Exact ground fields: Q, cyclotomic fields Q(zeta_N), finite fields GF(p^k)
//! and the rational function field Q(v).

pub mod expr;
pub mod poly;
pub mod ring;
pub mod roots;

pub use poly::Poly;
pub use roots::{block_idempotents, cell_polynomial, g_basis, roots_of_poly, roots_of_xt_minus_q, RootData};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use ring::{Ring, Zp, QQ};
use serde_json::Value;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    Cyclotomic(u32),
    PrimePower { p: u64, k: u32 },
    RationalFunctions,
}

impl FieldKind {
    /// Parses `Q`, `Q(zeta N)`, `GF(p^k)`, `GF(p)` or `Q(v)`.
    pub fn parse(s: &str) -> Result<FieldKind> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("unknown field `{s}`"));
        if t == "Q" {
            return Ok(FieldKind::Rationals);
        }
        if t == "Q(v)" {
            return Ok(FieldKind::RationalFunctions);
        }
        if let Some(rest) = t.strip_prefix("Q(zeta").and_then(|r| r.strip_suffix(')')) {
            let n: u32 = rest.trim_start_matches('_').parse().map_err(|_| bad())?;
            return Ok(FieldKind::Cyclotomic(n));
        }
        if let Some(rest) = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            let (p, k) = match rest.split_once('^') {
                Some((p, k)) => (p, k),
                None => (rest, "1"),
            };
            let p: u64 = p.parse().map_err(|_| bad())?;
            let k: u32 = k.parse().map_err(|_| bad())?;
            return Ok(FieldKind::PrimePower { p, k });
        }
        Err(bad())
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Cyclotomic(n) => write!(f, "Q(zeta {n})"),
            FieldKind::PrimePower { p, k } => write!(f, "GF({p}^{k})"),
            FieldKind::RationalFunctions => write!(f, "Q(v)"),
        }
    }
}

/// Field description: the kind plus an expression for the unit v.
/// `v = None` means v = 1, except over Q(v) where v is the generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub v: Option<String>,
}

impl FieldSpec {
    pub fn new(kind: FieldKind, v: Option<&str>) -> FieldSpec {
        FieldSpec { kind, v: v.map(|s| s.to_string()) }
    }
    pub fn parse(kind: &str, v: Option<&str>) -> Result<FieldSpec> {
        Ok(FieldSpec::new(FieldKind::parse(kind)?, v))
    }
}

/// An exact field element. The variant always matches the owning field and
/// every value has a unique representation, so derived equality is value
/// equality and the derived order is a fixed total order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rat(BigRational),
    /// residue modulo the N-th cyclotomic polynomial
    Cyc(Vec<BigRational>),
    Fp(u64),
    /// residue modulo the fixed irreducible of degree k > 1
    Gf(Vec<u64>),
    /// numerator and monic denominator, coprime
    RatFn(Vec<BigRational>, Vec<BigRational>),
}

struct Inner {
    kind: FieldKind,
    cyclo: Vec<BigRational>,
    p: u64,
    k: u32,
    gf_mod: Vec<u64>,
    v: Scalar,
    v_inv: Scalar,
    delta: Scalar,
    label: String,
}

/// Cheap-to-clone handle to a ground field.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.0.label)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        self.0.label == other.0.label
    }
}
impl Eq for Field {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The N-th cyclotomic polynomial, by dividing X^N - 1 by the smaller ones.
pub fn cyclotomic_poly(n: u32) -> Vec<BigRational> {
    let mut p = vec![rat(0); n as usize + 1];
    p[0] = rat(-1);
    p[n as usize] = rat(1);
    for d in 1..n {
        if n % d == 0 {
            p = ring::divrem(&QQ, &p, &cyclotomic_poly(d)).0;
        }
    }
    p
}

/// Rabin's irreducibility test over F_p.
fn irreducible_fp(zp: &Zp, f: &[u64]) -> bool {
    let k = f.len() - 1;
    let x = vec![0, 1];
    let p = zp.0 as u128;
    let frob = |e: u32| ring::powmod(zp, &x, p.pow(e), f);
    if ring::sub(zp, &frob(k as u32), &x) != Vec::<u64>::new() {
        return false;
    }
    for r in prime_factors(k as u64) {
        let h = ring::sub(zp, &frob((k as u64 / r) as u32), &x);
        if ring::gcd(zp, &h, f).len() != 1 {
            return false;
        }
    }
    true
}

/// First monic irreducible of degree k, scanning constant-term-first counters.
fn first_irreducible(p: u64, k: u32) -> Vec<u64> {
    let zp = Zp(p);
    let k = k as usize;
    let mut coeffs = vec![0u64; k];
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if f[0] != 0 && irreducible_fp(&zp, &f) {
            return f;
        }
        let mut i = 0;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

impl Field {
    pub fn new(spec: &FieldSpec) -> Result<Field> {
        let mut inner = Inner {
            kind: spec.kind.clone(),
            cyclo: vec![],
            p: 0,
            k: 0,
            gf_mod: vec![],
            v: Scalar::Rat(rat(1)),
            v_inv: Scalar::Rat(rat(1)),
            delta: Scalar::Rat(rat(2)),
            label: String::new(),
        };
        match spec.kind {
            FieldKind::Rationals | FieldKind::RationalFunctions => {}
            FieldKind::Cyclotomic(n) => {
                if n == 0 {
                    return Err(Error::BadModulus("cyclotomic order must be positive".into()));
                }
                inner.cyclo = cyclotomic_poly(n);
            }
            FieldKind::PrimePower { p, k } => {
                if !is_prime(p) || p >= 1 << 31 {
                    return Err(Error::BadModulus(format!("{p} is not a supported prime")));
                }
                if k == 0 {
                    return Err(Error::BadModulus("extension degree must be positive".into()));
                }
                inner.p = p;
                inner.k = k;
                if k > 1 {
                    inner.gf_mod = first_irreducible(p, k);
                }
            }
        }
        let mut field = Field(Arc::new(inner));
        let v = match (&spec.kind, &spec.v) {
            (FieldKind::RationalFunctions, None) => field.gen_v(),
            (_, None) => field.one(),
            (_, Some(e)) => expr::parse_scalar(&field, e)?,
        };
        let v_inv = field.inv(&v).map_err(|_| Error::BadModulus("v must be invertible".into()))?;
        let delta = field.add(&v, &v_inv);
        if field.is_zero(&delta) {
            return Err(Error::DeltaZero);
        }
        let label = match &spec.v {
            None => format!("{}", spec.kind),
            Some(_) => format!("{};v={}", spec.kind, field.fmt(&v)),
        };
        let inner = Arc::get_mut(&mut field.0).unwrap();
        inner.v = v;
        inner.v_inv = v_inv;
        inner.delta = delta;
        inner.label = label;
        Ok(field)
    }

    pub fn parse(kind: &str, v: Option<&str>) -> Result<Field> {
        Field::new(&FieldSpec::parse(kind, v)?)
    }

    pub fn rationals() -> Field {
        Field::new(&FieldSpec::new(FieldKind::Rationals, None)).unwrap()
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }
    pub fn label(&self) -> &str {
        &self.0.label
    }
    pub fn characteristic(&self) -> u64 {
        self.0.p
    }
    pub fn v(&self) -> Scalar {
        self.0.v.clone()
    }
    pub fn v_inv(&self) -> Scalar {
        self.0.v_inv.clone()
    }
    pub fn delta(&self) -> Scalar {
        self.0.delta.clone()
    }
    pub fn gf_modulus(&self) -> &[u64] {
        &self.0.gf_mod
    }

    fn zp(&self) -> Zp {
        Zp(self.0.p)
    }

    pub fn zero(&self) -> Scalar {
        match self.0.kind {
            FieldKind::Rationals => Scalar::Rat(rat(0)),
            FieldKind::Cyclotomic(_) => Scalar::Cyc(vec![]),
            FieldKind::PrimePower { k: 1, .. } => Scalar::Fp(0),
            FieldKind::PrimePower { .. } => Scalar::Gf(vec![]),
            FieldKind::RationalFunctions => Scalar::RatFn(vec![], vec![rat(1)]),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        let q = BigRational::from_integer(n.clone());
        match self.0.kind {
            FieldKind::Rationals => Scalar::Rat(q),
            FieldKind::Cyclotomic(_) => Scalar::Cyc(ring::trim(&QQ, vec![q])),
            FieldKind::PrimePower { k: 1, .. } => Scalar::Fp(self.zp().reduce(n)),
            FieldKind::PrimePower { .. } => Scalar::Gf(ring::trim(&self.zp(), vec![self.zp().reduce(n)])),
            FieldKind::RationalFunctions => Scalar::RatFn(ring::trim(&QQ, vec![q]), vec![rat(1)]),
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        self.div(&num, &den)
    }

    /// The primitive N-th root of unity of a cyclotomic field.
    pub fn gen_zeta(&self) -> Result<Scalar> {
        match self.0.kind {
            FieldKind::Cyclotomic(1) => Ok(self.one()),
            FieldKind::Cyclotomic(2) => Ok(self.from_i64(-1)),
            FieldKind::Cyclotomic(_) => Ok(Scalar::Cyc(vec![rat(0), rat(1)])),
            _ => Err(Error::Parse("zeta is only defined in cyclotomic fields".into())),
        }
    }

    /// The class of the indeterminate in GF(p^k), k > 1.
    pub fn gen_a(&self) -> Result<Scalar> {
        match self.0.kind {
            FieldKind::PrimePower { k, .. } if k > 1 => Ok(self.reduce_gf(vec![0, 1])),
            FieldKind::PrimePower { .. } => Err(Error::Parse("GF(p) has no generator `a`".into())),
            _ => Err(Error::Parse("`a` is only defined in GF(p^k)".into())),
        }
    }

    fn gen_v(&self) -> Scalar {
        Scalar::RatFn(vec![rat(0), rat(1)], vec![rat(1)])
    }

    /// The value of the name `v` inside expressions.
    pub fn var_v(&self) -> Result<Scalar> {
        match self.0.kind {
            FieldKind::RationalFunctions => Ok(self.gen_v()),
            _ if !self.0.label.is_empty() => Ok(self.v()),
            _ => Err(Error::Parse("`v` cannot refer to itself".into())),
        }
    }

    fn reduce_cyc(&self, a: Vec<BigRational>) -> Scalar {
        Scalar::Cyc(ring::rem(&QQ, &ring::trim(&QQ, a), &self.0.cyclo))
    }

    fn reduce_gf(&self, a: Vec<u64>) -> Scalar {
        let zp = self.zp();
        Scalar::Gf(ring::rem(&zp, &ring::trim(&zp, a), &self.0.gf_mod))
    }

    fn make_ratfn(&self, num: Vec<BigRational>, den: Vec<BigRational>) -> Scalar {
        let num = ring::trim(&QQ, num);
        let den = ring::trim(&QQ, den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return self.zero();
        }
        let g = ring::gcd(&QQ, &num, &den);
        let (mut num, mut den) = if g.len() > 1 {
            (ring::divrem(&QQ, &num, &g).0, ring::divrem(&QQ, &den, &g).0)
        } else {
            (num, den)
        };
        let lc = den.last().unwrap().clone();
        if !lc.is_one() {
            num = ring::scale(&QQ, &num, &lc.recip());
            den = ring::scale(&QQ, &den, &lc.recip());
        }
        Scalar::RatFn(num, den)
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Cyc(x) => x.is_empty(),
            Scalar::Fp(x) => *x == 0,
            Scalar::Gf(x) => x.is_empty(),
            Scalar::RatFn(x, _) => x.is_empty(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Cyc(x), Scalar::Cyc(y)) => Scalar::Cyc(ring::add(&QQ, x, y)),
            (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % self.0.p),
            (Scalar::Gf(x), Scalar::Gf(y)) => Scalar::Gf(ring::add(&self.zp(), x, y)),
            (Scalar::RatFn(n1, d1), Scalar::RatFn(n2, d2)) => {
                if d1 == d2 {
                    self.make_ratfn(ring::add(&QQ, n1, n2), d1.clone())
                } else {
                    let num = ring::add(&QQ, &ring::mul(&QQ, n1, d2), &ring::mul(&QQ, n2, d1));
                    self.make_ratfn(num, ring::mul(&QQ, d1, d2))
                }
            }
            _ => panic!("mixed field elements"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Cyc(x) => Scalar::Cyc(x.iter().map(|c| -c).collect()),
            Scalar::Fp(x) => Scalar::Fp((self.0.p - x) % self.0.p),
            Scalar::Gf(x) => Scalar::Gf(x.iter().map(|c| (self.0.p - c) % self.0.p).collect()),
            Scalar::RatFn(n, d) => Scalar::RatFn(n.iter().map(|c| -c).collect(), d.clone()),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + self.0.p - y) % self.0.p),
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Cyc(x), Scalar::Cyc(y)) => self.reduce_cyc(ring::mul(&QQ, x, y)),
            (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(x * y % self.0.p),
            (Scalar::Gf(x), Scalar::Gf(y)) => self.reduce_gf(ring::mul(&self.zp(), x, y)),
            (Scalar::RatFn(n1, d1), Scalar::RatFn(n2, d2)) => {
                if n1.is_empty() || n2.is_empty() {
                    return self.zero();
                }
                self.make_ratfn(ring::mul(&QQ, n1, n2), ring::mul(&QQ, d1, d2))
            }
            _ => panic!("mixed field elements"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match a {
            Scalar::Rat(x) => Scalar::Rat(x.recip()),
            Scalar::Cyc(x) => {
                let (g, s, _) = ring::ext_gcd(&QQ, x, &self.0.cyclo);
                debug_assert_eq!(g.len(), 1);
                self.reduce_cyc(s)
            }
            Scalar::Fp(x) => Scalar::Fp(self.zp().pow(*x, self.0.p - 2)),
            Scalar::Gf(x) => {
                let (_, s, _) = ring::ext_gcd(&self.zp(), x, &self.0.gf_mod);
                self.reduce_gf(s)
            }
            Scalar::RatFn(n, d) => self.make_ratfn(d.clone(), n.clone()),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut b = base;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        Ok(acc)
    }

    /// All elements of a finite field, in a fixed order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self.0.kind {
            FieldKind::PrimePower { p, k } => {
                let total = (p as u128).checked_pow(k)?;
                if total > 1 << 20 {
                    return None;
                }
                let mut out = Vec::with_capacity(total as usize);
                for idx in 0..total as u64 {
                    let mut c = Vec::with_capacity(k as usize);
                    let mut r = idx;
                    for _ in 0..k {
                        c.push(r % p);
                        r /= p;
                    }
                    out.push(if k == 1 { Scalar::Fp(c[0]) } else { self.reduce_gf(c) });
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Random element with small coefficients (used by tests and sampling).
    pub fn random<R: rand::Rng>(&self, rng: &mut R) -> Scalar {
        let small = |rng: &mut R| rat(rng.gen_range(-5..=5));
        match self.0.kind {
            FieldKind::Rationals => {
                let d = rng.gen_range(1..=4);
                Scalar::Rat(BigRational::new(BigInt::from(rng.gen_range(-9..=9)), BigInt::from(d)))
            }
            FieldKind::Cyclotomic(_) => {
                let deg = self.0.cyclo.len() - 1;
                self.reduce_cyc((0..deg).map(|_| small(rng)).collect())
            }
            FieldKind::PrimePower { p, k } => {
                let c: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
                if k == 1 {
                    Scalar::Fp(c[0])
                } else {
                    self.reduce_gf(c)
                }
            }
            FieldKind::RationalFunctions => {
                let num: Vec<BigRational> = (0..3).map(|_| small(rng)).collect();
                let mut den: Vec<BigRational> = (0..2).map(|_| small(rng)).collect();
                den.push(rat(1));
                self.make_ratfn(num, den)
            }
        }
    }

    pub fn fmt(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rat(x) => x.to_string(),
            Scalar::Fp(x) => x.to_string(),
            Scalar::Cyc(x) => fmt_poly(&x.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "zeta"),
            Scalar::Gf(x) => fmt_poly(&x.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "a"),
            Scalar::RatFn(n, d) => {
                let ns = fmt_poly(&n.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "v");
                if d.len() == 1 {
                    ns
                } else {
                    let ds = fmt_poly(&d.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "v");
                    format!("({ns})/({ds})")
                }
            }
        }
    }

    pub fn to_json(&self, a: &Scalar) -> Value {
        let strs = |x: &[BigRational]| Value::Array(x.iter().map(|c| Value::String(c.to_string())).collect());
        match a {
            Scalar::Rat(x) => Value::String(x.to_string()),
            Scalar::Fp(x) => Value::String(x.to_string()),
            Scalar::Cyc(x) => strs(x),
            Scalar::Gf(x) => Value::Array(x.iter().map(|c| Value::String(c.to_string())).collect()),
            Scalar::RatFn(n, d) => serde_json::json!({"num": strs(n), "den": strs(d)}),
        }
    }

    pub fn from_json(&self, v: &Value) -> Result<Scalar> {
        let bad = || Error::Parse(format!("bad scalar {v}"));
        let parse_rat = |s: &Value| -> Result<BigRational> {
            let s = s.as_str().ok_or_else(bad)?;
            s.parse::<BigRational>().map_err(|_| bad())
        };
        let list = |a: &Value| -> Result<Vec<BigRational>> {
            a.as_array().ok_or_else(bad)?.iter().map(parse_rat).collect()
        };
        match self.0.kind {
            FieldKind::Rationals | FieldKind::PrimePower { k: 1, .. } => self.from_rational(&parse_rat(v)?),
            FieldKind::Cyclotomic(_) => {
                let c = list(v)?;
                Ok(self.reduce_cyc(c))
            }
            FieldKind::PrimePower { .. } => {
                let c = list(v)?;
                let zp = self.zp();
                let mut out = vec![];
                for x in c {
                    if !x.is_integer() {
                        return Err(bad());
                    }
                    out.push(zp.reduce(x.numer()));
                }
                Ok(self.reduce_gf(out))
            }
            FieldKind::RationalFunctions => {
                let n = list(v.get("num").ok_or_else(bad)?)?;
                let d = list(v.get("den").ok_or_else(bad)?)?;
                if ring::trim(&QQ, d.clone()).is_empty() {
                    return Err(bad());
                }
                Ok(self.make_ratfn(n, d))
            }
        }
    }

    /// Scalars of Q or Q(zeta N) with rational value, as a rational.
    pub fn as_rational(&self, a: &Scalar) -> Option<BigRational> {
        match a {
            Scalar::Rat(x) => Some(x.clone()),
            Scalar::Cyc(x) if x.len() <= 1 => Some(x.first().cloned().unwrap_or_else(|| rat(0))),
            Scalar::RatFn(n, d) if n.len() <= 1 && d.len() == 1 => Some(n.first().cloned().unwrap_or_else(|| rat(0))),
            Scalar::Fp(x) => Some(rat(*x as i64)),
            _ => None,
        }
    }

    /// Candidate units mu such that every root we can detect has the form mu*c
    /// with c in the prime field (or Q).
    pub(crate) fn root_units(&self, bound: i64) -> Vec<Scalar> {
        match self.0.kind {
            FieldKind::Cyclotomic(n) => {
                let z = self.gen_zeta().unwrap();
                (0..n as i64).map(|j| self.pow(&z, j).unwrap()).collect()
            }
            FieldKind::RationalFunctions => {
                let v = self.gen_v();
                (-bound..=bound).map(|j| self.pow(&v, j).unwrap()).collect()
            }
            _ => vec![self.one()],
        }
    }

    /// Splits a polynomial with coefficients in this field into polynomials over Q
    /// whose common rational roots are exactly the rational roots of the input.
    pub(crate) fn rational_components(&self, coeffs: &[Scalar]) -> Vec<Vec<BigRational>> {
        match self.0.kind {
            FieldKind::Rationals => {
                vec![coeffs.iter().map(|c| self.as_rational(c).unwrap()).collect()]
            }
            FieldKind::Cyclotomic(_) => {
                let width = coeffs.iter().map(|c| if let Scalar::Cyc(x) = c { x.len() } else { 0 }).max().unwrap_or(0);
                (0..width)
                    .map(|m| {
                        let p = coeffs.iter().map(|c| match c {
                            Scalar::Cyc(x) => x.get(m).cloned().unwrap_or_else(|| rat(0)),
                            _ => unreachable!(),
                        });
                        ring::trim(&QQ, p.collect())
                    })
                    .filter(|p| !p.is_empty())
                    .collect()
            }
            FieldKind::RationalFunctions => {
                let mut l = vec![rat(1)];
                for c in coeffs {
                    if let Scalar::RatFn(_, d) = c {
                        let g = ring::gcd(&QQ, &l, d);
                        l = ring::divrem(&QQ, &ring::mul(&QQ, &l, d), &g).0;
                    }
                }
                let polys: Vec<Vec<BigRational>> = coeffs
                    .iter()
                    .map(|c| match c {
                        Scalar::RatFn(n, d) => ring::mul(&QQ, n, &ring::divrem(&QQ, &l, d).0),
                        _ => unreachable!(),
                    })
                    .collect();
                let width = polys.iter().map(|p| p.len()).max().unwrap_or(0);
                (0..width)
                    .map(|m| ring::trim(&QQ, polys.iter().map(|p| p.get(m).cloned().unwrap_or_else(|| rat(0))).collect()))
                    .filter(|p| !p.is_empty())
                    .collect()
            }
            FieldKind::PrimePower { .. } => vec![],
        }
    }

    /// Largest v-degree appearing in a rational function coefficient.
    pub(crate) fn v_degree(&self, a: &Scalar) -> i64 {
        match a {
            Scalar::RatFn(n, d) => (n.len().max(d.len())) as i64,
            _ => 0,
        }
    }
}

/// Renders a coefficient list as a polynomial in `var`.
pub fn fmt_poly(coeffs: &[String], var: &str) -> String {
    let mut parts: Vec<String> = vec![];
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c == "0" {
            continue;
        }
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, c.clone()),
        };
        let mon = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let body = if i == 0 {
            mag
        } else if mag == "1" {
            mon
        } else if mag.contains('/') {
            format!("({mag})*{mon}")
        } else {
            format!("{mag}*{mon}")
        };
        if parts.is_empty() {
            parts.push(if neg { format!("-{body}") } else { body });
        } else {
            parts.push(format!("{} {body}", if neg { "-" } else { "+" }));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

impl Ring for Field {
    type E = Scalar;
    fn zero(&self) -> Scalar {
        Field::zero(self)
    }
    fn one(&self) -> Scalar {
        Field::one(self)
    }
    fn is_zero(&self, a: &Scalar) -> bool {
        Field::is_zero(self, a)
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Field::add(self, a, b)
    }
    fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Field::sub(self, a, b)
    }
    fn neg(&self, a: &Scalar) -> Scalar {
        Field::neg(self, a)
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Field::mul(self, a, b)
    }
    fn inv(&self, a: &Scalar) -> Option<Scalar> {
        Field::inv(self, a).ok()
    }
}

/// Rational roots of an integer-coefficient-clearable polynomial over Q.
pub(crate) fn rational_roots(p: &[BigRational]) -> Vec<BigRational> {
    let p = ring::trim(&QQ, p.to_vec());
    if p.len() <= 1 {
        return vec![];
    }
    let mut out = vec![];
    let shift = p.iter().take_while(|c| c.is_zero()).count();
    if shift > 0 {
        out.push(rat(0));
    }
    let p: Vec<BigRational> = p[shift..].to_vec();
    if p.len() <= 1 {
        return out;
    }
    let mut l = BigInt::one();
    for c in &p {
        l = l.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    let (Some(d0), Some(dn)) = (divisors(&a0), divisors(&an)) else {
        return out;
    };
    for num in &d0 {
        for den in &dn {
            for sign in [1, -1] {
                let cand = BigRational::new(BigInt::from(sign) * num, den.clone());
                if !out.contains(&cand) && ring::eval(&QQ, &p, &cand).is_zero() {
                    out.push(cand);
                }
            }
        }
    }
    out
}

fn divisors(a: &BigInt) -> Option<Vec<BigInt>> {
    let a = a.to_u64().filter(|&x| x <= 1_000_000_000_000)?;
    let mut out = vec![];
    let mut d = 1u64;
    while d * d <= a {
        if a % d == 0 {
            out.push(BigInt::from(d));
            if d * d != a {
                out.push(BigInt::from(a / d));
            }
        }
        d += 1;
    }
    Some(out)
}

impl Scalar {
    pub fn is_rat(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(x) => write!(f, "{x}"),
            Scalar::Fp(x) => write!(f, "{x}"),
            Scalar::Cyc(x) => write!(f, "{}", fmt_poly(&x.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "zeta")),
            Scalar::Gf(x) => write!(f, "{}", fmt_poly(&x.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "a")),
            Scalar::RatFn(n, d) => {
                let ns = fmt_poly(&n.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "v");
                if d.len() == 1 {
                    write!(f, "{ns}")
                } else {
                    let ds = fmt_poly(&d.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "v");
                    write!(f, "({ns})/({ds})")
                }
            }
        }
    }
}
