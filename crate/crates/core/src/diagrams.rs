//! Affine n-diagrams, stored on the universal cover of the cylinder.
//!
//! Node i of a boundary row is lifted to the integer positions i + kn. For each
//! node 1..n we record where its edge ends, as a lifted position in the top or
//! bottom row. Isotopy classes of diagrams correspond exactly to these lifted
//! matchings, so the stored data is already canonical.

use crate::error::{Error, Result};
use crate::involutions::AnnularInvolution;
use serde_json::{json, Value};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Top(i64),
    Bottom(i64),
}

impl End {
    fn shift(self, s: i64) -> End {
        match self {
            End::Top(x) => End::Top(x + s),
            End::Bottom(x) => End::Bottom(x + s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineDiagram {
    n: usize,
    top: Vec<End>,
    bottom: Vec<End>,
    bands: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Identity,
    U,
    UInverse,
    E(usize),
}

/// A fixed-point-free matching of the integers, periodic with period n and
/// non-crossing: the half-diagrams of the t = 0 sector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiftedMatching {
    partner: Vec<i64>,
}

impl LiftedMatching {
    pub fn n(&self) -> usize {
        self.partner.len()
    }
    /// 1-based lifted partners of the nodes 1..n.
    pub fn partners(&self) -> &[i64] {
        &self.partner
    }
    pub fn partner_of(&self, p: i64) -> i64 {
        let n = self.n() as i64;
        let r = (p - 1).rem_euclid(n);
        self.partner[r as usize] + (p - 1 - r)
    }

    pub fn new(partners: Vec<i64>) -> Result<LiftedMatching> {
        let m = LiftedMatching { partner: partners };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n() as i64;
        let bad = || Error::NotAnnular(format!("lifted matching {:?}", self.partner));
        if n < 2 {
            return Err(bad());
        }
        for p in 1..=n {
            let q = self.partner_of(p);
            if q == p || self.partner_of(q) != p || (q - p).abs() >= n {
                return Err(bad());
            }
        }
        // arcs (p, q) with p in 1..n; translates by at most one period can meet
        let arcs: Vec<(i64, i64)> = (1..=n).map(|p| (p.min(self.partner_of(p)), p.max(self.partner_of(p)))).collect();
        for &(a, b) in &arcs {
            for s in -2..=2 {
                for &(c, d) in &arcs {
                    let (c, d) = (c + s * n, d + s * n);
                    if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                        return Err(bad());
                    }
                }
            }
        }
        Ok(())
    }

    /// Reflection x -> n+1-x.
    pub fn star(&self) -> LiftedMatching {
        let n = self.n() as i64;
        let partner = (1..=n).map(|p| n + 1 - self.partner_of(n + 1 - p)).collect();
        LiftedMatching { partner }
    }

    /// Shift one step to the right, as left multiplication by u does to the top row.
    pub fn rotate(&self) -> LiftedMatching {
        let n = self.n() as i64;
        let partner = (1..=n).map(|p| self.partner_of(p - 1) + 1).collect();
        LiftedMatching { partner }
    }

    /// The underlying fixed-point-free involution of {1..n}.
    pub fn projection(&self) -> AnnularInvolution {
        let n = self.n() as i64;
        AnnularInvolution::from_raw(self.partner.iter().map(|&q| (q - 1).rem_euclid(n) as usize).collect())
    }
}

impl fmt::Display for LiftedMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.partner.iter().map(|x| x.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

/// All lifted matchings for n even, sorted.
pub fn enumerate_lifted(n: usize) -> Result<Vec<LiftedMatching>> {
    if n % 2 != 0 {
        return Err(Error::OddN);
    }
    let n_i = n as i64;
    let mut out = vec![];
    let mut partner: Vec<Option<i64>> = vec![None; n];
    fn rec(n: i64, partner: &mut Vec<Option<i64>>, out: &mut Vec<LiftedMatching>) {
        let Some(i) = partner.iter().position(|x| x.is_none()) else {
            let m = LiftedMatching { partner: partner.iter().map(|x| x.unwrap()).collect() };
            if m.validate().is_ok() {
                out.push(m);
            }
            return;
        };
        let p = i as i64 + 1;
        let mut d = -(n - 1);
        while d < n {
            if d % 2 != 0 {
                let q = p + d;
                let r = (q - 1).rem_euclid(n) as usize;
                if r != i && partner[r].is_none() {
                    partner[i] = Some(q);
                    partner[r] = Some(p + (r as i64 + 1 - q));
                    rec(n, partner, out);
                    partner[i] = None;
                    partner[r] = None;
                }
            }
            d += 1;
        }
    }
    rec(n_i, &mut partner, &mut out);
    out.sort();
    out.dedup();
    Ok(out)
}

impl AffineDiagram {
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn bands(&self) -> u32 {
        self.bands
    }
    pub fn top_ends(&self) -> &[End] {
        &self.top
    }
    pub fn bottom_ends(&self) -> &[End] {
        &self.bottom
    }

    fn locate(&self, p: i64) -> (usize, i64) {
        let n = self.n as i64;
        let r = (p - 1).rem_euclid(n);
        (r as usize, p - 1 - r)
    }
    /// Other end of the edge at lifted top position p.
    pub fn top_at(&self, p: i64) -> End {
        let (r, s) = self.locate(p);
        self.top[r].shift(s)
    }
    pub fn bottom_at(&self, p: i64) -> End {
        let (r, s) = self.locate(p);
        self.bottom[r].shift(s)
    }

    /// Builds a diagram from raw lifted ends, checking it is a genuine
    /// non-crossing periodic matching.
    pub fn from_ends(n: usize, top: Vec<End>, bottom: Vec<End>, bands: u32) -> Result<AffineDiagram> {
        if n < 3 {
            return Err(Error::BadIndex(format!("n = {n} < 3")));
        }
        if top.len() != n || bottom.len() != n {
            return Err(Error::SizeMismatch(format!("expected {n} ends per row")));
        }
        let d = AffineDiagram { n, top, bottom, bands };
        d.validate()?;
        Ok(d)
    }

    /// Boundary order on the strip: top row left to right, then bottom row
    /// right to left. Chords cross iff their ends interleave.
    fn key(e: End) -> (u8, i64) {
        match e {
            End::Top(x) => (0, x),
            End::Bottom(x) => (1, -x),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n as i64;
        let bad = |m: &str| Error::NotAnnular(format!("{m}: {self:?}"));
        let mut edges = vec![];
        for p in 1..=n {
            let e = self.top_at(p);
            let back = match e {
                End::Top(x) => self.top_at(x),
                End::Bottom(x) => self.bottom_at(x),
            };
            if back != End::Top(p) || e == End::Top(p) {
                return Err(bad("top edge is not an involution"));
            }
            edges.push((End::Top(p), e));
            let e = self.bottom_at(p);
            let back = match e {
                End::Top(x) => self.top_at(x),
                End::Bottom(x) => self.bottom_at(x),
            };
            if back != End::Bottom(p) || e == End::Bottom(p) {
                return Err(bad("bottom edge is not an involution"));
            }
            edges.push((End::Bottom(p), e));
        }
        let span = edges
            .iter()
            .map(|(a, b)| {
                let (x, y) = (pos(*a), pos(*b));
                (x - y).abs()
            })
            .max()
            .unwrap_or(0);
        let reach = span / n + 2;
        for &(a, b) in &edges {
            let (a, b) = order(Self::key(a), Self::key(b));
            for s in -reach..=reach {
                for &(c, d) in &edges {
                    let (c, d) = order(Self::key(c.shift(s * n)), Self::key(d.shift(s * n)));
                    if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                        return Err(bad("edges cross"));
                    }
                }
            }
        }
        if self.bands > 0 && self.t() > 0 {
            return Err(bad("bands need t = 0"));
        }
        Ok(())
    }

    pub fn generator(n: usize, which: Generator) -> Result<AffineDiagram> {
        if n < 3 {
            return Err(Error::BadIndex(format!("n = {n} < 3")));
        }
        let ni = n as i64;
        let pos: Vec<i64> = (1..=ni).collect();
        let (top, bottom) = match which {
            Generator::Identity => (pos.iter().map(|&p| End::Bottom(p)).collect(), pos.iter().map(|&p| End::Top(p)).collect()),
            Generator::U => (pos.iter().map(|&p| End::Bottom(p - 1)).collect(), pos.iter().map(|&p| End::Top(p + 1)).collect()),
            Generator::UInverse => {
                (pos.iter().map(|&p| End::Bottom(p + 1)).collect(), pos.iter().map(|&p| End::Top(p - 1)).collect())
            }
            Generator::E(i) => {
                if i == 0 || i > n {
                    return Err(Error::BadIndex(format!("E({i}) for n = {n}")));
                }
                let i = i as i64;
                let mut top: Vec<End> = pos.iter().map(|&p| End::Bottom(p)).collect();
                let mut bottom: Vec<End> = pos.iter().map(|&p| End::Top(p)).collect();
                let a = (i - 1) as usize;
                let b = (i % ni) as usize;
                // the arc joins i and i+1 (lifted), node i+1 sits at index b
                let (pa, pb) = (i, i + 1);
                let pb_base = b as i64 + 1;
                top[a] = End::Top(pb);
                top[b] = End::Top(pa - (pb - pb_base));
                bottom[a] = End::Bottom(pb);
                bottom[b] = End::Bottom(pa - (pb - pb_base));
                (top, bottom)
            }
        };
        Ok(AffineDiagram { n, top, bottom, bands: 0 })
    }

    pub fn identity(n: usize) -> AffineDiagram {
        AffineDiagram::generator(n, Generator::Identity).unwrap()
    }

    /// Number of through-strings.
    pub fn t(&self) -> usize {
        self.top.iter().filter(|e| matches!(e, End::Bottom(_))).count()
    }

    /// Stacks `a` on top of `b`; returns the number of contractible loops
    /// removed and the resulting diagram. Loops that wind around the cylinder
    /// become bands.
    pub fn compose(a: &AffineDiagram, b: &AffineDiagram) -> Result<(u32, AffineDiagram)> {
        if a.n != b.n {
            return Err(Error::SizeMismatch(format!("n = {} vs {}", a.n, b.n)));
        }
        let n = a.n as i64;
        let res = |m: i64| (m - 1).rem_euclid(n) as usize;
        let mut seen = vec![false; a.n];
        // walk from middle node m; `down` means the next edge is one of b's top edges
        let follow = |mut m: i64, mut down: bool, seen: &mut Vec<bool>| -> End {
            loop {
                seen[res(m)] = true;
                if down {
                    match b.top_at(m) {
                        End::Bottom(x) => return End::Bottom(x),
                        End::Top(m2) => {
                            m = m2;
                            down = false;
                        }
                    }
                } else {
                    match a.bottom_at(m) {
                        End::Top(x) => return End::Top(x),
                        End::Bottom(m2) => {
                            m = m2;
                            down = true;
                        }
                    }
                }
            }
        };
        let mut top = Vec::with_capacity(a.n);
        let mut bottom = Vec::with_capacity(a.n);
        for p in 1..=n {
            top.push(match a.top_at(p) {
                End::Top(x) => End::Top(x),
                End::Bottom(m) => follow(m, true, &mut seen),
            });
        }
        for p in 1..=n {
            bottom.push(match b.bottom_at(p) {
                End::Bottom(x) => End::Bottom(x),
                End::Top(m) => follow(m, false, &mut seen),
            });
        }
        let mut loops = 0;
        let mut bands = a.bands + b.bands;
        for r in 0..a.n {
            if seen[r] {
                continue;
            }
            let m0 = r as i64 + 1;
            let mut m = m0;
            let mut down = true;
            loop {
                seen[res(m)] = true;
                if down {
                    match b.top_at(m) {
                        End::Top(m2) => m = m2,
                        End::Bottom(_) => unreachable!("closed component reached the bottom row"),
                    }
                    down = false;
                } else {
                    match a.bottom_at(m) {
                        End::Bottom(m2) => m = m2,
                        End::Top(_) => unreachable!("closed component reached the top row"),
                    }
                    down = true;
                }
                if down && res(m) == r {
                    break;
                }
            }
            if m == m0 {
                loops += 1;
            } else {
                bands += 1;
            }
        }
        let c = AffineDiagram { n: a.n, top, bottom, bands };
        debug_assert!(c.bands == 0 || c.t() == 0);
        Ok((loops, c))
    }

    /// Top half as an annular involution (through-string ends are fixed points).
    pub fn top_involution(&self) -> AnnularInvolution {
        half_involution(self.n, &self.top, true)
    }
    pub fn bottom_involution(&self) -> AnnularInvolution {
        half_involution(self.n, &self.bottom, false)
    }

    /// Winding number: the bottom through-string ends at positions 1..n are
    /// joined to top positions F_{a+w} of the lifted fixed-point sequence.
    pub fn winding_number(&self) -> Result<i64> {
        if self.t() == 0 {
            return Err(Error::ZeroThroughStrings);
        }
        let n = self.n as i64;
        Ok(self
            .bottom
            .iter()
            .filter_map(|e| match e {
                End::Top(x) => Some((x - 1).div_euclid(n)),
                End::Bottom(_) => None,
            })
            .sum())
    }

    pub fn to_triple(&self) -> Triple {
        if self.t() == 0 {
            let n = self.n as i64;
            let p1 = (1..=n)
                .map(|p| match self.top_at(p) {
                    End::Top(x) => x,
                    End::Bottom(_) => unreachable!(),
                })
                .collect();
            let p2 = (1..=n)
                .map(|p| match self.bottom_at(p) {
                    End::Bottom(x) => x,
                    End::Top(_) => unreachable!(),
                })
                .collect();
            Triple::Zero(LiftedMatching { partner: p1 }, LiftedMatching { partner: p2 }, self.bands)
        } else {
            Triple::Through(self.top_involution(), self.bottom_involution(), self.winding_number().unwrap())
        }
    }

    /// The diagram [S1, S2, w].
    pub fn from_triple(s1: &AnnularInvolution, s2: &AnnularInvolution, w: i64) -> Result<AffineDiagram> {
        if s1.n() != s2.n() {
            return Err(Error::SizeMismatch(format!("n = {} vs {}", s1.n(), s2.n())));
        }
        let (t1, t2) = (s1.t(), s2.t());
        if t1 != t2 {
            return Err(Error::MismatchedT(t1, t2));
        }
        if t1 == 0 {
            return Err(Error::ZeroThroughStrings);
        }
        let n = s1.n();
        if n < 3 {
            return Err(Error::BadIndex(format!("n = {n} < 3")));
        }
        let ni = n as i64;
        let t = t1 as i64;
        let mut top = vec![End::Top(0); n];
        let mut bottom = vec![End::Top(0); n];
        arcs_into(s1, &mut top, true);
        arcs_into(s2, &mut bottom, false);
        let f: Vec<i64> = s1.fixed().iter().map(|&x| x as i64 + 1).collect();
        let g: Vec<i64> = s2.fixed().iter().map(|&x| x as i64 + 1).collect();
        let lift = |seq: &Vec<i64>, k: i64| seq[k.rem_euclid(t) as usize] + ni * k.div_euclid(t);
        for a in 0..t {
            bottom[(g[a as usize] - 1) as usize] = End::Top(lift(&f, a + w));
            top[(f[a as usize] - 1) as usize] = End::Bottom(lift(&g, a - w));
        }
        Ok(AffineDiagram { n, top, bottom, bands: 0 })
    }

    /// The t = 0 diagram [P1, P2, k].
    pub fn from_zero_triple(p1: &LiftedMatching, p2: &LiftedMatching, k: u32) -> Result<AffineDiagram> {
        if p1.n() != p2.n() {
            return Err(Error::SizeMismatch(format!("n = {} vs {}", p1.n(), p2.n())));
        }
        let n = p1.n();
        if n < 3 {
            return Err(Error::BadIndex(format!("n = {n} < 3")));
        }
        Ok(AffineDiagram {
            n,
            top: p1.partner.iter().map(|&x| End::Top(x)).collect(),
            bottom: p2.partner.iter().map(|&x| End::Bottom(x)).collect(),
            bands: k,
        })
    }

    pub fn from_any_triple(t: &Triple) -> Result<AffineDiagram> {
        match t {
            Triple::Through(s1, s2, w) => AffineDiagram::from_triple(s1, s2, *w),
            Triple::Zero(p1, p2, k) => AffineDiagram::from_zero_triple(p1, p2, *k),
        }
    }

    /// Number of intersections with the vertical line x = i + 1/2 (on the strip,
    /// one period of edges and all their translates).
    pub fn crossings_at(&self, i: i64) -> i64 {
        let n = self.n as i64;
        let c2 = 2 * i + 1;
        let count = |lo: i64, hi: i64| (c2 - 2 * lo).div_euclid(2 * n) - (c2 - 2 * hi).div_euclid(2 * n);
        let mut total = self.bands as i64;
        for p in 1..=n {
            match self.top_at(p) {
                End::Top(x) if x > p => total += count(p, x),
                End::Bottom(x) => total += count(p.min(x), p.max(x)),
                _ => {}
            }
            if let End::Bottom(x) = self.bottom_at(p) {
                if x > p {
                    total += count(p, x);
                }
            }
        }
        total
    }

    /// Even intersection property (membership in the oriented subalgebra).
    pub fn parity_is_even(&self) -> bool {
        self.crossings_at(0) % 2 == 0
    }

    pub fn is_positive(&self) -> Result<bool> {
        let w = self.winding_number()?;
        Ok(w >= (self.n * self.t()) as i64)
    }

    /// The anti-involution: reflect x -> n+1-x and exchange the two rows.
    pub fn star(&self) -> AffineDiagram {
        let n = self.n as i64;
        let flip = |e: End| match e {
            End::Top(x) => End::Bottom(n + 1 - x),
            End::Bottom(x) => End::Top(n + 1 - x),
        };
        let top = (1..=n).map(|p| flip(self.bottom_at(n + 1 - p))).collect();
        let bottom = (1..=n).map(|p| flip(self.top_at(n + 1 - p))).collect();
        AffineDiagram { n: self.n, top, bottom, bands: self.bands }
    }

    /// Membership in the affine Temperley-Lieb subalgebra: the identity, or a
    /// diagram with a horizontal edge and the even intersection property.
    pub fn is_tl(&self) -> bool {
        *self == AffineDiagram::identity(self.n) || (self.t() < self.n && self.parity_is_even())
    }

    pub fn to_json(&self) -> Value {
        match self.to_triple() {
            Triple::Through(s1, s2, w) => json!({"n": self.n, "t": s1.t(), "S1": s1.partners1(), "S2": s2.partners1(), "w": w}),
            Triple::Zero(p1, p2, k) => json!({"n": self.n, "t": 0, "P1": p1.partner, "P2": p2.partner, "k": k}),
        }
    }

    pub fn from_json(v: &Value) -> Result<AffineDiagram> {
        let bad = || Error::Parse(format!("bad diagram {v}"));
        let n = v.get("n").and_then(|x| x.as_u64()).ok_or_else(bad)? as usize;
        let t = v.get("t").and_then(|x| x.as_u64()).ok_or_else(bad)?;
        let ints = |key: &str| -> Result<Vec<i64>> {
            v.get(key).and_then(|x| x.as_array()).ok_or_else(bad)?.iter().map(|x| x.as_i64().ok_or_else(bad)).collect()
        };
        let d = if t == 0 {
            let k = v.get("k").and_then(|x| x.as_u64()).ok_or_else(bad)? as u32;
            AffineDiagram::from_zero_triple(&LiftedMatching::new(ints("P1")?)?, &LiftedMatching::new(ints("P2")?)?, k)?
        } else {
            let s = |key: &str| -> Result<AnnularInvolution> {
                let p: Vec<usize> = ints(key)?.into_iter().map(|x| x.max(0) as usize).collect();
                AnnularInvolution::from_partners(&p)
            };
            let w = v.get("w").and_then(|x| x.as_i64()).ok_or_else(bad)?;
            AffineDiagram::from_triple(&s("S1")?, &s("S2")?, w)?
        };
        if d.n != n || d.t() as u64 != t {
            return Err(bad());
        }
        Ok(d)
    }
}

impl fmt::Display for AffineDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_triple() {
            Triple::Through(s1, s2, w) => write!(f, "[{s1}, {s2}, {w}]"),
            Triple::Zero(p1, p2, k) => write!(f, "[{p1}, {p2}, {k}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Triple {
    Through(AnnularInvolution, AnnularInvolution, i64),
    Zero(LiftedMatching, LiftedMatching, u32),
}

fn pos(e: End) -> i64 {
    match e {
        End::Top(x) | End::Bottom(x) => x,
    }
}

fn order<T: Ord>(a: T, b: T) -> (T, T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn half_involution(n: usize, ends: &[End], top: bool) -> AnnularInvolution {
    let ni = n as i64;
    let p = (0..n)
        .map(|i| match (ends[i], top) {
            (End::Top(x), true) | (End::Bottom(x), false) => (x - 1).rem_euclid(ni) as usize,
            _ => i,
        })
        .collect();
    AnnularInvolution::from_raw(p)
}

/// Writes the arcs of s into one row: an arc whose interval holds the fixed
/// points runs the other way round the cylinder.
fn arcs_into(s: &AnnularInvolution, row: &mut [End], top: bool) {
    let n = s.n() as i64;
    let fixed: Vec<i64> = s.fixed().iter().map(|&x| x as i64 + 1).collect();
    let mk = |x: i64| if top { End::Top(x) } else { End::Bottom(x) };
    for (i, j) in s.pairs() {
        let (i, j) = (i as i64, j as i64);
        let wraps = !fixed.is_empty() && fixed.iter().any(|&f| i < f && f < j);
        if wraps {
            row[(j - 1) as usize] = mk(i + n);
            row[(i - 1) as usize] = mk(j - n);
        } else {
            row[(i - 1) as usize] = mk(j);
            row[(j - 1) as usize] = mk(i);
        }
    }
}
