//! Annular involutions of {1..n}: the half-diagrams indexing cell bases.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// An involution of {1..n}, stored 0-based: `partner[i] = j` means i+1 <-> j+1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AnnularInvolution {
    partner: Vec<usize>,
}

impl AnnularInvolution {
    pub fn identity(n: usize) -> AnnularInvolution {
        AnnularInvolution { partner: (0..n).collect() }
    }

    /// From a 1-based partner array; checks involution and annularity.
    pub fn from_partners(partners: &[usize]) -> Result<AnnularInvolution> {
        let n = partners.len();
        let p: Vec<usize> = partners
            .iter()
            .map(|&x| if x >= 1 && x <= n { Ok(x - 1) } else { Err(Error::NotInvolution(format!("{partners:?}"))) })
            .collect::<Result<_>>()?;
        let s = AnnularInvolution { partner: p };
        if !is_annular_raw(&s.partner)? {
            return Err(Error::NotAnnular(format!("{partners:?}")));
        }
        Ok(s)
    }

    /// From disjoint 1-based pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<AnnularInvolution> {
        let mut p: Vec<usize> = (1..=n).collect();
        for &(a, b) in pairs {
            if a == 0 || b == 0 || a > n || b > n || a == b || p[a - 1] != a || p[b - 1] != b {
                return Err(Error::NotInvolution(format!("{pairs:?}")));
            }
            p[a - 1] = b;
            p[b - 1] = a;
        }
        AnnularInvolution::from_partners(&p)
    }

    pub(crate) fn from_raw(partner: Vec<usize>) -> AnnularInvolution {
        AnnularInvolution { partner }
    }

    pub fn n(&self) -> usize {
        self.partner.len()
    }
    /// 0-based partner of 0-based i.
    pub fn partner0(&self, i: usize) -> usize {
        self.partner[i]
    }
    pub fn partners1(&self) -> Vec<usize> {
        self.partner.iter().map(|x| x + 1).collect()
    }
    /// 0-based fixed points, increasing.
    pub fn fixed(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.partner[i] == i).collect()
    }
    pub fn t(&self) -> usize {
        self.fixed().len()
    }
    /// 1-based pairs (i, j) with i < j.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n()).filter(|&i| self.partner[i] > i).map(|i| (i + 1, self.partner[i] + 1)).collect()
    }

    /// Conjugation by i -> n+1-i.
    pub fn star(&self) -> AnnularInvolution {
        let n = self.n();
        let mut p = vec![0; n];
        for i in 0..n {
            p[n - 1 - i] = n - 1 - self.partner[i];
        }
        AnnularInvolution { partner: p }
    }

    /// The involution i -> S(i-1)+1 (indices mod n), i.e. S rotated one step right.
    pub fn rotate(&self) -> AnnularInvolution {
        let n = self.n();
        let mut p = vec![0; n];
        for i in 0..n {
            p[(i + 1) % n] = (self.partner[i] + 1) % n;
        }
        AnnularInvolution { partner: p }
    }
}

impl std::fmt::Display for AnnularInvolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let pairs = self.pairs();
        if pairs.is_empty() {
            return write!(f, "e");
        }
        for (a, b) in pairs {
            write!(f, "({a} {b})")?;
        }
        Ok(())
    }
}

fn is_annular_raw(p: &[usize]) -> Result<bool> {
    let n = p.len();
    for i in 0..n {
        if p[i] >= n || p[p[i]] != i {
            return Err(Error::NotInvolution(format!("{p:?}")));
        }
    }
    let fixed: Vec<usize> = (0..n).filter(|&i| p[i] == i).collect();
    for i in 0..n {
        let j = p[i];
        if j <= i {
            continue;
        }
        // the interval [i, j] must be mapped to itself
        if (i..=j).any(|k| p[k] < i || p[k] > j) {
            return Ok(false);
        }
        let inside = fixed.iter().filter(|&&f| f > i && f < j).count();
        if inside != 0 && inside != fixed.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Annularity test for a 1-based involution of {1..n}.
pub fn is_annular(partners: &[usize]) -> Result<bool> {
    let n = partners.len();
    let p: Vec<usize> = partners
        .iter()
        .map(|&x| if x >= 1 && x <= n { Ok(x - 1) } else { Err(Error::NotInvolution(format!("{partners:?}"))) })
        .collect::<Result<_>>()?;
    is_annular_raw(&p)
}

/// Non-crossing perfect matchings of the given consecutive positions.
fn noncrossing(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if points.is_empty() {
        return vec![vec![]];
    }
    let mut out = vec![];
    let first = points[0];
    for k in (1..points.len()).step_by(2) {
        let inner = noncrossing(&points[1..k]);
        let outer = noncrossing(&points[k + 1..]);
        for a in &inner {
            for b in &outer {
                let mut m = vec![(first, points[k])];
                m.extend(a.iter().cloned());
                m.extend(b.iter().cloned());
                out.push(m);
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, n, k, &mut vec![], &mut out);
    out
}

/// All annular involutions of {1..n} with exactly t fixed points, sorted.
///
/// Fixed points cut the circle into gaps; arcs never enclose a fixed point,
/// so each gap carries its own non-crossing matching (the gap running past n
/// back to 1 supplies the arcs that contain every fixed point).
pub fn enumerate_annular(n: usize, t: usize) -> Result<Vec<AnnularInvolution>> {
    if t > n || (n - t) % 2 != 0 {
        return Err(Error::ParityMismatch(format!("t = {t} for n = {n}")));
    }
    let mut out = vec![];
    if t == 0 {
        let pts: Vec<usize> = (0..n).collect();
        for m in noncrossing(&pts) {
            out.push(from_matching(n, &m));
        }
    } else {
        for fix in combinations(n, t) {
            let mut gaps: Vec<Vec<usize>> = vec![];
            for a in 0..t {
                let start = fix[a] + 1;
                let end = if a + 1 < t { fix[a + 1] } else { fix[0] + n };
                gaps.push((start..end).map(|x| x % n).collect());
            }
            if gaps.iter().any(|g| g.len() % 2 != 0) {
                continue;
            }
            let mut partial: Vec<Vec<(usize, usize)>> = vec![vec![]];
            for g in &gaps {
                let opts = noncrossing(g);
                let mut next = vec![];
                for p in &partial {
                    for o in &opts {
                        let mut q = p.clone();
                        q.extend(o.iter().cloned());
                        next.push(q);
                    }
                }
                partial = next;
            }
            for m in partial {
                out.push(from_matching(n, &m));
            }
        }
    }
    out.sort();
    Ok(out)
}

fn from_matching(n: usize, m: &[(usize, usize)]) -> AnnularInvolution {
    let mut p: Vec<usize> = (0..n).collect();
    for &(a, b) in m {
        p[a] = b;
        p[b] = a;
    }
    AnnularInvolution { partner: p }
}

/// Parity offset r(S1, S2): the least w in {0, 1} making [S1, S2, w] even.
pub fn r_offset(s1: &AnnularInvolution, s2: &AnnularInvolution) -> Result<u8> {
    let d = crate::diagrams::AffineDiagram::from_triple(s1, s2, 0)?;
    Ok(if d.parity_is_even() { 0 } else { 1 })
}
