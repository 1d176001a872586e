// Dense univariate polynomial routines over a small ring abstraction.
// Coefficient vectors are lowest degree first and kept trimmed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;

pub trait Ring {
    type E: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
}

/// The rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct QQ;

impl Ring for QQ {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
}

/// Integers modulo a prime p < 2^32.
#[derive(Clone, Copy, Debug)]
pub struct Zp(pub u64);

impl Zp {
    pub fn reduce(&self, a: &BigInt) -> u64 {
        let p = BigInt::from(self.0);
        let r = ((a % &p) + &p) % &p;
        r.try_into().unwrap()
    }
    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let p = self.0;
        let mut r = 1 % p;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }
}

impl Ring for Zp {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.0 - 2))
        }
    }
}

pub fn trim<R: Ring>(r: &R, mut a: Vec<R::E>) -> Vec<R::E> {
    while let Some(last) = a.last() {
        if r.is_zero(last) {
            a.pop();
        } else {
            break;
        }
    }
    a
}

pub fn degree<R: Ring>(a: &[R::E]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn add<R: Ring>(r: &R, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => r.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        });
    }
    trim(r, out)
}

pub fn sub<R: Ring>(r: &R, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => r.sub(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => r.neg(y),
            (None, None) => unreachable!(),
        });
    }
    trim(r, out)
}

pub fn scale<R: Ring>(r: &R, a: &[R::E], c: &R::E) -> Vec<R::E> {
    if r.is_zero(c) {
        return vec![];
    }
    trim(r, a.iter().map(|x| r.mul(x, c)).collect())
}

pub fn mul<R: Ring>(r: &R, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = r.mul(x, y);
            out[i + j] = r.add(&out[i + j], &t);
        }
    }
    trim(r, out)
}

/// Division with remainder; the leading coefficient of `b` must be a unit.
pub fn divrem<R: Ring>(r: &R, a: &[R::E], b: &[R::E]) -> (Vec<R::E>, Vec<R::E>) {
    let db = degree::<R>(b).expect("division by zero polynomial");
    let lc_inv = r.inv(&b[db]).expect("leading coefficient not invertible");
    let mut rem: Vec<R::E> = a.to_vec();
    if a.len() <= db {
        return (vec![], trim(r, rem));
    }
    let mut quot = vec![r.zero(); a.len() - db];
    for k in (0..quot.len()).rev() {
        let c = r.mul(&rem[k + db], &lc_inv);
        if r.is_zero(&c) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = r.mul(&c, y);
            rem[k + j] = r.sub(&rem[k + j], &t);
        }
        quot[k] = c;
    }
    rem.truncate(db);
    (trim(r, quot), trim(r, rem))
}

pub fn rem<R: Ring>(r: &R, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    if a.len() < b.len() {
        return a.to_vec();
    }
    divrem(r, a, b).1
}

pub fn monic<R: Ring>(r: &R, a: &[R::E]) -> Vec<R::E> {
    match a.last() {
        None => vec![],
        Some(lc) => {
            let inv = r.inv(lc).expect("leading coefficient not invertible");
            scale(r, a, &inv)
        }
    }
}

pub fn gcd<R: Ring>(r: &R, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let t = rem(r, &x, &y);
        x = y;
        y = t;
    }
    monic(r, &x)
}

/// Returns (g, s, t) with s*a + t*b = g and g monic.
pub fn ext_gcd<R: Ring>(r: &R, a: &[R::E], b: &[R::E]) -> (Vec<R::E>, Vec<R::E>, Vec<R::E>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![r.one()], vec![]);
    let (mut t0, mut t1) = (vec![], vec![r.one()]);
    while !r1.is_empty() {
        let (q, rr) = divrem(r, &r0, &r1);
        let s2 = sub(r, &s0, &mul(r, &q, &s1));
        let t2 = sub(r, &t0, &mul(r, &q, &t1));
        r0 = std::mem::replace(&mut r1, rr);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (vec![], s0, t0),
        Some(lc) => {
            let inv = r.inv(lc).unwrap();
            (scale(r, &r0, &inv), scale(r, &s0, &inv), scale(r, &t0, &inv))
        }
    }
}

pub fn mulmod<R: Ring>(r: &R, a: &[R::E], b: &[R::E], m: &[R::E]) -> Vec<R::E> {
    rem(r, &mul(r, a, b), m)
}

pub fn powmod<R: Ring>(r: &R, base: &[R::E], mut e: u128, m: &[R::E]) -> Vec<R::E> {
    let mut acc = rem(r, &[r.one()], m);
    let mut b = rem(r, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(r, &acc, &b, m);
        }
        b = mulmod(r, &b, &b, m);
        e >>= 1;
    }
    acc
}

pub fn eval<R: Ring>(r: &R, a: &[R::E], x: &R::E) -> R::E {
    let mut acc = r.zero();
    for c in a.iter().rev() {
        acc = r.add(&r.mul(&acc, x), c);
    }
    acc
}

pub fn derivative<R: Ring>(r: &R, a: &[R::E]) -> Vec<R::E> {
    let mut out = Vec::new();
    for (i, c) in a.iter().enumerate().skip(1) {
        let mut k = r.zero();
        for _ in 0..i {
            k = r.add(&k, c);
        }
        out.push(k);
    }
    trim(r, out)
}
