use super::ring;
use super::{Field, Scalar};
use crate::error::{Error, Result};
use std::fmt;

/// Univariate polynomial over a `Field`, lowest degree first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(f: &Field, coeffs: Vec<Scalar>) -> Poly {
        Poly { coeffs: ring::trim(f, coeffs) }
    }
    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }
    pub fn constant(f: &Field, c: Scalar) -> Poly {
        Poly::new(f, vec![c])
    }
    pub fn one(f: &Field) -> Poly {
        Poly::constant(f, f.one())
    }
    pub fn x(f: &Field) -> Poly {
        Poly::new(f, vec![f.zero(), f.one()])
    }
    pub fn monomial(f: &Field, k: usize) -> Poly {
        let mut c = vec![f.zero(); k + 1];
        c[k] = f.one();
        Poly { coeffs: c }
    }
    /// X - r
    pub fn linear(f: &Field, r: &Scalar) -> Poly {
        Poly::new(f, vec![f.neg(r), f.one()])
    }
    /// X^t - q
    pub fn xt_minus(f: &Field, t: usize, q: &Scalar) -> Poly {
        let mut c = vec![f.zero(); t + 1];
        c[0] = f.neg(q);
        c[t] = f.add(&c[t], &f.one());
        Poly::new(f, c)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }
    pub fn coeff(&self, f: &Field, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }
    pub fn degree(&self) -> Option<usize> {
        ring::degree::<Field>(&self.coeffs)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn is_monic(&self, f: &Field) -> bool {
        self.coeffs.last().map(|c| f.is_one(c)).unwrap_or(false)
    }
    pub fn add(&self, f: &Field, o: &Poly) -> Poly {
        Poly { coeffs: ring::add(f, &self.coeffs, &o.coeffs) }
    }
    pub fn sub(&self, f: &Field, o: &Poly) -> Poly {
        Poly { coeffs: ring::sub(f, &self.coeffs, &o.coeffs) }
    }
    pub fn mul(&self, f: &Field, o: &Poly) -> Poly {
        Poly { coeffs: ring::mul(f, &self.coeffs, &o.coeffs) }
    }
    pub fn scale(&self, f: &Field, c: &Scalar) -> Poly {
        Poly { coeffs: ring::scale(f, &self.coeffs, c) }
    }
    pub fn pow(&self, f: &Field, e: usize) -> Poly {
        let mut acc = Poly::one(f);
        for _ in 0..e {
            acc = acc.mul(f, self);
        }
        acc
    }
    pub fn divrem(&self, f: &Field, o: &Poly) -> Result<(Poly, Poly)> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = ring::divrem(f, &self.coeffs, &o.coeffs);
        Ok((Poly { coeffs: q }, Poly { coeffs: r }))
    }
    pub fn rem(&self, f: &Field, o: &Poly) -> Poly {
        Poly { coeffs: ring::rem(f, &self.coeffs, &o.coeffs) }
    }
    pub fn gcd(&self, f: &Field, o: &Poly) -> Poly {
        Poly { coeffs: ring::gcd(f, &self.coeffs, &o.coeffs) }
    }
    pub fn ext_gcd(&self, f: &Field, o: &Poly) -> (Poly, Poly, Poly) {
        let (g, s, t) = ring::ext_gcd(f, &self.coeffs, &o.coeffs);
        (Poly { coeffs: g }, Poly { coeffs: s }, Poly { coeffs: t })
    }
    pub fn mulmod(&self, f: &Field, o: &Poly, m: &Poly) -> Poly {
        self.mul(f, o).rem(f, m)
    }
    pub fn eval(&self, f: &Field, x: &Scalar) -> Scalar {
        ring::eval(f, &self.coeffs, x)
    }
    pub fn derivative(&self, f: &Field) -> Poly {
        Poly { coeffs: ring::derivative(f, &self.coeffs) }
    }
    /// p(mu * Y) as a polynomial in Y.
    pub fn rescale(&self, f: &Field, mu: &Scalar) -> Poly {
        let mut pw = f.one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(f.mul(c, &pw));
            pw = f.mul(&pw, mu);
        }
        Poly::new(f, out)
    }

    /// X^k modulo `m`, for any integer k; negative k needs m(0) != 0.
    pub fn x_pow_mod(f: &Field, k: i64, m: &Poly) -> Result<Poly> {
        let base = if k >= 0 {
            Poly::x(f).rem(f, m)
        } else {
            Poly::x_inverse_mod(f, m)?
        };
        Ok(Poly { coeffs: ring::powmod(f, &base.coeffs, k.unsigned_abs() as u128, &m.coeffs) })
    }

    /// The inverse of X modulo m.
    pub fn x_inverse_mod(f: &Field, m: &Poly) -> Result<Poly> {
        let m0 = m.coeff(f, 0);
        if f.is_zero(&m0) {
            return Err(Error::DivisionByZero);
        }
        // m = m0 + X*h  =>  X * (-h/m0) = 1 mod m
        let h = Poly::new(f, m.coeffs[1..].to_vec());
        let c = f.neg(&f.inv(&m0)?);
        Ok(h.scale(f, &c).rem(f, m))
    }

    pub fn to_string_in(&self, f: &Field, var: &str) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| {
                let s = f.fmt(c);
                if s.contains(' ') {
                    format!("({s})")
                } else {
                    s
                }
            })
            .collect();
        super::fmt_poly(&parts, var)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| {
                let s = c.to_string();
                if s.contains(' ') {
                    format!("({s})")
                } else {
                    s
                }
            })
            .collect();
        write!(f, "{}", super::fmt_poly(&parts, "X"))
    }
}
