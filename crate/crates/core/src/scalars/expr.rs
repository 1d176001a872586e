// Small arithmetic expression language for scalars and polynomials in X:
//   expr := term (('+'|'-') term)*
//   term := unary (('*'|'/') unary)*
//   unary := '-' unary | atom ('^' ['-'] int)?
//   atom := int | name | '(' expr ')'
// Names: zeta (cyclotomic generator), a (GF generator), v, X (polynomials only).

use super::{Field, Poly, Scalar};
use crate::error::{Error, Result};
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = vec![];
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Num(txt.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Ast {
    Num(BigInt),
    Name(String),
    Neg(Box<Ast>),
    Bin(char, Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Ast::Bin('+', Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Ast::Bin('-', Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }
    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Ast::Bin('*', Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Ast::Bin('/', Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Name(_)) | Some(Tok::Op('('))) {
                // implicit multiplication: 2zeta, 3(X-1)
                lhs = Ast::Bin('*', Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }
    fn unary(&mut self) -> Result<Ast> {
        if self.eat('-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: i64 = n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    return Ok(Ast::Pow(Box::new(base), if neg { -e } else { e }));
                }
                _ => return Err(Error::Parse("expected integer exponent".into())),
            }
        }
        Ok(base)
    }
    fn atom(&mut self) -> Result<Ast> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Ast::Num(n))
            }
            Some(Tok::Name(s)) => {
                self.pos += 1;
                Ok(Ast::Name(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok(e)
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

fn parse(s: &str) -> Result<Ast> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in `{s}`")));
    }
    Ok(e)
}

fn name_value(f: &Field, name: &str) -> Result<Scalar> {
    match name {
        "zeta" | "z" => f.gen_zeta(),
        "a" => f.gen_a(),
        "v" => f.var_v(),
        "delta" => Ok(f.delta()),
        _ => Err(Error::Parse(format!("unknown name `{name}`"))),
    }
}

fn eval_scalar(f: &Field, e: &Ast) -> Result<Scalar> {
    Ok(match e {
        Ast::Num(n) => f.from_bigint(n),
        Ast::Name(s) => name_value(f, s)?,
        Ast::Neg(a) => f.neg(&eval_scalar(f, a)?),
        Ast::Pow(a, k) => f.pow(&eval_scalar(f, a)?, *k)?,
        Ast::Bin(op, a, b) => {
            let (x, y) = (eval_scalar(f, a)?, eval_scalar(f, b)?);
            match op {
                '+' => f.add(&x, &y),
                '-' => f.sub(&x, &y),
                '*' => f.mul(&x, &y),
                _ => f.div(&x, &y)?,
            }
        }
    })
}

fn eval_poly(f: &Field, e: &Ast) -> Result<Poly> {
    Ok(match e {
        Ast::Num(n) => Poly::constant(f, f.from_bigint(n)),
        Ast::Name(s) if s == "X" || s == "x" => Poly::x(f),
        Ast::Name(s) => Poly::constant(f, name_value(f, s)?),
        Ast::Neg(a) => Poly::zero().sub(f, &eval_poly(f, a)?),
        Ast::Pow(a, k) => {
            if *k < 0 {
                return Err(Error::Parse("negative power of a polynomial".into()));
            }
            eval_poly(f, a)?.pow(f, *k as usize)
        }
        Ast::Bin(op, a, b) => {
            let (x, y) = (eval_poly(f, a)?, eval_poly(f, b)?);
            match op {
                '+' => x.add(f, &y),
                '-' => x.sub(f, &y),
                '*' => x.mul(f, &y),
                _ => {
                    if y.degree() != Some(0) {
                        return Err(Error::Parse("can only divide by constants".into()));
                    }
                    x.scale(f, &f.inv(&y.coeffs()[0])?)
                }
            }
        }
    })
}

pub fn parse_scalar(f: &Field, s: &str) -> Result<Scalar> {
    eval_scalar(f, &parse(s)?)
}

pub fn parse_poly(f: &Field, s: &str) -> Result<Poly> {
    eval_poly(f, &parse(s)?)
}
