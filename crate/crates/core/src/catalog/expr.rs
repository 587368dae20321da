//! Polynomial and scalar expressions: `+ - * / ^`, parentheses, integers,
//! `E(n)` roots of unity, variable names and `$name` references.

use crate::error::{Error, Result};
use crate::poly::SparsePolynomial;
use crate::scalar::{Field, Scalar};

/// Resolves `$name` references while parsing.
pub trait Resolver {
    fn resolve(&self, name: &str, vars: &[String], field: &Field) -> Result<SparsePolynomial>;
}

/// Resolver for expressions that contain no references.
pub struct NoRefs;

impl Resolver for NoRefs {
    fn resolve(&self, name: &str, _: &[String], _: &Field) -> Result<SparsePolynomial> {
        Err(Error::Parse(format!("unexpected reference `${name}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Ref(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = cs[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| Error::Parse(format!("number `{s}` in `{src}`")))?));
        } else if c.is_alphabetic() || c == '$' {
            let is_ref = c == '$';
            if is_ref {
                i += 1;
            }
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            let s: String = cs[start..i].iter().collect();
            if s.is_empty() {
                return Err(Error::Parse(format!("empty reference in `{src}`")));
            }
            out.push(if is_ref { Tok::Ref(s) } else { Tok::Ident(s) });
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected `{c}` in `{src}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
    vars: &'a [String],
    field: &'a Field,
    refs: &'a dyn Resolver,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in `{}`", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn constant(&self, s: Scalar) -> SparsePolynomial {
        SparsePolynomial::constant(self.n(), s)
    }

    fn expr(&mut self) -> Result<SparsePolynomial> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SparsePolynomial> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = as_constant(&d).ok_or_else(|| self.err("division by a non-constant"))?;
                acc = acc.scale(&c.inv()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<SparsePolynomial> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<SparsePolynomial> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let e = match self.peek() {
            Some(Tok::Num(e)) => *e,
            _ => return Err(self.err("expected an exponent")),
        };
        self.pos += 1;
        if negative {
            let c = as_constant(&base).ok_or_else(|| self.err("negative power of a non-constant"))?;
            return Ok(self.constant(c.powi(-(e as i64))?));
        }
        let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
        Ok(base.pow(e, &self.field.one()))
    }

    fn atom(&mut self) -> Result<SparsePolynomial> {
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => {
                let v = i64::try_from(v).map_err(|_| self.err("integer too large"))?;
                Ok(self.constant(self.field.int(v)))
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) if name == "E" && self.peek() == Some(&Tok::Sym('(')) => {
                self.pos += 1;
                let m = match self.peek() {
                    Some(Tok::Num(m)) if *m > 0 => *m,
                    _ => return Err(self.err("E(n) needs a positive integer")),
                };
                self.pos += 1;
                self.expect(')')?;
                Ok(self.constant(self.field.zeta_pow(m, 1)?))
            }
            Tok::Ident(name) => {
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| self.err(&format!("unknown variable `{name}`")))?;
                Ok(SparsePolynomial::var(self.n(), i, self.field.one()))
            }
            Tok::Ref(name) => self.refs.resolve(&name, self.vars, self.field),
            Tok::Sym(c) => Err(self.err(&format!("unexpected `{c}`"))),
        }
    }
}

fn as_constant(p: &SparsePolynomial) -> Option<Scalar> {
    match p.leading() {
        None => None,
        Some((m, c)) if m.degree() == 0 => Some(c.clone()),
        _ => None,
    }
}

/// Parses a polynomial in the given variables.
pub fn parse_poly(src: &str, vars: &[String], field: &Field, refs: &dyn Resolver) -> Result<SparsePolynomial> {
    let mut p = Parser { toks: lex(src)?, pos: 0, src, vars, field, refs };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Parses a constant expression such as `-1/2*E(8)^2`.
pub fn parse_scalar(src: &str, field: &Field) -> Result<Scalar> {
    let p = parse_poly(src, &[], field, &NoRefs)?;
    Ok(as_constant(&p).unwrap_or_else(|| field.zero()))
}

/// Parses a group word such as `a^3*b` or `b^-1*a` into (generator, exponent)
/// pairs; `1` is the empty word.
pub fn parse_word(src: &str, gens: &[String]) -> Result<Vec<(usize, i64)>> {
    let s = src.trim();
    if s == "1" || s == "e" {
        return Ok(Vec::new());
    }
    s.split('*')
        .map(|f| {
            let f = f.trim();
            let (g, e) = match f.split_once('^') {
                Some((g, e)) => (g.trim(), e.trim().parse::<i64>().map_err(|_| Error::Parse(format!("exponent in `{src}`")))?),
                None => (f, 1),
            };
            let i = gens.iter().position(|x| x == g).ok_or_else(|| Error::Parse(format!("generator `{g}` in `{src}`")))?;
            Ok((i, e))
        })
        .collect()
}
