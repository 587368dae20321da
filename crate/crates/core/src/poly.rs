//! Monomials under graded reverse lexicographic order and sparse polynomials.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Exponent vector with cached total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[u16]>,
    deg: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Monomial {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps: exps.into_boxed_slice(), deg }
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial::new(e)
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect(),
            deg: self.deg + other.deg,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// other / self, assuming self divides other.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| b - a).collect(),
            deg: other.deg - self.deg,
        }
    }

    /// Degrees restricted to consecutive variable blocks.
    pub fn multidegree(&self, offsets: &[usize]) -> Vec<u32> {
        offsets.windows(2).map(|w| self.exps[w[0]..w[1]].iter().map(|&e| e as u32).sum()).collect()
    }

    pub fn evaluate(&self, v: &[Scalar], one: &Scalar) -> Scalar {
        let mut acc = one.clone();
        for (x, &e) in v.iter().zip(self.exps.iter()) {
            if e > 0 {
                acc = &acc * &x.pow(e as u64);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    /// Graded reverse lex: higher degree first; on ties the monomial with the
    /// smaller exponent in the last differing variable is larger.
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for (a, b) in self.exps.iter().zip(other.exps.iter()).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree d in n variables, ascending in the monomial order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; n];
    fill(&mut cur, 0, d, &mut out);
    out.sort();
    out
}

fn fill(cur: &mut Vec<u16>, i: usize, left: u32, out: &mut Vec<Monomial>) {
    if cur.is_empty() {
        if left == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return;
    }
    if i == cur.len() - 1 {
        cur[i] = left as u16;
        out.push(Monomial::new(cur.clone()));
        cur[i] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e as u16;
        fill(cur, i + 1, left - e, out);
    }
    cur[i] = 0;
}

/// C(d+n-1, n-1), saturating.
pub fn monomial_count(n: usize, d: u32) -> u128 {
    if n == 0 {
        return (d == 0) as u128;
    }
    let mut c: u128 = 1;
    for i in 1..n as u128 {
        c = c.saturating_mul(d as u128 + i) / i;
    }
    c
}

/// Map from monomials to nonzero scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SparsePolynomial {
    pub fn zero(nvars: usize) -> Self {
        SparsePolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize, one: Scalar) -> Self {
        Self::term(Monomial::var(nvars, i), one)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Adds c·m in place.
    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// self += c·other.
    pub fn add_scaled(&mut self, other: &SparsePolynomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), &(a * c));
        }
    }

    pub fn add(&self, other: &SparsePolynomial) -> SparsePolynomial {
        let mut r = self.clone();
        for (m, a) in &other.terms {
            r.add_term(m.clone(), a);
        }
        r
    }

    pub fn sub(&self, other: &SparsePolynomial) -> SparsePolynomial {
        let mut r = self.clone();
        for (m, a) in &other.terms {
            r.add_term(m.clone(), &-a);
        }
        r
    }

    pub fn neg(&self) -> SparsePolynomial {
        SparsePolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), -a)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> SparsePolynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul(&self, other: &SparsePolynomial) -> SparsePolynomial {
        let mut r = Self::zero(self.nvars);
        for (m1, a) in &self.terms {
            for (m2, b) in &other.terms {
                r.add_term(m1.mul(m2), &(a * b));
            }
        }
        r
    }

    pub fn pow(&self, e: u32, one: &Scalar) -> SparsePolynomial {
        let mut acc = Self::constant(self.nvars, one.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coefficient of m in self·other without forming the product.
    pub fn product_coeff(&self, other: &SparsePolynomial, m: &Monomial, zero: &Scalar) -> Scalar {
        let mut acc = zero.clone();
        for (m1, a) in &self.terms {
            if m1.divides(m) {
                if let Some(b) = other.terms.get(&m1.quotient_of(m)) {
                    acc += &(a * b);
                }
            }
        }
        acc
    }

    pub fn evaluate(&self, v: &[Scalar], field: &Field) -> Result<Scalar> {
        if v.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: v.len() });
        }
        let one = field.one();
        // Cached powers per variable.
        let maxe: Vec<u16> =
            (0..self.nvars).map(|i| self.terms.keys().map(|m| m.exps[i]).max().unwrap_or(0)).collect();
        let pows: Vec<Vec<Scalar>> = v
            .iter()
            .zip(&maxe)
            .map(|(x, &e)| {
                let mut p = vec![one.clone()];
                for _ in 0..e {
                    let next = p.last().unwrap() * x;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t = &t * &pows[i][e as usize];
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Divides every coefficient by the leading one.
    pub fn monic(&self) -> SparsePolynomial {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Canonical JSON: terms in ascending monomial order.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> =
            self.terms.iter().map(|(m, c)| json!({"exp": m.exps.to_vec(), "coeff": c.to_json()})).collect();
        json!({"nvars": self.nvars, "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<SparsePolynomial> {
        let bad = |w: &str| Error::Parse(format!("polynomial {w}"));
        let nvars = v.get("nvars").and_then(Value::as_u64).ok_or_else(|| bad("nvars"))? as usize;
        let mut p = Self::zero(nvars);
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("terms"))? {
            let exps: Vec<u16> = t
                .get("exp")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("exp"))?
                .iter()
                .map(|e| e.as_u64().and_then(|e| u16::try_from(e).ok()).ok_or_else(|| bad("exponent")))
                .collect::<Result<_>>()?;
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, got: exps.len() });
            }
            let c = Scalar::from_json(t.get("coeff").ok_or_else(|| bad("coeff"))?)?;
            if c.is_zero() {
                return Err(bad("has a stored zero coefficient"));
            }
            p.add_term(Monomial::new(exps), &c);
        }
        Ok(p)
    }

    /// Human-readable form with the given variable names, leading term first.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { p: self, names }
    }
}

struct PolyDisplay<'a> {
    p: &'a SparsePolynomial,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.p.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.names[i].clone() } else { format!("{}^{e}", self.names[i]) })
                .collect();
            let cs = c.to_string();
            let simple = !cs.contains(' ');
            match (vars.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{}", if simple { cs } else { format!("({cs})") })?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => {
                    let cs = if simple { cs } else { format!("({cs})") };
                    write!(f, "{cs}*{}", vars.join("*"))?
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        let m = monomials_of_degree(2, 3);
        assert_eq!(m.len(), 4);
        assert_eq!(m.last().unwrap().exps(), &[3, 0]);
        assert_eq!(monomials_of_degree(4, 0).len(), 1);
        assert_eq!(monomials_of_degree(4, 8).len(), 165);
        assert_eq!(monomial_count(4, 8), 165);
        assert_eq!(monomial_count(6, 11), 4368);
    }

    #[test]
    fn grevlex() {
        // x1x3 < x2^2 in grevlex with x1 > x2 > x3.
        let a = Monomial::new(vec![1, 0, 1]);
        let b = Monomial::new(vec![0, 2, 0]);
        assert!(a < b);
        assert!(Monomial::new(vec![0, 0, 3]) > b);
    }

    #[test]
    fn product_coefficient() {
        let f = Field::cyclotomic(1).unwrap();
        let x = SparsePolynomial::var(2, 0, f.one());
        let y = SparsePolynomial::var(2, 1, f.one());
        let p = x.add(&y);
        let sq = p.mul(&p);
        let m = Monomial::new(vec![1, 1]);
        assert_eq!(p.product_coeff(&p, &m, &f.zero()), *sq.coeff(&m).unwrap());
        assert_eq!(*sq.coeff(&m).unwrap(), f.int(2));
    }
}
