//! Small finite fields GF(p^k) with log/antilog tables.
//!
//! An element is an index in [0, q): its base-p digits are the coefficients
//! of the polynomial representative, lowest degree first.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug)]
pub struct GfField {
    p: u32,
    k: u32,
    q: u32,
    // Monic defining polynomial, low to high, length k+1.
    poly: Vec<u32>,
    // exp[i] = gen^i for i in [0, 2(q-1)); log[exp[i]] = i.
    exp: Vec<u32>,
    log: Vec<u32>,
    generator: u32,
}

impl PartialEq for GfField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.poly == other.poly
    }
}

impl Eq for GfField {}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d: &u32| d * d <= p).all(|d| p % d != 0)
}

fn digits(mut v: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

// Remainder of `a` modulo the monic `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = r.pop().unwrap();
        if c != 0 {
            let base = r.len() - dm;
            for (j, &mj) in m[..dm].iter().enumerate() {
                r[base + j] = (r[base + j] + p - (c * mj) % p) % p;
            }
        }
    }
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

/// Exhaustive irreducibility: no monic factor of degree 1..=k/2 divides `poly`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let k = poly.len() - 1;
    for d in 1..=k / 2 {
        for low in 0..(p as u64).pow(d as u32) {
            let mut f = digits(low as u32, p, d as u32);
            f.push(1);
            if poly_rem(poly, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

static FIELDS: OnceLock<Mutex<HashMap<(u32, u32, Vec<u32>), Arc<GfField>>>> = OnceLock::new();

impl GfField {
    /// The field of order q with the smallest monic irreducible defining polynomial.
    pub fn of_order(q: u64) -> Result<Arc<Self>> {
        if !(2..=MAX_ORDER).contains(&q) {
            return Err(Error::BadField(format!("field order {q} outside 2..=65536")));
        }
        let (p, k) = prime_power(q as u32).ok_or_else(|| Error::BadField(format!("{q} is not a prime power")))?;
        let poly = if k == 1 {
            vec![0, 1]
        } else {
            (0..p.pow(k))
                .map(|low| {
                    let mut f = digits(low, p, k);
                    f.push(1);
                    f
                })
                .find(|f| is_irreducible(f, p))
                .expect("an irreducible polynomial of every degree exists")
        };
        Self::get(p, k, poly)
    }

    /// Cached construction from an explicit (p, k, defining polynomial).
    pub fn get(p: u32, k: u32, poly: Vec<u32>) -> Result<Arc<Self>> {
        let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (p, k, poly.clone());
        if let Some(f) = cache.lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let field = Arc::new(Self::build(p, k, poly)?);
        cache.lock().unwrap().entry(key).or_insert(field.clone());
        Ok(field)
    }

    fn build(p: u32, k: u32, poly: Vec<u32>) -> Result<Self> {
        if !is_prime(p) || k == 0 {
            return Err(Error::BadField(format!("GF({p}^{k})")));
        }
        let q64 = (p as u64).pow(k);
        if q64 > MAX_ORDER {
            return Err(Error::BadField(format!("GF({p}^{k}) exceeds 2^16 elements")));
        }
        if poly.len() != k as usize + 1 || poly[k as usize] != 1 || poly.iter().any(|&c| c >= p) {
            return Err(Error::BadField("defining polynomial must be monic of degree k over GF(p)".into()));
        }
        if !is_irreducible(&poly, p) {
            return Err(Error::BadField(format!("{poly:?} is reducible over GF({p})")));
        }
        let q = q64 as u32;
        let mul = |a: u32, b: u32| undigits(&poly_mul_mod(&digits(a, p, k), &digits(b, p, k), &poly, p), p);
        // Smallest index whose powers reach every nonzero element.
        let generator = (1..q)
            .find(|&g| {
                let mut x = g;
                let mut ord = 1;
                while x != 1 {
                    x = mul(x, g);
                    ord += 1;
                }
                ord == q - 1
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..(q as usize - 1) {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = mul(x, generator);
        }
        for i in (q as usize - 1)..exp.len() {
            exp[i] = exp[i - (q as usize - 1)];
        }
        Ok(GfField { p, k, q, poly, exp, log, generator })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.k
    }
    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn poly(&self) -> &[u32] {
        &self.poly
    }
    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut r, mut place) = (a, b, 0, 1);
        for _ in 0..self.k {
            r += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        r
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut r, mut place) = (a, 0, 1);
        for _ in 0..self.k {
            r += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        r
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let l = self.log[a as usize];
        Ok(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[l as usize]
    }

    /// Image of an integer under ℤ → GF(p) ⊂ GF(q).
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// gen^((q-1)/m), an element of exact order m.
    pub fn root_of_unity(&self, m: u64) -> Result<u32> {
        let n = self.q as u64 - 1;
        if m == 0 || n % m != 0 {
            return Err(Error::NoSuchRoot { field: self.to_string(), m });
        }
        Ok(self.exp[(n / m) as usize])
    }

    pub fn log_of(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }
}

impl fmt::Display for GfField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_inverse() {
        for q in [4u64, 5, 25, 27, 49] {
            let f = GfField::of_order(q).unwrap();
            for x in 1..f.order() {
                assert_eq!(f.exp[f.log[x as usize] as usize], x);
                assert_eq!(f.pow(x, q - 1), 1);
                assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
            }
        }
    }

    #[test]
    fn default_polynomials() {
        assert_eq!(GfField::of_order(4).unwrap().poly(), &[1, 1, 1]);
        assert_eq!(GfField::of_order(25).unwrap().poly(), &[2, 0, 1]);
    }

    #[test]
    fn rejects_reducible() {
        assert!(GfField::get(5, 2, vec![1, 0, 1]).is_err());
        assert!(GfField::get(2, 2, vec![1, 1, 1]).is_ok());
    }

    #[test]
    fn roots() {
        let f4 = GfField::of_order(4).unwrap();
        let w = f4.root_of_unity(3).unwrap();
        assert_ne!(w, 1);
        assert_eq!(f4.pow(w, 3), 1);
        let f5 = GfField::of_order(5).unwrap();
        // 2 is the smallest generator of GF(5)^×; 2^((5-1)/4) = 2.
        assert_eq!(f5.root_of_unity(4).unwrap(), 2);
        assert!(f5.root_of_unity(3).is_err());
    }
}
