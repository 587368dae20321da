//! Elements of ℚ(ζ_n) in the power basis modulo the n-th cyclotomic polynomial.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Every supported conductor divides this number.
pub const MAX_CONDUCTOR: u32 = 5040;

// Values are hashed through a ring map ℚ(ζ_n) → F_P sending ζ_n to a fixed
// element of order n. P ≡ 1 (mod 5040), so every n | 5040 is covered, and the
// images are compatible with embeddings, which keeps Hash consistent with Eq.
const HASH_P: u64 = 2_305_843_009_213_690_801;
const HASH_GEN: u64 = 11;

struct Ctx {
    phi: usize,
    // Φ_n, low to high, monic of degree phi.
    poly: Vec<i64>,
    hash_root: u64,
}

static CTX: [OnceLock<Ctx>; MAX_CONDUCTOR as usize + 1] =
    [const { OnceLock::new() }; MAX_CONDUCTOR as usize + 1];

fn ctx(n: u32) -> &'static Ctx {
    CTX[n as usize].get_or_init(|| {
        assert!(MAX_CONDUCTOR % n == 0, "unsupported conductor {n}");
        let poly = cyclotomic_poly(n);
        let hash_root = mod_pow(HASH_GEN, (HASH_P - 1) / n as u64, HASH_P);
        Ctx { phi: poly.len() - 1, poly, hash_root }
    })
}

/// Φ_n with integer coefficients, low to high.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = if MAX_CONDUCTOR % d == 0 { ctx(d).poly.clone() } else { cyclotomic_poly(d) };
            num = exact_div(&num, &phi_d);
        }
    }
    num
}

fn exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let dq = a.len() - b.len();
    let mut q = vec![0i64; dq + 1];
    for i in (0..=dq).rev() {
        let c = rem[i + db];
        q[i] = c;
        for j in 0..=db {
            rem[i + j] -= c * b[j];
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// An element Σ (num_i / den) ζ_n^i with i < φ(n).
///
/// The common-denominator form is kept reduced: den > 0 and
/// gcd(num_0, .., num_{φ-1}, den) = 1.
#[derive(Clone, Debug)]
pub struct CycRat {
    n: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycRat {
    pub fn check_conductor(n: u32) -> Result<()> {
        if n == 0 || MAX_CONDUCTOR % n != 0 {
            return Err(Error::BadField(format!("conductor {n} does not divide {MAX_CONDUCTOR}")));
        }
        Ok(())
    }

    pub fn zero(n: u32) -> Self {
        let phi = ctx(n).phi;
        CycRat { n, num: vec![BigInt::zero(); phi], den: BigInt::one() }
    }

    pub fn from_ratio(n: u32, num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut x = Self::zero(n);
        x.num[0] = num;
        x.den = den;
        x.normalize();
        Ok(x)
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        let mut x = Self::zero(n);
        x.num[0] = BigInt::from(v);
        x
    }

    /// ζ_n^k for any integer k.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let k = k.rem_euclid(n as i64) as usize;
        let mut raw = vec![BigInt::zero(); k + 1];
        raw[k] = BigInt::one();
        Self::from_raw(n, raw, BigInt::one())
    }

    /// Builds from an unreduced polynomial in ζ_n.
    pub fn from_raw(n: u32, mut raw: Vec<BigInt>, den: BigInt) -> Self {
        let c = ctx(n);
        reduce(&mut raw, &c.poly);
        raw.resize(c.phi, BigInt::zero());
        let mut x = CycRat { n, num: raw, den };
        x.normalize();
        x
    }

    pub fn from_rational_coeffs(n: u32, coeffs: &[BigRational]) -> Result<Self> {
        let phi = ctx(n).phi;
        if coeffs.len() != phi {
            return Err(Error::DimensionMismatch { expected: phi, got: coeffs.len() });
        }
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let raw = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Ok(Self::from_raw(n, raw, den))
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Coefficients in the power basis, each in lowest terms.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|a| BigRational::new(a.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in ℚ.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.n > 2 {
            // Rationals sit in the constant slot; other slots are linearly independent.
            if self.num[1..].iter().any(|c| !c.is_zero()) {
                return None;
            }
        }
        Some(BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    /// Image under ℚ(ζ_n) ⊂ ℚ(ζ_m), ζ_n = ζ_m^(m/n).
    pub fn embed(&self, m: u32) -> Result<Self> {
        if m % self.n != 0 {
            return Err(Error::BadConductor { from: self.n, to: m });
        }
        Self::check_conductor(m)?;
        if m == self.n {
            return Ok(self.clone());
        }
        let step = (m / self.n) as usize;
        let mut raw = vec![BigInt::zero(); (self.num.len() - 1) * step + 1];
        for (i, c) in self.num.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        Ok(Self::from_raw(m, raw, self.den.clone()))
    }

    fn unify<'a>(a: &'a Self, b: &'a Self) -> (std::borrow::Cow<'a, Self>, std::borrow::Cow<'a, Self>) {
        use std::borrow::Cow;
        if a.n == b.n {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        let m = a.n.lcm(&b.n);
        let ea = a.embed(m).expect("lcm of supported conductors exceeds the maximum");
        let eb = b.embed(m).expect("lcm of supported conductors exceeds the maximum");
        (Cow::Owned(ea), Cow::Owned(eb))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        if a.den == b.den {
            let num = a.num.iter().zip(&b.num).map(|(x, y)| x + y).collect();
            let mut r = CycRat { n: a.n, num, den: a.den.clone() };
            r.normalize();
            return r;
        }
        let num = a.num.iter().zip(&b.num).map(|(x, y)| x * &b.den + y * &a.den).collect();
        let mut r = CycRat { n: a.n, num, den: &a.den * &b.den };
        r.normalize();
        r
    }

    pub fn neg(&self) -> Self {
        CycRat { n: self.n, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        if a.is_zero() || b.is_zero() {
            return Self::zero(a.n);
        }
        let c = ctx(a.n);
        if c.phi == 1 {
            let mut r = CycRat { n: a.n, num: vec![&a.num[0] * &b.num[0]], den: &a.den * &b.den };
            r.normalize();
            return r;
        }
        let mut raw = vec![BigInt::zero(); 2 * c.phi - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        reduce(&mut raw, &c.poly);
        raw.truncate(c.phi);
        let mut r = CycRat { n: a.n, num: raw, den: &a.den * &b.den };
        r.normalize();
        r
    }

    /// Multiplicative inverse by solving the multiplication-by-self system over ℚ.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = ctx(self.n);
        let phi = c.phi;
        if phi == 1 {
            return Self::from_ratio(self.n, self.den.clone(), self.num[0].clone());
        }
        // Column j of M holds self·ζ^j; solve M y = e_0 with integer-scaled rows.
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(phi);
        let mut cur = self.num.clone();
        for _ in 0..phi {
            cols.push(cur.clone());
            cur.insert(0, BigInt::zero());
            reduce(&mut cur, &c.poly);
            cur.truncate(phi);
        }
        let mut rows: Vec<Vec<BigRational>> = (0..phi)
            .map(|i| {
                let mut r: Vec<BigRational> =
                    (0..phi).map(|j| BigRational::from_integer(cols[j][i].clone())).collect();
                r.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                r
            })
            .collect();
        for col in 0..phi {
            let piv = (col..phi).find(|&r| !rows[r][col].is_zero()).expect("nonzero element is invertible");
            rows.swap(col, piv);
            let p = rows[col][col].clone();
            for v in rows[col].iter_mut() {
                *v = &*v / &p;
            }
            for r in 0..phi {
                if r != col && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    let pivot_row = rows[col].clone();
                    for (v, pv) in rows[r].iter_mut().zip(&pivot_row) {
                        *v = &*v - &f * pv;
                    }
                }
            }
        }
        // The solution is in ζ-units of self's denominator: y = den · M⁻¹ e_0.
        let y: Vec<BigRational> =
            rows.iter().map(|r| &r[phi] * BigRational::from_integer(self.den.clone())).collect();
        Self::from_rational_coeffs(self.n, &y)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_int(self.n, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn hash_image(&self) -> Option<u64> {
        let root = ctx(self.n).hash_root;
        let m = |x: &BigInt| -> u64 {
            let r = x.mod_floor(&BigInt::from(HASH_P));
            r.to_u64().unwrap()
        };
        let d = m(&self.den);
        if d == 0 {
            return None;
        }
        let mut acc = 0u128;
        let mut pw = 1u128;
        for c in &self.num {
            acc = (acc + m(c) as u128 * pw) % HASH_P as u128;
            pw = pw * root as u128 % HASH_P as u128;
        }
        let dinv = mod_pow(d, HASH_P - 2, HASH_P);
        Some((acc * dinv as u128 % HASH_P as u128) as u64)
    }

    /// Terms (rational coefficient, exponent) with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (BigRational, usize)> + '_ {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (BigRational::new(c.clone(), self.den.clone()), i))
    }

    /// Power-basis numerators and common denominator.
    pub fn raw_parts(&self) -> (&[BigInt], &BigInt) {
        (&self.num, &self.den)
    }
}

// Long division by the monic polynomial `m`, in place.
fn reduce(raw: &mut Vec<BigInt>, m: &[i64]) {
    let phi = m.len() - 1;
    for i in (phi..raw.len()).rev() {
        if raw[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut raw[i]);
        for (j, &mj) in m[..phi].iter().enumerate() {
            if mj != 0 {
                raw[i - phi + j] -= &c * mj;
            }
        }
    }
    if raw.len() > phi {
        raw.truncate(phi.max(1));
    }
}

impl PartialEq for CycRat {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = Self::unify(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CycRat {}

impl Hash for CycRat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.hash_image().unwrap_or(u64::MAX).hash(state);
    }
}

impl fmt::Display for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (c, i) in self.terms() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "E({})", self.n)?,
                (1, false) => write!(f, "{a}*E({})", self.n)?,
                (_, true) => write!(f, "E({})^{i}", self.n)?,
                (_, false) => write!(f, "{a}*E({})^{i}", self.n)?,
            }
        }
        Ok(())
    }
}
