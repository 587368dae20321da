//! Exact scalars: cyclotomic rationals and small finite fields behind one tagged type.

mod cyclo;
mod gf;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

pub use cyclo::{cyclotomic_poly, euler_phi, CycRat, MAX_CONDUCTOR};
pub use gf::GfField;

use crate::error::{Error, Result};

/// The base field of a computation.
///
/// `Cyclotomic(n)` is ℚ(ζ_n); constants built through it live at conductor n,
/// so arithmetic inside one module never changes conductor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Field {
    Cyclotomic(u32),
    Finite(Arc<GfField>),
}

impl Field {
    pub fn cyclotomic(n: u32) -> Result<Field> {
        CycRat::check_conductor(n)?;
        Ok(Field::Cyclotomic(n))
    }

    pub fn finite(q: u64) -> Result<Field> {
        Ok(Field::Finite(GfField::of_order(q)?))
    }

    /// 0 for cyclotomic fields.
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Cyclotomic(_) => 0,
            Field::Finite(f) => f.characteristic() as u64,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Finite(_))
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> Scalar {
        match self {
            Field::Cyclotomic(n) => Scalar::Cyc(CycRat::from_int(*n, v)),
            Field::Finite(f) => Scalar::Gf(GfElem { field: f.clone(), val: f.from_int(v) }),
        }
    }

    pub fn ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        match self {
            Field::Cyclotomic(n) => Ok(Scalar::Cyc(CycRat::from_ratio(*n, num.clone(), den.clone())?)),
            Field::Finite(f) => {
                let p = BigInt::from(f.characteristic());
                let a = num.mod_floor(&p).to_i64().unwrap();
                let b = den.mod_floor(&p).to_i64().unwrap();
                let inv = f.inv(f.from_int(b))?;
                Ok(Scalar::Gf(GfElem { field: f.clone(), val: f.mul(f.from_int(a), inv) }))
            }
        }
    }

    pub fn rational(&self, q: &BigRational) -> Result<Scalar> {
        self.ratio(q.numer(), q.denom())
    }

    /// A deterministic element of exact multiplicative order m.
    pub fn root_of_unity(&self, m: u64) -> Result<Scalar> {
        self.zeta_pow(m, 1)
    }

    /// (root_of_unity(m))^k. The roots form a compatible system:
    /// zeta_pow(m·j, j) = zeta_pow(m, 1).
    pub fn zeta_pow(&self, m: u64, k: i64) -> Result<Scalar> {
        match self {
            Field::Cyclotomic(n) => {
                let m32 = u32::try_from(m).map_err(|_| Error::NoSuchRoot { field: self.to_string(), m })?;
                if m32 == 0 {
                    return Err(Error::NoSuchRoot { field: self.to_string(), m });
                }
                let target = n.lcm(&m32);
                CycRat::check_conductor(target).map_err(|_| Error::NoSuchRoot { field: self.to_string(), m })?;
                Ok(Scalar::Cyc(CycRat::zeta_pow(m32, k).embed(target)?))
            }
            Field::Finite(f) => {
                let r = f.root_of_unity(m)?;
                let e = k.rem_euclid(m as i64) as u64;
                Ok(Scalar::Gf(GfElem { field: f.clone(), val: f.pow(r, e) }))
            }
        }
    }

    /// Re-expresses a scalar in this field's canonical representation.
    pub fn canonical(&self, s: &Scalar) -> Result<Scalar> {
        match (self, s) {
            (Field::Cyclotomic(n), Scalar::Cyc(c)) => {
                let target = n.lcm(&c.conductor());
                Ok(Scalar::Cyc(c.embed(target)?))
            }
            (Field::Finite(f), Scalar::Gf(g)) if *g.field == **f => Ok(s.clone()),
            _ => Err(Error::FieldMismatch(format!("{s} is not an element of {self}"))),
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Field::Cyclotomic(_), Scalar::Cyc(_)) => true,
            (Field::Finite(f), Scalar::Gf(g)) => *g.field == **f,
            _ => false,
        }
    }

    /// Every element, for finite fields.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Cyclotomic(_) => None,
            Field::Finite(f) => Some((0..f.order()).map(|v| Scalar::Gf(GfElem { field: f.clone(), val: v })).collect()),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Cyclotomic(n) => write!(f, "cyclotomic:{n}"),
            Field::Finite(g) => write!(f, "gf:{}", g.order()),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `cyclotomic:n` and `gf:q`.
    fn from_str(s: &str) -> Result<Field> {
        let bad = || Error::BadField(s.to_string());
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "cyclotomic" => Field::cyclotomic(arg.parse().map_err(|_| bad())?),
            "gf" => Field::finite(arg.parse().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GfElem {
    field: Arc<GfField>,
    val: u32,
}

impl GfElem {
    pub fn new(field: Arc<GfField>, val: u32) -> Result<Self> {
        if val >= field.order() {
            return Err(Error::Parse(format!("value {val} outside {}", field)));
        }
        Ok(GfElem { field, val })
    }
    pub fn value(&self) -> u32 {
        self.val
    }
    pub fn field(&self) -> &Arc<GfField> {
        &self.field
    }
}

impl PartialEq for GfElem {
    fn eq(&self, other: &Self) -> bool {
        self.val == other.val && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl Eq for GfElem {}

/// An exact field element.
#[derive(Clone, PartialEq, Eq)]
pub enum Scalar {
    Cyc(CycRat),
    Gf(GfElem),
}

// Debug shows the readable form so that failure messages stay auditable.
impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Cyc(c) => c.hash(state),
            Scalar::Gf(g) => g.val.hash(state),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch between {a} and {b}")
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Cyc(c) => c.is_zero(),
            Scalar::Gf(g) => g.val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Cyc(c) => c.is_one(),
            Scalar::Gf(g) => g.val == 1,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Cyc(c) => Field::Cyclotomic(c.conductor()),
            Scalar::Gf(g) => Field::Finite(g.field.clone()),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Cyc(c) => Ok(Scalar::Cyc(c.inv()?)),
            Scalar::Gf(g) => Ok(Scalar::Gf(GfElem { field: g.field.clone(), val: g.field.inv(g.val)? })),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u64) -> Scalar {
        match self {
            Scalar::Cyc(c) => Scalar::Cyc(c.pow(e)),
            Scalar::Gf(g) => Scalar::Gf(GfElem { field: g.field.clone(), val: g.field.pow(g.val, e) }),
        }
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn powi(&self, e: i64) -> Result<Scalar> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Smallest m ≥ 1 with self^m = 1, searched up to `bound`.
    pub fn multiplicative_order(&self, bound: u64) -> Option<u64> {
        let mut x = self.clone();
        for m in 1..=bound {
            if x.is_one() {
                return Some(m);
            }
            x = &x * self;
        }
        None
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Cyc(c) => c.to_rational(),
            Scalar::Gf(_) => None,
        }
    }

    /// {"conductor": n, "coeffs": [[num, den], ...]} or {"p", "k", "poly", "val"}.
    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Cyc(c) => {
                let coeffs: Vec<Value> =
                    c.coeffs().iter().map(|q| json!([int_json(q.numer()), int_json(q.denom())])).collect();
                json!({"conductor": c.conductor(), "coeffs": coeffs})
            }
            Scalar::Gf(g) => json!({
                "p": g.field.characteristic(),
                "k": g.field.degree(),
                "poly": g.field.poly(),
                "val": g.val,
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Scalar> {
        let bad = |what: &str| Error::Parse(format!("scalar {what}: {v}"));
        let obj = v.as_object().ok_or_else(|| bad("is not an object"))?;
        if let Some(n) = obj.get("conductor") {
            let n = n.as_u64().and_then(|n| u32::try_from(n).ok()).ok_or_else(|| bad("conductor"))?;
            CycRat::check_conductor(n)?;
            let coeffs = obj.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("coeffs"))?;
            let qs = coeffs
                .iter()
                .map(|pair| {
                    let pair = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("coefficient pair"))?;
                    let num = json_int(&pair[0]).ok_or_else(|| bad("numerator"))?;
                    let den = json_int(&pair[1]).ok_or_else(|| bad("denominator"))?;
                    if den.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    Ok(BigRational::new(num, den))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Scalar::Cyc(CycRat::from_rational_coeffs(n, &qs)?));
        }
        let get = |k: &str| obj.get(k).and_then(Value::as_u64).ok_or_else(|| bad(k));
        let (p, k, val) = (get("p")? as u32, get("k")? as u32, get("val")? as u32);
        let poly = obj
            .get("poly")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("poly"))?
            .iter()
            .map(|c| c.as_u64().map(|c| c as u32).ok_or_else(|| bad("poly entry")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scalar::Gf(GfElem::new(GfField::get(p, k, poly)?, val)?))
    }
}

fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn json_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Cyc(c) => c.fmt(f),
            Scalar::Gf(g) => {
                // Powers of the table generator, `g^k`, or 0.
                match g.field.log_of(g.val) {
                    None => write!(f, "0"),
                    Some(0) => write!(f, "1"),
                    Some(1) => write!(f, "g"),
                    Some(l) => write!(f, "g^{l}"),
                }
            }
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Cyc(a), Scalar::Cyc(b)) => Scalar::Cyc(a.add(b)),
            (Scalar::Gf(a), Scalar::Gf(b)) if a.field == b.field => {
                Scalar::Gf(GfElem { field: a.field.clone(), val: a.field.add(a.val, b.val) })
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Cyc(a), Scalar::Cyc(b)) => Scalar::Cyc(a.mul(b)),
            (Scalar::Gf(a), Scalar::Gf(b)) if a.field == b.field => {
                Scalar::Gf(GfElem { field: a.field.clone(), val: a.field.mul(a.val, b.val) })
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Cyc(a) => Scalar::Cyc(a.neg()),
            Scalar::Gf(a) => Scalar::Gf(GfElem { field: a.field.clone(), val: a.field.neg(a.val) }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident $atr:ident $af:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar { (&self).$f(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: &Scalar) -> Scalar { (&self).$f(rhs) }
        }
        impl $atr<&Scalar> for Scalar {
            fn $af(&mut self, rhs: &Scalar) { *self = (&*self).$f(rhs); }
        }
        impl $atr<Scalar> for Scalar {
            fn $af(&mut self, rhs: Scalar) { *self = (&*self).$f(&rhs); }
        }
    )*};
}

owned_ops!(Add add AddAssign add_assign, Sub sub SubAssign sub_assign, Mul mul MulAssign mul_assign);
