//! Reduced row echelon form of sparse vectors indexed by monomials.
//!
//! Rows are monic at their largest monomial (the pivot) and no pivot occurs
//! in any other row, so the stored basis depends only on the span.

use std::collections::BTreeMap;

use crate::poly::{Monomial, SparsePolynomial};

#[derive(Clone, Debug)]
pub struct Echelon {
    nvars: usize,
    rows: BTreeMap<Monomial, SparsePolynomial>,
}

impl Echelon {
    pub fn new(nvars: usize) -> Echelon {
        Echelon { nvars, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, m: &Monomial) -> bool {
        self.rows.contains_key(m)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Monomial> {
        self.rows.keys()
    }

    /// f minus its projection onto the span along pivot coordinates.
    pub fn reduce(&self, f: &SparsePolynomial) -> SparsePolynomial {
        // Rows never contain foreign pivots, so one pass suffices.
        let mut r = f.clone();
        for (m, c) in f.terms() {
            if let Some(row) = self.rows.get(m) {
                r.add_scaled(row, &-c);
            }
        }
        r
    }

    pub fn contains(&self, f: &SparsePolynomial) -> bool {
        self.reduce(f).is_zero()
    }

    /// Adds f to the span; returns whether the rank grew.
    pub fn insert(&mut self, f: &SparsePolynomial) -> bool {
        let r = self.reduce(f);
        if r.is_zero() {
            return false;
        }
        let r = r.monic();
        let lm = r.leading().unwrap().0.clone();
        for row in self.rows.values_mut() {
            if let Some(c) = row.coeff(&lm).cloned() {
                row.add_scaled(&r, &-c);
            }
        }
        self.rows.insert(lm, r);
        true
    }

    /// Basis rows, largest pivot first.
    pub fn basis(&self) -> Vec<SparsePolynomial> {
        self.rows.values().rev().cloned().collect()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    #[test]
    fn canonical_form_is_order_independent() {
        let f = Field::cyclotomic(3).unwrap();
        let x = SparsePolynomial::var(3, 0, f.one());
        let y = SparsePolynomial::var(3, 1, f.one());
        let z = SparsePolynomial::var(3, 2, f.one());
        let w = f.zeta_pow(3, 1).unwrap();
        let vs = [x.add(&y.scale(&w)), y.sub(&z), x.add(&y.scale(&w)).add(&y.sub(&z).scale(&f.int(2)))];
        let mut a = Echelon::new(3);
        let mut b = Echelon::new(3);
        for v in &vs {
            a.insert(v);
        }
        for v in vs.iter().rev() {
            b.insert(v);
        }
        assert_eq!(a.rank(), 2);
        assert_eq!(a.basis(), b.basis());
        assert!(!a.insert(&x.add(&y.scale(&w)).add(&y.sub(&z))));
    }
}
