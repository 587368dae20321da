//! Product-one sequences over finite abelian groups and Davenport constants.
//!
//! Sequences are multisets, stored as non-decreasing vectors of element indices.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::groups::Character;
use crate::scalar::Scalar;

pub const MAX_SEQUENCE_LEN: usize = 24;
pub const MAX_TABLE_ORDER: usize = 64;

#[derive(Clone, Debug)]
pub struct AbelianGroupTable {
    labels: Vec<String>,
    op: Vec<u32>,
    identity: usize,
}

impl AbelianGroupTable {
    /// C_{n_1} × ... × C_{n_r}; elements are mixed-radix tuples.
    pub fn cyclic_product(ns: &[u32]) -> Result<AbelianGroupTable> {
        if ns.iter().any(|&n| n == 0) {
            return Err(Error::Parse("cyclic factor of order 0".into()));
        }
        let order: u64 = ns.iter().map(|&n| n as u64).product();
        if order > 1 << 16 {
            return Err(Error::SizeGuard(order as usize));
        }
        let order = order as usize;
        let tuple = |mut x: usize| -> Vec<u32> {
            ns.iter()
                .map(|&n| {
                    let d = (x % n as usize) as u32;
                    x /= n as usize;
                    d
                })
                .collect()
        };
        let index = |t: &[u32]| -> usize { t.iter().zip(ns).rev().fold(0, |acc, (&d, &n)| acc * n as usize + d as usize) };
        let mut op = vec![0u32; order * order];
        for a in 0..order {
            let ta = tuple(a);
            for b in 0..order {
                let s: Vec<u32> = ta.iter().zip(tuple(b)).zip(ns).map(|((x, y), n)| (x + y) % n).collect();
                op[a * order + b] = index(&s) as u32;
            }
        }
        let labels = (0..order).map(|a| format!("{:?}", tuple(a))).collect();
        Ok(AbelianGroupTable { labels, op, identity: 0 })
    }

    /// Parses `C1`, `C6`, `C3xC3`, `C2xC2xC6`.
    pub fn parse(spec: &str) -> Result<AbelianGroupTable> {
        let ns = spec
            .split(['x', '×'])
            .map(|f| {
                f.trim()
                    .strip_prefix('C')
                    .and_then(|n| n.parse::<u32>().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::Parse(format!("abelian group factor `{f}` in `{spec}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::cyclic_product(&ns)
    }

    /// Closure of the given characters under pointwise multiplication, with the
    /// index of each input.
    pub fn from_characters(chars: &[Character], one: Scalar) -> Result<(AbelianGroupTable, Vec<usize>)> {
        let len = chars.first().map_or(0, |c| c.values.len());
        let mut elems: Vec<Vec<Scalar>> = vec![vec![one; len]];
        let mut index: HashMap<Vec<Scalar>, usize> = HashMap::from([(elems[0].clone(), 0)]);
        let mut i = 0;
        while i < elems.len() {
            for c in chars {
                let p: Vec<Scalar> = elems[i].iter().zip(&c.values).map(|(a, b)| a * b).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                    if elems.len() > 1 << 12 {
                        return Err(Error::SizeGuard(elems.len()));
                    }
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut op = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let p: Vec<Scalar> = elems[a].iter().zip(&elems[b]).map(|(x, y)| x * y).collect();
                op[a * n + b] = index[&p] as u32;
            }
        }
        let positions = chars.iter().map(|c| index[&c.values]).collect();
        let mut labels = vec!["1".to_string(); n];
        for c in chars {
            labels[index[&c.values]] = c.label.clone();
        }
        Ok((AbelianGroupTable { labels, op, identity: 0 }, positions))
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.op[a * self.order() + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.op(a, b) == self.identity).expect("finite group")
    }

    pub fn product(&self, seq: &[usize]) -> usize {
        seq.iter().fold(self.identity, |acc, &x| self.op(acc, x))
    }

    // Products of all nonempty subsequences.
    fn subsequence_products(&self, seq: &[usize]) -> Vec<bool> {
        let n = self.order();
        let mut reach = vec![false; n];
        for &g in seq {
            let mut next = reach.clone();
            next[g] = true;
            for (x, &r) in reach.iter().enumerate() {
                if r {
                    next[self.op(x, g)] = true;
                }
            }
            reach = next;
        }
        reach
    }

    fn check_len(seq: &[usize]) -> Result<()> {
        if seq.len() > MAX_SEQUENCE_LEN {
            return Err(Error::LengthGuard(seq.len()));
        }
        Ok(())
    }
}

/// No nonempty subsequence multiplies to the identity.
pub fn is_product_one_free(t: &AbelianGroupTable, seq: &[usize]) -> Result<bool> {
    AbelianGroupTable::check_len(seq)?;
    Ok(!t.subsequence_products(seq)[t.identity])
}

/// Product is the identity and no proper nonempty subsequence is.
///
/// Equivalent to: product one, and dropping a single element leaves a
/// product-one free sequence (a proper product-one T avoiding that element
/// would otherwise exist, or its complement would).
pub fn is_irreducible_product_one(t: &AbelianGroupTable, seq: &[usize]) -> Result<bool> {
    AbelianGroupTable::check_len(seq)?;
    if seq.is_empty() || t.product(seq) != t.identity {
        return Ok(false);
    }
    is_product_one_free(t, &seq[1..])
}

/// Davenport constant with a maximal irreducible product-one sequence.
pub fn davenport_with_witness(t: &AbelianGroupTable) -> Result<(usize, Vec<usize>)> {
    if t.order() > MAX_TABLE_ORDER {
        return Err(Error::SizeGuard(t.order()));
    }
    let allowed: Vec<usize> = (0..t.order()).filter(|&a| a != t.identity).collect();
    let mut best: Vec<usize> = Vec::new();
    let mut cur = Vec::new();
    dfs_free(t, &allowed, 0, 0u64, &mut cur, MAX_SEQUENCE_LEN - 1, &mut |s| {
        if s.len() > best.len() {
            best = s.to_vec();
        }
    });
    let mut witness = best.clone();
    witness.push(t.inverse(t.product(&best)));
    witness.sort_unstable();
    debug_assert!(is_irreducible_product_one(t, &witness).unwrap());
    Ok((witness.len(), witness))
}

pub fn davenport(t: &AbelianGroupTable) -> Result<usize> {
    Ok(davenport_with_witness(t)?.0)
}

// Depth-first over non-decreasing sequences of `allowed` positions that stay
// product-one free; `reach` is the bitmask of nonempty subsequence products.
fn dfs_free(
    t: &AbelianGroupTable,
    allowed: &[usize],
    start: usize,
    reach: u64,
    cur: &mut Vec<usize>,
    max_len: usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    if !cur.is_empty() {
        visit(cur);
    }
    if cur.len() == max_len {
        return;
    }
    for (pos, &g) in allowed.iter().enumerate().skip(start) {
        let mut next = reach | (1u64 << g);
        let mut bits = reach;
        while bits != 0 {
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            next |= 1u64 << t.op(x, g);
        }
        if next & (1u64 << t.identity) != 0 {
            continue;
        }
        cur.push(g);
        dfs_free(t, allowed, pos, next, cur, max_len, visit);
        cur.pop();
    }
}

/// Nonempty product-one free multisets over `allowed` of length ≤ max_len.
pub fn product_one_free_multisets(t: &AbelianGroupTable, allowed: &[usize], max_len: usize) -> Result<Vec<Vec<usize>>> {
    if t.order() > MAX_TABLE_ORDER {
        return Err(Error::SizeGuard(t.order()));
    }
    let mut allowed = allowed.to_vec();
    allowed.sort_unstable();
    allowed.dedup();
    let mut out = Vec::new();
    dfs_free(t, &allowed, 0, 0, &mut Vec::new(), max_len.min(MAX_SEQUENCE_LEN), &mut |s| out.push(s.to_vec()));
    Ok(out)
}

/// Irreducible product-one multisets over `allowed` of length ≤ max_len.
pub fn irreducible_multisets(t: &AbelianGroupTable, allowed: &[usize], max_len: usize) -> Result<Vec<Vec<usize>>> {
    let mut found = BTreeSet::new();
    for &g in allowed {
        if g == t.identity && max_len >= 1 {
            found.insert(vec![g]);
        }
    }
    if max_len >= 2 {
        for s in product_one_free_multisets(t, allowed, max_len - 1)? {
            let y = t.inverse(t.product(&s));
            if allowed.contains(&y) {
                let mut seq = s.clone();
                seq.push(y);
                seq.sort_unstable();
                found.insert(seq);
            }
        }
    }
    Ok(found.into_iter().collect())
}
