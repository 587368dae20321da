//! Finite groups realized by faithful matrices, with characters and automorphisms.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Element index. The identity is always 0.
pub type Elem = usize;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    gen_count: usize,
    words: Vec<Vec<usize>>,
    mult: Vec<u32>,
    inv: Vec<u32>,
    faithful: Vec<Matrix>,
    gens: Vec<Elem>,
}

/// BFS closure of the generators under right multiplication.
///
/// Elements are numbered in discovery order, so each word is the shortest,
/// lexicographically first word reaching that element.
pub fn close_group(generators: &[Matrix], order_bound: usize) -> Result<FiniteGroup> {
    let first = generators.first().ok_or_else(|| Error::ValidationFailure("no generators".into()))?;
    let dim = first.dim();
    for (i, g) in generators.iter().enumerate() {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: g.dim() });
        }
        if !g.is_invertible() {
            return Err(Error::NonInvertible(i));
        }
    }
    let field = first.get(0, 0).field();
    let id = Matrix::identity(&field, dim);
    let mut index: HashMap<Matrix, Elem> = HashMap::new();
    let mut elems = vec![id.clone()];
    let mut words = vec![Vec::new()];
    index.insert(id, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for (j, g) in generators.iter().enumerate() {
            let prod = elems[e].mul(g);
            if index.contains_key(&prod) {
                continue;
            }
            if elems.len() >= order_bound {
                return Err(Error::OrderBoundExceeded(order_bound));
            }
            let mut w = words[e].clone();
            w.push(j);
            index.insert(prod.clone(), elems.len());
            queue.push_back(elems.len());
            elems.push(prod);
            words.push(w);
        }
    }
    let order = elems.len();
    let mut mult = vec![0u32; order * order];
    // Right multiplication by a generator is known from the BFS; extend by words.
    let gen_right: Vec<Vec<u32>> = generators
        .iter()
        .map(|g| elems.iter().map(|m| index[&m.mul(g)] as u32).collect())
        .collect();
    for a in 0..order {
        for b in 0..order {
            let mut x = a as u32;
            for &j in &words[b] {
                x = gen_right[j][x as usize];
            }
            mult[a * order + b] = x;
        }
    }
    let mut inv = vec![0u32; order];
    for a in 0..order {
        inv[a] = (0..order).find(|&b| mult[a * order + b] == 0).expect("finite monoid of matrices is a group") as u32;
    }
    let gens = generators.iter().map(|g| index[g]).collect();
    Ok(FiniteGroup { order, gen_count: generators.len(), words, mult, inv, faithful: elems, gens })
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn gen_count(&self) -> usize {
        self.gen_count
    }

    /// Element index of the i-th abstract generator.
    pub fn generator(&self, i: usize) -> Elem {
        self.gens[i]
    }

    pub fn word(&self, g: Elem) -> &[usize] {
        &self.words[g]
    }

    pub fn faithful_matrix(&self, g: Elem) -> &Matrix {
        &self.faithful[g]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mult[a * self.order + b] as Elem
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a] as Elem
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn pow(&self, g: Elem, k: i64) -> Elem {
        let base = if k < 0 { self.inv(g) } else { g };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    pub fn element_order(&self, g: Elem) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Product of generator powers, e.g. [(0, 3), (1, 1)] for a³b.
    pub fn eval_word(&self, word: &[(usize, i64)]) -> Result<Elem> {
        word.iter().try_fold(0, |acc, &(gi, e)| {
            if gi >= self.gen_count {
                return Err(Error::UnknownEntry(format!("generator index {gi}")));
            }
            Ok(self.mul(acc, self.pow(self.gens[gi], e)))
        })
    }

    /// Closure of the given elements, sorted.
    pub fn subgroup_generated(&self, elems: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in elems {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn is_closed(&self, subset: &[Elem]) -> bool {
        let mut member = vec![false; self.order];
        for &s in subset {
            member[s] = true;
        }
        member[0] && subset.iter().all(|&a| subset.iter().all(|&b| member[self.mul(a, b)]))
    }

    /// Elements mapped to the identity by a per-element matrix representation.
    pub fn matrix_kernel(&self, rep: &[Matrix]) -> Vec<Elem> {
        self.elements().filter(|&g| rep[g].is_identity()).collect()
    }

    /// Extends generator matrices along the normal-form words and checks
    /// ρ(g)ρ(h) = ρ(gh) on the whole table.
    pub fn extend_representation(&self, gen_mats: &[Matrix], what: &str) -> Result<Vec<Matrix>> {
        if gen_mats.len() != self.gen_count {
            return Err(Error::DimensionMismatch { expected: self.gen_count, got: gen_mats.len() });
        }
        let field = gen_mats[0].get(0, 0).field();
        let id = Matrix::identity(&field, gen_mats[0].dim());
        let mut rep = Vec::with_capacity(self.order);
        for g in self.elements() {
            let m = self.words[g].iter().fold(id.clone(), |acc, &j| acc.mul(&gen_mats[j]));
            rep.push(m);
        }
        for a in self.elements() {
            for b in self.elements() {
                if rep[a].mul(&rep[b]) != rep[self.mul(a, b)] {
                    return Err(Error::NotAHomomorphism(format!(
                        "{what}: ρ({})ρ({}) ≠ ρ(product)",
                        self.word_string(a),
                        self.word_string(b)
                    )));
                }
            }
        }
        Ok(rep)
    }

    pub fn word_string(&self, g: Elem) -> String {
        if self.words[g].is_empty() {
            return "e".into();
        }
        self.words[g].iter().map(|j| format!("g{j}")).collect::<Vec<_>>().join("*")
    }
}

/// A one-dimensional representation G → K^×.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub label: String,
    pub values: Vec<Scalar>,
}

/// Extends generator values along words and checks χ(gh) = χ(g)χ(h) for all pairs.
pub fn validate_character(group: &FiniteGroup, gen_values: &[Scalar], label: &str) -> Result<Character> {
    if gen_values.len() != group.gen_count {
        return Err(Error::DimensionMismatch { expected: group.gen_count, got: gen_values.len() });
    }
    let one = gen_values[0].field().one();
    let values: Vec<Scalar> = group
        .elements()
        .map(|g| group.words[g].iter().fold(one.clone(), |acc, &j| &acc * &gen_values[j]))
        .collect();
    for a in group.elements() {
        for b in group.elements() {
            if &values[a] * &values[b] != values[group.mul(a, b)] {
                return Err(Error::NotAHomomorphism(format!(
                    "character {label} fails on ({}, {})",
                    group.word_string(a),
                    group.word_string(b)
                )));
            }
        }
    }
    Ok(Character { label: label.to_string(), values })
}

impl Character {
    pub fn trivial(group: &FiniteGroup, one: Scalar) -> Character {
        Character { label: "1".into(), values: vec![one; group.order()] }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Scalar::is_one)
    }

    pub fn kernel(&self) -> Vec<Elem> {
        (0..self.values.len()).filter(|&g| self.values[g].is_one()).collect()
    }

    /// Pointwise product, i.e. the group law of Ĝ.
    pub fn product(&self, other: &Character) -> Character {
        Character {
            label: format!("{}·{}", self.label, other.label),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn inverse(&self) -> Character {
        Character {
            label: format!("{}⁻¹", self.label),
            values: self.values.iter().map(|a| a.inv().expect("character values are units")).collect(),
        }
    }

    pub fn same_values(&self, other: &Character) -> bool {
        self.values == other.values
    }
}

/// A group automorphism given by generator images.
#[derive(Clone, Debug)]
pub struct Automorphism {
    map: Vec<Elem>,
}

impl Automorphism {
    /// Validates that the induced map is a bijective homomorphism.
    pub fn new(group: &FiniteGroup, images: &[Elem]) -> Result<Automorphism> {
        if images.len() != group.gen_count {
            return Err(Error::DimensionMismatch { expected: group.gen_count, got: images.len() });
        }
        let map: Vec<Elem> =
            group.elements().map(|g| group.words[g].iter().fold(0, |acc, &j| group.mul(acc, images[j]))).collect();
        let mut hit = vec![false; group.order];
        for &x in &map {
            hit[x] = true;
        }
        if hit.iter().any(|h| !h) {
            return Err(Error::NotAHomomorphism("generator images do not give a bijection".into()));
        }
        for a in group.elements() {
            for b in group.elements() {
                if map[group.mul(a, b)] != group.mul(map[a], map[b]) {
                    return Err(Error::NotAHomomorphism("generator images violate a relation".into()));
                }
            }
        }
        Ok(Automorphism { map })
    }

    pub fn identity(group: &FiniteGroup) -> Automorphism {
        Automorphism { map: group.elements().collect() }
    }

    pub fn apply(&self, g: Elem) -> Elem {
        self.map[g]
    }
}

/// {g : ψ(g)v = v}.
pub fn stabilizer(module: &GModule, v: &[Scalar]) -> Result<Vec<Elem>> {
    module.check_point(v)?;
    Ok(module.group().elements().filter(|&g| module.act_on_point(g, v) == v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn cyc(n: u32) -> Field {
        Field::cyclotomic(n).unwrap()
    }

    // (C3×C3)⋊C2 through ψ1 ⊕ ψ2.
    fn c3c3c2() -> (Field, Vec<Matrix>) {
        let f = cyc(3);
        let (o, w, w2) = (f.one(), f.zeta_pow(3, 1).unwrap(), f.zeta_pow(3, 2).unwrap());
        let z = f.zero();
        let diag = |a: &Scalar, b: &Scalar| Matrix::from_rows(vec![vec![a.clone(), z.clone()], vec![z.clone(), b.clone()]]).unwrap();
        let swap = Matrix::from_rows(vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]]).unwrap();
        let id = diag(&o, &o);
        let a = Matrix::direct_sum(&[&diag(&w, &w2), &id]);
        let b = Matrix::direct_sum(&[&id, &diag(&w, &w2)]);
        let c = Matrix::direct_sum(&[&swap, &swap]);
        (f, vec![a, b, c])
    }

    #[test]
    fn closure_of_semidirect_product() {
        let (_, gens) = c3c3c2();
        let g = close_group(&gens, 100).unwrap();
        assert_eq!(g.order(), 18);
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
            assert_eq!(g.mul(0, a), a);
        }
        assert!(matches!(close_group(&gens, 10), Err(Error::OrderBoundExceeded(10))));
        let again = close_group(&gens, 100).unwrap();
        assert_eq!(g.mult, again.mult);
        assert_eq!(g.words, again.words);
    }

    #[test]
    fn trivial_group() {
        let g = close_group(&[Matrix::scalar(cyc(1).one())], 5).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn singular_generator() {
        let f = cyc(1);
        assert_eq!(close_group(&[Matrix::scalar(f.zero())], 5).unwrap_err(), Error::NonInvertible(0));
    }

    #[test]
    fn characters_and_kernels() {
        let (f, gens) = c3c3c2();
        let g = close_group(&gens, 100).unwrap();
        let sign = validate_character(&g, &[f.one(), f.one(), f.int(-1)], "sign").unwrap();
        assert_eq!(sign.kernel().len(), 9);
        let bad = validate_character(&g, &[f.zeta_pow(3, 1).unwrap(), f.one(), f.one()], "bad");
        assert!(matches!(bad, Err(Error::NotAHomomorphism(_))));
        let triv = validate_character(&g, &[f.one(), f.one(), f.one()], "1").unwrap();
        assert_eq!(triv.kernel().len(), 18);
    }

    #[test]
    fn automorphism_swapping_factors() {
        let (_, gens) = c3c3c2();
        let g = close_group(&gens, 100).unwrap();
        let alpha = Automorphism::new(&g, &[g.generator(1), g.generator(0), g.generator(2)]).unwrap();
        assert_eq!(alpha.apply(g.generator(0)), g.generator(1));
        assert!(Automorphism::new(&g, &[g.generator(0), g.generator(0), g.generator(2)]).is_err());
    }
}
