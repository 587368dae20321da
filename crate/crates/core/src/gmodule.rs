//! KG-modules as direct sums of matrix representations and characters, and the
//! induced action on K[V].
//!
//! Points transform by g·v = ψ(g)v. Variables transform by
//! g·x_j = Σ_i ψ(g⁻¹)_{ji} x_i, so (g·f)(v) = f(ψ(g⁻¹)v), and the coordinate
//! t_χ of a character summand satisfies g·t_χ = χ(g⁻¹)t_χ.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::{Automorphism, Character, Elem, FiniteGroup};
use crate::matrix::Matrix;
use crate::poly::{monomial_count, monomials_of_degree, Monomial, SparsePolynomial};
use crate::scalar::{Field, Scalar};

static MONOMIAL_GUARD: AtomicU64 = AtomicU64::new(5_000_000);

/// Sets the global limit on monomials enumerated per computation.
pub fn set_monomial_guard(limit: u64) {
    MONOMIAL_GUARD.store(limit.max(1), Ordering::Relaxed);
}

pub fn monomial_guard() -> u64 {
    MONOMIAL_GUARD.load(Ordering::Relaxed)
}

pub fn check_guard(count: u128) -> Result<()> {
    let limit = monomial_guard() as u128;
    if count > limit {
        return Err(Error::SizeGuardExceeded { count, limit });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub enum SummandRep {
    Matrices(Vec<Matrix>),
    Character(Character),
}

/// One direct summand: per-element matrices plus variable names.
#[derive(Clone, Debug)]
pub struct Summand {
    pub label: String,
    pub vars: Vec<String>,
    pub rep: SummandRep,
}

impl Summand {
    /// Validates a matrix summand from generator matrices.
    pub fn matrices(group: &FiniteGroup, label: &str, vars: Vec<String>, gen_mats: &[Matrix]) -> Result<Summand> {
        if gen_mats.iter().any(|m| m.dim() != vars.len()) {
            return Err(Error::DimensionMismatch { expected: vars.len(), got: gen_mats[0].dim() });
        }
        let rep = group.extend_representation(gen_mats, label)?;
        Ok(Summand { label: label.into(), vars, rep: SummandRep::Matrices(rep) })
    }

    pub fn character(label: &str, var: &str, chi: Character) -> Summand {
        Summand { label: label.into(), vars: vec![var.into()], rep: SummandRep::Character(chi) }
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn matrix(&self, g: Elem) -> Matrix {
        match &self.rep {
            SummandRep::Matrices(m) => m[g].clone(),
            SummandRep::Character(c) => Matrix::scalar(c.values[g].clone()),
        }
    }

    pub fn trace(&self, g: Elem) -> Scalar {
        match &self.rep {
            SummandRep::Matrices(m) => m[g].trace(),
            SummandRep::Character(c) => c.values[g].clone(),
        }
    }

    pub fn is_character(&self) -> bool {
        matches!(self.rep, SummandRep::Character(_))
    }
}

// Variable substitution for one group element: row j lists (i, a) with
// g·x_j = Σ a x_i.
type Substitution = Vec<Vec<(usize, Scalar)>>;

#[derive(Clone, Debug)]
pub struct GModule {
    group: Arc<FiniteGroup>,
    field: Field,
    summands: Vec<Summand>,
    offsets: Vec<usize>,
    subs: Vec<Substitution>,
    // ψ(g) rows, sparse, for acting on points.
    point_rows: Vec<Substitution>,
    monomial: bool,
}

impl GModule {
    pub fn new(group: Arc<FiniteGroup>, field: Field, summands: Vec<Summand>) -> Result<GModule> {
        if summands.is_empty() {
            return Err(Error::ValidationFailure("module without summands".into()));
        }
        let mut offsets = vec![0];
        for s in &summands {
            offsets.push(offsets.last().unwrap() + s.dim());
        }
        let n = *offsets.last().unwrap();
        let mut subs = Vec::with_capacity(group.order());
        let mut point_rows = Vec::with_capacity(group.order());
        for g in group.elements() {
            let ginv = group.inv(g);
            let mut rows: Substitution = Vec::with_capacity(n);
            let mut prow: Substitution = Vec::with_capacity(n);
            for (s, sm) in summands.iter().enumerate() {
                let off = offsets[s];
                let m = sm.matrix(ginv);
                let p = sm.matrix(g);
                for j in 0..sm.dim() {
                    rows.push(sparse_row(&m, j, off));
                    prow.push(sparse_row(&p, j, off));
                }
            }
            subs.push(rows);
            point_rows.push(prow);
        }
        let monomial = subs.iter().all(|rows| rows.iter().all(|r| r.len() == 1));
        Ok(GModule { group, field, summands, offsets, subs, point_rows, monomial })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn labels(&self) -> Vec<String> {
        self.summands.iter().map(|s| s.label.clone()).collect()
    }

    /// Boundaries of the variable blocks, length summands + 1.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn var_names(&self) -> Vec<String> {
        self.summands.iter().flat_map(|s| s.vars.iter().cloned()).collect()
    }

    /// Summand index of each variable.
    pub fn grading_map(&self) -> Vec<usize> {
        (0..self.summands.len()).flat_map(|s| std::iter::repeat(s).take(self.summands[s].dim())).collect()
    }

    pub fn multidegree(&self, m: &Monomial) -> Vec<u32> {
        m.multidegree(&self.offsets)
    }

    /// Every ψ(g) has one nonzero entry per row, so monomials map to monomials.
    pub fn is_monomial(&self) -> bool {
        self.monomial
    }

    pub fn check_point(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(())
    }

    /// ψ(g)v.
    pub fn act_on_point(&self, g: Elem, v: &[Scalar]) -> Vec<Scalar> {
        self.point_rows[g]
            .iter()
            .map(|row| {
                let mut acc = self.field.zero();
                for (i, a) in row {
                    if !v[*i].is_zero() {
                        acc += &(a * &v[*i]);
                    }
                }
                acc
            })
            .collect()
    }

    /// g·m for a monomial module: a single scaled monomial.
    pub fn act_monomial_single(&self, g: Elem, m: &Monomial) -> (Monomial, Scalar) {
        debug_assert!(self.monomial);
        let rows = &self.subs[g];
        let mut exps = vec![0u16; m.nvars()];
        let mut c = self.field.one();
        for (j, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                let (i, a) = &rows[j][0];
                exps[*i] += e;
                c = &c * &a.pow(e as u64);
            }
        }
        (Monomial::new(exps), c)
    }

    pub fn act_monomial(&self, g: Elem, m: &Monomial) -> SparsePolynomial {
        if self.monomial {
            let (mm, c) = self.act_monomial_single(g, m);
            return SparsePolynomial::term(mm, c);
        }
        let n = self.dim();
        let one = self.field.one();
        let mut acc = SparsePolynomial::constant(n, one.clone());
        for (j, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut lin = SparsePolynomial::zero(n);
            for (i, a) in &self.subs[g][j] {
                lin.add_term(Monomial::var(n, *i), a);
            }
            acc = acc.mul(&lin.pow(e as u32, &one));
        }
        acc
    }

    /// g·f.
    pub fn act(&self, g: Elem, f: &SparsePolynomial) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero(f.nvars());
        for (m, c) in f.terms() {
            if self.monomial {
                let (mm, a) = self.act_monomial_single(g, m);
                out.add_term(mm, &(&a * c));
            } else {
                out.add_scaled(&self.act_monomial(g, m), c);
            }
        }
        out
    }

    pub fn evaluate(&self, f: &SparsePolynomial, v: &[Scalar]) -> Result<Scalar> {
        self.check_point(v)?;
        f.evaluate(v, &self.field)
    }

    /// True iff g·f = χ(g⁻¹)f for every generator g (χ = None means trivial).
    pub fn is_relative_invariant(&self, f: &SparsePolynomial, chi: Option<&Character>) -> bool {
        (0..self.group.gen_count()).all(|i| {
            let g = self.group.generator(i);
            let expected = match chi {
                None => f.clone(),
                Some(c) => f.scale(&c.values[self.group.inv(g)]),
            };
            self.act(g, f) == expected
        })
    }

    /// Monomials of total degree d, ascending.
    pub fn monomials_of_degree(&self, d: u32) -> Result<Vec<Monomial>> {
        check_guard(monomial_count(self.dim(), d))?;
        Ok(monomials_of_degree(self.dim(), d))
    }

    /// Monomials of the given multidegree, ascending.
    pub fn monomials_of_multidegree(&self, alpha: &[u32]) -> Result<Vec<Monomial>> {
        if alpha.len() != self.summands.len() {
            return Err(Error::DimensionMismatch { expected: self.summands.len(), got: alpha.len() });
        }
        let count = alpha
            .iter()
            .zip(&self.summands)
            .fold(1u128, |acc, (&d, s)| acc.saturating_mul(monomial_count(s.dim(), d)));
        check_guard(count)?;
        let mut out = vec![Vec::<u16>::new()];
        for (&d, s) in alpha.iter().zip(&self.summands) {
            let block = monomials_of_degree(s.dim(), d);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    block.iter().map(move |b| {
                        let mut e = prefix.clone();
                        e.extend_from_slice(b.exps());
                        e
                    })
                })
                .collect();
        }
        let mut ms: Vec<Monomial> = out.into_iter().map(Monomial::new).collect();
        ms.sort();
        Ok(ms)
    }

    /// All multidegrees of total degree d, in lexicographic order.
    pub fn multidegrees_of_degree(&self, d: u32) -> Vec<Vec<u32>> {
        compositions(d, self.summands.len())
    }

    /// The module with every summand precomposed with α.
    pub fn twist_by_automorphism(&self, alpha: &Automorphism) -> Result<GModule> {
        let summands = self
            .summands
            .iter()
            .map(|s| {
                let rep = match &s.rep {
                    SummandRep::Matrices(m) => {
                        SummandRep::Matrices(self.group.elements().map(|g| m[alpha.apply(g)].clone()).collect())
                    }
                    SummandRep::Character(c) => SummandRep::Character(Character {
                        label: format!("{}∘α", c.label),
                        values: self.group.elements().map(|g| c.values[alpha.apply(g)].clone()).collect(),
                    }),
                };
                Summand { label: format!("{}∘α", s.label), vars: s.vars.clone(), rep }
            })
            .collect();
        GModule::new(self.group.clone(), self.field.clone(), summands)
    }

    /// A module built from a subset of this module's summands.
    pub fn sub_module(&self, indices: &[usize]) -> Result<GModule> {
        let summands = indices
            .iter()
            .map(|&i| self.summands.get(i).cloned().ok_or_else(|| Error::UnknownEntry(format!("summand {i}"))))
            .collect::<Result<_>>()?;
        GModule::new(self.group.clone(), self.field.clone(), summands)
    }

    /// Per-element traces, for comparing modules up to isomorphism.
    pub fn traces(&self) -> Vec<Scalar> {
        self.group
            .elements()
            .map(|g| self.summands.iter().fold(self.field.zero(), |acc, s| &acc + &s.trace(g)))
            .collect()
    }

    pub fn summand_index(&self, label: &str) -> Option<usize> {
        self.summands.iter().position(|s| s.label == label)
    }
}

fn sparse_row(m: &Matrix, j: usize, off: usize) -> Vec<(usize, Scalar)> {
    m.row(j).iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(i, a)| (off + i, a.clone())).collect()
}

/// Weak compositions of d into k parts, lexicographically descending in the first part.
pub fn compositions(d: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    if k == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in compositions(d - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Multiplies the coordinates of one summand by λ.
pub fn rescale_summand(module: &GModule, v: &[Scalar], summand: usize, lambda: &Scalar) -> Result<Vec<Scalar>> {
    module.check_point(v)?;
    if lambda.is_zero() {
        return Err(Error::ZeroScale);
    }
    let off = module.offsets();
    if summand + 1 >= off.len() {
        return Err(Error::UnknownEntry(format!("summand {summand}")));
    }
    Ok(v.iter()
        .enumerate()
        .map(|(i, x)| if (off[summand]..off[summand + 1]).contains(&i) { x * lambda } else { x.clone() })
        .collect())
}

#[cfg(test)]
mod tests {
    use crate::catalog::load_entry;
    use crate::groups::Automorphism;

    #[test]
    fn action_is_a_left_action() {
        let e = load_entry("24,3").unwrap();
        let m = e.module("V+U").unwrap();
        let f = e.poly("x1^3*t1 + 2*x2*t2^2 - x1*x2 + t0", &m).unwrap();
        let g = m.group();
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(m.act(a, &m.act(b, &f)), m.act(g.mul(a, b), &f));
            }
        }
        assert_eq!(m.act(0, &f), f);
    }

    #[test]
    fn evaluation_is_equivariant() {
        let e = load_entry("24,7").unwrap();
        let m = e.module("W1+W2").unwrap();
        let names = m.var_names();
        let f = e.poly(&format!("{}^2*{} - 3*{}", names[0], names[2], names[3]), &m).unwrap();
        let v = e.point(&["1".into(), "E(4)".into(), "-2".into(), "3".into()]).unwrap();
        for g in m.group().elements() {
            let lhs = m.evaluate(&m.act(g, &f), &v).unwrap();
            let rhs = m.evaluate(&f, &m.act_on_point(m.group().inv(g), &v)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn identity_twist_keeps_traces() {
        let e = load_entry("27,4").unwrap();
        let m = e.module("W1+W2").unwrap();
        let id = Automorphism::identity(m.group());
        assert_eq!(m.twist_by_automorphism(&id).unwrap().traces(), m.traces());
        assert_eq!(m.dim(), 6);
        assert_eq!(m.sub_module(&[1]).unwrap().traces(), e.module("W2").unwrap().traces());
    }

    #[test]
    fn multidegrees_partition_monomials() {
        let e = load_entry("18,4").unwrap();
        let m = e.module("W1+W2").unwrap();
        for d in 0..=5 {
            let total: usize = m.multidegrees_of_degree(d).iter().map(|a| m.monomials_of_multidegree(a).unwrap().len()).sum();
            assert_eq!(total, m.monomials_of_degree(d).unwrap().len());
        }
    }
}
