//! Relative invariant spaces, the trace-based dimension oracle, generator
//! degree profiles, Hilbert-ideal complements and generating-system assembly
//! for modules with one-dimensional summands.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::groups::Character;
use crate::linalg::Echelon;
use crate::poly::{Monomial, SparsePolynomial};
use crate::scalar::{Field, Scalar};
use crate::zerosum::{irreducible_multisets, product_one_free_multisets, AbelianGroupTable};

/// A total degree or a multidegree (one entry per summand).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Grade {
    Total(u32),
    Multi(Vec<u32>),
}

impl Grade {
    pub fn total(&self) -> u32 {
        match self {
            Grade::Total(d) => *d,
            Grade::Multi(a) => a.iter().sum(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightSpaceBasis {
    pub weight: String,
    pub grade: Grade,
    pub basis: Vec<SparsePolynomial>,
}

impl WeightSpaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn trivial_character(module: &GModule) -> Character {
    Character::trivial(module.group(), module.field().one())
}

/// 1/|G|, refusing characteristics that divide the order.
pub fn inverse_order(module: &GModule) -> Result<Scalar> {
    let order = module.group().order();
    let p = module.field().characteristic();
    if p != 0 && order as u64 % p == 0 {
        return Err(Error::ModularCharacteristic { p, order });
    }
    module.field().int(order as i64).inv()
}

/// P_χ(f) = (1/|G|) Σ_g χ(g)·(g·f).
pub fn project_weight(module: &GModule, f: &SparsePolynomial, chi: &Character) -> Result<SparsePolynomial> {
    let scale = inverse_order(module)?;
    let mut out = SparsePolynomial::zero(f.nvars());
    for g in module.group().elements() {
        out.add_scaled(&module.act(g, f), &chi.values[g]);
    }
    Ok(out.scale(&scale))
}

/// Reduced echelon basis of the weight-χ space in one multidegree cell.
pub fn cell_echelon(module: &GModule, alpha: &[u32], chi: &Character) -> Result<Echelon> {
    let monos = module.monomials_of_multidegree(alpha)?;
    echelon_of_projections(module, &monos, chi)
}

fn echelon_of_projections(module: &GModule, monos: &[Monomial], chi: &Character) -> Result<Echelon> {
    let scale = inverse_order(module)?;
    let mut ech = Echelon::new(module.dim());
    if module.is_monomial() {
        // Projections of one orbit are proportional, so each orbit is projected once.
        let mut seen: HashSet<Monomial> = HashSet::new();
        for m in monos.iter().rev() {
            if seen.contains(m) {
                continue;
            }
            let mut proj = SparsePolynomial::zero(module.dim());
            for g in module.group().elements() {
                let (mm, c) = module.act_monomial_single(g, m);
                proj.add_term(mm.clone(), &(&c * &chi.values[g]));
                seen.insert(mm);
            }
            if !proj.is_zero() {
                ech.insert(&proj.scale(&scale));
            }
        }
    } else {
        for m in monos.iter().rev() {
            let proj = project_weight(module, &SparsePolynomial::term(m.clone(), module.field().one()), chi)?;
            if !proj.is_zero() {
                ech.insert(&proj);
            }
        }
    }
    Ok(ech)
}

/// Canonical basis of the weight-χ space in a degree or multidegree.
pub fn weight_space_basis(module: &GModule, grade: &Grade, chi: &Character) -> Result<WeightSpaceBasis> {
    let cells = match grade {
        Grade::Multi(a) => vec![a.clone()],
        Grade::Total(d) => module.multidegrees_of_degree(*d),
    };
    let bases = cells
        .par_iter()
        .map(|a| cell_echelon(module, a, chi).map(|e| e.basis()))
        .collect::<Result<Vec<_>>>()?;
    let mut basis: Vec<SparsePolynomial> = bases.into_iter().flatten().collect();
    basis.sort_by(|a, b| b.leading().unwrap().0.cmp(a.leading().unwrap().0));
    Ok(WeightSpaceBasis { weight: chi.label.clone(), grade: grade.clone(), basis })
}

/// dim of the weight-χ space from traces alone:
/// (1/|G|) Σ_g χ(g)·tr(g | Sym), with the symmetric-power traces obtained from
/// power sums of ψ(g⁻¹) by Newton's identities.
pub fn dimension_oracle(module: &GModule, grade: &Grade, chi: &Character) -> Result<usize> {
    if let Field::Finite(_) = module.field() {
        return Err(Error::Unsupported("the trace oracle needs characteristic 0".into()));
    }
    let field = module.field();
    let group = module.group();
    let ns = module.summands().len();
    let traces: Vec<Vec<Scalar>> =
        module.summands().iter().map(|s| group.elements().map(|g| s.trace(g)).collect()).collect();
    let top = grade.total() as usize;
    let mut total = field.zero();
    for g in group.elements() {
        let ginv = group.inv(g);
        // p[s][k] = tr ψ_s(g⁻ᵏ), k = 1..=top.
        let mut p = vec![vec![field.zero(); top + 1]; ns];
        let mut x = ginv;
        for k in 1..=top {
            for s in 0..ns {
                p[s][k] = traces[s][x].clone();
            }
            x = group.mul(x, ginv);
        }
        let term = match grade {
            Grade::Total(d) => {
                let summed: Vec<Scalar> =
                    (0..=top).map(|k| (0..ns).fold(field.zero(), |acc, s| &acc + &p[s][k])).collect();
                complete_homogeneous(&summed, *d as usize, field)?
            }
            Grade::Multi(alpha) => {
                if alpha.len() != ns {
                    return Err(Error::DimensionMismatch { expected: ns, got: alpha.len() });
                }
                let mut acc = field.one();
                for (s, &a) in alpha.iter().enumerate() {
                    acc = &acc * &complete_homogeneous(&p[s], a as usize, field)?;
                }
                acc
            }
        };
        total += &(&term * &chi.values[g]);
    }
    let dim = &total * &inverse_order(module)?;
    let q = dim.to_rational().ok_or_else(|| Error::ValidationFailure(format!("oracle value {dim} is irrational")))?;
    if !q.is_integer() || q < num_rational::BigRational::zero() {
        return Err(Error::ValidationFailure(format!("oracle value {q} is not a dimension")));
    }
    use num_traits::ToPrimitive;
    q.to_integer().to_usize().ok_or_else(|| Error::ValidationFailure("oracle overflow".into()))
}

// h_d from power sums p_1..p_d: d·h_d = Σ_{k=1}^{d} p_k h_{d-k}.
fn complete_homogeneous(p: &[Scalar], d: usize, field: &Field) -> Result<Scalar> {
    let mut h = vec![field.one()];
    for m in 1..=d {
        let mut acc = field.zero();
        for k in 1..=m {
            acc += &(&p[k] * &h[m - k]);
        }
        let inv_m = field.ratio(&BigInt::one(), &BigInt::from(m))?;
        h.push(&acc * &inv_m);
    }
    Ok(h[d].clone())
}

/// Indecomposable counts per degree up to a cap, with representatives.
#[derive(Clone, Debug)]
pub struct GeneratorProfile {
    pub cap: u32,
    pub counts: BTreeMap<u32, usize>,
    pub representatives: Vec<(Vec<u32>, SparsePolynomial)>,
}

impl GeneratorProfile {
    pub fn max_degree(&self) -> Option<u32> {
        self.counts.keys().next_back().copied()
    }

    /// Degrees with multiplicity, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        self.counts.iter().flat_map(|(&d, &c)| std::iter::repeat(d).take(c)).collect()
    }
}

fn le(beta: &[u32], alpha: &[u32]) -> bool {
    beta.iter().zip(alpha).all(|(b, a)| b <= a)
}

fn sub(alpha: &[u32], beta: &[u32]) -> Vec<u32> {
    alpha.iter().zip(beta).map(|(a, b)| a - b).collect()
}

// Vector of coefficients of f·h at the pivots of `target`, as a sparse
// polynomial supported on those pivots.
fn restricted_product(f: &SparsePolynomial, h: &SparsePolynomial, pivots: &[Monomial], zero: &Scalar) -> SparsePolynomial {
    let (small, large) = if f.len() <= h.len() { (f, h) } else { (h, f) };
    let mut v = SparsePolynomial::zero(f.nvars());
    for p in pivots {
        let c = small.product_coeff(large, p, zero);
        v.add_term(p.clone(), &c);
    }
    v
}

// Greedy complement of span{g·h : (β, g) ∈ gens, h ∈ lower(α − β)} inside
// `target`; returns the basis elements of `target` outside that span.
fn complement_in_cell(
    target: &Echelon,
    alpha: &[u32],
    gens: &[(Vec<u32>, SparsePolynomial)],
    lower: &dyn Fn(&[u32]) -> Result<Vec<SparsePolynomial>>,
    zero: &Scalar,
) -> Result<Vec<SparsePolynomial>> {
    let pivots: Vec<Monomial> = target.pivots().cloned().collect();
    let full = target.rank();
    let mut span = Echelon::new(target.nvars());
    'outer: for (beta, g) in gens {
        if !le(beta, alpha) {
            continue;
        }
        for h in lower(&sub(alpha, beta))? {
            span.insert(&restricted_product(g, &h, &pivots, zero));
            if span.rank() == full {
                break 'outer;
            }
        }
    }
    let mut out = Vec::new();
    if span.rank() < full {
        for b in target.basis() {
            let unit = SparsePolynomial::term(b.leading().unwrap().0.clone(), zero.field().one());
            if span.insert(&unit) {
                out.push(b);
            }
        }
    }
    Ok(out)
}

/// Invariant-basis cache keyed by multidegree.
struct CellCache<'a> {
    module: &'a GModule,
    chi: Character,
    cells: HashMap<Vec<u32>, Echelon>,
}

impl<'a> CellCache<'a> {
    fn new(module: &'a GModule, chi: Character) -> Self {
        CellCache { module, chi, cells: HashMap::new() }
    }

    fn fill_degree(&mut self, d: u32) -> Result<()> {
        let missing: Vec<Vec<u32>> =
            self.module.multidegrees_of_degree(d).into_iter().filter(|a| !self.cells.contains_key(a)).collect();
        let computed = missing
            .par_iter()
            .map(|a| cell_echelon(self.module, a, &self.chi).map(|e| (a.clone(), e)))
            .collect::<Result<Vec<_>>>()?;
        self.cells.extend(computed);
        Ok(())
    }

    fn basis(&self, a: &[u32]) -> Vec<SparsePolynomial> {
        self.cells.get(a).map(Echelon::basis).unwrap_or_default()
    }
}

/// Counts indecomposable invariants degree by degree, cell by cell.
///
/// The decomposable part of degree d is spanned by products g·h with g a
/// chosen indecomposable of lower degree and h any invariant of the
/// complementary multidegree, which spans the same space as all products of
/// positive-degree invariants.
pub fn generator_profile(module: &GModule, cap: u32) -> Result<GeneratorProfile> {
    if cap == 0 {
        return Err(Error::ValidationFailure("degree cap must be at least 1".into()));
    }
    let zero = module.field().zero();
    let mut cache = CellCache::new(module, trivial_character(module));
    let mut gens: Vec<(Vec<u32>, SparsePolynomial)> = Vec::new();
    let mut counts = BTreeMap::new();
    for d in 1..=cap {
        cache.fill_degree(d)?;
        let cells = module.multidegrees_of_degree(d);
        let found = cells
            .par_iter()
            .map(|alpha| {
                let target = &cache.cells[alpha];
                if target.rank() == 0 {
                    return Ok(Vec::new());
                }
                let lower = |g: &[u32]| Ok(cache.basis(g));
                let reps = complement_in_cell(target, alpha, &gens, &lower, &zero)?;
                Ok(reps.into_iter().map(|r| (alpha.clone(), r)).collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        let new: Vec<_> = found.into_iter().flatten().collect();
        if !new.is_empty() {
            counts.insert(d, new.len());
        }
        gens.extend(new);
    }
    Ok(GeneratorProfile { cap, counts, representatives: gens })
}

/// Basis of a complement of (K[W]^G_+ · K[W]^{G,χ})_d inside K[W]^{G,χ}_d.
pub fn hilbert_complement(module: &GModule, chi: &Character, d: u32) -> Result<WeightSpaceBasis> {
    let gens = if d == 0 { Vec::new() } else { generator_profile(module, d)?.representatives };
    hilbert_complement_with(module, chi, d, &gens)
}

/// As `hilbert_complement`, reusing generators of K[W]^G up to degree d.
pub fn hilbert_complement_with(
    module: &GModule,
    chi: &Character,
    d: u32,
    gens: &[(Vec<u32>, SparsePolynomial)],
) -> Result<WeightSpaceBasis> {
    let zero = module.field().zero();
    let mut basis = Vec::new();
    for alpha in module.multidegrees_of_degree(d) {
        let target = cell_echelon(module, &alpha, chi)?;
        if target.rank() == 0 {
            continue;
        }
        let lower = |g: &[u32]| Ok(cell_echelon(module, g, chi)?.basis());
        basis.extend(complement_in_cell(&target, &alpha, gens, &lower, &zero)?);
    }
    Ok(WeightSpaceBasis { weight: chi.label.clone(), grade: Grade::Total(d), basis })
}

/// Whether a homogeneous weight-χ relative invariant lies in the span of
/// products of the given invariant generators with lower weight-χ invariants.
pub fn is_decomposable(
    module: &GModule,
    chi: &Character,
    f: &SparsePolynomial,
    gens: &[(Vec<u32>, SparsePolynomial)],
) -> Result<bool> {
    let zero = module.field().zero();
    let mut parts: BTreeMap<Vec<u32>, SparsePolynomial> = BTreeMap::new();
    for (m, c) in f.terms() {
        parts.entry(module.multidegree(m)).or_insert_with(|| SparsePolynomial::zero(f.nvars())).add_term(m.clone(), c);
    }
    for (alpha, part) in parts {
        let target = cell_echelon(module, &alpha, chi)?;
        if !target.contains(&part) {
            return Err(Error::CheckFailure(format!("component {alpha:?} is not a weight-{} invariant", chi.label)));
        }
        let pivots: Vec<Monomial> = target.pivots().cloned().collect();
        let mut span = Echelon::new(target.nvars());
        for (beta, g) in gens {
            // The cofactor must have positive degree, so β < α strictly.
            if !le(beta, &alpha) || *beta == alpha {
                continue;
            }
            for h in cell_echelon(module, &sub(&alpha, beta), chi)?.basis() {
                span.insert(&restricted_product(g, &h, &pivots, &zero));
            }
        }
        let mut restricted = SparsePolynomial::zero(f.nvars());
        for p in &pivots {
            if let Some(c) = part.coeff(p) {
                restricted.add_term(p.clone(), c);
            }
        }
        if !span.contains(&restricted) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Output of the generating-system assembly for V = W ⊕ U.
#[derive(Clone, Debug)]
pub struct AssembledGenerators {
    pub cap: u32,
    /// (origin set "A" | "B" | "C", polynomial over all variables of V).
    pub generators: Vec<(String, SparsePolynomial)>,
    /// Some candidate of degree cap + 1 exists, so the list is cut off.
    pub truncated: bool,
}

impl AssembledGenerators {
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.generators.iter().filter_map(|(_, p)| p.degree()).collect();
        d.sort_unstable();
        d
    }
}

fn embed_poly(f: &SparsePolynomial, var_map: &[usize], nvars: usize) -> SparsePolynomial {
    let mut out = SparsePolynomial::zero(nvars);
    for (m, c) in f.terms() {
        let mut e = vec![0u16; nvars];
        for (i, &x) in m.exps().iter().enumerate() {
            e[var_map[i]] = x;
        }
        out.add_term(Monomial::new(e), c);
    }
    out
}

/// A (generators of K[W]^G) ∪ B (t-monomials of irreducible product-one
/// sequences) ∪ C (complement elements of weight χ_S⁻¹ times t_S for
/// product-one free S), up to degree `cap`. Candidates are generated up to
/// cap + 1 only to detect truncation.
pub fn assemble_vu_generators(module: &GModule, cap: u32) -> Result<AssembledGenerators> {
    let n = module.dim();
    let offsets = module.offsets().to_vec();
    let w_idx: Vec<usize> = (0..module.summands().len()).filter(|&i| !module.summands()[i].is_character()).collect();
    let u_idx: Vec<usize> = (0..module.summands().len()).filter(|&i| module.summands()[i].is_character()).collect();
    let probe = cap + 1;
    let mut out = Vec::new();
    let mut truncated = false;

    let w_map: Vec<usize> = w_idx.iter().flat_map(|&i| offsets[i]..offsets[i + 1]).collect();
    let w_module = if w_idx.is_empty() { None } else { Some(module.sub_module(&w_idx)?) };
    let w_gens = match &w_module {
        Some(w) => generator_profile(w, probe)?.representatives,
        None => Vec::new(),
    };
    for (_, g) in &w_gens {
        if g.degree().unwrap() > cap {
            truncated = true;
        } else {
            out.push(("A".to_string(), embed_poly(g, &w_map, n)));
        }
    }

    if !u_idx.is_empty() {
        let chars: Vec<Character> = u_idx
            .iter()
            .map(|&i| match &module.summands()[i].rep {
                crate::gmodule::SummandRep::Character(c) => c.clone(),
                _ => unreachable!(),
            })
            .collect();
        let (table, pos) = AbelianGroupTable::from_characters(&chars, module.field().one())?;
        // Table element → U summand variables carrying it.
        let t_monomial = |seq: &[usize]| -> SparsePolynomial {
            let mut e = vec![0u16; n];
            for &x in seq {
                let k = pos.iter().position(|&p| p == x).unwrap();
                e[offsets[u_idx[k]]] += 1;
            }
            SparsePolynomial::term(Monomial::new(e), module.field().one())
        };
        let mut allowed = pos.clone();
        allowed.sort_unstable();
        allowed.dedup();
        for seq in irreducible_multisets(&table, &allowed, probe as usize)? {
            if seq.len() as u32 > cap {
                truncated = true;
            } else {
                out.push(("B".to_string(), t_monomial(&seq)));
            }
        }
        if let Some(w) = &w_module {
            let mut complements: HashMap<(usize, u32), Vec<SparsePolynomial>> = HashMap::new();
            for seq in product_one_free_multisets(&table, &allowed, probe as usize)? {
                let target = table.inverse(table.product(&seq));
                let chi = table_character(&table, target, &chars, &pos, module)?;
                for e in 1..=(probe - seq.len() as u32) {
                    let key = (target, e);
                    if !complements.contains_key(&key) {
                        let c = hilbert_complement_with(w, &chi, e, &w_gens)?.basis;
                        complements.insert(key, c);
                    }
                    for h in &complements[&key] {
                        let f = embed_poly(h, &w_map, n).mul(&t_monomial(&seq));
                        if f.degree().unwrap() > cap {
                            truncated = true;
                        } else {
                            out.push(("C".to_string(), f));
                        }
                    }
                }
            }
        }
    }
    for (_, f) in &out {
        if !module.is_relative_invariant(f, None) {
            return Err(Error::ValidationFailure("assembled generator is not invariant".into()));
        }
    }
    out.sort_by(|a, b| a.1.degree().cmp(&b.1.degree()).then_with(|| a.0.cmp(&b.0)));
    Ok(AssembledGenerators { cap, generators: out, truncated })
}

// The character of G corresponding to a table element, as a product of inputs.
fn table_character(
    table: &AbelianGroupTable,
    target: usize,
    chars: &[Character],
    pos: &[usize],
    module: &GModule,
) -> Result<Character> {
    // Breadth-first search for a word in the inputs reaching `target`.
    let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut queue = std::collections::VecDeque::from([table.identity()]);
    let mut seen = HashSet::from([table.identity()]);
    while let Some(x) = queue.pop_front() {
        for (k, &p) in pos.iter().enumerate() {
            let y = table.op(x, p);
            if seen.insert(y) {
                prev.insert(y, (x, k));
                queue.push_back(y);
            }
        }
    }
    let mut chi = trivial_character(module);
    let mut cur = target;
    while cur != table.identity() {
        let (x, k) = *prev.get(&cur).ok_or_else(|| Error::ValidationFailure("character not reachable".into()))?;
        chi = chi.product(&chars[k]);
        cur = x;
    }
    chi.label = table.label(target).to_string();
    Ok(chi)
}

/// Rational integer check used by tests and reports.
pub fn is_integral(s: &Scalar) -> bool {
    s.to_rational().is_some_and(|q| q.is_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_entry;
    use crate::zerosum::{irreducible_multisets, AbelianGroupTable};

    #[test]
    fn character_coordinate_has_its_own_weight() {
        let e = load_entry("27,3").unwrap();
        let chi = e.character("(1,ω)").unwrap();
        let m = e.module("U(1,ω)").unwrap();
        let t = SparsePolynomial::var(1, 0, m.field().one());
        let b = weight_space_basis(&m, &Grade::Total(1), &chi).unwrap();
        assert_eq!(b.basis, vec![t.clone()]);
        assert!(m.is_relative_invariant(&t, Some(&chi)));
        assert_eq!(weight_space_basis(&m, &Grade::Total(1), &chi.inverse()).unwrap().dim(), 0);
        for g in m.group().elements() {
            assert_eq!(m.act(g, &t), t.scale(&chi.values[m.group().inv(g)]));
        }
    }

    #[test]
    fn heisenberg_cubic_invariants() {
        let e = load_entry("27,3").unwrap();
        let m = e.module("W").unwrap();
        let chi = trivial_character(&m);
        let b = weight_space_basis(&m, &Grade::Total(3), &chi).unwrap();
        assert_eq!(b.dim(), 2);
        let mut span = Echelon::new(3);
        for f in &b.basis {
            assert!(m.is_relative_invariant(f, None));
            span.insert(f);
        }
        assert!(span.contains(&e.poly("x1^3 + x2^3 + x3^3", &m).unwrap()));
        assert!(span.contains(&e.poly("x1*x2*x3", &m).unwrap()));
        assert_eq!(weight_space_basis(&m, &Grade::Total(0), &chi).unwrap().dim(), 1);
    }

    #[test]
    fn oracle_matches_constructed_bases() {
        let e = load_entry("24,3").unwrap();
        let m = e.module("V").unwrap();
        for chi in e.characters() {
            for d in 0..=12 {
                let built = weight_space_basis(&m, &Grade::Total(d), &chi).unwrap().dim();
                assert_eq!(dimension_oracle(&m, &Grade::Total(d), &chi).unwrap(), built, "{} degree {d}", chi.label);
            }
        }
        let trivial = trivial_character(&m);
        assert_eq!(weight_space_basis(&m, &Grade::Total(10), &trivial).unwrap().dim(), 0);
    }

    #[test]
    fn multigraded_oracle_matches() {
        let e = load_entry("18,4").unwrap();
        let m = e.module("W1+W2").unwrap();
        let chi = trivial_character(&m);
        for d in 1..=6 {
            for alpha in m.multidegrees_of_degree(d) {
                let grade = Grade::Multi(alpha.clone());
                let built = weight_space_basis(&m, &grade, &chi).unwrap().dim();
                assert_eq!(dimension_oracle(&m, &grade, &chi).unwrap(), built, "{alpha:?}");
            }
        }
    }

    #[test]
    fn character_module_generators_are_minimal_product_one_sequences() {
        let e = load_entry("27,3").unwrap();
        let labels: Vec<String> = e.characters().iter().map(|c| format!("U{}", c.label)).collect();
        let m = e.module_from_labels(&labels).unwrap();
        let profile = generator_profile(&m, 6).unwrap();
        let chars = e.characters();
        let (table, pos) = AbelianGroupTable::from_characters(&chars, m.field().one()).unwrap();
        let mut allowed = pos.clone();
        allowed.sort_unstable();
        let mut expected: BTreeMap<u32, usize> = BTreeMap::new();
        for s in irreducible_multisets(&table, &allowed, 6).unwrap() {
            *expected.entry(s.len() as u32).or_default() += 1;
        }
        assert_eq!(profile.counts, expected);
        assert_eq!(profile.max_degree(), Some(5));
    }

    #[test]
    fn decomposability_of_named_invariants() {
        let e = load_entry("20,3").unwrap();
        let m = e.module("W").unwrap();
        let chi = trivial_character(&m);
        let gens = generator_profile(&m, 6).unwrap().representatives;
        let f1f6 = e.poly("$f1*$f6", &m).unwrap();
        assert!(is_decomposable(&m, &chi, &f1f6, &gens).unwrap());
        assert!(!is_decomposable(&m, &chi, &e.poly("$f9", &m).unwrap(), &gens).unwrap());
        assert!(!is_decomposable(&m, &chi, &e.poly("$f4", &m).unwrap(), &gens).unwrap());
        let not_invariant = e.poly("x1^2", &m).unwrap();
        assert!(matches!(is_decomposable(&m, &chi, &not_invariant, &gens), Err(Error::CheckFailure(_))));
    }

    #[test]
    fn complement_of_the_hilbert_ideal() {
        let e = load_entry("20,3").unwrap();
        let m = e.module("W").unwrap();
        let trivial = trivial_character(&m);
        // K[W]^G_+ · K[W]^G contains all of K[W]^G_+.
        for d in 1..=4 {
            assert_eq!(hilbert_complement(&m, &trivial, d).unwrap().dim(), 0);
        }
        let chi = e.character("-1").unwrap();
        // No weight -1 invariant in degree 0 or 1, so degree 2 is all complement.
        let c = hilbert_complement(&m, &chi, 2).unwrap();
        assert_eq!(c.dim(), weight_space_basis(&m, &Grade::Total(2), &chi).unwrap().dim());
        let mut span = Echelon::new(4);
        for f in &c.basis {
            span.insert(f);
        }
        assert!(span.contains(&e.poly("$h0", &m).unwrap()));
    }

    #[test]
    fn assembled_system_covers_minimal_generators() {
        let e = load_entry("20,3").unwrap();
        let m = e.module("W+U(-1)").unwrap();
        let cap = 7;
        let out = assemble_vu_generators(&m, cap).unwrap();
        let profile = generator_profile(&m, cap).unwrap();
        for (d, &c) in &profile.counts {
            let assembled = out.degrees().iter().filter(|&&x| x == *d).count();
            assert!(assembled >= c, "degree {d}: {assembled} assembled, {c} needed");
        }
        assert!(out.generators.iter().any(|(o, g)| o == "B" && g.degree() == Some(2)));
    }

    #[test]
    fn modular_characteristic_is_rejected() {
        let f: Field = "gf:3".parse().unwrap();
        let e = crate::catalog::load_entry_over("24,12", &f).unwrap();
        let m = e.module("V").unwrap();
        let chi = trivial_character(&m);
        assert!(matches!(
            weight_space_basis(&m, &Grade::Total(2), &chi),
            Err(Error::ModularCharacteristic { p: 3, order: 24 })
        ));
    }
}
