//! Randomized property suites shared by the `properties` test target and the
//! acceptance harness. Every suite runs on a fixed-seed generator.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use sepinv::catalog::{load_entry, CatalogEntry};
use sepinv::gmodule::GModule;
use sepinv::groups::stabilizer;
use sepinv::invariants::{project_weight, trivial_character, weight_space_basis, Grade};
use sepinv::poly::{Monomial, SparsePolynomial};
use sepinv::scalar::{Field, Scalar};
use sepinv::separation::{basis_checksum, orbit, orbits_equal};
use sepinv::zerosum::{is_product_one_free, AbelianGroupTable};

pub type Property = fn(u32) -> Result<(), String>;

/// Name and runner of every property suite.
pub const PROPERTIES: &[(&str, Property)] = &[
    ("action composes as a left action", action_composition),
    ("projector is idempotent and equivariant", projector_laws),
    ("orbit-stabilizer counting", orbit_stabilizer),
    ("invariants are constant on orbits", invariants_constant_on_orbits),
    ("bases and closures are deterministic", determinism),
    ("product-one-free sequences are shorter than D(G)", zero_sum_bound),
    ("cyclotomic and finite-field arithmetic axioms", field_axioms),
];

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn entry(id: &'static str) -> &'static CatalogEntry {
    static CACHE: OnceLock<Vec<(&'static str, CatalogEntry)>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        ["18,4", "24,3", "24,13", "27,3"].into_iter().map(|i| (i, load_entry(i).expect("catalog entry loads"))).collect()
    });
    &all.iter().find(|(i, _)| *i == id).expect("cached entry").1
}

fn poly_strategy(nvars: usize, max_exp: u16) -> impl Strategy<Value = Vec<(Vec<u16>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nvars), -3i64..=3), 1..5)
}

fn build_poly(field: &Field, nvars: usize, terms: &[(Vec<u16>, i64)]) -> SparsePolynomial {
    let mut f = SparsePolynomial::zero(nvars);
    for (e, c) in terms {
        f.add_term(Monomial::new(e.clone()), &field.int(*c));
    }
    f
}

fn check(result: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Result<(), String> {
    result.map_err(|e| e.to_string())
}

fn engine<T>(r: sepinv::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

pub fn action_composition(cases: u32) -> Result<(), String> {
    let e = entry("24,3");
    let m = e.module("V+U").map_err(|e| e.to_string())?;
    let order = m.group().order();
    let n = m.dim();
    check(runner(cases).run(&(poly_strategy(n, 3), 0..order, 0..order), |(terms, g, h)| {
        let f = build_poly(m.field(), n, &terms);
        prop_assert_eq!(m.act(g, &m.act(h, &f)), m.act(m.group().mul(g, h), &f));
        prop_assert_eq!(m.act(0, &f), f);
        Ok(())
    }))
}

pub fn projector_laws(cases: u32) -> Result<(), String> {
    let e = entry("27,3");
    let m = e.module("W").map_err(|e| e.to_string())?;
    let chars = e.characters();
    let order = m.group().order();
    check(runner(cases).run(&(poly_strategy(3, 3), 0..chars.len(), 0..order), |(terms, k, g)| {
        let chi = &chars[k];
        let f = build_poly(m.field(), 3, &terms);
        let p = engine(project_weight(&m, &f, chi))?;
        prop_assert_eq!(&engine(project_weight(&m, &p, chi))?, &p);
        prop_assert!(m.is_relative_invariant(&p, Some(chi)));
        let moved = engine(project_weight(&m, &m.act(g, &f), chi))?;
        prop_assert_eq!(moved, p.scale(&chi.values[m.group().inv(g)]));
        Ok(())
    }))
}

fn point(field: &Field, omega: &Scalar, coords: &[(i64, i64)]) -> Vec<Scalar> {
    coords.iter().map(|&(a, b)| &field.int(a) + &(&field.int(b) * omega)).collect()
}

pub fn orbit_stabilizer(cases: u32) -> Result<(), String> {
    let e = entry("24,13");
    let m = e.module("W1+W2").map_err(|e| e.to_string())?;
    let omega = m.field().zeta_pow(3, 1).map_err(|e| e.to_string())?;
    let order = m.group().order();
    let coords = prop::collection::vec((-2i64..=2, -1i64..=1), m.dim());
    check(runner(cases).run(&(coords, 0..order), |(c, g)| {
        let v = point(m.field(), &omega, &c);
        let o = engine(orbit(&m, &v))?;
        let s = engine(stabilizer(&m, &v))?;
        prop_assert_eq!(o.len() * s.len(), order);
        let w = m.act_on_point(g, &v);
        prop_assert!(engine(orbits_equal(&m, &v, &w))?);
        // Stab(g·v) = g Stab(v) g⁻¹.
        let grp = m.group();
        let conj: BTreeSet<usize> = s.iter().map(|&h| grp.mul(grp.mul(g, h), grp.inv(g))).collect();
        let sw: BTreeSet<usize> = engine(stabilizer(&m, &w))?.into_iter().collect();
        prop_assert_eq!(conj, sw);
        Ok(())
    }))
}

fn invariant_basis(m: &GModule) -> &'static [SparsePolynomial] {
    static BASIS: OnceLock<Vec<SparsePolynomial>> = OnceLock::new();
    BASIS.get_or_init(|| {
        let chi = trivial_character(m);
        (1..=4).flat_map(|d| weight_space_basis(m, &Grade::Total(d), &chi).expect("basis").basis).collect()
    })
}

pub fn invariants_constant_on_orbits(cases: u32) -> Result<(), String> {
    let e = entry("18,4");
    let m = e.module("W1+W2").map_err(|e| e.to_string())?;
    let basis = invariant_basis(&m);
    let order = m.group().order();
    let omega = m.field().zeta_pow(3, 1).map_err(|e| e.to_string())?;
    let coords = prop::collection::vec((-3i64..=3, -2i64..=2), m.dim());
    check(runner(cases).run(&(coords, 0..order), |(c, g)| {
        let v = point(m.field(), &omega, &c);
        let w = m.act_on_point(g, &v);
        for f in basis {
            prop_assert_eq!(engine(m.evaluate(f, &v))?, engine(m.evaluate(f, &w))?);
        }
        Ok(())
    }))
}

pub fn determinism(cases: u32) -> Result<(), String> {
    let ids = ["18,4", "27,3", "24,12"];
    check(runner(cases).run(&(0..ids.len(), 1u32..=4, 0usize..4), |(i, d, k)| {
        let a = engine(load_entry(ids[i]))?;
        let b = engine(load_entry(ids[i]))?;
        let elems = |x: &CatalogEntry| x.group().elements().map(|g| x.group().word(g).to_vec()).collect::<Vec<_>>();
        prop_assert_eq!(elems(&a), elems(&b));
        let name = a.module_names()[0].clone();
        let (ma, mb) = (engine(a.module(&name))?, engine(b.module(&name))?);
        let chars = a.characters();
        let chi = &chars[k % chars.len()];
        let ba = engine(weight_space_basis(&ma, &Grade::Total(d), chi))?.basis;
        let bb = engine(weight_space_basis(&mb, &Grade::Total(d), chi))?.basis;
        prop_assert_eq!(basis_checksum(&ba), basis_checksum(&bb));
        let ja: Vec<String> = ba.iter().map(|f| f.to_json().to_string()).collect();
        let jb: Vec<String> = bb.iter().map(|f| f.to_json().to_string()).collect();
        prop_assert_eq!(ja, jb);
        Ok(())
    }))
}

pub fn zero_sum_bound(cases: u32) -> Result<(), String> {
    let groups: Vec<(AbelianGroupTable, usize)> = [("C3xC3", 5), ("C6", 6), ("C2xC4", 5)]
        .into_iter()
        .map(|(s, d)| (AbelianGroupTable::parse(s).expect("abelian group"), d))
        .collect();
    check(runner(cases).run(&(0..groups.len(), prop::collection::vec(0usize..64, 0..9)), |(i, raw)| {
        let (t, d) = &groups[i];
        let seq: Vec<usize> = raw.iter().map(|x| x % t.order()).collect();
        let free = engine(is_product_one_free(t, &seq))?;
        if seq.len() >= *d {
            prop_assert!(!free);
        }
        if seq.contains(&t.identity()) {
            prop_assert!(!free);
        }
        Ok(())
    }))
}

fn cyclotomic(field: &Field, coeffs: &[i64]) -> Scalar {
    let n = coeffs.len() as i64;
    coeffs.iter().enumerate().fold(field.zero(), |acc, (k, &c)| {
        &acc + &(&field.int(c) * &field.zeta_pow(n as u64, k as i64).expect("root of unity"))
    })
}

pub fn field_axioms(cases: u32) -> Result<(), String> {
    let q12 = Field::cyclotomic(12).map_err(|e| e.to_string())?;
    let gf25: Field = "gf:25".parse().map_err(|e: sepinv::Error| e.to_string())?;
    let elems = gf25.elements().expect("finite field");
    let c = || prop::collection::vec(-3i64..=3, 12);
    check(runner(cases).run(&(c(), c(), c(), 0..25usize, 0..25usize), |(a, b, cc, x, y)| {
        let (a, b, cc) = (cyclotomic(&q12, &a), cyclotomic(&q12, &b), cyclotomic(&q12, &cc));
        prop_assert_eq!(&(&a + &b) * &cc, &(&a * &cc) + &(&b * &cc));
        prop_assert_eq!(&a * &b, &b * &a);
        if !b.is_zero() {
            prop_assert_eq!(&engine(a.div(&b))? * &b, a.clone());
        }
        let (x, y) = (&elems[x], &elems[y]);
        prop_assert_eq!(&(x + y) * x, &(x * x) + &(y * x));
        if !y.is_zero() {
            prop_assert_eq!(&engine(x.div(y))? * y, x.clone());
            prop_assert_eq!(y.pow(24), gf25.one());
        }
        Ok(())
    }))
}
